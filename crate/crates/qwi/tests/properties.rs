//! Property tests for the engine invariants: scaling equivalence of the
//! state vector, the explicit two-region fraction, reciprocity, unitarity
//! and overflow safety.

use num_complex::Complex64;
use proptest::prelude::*;

use qwi::{
    input_impedance_analytical, input_impedance_iterative, iterative::cascade_impedance,
    region_params, step_matrix, transmission, PotentialProfile, Region, RegionParams, StateVector,
    UnitSystem,
};

const NAT: UnitSystem = UnitSystem::Natural;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn region_strategy() -> impl Strategy<Value = (f64, f64)> {
    (-10.0..10.0f64, 0.05..2.0f64)
}

fn profile_strategy(max_n: usize) -> impl Strategy<Value = PotentialProfile> {
    prop::collection::vec(region_strategy(), 1..=max_n).prop_map(|rs| {
        let regions = rs
            .into_iter()
            .map(|(v, l)| Region::new(v, l).unwrap())
            .collect();
        PotentialProfile::new(0.0, regions, 0.0)
    })
}

fn energy_for(profile: &PotentialProfile, e: f64) -> Option<f64> {
    profile
        .potential_values()
        .iter()
        .all(|v| (e - v).abs() > 1e-6)
        .then_some(e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Rescaling the running state vector by arbitrary nonzero scalars
    /// between steps leaves the final impedance untouched.
    #[test]
    fn normalization_invariance(
        profile in profile_strategy(6),
        e in 0.01..15.0f64,
        scales in prop::collection::vec((0.2..5.0f64, -3.0..3.0f64), 6),
    ) {
        prop_assume!(energy_for(&profile, e).is_some());
        let mut v = StateVector::seed();
        let mut inner = region_params(e, profile.right_lead_potential, &NAT);
        for (i, r) in profile.regions().iter().enumerate() {
            let params = region_params(e, r.potential, &NAT);
            v = step_matrix(&inner, &params, r.width).apply(v);
            let (m, ph) = scales[i % scales.len()];
            let s = Complex64::from_polar(m, ph);
            v = StateVector { top: v.top * s, bottom: v.bottom * s };
            inner = params;
        }
        // keep away from impedance poles, where any route loses digits
        prop_assume!(v.bottom.norm() > 1e-3 * v.top.norm().max(v.bottom.norm()));
        let z_manual = inner.z * v.top / v.bottom;
        let z_engine = input_impedance_iterative(&profile, e, &NAT).unwrap();
        prop_assert!(rel(z_manual, z_engine.value) < 1e-12,
            "manual {} engine {}", z_manual, z_engine.value);
    }

    /// The engine reproduces the explicit two-region fraction for fully
    /// random complex region parameters, not just physical ones.
    #[test]
    fn two_region_closed_form(
        z0r in -3.0..3.0f64, z0i in -3.0..3.0f64,
        z1r in -3.0..3.0f64, z1i in -3.0..3.0f64,
        z2r in -3.0..3.0f64, z2i in -3.0..3.0f64,
        g1r in 0.0..1.5f64, g1i in 0.0..1.5f64,
        g2r in 0.0..1.5f64, g2i in 0.0..1.5f64,
        l1 in 0.05..2.0f64, l2 in 0.05..2.0f64,
    ) {
        let z0 = Complex64::new(z0r, z0i);
        let z1 = Complex64::new(z1r, z1i);
        let z2 = Complex64::new(z2r, z2i);
        prop_assume!(z0.norm() > 0.1 && z1.norm() > 0.1 && z2.norm() > 0.1);
        let p1 = RegionParams { gamma: Complex64::new(g1r, g1i), z: z1 };
        let p2 = RegionParams { gamma: Complex64::new(g2r, g2i), z: z2 };
        let (c1, s1) = ((p1.gamma * l1).cosh(), (p1.gamma * l1).sinh());
        let (c2, s2) = ((p2.gamma * l2).cosh(), (p2.gamma * l2).sinh());
        let num = z0 * z1 * c1 * c2 - z1 * z1 * s1 * c2 - z1 * z2 * c1 * s2 + z0 * z2 * s1 * s2;
        let den = z1 * z2 * c1 * c2 - z0 * z2 * s1 * c2 - z0 * z1 * c1 * s2 + z1 * z1 * s1 * s2;
        prop_assume!(den.norm() > 1e-6 * num.norm().max(1.0));
        let expect = z2 * num / den;
        let got = cascade_impedance(z0, &[(p1, l1), (p2, l2)]).unwrap();
        prop_assert!(rel(got.value, expect) < 1e-12, "got {} expect {}", got.value, expect);
    }

    /// T through a profile and through its left-right mirror agree when the
    /// leads match.
    #[test]
    fn reciprocity(profile in profile_strategy(8), e in 0.01..15.0f64) {
        prop_assume!(energy_for(&profile, e).is_some());
        let t = transmission(&profile, e, &NAT).unwrap();
        let t_mirror = transmission(&profile.mirrored(), e, &NAT).unwrap();
        prop_assert!((t - t_mirror).abs() < 1e-9, "T {} mirrored {}", t, t_mirror);
    }

    /// Transmission stays inside [0, 1] and the input reflection stays
    /// inside the unit disk for propagating leads.
    #[test]
    fn unitarity_and_passivity(profile in profile_strategy(8), e in 0.01..15.0f64) {
        prop_assume!(energy_for(&profile, e).is_some());
        let t = transmission(&profile, e, &NAT).unwrap();
        prop_assert!((0.0..=1.0).contains(&t), "T = {}", t);
        let z = input_impedance_iterative(&profile, e, &NAT).unwrap();
        let z_in = region_params(e, profile.left_lead_potential, &NAT).z;
        prop_assert!(z.reflection_coefficient(z_in).norm() <= 1.0 + 1e-12);
    }

    /// Engine equivalence as a property, over the full mixed ensemble
    /// including evanescent loads.
    #[test]
    fn engines_agree(profile in profile_strategy(12), e in -12.0..15.0f64) {
        prop_assume!(energy_for(&profile, e).is_some());
        let za = input_impedance_analytical(&profile, e, &NAT).unwrap();
        let zi = input_impedance_iterative(&profile, e, &NAT).unwrap();
        prop_assert!(rel(za.value, zi.value) < 1e-10);
    }
}

#[test]
fn overflow_safety_up_to_total_2000() {
    // Re(gamma l) = 200 per region across 10 regions
    let regions = vec![Region::new(401.0, 10.0).unwrap(); 10];
    let profile = PotentialProfile::new(0.0, regions, 0.0);
    let z = input_impedance_iterative(&profile, 1.0, &NAT).unwrap();
    assert!(z.value.is_finite(), "Z = {}", z.value);
    let za = input_impedance_analytical(&profile, 1.0, &NAT).unwrap();
    assert!(za.value.is_finite());
    let t = transmission(&profile, 1.0, &NAT).unwrap();
    assert!((0.0..=1.0).contains(&t));
}
