//! O(N) impedance engine: the cascade as a product of 2x2 matrices applied
//! to the (1, 1) seed, with per-step normalization for overflow safety.

use num_complex::Complex64;

use crate::error::SolverError;
use crate::params::{CascadeParams, RegionParams};
use crate::profile::PotentialProfile;
use crate::units::UnitSystem;

/// Threshold below which the final state-vector denominator is treated as a
/// pole of Z (a node of the wave function at the evaluation plane).
const POLE_EPS: f64 = 1e-300;

/// Complex quantum wave impedance Z = (hbar / i m) psi' / psi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impedance {
    pub value: Complex64,
}

impl Impedance {
    /// Reflection coefficient (Z - z) / (Z + z) against a lead of
    /// characteristic impedance `lead_z`.
    pub fn reflection_coefficient(&self, lead_z: Complex64) -> Complex64 {
        (self.value - lead_z) / (self.value + lead_z)
    }
}

/// Homogeneous coordinates of the running impedance: only the ratio
/// top/bottom is meaningful, any nonzero common rescaling is an equivalence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub top: Complex64,
    pub bottom: Complex64,
}

impl StateVector {
    /// The (1, 1) seed encoding Z = z_load at the load boundary.
    pub fn seed() -> Self {
        StateVector { top: Complex64::new(1.0, 0.0), bottom: Complex64::new(1.0, 0.0) }
    }

    /// Rescales so the larger-magnitude entry has modulus 1.
    pub fn normalized(self) -> Self {
        let m = self.top.norm().max(self.bottom.norm());
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        StateVector { top: self.top / m, bottom: self.bottom / m }
    }
}

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub fn apply(&self, v: StateVector) -> StateVector {
        StateVector {
            top: self.a * v.top + self.b * v.bottom,
            bottom: self.c * v.top + self.d * v.bottom,
        }
    }
}

/// The cascade step for one region:
/// `[[z_{i-1} ch(g l), -z_i sh(g l)], [-z_{i-1} sh(g l), z_i ch(g l)]]`
/// with g, z_i from `region` and z_{i-1} from `inner` (the load-side
/// neighbour).
pub fn step_matrix(inner: &RegionParams, region: &RegionParams, width: f64) -> Mat2 {
    let w = region.gamma * width;
    let ch = w.cosh();
    let sh = w.sinh();
    Mat2 {
        a: inner.z * ch,
        b: -region.z * sh,
        c: -inner.z * sh,
        d: region.z * ch,
    }
}

/// Same step with both entries scaled by e^{-Re(g l)}; the state vector is
/// normalized per step anyway, and the scaled hyperbolics never overflow no
/// matter how opaque the region is.
fn apply_step_scaled(inner_z: Complex64, region: &RegionParams, width: f64, v: StateVector) -> StateVector {
    let w = region.gamma * width;
    let x = w.re.abs();
    // ch(w) e^{-x} = (e^{i Im w} + e^{-2x - i Im w}) / 2 for Re w = x >= 0
    let ep = Complex64::new(0.0, w.im).exp();
    let em = Complex64::new(-2.0 * x, -w.im).exp();
    let ch = (ep + em) * 0.5;
    let sh = (ep - em) * 0.5;
    StateVector {
        top: inner_z * ch * v.top - region.z * sh * v.bottom,
        bottom: -inner_z * sh * v.top + region.z * ch * v.bottom,
    }
}

/// Low-level cascade evaluation: transforms `load_z` through `regions`
/// (load-first order) and returns z_last * top/bottom. Exposed so arbitrary
/// complex (gamma, z, l) triples can be driven directly in tests.
pub fn cascade_impedance(
    load_z: Complex64,
    regions: &[(RegionParams, f64)],
) -> Result<Impedance, SolverError> {
    let mut v = StateVector::seed();
    let mut inner_z = load_z;
    for (params, width) in regions {
        v = apply_step_scaled(inner_z, params, *width, v).normalized();
        inner_z = params.z;
    }
    let tail_z = regions.last().map(|(p, _)| p.z).unwrap_or(load_z);
    finish(v, tail_z)
}

fn finish(v: StateVector, tail_z: Complex64) -> Result<Impedance, SolverError> {
    if v.bottom.norm() < POLE_EPS {
        return Err(SolverError::DegenerateState { magnitude: v.bottom.norm() });
    }
    let value = tail_z * v.top / v.bottom;
    if !value.is_finite() {
        return Err(SolverError::DegenerateState { magnitude: v.bottom.norm() });
    }
    Ok(Impedance { value })
}

/// Input impedance Z(x_N) of the profile at energy E, looking into the
/// cascade from the left lead with the outgoing/decaying boundary condition
/// in the right (load) lead. For N = 0 this is the load impedance itself.
pub fn input_impedance_iterative(
    profile: &PotentialProfile,
    energy: f64,
    units: &UnitSystem,
) -> Result<Impedance, SolverError> {
    let cascade = CascadeParams::at(profile, energy, units);
    cascade_from_params(&cascade)
}

pub(crate) fn cascade_from_params(cascade: &CascadeParams) -> Result<Impedance, SolverError> {
    if cascade.regions.is_empty() {
        return Ok(Impedance { value: cascade.load_seed });
    }
    cascade_impedance(cascade.load_seed, &cascade.regions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::region_params;
    use crate::profile::Region;

    const NAT: UnitSystem = UnitSystem::Natural;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn zero_width_step_is_identity_on_impedance() {
        // l -> 0: matrix -> diag(z_{i-1}, z_i), so Z = z_i * z_{i-1}/z_i = z_{i-1}
        let inner = region_params(2.0, 0.0, &NAT);
        let reg = region_params(2.0, 1.0, &NAT);
        let z = cascade_impedance(inner.z, &[(reg, 1e-300)]).unwrap();
        assert!(rel(z.value, inner.z) < 1e-12);
        let m = step_matrix(&inner, &reg, 1e-300);
        assert!((m.b.norm() + m.c.norm()) < 1e-290);
        assert!(rel(m.a, inner.z) < 1e-12 && rel(m.d, reg.z) < 1e-12);
    }

    #[test]
    fn matched_uniform_medium_passes_the_load_through() {
        // z_{i-1} = z_i = z: (1,1) -> z (ch - sh, ch - sh), ratio 1, Z = z
        let p = region_params(0.5, 1.0, &NAT);
        let m = step_matrix(&p, &p, 0.8);
        let v = m.apply(StateVector::seed());
        assert!(rel(v.top, v.bottom) < 1e-12);
        let z = cascade_impedance(p.z, &[(p, 0.8)]).unwrap();
        assert!(rel(z.value, p.z) < 1e-12);
    }

    #[test]
    fn bare_step_returns_load_impedance() {
        let profile = PotentialProfile::new(0.0, vec![], 0.0);
        let z = input_impedance_iterative(&profile, 1.7, &NAT).unwrap();
        let expect = region_params(1.7, 0.0, &NAT).z;
        assert!(rel(z.value, expect) < 1e-15);
    }

    #[test]
    fn uniform_profile_transforms_to_itself() {
        let regions = vec![Region::new(0.0, 1.3).unwrap(), Region::new(0.0, 0.4).unwrap()];
        let profile = PotentialProfile::new(0.0, regions, 0.0);
        for e in [0.3, 1.0, 5.5] {
            let z = input_impedance_iterative(&profile, e, &NAT).unwrap();
            let lead = region_params(e, 0.0, &NAT).z;
            assert!(rel(z.value, lead) < 1e-12);
        }
    }

    #[test]
    fn single_barrier_pinned_regression_value() {
        // V=1, l=1, E=0.5, leads at 0; value frozen from the independent
        // transfer-matrix computation.
        let profile = PotentialProfile::new(0.0, vec![Region::new(1.0, 1.0).unwrap()], 0.0);
        let z = input_impedance_iterative(&profile, 0.5, &NAT).unwrap();
        let pinned = Complex64::new(0.649_262_803_441_149_8, 1.256_366_909_810_879_6);
        assert!(rel(z.value, pinned) < 1e-12, "Z = {}", z.value);
    }

    #[test]
    fn two_region_cascade_matches_expanded_fraction() {
        // The N = 2 product expanded by hand:
        // Z = z2 (z0 z1 c1 c2 - z1^2 s1 c2 - z1 z2 c1 s2 + z0 z2 s1 s2)
        //        / (z1 z2 c1 c2 - z0 z2 s1 c2 - z0 z1 c1 s2 + z1^2 s1 s2)
        let e = 1.9;
        let (v1, l1) = (3.1, 0.7);
        let (v2, l2) = (-0.4, 1.2);
        let p0 = region_params(e, 0.0, &NAT);
        let p1 = region_params(e, v1, &NAT);
        let p2 = region_params(e, v2, &NAT);
        let (z0, z1, z2) = (p0.z, p1.z, p2.z);
        let (c1, s1) = ((p1.gamma * l1).cosh(), (p1.gamma * l1).sinh());
        let (c2, s2) = ((p2.gamma * l2).cosh(), (p2.gamma * l2).sinh());
        let expect = z2 * (z0 * z1 * c1 * c2 - z1 * z1 * s1 * c2 - z1 * z2 * c1 * s2
            + z0 * z2 * s1 * s2)
            / (z1 * z2 * c1 * c2 - z0 * z2 * s1 * c2 - z0 * z1 * c1 * s2 + z1 * z1 * s1 * s2);
        let profile = PotentialProfile::new(
            0.0,
            vec![Region::new(v1, l1).unwrap(), Region::new(v2, l2).unwrap()],
            0.0,
        );
        let z = input_impedance_iterative(&profile, e, &NAT).unwrap();
        assert!(rel(z.value, expect) < 1e-12);
    }

    #[test]
    fn node_at_the_evaluation_plane_reports_a_pole() {
        // a z = 0 region column zeroes the denominator exactly
        let degenerate = RegionParams { gamma: Complex64::new(0.0, 0.0), z: Complex64::new(0.0, 0.0) };
        match cascade_impedance(Complex64::new(2.0, 0.0), &[(degenerate, 1.0)]) {
            Err(SolverError::DegenerateState { .. }) => {}
            other => panic!("expected DegenerateState, got {other:?}"),
        }
    }

    #[test]
    fn deep_tunneling_stays_finite() {
        // 10 regions, total Re(gamma l) = 500
        let regions = vec![Region::new(26.0, 10.0).unwrap(); 10];
        let profile = PotentialProfile::new(0.0, regions, 0.0);
        let z = input_impedance_iterative(&profile, 1.0, &NAT).unwrap();
        assert!(z.value.is_finite());
    }
}
