//! Per-region propagation constants and characteristic impedances.

use num_complex::Complex64;

use crate::profile::PotentialProfile;
use crate::units::UnitSystem;

/// Band-edge guard: energies within this distance of a region potential are
/// offset before evaluating gamma, removing the gamma = 0 degeneracy that
/// would collapse the cascade matrices.
pub const EPS_BAND: f64 = 1e-12;

/// Propagation constant gamma_j and characteristic impedance z_j of one
/// region at a given energy.
///
/// gamma = principal sqrt(2m (V - E)) / hbar: real positive under a barrier
/// (E < V), i k with k > 0 in an allowed region (E > V). In both cases
/// z = -i (hbar/m) gamma, so a propagating region has real z = hbar k / m
/// and an evanescent one has purely imaginary z with negative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionParams {
    pub gamma: Complex64,
    pub z: Complex64,
}

impl RegionParams {
    /// True when E is above the region potential (gamma imaginary, z real).
    pub fn is_propagating(&self) -> bool {
        self.gamma.im > 0.0
    }
}

/// Evaluates gamma_j and z_j for a region at potential `potential` and
/// particle energy `energy`. Total: the band-edge degeneracy |E - V| <
/// `EPS_BAND` is resolved by shifting E away from V on the side it came from
/// (E = V counts as the barrier side).
pub fn region_params(energy: f64, potential: f64, units: &UnitSystem) -> RegionParams {
    let mut diff = potential - energy;
    if diff.abs() < EPS_BAND {
        diff = if energy > potential { -EPS_BAND } else { EPS_BAND };
    }
    let g_sq = units.two_m_over_hbar_sq() * diff;
    let gamma = if g_sq >= 0.0 {
        Complex64::new(g_sq.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-g_sq).sqrt())
    };
    let z = Complex64::new(0.0, -units.hbar_over_m()) * gamma;
    RegionParams { gamma, z }
}

/// Everything the engines need about a profile at one energy: region
/// parameters in load-first order plus the boundary values fixed by the
/// scattering state.
#[derive(Debug, Clone)]
pub(crate) struct CascadeParams {
    /// Impedance of the outgoing (propagating lead) or decaying (evanescent
    /// lead) solution in the right lead: +z_0 when E is above the load lead,
    /// -z_0 when below. This seeds the recursion and the sign-sum.
    pub load_seed: Complex64,
    /// (params, width) per region, load-first.
    pub regions: Vec<(RegionParams, f64)>,
    /// z_N prefactor: the last region's impedance, or the load seed at N = 0.
    pub tail_z: Complex64,
    /// Left (input) lead parameters; z_out in the bound-state condition.
    pub input: RegionParams,
    pub input_propagating: bool,
    pub load_propagating: bool,
}

impl CascadeParams {
    pub(crate) fn at(profile: &PotentialProfile, energy: f64, units: &UnitSystem) -> Self {
        let load = region_params(energy, profile.right_lead_potential, units);
        let load_propagating = energy > profile.right_lead_potential;
        let load_seed = if load_propagating { load.z } else { -load.z };
        let regions: Vec<(RegionParams, f64)> = profile
            .regions()
            .iter()
            .map(|r| (region_params(energy, r.potential, units), r.width))
            .collect();
        let tail_z = regions.last().map(|(p, _)| p.z).unwrap_or(load_seed);
        let input = region_params(energy, profile.left_lead_potential, units);
        let input_propagating = energy > profile.left_lead_potential;
        CascadeParams {
            load_seed,
            regions,
            tail_z,
            input,
            input_propagating,
            load_propagating,
        }
    }
}
