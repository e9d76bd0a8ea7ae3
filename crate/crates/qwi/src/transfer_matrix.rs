//! Independent cross-check engine: standard plane-wave transfer matrices.
//!
//! Everything here is written from wave-function coefficients, sharing
//! nothing with the impedance recursion beyond the unit constants, so
//! agreement between the two is a genuine two-route check.
//!
//! In each medium psi = A e^{i k (x - a)} + B e^{-i k (x - a)} with
//! k = principal sqrt(2m (E - V)) / hbar (i kappa in a classically forbidden
//! medium, so the A component is the rightward-travelling or
//! rightward-decaying one). A profile's matrix maps (A, B) in the right lead
//! referenced at the rightmost interface to (A, B) in the left lead
//! referenced at the leftmost interface.

use num_complex::Complex64;

use crate::error::SolverError;
use crate::iterative::Impedance;
use crate::profile::PotentialProfile;
use crate::units::UnitSystem;

/// 2x2 coefficient-transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub entries: [[Complex64; 2]; 2],
}

impl TransferMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        TransferMatrix { entries: [[one, zero], [zero, one]] }
    }

    /// Matching matrix at an interface between media with wavenumbers
    /// `k_left` and `k_right`, mapping right-side (A, B) to left-side (A, B),
    /// both referenced at the interface.
    pub fn interface(k_left: Complex64, k_right: Complex64) -> Self {
        let rho = k_right / k_left;
        let half = Complex64::new(0.5, 0.0);
        let p = half * (Complex64::new(1.0, 0.0) + rho);
        let m = half * (Complex64::new(1.0, 0.0) - rho);
        TransferMatrix { entries: [[p, m], [m, p]] }
    }

    /// Re-references coefficients from the right edge to the left edge of a
    /// region of width `width` and wavenumber `k`.
    pub fn propagation(k: Complex64, width: f64) -> Self {
        let phase = Complex64::new(0.0, 1.0) * k * width;
        let zero = Complex64::new(0.0, 0.0);
        TransferMatrix { entries: [[(-phase).exp(), zero], [zero, phase.exp()]] }
    }

    /// self * rhs (apply rhs first).
    pub fn compose(&self, rhs: &TransferMatrix) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TransferMatrix { entries: out }
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.entries[0][0] * v[0] + self.entries[0][1] * v[1],
            self.entries[1][0] * v[0] + self.entries[1][1] * v[1],
        ]
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }
}

/// Principal wavenumber sqrt(2m (E - V)) / hbar, i kappa when E < V.
fn wavenumber(energy: f64, potential: f64, units: &UnitSystem) -> Complex64 {
    let k_sq = units.two_m_over_hbar_sq() * (energy - potential);
    if k_sq >= 0.0 {
        Complex64::new(k_sq.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-k_sq).sqrt())
    }
}

/// Full coefficient-transfer matrix of the profile: right lead to left lead,
/// both lead interfaces included. det = k_load / k_input.
pub fn profile_matrix(profile: &PotentialProfile, energy: f64, units: &UnitSystem) -> TransferMatrix {
    // spatial order, left to right: reversed region list
    let k_in = wavenumber(energy, profile.left_lead_potential, units);
    let k_out = wavenumber(energy, profile.right_lead_potential, units);
    let mut m = TransferMatrix::identity();
    // build from the right: start with the interface to the load lead
    let mut k_right = k_out;
    for region in profile.regions() {
        let k = wavenumber(energy, region.potential, units);
        let step = TransferMatrix::propagation(k, region.width)
            .compose(&TransferMatrix::interface(k, k_right));
        m = step.compose(&m);
        k_right = k;
    }
    TransferMatrix::interface(k_in, k_right).compose(&m)
}

/// Left-lead (A, B) for the solution with unit outgoing/decaying amplitude
/// in the load lead, plus the two lead wavenumbers.
fn solve(profile: &PotentialProfile, energy: f64, units: &UnitSystem) -> ([Complex64; 2], Complex64, Complex64) {
    let m = profile_matrix(profile, energy, units);
    let coeffs = m.apply([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let k_in = wavenumber(energy, profile.left_lead_potential, units);
    let k_out = wavenumber(energy, profile.right_lead_potential, units);
    (coeffs, k_in, k_out)
}

/// Transmission and reflection probabilities for a wave incident from the
/// left lead, flux-normalized (k_load / k_input weighting when the leads
/// differ). Errors unless both leads propagate at E.
pub fn transmission_reflection(
    profile: &PotentialProfile,
    energy: f64,
    units: &UnitSystem,
) -> Result<(f64, f64), SolverError> {
    if energy <= profile.left_lead_potential || energy <= profile.right_lead_potential {
        return Err(SolverError::EvanescentLead { energy });
    }
    let ([a, b], k_in, k_out) = solve(profile, energy, units);
    let t = (k_out.re / k_in.re) / a.norm_sqr();
    let r = b.norm_sqr() / a.norm_sqr();
    Ok((t, r))
}

/// Transmission probability by plane-wave matching.
pub fn transmission(
    profile: &PotentialProfile,
    energy: f64,
    units: &UnitSystem,
) -> Result<f64, SolverError> {
    transmission_reflection(profile, energy, units).map(|(t, _)| t)
}

/// Quantum wave impedance (hbar / i m) psi' / psi at the leftmost interface,
/// built from the wave-function coefficients with the outgoing/decaying load
/// boundary condition.
pub fn impedance(
    profile: &PotentialProfile,
    energy: f64,
    units: &UnitSystem,
) -> Result<Impedance, SolverError> {
    let ([a, b], k_in, _) = solve(profile, energy, units);
    let psi = a + b;
    if psi.norm() < 1e-300 * (a.norm() + b.norm()) {
        return Err(SolverError::DegenerateState { magnitude: psi.norm() });
    }
    // psi' = i k (A - B); Z = (hbar / i m) psi'/psi = (hbar k / m)(A - B)/(A + B)
    let value = units.hbar_over_m() * k_in * (a - b) / psi;
    if !value.is_finite() {
        return Err(SolverError::DegenerateState { magnitude: psi.norm() });
    }
    Ok(Impedance { value })
}
