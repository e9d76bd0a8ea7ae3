//! Quantum wave impedance solver for 1-D piecewise-constant potentials.
//!
//! A potential is modelled as a cascade of constant regions between two
//! semi-infinite leads. The complex impedance Z(x) = (hbar / i m) psi'/psi
//! transforms across the cascade like a transmission-line impedance, and the
//! crate evaluates it two independent ways:
//!
//! * [`iterative`]: the O(N) cascade of 2x2 matrix steps with per-step
//!   normalization, safe for arbitrarily deep tunneling;
//! * [`analytical`]: the closed form as a ratio of sums over all 2^N sign
//!   assignments, exposing how each region enters the result, at O(2^N) cost.
//!
//! The two must agree to rounding on every profile, and both are checked
//! against a plane-wave transfer-matrix solver ([`transfer_matrix`]) that
//! shares no code with the impedance path. On top of the engines sit
//! transmission spectra with resonance detection, bound-state root finding
//! and an engine-scaling benchmark ([`spectrum`]), plus explicit
//! double-barrier closed forms ([`double_barrier`]).
//!
//! The `parallel` feature (on by default) runs energy sweeps and the 2^N
//! term reduction on a rayon pool; summation order is fixed either way, so
//! results are reproducible bit for bit.

pub mod analytical;
pub mod double_barrier;
mod error;
pub mod iterative;
mod params;
mod profile;
pub mod spectrum;
pub mod transfer_matrix;
pub mod units;

pub use analytical::{
    bound_state_residual, enumerate_terms, input_impedance_analytical,
    input_impedance_analytical_seq, transmission, AnalyticalTerm, SignVector, N_MAX,
};
pub use double_barrier::{
    impedance_asymmetric, impedance_symmetric, AsymmetricDoubleBarrier, SymmetricDoubleBarrier,
};
pub use error::SolverError;
pub use iterative::{input_impedance_iterative, step_matrix, Impedance, Mat2, StateVector};
pub use params::{region_params, RegionParams, EPS_BAND};
pub use profile::{PotentialProfile, Region};
pub use spectrum::{
    benchmark, find_bound_states, sweep_transmission, sweep_transmission_seq, BenchRow,
    BoundStateSet, EnergyGrid, Engine, GridSpacing, Resonance, Spectrum,
};
pub use units::UnitSystem;
