//! Energy-sweep drivers: transmission spectra with resonance detection,
//! bound-state root finding, and the engine-scaling benchmark.

use std::time::Instant;

use crate::analytical::{self, N_MAX};
use crate::error::SolverError;
use crate::iterative::input_impedance_iterative;
use crate::params::{region_params, EPS_BAND};
use crate::profile::{PotentialProfile, Region};
use crate::units::UnitSystem;

/// Which impedance engine drives a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytical,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpacing {
    Linear,
}

/// A sampling grid over energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGrid {
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
    pub spacing: GridSpacing,
}

impl EnergyGrid {
    pub fn linear(start: f64, stop: f64, samples: usize) -> Result<Self, SolverError> {
        if !start.is_finite() || !stop.is_finite() || start >= stop {
            return Err(SolverError::InvalidGrid {
                reason: format!("need finite start < stop, got [{start}, {stop}]"),
            });
        }
        if samples < 2 {
            return Err(SolverError::InvalidGrid {
                reason: format!("need at least 2 samples, got {samples}"),
            });
        }
        Ok(EnergyGrid { start, stop, samples, spacing: GridSpacing::Linear })
    }

    /// Grid points, nudged off any potential value of `profile` so no sample
    /// sits on a band edge.
    pub fn points(&self, profile: &PotentialProfile) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.samples - 1) as f64;
        let vs = profile.potential_values();
        (0..self.samples)
            .map(|i| {
                let mut e = self.start + step * i as f64;
                if vs.iter().any(|v| (e - v).abs() < EPS_BAND) {
                    e += 2.0 * EPS_BAND;
                }
                e
            })
            .collect()
    }
}

/// A detected transmission peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub energy: f64,
    pub transmission: f64,
    /// Full width at half maximum by linear inverse interpolation; `None`
    /// when a half-maximum crossing is outside the swept window.
    pub fwhm: Option<f64>,
}

/// A sampled transmission spectrum. Samples where the engine reported an
/// error (impedance poles) are recorded as NaN gaps rather than aborting.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub transmission: Vec<f64>,
    pub resonances: Vec<Resonance>,
}

/// Bound-state energies and the matching residual at each root.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateSet {
    /// Strictly increasing, each below both lead potentials.
    pub energies: Vec<f64>,
    /// |F(E)| at each reported root.
    pub residuals: Vec<f64>,
    /// Scan-resolution advisories (near-degenerate pairs etc.).
    pub warnings: Vec<String>,
}

fn sample_transmission(
    profile: &PotentialProfile,
    engine: Engine,
    energy: f64,
    units: &UnitSystem,
) -> Result<f64, SolverError> {
    match engine {
        Engine::Analytical => analytical::transmission(profile, energy, units),
        Engine::Iterative => {
            let z = input_impedance_iterative(profile, energy, units)?;
            let z_in = region_params(energy, profile.left_lead_potential, units).z;
            let r = z.reflection_coefficient(z_in);
            let t = 1.0 - r.norm_sqr();
            Ok(if (-1e-12..0.0).contains(&t) {
                0.0
            } else if t > 1.0 && t <= 1.0 + 1e-12 {
                1.0
            } else {
                t
            })
        }
    }
}

#[cfg(feature = "parallel")]
fn map_points<F: Fn(f64) -> f64 + Sync>(points: &[f64], f: F) -> Vec<f64> {
    use rayon::prelude::*;
    points.par_iter().map(|e| f(*e)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_points<F: Fn(f64) -> f64 + Sync>(points: &[f64], f: F) -> Vec<f64> {
    points.iter().map(|e| f(*e)).collect()
}

fn sweep_impl(
    profile: &PotentialProfile,
    grid: &EnergyGrid,
    engine: Engine,
    units: &UnitSystem,
    sequential: bool,
) -> Result<Spectrum, SolverError> {
    let lead_top = profile.left_lead_potential.max(profile.right_lead_potential);
    if grid.start <= lead_top {
        return Err(SolverError::EvanescentLead { energy: grid.start });
    }
    let energies = grid.points(profile);
    let eval = |e: f64| sample_transmission(profile, engine, e, units).unwrap_or(f64::NAN);
    let transmission: Vec<f64> = if sequential {
        energies.iter().map(|e| eval(*e)).collect()
    } else {
        map_points(&energies, eval)
    };
    let resonances = detect_resonances(profile, engine, units, &energies, &transmission);
    Ok(Spectrum { energies, transmission, resonances })
}

/// Samples T(E) over the grid with the chosen engine and detects resonance
/// peaks (local maximum, 3-point parabolic refinement, FWHM by inverse
/// interpolation). The whole grid must lie above both lead potentials.
pub fn sweep_transmission(
    profile: &PotentialProfile,
    grid: &EnergyGrid,
    engine: Engine,
    units: &UnitSystem,
) -> Result<Spectrum, SolverError> {
    sweep_impl(profile, grid, engine, units, false)
}

/// Single-threaded sweep with identical output, kept for benchmarking the
/// data-parallel path against.
pub fn sweep_transmission_seq(
    profile: &PotentialProfile,
    grid: &EnergyGrid,
    engine: Engine,
    units: &UnitSystem,
) -> Result<Spectrum, SolverError> {
    sweep_impl(profile, grid, engine, units, true)
}

fn detect_resonances(
    profile: &PotentialProfile,
    engine: Engine,
    units: &UnitSystem,
    energies: &[f64],
    transmission: &[f64],
) -> Vec<Resonance> {
    let mut peaks = Vec::new();
    for i in 1..energies.len().saturating_sub(1) {
        let (tl, tc, tr) = (transmission[i - 1], transmission[i], transmission[i + 1]);
        if tl.is_nan() || tc.is_nan() || tr.is_nan() {
            continue;
        }
        if tc > tl && tc > tr {
            // vertex of the parabola through the three samples
            let denom = tl - 2.0 * tc + tr;
            let h = energies[i + 1] - energies[i];
            let mut e_peak = energies[i];
            if denom.abs() > 1e-300 {
                let offset = 0.5 * (tl - tr) / denom;
                if offset.abs() <= 1.0 {
                    e_peak = energies[i] + offset * h;
                }
            }
            let refined = sample_transmission(profile, engine, e_peak, units).ok();
            let (energy, t_peak) = match refined {
                Some(t) if t >= tc => (e_peak, t),
                _ => (energies[i], tc),
            };
            let fwhm = fwhm_at(energies, transmission, i, t_peak);
            peaks.push(Resonance { energy, transmission: t_peak, fwhm });
        }
    }
    peaks.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    peaks
}

fn fwhm_at(energies: &[f64], transmission: &[f64], peak: usize, t_peak: f64) -> Option<f64> {
    let half = t_peak / 2.0;
    let cross = |mut i: usize, step: isize| -> Option<f64> {
        loop {
            let j = i as isize + step;
            if j < 0 || j as usize >= energies.len() {
                return None;
            }
            let j = j as usize;
            if transmission[j].is_nan() {
                return None;
            }
            if transmission[j] <= half {
                let (t0, t1) = (transmission[i], transmission[j]);
                let frac = (t0 - half) / (t0 - t1);
                return Some(energies[i] + frac * (energies[j] - energies[i]));
            }
            i = j;
        }
    };
    let left = cross(peak, -1)?;
    let right = cross(peak, 1)?;
    Some(right - left)
}

/// Scans the bound-state matching function over `[e_min, e_max]`, brackets
/// its sign changes and bisects each bracket down to 1e-12 in energy.
/// `e_max` must lie below both lead potentials. Roots where the residual
/// stays large (impedance poles masquerading as crossings) are discarded.
pub fn find_bound_states(
    profile: &PotentialProfile,
    e_min: f64,
    e_max: f64,
    scan_points: usize,
    units: &UnitSystem,
) -> Result<BoundStateSet, SolverError> {
    let lead_bottom = profile.left_lead_potential.min(profile.right_lead_potential);
    if e_max >= lead_bottom {
        return Err(SolverError::PropagatingLead { energy: e_max });
    }
    if !e_min.is_finite() || e_min >= e_max {
        return Err(SolverError::InvalidGrid {
            reason: format!("need e_min < e_max, got [{e_min}, {e_max}]"),
        });
    }
    let scan_points = scan_points.max(3);
    let step = (e_max - e_min) / (scan_points - 1) as f64;
    let vs = profile.potential_values();
    let scan = |e: f64| -> Option<f64> {
        let mut e = e;
        if vs.iter().any(|v| (e - v).abs() < EPS_BAND) {
            e += 2.0 * EPS_BAND;
        }
        analytical::bound_residual_scan(profile, e, units).ok()
    };
    let points: Vec<f64> = (0..scan_points).map(|i| e_min + step * i as f64).collect();
    let values: Vec<Option<f64>> = eval_scan(&points, &scan);

    let mut energies = Vec::new();
    let mut residuals = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..scan_points - 1 {
        let (Some(fa), Some(fb)) = (values[i], values[i + 1]) else { continue };
        if fa == 0.0 {
            // a scan point landed exactly on a root
            if let Ok(f) = analytical::bound_state_residual(profile, points[i], units) {
                if f.norm() <= 1e-9 {
                    energies.push(points[i]);
                    residuals.push(f.norm());
                }
            }
            continue;
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (points[i], points[i + 1], fa);
            while hi - lo > 1e-13 {
                let mid = 0.5 * (lo + hi);
                let Some(fm) = scan(mid) else { break };
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            let root = 0.5 * (lo + hi);
            let Ok(f) = analytical::bound_state_residual(profile, root, units) else { continue };
            let fmag = f.norm();
            if fmag <= 1e-9 {
                energies.push(root);
                residuals.push(fmag);
            }
            // otherwise a pole of Z crossed through; not a state
        }
    }
    for w in energies.windows(2) {
        if w[1] - w[0] <= 2.0 * step {
            warnings.push(format!(
                "roots at {:.6e} and {:.6e} are within two scan steps; raise scan_points to resolve possible finer splitting",
                w[0], w[1]
            ));
        }
    }
    Ok(BoundStateSet { energies, residuals, warnings })
}

#[cfg(feature = "parallel")]
fn eval_scan<F: Fn(f64) -> Option<f64> + Sync>(points: &[f64], f: &F) -> Vec<Option<f64>> {
    use rayon::prelude::*;
    points.par_iter().map(|e| f(*e)).collect()
}

#[cfg(not(feature = "parallel"))]
fn eval_scan<F: Fn(f64) -> Option<f64> + Sync>(points: &[f64], f: &F) -> Vec<Option<f64>> {
    points.iter().map(|e| f(*e)).collect()
}

/// One row of the engine-scaling comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub regions: usize,
    /// Median wall time per evaluation, nanoseconds.
    pub iterative_ns: f64,
    /// `None` when N exceeds the sign-sum cap and the arm was skipped.
    pub analytical_ns: Option<f64>,
    pub ratio: Option<f64>,
}

/// Deterministic alternating barrier/well cascade used for timing runs.
pub fn benchmark_profile(regions: usize) -> PotentialProfile {
    let regions = (0..regions)
        .map(|j| {
            let (v, w) = if j % 2 == 0 { (4.0, 0.6) } else { (-3.0, 0.9) };
            Region { potential: v, width: w }
        })
        .collect();
    PotentialProfile::new(0.0, regions, 0.0)
}

/// Batch length one timing sample aims for, long enough to swamp timer
/// granularity and scheduler blips.
const SAMPLE_NS: f64 = 300_000.0;

fn eval_once(profile: &PotentialProfile, analytical: bool, energy: f64, units: &UnitSystem) {
    if analytical {
        let z = analytical::input_impedance_analytical_seq(profile, energy, units).unwrap();
        std::hint::black_box(z);
    } else {
        let z = input_impedance_iterative(profile, energy, units).unwrap();
        std::hint::black_box(z);
    }
}

fn sample_ns(
    profile: &PotentialProfile,
    analytical: bool,
    inner: usize,
    energy: f64,
    units: &UnitSystem,
) -> f64 {
    let t = Instant::now();
    for _ in 0..inner {
        eval_once(profile, analytical, energy, units);
    }
    t.elapsed().as_nanos() as f64 / inner as f64
}

fn calibrate_inner(profile: &PotentialProfile, analytical: bool, energy: f64, units: &UnitSystem) -> usize {
    // warm up, then estimate a single evaluation from a short burst
    eval_once(profile, analytical, energy, units);
    let burst = sample_ns(profile, analytical, 8, energy, units).max(1.0);
    ((SAMPLE_NS / burst).ceil() as usize).clamp(1, 4_000_000)
}

/// Times both engines on the deterministic cascade family, single-threaded,
/// and reports median wall time per evaluation plus the analytical/iterative
/// ratio. Sizes above the sign-sum cap skip the analytical arm.
///
/// Samples are taken round-robin across all sizes so slow drifts (frequency
/// scaling, cache warmup) spread evenly instead of biasing one size.
pub fn benchmark(sizes: &[usize], repetitions: usize, units: &UnitSystem) -> Vec<BenchRow> {
    let energy = 1.3;
    struct Arm {
        profile: PotentialProfile,
        analytical: bool,
        inner: usize,
        samples: Vec<f64>,
    }
    let mut arms: Vec<Arm> = Vec::new();
    for &n in sizes {
        let profile = benchmark_profile(n);
        let inner = calibrate_inner(&profile, false, energy, units);
        arms.push(Arm { profile: profile.clone(), analytical: false, inner, samples: Vec::new() });
        if n <= N_MAX {
            let inner = calibrate_inner(&profile, true, energy, units);
            arms.push(Arm { profile, analytical: true, inner, samples: Vec::new() });
        }
    }
    let repetitions = repetitions.max(1);
    // one throwaway round, then the measured rounds
    for round in 0..=repetitions {
        for arm in arms.iter_mut() {
            let ns = sample_ns(&arm.profile, arm.analytical, arm.inner, energy, units);
            if round > 0 {
                arm.samples.push(ns);
            }
        }
    }
    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    sizes
        .iter()
        .map(|&n| {
            let iterative_ns = arms
                .iter()
                .find(|a| a.profile.num_regions() == n && !a.analytical)
                .map(|a| median(a.samples.clone()))
                .unwrap();
            let analytical_ns = arms
                .iter()
                .find(|a| a.profile.num_regions() == n && a.analytical)
                .map(|a| median(a.samples.clone()));
            BenchRow {
                regions: n,
                iterative_ns,
                analytical_ns,
                ratio: analytical_ns.map(|a| a / iterative_ns),
            }
        })
        .collect()
}
