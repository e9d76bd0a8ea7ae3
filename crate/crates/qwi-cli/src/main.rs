//! `qwi` — quantum wave impedance solver for piecewise-constant potentials.
//!
//! Subcommands: `transmission`, `impedance`, `bound-states`, `bench`.
//! Exit codes: 0 success, 2 input error, 3 computational error.

mod output;
mod profile_file;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwi::spectrum::{benchmark, find_bound_states, sweep_transmission, EnergyGrid};
use qwi::{
    input_impedance_analytical, input_impedance_iterative, SolverError, UnitSystem,
};

#[derive(Parser)]
#[command(name = "qwi", version, about = "1-D quantum scattering on piecewise-constant potentials via wave impedances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineFlag {
    Analytical,
    Iterative,
}

impl From<EngineFlag> for qwi::Engine {
    fn from(e: EngineFlag) -> Self {
        match e {
            EngineFlag::Analytical => qwi::Engine::Analytical,
            EngineFlag::Iterative => qwi::Engine::Iterative,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitsFlag {
    Natural,
    /// nm/eV with an effective mass; same spelling as profile files
    #[value(name = "nano_ev", alias = "nano-ev")]
    NanoEv,
}

#[derive(Args)]
struct GridArgs {
    /// First energy of the sweep
    #[arg(long, allow_hyphen_values = true)]
    e_start: f64,
    /// Last energy of the sweep
    #[arg(long, allow_hyphen_values = true)]
    e_stop: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the transmission probability T(E) and detect resonances
    Transmission {
        /// Profile definition file
        profile: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Impedance engine driving the sweep
        #[arg(long, value_enum, default_value = "analytical")]
        engine: EngineFlag,
        /// CSV output path; a `.resonances.json` sidecar lands next to it
        #[arg(long)]
        output: PathBuf,
    },
    /// Sweep the input impedance Z(E) seen from the left lead
    Impedance {
        profile: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "analytical")]
        engine: EngineFlag,
        /// CSV output path
        #[arg(long)]
        output: PathBuf,
    },
    /// Locate bound-state energies below the leads
    BoundStates {
        profile: PathBuf,
        /// Bottom of the search window
        #[arg(long, allow_hyphen_values = true)]
        e_min: f64,
        /// Top of the search window (must stay below both leads)
        #[arg(long, allow_hyphen_values = true)]
        e_max: f64,
        /// Sign-change scan resolution
        #[arg(long, default_value_t = 2000)]
        scan_points: usize,
        /// JSON output path
        #[arg(long)]
        output: PathBuf,
    },
    /// Time the O(N) cascade engine against the O(2^N) sign-sum engine
    Bench {
        /// Comma-separated cascade sizes, e.g. 4,8,12
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,12,16")]
        sizes: Vec<usize>,
        /// Timing samples per size (median is reported)
        #[arg(long, default_value_t = 9)]
        repetitions: usize,
        /// Unit system for the synthetic cascade
        #[arg(long, value_enum, default_value = "natural")]
        units: UnitsFlag,
        /// m*/m_e when `--units nano-ev`
        #[arg(long, default_value_t = 1.0)]
        effective_mass: f64,
    },
}

enum CliError {
    /// Bad inputs: files, schema, ranges. Exit 2.
    Input(String),
    /// The request was well-formed but the computation cannot produce a
    /// result (evanescent leads, engine limits). Exit 3.
    Compute(String),
}

fn main() {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli));
    let code = match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(CliError::Input(msg))) => {
            eprintln!("error: {msg}");
            2
        }
        Ok(Err(CliError::Compute(msg))) => {
            eprintln!("error: {msg}");
            3
        }
        Err(_) => {
            eprintln!("error: internal failure");
            3
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Transmission { profile, grid, engine, output } => {
            cmd_transmission(&profile, &grid, engine, &output)
        }
        Command::Impedance { profile, grid, engine, output } => {
            cmd_impedance(&profile, &grid, engine, &output)
        }
        Command::BoundStates { profile, e_min, e_max, scan_points, output } => {
            cmd_bound_states(&profile, e_min, e_max, scan_points, &output)
        }
        Command::Bench { sizes, repetitions, units, effective_mass } => {
            cmd_bench(&sizes, repetitions, units, effective_mass)
        }
    }
}

fn load_profile(path: &Path) -> Result<profile_file::ParsedProfile, CliError> {
    profile_file::load(path).map_err(CliError::Input)
}

fn make_grid(grid: &GridArgs) -> Result<EnergyGrid, CliError> {
    EnergyGrid::linear(grid.e_start, grid.e_stop, grid.samples)
        .map_err(|e| CliError::Input(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_transmission(
    profile_path: &Path,
    grid_args: &GridArgs,
    engine: EngineFlag,
    output: &Path,
) -> Result<(), CliError> {
    let parsed = load_profile(profile_path)?;
    let grid = make_grid(grid_args)?;
    let spectrum = sweep_transmission(&parsed.profile, &grid, engine.into(), &parsed.units)
        .map_err(|e| match e {
            SolverError::EvanescentLead { .. } => CliError::Compute(format!(
                "{e}; the sweep window must lie above both lead potentials"
            )),
            other => CliError::Compute(other.to_string()),
        })?;
    write_file(output, &output::transmission_csv(&parsed.units_label, &spectrum))?;
    write_file(
        &output::sidecar_path(output),
        &output::resonances_json(&parsed.units_label, &spectrum),
    )?;
    Ok(())
}

fn cmd_impedance(
    profile_path: &Path,
    grid_args: &GridArgs,
    engine: EngineFlag,
    output: &Path,
) -> Result<(), CliError> {
    let parsed = load_profile(profile_path)?;
    let grid = make_grid(grid_args)?;
    let evaluate = |e: f64| match engine {
        EngineFlag::Analytical => input_impedance_analytical(&parsed.profile, e, &parsed.units),
        EngineFlag::Iterative => input_impedance_iterative(&parsed.profile, e, &parsed.units),
    };
    // refuse outright if the engine cannot handle the profile at all
    if let Err(e @ SolverError::ProfileTooLarge { .. }) = evaluate(grid.start) {
        return Err(CliError::Compute(e.to_string()));
    }
    let rows: Vec<(f64, f64, f64)> = grid
        .points(&parsed.profile)
        .into_iter()
        .map(|e| match evaluate(e) {
            Ok(z) => (e, z.value.re, z.value.im),
            // impedance poles are legitimate; record a gap
            Err(_) => (e, f64::NAN, f64::NAN),
        })
        .collect();
    write_file(output, &output::impedance_csv(&parsed.units_label, &rows))
}

fn cmd_bound_states(
    profile_path: &Path,
    e_min: f64,
    e_max: f64,
    scan_points: usize,
    output: &Path,
) -> Result<(), CliError> {
    let parsed = load_profile(profile_path)?;
    let lead_bottom = parsed
        .profile
        .left_lead_potential
        .min(parsed.profile.right_lead_potential);
    if e_max >= lead_bottom {
        return Err(CliError::Input(format!(
            "search window top {e_max} is not below the lead potentials (lowest lead at {lead_bottom})"
        )));
    }
    if !e_min.is_finite() || e_min >= e_max {
        return Err(CliError::Input(format!("need e_min < e_max, got [{e_min}, {e_max}]")));
    }
    let set = find_bound_states(&parsed.profile, e_min, e_max, scan_points, &parsed.units)
        .map_err(|e| CliError::Compute(e.to_string()))?;
    for w in &set.warnings {
        eprintln!("warning: {w}");
    }
    write_file(output, &output::bound_states_json(&parsed.units_label, &set))
}

fn cmd_bench(
    sizes: &[usize],
    repetitions: usize,
    units: UnitsFlag,
    effective_mass: f64,
) -> Result<(), CliError> {
    if sizes.is_empty() {
        return Err(CliError::Input("need at least one size".to_string()));
    }
    let units = match units {
        UnitsFlag::Natural => UnitSystem::Natural,
        UnitsFlag::NanoEv => {
            if !effective_mass.is_finite() || effective_mass <= 0.0 {
                return Err(CliError::Input(format!(
                    "effective mass must be positive, got {effective_mass}"
                )));
            }
            UnitSystem::NanoElectronVolt { effective_mass_ratio: effective_mass }
        }
    };
    let rows = benchmark(sizes, repetitions, &units);
    println!("{:>6}  {:>14}  {:>14}  {:>10}", "N", "iterative", "analytical", "ratio");
    for row in rows {
        let (analytical, ratio) = match (row.analytical_ns, row.ratio) {
            (Some(a), Some(r)) => (format_ns(a), format!("{r:.1}")),
            _ => ("skipped".to_string(), "-".to_string()),
        };
        println!(
            "{:>6}  {:>14}  {:>14}  {:>10}",
            row.regions,
            format_ns(row.iterative_ns),
            analytical,
            ratio
        );
    }
    Ok(())
}

fn format_ns(ns: f64) -> String {
    if ns < 1e3 {
        format!("{ns:.0} ns")
    } else if ns < 1e6 {
        format!("{:.2} us", ns / 1e3)
    } else if ns < 1e9 {
        format!("{:.2} ms", ns / 1e6)
    } else {
        format!("{:.2} s", ns / 1e9)
    }
}
