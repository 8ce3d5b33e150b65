//! Command line interface over the optimizer, campaign harness, and oracle.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when the
//! requested work completed but the final best candidate (or some campaign
//! run) was infeasible.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use maa_opt::harness::AngleGrid;
use maa_opt::{export, firefly, harness, oracle, problem};

#[derive(Parser)]
#[command(name = "maa", version, about = "Movable antenna array gain optimizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the firefly search on one scenario and write result files
    Optimize {
        /// Scenario JSON path
        #[arg(long)]
        scenario: PathBuf,
        /// Search configuration JSON path ("{}" selects all defaults)
        #[arg(long)]
        config: PathBuf,
        /// Output directory for result.json, trace.csv, pattern.csv
        #[arg(long)]
        out: PathBuf,
        /// Override the configured rng seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured population size
        #[arg(long)]
        omega: Option<usize>,
        /// Override the configured generation budget
        #[arg(long)]
        generations: Option<usize>,
    },
    /// Run a Monte Carlo campaign from a JSON spec
    Campaign {
        /// Campaign spec JSON path
        #[arg(long)]
        spec: PathBuf,
        /// Output directory for the campaign file set
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a stored result's beam pattern over [0, 180] degrees
    Pattern {
        /// result.json produced by the optimize command
        #[arg(long)]
        result: PathBuf,
        /// Angular resolution in degrees
        #[arg(long)]
        step: f64,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustively solve a small scenario on a grid and save the baseline
    Oracle {
        /// Scenario JSON path (at most 3 antennas)
        #[arg(long)]
        scenario: PathBuf,
        /// Grid spec JSON path ("{}" selects all defaults)
        #[arg(long)]
        grid: PathBuf,
        /// Output fixture JSON path
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare predicted against measured search work
    Complexity {
        /// Search configuration JSON path
        #[arg(long)]
        config: PathBuf,
        /// Scenario JSON path; defaults to the built-in reference scenario
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
}

enum Outcome {
    Success,
    Infeasible,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> maa_opt::Result<Outcome> {
    match command {
        Command::Optimize {
            scenario,
            config,
            out,
            seed,
            omega,
            generations,
        } => optimize(&scenario, &config, &out, seed, omega, generations),
        Command::Campaign { spec, out } => campaign(&spec, &out),
        Command::Pattern { result, step, out } => pattern(&result, step, &out),
        Command::Oracle {
            scenario,
            grid,
            out,
        } => solve_oracle(&scenario, &grid, &out),
        Command::Complexity { config, scenario } => complexity(&config, scenario.as_deref()),
    }
}

fn optimize(
    scenario_path: &Path,
    config_path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    omega: Option<usize>,
    generations: Option<usize>,
) -> maa_opt::Result<Outcome> {
    let scenario: problem::Scenario = export::read_json(scenario_path)?;
    let mut config: firefly::FaConfig = export::read_json(config_path)?;
    if let Some(seed) = seed {
        config.rng_seed = seed;
    }
    if let Some(omega) = omega {
        config.population = omega;
    }
    if let Some(generations) = generations {
        config.max_generations = generations;
    }
    scenario.validate()?;
    config.validate()?;

    std::fs::create_dir_all(out_dir).map_err(|e| maa_opt::Error::File {
        path: out_dir.display().to_string(),
        source: Box::new(e.into()),
    })?;
    let result = firefly::run(&scenario, &config)?;
    export::write_run_result(out_dir.join("result.json"), &result)?;
    export::write_trace_csv(out_dir.join("trace.csv"), &result.trace)?;
    let grid: Vec<f64> = (0..=180).map(f64::from).collect();
    let rows = maa_opt::array::pattern_sweep(&result.best.w, &result.best.d, &grid)?;
    export::write_pattern_csv(out_dir.join("pattern.csv"), &rows)?;

    println!("best_min_gain: {}", result.best_min_gain);
    println!("feasible: {}", result.feasibility.feasible);
    println!("evaluations: {}", result.evaluations);
    println!("outputs: {}", out_dir.display());
    if result.feasibility.feasible {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::Infeasible)
    }
}

fn campaign(spec_path: &Path, out_dir: &Path) -> maa_opt::Result<Outcome> {
    let spec: harness::CampaignSpec = export::read_json(spec_path)?;
    spec.validate()?;
    let result = harness::run_campaign(&spec)?;
    export::write_campaign_outputs(out_dir, &spec, &result)?;

    let mut clean = true;
    for (i, p) in result.points.iter().enumerate() {
        let s = &p.settings;
        println!(
            "point {i}: na={} q={} i0={} omega={} r={} mean_gain={} feasibility={} failed={}",
            s.n_antennas,
            s.q_unintended,
            s.interference_threshold,
            s.population,
            s.max_generations,
            p.overall_mean_gain
                .map_or_else(|| "n/a".into(), |g| format!("{g:.4}")),
            p.feasibility_rate
                .map_or_else(|| "n/a".into(), |r| format!("{:.1}%", 100.0 * r)),
            p.failed_runs,
        );
        if p.failed_runs > 0 || p.feasibility_rate != Some(1.0) {
            clean = false;
        }
    }
    println!("outputs: {}", out_dir.display());
    Ok(if clean {
        Outcome::Success
    } else {
        Outcome::Infeasible
    })
}

fn pattern(result_path: &Path, step: f64, out_path: &Path) -> maa_opt::Result<Outcome> {
    let result = export::read_run_result(result_path)?;
    let grid = AngleGrid {
        start_deg: 0.0,
        stop_deg: 180.0,
        step_deg: step,
    };
    grid.validate()?;
    let rows = maa_opt::array::pattern_sweep(&result.best.w, &result.best.d, &grid.angles())?;
    export::write_pattern_csv(out_path, &rows)?;
    println!("rows: {}", rows.len());
    println!("output: {}", out_path.display());
    Ok(Outcome::Success)
}

fn solve_oracle(
    scenario_path: &Path,
    grid_path: &Path,
    out_path: &Path,
) -> maa_opt::Result<Outcome> {
    let scenario: problem::Scenario = export::read_json(scenario_path)?;
    let grid: oracle::GridSpec = export::read_json(grid_path)?;
    scenario.validate()?;
    let (best, achieved_min_gain) = oracle::brute_force_solve(&scenario, &grid)?;
    export::write_oracle_fixture(
        out_path,
        &export::OracleFixture {
            scenario,
            grid,
            best,
            achieved_min_gain,
        },
    )?;
    println!("achieved_min_gain: {achieved_min_gain}");
    println!("output: {}", out_path.display());
    Ok(Outcome::Success)
}

fn complexity(config_path: &Path, scenario_path: Option<&Path>) -> maa_opt::Result<Outcome> {
    let config: firefly::FaConfig = export::read_json(config_path)?;
    let scenario: problem::Scenario = match scenario_path {
        Some(p) => export::read_json(p)?,
        None => problem::Scenario {
            n_antennas: 8,
            segment_length_wl: 8.0,
            min_spacing_wl: 0.5,
            wavelength: 1.0,
            intended_deg: vec![100.0, 145.0],
            unintended_deg: vec![125.0, 165.0],
            interference_threshold: 0.1,
        },
    };
    scenario.validate()?;
    config.validate()?;

    let predicted = firefly::count_operations(&scenario, &config);
    let result = firefly::run(&scenario, &config)?;
    println!("predicted_operations: {predicted}");
    println!("measured_evaluations: {}", result.evaluations);
    println!(
        "measured_per_predicted: {:.6}",
        result.evaluations as f64 / predicted as f64
    );
    Ok(Outcome::Success)
}
