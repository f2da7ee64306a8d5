//! Command-line front end: structural verification, scenario evolution
//! with CSV output, and commutator-table export.
//!
//! Exit codes: 0 success, 1 verification or accuracy failure, 2 bad
//! configuration or usage, 3 solver/runtime failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use unitint::cli::{run_scenario, run_table_export, run_verify, ScenarioConfig};
use unitint::{tol, Error};

#[derive(Parser)]
#[command(
    name = "unitint",
    version,
    about = "Unitary integration of driven four-level (two-qubit) quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural verification suite (commutator table,
    /// sub-algebra closures, Bell automorphism, pseudo-spin relations).
    Verify,
    /// Evolve one scenario and write CSV trajectories plus a JSON report.
    Evolve {
        /// Path to a TOML scenario config (exclusive with --preset).
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in preset: fig1-3, fig4-6, or fig7-9.
        #[arg(long)]
        preset: Option<String>,
        /// Override the damping rate Γ (1/ns).
        #[arg(long)]
        gamma: Option<f64>,
        /// Override the inter-junction drive phase δ (radians).
        #[arg(long)]
        delta: Option<f64>,
        /// Output path prefix for the CSV and report files.
        #[arg(long)]
        out: Option<String>,
    },
    /// Export the computed 15x15 commutator table as CSV.
    ExportTable {
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify => cmd_verify(),
        Command::Evolve {
            config,
            preset,
            gamma,
            delta,
            out,
        } => cmd_evolve(config, preset, gamma, delta, out),
        Command::ExportTable { out } => cmd_export(&out),
    };
    ExitCode::from(code)
}

fn fail(e: &Error) -> u8 {
    eprintln!("error: {e}");
    e.exit_code() as u8
}

fn cmd_verify() -> u8 {
    let report = run_verify();
    for c in &report.checks {
        println!(
            "{} {} — {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if report.passed() {
        println!("all {} checks passed", report.checks.len());
        0
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        eprintln!("{failed} check(s) failed");
        1
    }
}

fn cmd_evolve(
    config: Option<PathBuf>,
    preset: Option<String>,
    gamma: Option<f64>,
    delta: Option<f64>,
    out: Option<String>,
) -> u8 {
    let resolved = match (&config, &preset) {
        (Some(path), None) => {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "scenario".into());
            ScenarioConfig::load(path).map(|cfg| (cfg, stem))
        }
        (None, Some(name)) => ScenarioConfig::preset(name).map(|cfg| (cfg, name.clone())),
        _ => Err(Error::Config(
            "exactly one of --config or --preset is required".into(),
        )),
    };
    let (mut cfg, default_prefix) = match resolved {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    if let Some(g) = gamma {
        cfg.gamma_ghz = g;
    }
    if let Some(d) = delta {
        cfg.delta_rad = d;
    }
    if let Some(o) = out {
        cfg.out_prefix = Some(o);
    }
    let prefix = cfg.out_prefix.clone().unwrap_or(default_prefix);

    let run = match run_scenario(&cfg) {
        Ok(run) => run,
        Err(e) => return fail(&e),
    };
    let paths = match run.write_outputs(&prefix) {
        Ok(paths) => paths,
        Err(e) => return fail(&e),
    };
    for p in &paths {
        println!("wrote {}", p.display());
    }
    let r = &run.report;
    println!(
        "segments: {}; unitarity defect: {:.3e}; reference deviation: {:.3e} at x = {:.4}; {:.0} ms",
        r.segment_count,
        r.max_unitarity_defect,
        r.oracle_max_deviation,
        r.oracle_argmax_x,
        r.wall_time_ms
    );
    if r.deviation_within_bound {
        0
    } else {
        eprintln!(
            "accuracy failure: deviation {:.3e} from the reference propagator exceeds {:.1e}",
            r.oracle_max_deviation,
            tol::DEVIATION_FLAG
        );
        1
    }
}

fn cmd_export(out: &Path) -> u8 {
    match run_table_export(out) {
        Ok(()) => {
            println!("wrote {}", out.display());
            0
        }
        Err(e) => fail(&e),
    }
}
