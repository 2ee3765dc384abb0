use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use sgcrack_cli::scenario::{BundleReport, Check};
use sgcrack_cli::{convergence_study, oracle_check, run_scenario, sweep, RunConfig, Thresholds};

/// Exit status when a run completed but a diagnostic exceeded its threshold.
const EXIT_THRESHOLD: u8 = 2;

#[derive(Parser)]
#[command(
    name = "sgcrack",
    version,
    about = "Crack with strain-gradient elastic faces: spectral solver and Nyström cross-check"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML with dotted sections; a manifest also works).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; must not exist yet. Defaults to `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Limit on tip-row residuals and jump values at the tips.
    #[arg(long, default_value_t = Thresholds::default().tip)]
    tip_tol: f64,
    /// Limit on the residual of the governing equations on |t| <= 0.9.
    #[arg(long, default_value_t = Thresholds::default().residual)]
    residual_tol: f64,
    /// Limit on the relative discrepancy against the Nyström oracle.
    #[arg(long, default_value_t = Thresholds::default().oracle)]
    oracle_tol: f64,
}

impl Common {
    fn thresholds(&self) -> Thresholds {
        Thresholds {
            tip: self.tip_tol,
            residual: self.residual_tol,
            oracle: self.oracle_tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and write solution.csv, manifest.toml, diagnostics.txt.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Solve one scenario per value of a parameter and write summary.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Config key to vary, e.g. `gamma4_over_gamma3` or `load.s22_pa`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Solve at increasing polynomial orders and write convergence.csv.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly increasing orders.
        #[arg(long = "N", value_delimiter = ',', required = true)]
        orders: Vec<usize>,
    },
    /// Compare the spectral solution with the Nyström oracle; write oracle.csv.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Number of Gauss–Legendre nodes; defaults to `numerics.oracle_nodes`.
        #[arg(long = "M")]
        nodes: Option<usize>,
    },
}

fn print_checks(label: &str, checks: &[Check]) {
    for c in checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        println!("{label}{}: {status} ({:e}, limit {:e})", c.name, c.value, c.limit);
    }
}

fn print_bundle(b: &BundleReport) {
    println!("wrote {}", b.directory.display());
    print_checks("  ", &b.diagnostics.checks);
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve { common } => {
            let config = RunConfig::from_path(&common.config)?;
            let b = run_scenario(&config, common.out.as_deref(), &common.thresholds())?;
            print_bundle(&b);
            Ok(b.passed())
        }
        Command::Sweep { common, param, values } => {
            let config = RunConfig::from_path(&common.config)?;
            let r = sweep(&config, &param, &values, common.out.as_deref(), &common.thresholds())?;
            println!("sweep of {} over {:?} in {}", r.key, r.values, r.directory.display());
            for (v, b) in r.values.iter().zip(&r.bundles) {
                println!("{} = {v}: opening at t=0 {:e}", r.key, b.observables.opening_at_centre);
                print_bundle(b);
            }
            Ok(r.passed())
        }
        Command::Converge { common, orders } => {
            let config = RunConfig::from_path(&common.config)?;
            let r = convergence_study(&config, &orders, common.out.as_deref(), &common.thresholds())?;
            println!("convergence study in {}", r.directory.display());
            for row in &r.rows {
                let flag = if row.non_monotone { " (residual grew)" } else { "" };
                println!(
                    "N = {}: residual {:e}, max|s22| {:e}, max|s12| {:e}{flag}",
                    row.order, row.equation_residual, row.max_abs_s22, row.max_abs_s12
                );
            }
            Ok(r.passed())
        }
        Command::Oracle { common, nodes } => {
            let config = RunConfig::from_path(&common.config)?;
            let r = oracle_check(&config, nodes, common.out.as_deref(), &common.thresholds())?;
            println!("oracle comparison with M = {} in {}", r.nodes, r.directory.display());
            for (mode, d) in &r.discrepancies {
                println!("mode {mode}: G {:e}, Q {:e} (relative L-infinity)", d.g_linf, d.q_linf);
            }
            print_checks("  ", &r.checks);
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more diagnostics exceeded their thresholds");
            ExitCode::from(EXIT_THRESHOLD)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
