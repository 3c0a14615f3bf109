//! Command-line front end: configure the instance, run named verification
//! suites, emit reports.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed, 2
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gaugerep::config::SuiteConfig;
use gaugerep::report::ReportFormat;
use gaugerep::suite::{emit_report, run_suite};
use gaugerep::Error;

#[derive(Parser, Debug)]
#[command(
    name = "gaugerep",
    about = "Verification suites for an exactly-computable gauge-group representation on Boson Fock space"
)]
struct Args {
    /// Suite to run: typeS, cocycle, energy, gaussian, localnet, modular, all.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Flat key-value config file (flags below override it).
    #[arg(long)]
    config: Option<PathBuf>,

    /// RNG seed for every sampled family.
    #[arg(long)]
    seed: Option<u64>,

    /// Neighborhood size ε for near-identity generator sets.
    #[arg(long)]
    epsilon: Option<f64>,

    /// Site count: "32" for a circle, "8x8" for a torus.
    #[arg(long)]
    sites: Option<String>,

    /// Structure group: su2 or su3.
    #[arg(long)]
    group: Option<String>,

    /// Region descriptor, e.g. "0-7" or "3,5,9".
    #[arg(long)]
    region: Option<String>,

    /// Output format: table or records (records are byte-stable).
    #[arg(long, default_value = "table")]
    format: String,

    /// Monte Carlo sample count for the gaussian suite.
    #[arg(long)]
    mc_samples: Option<usize>,
}

fn build_config(args: &Args) -> Result<SuiteConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => SuiteConfig::from_file(path)?,
        None => SuiteConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(eps) = args.epsilon {
        cfg.epsilon = eps;
    }
    if let Some(sites) = &args.sites {
        cfg.set("sites", sites, 0)?;
    }
    if let Some(group) = &args.group {
        cfg.set("group", group, 0)?;
    }
    if let Some(region) = &args.region {
        cfg.region = region.clone();
    }
    if let Some(mc) = args.mc_samples {
        cfg.mc_samples = mc;
    }
    // validate the derived objects early so bad configs exit with code 2
    cfg.manifold()?;
    cfg.parsed_region()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = match ReportFormat::parse(&args.format) {
        Some(f) => f,
        None => {
            eprintln!("config error: unknown format '{}'", args.format);
            return ExitCode::from(2);
        }
    };
    let cfg = match build_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    match run_suite(&args.suite, &cfg) {
        Ok(report) => {
            print!("{}", emit_report(&report, format));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ Error::Config { .. }) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
