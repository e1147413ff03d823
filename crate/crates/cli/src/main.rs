mod config;
mod report;
mod scan;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use toricfano::fanobundle::check_tau_integrality;
use toricfano::numcheck::run_oracle;
use toricfano::{fano_check, Fan};

use config::{BundleConfig, FiberConfig};
use report::{
    to_json, CheckReport, FiberSummary, FlagReport, FlagSummary, OracleOut, PolytopeReport,
};
use scan::{Domain, ScanInput, DEFAULT_CAP};

const ORACLE_SAMPLES: usize = 200;
const ORACLE_SEED: u64 = 1;

/// Decide whether a homogeneous toric bundle over a flag manifold is Fano.
#[derive(Debug, Parser)]
#[command(name = "toricfano", version)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Compare the polytope against the Fubini-Study moment map when the fiber is projective space.
    #[arg(long, global = true)]
    oracle: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full Fano test and print the margin table.
    Check { file: String },
    /// Print the canonical polytope of the fiber.
    Polytope { file: String },
    /// Print R_m+, h_V and the chamber margins of h_V.
    FlagInfo { file: String },
    /// Classify a finite family of integer tau matrices.
    #[command(allow_negative_numbers = true)]
    Scan {
        file: String,
        /// Upper scale, or box bound N for entries in [-N, N].
        #[arg(long)]
        max: Option<i64>,
        /// Refuse scans with more candidates than this.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Check { file } => check(&BundleConfig::load(file)?, cli),
        Command::Polytope { file } => polytope(&BundleConfig::load(file)?, cli),
        Command::FlagInfo { file } => flag_info(&BundleConfig::load(file)?, cli),
        Command::Scan { file, max, cap } => scan(&BundleConfig::load(file)?, *max, *cap, cli),
    }
}

fn smooth_complete_fan(config: &BundleConfig) -> Result<Fan> {
    let fan = config.fan()?;
    let diag = fan.validate();
    if !diag.is_smooth_complete() {
        bail!(
            "fiber: fan is not smooth and complete (smooth: {}, complete: {}, singular cones {:?}, unmatched facets {:?})",
            diag.smooth,
            diag.complete,
            diag.singular_cones,
            diag.bad_facets
        );
    }
    Ok(fan)
}

/// Quadrature size per dimension for the barycenter integral.
fn oracle_quadrature(m: usize) -> Option<usize> {
    match m {
        1 => Some(10_000),
        2 => Some(100_000),
        3 => Some(32_768),
        4 => Some(65_536),
        _ => None,
    }
}

fn oracle(config: &BundleConfig, warnings: &mut Vec<String>) -> Result<Option<OracleOut>> {
    match config.fiber {
        Some(FiberConfig::ProjectiveSpace { dim }) => match oracle_quadrature(dim) {
            Some(quadrature) => {
                let rep = run_oracle(dim, ORACLE_SAMPLES, quadrature, ORACLE_SEED)
                    .map_err(|e| anyhow!("oracle: {e}"))?;
                Ok(Some(rep.into()))
            }
            None => {
                warnings.push(format!(
                    "oracle skipped: CP{dim} is above the supported dimension 4"
                ));
                Ok(None)
            }
        },
        _ => {
            warnings.push("oracle skipped: fiber is not a projective space".into());
            Ok(None)
        }
    }
}

fn check(config: &BundleConfig, cli: &Cli) -> Result<String> {
    let flag = config.flag()?;
    let fan = smooth_complete_fan(config)?;
    let tau = config.tau(&flag, fan.dim())?;
    let cocharacters = config.cocharacters(&flag)?;
    let verdict = fano_check(&flag, &fan, &tau).map_err(|e| anyhow!("{e}"))?;
    let integral = check_tau_integrality(&flag, &tau, cocharacters.as_deref())
        .map_err(|e| anyhow!("cocharacter_basis: {e}"))?;

    let mut report = CheckReport::new(config, &flag, &fan, &verdict, integral);
    if !verdict.fiber_fano {
        report.warnings.push("fan is not Fano".into());
    }
    if !verdict.tau_surjective {
        report.warnings.push(format!(
            "tau is not surjective: rank {} < fiber rank {}",
            tau.matrix().rank(),
            tau.fiber_rank()
        ));
    }
    if integral == Some(false) {
        report
            .warnings
            .push("tau does not map cocharacter_basis into the fiber lattice".into());
    }
    if cli.oracle {
        report.oracle = oracle(config, &mut report.warnings)?;
    }
    Ok(if cli.json {
        to_json(&report)
    } else {
        report.render()
    })
}

fn polytope(config: &BundleConfig, cli: &Cli) -> Result<String> {
    let fan = smooth_complete_fan(config)?;
    let polytope = fan
        .canonical_polytope()
        .map_err(|e| anyhow!("fiber: {e}"))?;
    let fano = fan.is_fano().map_err(|e| anyhow!("fiber: {e}"))?;
    let mut warnings = Vec::new();
    if !fano {
        warnings.push("fan is not Fano".into());
    }
    let oracle = if cli.oracle {
        oracle(config, &mut warnings)?
    } else {
        None
    };
    let report = PolytopeReport {
        config: config.clone(),
        fiber: FiberSummary::new(&fan, &polytope, fano),
        warnings,
        oracle,
    };
    Ok(if cli.json {
        to_json(&report)
    } else {
        report.render()
    })
}

fn flag_info(config: &BundleConfig, cli: &Cli) -> Result<String> {
    let flag = config.flag()?;
    let mut warnings = Vec::new();
    if flag.painting().is_empty() {
        warnings.push("no crossed nodes: no bundle possible (m>0)".into());
    }
    let report = FlagReport {
        config: config.clone(),
        flag: FlagSummary::new(&flag),
        warnings,
    };
    Ok(if cli.json {
        to_json(&report)
    } else {
        report.render()
    })
}

fn scan(config: &BundleConfig, max: Option<i64>, cap: u64, cli: &Cli) -> Result<String> {
    let flag = config.flag()?;
    let fan = smooth_complete_fan(config)?;
    if fan.dim() > 0 && flag.center_dim() == 0 {
        bail!("base.crossed: no crossed nodes, no bundle possible (m>0)");
    }
    let domain = Domain::resolve(config, fan.dim(), flag.center_dim(), max)?;
    let polytope = fan
        .canonical_polytope()
        .map_err(|e| anyhow!("fiber: {e}"))?;
    let input = ScanInput {
        flag: &flag,
        polytope: &polytope,
        fiber_fano: fan.is_fano().map_err(|e| anyhow!("fiber: {e}"))?,
        basis: config.zk_basis(&flag)?,
    };
    let report = scan::run(config, &domain, &input, cap)?;
    Ok(if cli.json {
        to_json(&report)
    } else {
        report.render()
    })
}
