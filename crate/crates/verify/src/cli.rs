use clap::{Parser, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

use crate::catalog::Catalog;
use crate::config::{ConfigError, Suite, SuiteConfig, Tolerance};
use crate::report::{to_csv, to_json, SuiteReport};
use crate::suites::run_suite;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Run inequality suites for higher-order polar projection bodies.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
pub struct Cli {
    /// Suite names, comma separated, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Ambient dimension (2 or 3).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Order: the number of directions in a tuple.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Catalog bodies, comma separated; default: every body that fits the suite.
    #[arg(long, value_delimiter = ',')]
    pub bodies: Vec<String>,
    /// Monte Carlo sample count; default depends on nm.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Standard errors allowed in CI-gated comparisons.
    #[arg(long, default_value_t = 3.0)]
    pub z: f64,
    /// Relative slack of deterministic comparisons.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    /// Report file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Body catalog; overrides $HPL_CATALOG and the built-in catalog.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Print the available suites and exit.
    #[arg(long)]
    pub list_suites: bool,
    /// Leave timing and version data out of the report.
    #[arg(long)]
    pub no_meta: bool,
}

fn suites(names: &[String]) -> Result<Vec<Suite>, ConfigError> {
    if names.iter().any(|s| s == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    if names.is_empty() {
        return Err(ConfigError::UnknownSuite("(none given)".into()));
    }
    names.iter().map(|s| s.parse()).collect()
}

/// Runs the command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if cli.list_suites {
        for s in Suite::ALL {
            println!("{:<20} {}", s.name(), s.description());
        }
        return 0;
    }
    let prepared = (|| -> Result<(Catalog, Vec<SuiteConfig>), ConfigError> {
        let catalog = Catalog::resolve(cli.catalog.as_deref())?;
        let mut configs = Vec::new();
        for suite in suites(&cli.suite)? {
            let mut cfg = SuiteConfig::new(suite, cli.n, cli.m);
            cfg.bodies = cli.bodies.clone();
            cfg.seed = cli.seed;
            cfg.tol = Tolerance { z: cli.z, eps: cli.eps };
            if let Some(s) = cli.samples {
                cfg.samples = s;
            }
            cfg.validate(&catalog)?;
            configs.push(cfg);
        }
        Ok((catalog, configs))
    })();
    let (catalog, configs) = match prepared {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for cfg in configs {
        match run_suite(cfg, &catalog, !cli.no_meta) {
            Ok(r) => {
                eprintln!(
                    "{}: {} PASS, {} FAIL, {} INCONCLUSIVE",
                    r.meta.suite, r.summary.pass, r.summary.fail, r.summary.inconclusive
                );
                reports.push(r);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    let text = match cli.format {
        Format::Json => to_json(&reports),
        Format::Csv => to_csv(&reports),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return 2;
    }
    let failed = reports.iter().any(SuiteReport::has_failures);
    let inconclusive: usize = reports.iter().map(|r| r.summary.inconclusive).sum();
    if !failed && inconclusive > 0 {
        eprintln!("warning: {inconclusive} check(s) INCONCLUSIVE: confidence intervals overlap a strict inequality");
    }
    i32::from(failed)
}
