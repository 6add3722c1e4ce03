//! Command-line front end for `isa-core`.
//!
//! - `estimate`: corpus + codes → category distribution (optional bootstrap
//!   standard errors and classify-and-count baseline).
//! - `swbi`: corpus + per-component codes → daily index, monthly and yearly
//!   aggregates, gap report, chart; or the same from injected component values.
//! - `simulate`: Monte Carlo comparison on a synthetic spec.
//! - `report`: re-reads a results file and summarizes it.
//!
//! Every output file starts with a header recording the config hash, the seed
//! and the crate versions; each run also writes `manifest.json`.

pub mod config;
pub mod error;
pub mod estimate;
pub mod manifest;
pub mod simulate;
pub mod swbi;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Overrides, RunConfig};
pub use error::{CliError, CliResult};
pub use estimate::cmd_estimate;
pub use simulate::{cmd_report, cmd_simulate};
pub use swbi::{cmd_swbi, cmd_swbi_inject};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  configuration or usage error (bad flag, missing file, invalid setting)
  3  data error (unparsable input, empty vocabulary, unknown document or label)
  4  numerical error (collinear or underdetermined categories, solver failure)
  5  assertion failure (--assert-ordering)

Errors are printed to stderr as one JSON line:
  {\"error\":{\"exit_code\":2,\"kind\":\"config\",\"message\":\"...\"}}";

#[derive(Debug, Parser)]
#[command(name = "isa", version, about = "Aggregate opinion estimation from text", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the category distribution of the uncoded documents.
    #[command(after_help = EXIT_CODES)]
    Estimate {
        /// Run configuration (TOML).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Bootstrap replicates for standard errors (0 disables).
        #[arg(long, value_name = "B")]
        bootstrap: Option<usize>,
        /// Output directory, overriding the config.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Build the daily well-being index and its aggregates.
    #[command(after_help = EXIT_CODES)]
    Swbi {
        /// Run configuration (TOML); optional with --inject-component-means.
        #[arg(long, required_unless_present = "inject_component_means")]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Reference level of the monthly integral, in [0, 100].
        #[arg(long)]
        baseline: Option<f64>,
        #[arg(long, value_parser = ["positive-share", "signed-balance"])]
        score_map: Option<String>,
        /// Also write one series per geo code under `geo/`.
        #[arg(long)]
        geo: bool,
        /// Skip estimation and compose the index from a table of component values.
        #[arg(long, value_name = "FILE")]
        inject_component_means: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Monte Carlo comparison of the aggregate estimator and classify-and-count.
    #[command(after_help = EXIT_CODES)]
    Simulate {
        /// Simulation spec (TOML).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, short = 'r')]
        replications: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Results file; printed to stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Exit with code 5 unless every coordinate's std-dev is at least 10%
        /// below classify-and-count's (with 0.5 pp absolute slack).
        #[arg(long)]
        assert_ordering: bool,
    },
    /// Summarize a results file written by `simulate`.
    #[command(after_help = EXIT_CODES)]
    Report {
        results: PathBuf,
        #[arg(long)]
        assert_ordering: bool,
    },
}

/// Runs one command, writing human-readable output to `out`.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> CliResult<()> {
    let print = |out: &mut W, s: &str| out.write_all(s.as_bytes()).map_err(|e| CliError::io("writing stdout", e));
    match cli.command {
        Command::Estimate {
            config,
            seed,
            bootstrap,
            out_dir,
        } => {
            let mut cfg = RunConfig::from_file(&config)?;
            cfg.apply(&Overrides {
                seed,
                bootstrap,
                output_dir: out_dir,
                ..Default::default()
            });
            let run = cmd_estimate(&cfg)?;
            let text = std::fs::read_to_string(run.output_dir.join(estimate::ESTIMATE_FILE))
                .map_err(|e| CliError::io("reading back the report", e))?;
            print(out, &text)
        }
        Command::Swbi {
            config,
            seed,
            baseline,
            score_map,
            geo,
            inject_component_means,
            out_dir,
        } => {
            let overrides = Overrides {
                seed,
                baseline,
                score_map,
                geo,
                output_dir: out_dir,
                ..Default::default()
            };
            if let Some(table) = inject_component_means {
                let (dir, base, seed) = match &config {
                    Some(c) => {
                        let mut cfg = RunConfig::from_file(c)?;
                        cfg.apply(&overrides);
                        (cfg.output_dir, cfg.swbi.baseline, cfg.estimator.seed)
                    }
                    None => (
                        overrides.output_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
                        overrides.baseline.unwrap_or(50.0),
                        overrides.seed.unwrap_or(0),
                    ),
                };
                cmd_swbi_inject(&table, &dir, base, seed)?;
                let text = std::fs::read_to_string(dir.join(swbi::COMPONENTS_FILE))
                    .map_err(|e| CliError::io("reading back the table", e))?;
                return print(out, &text);
            }
            let mut cfg = RunConfig::from_file(config.as_deref().expect("required by clap"))?;
            cfg.apply(&overrides);
            let run = cmd_swbi(&cfg)?;
            let s = &run.national.series;
            print(
                out,
                &format!(
                    "{} complete days, {} gaps, {} months, {} geo partitions -> {}\n",
                    s.records.len(),
                    s.gaps.len(),
                    run.national.monthly.len(),
                    run.geo.len(),
                    run.output_dir.display()
                ),
            )
        }
        Command::Simulate {
            config,
            replications,
            seed,
            output,
            assert_ordering,
        } => {
            let run = cmd_simulate(&config, replications, seed)?;
            let labels = run.spec.labels();
            match &output {
                Some(p) => {
                    run.write(p)?;
                    let parsed = isa_core::simlab::parse_results(&run.text, &p.display().to_string())?;
                    print(out, &simulate::render_report(&parsed))?;
                }
                None => print(out, &run.text)?,
            }
            if assert_ordering {
                simulate::check_ordering(&run.report.summary, &labels)?;
            }
            Ok(())
        }
        Command::Report {
            results,
            assert_ordering,
        } => {
            let run = cmd_report(&results)?;
            print(out, &run.text)?;
            if assert_ordering {
                simulate::check_ordering(&run.results.summary, &run.results.labels)?;
            }
            Ok(())
        }
    }
}
