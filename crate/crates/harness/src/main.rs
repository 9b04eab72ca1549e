use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use robust_submod_harness::config::{parse_d_list, Algorithm, ExperimentConfig, Overrides};
use robust_submod_harness::error::{HarnessError, Result};
use robust_submod_harness::experiment::{Experiment, ExperimentReport};
use robust_submod_harness::synth;
use robust_submod_harness::verify::{verify, Suite, Variant, VerifyOptions};

#[derive(Parser)]
#[command(name = "robust-submod", version, about = "Deletion-robust submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SynthKind {
    Geometric,
    Coverage,
    ModularLowerbound,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        algorithm: Option<String>,
        /// Comma-separated deletion budgets, e.g. `5,10,20`.
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the verification suites; exits 1 if any check fails.
    Verify {
        /// `axioms`, `lemmas` or `ratios`; repeat for several. All by default.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `faithful`, or a mutant when built with the `mutants` feature.
        #[arg(long, default_value = "faithful")]
        variant: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON instead of one line per check.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Write a synthetic instance in its loader format.
    Gen {
        #[arg(long, value_enum)]
        kind: SynthKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run report rows from their recorded seeds; exits 1 on any mismatch.
    Replay {
        /// Overrides the config embedded in the report.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
        /// Row index; every row when absent.
        #[arg(long)]
        row: Option<usize>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| HarnessError::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            algorithm,
            d,
            eps,
            trials,
            seed,
            out,
            format,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            cfg.apply(&Overrides {
                algorithm: algorithm.as_deref().map(Algorithm::parse).transpose()?,
                d: d.as_deref().map(parse_d_list).transpose()?,
                eps,
                trials,
                seed,
            })?;
            let report = Experiment::prepare(&cfg)?.run()?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(out.as_deref(), &text)
        }
        Command::Verify {
            suites,
            runs,
            seed,
            variant,
            out,
            format,
        } => {
            let suites = if suites.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suites.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?
            };
            if format == Some(Format::Csv) {
                return Err(HarnessError::Config("verify reports are text or json".into()));
            }
            let opts = VerifyOptions {
                runs,
                seed,
                variant: variant.parse::<Variant>()?,
            };
            let report = verify(&suites, opts)?;
            let text = match format {
                Some(_) => serde_json::to_string_pretty(&report).expect("reports serialize"),
                None => report.to_string(),
            };
            emit(out.as_deref(), &text)?;
            if report.passed() {
                Ok(())
            } else {
                let names: Vec<String> = report.failed().map(|c| format!("{}/{}", c.suite, c.name)).collect();
                Err(HarnessError::CheckFailed(names.join(", ")))
            }
        }
        Command::Gen {
            kind,
            n,
            grid,
            p,
            k,
            d,
            seed,
            out,
        } => {
            let inst = match kind {
                SynthKind::Geometric => synth::geometric(n, grid, seed),
                SynthKind::Coverage => synth::coverage(n, p, None, seed),
                SynthKind::ModularLowerbound => {
                    let (k, d) = match (k, d) {
                        (Some(k), Some(d)) => (k, d),
                        _ => return Err(HarnessError::Config("modular-lowerbound needs --k and --d".into())),
                    };
                    if k + d > n {
                        return Err(HarnessError::Config(format!("k + d = {} exceeds n = {n}", k + d)));
                    }
                    synth::modular_lowerbound(n, k, d, seed)
                }
            };
            emit(out.as_deref(), &inst.to_file_format())
        }
        Command::Replay { config, report, row } => {
            let text = fs::read_to_string(&report).map_err(|e| HarnessError::Io {
                path: report.clone(),
                source: e,
            })?;
            let report = ExperimentReport::from_json(&text)?;
            let cfg = match config {
                Some(path) => ExperimentConfig::load(&path)?,
                None => report.config.clone(),
            };
            let exp = Experiment::prepare(&cfg)?;
            let rows: Vec<usize> = match row {
                Some(i) if i >= report.rows.len() => {
                    return Err(HarnessError::Config(format!(
                        "row {i} out of range; the report has {}",
                        report.rows.len()
                    )))
                }
                Some(i) => vec![i],
                None => (0..report.rows.len()).collect(),
            };
            for i in rows {
                let r = &report.rows[i];
                exp.replay(r)?;
                println!(
                    "row {i}: d={} trial={} seed={} value={} summary_size={} oracle_calls={} reproduced",
                    r.d, r.trial, r.seed, r.value, r.summary_size, r.oracle_calls
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
