use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use upper_complex::asymptotics::{asymptotic_profile, exponent_law_check, predicted_counts, Omega};
use upper_complex::collapse::{collapse_complex_with, collapse_with_deleted_dim_with, Verification};
use upper_complex::complex::{closure, lower_complex};
use upper_complex::harness::{run_and_emit, ExperimentConfig};
use upper_complex::homology::{homology_profile_with, HomologyMode, HomologyOptions, DEFAULT_MAX_NONZEROS};
use upper_complex::lm::{modified_complex, stratum_index, FaceChooser};
use upper_complex::measure::{total_measure_check, Model, ProbabilityAssignment};
use upper_complex::sampler::{sample_hypergraph_with, ModelParams, SampleSeed, SamplingStrategy};
use upper_complex::textfmt::{read_complex, read_hypergraph, write_complex, write_file};
use upper_complex::{Error, Result};

/// Random simplicial complexes in the multi-parameter upper model.
#[derive(Parser)]
#[command(name = "upcx", version)]
struct Cli {
    /// Master seed for sampling commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ModelArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    r: Option<usize>,
    /// Comma-separated exponents, `inf` allowed, e.g. `inf,inf,1.5`.
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the asymptotic profile and predictions as JSON.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        /// Witness function for a.a.s. bounds: ln, loglog or pow:<c>.
        #[arg(long)]
        omega: Option<Omega>,
    },
    /// Sample one complex and write it as a simplex list.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long, default_value = "upper")]
        model_kind: Model,
        #[arg(long, default_value = "bernoulli", value_parser = parse_strategy)]
        strategy: SamplingStrategy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced homology of a complex file as JSON.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
        /// Smith normal form over the integers (reports torsion).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_NONZEROS)]
        max_nonzeros: usize,
    },
    /// Collapse the closure of a hypergraph file and print the report as JSON.
    Collapse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        ell: usize,
        /// Run the deleted-dimension variant at this k instead.
        #[arg(long)]
        deleted_dim: Option<usize>,
        /// Check every removed pair is free.
        #[arg(long)]
        verify: bool,
        /// Write the collapsed complex here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact measure check by enumerating all hypergraphs.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: usize,
        /// Per-dimension probabilities, e.g. `1/2,1/3,1/5`.
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "upper")]
        model: Model,
        /// Also print the grouped distribution.
        #[arg(long)]
        distribution: bool,
    },
    /// Build a face chooser, sample X and report the modified complex and its homology.
    Lm {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Critical dimension; defaults to the profile's.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value_t = 0)]
        chooser_seed: u64,
        /// Load the chooser from this file if it exists, otherwise build and save it there.
        #[arg(long)]
        chooser: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded Monte Carlo experiment.
    Experiment {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        omega: Option<Omega>,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        lm: bool,
        #[arg(long)]
        no_collapse: bool,
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        jsonl: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn parse_strategy(s: &str) -> std::result::Result<SamplingStrategy, String> {
    match s {
        "bernoulli" => Ok(SamplingStrategy::Bernoulli),
        "skip" => Ok(SamplingStrategy::Skip),
        _ => Err(format!("unknown strategy {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Cap(String),
    Law(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCap { .. } | Error::SimplexCap { .. } => Failure::Cap(e.to_string()),
            Error::LawViolation(_) => Failure::Law(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn base_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::read(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    Ok(cfg)
}

fn apply_model(cfg: &mut ExperimentConfig, m: &ModelArgs) -> Result<()> {
    if let Some(n) = m.n {
        cfg.n = n;
    }
    if let Some(r) = m.r {
        cfg.r = r;
    }
    if let Some(a) = &m.alpha {
        cfg.alpha = ModelParams::parse_alpha(a)?;
    }
    Ok(())
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &serde_json::Value) {
    let mut stdout = std::io::stdout().lock();
    let _ = serde_json::to_writer_pretty(&mut stdout, v);
    let _ = writeln!(stdout);
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let mut cfg = base_config(&cli)?;
    if let Some(t) = cli.threads {
        // harmless if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Predict { model, omega } => {
            apply_model(&mut cfg, model)?;
            let params = cfg.params()?;
            let profile = asymptotic_profile(&params);
            let omega = omega.unwrap_or(cfg.omega);
            let predictions = match predicted_counts(&profile, params.n, omega) {
                Ok(p) => serde_json::to_value(p).map_err(Error::from)?,
                Err(e) => json!({ "unavailable": e.to_string() }),
            };
            let laws = exponent_law_check(&profile);
            print_json(&json!({ "profile": profile, "predictions": predictions, "laws": laws }));
            if !laws.passed() {
                return Err(Failure::Law("exponent laws failed".into()));
            }
        }
        Command::Sample { model, trial, model_kind, strategy, out } => {
            apply_model(&mut cfg, model)?;
            let params = cfg.params()?;
            let x = sample_hypergraph_with(&params, SampleSeed::new(cfg.seed, *trial), *strategy);
            let y = match model_kind {
                Model::Upper => closure(&x),
                Model::Lower => lower_complex(&x),
            };
            emit_text(out.as_deref(), &write_complex(&y))?;
        }
        Command::Homology { input, exact, max_nonzeros } => {
            let y = read_complex(input)?;
            let mode = if *exact { HomologyMode::Exact } else { HomologyMode::FieldRank };
            let h = homology_profile_with(&y, HomologyOptions { mode, max_nonzeros: *max_nonzeros })?;
            print_json(&json!({ "betti": h.betti, "torsion": h.torsion, "empty": h.empty_flag }));
        }
        Command::Collapse { input, ell, deleted_dim, verify, out } => {
            let x = read_hypergraph(input)?;
            let v = if *verify { Verification::Always } else { Verification::Auto };
            let yp = match deleted_dim {
                Some(k) => {
                    let (yp, f) = collapse_with_deleted_dim_with(&x, *k, *ell, v)?;
                    print_json(&json!({ "k": k, "ell": ell, "f_tilde_prime": f }));
                    yp
                }
                None => {
                    let (yp, report) = collapse_complex_with(&x, *ell, v)?;
                    print_json(&serde_json::to_value(&report).map_err(Error::from)?);
                    yp
                }
            };
            if let Some(p) = out {
                write_file(p, &write_complex(&yp))?;
            }
        }
        Command::Enumerate { n, r, p, model, distribution } => {
            let pa = ProbabilityAssignment::parse(*n, *r, p)?;
            let check = total_measure_check(&pa, *model)?;
            let mut v = json!({
                "model": model.to_string(),
                "sum": check.sum.to_string(),
                "normalized": check.is_normalized(),
                "complexes": check.distribution.len(),
                "closed_form_mismatches": check.mismatches().count(),
            });
            if *distribution {
                v["distribution"] = check.to_json();
            }
            print_json(&v);
            if !check.passed() {
                return Err(Failure::Law("enumerated measure disagrees with the closed form".into()));
            }
        }
        Command::Lm { model, trial, ell, chooser_seed, chooser, out } => {
            apply_model(&mut cfg, model)?;
            let params = cfg.params()?;
            let profile = asymptotic_profile(&params);
            let ell = ell.or(profile.ell).unwrap_or(0).min(params.r);
            if ell == 0 {
                return Err(Failure::Usage("the reduction needs ell >= 1".into()));
            }
            let i = stratum_index(&profile)
                .filter(|&i| i >= ell)
                .ok_or_else(|| Failure::Usage(format!("no stratum index at or above ell = {ell}")))?;
            let h = match chooser {
                Some(p) if p.exists() => FaceChooser::read(p)?,
                _ => {
                    let h = FaceChooser::build(params.n, ell, i, *chooser_seed)?;
                    if let Some(p) = chooser {
                        h.write(p)?;
                    }
                    h
                }
            };
            if (h.n(), h.ell(), h.i()) != (params.n, ell, i) {
                return Err(Failure::Usage("stored chooser does not match n, ell and i".into()));
            }
            let x = sample_hypergraph_with(&params, SampleSeed::new(cfg.seed, *trial), cfg.strategy);
            let hat = modified_complex(&x, &h, ell)?;
            let hp = homology_profile_with(&hat, HomologyOptions { mode: cfg.homology_mode, max_nonzeros: cfg.max_nonzeros })?;
            if let Some(p) = out {
                write_file(p, &write_complex(&hat))?;
            }
            print_json(&json!({
                "ell": ell,
                "i": i,
                "preimage_min": h.preimage_min(),
                "f": hat.f_vector(),
                "betti": hp.betti,
                "vanishing": hp.vanishes(ell - 1),
            }));
        }
        Command::Experiment { model, trials, ell, omega, exact, lm, no_collapse, timings, csv, jsonl, summary } => {
            apply_model(&mut cfg, model)?;
            if let Some(t) = trials {
                cfg.trials = *t;
            }
            if ell.is_some() {
                cfg.ell = *ell;
            }
            if let Some(o) = omega {
                cfg.omega = *o;
            }
            cfg.homology_mode = if *exact { HomologyMode::Exact } else { cfg.homology_mode };
            cfg.lm |= *lm;
            cfg.collapse &= !*no_collapse;
            cfg.timings |= *timings;
            for (slot, v) in [(&mut cfg.csv, csv), (&mut cfg.jsonl, jsonl), (&mut cfg.summary, summary)] {
                if v.is_some() {
                    *slot = v.clone();
                }
            }
            let (exp, s) = run_and_emit(&cfg)?;
            print_json(&serde_json::to_value(&s).map_err(Error::from)?);
            if s.law_violations > 0 {
                let first = exp.records.iter().flat_map(|r| r.law_violations.iter()).next().cloned().unwrap_or_default();
                return Err(Failure::Law(format!("{} law violation(s), first: {first}", s.law_violations)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("resource cap: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Law(m)) => {
            eprintln!("law failure: {m}");
            ExitCode::from(3)
        }
    }
}
