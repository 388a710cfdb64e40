//! orderon-lab: command-line front end for the orderon library.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when an experiment's
//! headline checks fail.

use clap::{Args, Parser, Subcommand};
use orderon_core::csdist::cs_bounds;
use orderon_core::density::{t_graph, t_montecarlo, t_orderon};
use orderon_core::experiments::{
    run_estimability, run_furthest, run_odd_clique, run_sampling_decay, run_tester, write_output,
    EstimabilityConfig, ExperimentOutput, FurthestConfig, OddCliqueConfig, SamplingDecayConfig,
    TesterConfig,
};
use orderon_core::hereditary::{
    dist_threshold, estimate_parameter, is_member_forbidden, is_member_threshold, removal_tester,
    GraphParameter, PropertySpec,
};
use orderon_core::norms::{cut_norm_exact, cut_norm_heuristic, ordered_cut_norm, StepKernel};
use orderon_core::regularity::fk_partition_detailed;
use orderon_core::{io, random};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "orderon-lab", version, about = "ordered graph limits workbench")]
struct Cli {
    /// Base seed for randomized operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for experiments and samples.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON config file overriding experiment defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordered pattern density in a graph or orderon.
    Density(DensityArgs),
    /// Cut norm of the difference of two orderons.
    Cutnorm(CutnormArgs),
    /// Certified bounds on the cut-shift distance.
    Csdist(CsdistArgs),
    /// Sample random graphs to edge-list files.
    Sample(SampleArgs),
    /// Hereditary-property operations.
    Hered(HeredArgs),
    /// Weak-regularity partition of an orderon.
    Fk(FkArgs),
    /// Odd-clique frequency table.
    OddClique,
    /// Distance-from-threshold-property table.
    Furthest,
    /// Sample-size decay of the cut-shift distance.
    SamplingDecay,
    /// Parameter-estimation deviation quantiles.
    Estimability,
    /// Removal-lemma tester rejection rates.
    Tester,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long, conflicts_with = "orderon")]
    graph: Option<PathBuf>,
    #[arg(long)]
    orderon: Option<PathBuf>,
    #[arg(long, default_value = "exact")]
    method: String,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
}

#[derive(Args)]
struct CutnormArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value = "exact")]
    mode: String,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, default_value_t = 8)]
    restarts: u64,
}

#[derive(Args)]
struct CsdistArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 4)]
    resolution: usize,
    #[arg(long, default_value_t = 1.0)]
    budget: f64,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, conflicts_with_all = ["gnp", "sbm"])]
    orderon: Option<PathBuf>,
    /// "n,p" for an Erdős–Rényi graph.
    #[arg(long, conflicts_with = "sbm")]
    gnp: Option<String>,
    /// JSON file with {"m":..., "p":[[..]], "q":[..]}.
    #[arg(long)]
    sbm: Option<PathBuf>,
    /// Vertices per sample (orderon and SBM models).
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Assign exact block sizes round(q_i n) instead of independent draws.
    #[arg(long, default_value_t = false)]
    exact_blocks: bool,
}

#[derive(Args)]
struct HeredArgs {
    #[arg(long)]
    graph: PathBuf,
    /// "threshold" or "family:<file>".
    #[arg(long, default_value = "threshold")]
    property: String,
    /// member | dist | test | estimate
    #[arg(long)]
    op: String,
    #[arg(long, default_value_t = 30)]
    k: usize,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// edge-density | threshold-distance | pattern:<file>
    #[arg(long, default_value = "edge-density")]
    param: String,
}

#[derive(Args)]
struct FkArgs {
    #[arg(long)]
    orderon: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: could not configure {threads} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in failures {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_config<T: serde::de::DeserializeOwned + Default>(
    path: &Option<PathBuf>,
) -> orderon_core::Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?),
    }
}

fn emit_experiment(
    out_dir: &Option<PathBuf>,
    output: &ExperimentOutput,
) -> orderon_core::Result<Vec<String>> {
    let dir = out_dir.clone().unwrap_or_else(|| PathBuf::from(format!("out/{}", output.name)));
    let files = write_output(&dir, output)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "experiment": output.name,
            "out_dir": dir,
            "files": files,
            "failures": output.failures,
        }))?
    );
    Ok(output.failures.clone())
}

fn run(cli: Cli) -> orderon_core::Result<Vec<String>> {
    let seed = cli.seed;
    match cli.command {
        Command::Density(args) => {
            let pattern = io::read_pattern(&args.pattern)?;
            let report = match (&args.graph, &args.orderon, args.method.as_str()) {
                (Some(g), None, "exact") => t_graph(&pattern, &io::read_graph(g)?)?,
                (None, Some(w), "exact") => t_orderon(&pattern, &io::read_orderon(w)?)?,
                (None, Some(w), "mc") => {
                    t_montecarlo(&pattern, &io::read_orderon(w)?, args.trials, seed)
                }
                (Some(g), None, "mc") => {
                    let w = orderon_core::orderon::embed(&io::read_graph(g)?);
                    t_montecarlo(&pattern, &w, args.trials, seed)
                }
                (None, None, _) => {
                    return Err(orderon_core::Error::BadConfig("need --graph or --orderon".into()))
                }
                (_, _, m) => {
                    return Err(orderon_core::Error::BadConfig(format!(
                        "unknown method '{m}' (exact|mc)"
                    )))
                }
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(vec![])
        }
        Command::Cutnorm(args) => {
            let a = io::read_orderon(&args.a)?;
            let b = io::read_orderon(&args.b)?;
            let kernel = StepKernel::difference(&a, &b);
            let cert = match args.mode.as_str() {
                "exact" => cut_norm_exact(&kernel)?,
                "heuristic" => cut_norm_heuristic(&kernel, args.restarts, seed),
                "ordered" => ordered_cut_norm(&kernel, args.depth)?,
                m => {
                    return Err(orderon_core::Error::BadConfig(format!(
                        "unknown mode '{m}' (exact|heuristic|ordered)"
                    )))
                }
            };
            println!("{}", serde_json::to_string_pretty(&cert)?);
            Ok(vec![])
        }
        Command::Csdist(args) => {
            let a = io::read_orderon(&args.a)?;
            let b = io::read_orderon(&args.b)?;
            let bounds = cs_bounds(&a, &b, args.resolution, args.budget, args.kmax, seed)?;
            println!("{}", serde_json::to_string_pretty(&bounds)?);
            Ok(vec![])
        }
        Command::Sample(args) => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out/samples"));
            std::fs::create_dir_all(&dir)?;
            let mut files = Vec::new();
            for i in 0..args.count {
                let sample_seed = orderon_core::rng::derive(seed, i);
                let g = if let Some(path) = &args.orderon {
                    let w = io::read_orderon(path)?;
                    random::sample_graph(args.k, &w, sample_seed)
                } else if let Some(spec) = &args.gnp {
                    let (n, p) = spec
                        .split_once(',')
                        .ok_or_else(|| orderon_core::Error::BadConfig("--gnp wants 'n,p'".into()))?;
                    let n: usize = n
                        .trim()
                        .parse()
                        .map_err(|_| orderon_core::Error::BadConfig("bad n in --gnp".into()))?;
                    let p: f64 = p
                        .trim()
                        .parse()
                        .map_err(|_| orderon_core::Error::BadConfig("bad p in --gnp".into()))?;
                    random::gnp(n, p, sample_seed)
                } else if let Some(path) = &args.sbm {
                    let spec: random::SbmSpec =
                        serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    let spec = random::SbmSpec::new(spec.p, spec.q)?;
                    if args.exact_blocks {
                        random::sbm_consecutive_exact(args.k, &spec, sample_seed)?
                    } else {
                        random::sbm_consecutive(args.k, &spec, sample_seed)?
                    }
                } else {
                    return Err(orderon_core::Error::BadConfig(
                        "need one of --orderon, --gnp, --sbm".into(),
                    ));
                };
                let path = dir.join(format!("sample_{i:04}.txt"));
                io::write_graph(&path, &g)?;
                files.push(path);
            }
            println!("{}", serde_json::to_string_pretty(&json!({ "written": files }))?);
            Ok(vec![])
        }
        Command::Hered(args) => {
            let g = io::read_graph(&args.graph)?;
            let spec = match args.property.as_str() {
                "threshold" => PropertySpec::ThresholdProperty,
                other => match other.strip_prefix("family:") {
                    Some(path) => PropertySpec::forbidden_family(io::read_family(path)?)?,
                    None => {
                        return Err(orderon_core::Error::BadConfig(format!(
                            "unknown property '{other}' (threshold|family:<file>)"
                        )))
                    }
                },
            };
            let report = match args.op.as_str() {
                "member" => {
                    let verdict = match &spec {
                        PropertySpec::ThresholdProperty => is_member_threshold(&g),
                        PropertySpec::ForbiddenFamily(_) => is_member_forbidden(&g, &spec)?,
                    };
                    serde_json::to_value(&verdict)?
                }
                "dist" => {
                    if !matches!(spec, PropertySpec::ThresholdProperty) {
                        return Err(orderon_core::Error::BadConfig(
                            "exact distance is only available for the threshold property".into(),
                        ));
                    }
                    let (d, i) = dist_threshold(&g);
                    json!({"distance": d, "threshold": i})
                }
                "test" => {
                    let mut rejections = 0u64;
                    for t in 0..args.trials {
                        let verdict =
                            removal_tester(&g, &spec, args.k, orderon_core::rng::derive(seed, t))?;
                        rejections += u64::from(!verdict.member);
                    }
                    json!({
                        "k": args.k,
                        "trials": args.trials,
                        "rejections": rejections,
                        "rejection_rate": rejections as f64 / args.trials as f64,
                    })
                }
                "estimate" => {
                    let param = match args.param.as_str() {
                        "edge-density" => GraphParameter::EdgeDensity,
                        "threshold-distance" => GraphParameter::ThresholdDistance,
                        other => match other.strip_prefix("pattern:") {
                            Some(path) => GraphParameter::PatternDensity(io::read_pattern(path)?),
                            None => {
                                return Err(orderon_core::Error::BadConfig(format!(
                                    "unknown param '{other}'"
                                )))
                            }
                        },
                    };
                    serde_json::to_value(&estimate_parameter(
                        &g,
                        &param,
                        args.k,
                        args.trials,
                        seed,
                    )?)?
                }
                op => {
                    return Err(orderon_core::Error::BadConfig(format!(
                        "unknown op '{op}' (member|dist|test|estimate)"
                    )))
                }
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(vec![])
        }
        Command::Fk(args) => {
            let w = io::read_orderon(&args.orderon)?;
            let (partition, report) = fk_partition_detailed(&w, args.eps, seed);
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "eps": args.eps,
                    "residual": report.residual,
                    "blocks": partition.blocks(),
                    "violations": report.violations,
                }))?
            );
            Ok(vec![])
        }
        Command::OddClique => {
            let config: OddCliqueConfig = load_config(&cli.config)?;
            emit_experiment(&cli.out, &run_odd_clique(&config)?)
        }
        Command::Furthest => {
            let config: FurthestConfig = load_config(&cli.config)?;
            emit_experiment(&cli.out, &run_furthest(&config)?)
        }
        Command::SamplingDecay => {
            let config: SamplingDecayConfig = load_config(&cli.config)?;
            emit_experiment(&cli.out, &run_sampling_decay(&config)?)
        }
        Command::Estimability => {
            let config: EstimabilityConfig = load_config(&cli.config)?;
            emit_experiment(&cli.out, &run_estimability(&config)?)
        }
        Command::Tester => {
            let config: TesterConfig = load_config(&cli.config)?;
            emit_experiment(&cli.out, &run_tester(&config)?)
        }
    }
}
