use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modnmf_core::experiments::{run_experiment, ExperimentConfig, ExperimentOutput};
use modnmf_core::generators::{sample_gn, sample_lfr, sample_sbm, LfrParams, SbmParams};
use modnmf_core::io::{
    load_partition_file, output_pair, read_edge_list, save_partition_file, write_edge_list,
};
use modnmf_core::metrics::nmi;
use modnmf_core::objectives::SigmaChoice;
use modnmf_core::solvers::{detect_d_nmf, detect_q_nmf, fast_greedy, SolverConfig};
use modnmf_core::{Error, Graph, Partition};

#[derive(Parser, Debug)]
#[command(
    name = "modnmf",
    version,
    about = "Modularity, modularity density and NMF community detection"
)]
struct Cli {
    /// Master seed (default 0, or the config's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path: file prefix for `generate`, partition file for `detect`,
    /// CSV path for experiments.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Experiment config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a synthetic network and its planted partition.
    Generate {
        #[command(subcommand)]
        model: Model,
    },
    /// Detect communities in an edge list.
    Detect(DetectArgs),
    /// Print the NMI between two partition files.
    Eval { truth: PathBuf, inferred: PathBuf },
    /// Run an equivalence experiment (q-frobenius, d-frobenius, q-kl, q-rb-kl, q-afg-kl).
    Equivalence,
    /// Run a detection benchmark.
    Benchmark,
}

#[derive(Subcommand, Debug)]
enum Model {
    /// Stochastic block model with one within and one between probability.
    Sbm {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        theta_in: f64,
        #[arg(long)]
        theta_out: f64,
        prefix: Option<PathBuf>,
    },
    /// Girvan-Newman network (128 nodes, 4 groups, mean degree 16).
    Gn {
        #[arg(long)]
        z_out: f64,
        prefix: Option<PathBuf>,
    },
    /// Simplified LFR benchmark.
    Lfr {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 20.0)]
        k: f64,
        #[arg(long, default_value_t = 50)]
        maxk: usize,
        #[arg(long, default_value_t = 20)]
        minc: usize,
        #[arg(long, default_value_t = 100)]
        maxc: usize,
        prefix: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    QNmf,
    DNmf,
    FastGreedy,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Number of communities (required for the NMF methods).
    #[arg(long)]
    communities: Option<usize>,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    /// Restarts; the run with the lowest objective wins.
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Diagonal shift for d-nmf: `auto`, `auto+X` or a number.
    #[arg(long, default_value = "auto")]
    sigma: SigmaChoice,
    input: PathBuf,
    #[arg(id = "partition_out", value_name = "OUTPUT")]
    partition_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Generate { model } => {
            let (prefix, sampled) = match model {
                Model::Sbm {
                    sizes,
                    theta_in,
                    theta_out,
                    prefix,
                } => {
                    let params = SbmParams::planted(sizes, theta_in, theta_out)?;
                    (prefix, Ok(sample_sbm(&params, seed)))
                }
                Model::Gn { z_out, prefix } => (prefix, sample_gn(z_out, seed)),
                Model::Lfr {
                    n,
                    mu,
                    k,
                    maxk,
                    minc,
                    maxc,
                    prefix,
                } => {
                    let params = LfrParams::new(n, mu, k, maxk, minc, maxc)?;
                    (prefix, sample_lfr(&params, seed))
                }
            };
            let prefix = prefix
                .or(cli.output)
                .ok_or_else(|| Error::Param("generate needs an output prefix".into()))?;
            let (graph, partition) = sampled?;
            let (edges, part) = output_pair(&prefix);
            write_edge_list(&edges, &graph)?;
            save_partition_file(&part, &partition)?;
            eprintln!(
                "wrote {} and {} (n = {}, m = {}, c = {})",
                edges.display(),
                part.display(),
                graph.n(),
                graph.m(),
                partition.c()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Detect(args) => {
            let graph = read_edge_list(&args.input, None)?;
            let found = detect(&graph, &args, seed)?;
            match args.partition_out.clone().or(cli.output) {
                Some(path) => save_partition_file(path, &found)?,
                None => {
                    for (node, label) in found.labels().iter().enumerate() {
                        println!("{node}\t{label}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { truth, inferred } => {
            let truth = load_partition_file(truth, None)?;
            let inferred = load_partition_file(inferred, Some(truth.n()))?;
            println!("{}", nmi(&truth, &inferred)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Equivalence => experiment(cli.config, cli.seed, cli.output, true),
        Command::Benchmark => experiment(cli.config, cli.seed, cli.output, false),
    }
}

fn detect(graph: &Graph, args: &DetectArgs, seed: u64) -> Result<Partition, Error> {
    if args.algo == Algo::FastGreedy {
        return fast_greedy(graph);
    }
    let communities = args
        .communities
        .ok_or_else(|| Error::Param("--communities is required for q-nmf and d-nmf".into()))?;
    let cfg = SolverConfig::new(communities)
        .with_iters(args.iters)
        .with_runs(args.runs)
        .with_seed(seed);
    let (partition, trace) = match args.algo {
        Algo::QNmf => detect_q_nmf(graph, &cfg)?,
        _ => detect_d_nmf(graph, &cfg, args.sigma)?,
    };
    eprintln!(
        "best run {} with objective {:.6e}; {} communities",
        trace.run,
        trace.final_objective,
        partition.c()
    );
    Ok(partition)
}

fn experiment(
    config: Option<PathBuf>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    equivalence: bool,
) -> Result<ExitCode, Error> {
    let path = config.ok_or_else(|| Error::Param("--config is required".into()))?;
    let mut cfg = ExperimentConfig::from_file(&path)?;
    if cfg.family.is_equivalence() != equivalence {
        let right = if equivalence {
            "benchmark"
        } else {
            "equivalence"
        };
        return Err(Error::Param(format!(
            "config family {} belongs to `modnmf {right}`",
            cfg.family
        )));
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let out = run_experiment(&cfg);
    report(&out);
    match output.or(cfg.output.clone()) {
        Some(csv) => {
            for written in out.write(&csv, cfg.plot_data)? {
                eprintln!("wrote {}", written.display());
            }
        }
        None => print!("{}", out.records_csv()),
    }
    let failures = out.failures();
    if failures > 0 {
        eprintln!("{failures} item(s) failed; output is partial");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn report(out: &ExperimentOutput) {
    for line in &out.summary {
        match &line.value {
            Ok(v) => eprintln!("{} {} {v:.6}", line.metric, line.key),
            Err(e) => eprintln!("{} {} missing ({e})", line.metric, line.key),
        }
    }
}
