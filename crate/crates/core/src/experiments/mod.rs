//! Sweep runners for the equivalence and benchmark experiments.
//!
//! Every runner visits the networks described by an [`ExperimentConfig`],
//! evaluates each one at its planted partition (or runs the detectors on it)
//! and returns per-network [`ExperimentRecord`]s plus summary statistics.
//! Network `(i, j)` (sweep index `i`, repeat `j`) is generated from
//! `derive_seed(derive_seed(seed, i), j)`, so records do not depend on the
//! scheduling of the parallel sweep, and two configs with the same seed see
//! the same seeds at matching positions. With `common_seed` the sweep index
//! is replaced by 0, so every sweep value reuses the same seeds.

mod config;
mod output;

pub use config::{Algorithm, ExperimentConfig, Family, NetworkSpec};
pub use output::{format_real, ExperimentOutput, ExperimentRecord, SummaryLine, CSV_HEADER};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{sample_gn, sample_lfr, sample_sbm, LfrParams, SbmParams};
use crate::graph::Graph;
use crate::io::load_lfr_pair;
use crate::metrics::{nmi, pearson};
use crate::objectives::{
    build_w1, build_w_star, constant_null, frobenius_norm_sq, frobenius_objective, kl_objective,
    modularity_density, modularity_q, KlVariant,
};
use crate::partition::{scale_membership, Partition};
use crate::rng::derive_seed;
use crate::solvers::{detect_d_nmf, detect_q_nmf, fast_greedy, SolverConfig};

/// Largest tolerated gap between a record's `Q` and a from-scratch recomputation.
pub const AUDIT_TOLERANCE: f64 = 1e-12;

/// One network of a sweep.
#[derive(Debug, Clone, Copy)]
struct Task {
    index: usize,
    sweep: f64,
    repeat: usize,
    seed: u64,
}

fn tasks(cfg: &ExperimentConfig) -> Vec<Task> {
    cfg.network
        .sweep_values()
        .into_iter()
        .enumerate()
        .flat_map(|(index, sweep)| {
            let point = if cfg.common_seed { 0 } else { index as u64 };
            let point_seed = derive_seed(cfg.seed, point);
            (0..cfg.repeats).map(move |repeat| Task {
                index,
                sweep,
                repeat,
                seed: derive_seed(point_seed, repeat as u64),
            })
        })
        .collect()
}

fn load(cfg: &ExperimentConfig, task: &Task) -> Result<(Graph, Partition)> {
    match &cfg.network {
        NetworkSpec::Sbm {
            sizes, theta_out, ..
        } => {
            let params = SbmParams::planted(sizes.clone(), task.sweep, *theta_out)?;
            Ok(sample_sbm(&params, task.seed))
        }
        NetworkSpec::Gn { .. } => sample_gn(task.sweep, task.seed),
        NetworkSpec::Lfr { template, .. } => {
            let params = LfrParams {
                mu: task.sweep,
                ..template.clone()
            };
            sample_lfr(&params, task.seed)
        }
        NetworkSpec::LfrFiles { pairs, .. } => {
            let (network, community) = &pairs[task.index];
            load_lfr_pair(network, community)
        }
    }
}

impl ExperimentRecord {
    fn for_task(family: Family, task: &Task, param: impl Into<String>) -> Self {
        Self {
            family,
            index: task.index,
            sweep: task.sweep,
            repeat: task.repeat,
            param: param.into(),
            seed: task.seed,
            ..Self::default()
        }
    }

    fn fill(mut self, f: impl FnOnce(&mut Self) -> Result<()>) -> Self {
        if let Err(e) = f(&mut self) {
            self.status = Some(e.to_string());
        }
        self
    }
}

/// Dispatches on `cfg.family`.
pub fn run_experiment(cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut out = match cfg.family {
        Family::QFrobenius => run_equivalence_q_frobenius(cfg),
        Family::DFrobenius => run_equivalence_d_frobenius(cfg),
        Family::QKl | Family::QRbKl | Family::QAfgKl => run_equivalence_q_kl(cfg),
        Family::Benchmark => run_benchmark(cfg),
    };
    if cfg.audit {
        audit(cfg, &mut out.records);
    }
    out
}

/// Runs `per_network` for every task in parallel and concatenates the
/// records in sweep order.
fn sweep<F>(cfg: &ExperimentConfig, per_network: F) -> Vec<ExperimentRecord>
where
    F: Fn(&Task, Result<(Graph, Partition)>) -> Vec<ExperimentRecord> + Sync,
{
    tasks(cfg)
        .par_iter()
        .map(|task| per_network(task, load(cfg, task)))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn failed(family: Family, task: &Task, param: &str, err: &Error) -> ExperimentRecord {
    ExperimentRecord {
        status: Some(err.to_string()),
        ..ExperimentRecord::for_task(family, task, param)
    }
}

fn correlation(
    records: &[ExperimentRecord],
    param: Option<&str>,
    x: impl Fn(&ExperimentRecord) -> Option<f64>,
    y: impl Fn(&ExperimentRecord) -> Option<f64>,
) -> std::result::Result<f64, String> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.status.is_none() && param.is_none_or(|p| r.param == p))
        .filter_map(|r| Some((x(r)?, y(r)?)))
        .unzip();
    pearson(&xs, &ys).map_err(|e| e.to_string())
}

/// `Q` against `||W* - S S^T||_F^2` at the planted partition of each network.
pub fn run_equivalence_q_frobenius(cfg: &ExperimentConfig) -> ExperimentOutput {
    let family = Family::QFrobenius;
    let records = sweep(cfg, |task, network| {
        let (g, planted) = match network {
            Ok(pair) => pair,
            Err(e) => return vec![failed(family, task, "", &e)],
        };
        vec![ExperimentRecord::for_task(family, task, "").fill(|rec| {
            rec.n = g.n();
            rec.m = g.m();
            rec.q = Some(modularity_q(&g, &planted)?);
            rec.d = Some(modularity_density(&g, &planted)?);
            rec.frobenius = Some(frobenius_objective(
                &build_w_star(&g)?,
                &planted.membership(),
            )?);
            Ok(())
        })]
    });
    let summary = vec![SummaryLine {
        metric: "pearson_q_frobenius".into(),
        key: String::new(),
        value: correlation(&records, None, |r| r.q, |r| r.frobenius),
    }];
    ExperimentOutput { records, summary }
}

/// `D` against `||W1 - H H^T||_F^2` for each sigma, with the residual of the
/// identity `||W1 - HH^T||^2 = ||W1||^2 - 2 (D + sigma c) + c`.
pub fn run_equivalence_d_frobenius(cfg: &ExperimentConfig) -> ExperimentOutput {
    let family = Family::DFrobenius;
    let records = sweep(cfg, |task, network| {
        let (g, planted) = match network {
            Ok(pair) => pair,
            Err(e) => {
                return cfg
                    .sigma
                    .iter()
                    .map(|s| failed(family, task, &s.to_string(), &e))
                    .collect()
            }
        };
        cfg.sigma
            .iter()
            .map(|&sigma| {
                ExperimentRecord::for_task(family, task, sigma.to_string()).fill(|rec| {
                    rec.n = g.n();
                    rec.m = g.m();
                    rec.q = modularity_q(&g, &planted).ok();
                    let d = modularity_density(&g, &planted)?;
                    rec.d = Some(d);
                    let w1 = build_w1(&g, sigma)?;
                    let h = scale_membership(&planted.membership())?;
                    let objective = frobenius_objective(&w1, &h)?;
                    let c = planted.c() as f64;
                    let sigma = w1.sigma().expect("W1 carries sigma");
                    let expanded = frobenius_norm_sq(w1.entries()) - 2.0 * (d + sigma * c) + c;
                    rec.frobenius = Some(objective);
                    rec.residual = Some(objective - expanded);
                    Ok(())
                })
            })
            .collect()
    });
    let mut summary = Vec::new();
    for sigma in &cfg.sigma {
        let key = sigma.to_string();
        let mine: Vec<&ExperimentRecord> = records.iter().filter(|r| r.param == key).collect();
        let max_residual = if mine.iter().any(|r| r.status.is_some()) {
            Err("some networks failed".to_string())
        } else {
            Ok(mine
                .iter()
                .filter_map(|r| r.residual)
                .fold(0.0f64, |acc, x| acc.max(x.abs())))
        };
        summary.push(SummaryLine {
            metric: "max_abs_identity_residual".into(),
            key: format!("sigma={key}"),
            value: max_residual,
        });
        summary.push(SummaryLine {
            metric: "pearson_d_frobenius".into(),
            key: format!("sigma={key}"),
            value: correlation(&records, Some(&key), |r| r.d, |r| r.frobenius),
        });
    }
    ExperimentOutput { records, summary }
}

fn kl_variants(cfg: &ExperimentConfig) -> Vec<KlVariant> {
    match cfg.family {
        Family::QRbKl => cfg
            .gamma
            .iter()
            .map(|&gamma| KlVariant::Rb { gamma })
            .collect(),
        Family::QAfgKl => cfg.r.iter().map(|&r| KlVariant::Afg { r }).collect(),
        _ => vec![KlVariant::Base],
    }
}

fn variant_key(v: KlVariant) -> String {
    match v {
        KlVariant::Base => "base".into(),
        KlVariant::Rb { gamma } => format!("gamma={gamma}"),
        KlVariant::Afg { r } => format!("r={r}"),
    }
}

/// Modularity variant against its KL objective with a constant null model.
/// The `q` column holds `Q`, `Q^RB(gamma)` or `Q^AFG(r)` depending on the family.
pub fn run_equivalence_q_kl(cfg: &ExperimentConfig) -> ExperimentOutput {
    let family = cfg.family;
    let variants = kl_variants(cfg);
    let records = sweep(cfg, |task, network| {
        let (g, planted) = match network {
            Ok(pair) => pair,
            Err(e) => {
                return variants
                    .iter()
                    .map(|&v| failed(family, task, &variant_key(v), &e))
                    .collect()
            }
        };
        let s = planted.membership();
        variants
            .iter()
            .map(|&variant| {
                ExperimentRecord::for_task(family, task, variant_key(variant)).fill(|rec| {
                    rec.n = g.n();
                    rec.m = g.m();
                    rec.q = Some(variant.quality(&g, &planted)?);
                    let null = constant_null(&g, variant)?;
                    rec.kl = Some(kl_objective(&g, &null, &s)?);
                    Ok(())
                })
            })
            .collect()
    });
    let summary = variants
        .iter()
        .map(|&v| {
            let key = variant_key(v);
            SummaryLine {
                metric: "pearson_q_kl".into(),
                value: correlation(&records, Some(&key), |r| r.q, |r| r.kl),
                key,
            }
        })
        .collect();
    ExperimentOutput { records, summary }
}

/// NMI of each detector against the planted partition. Stochastic detectors
/// are run `cfg.runs` times per network with independent seeds and averaged.
pub fn run_benchmark(cfg: &ExperimentConfig) -> ExperimentOutput {
    let family = Family::Benchmark;
    let records = sweep(cfg, |task, network| {
        let (g, planted) = match network {
            Ok(pair) => pair,
            Err(e) => return vec![failed(family, task, "", &e)],
        };
        let mut rec = ExperimentRecord::for_task(family, task, "");
        rec.n = g.n();
        rec.m = g.m();
        rec.q = modularity_q(&g, &planted).ok();
        rec.d = modularity_density(&g, &planted).ok();
        let communities = cfg.communities.unwrap_or(planted.c());
        let mut errors = Vec::new();
        for &algorithm in &cfg.algorithms {
            let score = benchmark_cell(cfg, algorithm, &g, &planted, communities, task.seed);
            match score {
                Ok(v) => rec.set_nmi(algorithm, v),
                Err(e) => errors.push(format!("{algorithm}: {e}")),
            }
        }
        if !errors.is_empty() {
            rec.status = Some(errors.join("; "));
        }
        vec![rec]
    });

    let mut summary = Vec::new();
    for (index, sweep_value) in cfg.network.sweep_values().into_iter().enumerate() {
        for &algorithm in &cfg.algorithms {
            let values: Vec<f64> = records
                .iter()
                .filter(|r| r.index == index)
                .filter_map(|r| r.nmi(algorithm))
                .collect();
            let value = if values.len() == cfg.repeats {
                Ok(values.iter().sum::<f64>() / values.len() as f64)
            } else {
                Err("missing".to_string())
            };
            summary.push(SummaryLine {
                metric: format!("mean_nmi_{algorithm}"),
                key: format!("sweep={}", format_real(sweep_value)),
                value,
            });
        }
    }
    ExperimentOutput { records, summary }
}

fn benchmark_cell(
    cfg: &ExperimentConfig,
    algorithm: Algorithm,
    g: &Graph,
    planted: &Partition,
    communities: usize,
    network_seed: u64,
) -> Result<f64> {
    if algorithm == Algorithm::FastGreedy {
        return nmi(planted, &fast_greedy(g)?);
    }
    let mut total = 0.0;
    for run in 0..cfg.runs {
        let solver = SolverConfig {
            communities,
            iters: cfg.iters,
            runs: cfg.restarts,
            seed: derive_seed(network_seed, run as u64),
            eps: 1e-12,
        };
        let (found, _) = match algorithm {
            Algorithm::QNmf => detect_q_nmf(g, &solver)?,
            Algorithm::DNmf => detect_d_nmf(g, &solver, cfg.sigma[0])?,
            Algorithm::FastGreedy => unreachable!(),
        };
        total += nmi(planted, &found)?;
    }
    Ok(total / cfg.runs as f64)
}

/// Regenerates every network and checks each record's `q` against a fresh
/// evaluation; mismatches are marked as failures.
fn audit(cfg: &ExperimentConfig, records: &mut [ExperimentRecord]) {
    let task_list = tasks(cfg);
    records.par_iter_mut().for_each(|rec| {
        let Some(q) = rec.q else { return };
        if rec.status.is_some() {
            return;
        }
        let task = task_list
            .iter()
            .find(|t| t.index == rec.index && t.repeat == rec.repeat)
            .expect("record comes from a task");
        let fresh = load(cfg, task).and_then(|(g, p)| match cfg.family {
            Family::QRbKl | Family::QAfgKl => kl_variants(cfg)
                .into_iter()
                .find(|&v| variant_key(v) == rec.param)
                .expect("record parameter names a variant")
                .quality(&g, &p),
            _ => modularity_q(&g, &p),
        });
        match fresh {
            Ok(v) if (v - q).abs() <= AUDIT_TOLERANCE => {}
            Ok(v) => rec.status = Some(format!("audit: q {q} differs from recomputed {v}")),
            Err(e) => rec.status = Some(format!("audit: {e}")),
        }
    });
}
