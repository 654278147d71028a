use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AlgorithmKind, ExperimentConfig};
use super::persist::{self, Metadata};
use super::regret::{compute_regret, resolve_optimum, RegretTrace};
use crate::algorithms::{
    dg_repeated, run_dgetc, run_rgl, AlgorithmRun, CommitRecord, DgEtcParams, Phase, RglParams, RoundRecord,
};
use crate::env::{Bandit, Environment, RngStream};
use crate::error::{Error, Result};
use crate::setfn::SetFunction;

/// Where and how a run is executed.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Output directory; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    /// Skip per-round trace files.
    pub no_trace: bool,
    /// Bound on concurrent replications; `None` uses every core.
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationResult {
    pub replication: usize,
    pub regret: f64,
    pub exploration_rounds: u64,
    pub exploit_mean_regret: Option<f64>,
    pub truncated: bool,
    pub commitments: Vec<CommitRecord>,
}

impl ReplicationResult {
    pub fn from_trace(replication: usize, trace: &RegretTrace) -> Self {
        Self {
            replication,
            regret: trace.total(),
            exploration_rounds: trace.exploration_rounds(),
            exploit_mean_regret: trace.exploit_mean_regret(),
            truncated: trace.truncated,
            commitments: trace.commitments.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub replications: usize,
    pub mean_regret: f64,
    /// Sample standard deviation; zero for a single replication.
    pub std_regret: f64,
    pub stderr_regret: f64,
    pub q05: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q95: f64,
    pub mean_exploration: f64,
    pub truncated: usize,
}

impl Aggregates {
    pub fn from_results(results: &[ReplicationResult]) -> Result<Self> {
        if results.is_empty() {
            return Err(Error::Precondition("no replications to aggregate".into()));
        }
        let n = results.len();
        let mut r: Vec<f64> = results.iter().map(|x| x.regret).collect();
        let mean = r.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        r.sort_by(f64::total_cmp);
        let std = var.sqrt();
        Ok(Self {
            replications: n,
            mean_regret: mean,
            std_regret: std,
            stderr_regret: std / (n as f64).sqrt(),
            q05: quantile(&r, 0.05),
            q25: quantile(&r, 0.25),
            median: quantile(&r, 0.5),
            q75: quantile(&r, 0.75),
            q95: quantile(&r, 0.95),
            mean_exploration: results.iter().map(|x| x.exploration_rounds as f64).sum::<f64>() / n as f64,
            truncated: results.iter().filter(|x| x.truncated).count(),
        })
    }
}

/// Linear-interpolation quantile of sorted, non-empty data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub config: ExperimentConfig,
    pub optimum: f64,
    pub results: Vec<ReplicationResult>,
    pub aggregates: Aggregates,
}

/// Streams of replication `k`: noise on `child(0)`, algorithm on `child(1)`.
pub fn replication_streams(seed: u64, k: usize) -> (RngStream, RngStream) {
    let base = RngStream::new(seed, k as u64);
    (base.child(0), base.child(1))
}

/// Runs one replication and returns its full trace.
pub fn run_replication(
    cfg: &ExperimentConfig,
    f: &Arc<dyn SetFunction>,
    optimum: f64,
    k: usize,
) -> Result<RegretTrace> {
    let (noise_stream, alg_stream) = replication_streams(cfg.seed, k);
    let mut env = Environment::new(f.clone(), cfg.noise, noise_stream)?;
    let run = run_algorithm(cfg, f, &mut env, alg_stream)?;
    compute_regret(&run, f.as_ref(), optimum)
}

fn run_algorithm(
    cfg: &ExperimentConfig,
    f: &Arc<dyn SetFunction>,
    env: &mut Environment,
    stream: RngStream,
) -> Result<AlgorithmRun> {
    match cfg.algorithm {
        AlgorithmKind::Dgetc => {
            let params = DgEtcParams {
                c: cfg.c.unwrap_or_else(|| f.range_bound()),
                sigma: cfg.sigma.unwrap_or_else(|| cfg.noise.declared_sigma()),
                delta: cfg.delta,
                horizon: cfg.horizon,
            };
            run_dgetc(env, params, stream)
        }
        AlgorithmKind::Rgl => run_rgl(env, RglParams { horizon: cfg.horizon }, stream),
        AlgorithmKind::DgOfflineRepeated => {
            let (set, _) = dg_repeated(f.as_ref(), cfg.repeats, stream)?;
            let mut rounds = Vec::with_capacity(cfg.horizon as usize);
            for _ in 0..cfg.horizon {
                let observed = env.pull(&set)?;
                rounds.push(RoundRecord {
                    action: set.clone(),
                    observed,
                    phase: Phase::Exploit,
                    item: None,
                });
            }
            Ok(AlgorithmRun {
                rounds,
                ..Default::default()
            })
        }
    }
}

/// Runs every replication of `cfg`, in parallel, and persists the outputs
/// when `opts.out_dir` is set. Results are ordered by replication index
/// whatever the completion order.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    cfg.validate()?;
    let f = cfg.function.build()?;
    let optimum = resolve_optimum(f.as_ref(), cfg.optimum)?;
    let meta = Metadata::new(cfg);
    if let Some(dir) = &opts.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let one = |k: usize| -> Result<ReplicationResult> {
        let trace = run_replication(cfg, &f, optimum, k)?;
        if let (Some(dir), false) = (&opts.out_dir, opts.no_trace) {
            persist::write_trace(&dir.join(format!("trace_rep{k}.jsonl")), &meta, &trace)?;
        }
        Ok(ReplicationResult::from_trace(k, &trace))
    };
    let results: Vec<ReplicationResult> = with_pool(opts.jobs, || {
        (0..cfg.replications).into_par_iter().map(one).collect::<Result<Vec<_>>>()
    })??;
    let aggregates = Aggregates::from_results(&results)?;
    let summary = RunSummary {
        config: cfg.clone(),
        optimum,
        results,
        aggregates,
    };
    if let Some(dir) = &opts.out_dir {
        persist::write_summary(dir, &meta, &summary)?;
    }
    Ok(summary)
}

pub(crate) fn with_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(0) => Err(Error::Parameter("jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}
