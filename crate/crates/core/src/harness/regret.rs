use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgorithmRun, CommitRecord, Phase};
use crate::error::{Error, Result};
use crate::setfn::{brute_force_optimum, SetFunction, MAX_BRUTE_FORCE_ITEMS};

/// One round of a regret trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: u64,
    /// Members of `A_t`, ascending.
    pub action: Vec<usize>,
    pub value: f64,
    pub observed: f64,
    /// `½ f(A*) − f(A_t)`.
    pub regret: f64,
    pub cumulative: f64,
    pub phase: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
}

/// Half-approximate pseudo-regret of a run, round by round.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretTrace {
    pub optimum: f64,
    pub records: Vec<TraceRecord>,
    pub commitments: Vec<CommitRecord>,
    pub truncated: bool,
}

impl RegretTrace {
    /// `R_T`; zero for an empty run.
    pub fn total(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.cumulative)
    }

    pub fn exploration_rounds(&self) -> u64 {
        self.records.iter().filter(|r| r.phase != Phase::Exploit).count() as u64
    }

    /// Mean instantaneous regret over exploitation rounds.
    pub fn exploit_mean_regret(&self) -> Option<f64> {
        let (sum, n) = self
            .records
            .iter()
            .filter(|r| r.phase == Phase::Exploit)
            .fold((0.0, 0u64), |(s, n), r| (s + r.regret, n + 1));
        (n > 0).then(|| sum / n as f64)
    }
}

/// `f(A*)`: the supplied value, or brute force when the ground set is small.
pub fn resolve_optimum<F: SetFunction + ?Sized>(f: &F, supplied: Option<f64>) -> Result<f64> {
    match supplied {
        Some(v) => Ok(v),
        None if f.num_items() <= MAX_BRUTE_FORCE_ITEMS => Ok(brute_force_optimum(f)?.1),
        None => Err(Error::Config(format!(
            "optimum must be supplied for {} items (brute force handles at most {MAX_BRUTE_FORCE_ITEMS})",
            f.num_items()
        ))),
    }
}

/// Regret of `run` against `optimum = f(A*)`, using exact values of `f`.
pub fn compute_regret<F: SetFunction + ?Sized>(run: &AlgorithmRun, f: &F, optimum: f64) -> Result<RegretTrace> {
    let half = 0.5 * optimum;
    let mut cumulative = 0.0;
    let mut records = Vec::with_capacity(run.rounds.len());
    for (t, r) in run.rounds.iter().enumerate() {
        let value = f.eval(&r.action)?;
        let regret = half - value;
        cumulative += regret;
        records.push(TraceRecord {
            t: t as u64,
            action: r.action.iter().collect(),
            value,
            observed: r.observed,
            regret,
            cumulative,
            phase: r.phase,
            item: r.item,
        });
    }
    Ok(RegretTrace {
        optimum,
        records,
        commitments: run.commitments.clone(),
        truncated: run.truncated,
    })
}
