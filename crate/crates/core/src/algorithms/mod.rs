//! Double-greedy algorithms as incremental state machines over [`Bandit`].
//!
//! [`Bandit`]: crate::env::Bandit

mod dg;
mod dgetc;
mod estimator;
mod rgl;
mod sampling;
mod updexp;

pub use dg::{dg_offline, dg_repeated};
pub use dgetc::{run_dgetc, DgEtc, DgEtcParams};
pub use estimator::{EstimatorState, ItemEstimate};
pub use rgl::{rgl_block_budget, run_rgl, Rgl, RglParams};
pub use sampling::dg_sample;
pub use updexp::{upd_exp, UpdExpResult};

use serde::{Deserialize, Serialize};

use crate::itemset::ItemSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Explore,
    /// Rounds of an estimation block cut short by the horizon; their
    /// observations are discarded.
    Abandoned,
    Exploit,
}

/// How an item's weight got fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitBranch {
    /// The feasible interval became non-empty.
    Lambda,
    /// The per-item block cap was reached.
    Cap,
    /// RGL's fixed block budget was spent.
    Budget,
    /// The horizon ran out before the item was resolved.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub item: usize,
    /// Completed estimation blocks.
    pub tau: u64,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub p: f64,
    pub exit: ExitBranch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub action: ItemSet,
    pub observed: f64,
    pub phase: Phase,
    /// Item under estimation, for exploration rounds.
    pub item: Option<usize>,
}

/// Everything an algorithm did over the horizon, in round order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AlgorithmRun {
    pub rounds: Vec<RoundRecord>,
    pub commitments: Vec<CommitRecord>,
    pub truncated: bool,
}

impl AlgorithmRun {
    pub fn exploration_rounds(&self) -> u64 {
        self.rounds.iter().filter(|r| r.phase != Phase::Exploit).count() as u64
    }
}
