//! Randomized Greedy Learning baseline.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{AlgorithmRun, CommitRecord, EstimatorState, ExitBranch, Phase, RoundRecord};
use crate::env::{Bandit, RngStream};
use crate::error::{Error, Result};
use crate::itemset::ItemSet;
use crate::math::default_probability;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RglParams {
    pub horizon: u64,
}

/// Blocks spent on each item: `max(1, ceil(T^{2/3} ln(T)^{1/3}))`.
pub fn rgl_block_budget(horizon: u64) -> Result<u64> {
    if horizon == 0 {
        return Err(Error::Parameter("horizon must be positive".into()));
    }
    let t = horizon as f64;
    let m = (t.powf(2.0 / 3.0) * t.ln().cbrt()).ceil();
    Ok((m as u64).max(1))
}

/// RGL as a round-by-round state machine.
///
/// Each item gets exactly `m` blocks on the current fixed pair `(X, Y)`,
/// then a Bernoulli draw with the double-greedy weight of the estimates
/// moves the item into `X` or out of `Y`. After the last item, `X` is
/// played every round.
pub struct Rgl {
    d: usize,
    horizon: u64,
    m: u64,
    x: ItemSet,
    y: ItemSet,
    item: usize,
    slot: usize,
    z: [f64; 4],
    estimator: EstimatorState,
    t: u64,
    rng: ChaCha8Rng,
    commitments: Vec<CommitRecord>,
    truncated: bool,
    /// Block cut short by the horizon: pair and item it was estimating.
    abandoned: Option<(ItemSet, ItemSet, usize)>,
}

impl Rgl {
    pub fn new(d: usize, params: RglParams, stream: RngStream) -> Result<Self> {
        Ok(Self {
            d,
            horizon: params.horizon,
            m: rgl_block_budget(params.horizon)?,
            x: ItemSet::empty(),
            y: ItemSet::full(d),
            item: 0,
            slot: 0,
            z: [0.0; 4],
            estimator: EstimatorState::new(d),
            t: 0,
            rng: stream.rng(),
            commitments: Vec::with_capacity(d),
            truncated: false,
            abandoned: None,
        })
    }

    pub fn block_budget(&self) -> u64 {
        self.m
    }

    pub fn estimator(&self) -> &EstimatorState {
        &self.estimator
    }

    pub fn is_exploiting(&self) -> bool {
        self.item >= self.d
    }

    /// Set played once exploration is over.
    pub fn committed_set(&self) -> Option<&ItemSet> {
        self.is_exploiting().then_some(&self.x)
    }

    pub fn step<B: Bandit + ?Sized>(&mut self, env: &mut B) -> Result<RoundRecord> {
        if self.t >= self.horizon {
            return Err(Error::State(format!("horizon of {} rounds exhausted", self.horizon)));
        }
        if self.slot == 0 && !self.is_exploiting() && self.horizon - self.t < 4 {
            self.abandoned = Some((self.x.clone(), self.y.clone(), self.item));
            self.truncate();
            self.truncated = true;
        }
        let record = if let Some((x, y, i)) = &self.abandoned {
            let action = match self.slot {
                0 => x.clone(),
                1 => x.with(*i),
                2 => y.clone(),
                _ => y.without(*i),
            };
            let observed = env.pull(&action)?;
            let record = RoundRecord {
                action,
                observed,
                phase: Phase::Abandoned,
                item: Some(*i),
            };
            self.slot += 1;
            record
        } else if self.is_exploiting() {
            let observed = env.pull(&self.x)?;
            RoundRecord {
                action: self.x.clone(),
                observed,
                phase: Phase::Exploit,
                item: None,
            }
        } else {
            let i = self.item;
            let action = match self.slot {
                0 => self.x.clone(),
                1 => self.x.with(i),
                2 => self.y.clone(),
                _ => self.y.without(i),
            };
            let observed = env.pull(&action)?;
            self.z[self.slot] = observed;
            self.slot += 1;
            if self.slot == 4 {
                self.slot = 0;
                let z = self.z;
                self.estimator.record(i, z[1] - z[0], z[3] - z[2]);
                if self.estimator.get(i).tau == self.m {
                    self.commit(i, ExitBranch::Budget);
                }
            }
            RoundRecord {
                action,
                observed,
                phase: Phase::Explore,
                item: Some(i),
            }
        };
        self.t += 1;
        if self.t == self.horizon && !self.is_exploiting() {
            self.truncate();
            self.truncated = true;
        }
        Ok(record)
    }

    fn truncate(&mut self) {
        while self.item < self.d {
            self.commit(self.item, ExitBranch::Truncated);
        }
    }

    fn commit(&mut self, item: usize, exit: ExitBranch) {
        let est = *self.estimator.get(item);
        let p = default_probability(est.alpha_hat, est.beta_hat);
        self.estimator.commit(item, p).expect("items commit in order");
        if self.rng.random::<f64>() < p {
            self.x.insert(item);
        } else {
            self.y.remove(item);
        }
        self.commitments.push(CommitRecord {
            item,
            tau: est.tau,
            alpha_hat: est.alpha_hat,
            beta_hat: est.beta_hat,
            p,
            exit,
        });
        self.item += 1;
    }
}

/// Runs RGL for exactly `params.horizon` rounds on `env`.
pub fn run_rgl<B: Bandit + ?Sized>(env: &mut B, params: RglParams, stream: RngStream) -> Result<AlgorithmRun> {
    let mut alg = Rgl::new(env.num_items(), params, stream)?;
    let mut rounds = Vec::with_capacity(params.horizon as usize);
    for _ in 0..params.horizon {
        rounds.push(alg.step(env)?);
    }
    Ok(AlgorithmRun {
        rounds,
        commitments: alg.commitments,
        truncated: alg.truncated,
    })
}
