//! Double-Greedy Explore-then-Commit.

use log::warn;
use rand_chacha::ChaCha8Rng;

use super::{
    dg_sample, upd_exp, AlgorithmRun, CommitRecord, EstimatorState, ExitBranch, Phase, RoundRecord,
};
use crate::env::{Bandit, RngStream};
use crate::error::{Error, Result};
use crate::itemset::ItemSet;
use crate::math::{default_probability, g_conf, loss, tau_max, ConfidenceParams, LossArgs};

/// Slack allowed on the commitment soundness checks.
const SOUNDNESS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DgEtcParams {
    /// Range bound of the reward function.
    pub c: f64,
    /// Sub-Gaussian scale of the noise.
    pub sigma: f64,
    pub delta: f64,
    pub horizon: u64,
}

/// One estimation block: plays `X`, `X ∪ {i}`, `Y`, `Y \ {i}`.
#[derive(Clone, Debug)]
struct Block {
    x: ItemSet,
    y: ItemSet,
    slot: usize,
    z: [f64; 4],
    abandoned: bool,
}

impl Block {
    fn action(&self, item: usize) -> ItemSet {
        match self.slot {
            0 => self.x.clone(),
            1 => self.x.with(item),
            2 => self.y.clone(),
            _ => self.y.without(item),
        }
    }
}

#[derive(Clone, Debug)]
enum State {
    Exploring { item: usize, block: Option<Block> },
    Exploiting,
}

/// DG-ETC as a round-by-round state machine.
///
/// Items are explored in order. Each block draws a fresh `(X_{i−1}, Y_{i−1})`
/// from the committed weights, and after every block [`upd_exp`] decides
/// whether item `i` can be committed. Once all items are committed, each
/// round resamples `X_d` and plays it.
///
/// If fewer than four rounds remain at the start of a block, the block is
/// played partially with its observations discarded, every unresolved item
/// gets the double-greedy weight of its current estimates, and the run is
/// flagged truncated. The same happens when the horizon ends on a block
/// boundary before every item is committed.
pub struct DgEtc {
    d: usize,
    horizon: u64,
    g: f64,
    tau_max: u64,
    estimator: EstimatorState,
    state: State,
    t: u64,
    rng: ChaCha8Rng,
    commitments: Vec<CommitRecord>,
    truncated: bool,
}

impl DgEtc {
    pub fn new(d: usize, params: DgEtcParams, stream: RngStream) -> Result<Self> {
        let conf = ConfidenceParams {
            d,
            horizon: params.horizon,
            delta: params.delta,
            sigma: params.sigma,
            c: params.c,
        };
        let g = g_conf(&conf)?;
        let tau_max = tau_max(params.horizon, d)?;
        let t = params.horizon as f64;
        let worst_exploration = d as f64 * (t * (d as f64 * t).ln().sqrt()).powf(2.0 / 3.0);
        if worst_exploration > t / 2.0 {
            warn!(
                "horizon {} is short for {d} items: d(T√ln(dT))^(2/3) = {worst_exploration:.0} exceeds T/2",
                params.horizon
            );
        }
        Ok(Self {
            d,
            horizon: params.horizon,
            g,
            tau_max,
            estimator: EstimatorState::new(d),
            state: State::Exploring { item: 0, block: None },
            t: 0,
            rng: stream.rng(),
            commitments: Vec::with_capacity(d),
            truncated: false,
        })
    }

    /// Confidence radius `g_{T,δ}`.
    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn tau_max(&self) -> u64 {
        self.tau_max
    }

    pub fn estimator(&self) -> &EstimatorState {
        &self.estimator
    }

    pub fn commitments(&self) -> &[CommitRecord] {
        &self.commitments
    }

    pub fn rounds(&self) -> u64 {
        self.t
    }

    pub fn is_exploiting(&self) -> bool {
        matches!(self.state, State::Exploiting)
    }

    /// Item currently explored, if still exploring.
    pub fn current_item(&self) -> Option<usize> {
        match self.state {
            State::Exploring { item, .. } => Some(item),
            State::Exploiting => None,
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Plays one round.
    pub fn step<B: Bandit + ?Sized>(&mut self, env: &mut B) -> Result<RoundRecord> {
        if self.t >= self.horizon {
            return Err(Error::State(format!("horizon of {} rounds exhausted", self.horizon)));
        }
        if self.d == 0 {
            self.state = State::Exploiting;
        }
        let remaining = self.horizon - self.t;
        let record = match &mut self.state {
            State::Exploiting => {
                let (x, _) = dg_sample(self.estimator.weights(), self.d, &mut self.rng)?;
                let observed = env.pull(&x)?;
                RoundRecord {
                    action: x,
                    observed,
                    phase: Phase::Exploit,
                    item: None,
                }
            }
            State::Exploring { item, block } => {
                let item = *item;
                if block.is_none() {
                    let (x, y) = dg_sample(self.estimator.weights(), item, &mut self.rng)?;
                    *block = Some(Block {
                        x,
                        y,
                        slot: 0,
                        z: [0.0; 4],
                        abandoned: remaining < 4,
                    });
                }
                let b = block.as_mut().expect("block just ensured");
                let action = b.action(item);
                let observed = env.pull(&action)?;
                b.z[b.slot] = observed;
                b.slot += 1;
                let phase = if b.abandoned { Phase::Abandoned } else { Phase::Explore };
                let record = RoundRecord {
                    action,
                    observed,
                    phase,
                    item: Some(item),
                };
                if b.abandoned && b.slot == 1 {
                    self.truncate(item)?;
                } else if b.slot == 4 {
                    let z = b.z;
                    *block = None;
                    self.finish_block(item, z)?;
                }
                record
            }
        };
        self.t += 1;
        if self.t == self.horizon && self.commitments.len() < self.d {
            if let Some(item) = self.current_item() {
                self.truncate(item)?;
            }
        }
        Ok(record)
    }

    fn finish_block(&mut self, item: usize, z: [f64; 4]) -> Result<()> {
        self.estimator.record(item, z[1] - z[0], z[3] - z[2]);
        let est = *self.estimator.get(item);
        let decision = upd_exp(item, est.alpha_hat, est.beta_hat, est.tau, self.g, self.tau_max)?;
        let Some(exit) = decision.exit else {
            return Ok(());
        };
        let value = loss(LossArgs::new(est.alpha_hat, est.beta_hat, decision.p));
        match exit {
            ExitBranch::Lambda => {
                let radius = self.g / (est.tau as f64).sqrt();
                if value + radius > SOUNDNESS_TOL {
                    return Err(Error::Internal(format!(
                        "item {item} committed p={} with loss {value} + radius {radius} > 0",
                        decision.p
                    )));
                }
            }
            _ => {
                let degenerate = est.alpha_hat.max(0.0) + est.beta_hat.max(0.0) == 0.0;
                let bound = if degenerate {
                    (est.alpha_hat - est.beta_hat).abs() / 4.0
                } else {
                    0.0
                };
                if value > bound + SOUNDNESS_TOL || est.tau > self.tau_max {
                    return Err(Error::Internal(format!(
                        "item {item} capped at tau={} with loss {value} > {bound}",
                        est.tau
                    )));
                }
            }
        }
        self.commit(item, decision.p, exit)?;
        self.state = if decision.next_item == self.d {
            State::Exploiting
        } else {
            State::Exploring {
                item: decision.next_item,
                block: None,
            }
        };
        Ok(())
    }

    fn truncate(&mut self, from: usize) -> Result<()> {
        self.truncated = true;
        for item in from..self.d {
            let est = *self.estimator.get(item);
            self.commit(item, default_probability(est.alpha_hat, est.beta_hat), ExitBranch::Truncated)?;
        }
        Ok(())
    }

    fn commit(&mut self, item: usize, p: f64, exit: ExitBranch) -> Result<()> {
        self.estimator.commit(item, p)?;
        let est = self.estimator.get(item);
        self.commitments.push(CommitRecord {
            item,
            tau: est.tau,
            alpha_hat: est.alpha_hat,
            beta_hat: est.beta_hat,
            p,
            exit,
        });
        Ok(())
    }
}

/// Runs DG-ETC for exactly `params.horizon` rounds on `env`.
pub fn run_dgetc<B: Bandit + ?Sized>(
    env: &mut B,
    params: DgEtcParams,
    stream: RngStream,
) -> Result<AlgorithmRun> {
    let mut alg = DgEtc::new(env.num_items(), params, stream)?;
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

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::env::{Environment, NoiseModel};
    use crate::setfn::{ExampleFamily, ExampleFamilyParams, SetFunction};

    fn example() -> Arc<dyn SetFunction> {
        Arc::new(ExampleFamily::new(ExampleFamilyParams::new(vec![0.5, -0.25], 1.0)).unwrap())
    }

    fn params(horizon: u64) -> DgEtcParams {
        DgEtcParams { c: 0.75, sigma: 0.1, delta: 0.05, horizon }
    }

    #[test]
    fn noiseless_easy_instance_commits_and_exploits_one_set() {
        let mut env = Environment::new(example(), NoiseModel::None, RngStream::new(1, 0)).unwrap();
        let run = run_dgetc(&mut env, params(100_000), RngStream::new(1, 1)).unwrap();
        assert!(!run.truncated);
        assert_eq!(run.commitments.len(), 2);
        for c in &run.commitments {
            assert_eq!(c.exit, ExitBranch::Lambda);
        }
        assert_eq!(run.commitments[0].p, 1.0);
        assert_eq!(run.commitments[1].p, 0.0);
        let exploit: Vec<_> = run.rounds.iter().filter(|r| r.phase == Phase::Exploit).collect();
        assert!(!exploit.is_empty());
        assert!(exploit.iter().all(|r| r.action == ItemSet::from_items([0])));
        let taus: u64 = run.commitments.iter().map(|c| c.tau).sum();
        assert_eq!(run.exploration_rounds(), 4 * taus);
    }

    #[test]
    fn block_actions_follow_the_listing() {
        let mut env = Environment::new(example(), NoiseModel::None, RngStream::new(1, 0)).unwrap();
        let mut alg = DgEtc::new(2, params(1000), RngStream::new(1, 1)).unwrap();
        let actions: Vec<ItemSet> = (0..4).map(|_| alg.step(&mut env).unwrap().action).collect();
        assert_eq!(
            actions,
            vec![ItemSet::empty(), ItemSet::from_items([0]), ItemSet::full(2), ItemSet::from_items([1])]
        );
        let e = alg.estimator().get(0);
        assert_eq!((e.alpha_hat, e.beta_hat, e.tau), (0.5, -0.5, 1));
    }

    #[test]
    fn short_horizon_is_all_exploration_and_truncated() {
        let mut env =
            Environment::new(example(), NoiseModel::Gaussian { sigma: 0.1 }, RngStream::new(2, 0)).unwrap();
        let run = run_dgetc(&mut env, params(6), RngStream::new(2, 1)).unwrap();
        assert_eq!(run.rounds.len(), 6);
        assert!(run.truncated);
        assert!(run.rounds.iter().all(|r| r.phase != Phase::Exploit));
        assert_eq!(run.rounds.iter().filter(|r| r.phase == Phase::Abandoned).count(), 2);
        assert!(run.commitments.iter().all(|c| c.exit == ExitBranch::Truncated));
        assert_eq!(run.exploration_rounds(), 6);
    }

    #[test]
    fn stepping_past_horizon_fails() {
        let mut env = Environment::new(example(), NoiseModel::None, RngStream::new(1, 0)).unwrap();
        let mut alg = DgEtc::new(2, params(3), RngStream::new(1, 1)).unwrap();
        for _ in 0..3 {
            alg.step(&mut env).unwrap();
        }
        assert!(matches!(alg.step(&mut env), Err(Error::State(_))));
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(DgEtc::new(2, DgEtcParams { delta: 0.0, ..params(10) }, RngStream::new(0, 0)).is_err());
        assert!(DgEtc::new(2, DgEtcParams { c: 0.0, ..params(10) }, RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn taus_never_exceed_cap() {
        let f: Arc<dyn SetFunction> = Arc::new(
            ExampleFamily::new(ExampleFamilyParams::new(vec![0.05, -0.04, 0.3], 0.5)).unwrap(),
        );
        let c = f.range_bound();
        let mut env = Environment::new(f, NoiseModel::Gaussian { sigma: 0.1 }, RngStream::new(3, 0)).unwrap();
        let p = DgEtcParams { c, sigma: 0.1, delta: 0.05, horizon: 50_000 };
        let cap = tau_max(50_000, 3).unwrap();
        let run = run_dgetc(&mut env, p, RngStream::new(3, 1)).unwrap();
        assert!(run.commitments.iter().all(|c| c.tau <= cap));
        assert!(run.commitments.iter().any(|c| c.exit == ExitBranch::Cap));
    }
}
