//! Stochastic bandit environment: `Z_t = f(A_t) + η_t` with seeded noise.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::ItemSet;
use crate::setfn::{check_within, SetFunction};

/// Identity of the pseudo-random generator, recorded in run metadata.
pub const GENERATOR_ID: &str = "rand_chacha::ChaCha8Rng (rand_chacha 0.9, seed_from_u64 + set_stream)";

/// Stand-in sub-Gaussian scale for the noiseless model.
pub const NOISELESS_SIGMA: f64 = 1e-9;

/// Seed plus stream index of a ChaCha8 generator. Equal pairs give equal draw
/// sequences; distinct stream ids select disjoint keystreams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A derived stream, independent of `self` and of siblings with other `k`.
    pub fn child(&self, k: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x9e37_79b9))),
            stream_id: k,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    Gaussian { sigma: f64 },
    /// Uniform on `[−half_width, half_width]`.
    Uniform { half_width: f64 },
    None,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::Parameter(format!("gaussian sigma must be positive, got {sigma}")))
            }
            NoiseModel::Uniform { half_width } if !(half_width > 0.0 && half_width.is_finite()) => Err(
                Error::Parameter(format!("uniform half width must be positive, got {half_width}")),
            ),
            _ => Ok(()),
        }
    }

    /// Sub-Gaussian parameter σ handed to the algorithms.
    pub fn declared_sigma(&self) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma } => sigma,
            NoiseModel::Uniform { half_width } => half_width,
            NoiseModel::None => NOISELESS_SIGMA,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma } => Normal::new(0.0, sigma)
                .expect("validated sigma")
                .sample(rng),
            NoiseModel::Uniform { half_width } => rng.random_range(-half_width..=half_width),
            NoiseModel::None => 0.0,
        }
    }
}

/// What a learner may do with the environment: pull an action, observe a
/// noisy reward. The true function values are not reachable through it.
pub trait Bandit {
    fn num_items(&self) -> usize;

    fn pull(&mut self, action: &ItemSet) -> Result<f64>;

    /// Rounds elapsed so far.
    fn rounds(&self) -> u64;
}

pub struct Environment {
    f: Arc<dyn SetFunction>,
    noise: NoiseModel,
    rng: ChaCha8Rng,
    t: u64,
    true_values: Vec<f64>,
}

impl Environment {
    pub fn new(f: Arc<dyn SetFunction>, noise: NoiseModel, stream: RngStream) -> Result<Self> {
        noise.validate()?;
        Ok(Self {
            f,
            noise,
            rng: stream.rng(),
            t: 0,
            true_values: Vec::new(),
        })
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn function(&self) -> &Arc<dyn SetFunction> {
        &self.f
    }

    /// `f(action)` without consuming a round. Harness use only.
    pub fn true_value(&self, action: &ItemSet) -> Result<f64> {
        self.f.eval(action)
    }

    /// `f(A_t)` for every pull so far, in round order.
    pub fn true_values(&self) -> &[f64] {
        &self.true_values
    }
}

impl Bandit for Environment {
    fn num_items(&self) -> usize {
        self.f.num_items()
    }

    fn pull(&mut self, action: &ItemSet) -> Result<f64> {
        check_within(action, self.f.num_items())?;
        let value = self.f.value(action);
        let z = value + self.noise.sample(&mut self.rng);
        self.t += 1;
        self.true_values.push(value);
        Ok(z)
    }

    fn rounds(&self) -> u64 {
        self.t
    }
}
