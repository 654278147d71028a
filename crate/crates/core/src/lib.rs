//! Online unconstrained submodular maximization under stochastic bandit
//! feedback: the DG-ETC learner, offline Double Greedy, the RGL baseline,
//! exact oracles and an experiment harness.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod env;
pub mod error;
pub mod harness;
pub mod itemset;
pub mod math;
pub mod setfn;

pub use algorithms::{AlgorithmRun, CommitRecord, ExitBranch, Phase, RoundRecord};
pub use env::{Bandit, Environment, NoiseModel, RngStream};
pub use error::{Error, Result};
pub use itemset::ItemSet;
pub use setfn::{FunctionDescriptor, SetFunction};
