//! Bounded set-functions over `{0, .., d-1}`, concrete families, and exact
//! brute-force oracles.

mod descriptor;
mod families;
mod oracle;

pub use descriptor::{Family, FunctionDescriptor};
pub use families::{ConstantFunction, ExampleFamily, ExampleFamilyParams, Permuted, TableFunction};
pub use oracle::{
    brute_force_optimum, check_lemma3, check_submodular, closed_form_gaps_example,
    compute_hardness, zone_hardness, HardnessReport, MAX_BRUTE_FORCE_ITEMS, MAX_HARDNESS_ITEMS,
    MAX_SUBMODULAR_CHECK_ITEMS,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::itemset::ItemSet;

/// Absolute tolerance shared by all structural checkers.
pub const TOL: f64 = 1e-9;

/// A set-function `f: P([d]) -> [0, c]`.
///
/// Implementations must be pure: the same set always evaluates to the same value.
pub trait SetFunction: Send + Sync {
    fn num_items(&self) -> usize;

    /// Declared upper bound `c` of the range `[0, c]`.
    fn range_bound(&self) -> f64;

    /// Evaluates `f(set)` without checking that `set ⊆ [d]`.
    fn value(&self, set: &ItemSet) -> f64;

    fn eval(&self, set: &ItemSet) -> Result<f64> {
        check_within(set, self.num_items())?;
        Ok(self.value(set))
    }
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn num_items(&self) -> usize {
        (**self).num_items()
    }
    fn range_bound(&self) -> f64 {
        (**self).range_bound()
    }
    fn value(&self, set: &ItemSet) -> f64 {
        (**self).value(set)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Box<F> {
    fn num_items(&self) -> usize {
        (**self).num_items()
    }
    fn range_bound(&self) -> f64 {
        (**self).range_bound()
    }
    fn value(&self, set: &ItemSet) -> f64 {
        (**self).value(set)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for std::sync::Arc<F> {
    fn num_items(&self) -> usize {
        (**self).num_items()
    }
    fn range_bound(&self) -> f64 {
        (**self).range_bound()
    }
    fn value(&self, set: &ItemSet) -> f64 {
        (**self).value(set)
    }
}

pub(crate) fn check_within(set: &ItemSet, d: usize) -> Result<()> {
    match set.max_item() {
        Some(m) if m >= d => Err(Error::Domain(format!(
            "set {set} contains item {m} outside the ground set of {d} items"
        ))),
        _ => Ok(()),
    }
}

fn check_prefix(item: usize, prefix: &ItemSet, d: usize) -> Result<()> {
    if item >= d {
        return Err(Error::Domain(format!("item {item} outside ground set of {d} items")));
    }
    match prefix.max_item() {
        Some(m) if m >= item => Err(Error::Domain(format!(
            "prefix {prefix} must only contain items below {item}"
        ))),
        _ => Ok(()),
    }
}

/// `α_f(i, X) = f(X ∪ {i}) − f(X)` for `X` made of items strictly below `i`.
pub fn marginal_alpha<F: SetFunction + ?Sized>(f: &F, item: usize, prefix: &ItemSet) -> Result<f64> {
    check_prefix(item, prefix, f.num_items())?;
    Ok(alpha_unchecked(f, item, prefix))
}

/// `β_f(i, X) = f({j > i} ∪ X) − f({j ≥ i} ∪ X)`: the gain of removing `i` from
/// the partially committed full set.
pub fn marginal_beta<F: SetFunction + ?Sized>(f: &F, item: usize, prefix: &ItemSet) -> Result<f64> {
    check_prefix(item, prefix, f.num_items())?;
    Ok(beta_unchecked(f, item, prefix))
}

pub(crate) fn alpha_unchecked<F: SetFunction + ?Sized>(f: &F, item: usize, prefix: &ItemSet) -> f64 {
    f.value(&prefix.with(item)) - f.value(prefix)
}

pub(crate) fn beta_unchecked<F: SetFunction + ?Sized>(f: &F, item: usize, prefix: &ItemSet) -> f64 {
    let d = f.num_items();
    let mut upper = prefix.clone();
    for j in item..d {
        upper.insert(j);
    }
    f.value(&upper.without(item)) - f.value(&upper)
}

/// Number of random sets probed by [`validate_range`] above the exhaustive limit.
pub const RANGE_SAMPLES: usize = 10_000;
const RANGE_EXHAUSTIVE_ITEMS: usize = 12;

/// Checks `0 ≤ f(A) ≤ c` exhaustively for `d ≤ 12`, otherwise on
/// [`RANGE_SAMPLES`] uniformly random sets drawn from a fixed seed.
pub fn validate_range<F: SetFunction + ?Sized>(f: &F) -> Result<()> {
    let d = f.num_items();
    let c = f.range_bound();
    let check = |set: &ItemSet| {
        let v = f.value(set);
        if !(v >= -TOL && v <= c + TOL) {
            Err(Error::Parameter(format!(
                "f({set}) = {v} lies outside the declared range [0, {c}]"
            )))
        } else {
            Ok(())
        }
    };
    if d <= RANGE_EXHAUSTIVE_ITEMS {
        for mask in 0..1u64 << d {
            check(&ItemSet::from_bits(mask))?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_5e7f);
        for _ in 0..RANGE_SAMPLES {
            let set: ItemSet = (0..d).filter(|_| rng.random::<bool>()).collect();
            check(&set)?;
        }
    }
    Ok(())
}
