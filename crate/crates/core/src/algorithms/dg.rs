use rand::Rng;

use crate::env::RngStream;
use crate::error::{Error, Result};
use crate::itemset::ItemSet;
use crate::math::default_probability;
use crate::setfn::SetFunction;

/// Offline double greedy with exact function access (`4d` evaluations).
/// One uniform draw is consumed per item.
pub fn dg_offline<F, R>(f: &F, rng: &mut R) -> ItemSet
where
    F: SetFunction + ?Sized,
    R: Rng + ?Sized,
{
    let d = f.num_items();
    let mut x = ItemSet::empty();
    let mut y = ItemSet::full(d);
    for i in 0..d {
        let x_with = x.with(i);
        let y_without = y.without(i);
        let alpha = f.value(&x_with) - f.value(&x);
        let beta = f.value(&y_without) - f.value(&y);
        if rng.random::<f64>() < default_probability(alpha, beta) {
            x = x_with;
        } else {
            y = y_without;
        }
    }
    debug_assert_eq!(x, y);
    x
}

/// Best of `repeats` independent double-greedy runs; run `k` draws from
/// `stream.child(k)`, ties keep the earliest run.
pub fn dg_repeated<F: SetFunction + ?Sized>(
    f: &F,
    repeats: usize,
    stream: RngStream,
) -> Result<(ItemSet, f64)> {
    if repeats == 0 {
        return Err(Error::Parameter("repeats must be at least 1".into()));
    }
    let mut best: Option<(ItemSet, f64)> = None;
    for k in 0..repeats {
        let set = dg_offline(f, &mut stream.child(k as u64).rng());
        let v = f.value(&set);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((set, v));
        }
    }
    Ok(best.expect("repeats >= 1"))
}
