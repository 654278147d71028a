use rand::Rng;

use crate::error::{Error, Result};
use crate::itemset::ItemSet;

/// Double-greedy sampling: starting from `(∅, [d])`, each item `j < upto`
/// joins X with probability `weights[j]` and otherwise leaves Y. Returns the
/// pair reached before item `upto`; `Y \ X = {upto, .., d−1}`.
///
/// One uniform draw is consumed per sampled item, whatever its weight.
pub fn dg_sample<R: Rng + ?Sized>(
    weights: &[Option<f64>],
    upto: usize,
    rng: &mut R,
) -> Result<(ItemSet, ItemSet)> {
    let d = weights.len();
    if upto > d {
        return Err(Error::Domain(format!("sampling step {upto} beyond {d} items")));
    }
    let mut x = ItemSet::empty();
    let mut y = ItemSet::full(d);
    for (j, w) in weights[..upto].iter().enumerate() {
        let p = w.ok_or_else(|| Error::State(format!("item {j} sampled before its weight was committed")))?;
        if rng.random::<f64>() < p {
            x.insert(j);
        } else {
            y.remove(j);
        }
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::RngStream;

    #[test]
    fn first_step_draws_nothing() {
        let mut rng = RngStream::new(0, 0).rng();
        let (x, y) = dg_sample(&[None, None, None], 0, &mut rng).unwrap();
        assert_eq!((x, y), (ItemSet::empty(), ItemSet::full(3)));
    }

    #[test]
    fn all_ones_gives_full_set() {
        let mut rng = RngStream::new(0, 0).rng();
        let (x, y) = dg_sample(&[Some(1.0); 4], 4, &mut rng).unwrap();
        assert_eq!(x, ItemSet::full(4));
        assert_eq!(y, ItemSet::full(4));
    }

    #[test]
    fn degenerate_draws_follow_the_weights() {
        // K = (1, 0, 1, 0, 0, 1): X gains items with K=1, Y loses items with K=0.
        let w: Vec<Option<f64>> = [1.0, 0.0, 1.0, 0.0, 0.0, 1.0].iter().map(|&p| Some(p)).collect();
        let mut rng = RngStream::new(3, 0).rng();
        let (x, y) = dg_sample(&w, 6, &mut rng).unwrap();
        assert_eq!(x, ItemSet::from_items([0, 2, 5]));
        assert_eq!(y, x);
        let (x, y) = dg_sample(&w, 3, &mut rng).unwrap();
        assert_eq!(x, ItemSet::from_items([0, 2]));
        assert_eq!(y, ItemSet::from_items([0, 2, 3, 4, 5]));
    }

    #[test]
    fn uncommitted_prefix_is_a_state_error() {
        let mut rng = RngStream::new(0, 0).rng();
        assert!(matches!(dg_sample(&[Some(0.5), None], 2, &mut rng), Err(Error::State(_))));
        assert!(matches!(dg_sample(&[Some(0.5)], 2, &mut rng), Err(Error::Domain(_))));
    }

    #[test]
    fn intermediate_pairs_are_nested() {
        let w = vec![Some(0.5); 10];
        let mut rng = RngStream::new(4, 1).rng();
        for _ in 0..200 {
            for upto in 0..=10 {
                let (x, y) = dg_sample(&w, upto, &mut rng).unwrap();
                assert!(x.is_subset(&y));
                let undecided: ItemSet = (upto..10).collect();
                assert_eq!(y.intersection(&x.complement(10)), undecided);
            }
        }
    }
}
