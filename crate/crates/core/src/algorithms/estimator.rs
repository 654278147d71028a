use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ItemEstimate {
    /// Running mean of `Z_{t+1} − Z_t` (adding the item to X).
    pub alpha_hat: f64,
    /// Running mean of `Z_{t+3} − Z_{t+2}` (removing the item from Y).
    pub beta_hat: f64,
    /// Completed 4-round estimation blocks.
    pub tau: u64,
    pub p: Option<f64>,
}

/// Per-item running estimates and committed Bernoulli weights.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorState {
    items: Vec<ItemEstimate>,
    weights: Vec<Option<f64>>,
}

impl EstimatorState {
    pub fn new(d: usize) -> Self {
        Self {
            items: vec![ItemEstimate::default(); d],
            weights: vec![None; d],
        }
    }

    pub fn get(&self, item: usize) -> &ItemEstimate {
        &self.items[item]
    }

    pub fn items(&self) -> &[ItemEstimate] {
        &self.items
    }

    /// Committed weights, `None` for unresolved items.
    pub fn weights(&self) -> &[Option<f64>] {
        &self.weights
    }

    /// Folds one block's paired differences into the running means.
    pub fn record(&mut self, item: usize, add_diff: f64, remove_diff: f64) {
        let e = &mut self.items[item];
        let tau = e.tau as f64;
        e.alpha_hat = (tau * e.alpha_hat + add_diff) / (tau + 1.0);
        e.beta_hat = (tau * e.beta_hat + remove_diff) / (tau + 1.0);
        e.tau += 1;
    }

    pub fn commit(&mut self, item: usize, p: f64) -> Result<()> {
        if self.weights[item].is_some() {
            return Err(Error::State(format!("item {item} is already committed")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Internal(format!("weight {p} for item {item} outside [0, 1]")));
        }
        self.items[item].p = Some(p);
        self.weights[item] = Some(p);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn commit_once() {
        let mut s = EstimatorState::new(2);
        s.commit(1, 0.25).unwrap();
        assert!(matches!(s.commit(1, 0.5), Err(Error::State(_))));
        assert_eq!(s.weights(), &[None, Some(0.25)]);
        assert_eq!(s.get(1).p, Some(0.25));
    }

    proptest! {
        #[test]
        fn incremental_mean_matches_batch(diffs in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..300)) {
            let mut s = EstimatorState::new(1);
            for &(a, b) in &diffs {
                s.record(0, a, b);
            }
            let n = diffs.len() as f64;
            let mean_a = diffs.iter().map(|d| d.0).sum::<f64>() / n;
            let mean_b = diffs.iter().map(|d| d.1).sum::<f64>() / n;
            prop_assert_eq!(s.get(0).tau, diffs.len() as u64);
            prop_assert!((s.get(0).alpha_hat - mean_a).abs() <= 1e-12);
            prop_assert!((s.get(0).beta_hat - mean_b).abs() <= 1e-12);
        }
    }
}
