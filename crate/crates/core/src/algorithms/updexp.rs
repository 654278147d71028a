use super::ExitBranch;
use crate::error::{Error, Result};
use crate::math::{argmin_loss_on_interval, default_probability, feasible_interval};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdExpResult {
    /// Committed weight, or ½ while exploration continues.
    pub p: f64,
    pub next_item: usize,
    /// `None` while the item keeps being explored.
    pub exit: Option<ExitBranch>,
}

/// Exploration update after `tau` blocks on `item`: commit the loss
/// minimizer over `{x : ℓ(α̂, β̂, x) + g/√τ ≤ 0}` when that set is non-empty,
/// fall back to the double-greedy weight once `tau ≥ tau_max`, and keep
/// exploring otherwise.
pub fn upd_exp(
    item: usize,
    alpha_hat: f64,
    beta_hat: f64,
    tau: u64,
    g: f64,
    tau_max: u64,
) -> Result<UpdExpResult> {
    if tau == 0 {
        return Err(Error::Precondition("exploration update needs at least one block".into()));
    }
    let radius = g / (tau as f64).sqrt();
    let interval = feasible_interval(alpha_hat, beta_hat, radius);
    if !interval.is_empty() {
        let (p, _) = argmin_loss_on_interval(alpha_hat, beta_hat, interval)?;
        return Ok(UpdExpResult {
            p,
            next_item: item + 1,
            exit: Some(ExitBranch::Lambda),
        });
    }
    if tau >= tau_max {
        return Ok(UpdExpResult {
            p: default_probability(alpha_hat, beta_hat),
            next_item: item + 1,
            exit: Some(ExitBranch::Cap),
        });
    }
    Ok(UpdExpResult {
        p: 0.5,
        next_item: item,
        exit: None,
    })
}
