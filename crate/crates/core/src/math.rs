//! Closed-form quantities driving DG-ETC: worst-case losses, confidence
//! radii, the exploration cap, the feasible weight interval and its loss
//! minimizer, and the zone-wise exploration thresholds.
//!
//! Logarithms are natural throughout.

use crate::error::{Error, Result};
use crate::setfn::TOL;

/// Estimated add-gain `alpha`, remove-gain `beta` and Bernoulli weight `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossArgs {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

impl LossArgs {
    pub fn new(alpha: f64, beta: f64, p: f64) -> Self {
        Self { alpha, beta, p }
    }
}

/// Per-round loss of weight `p` when the item belongs to the optimum:
/// `(1−p)α − ½(pα + (1−p)β)`.
pub fn loss_plus(a: LossArgs) -> f64 {
    let LossArgs { alpha, beta, p } = a;
    (1.0 - p) * alpha - 0.5 * (p * alpha + (1.0 - p) * beta)
}

/// Per-round loss of weight `p` when the item is outside the optimum:
/// `pβ − ½(pα + (1−p)β)`.
pub fn loss_minus(a: LossArgs) -> f64 {
    let LossArgs { alpha, beta, p } = a;
    p * beta - 0.5 * (p * alpha + (1.0 - p) * beta)
}

/// Worst case of the two.
pub fn loss(a: LossArgs) -> f64 {
    loss_plus(a).max(loss_minus(a))
}

// Both branches are affine in p: intercept + slope * p.
fn plus_line(alpha: f64, beta: f64) -> (f64, f64) {
    (alpha - 0.5 * beta, 0.5 * beta - 1.5 * alpha)
}

fn minus_line(alpha: f64, beta: f64) -> (f64, f64) {
    (-0.5 * beta, 1.5 * beta - 0.5 * alpha)
}

/// Per-item cap on estimation blocks: `⌈T^{2/3} ln(dT)^{1/3}⌉`.
pub fn tau_max(horizon: u64, d: usize) -> Result<u64> {
    let dt = horizon as f64 * d as f64;
    if !(dt >= 2.0) {
        return Err(Error::Parameter(format!(
            "tau_max needs d*T >= 2, got d={d}, T={horizon}"
        )));
    }
    Ok(((horizon as f64).powf(2.0 / 3.0) * dt.ln().cbrt()).ceil() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfidenceParams {
    pub d: usize,
    pub horizon: u64,
    pub delta: f64,
    /// Sub-Gaussian scale of the noise.
    pub sigma: f64,
    /// Range bound of the reward function.
    pub c: f64,
}

impl ConfidenceParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if self.d == 0 {
            return bad("need at least one item".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1".into());
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return bad(format!("delta must lie in (0, 1], got {}", self.delta));
        }
        if !(self.sigma > 0.0) {
            return bad(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.c > 0.0) {
            return bad(format!("range bound c must be positive, got {}", self.c));
        }
        Ok(())
    }

    fn variance_proxy(&self) -> f64 {
        2.0 * self.sigma * self.sigma + self.c * self.c
    }

    fn log_dt(&self) -> f64 {
        (self.d as f64 * self.horizon as f64).ln()
    }
}

/// Radius `g_{T,δ}` bounding the per-round exploitation error after one block.
pub fn g_conf(p: &ConfidenceParams) -> Result<f64> {
    p.validate()?;
    if (p.d as f64) * (p.horizon as f64) < 2.0 {
        return Err(Error::Parameter(format!("need d*T >= 2, got d={}, T={}", p.d, p.horizon)));
    }
    Ok(g_radius(
        p.variance_proxy(),
        p.c,
        p.log_dt(),
        p.horizon as f64,
        p.delta,
    ))
}

pub(crate) fn g_radius(var: f64, c: f64, log_dt: f64, horizon: f64, delta: f64) -> f64 {
    let ratio = log_dt / horizon;
    (2.0 * var).sqrt()
        * (2.0 * log_dt + (1.0 / delta).ln()).sqrt()
        * (1.0 + 2.0 * ratio.sqrt() + 9.0 * c / var.sqrt() * ratio.cbrt())
}

/// Estimation radius `γ_{T,δ} = 3√((2σ²+c²)(ln(dT/δ) + ln(1+T)))`.
pub fn gamma_conf(p: &ConfidenceParams) -> Result<f64> {
    p.validate()?;
    let t = p.horizon as f64;
    Ok(3.0 * (p.variance_proxy() * ((p.d as f64 * t / p.delta).ln() + (1.0 + t).ln())).sqrt())
}

/// Closed interval of `[0, 1]`, possibly empty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FeasibleInterval {
    Empty,
    Closed { lo: f64, hi: f64 },
}

impl FeasibleInterval {
    pub fn is_empty(&self) -> bool {
        matches!(self, FeasibleInterval::Empty)
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            FeasibleInterval::Empty => false,
            FeasibleInterval::Closed { lo, hi } => lo <= x && x <= hi,
        }
    }
}

/// `{x ∈ [0,1] : ℓ(α, β, x) + threshold ≤ 0}`, solved exactly from the two
/// affine branches.
pub fn feasible_interval(alpha: f64, beta: f64, threshold: f64) -> FeasibleInterval {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for (intercept, slope) in [plus_line(alpha, beta), minus_line(alpha, beta)] {
        let rhs = -threshold - intercept;
        if slope > 0.0 {
            hi = hi.min(rhs / slope);
        } else if slope < 0.0 {
            lo = lo.max(rhs / slope);
        } else if rhs < 0.0 {
            return FeasibleInterval::Empty;
        }
    }
    if lo <= hi {
        FeasibleInterval::Closed { lo, hi }
    } else {
        FeasibleInterval::Empty
    }
}

/// Values within this distance of the minimum count as ties; the smallest `p` wins.
const ARGMIN_TIE: f64 = 1e-12;

/// Minimizes `ℓ(α, β, ·)` over a non-empty interval. The objective is the
/// maximum of two affine functions, so the minimum sits at an endpoint or at
/// the crossing `p = α/(α+β)`.
pub fn argmin_loss_on_interval(alpha: f64, beta: f64, iv: FeasibleInterval) -> Result<(f64, f64)> {
    let FeasibleInterval::Closed { lo, hi } = iv else {
        return Err(Error::Precondition("argmin over an empty interval".into()));
    };
    let mut candidates = vec![lo, hi];
    let sum = alpha + beta;
    if sum != 0.0 {
        let cross = alpha / sum;
        if lo < cross && cross < hi {
            candidates.push(cross);
        }
    }
    candidates.sort_by(f64::total_cmp);
    let values: Vec<f64> = candidates
        .iter()
        .map(|&p| loss(LossArgs::new(alpha, beta, p)))
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let k = values
        .iter()
        .position(|&v| v <= min + ARGMIN_TIE)
        .expect("at least one candidate");
    Ok((candidates[k], values[k]))
}

/// Double-greedy weight `α₊/(α₊+β₊)`; `½` when both parts vanish.
pub fn default_probability(alpha: f64, beta: f64) -> f64 {
    let (a, b) = (alpha.max(0.0), beta.max(0.0));
    if a + b > 0.0 {
        a / (a + b)
    } else {
        0.5
    }
}

/// DG-hardness ratio `(α₊+β₊)²/(α₊−β₊)⁴`, `+∞` when `|α₊−β₊| ≤ 1e−9`
/// (including `α₊ = β₊ = 0`).
pub fn hardness_ratio(alpha: f64, beta: f64) -> f64 {
    let (a, b) = (alpha.max(0.0), beta.max(0.0));
    let gap = a - b;
    if gap.abs() <= TOL {
        f64::INFINITY
    } else {
        (a + b).powi(2) / gap.powi(4)
    }
}

/// Exploration threshold on `τ/(g+γ)²` for true marginals `(ᾱ, β̄)`, taken
/// zone by zone:
///
/// | zone | region                 | threshold            |
/// |------|------------------------|----------------------|
/// | 1    | ᾱ ≤ 0, β̄ > 0          | 1/β̄²                |
/// | 2    | 0 ≤ ᾱ ≤ β̄/3           | 1/(β̄−2ᾱ)²           |
/// | 3    | 0 ≤ β̄/3 ≤ ᾱ ≤ 3β̄     | (ᾱ+β̄)²/(β̄−ᾱ)⁴      |
/// | 4    | 0 ≤ 3β̄ ≤ ᾱ            | 1/(ᾱ−2β̄)²           |
/// | 5    | ᾱ > 0, β̄ ≤ 0          | 1/ᾱ²                |
///
/// Zones are closed and the minimum is taken where they overlap. Outside
/// `ᾱ + β̄ ≥ −1e−9` no zone applies and the result is `+∞`.
pub fn zone_threshold(alpha_bar: f64, beta_bar: f64) -> f64 {
    let (a, b) = (alpha_bar, beta_bar);
    if !(a + b >= -TOL) {
        return f64::INFINITY;
    }
    let inv_sq = |x: f64| if x == 0.0 { f64::INFINITY } else { 1.0 / (x * x) };
    let mut best = f64::INFINITY;
    if a <= 0.0 && b > 0.0 {
        best = best.min(inv_sq(b));
    }
    if 0.0 <= a && a <= b / 3.0 {
        best = best.min(inv_sq(b - 2.0 * a));
    }
    if 0.0 <= b && b / 3.0 <= a && a <= 3.0 * b {
        let gap = b - a;
        if gap.abs() > TOL {
            best = best.min((a + b).powi(2) / gap.powi(4));
        }
    }
    if 0.0 <= b && 3.0 * b <= a {
        best = best.min(inv_sq(a - 2.0 * b));
    }
    if a > 0.0 && b <= 0.0 {
        best = best.min(inv_sq(a));
    }
    best
}
