//! Reference implementations written straight from the definitions, shared by
//! the integration suites. None of them call into the library's math.
#![allow(dead_code)]

use dgetc_core::setfn::{ExampleFamily, ExampleFamilyParams};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Power-sum family value on a bit mask.
pub fn power_sum(xi: &[f64], nu: f64, mask: u64) -> f64 {
    let neg_all: f64 = xi.iter().filter(|x| **x < 0.0).map(|x| -x).sum();
    let mut pos = 0.0;
    let mut neg = 0.0;
    for (i, &x) in xi.iter().enumerate() {
        if mask >> i & 1 == 1 {
            if x >= 0.0 {
                pos += x;
            } else {
                neg += -x;
            }
        }
    }
    pos.powf(nu) - neg.powf(1.0 / nu) + neg_all.powf(1.0 / nu)
}

/// `max_A f(A)` by enumerating masks.
pub fn brute_max(d: usize, f: impl Fn(u64) -> f64) -> f64 {
    (0..1u64 << d).map(f).fold(f64::NEG_INFINITY, f64::max)
}

pub fn loss_plus(a: f64, b: f64, p: f64) -> f64 {
    (1.0 - p) * a - 0.5 * (p * a + (1.0 - p) * b)
}

pub fn loss_minus(a: f64, b: f64, p: f64) -> f64 {
    p * b - 0.5 * (p * a + (1.0 - p) * b)
}

pub fn loss(a: f64, b: f64, p: f64) -> f64 {
    loss_plus(a, b, p).max(loss_minus(a, b, p))
}

/// `{p ∈ [0,1] : ℓ(p) ≤ −s}` from the affine pieces read off at `p = 0, 1`.
pub fn interval(a: f64, b: f64, s: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for piece in [loss_plus as fn(f64, f64, f64) -> f64, loss_minus] {
        let at0 = piece(a, b, 0.0);
        let slope = piece(a, b, 1.0) - at0;
        // at0 + slope·p ≤ −s
        let rhs = -s - at0;
        if slope > 0.0 {
            hi = hi.min(rhs / slope);
        } else if slope < 0.0 {
            lo = lo.max(rhs / slope);
        } else if rhs < 0.0 {
            return None;
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Minimum of `ℓ` on `[lo, hi]`: endpoints plus the crossing point of the
/// two pieces, located by bisection.
pub fn min_loss(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let diff = |p: f64| loss_plus(a, b, p) - loss_minus(a, b, p);
    let mut best = loss(a, b, lo).min(loss(a, b, hi));
    if diff(lo) * diff(hi) < 0.0 {
        let (mut l, mut h) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (l + h);
            if diff(l) * diff(m) <= 0.0 {
                h = m;
            } else {
                l = m;
            }
        }
        best = best.min(loss(a, b, 0.5 * (l + h)));
    }
    best
}

pub fn g_radius(d: usize, t: f64, delta: f64, sigma: f64, c: f64) -> f64 {
    let k = 2.0 * sigma * sigma + c * c;
    let l = (d as f64 * t).ln();
    (2.0 * k).sqrt()
        * (2.0 * l + (1.0 / delta).ln()).sqrt()
        * (1.0 + 2.0 * (l / t).sqrt() + 9.0 * c / k.sqrt() * (l / t).powf(1.0 / 3.0))
}

pub fn gamma_radius(d: usize, t: f64, delta: f64, sigma: f64, c: f64) -> f64 {
    3.0 * ((2.0 * sigma * sigma + c * c) * ((d as f64 * t / delta).ln() + (1.0 + t).ln())).sqrt()
}

pub fn tau_cap(d: usize, t: f64) -> u64 {
    (t.powf(2.0 / 3.0) * (d as f64 * t).ln().powf(1.0 / 3.0)).ceil() as u64
}

/// Weights uniform on `[−1, 1]`, none within `min_abs` of zero.
pub fn random_xi(rng: &mut ChaCha8Rng, d: usize, min_abs: f64) -> Vec<f64> {
    (0..d)
        .map(|_| loop {
            let x: f64 = rng.random_range(-1.0..=1.0);
            if x.abs() >= min_abs {
                break x;
            }
        })
        .collect()
}

/// `(Σξ₊)^ν + (Σξ₋)^{1/ν}`.
pub fn declared_c(xi: &[f64], nu: f64) -> f64 {
    let pos: f64 = xi.iter().filter(|x| **x >= 0.0).sum();
    let neg: f64 = xi.iter().filter(|x| **x < 0.0).map(|x| -x).sum();
    pos.powf(nu) + neg.powf(1.0 / nu)
}

/// Rescales `xi` so that the declared range bound is 1, as far as the
/// `[−1, 1]` box allows.
pub fn scale_to_unit_range(xi: &[f64], nu: f64) -> Vec<f64> {
    let max_scale = 1.0 / xi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scaled = |s: f64| xi.iter().map(|x| x * s).collect::<Vec<_>>();
    if declared_c(&scaled(max_scale), nu) <= 1.0 {
        return scaled(max_scale);
    }
    let (mut lo, mut hi) = (0.0, max_scale);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if declared_c(&scaled(mid), nu) > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    scaled(lo)
}

pub fn family(xi: Vec<f64>, nu: f64) -> ExampleFamily {
    ExampleFamily::new(ExampleFamilyParams::new(xi, nu)).unwrap()
}
