//! Exponential-time exact oracles: optimum, submodularity, DG-hardness.

use std::io::Write;

use serde::Serialize;

use super::{alpha_unchecked, beta_unchecked, ExampleFamily, ExampleFamilyParams, SetFunction, TOL};
use crate::error::{Error, Result};
use crate::itemset::ItemSet;
use crate::math::{hardness_ratio, zone_threshold};

pub const MAX_BRUTE_FORCE_ITEMS: usize = 25;
pub const MAX_SUBMODULAR_CHECK_ITEMS: usize = 12;
pub const MAX_HARDNESS_ITEMS: usize = 20;

fn capacity(what: &'static str, max: usize, d: usize) -> Result<()> {
    if d > max {
        Err(Error::Capacity { what, max, d })
    } else {
        Ok(())
    }
}

/// Exhaustive maximizer of `f`; ties go to the smallest bit pattern.
pub fn brute_force_optimum<F: SetFunction + ?Sized>(f: &F) -> Result<(ItemSet, f64)> {
    let d = f.num_items();
    capacity("brute-force optimum", MAX_BRUTE_FORCE_ITEMS, d)?;
    let mut best = (0u64, f.value(&ItemSet::empty()));
    for mask in 1..1u64 << d {
        let v = f.value(&ItemSet::from_bits(mask));
        if v > best.1 {
            best = (mask, v);
        }
    }
    Ok((ItemSet::from_bits(best.0), best.1))
}

fn tabulate<F: SetFunction + ?Sized>(f: &F) -> Vec<f64> {
    (0..1u64 << f.num_items())
        .map(|m| f.value(&ItemSet::from_bits(m)))
        .collect()
}

/// Exhaustive submodularity test via diminishing returns
/// (`f(B∪{i}) − f(B) ≤ f(A∪{i}) − f(A)` for `A ⊆ B`, `i ∉ B`), cross-checked
/// against the lattice form `f(A∪B) + f(A∩B) ≤ f(A) + f(B)`.
///
/// Returns `Error::Internal` if the two characterizations disagree beyond
/// what tolerance accumulation can explain.
pub fn check_submodular<F: SetFunction + ?Sized>(f: &F) -> Result<bool> {
    let d = f.num_items();
    capacity("submodularity check", MAX_SUBMODULAR_CHECK_ITEMS, d)?;
    let table = tabulate(f);
    let full = (1usize << d) - 1;

    let mut returns_violation = f64::NEG_INFINITY;
    for b in 0..=full {
        let outside = full & !b;
        let mut a = b;
        loop {
            let mut rest = outside;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                let v = (table[b | bit] - table[b]) - (table[a | bit] - table[a]);
                returns_violation = returns_violation.max(v);
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
    }

    let mut lattice_violation = f64::NEG_INFINITY;
    for a in 0..=full {
        for b in a..=full {
            let v = table[a | b] + table[a & b] - table[a] - table[b];
            lattice_violation = lattice_violation.max(v);
        }
    }

    let by_returns = returns_violation <= TOL;
    let by_lattice = lattice_violation <= TOL;
    if by_returns != by_lattice {
        // A lattice violation telescopes into at most d diminishing-returns steps.
        let explained = by_returns && lattice_violation <= (d as f64 + 1.0) * TOL;
        if !explained {
            return Err(Error::Internal(format!(
                "submodularity characterizations disagree: diminishing returns violation \
                 {returns_violation:e}, lattice violation {lattice_violation:e}"
            )));
        }
    }
    Ok(by_returns)
}

fn for_each_prefix(item: usize, mut visit: impl FnMut(&ItemSet) -> bool) {
    for mask in 0..1u64 << item {
        if !visit(&ItemSet::from_bits(mask)) {
            return;
        }
    }
}

/// Checks `α_f(i, X) + β_f(i, X) ≥ −1e−9` for every item and every prefix
/// `X ⊆ {0, .., i−1}`.
pub fn check_lemma3<F: SetFunction + ?Sized>(f: &F) -> Result<bool> {
    let d = f.num_items();
    capacity("marginal-sum check", MAX_HARDNESS_ITEMS, d)?;
    let mut ok = true;
    for i in 0..d {
        for_each_prefix(i, |x| {
            ok = alpha_unchecked(f, i, x) + beta_unchecked(f, i, x) >= -TOL;
            ok
        });
        if !ok {
            break;
        }
    }
    Ok(ok)
}

/// Local and global DG-hardness with the matching DG-gaps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardnessReport {
    /// `h_{f,i}`; `f64::INFINITY` when unbounded.
    pub per_item: Vec<f64>,
    pub global: f64,
    /// `h^{-1/2}`, and 0 where `h` is infinite.
    pub gaps: Vec<f64>,
}

impl HardnessReport {
    pub fn from_per_item(per_item: Vec<f64>) -> Self {
        let global = per_item.iter().sum();
        let gaps = per_item
            .iter()
            .map(|&h| if h.is_finite() { h.powf(-0.5) } else { 0.0 })
            .collect();
        Self {
            per_item,
            global,
            gaps,
        }
    }

    /// Writes the `item,h,gap` table.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["item", "h", "gap"])?;
        for (i, (h, gap)) in self.per_item.iter().zip(&self.gaps).enumerate() {
            w.write_record([i.to_string(), h.to_string(), gap.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `h_{f,i} = max_{X ⊆ [i−1]} (α₊+β₊)² / (α₊−β₊)⁴` for each item.
pub fn compute_hardness<F: SetFunction + ?Sized>(f: &F) -> Result<HardnessReport> {
    let per_item = per_item_max(f, hardness_ratio)?;
    Ok(HardnessReport::from_per_item(per_item))
}

/// Tighter per-item exploration thresholds: the maximum over prefixes of the
/// zone-wise threshold evaluated at the exact marginals.
pub fn zone_hardness<F: SetFunction + ?Sized>(f: &F) -> Result<Vec<f64>> {
    per_item_max(f, zone_threshold)
}

fn per_item_max<F: SetFunction + ?Sized>(f: &F, ratio: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
    let d = f.num_items();
    capacity("hardness computation", MAX_HARDNESS_ITEMS, d)?;
    Ok((0..d)
        .map(|i| {
            let mut h: f64 = 0.0;
            for_each_prefix(i, |x| {
                h = h.max(ratio(alpha_unchecked(f, i, x), beta_unchecked(f, i, x)));
                h.is_finite()
            });
            h
        })
        .collect())
}

/// Closed-form DG-gaps of the power-sum family: the gain of adding item `i`
/// to `{0, .., i−1}` when `ξᵢ ≥ 0`, otherwise the gain of removing it from
/// `{i, .., d−1}`.
pub fn closed_form_gaps_example(params: &ExampleFamilyParams) -> Result<Vec<f64>> {
    let g = ExampleFamily::new(params.clone())?;
    let d = params.xi.len();
    Ok((0..d)
        .map(|i| {
            if params.xi[i] >= 0.0 {
                let below = ItemSet::full(i);
                g.value(&below.with(i)) - g.value(&below)
            } else {
                let from = ItemSet::full(d).intersection(&ItemSet::full(i).complement(d));
                g.value(&from.without(i)) - g.value(&from)
            }
        })
        .collect())
}
