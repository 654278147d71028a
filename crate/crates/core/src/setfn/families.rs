use serde::{Deserialize, Serialize};

use super::SetFunction;
use crate::error::{Error, Result};
use crate::itemset::ItemSet;

/// Parameters `(ξ, ν)` of the power-sum family
/// `g(X) = (Σ_{i∈X, ξᵢ≥0} ξᵢ)^ν − (Σ_{i∈X, ξᵢ<0} −ξᵢ)^{1/ν} + ‖ξ₋‖₁^{1/ν}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleFamilyParams {
    pub xi: Vec<f64>,
    pub nu: f64,
}

impl ExampleFamilyParams {
    pub fn new(xi: Vec<f64>, nu: f64) -> Self {
        Self { xi, nu }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::Parameter(format!("nu must lie in (0, 1], got {}", self.nu)));
        }
        if let Some((i, x)) = self
            .xi
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.abs() <= 1.0))
        {
            return Err(Error::Parameter(format!("xi[{i}] = {x} must lie in [-1, 1]")));
        }
        Ok(())
    }
}

/// Submodular power-sum family; modular when `ν = 1`.
#[derive(Clone, Debug)]
pub struct ExampleFamily {
    params: ExampleFamilyParams,
    offset: f64,
    c: f64,
}

impl ExampleFamily {
    pub fn new(params: ExampleFamilyParams) -> Result<Self> {
        params.validate()?;
        let pos: f64 = params.xi.iter().filter(|x| **x >= 0.0).sum();
        let neg: f64 = params.xi.iter().filter(|x| **x < 0.0).map(|x| -x).sum();
        let offset = neg.powf(1.0 / params.nu);
        let c = pos.powf(params.nu) + offset;
        Ok(Self { params, offset, c })
    }

    pub fn params(&self) -> &ExampleFamilyParams {
        &self.params
    }
}

impl SetFunction for ExampleFamily {
    fn num_items(&self) -> usize {
        self.params.xi.len()
    }

    fn range_bound(&self) -> f64 {
        self.c
    }

    fn value(&self, set: &ItemSet) -> f64 {
        let (mut pos, mut neg) = (0.0, 0.0);
        for i in set {
            let x = self.params.xi[i];
            if x >= 0.0 {
                pos += x;
            } else {
                neg -= x;
            }
        }
        pos.powf(self.params.nu) - neg.powf(1.0 / self.params.nu) + self.offset
    }
}

#[derive(Clone, Debug)]
pub struct ConstantFunction {
    d: usize,
    value: f64,
}

impl ConstantFunction {
    pub fn new(d: usize, value: f64) -> Self {
        Self { d, value }
    }
}

impl SetFunction for ConstantFunction {
    fn num_items(&self) -> usize {
        self.d
    }

    fn range_bound(&self) -> f64 {
        self.value
    }

    fn value(&self, _set: &ItemSet) -> f64 {
        self.value
    }
}

/// Explicit value table indexed by the set's bit pattern; `d ≤ 24`.
#[derive(Clone, Debug)]
pub struct TableFunction {
    d: usize,
    values: Vec<f64>,
    c: f64,
}

impl TableFunction {
    pub const MAX_ITEMS: usize = 24;

    pub fn new(d: usize, values: Vec<f64>, c: f64) -> Result<Self> {
        if d > Self::MAX_ITEMS {
            return Err(Error::Capacity {
                what: "table function",
                max: Self::MAX_ITEMS,
                d,
            });
        }
        if values.len() != 1 << d {
            return Err(Error::Parameter(format!(
                "table for {d} items needs {} values, got {}",
                1u64 << d,
                values.len()
            )));
        }
        Ok(Self { d, values, c })
    }

    /// Tabulates `value(mask)` for every subset of `[d]`.
    pub fn from_fn(d: usize, c: f64, value: impl Fn(&ItemSet) -> f64) -> Result<Self> {
        if d > Self::MAX_ITEMS {
            return Err(Error::Capacity {
                what: "table function",
                max: Self::MAX_ITEMS,
                d,
            });
        }
        let values = (0..1u64 << d).map(|m| value(&ItemSet::from_bits(m))).collect();
        Self::new(d, values, c)
    }
}

impl SetFunction for TableFunction {
    fn num_items(&self) -> usize {
        self.d
    }

    fn range_bound(&self) -> f64 {
        self.c
    }

    fn value(&self, set: &ItemSet) -> f64 {
        let mask = set.bits().expect("table function sets fit in one word");
        self.values[mask as usize]
    }
}

/// Relabels items: position `k` of the permuted function is item `order[k]` of
/// the inner one, so algorithms sweeping `0, 1, ..` visit `order[0], order[1], ..`.
#[derive(Clone, Debug)]
pub struct Permuted<F> {
    inner: F,
    order: Vec<usize>,
}

impl<F: SetFunction> Permuted<F> {
    pub fn new(inner: F, order: Vec<usize>) -> Result<Self> {
        let d = inner.num_items();
        let mut seen = vec![false; d];
        if order.len() != d {
            return Err(Error::Parameter(format!(
                "permutation has {} entries for {d} items",
                order.len()
            )));
        }
        for &i in &order {
            if i >= d || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Parameter(format!("{order:?} is not a permutation of 0..{d}")));
            }
        }
        Ok(Self { inner, order })
    }
}

impl<F: SetFunction> SetFunction for Permuted<F> {
    fn num_items(&self) -> usize {
        self.inner.num_items()
    }

    fn range_bound(&self) -> f64 {
        self.inner.range_bound()
    }

    fn value(&self, set: &ItemSet) -> f64 {
        let mapped: ItemSet = set.iter().map(|k| self.order[k]).collect();
        self.inner.value(&mapped)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        for nu in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                ExampleFamily::new(ExampleFamilyParams::new(vec![0.1], nu)),
                Err(Error::Parameter(_))
            ));
        }
        assert!(ExampleFamily::new(ExampleFamilyParams::new(vec![1.2], 1.0)).is_err());
    }

    #[test]
    fn declared_range() {
        let g = ExampleFamily::new(ExampleFamilyParams::new(vec![0.5, -0.25], 1.0)).unwrap();
        assert_eq!(g.range_bound(), 0.75);
        let g = ExampleFamily::new(ExampleFamilyParams::new(vec![0.0; 3], 0.5)).unwrap();
        assert_eq!(g.range_bound(), 0.0);
        for m in 0..8 {
            assert_eq!(g.value(&ItemSet::from_bits(m)), 0.0);
        }
    }

    #[test]
    fn square_root_member() {
        let g = ExampleFamily::new(ExampleFamilyParams::new(vec![1.0], 0.5)).unwrap();
        assert_eq!(g.value(&ItemSet::empty()), 0.0);
        assert_eq!(g.value(&ItemSet::from_items([0])), 1.0);
    }

    #[test]
    fn permutation_relabels_items() {
        let g = ExampleFamily::new(ExampleFamilyParams::new(vec![0.5, -0.25], 1.0)).unwrap();
        let p = Permuted::new(g.clone(), vec![1, 0]).unwrap();
        assert_eq!(p.value(&ItemSet::from_items([0])), g.value(&ItemSet::from_items([1])));
        assert_eq!(p.value(&ItemSet::from_items([1])), 0.75);
        assert!(Permuted::new(g.clone(), vec![0, 0]).is_err());
        assert!(Permuted::new(g, vec![0]).is_err());
    }

    #[test]
    fn table_size_is_checked() {
        assert!(TableFunction::new(2, vec![0.0; 3], 1.0).is_err());
        assert!(matches!(
            TableFunction::new(30, vec![], 1.0),
            Err(Error::Capacity { .. })
        ));
    }
}
