use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ConstantFunction, ExampleFamily, ExampleFamilyParams, Permuted, SetFunction, TableFunction};
use crate::error::{Error, Result};

/// Plain-text description of a set-function, e.g. in TOML:
///
/// ```toml
/// family = "example"
/// xi = [0.5, -0.25]
/// nu = 1.0
/// permutation = [1, 0]   # optional
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionDescriptor {
    #[serde(flatten)]
    pub family: Family,
    /// Item order seen by the algorithms: position `k` is item `permutation[k]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Example {
        xi: Vec<f64>,
        nu: f64,
    },
    Constant {
        d: usize,
        value: f64,
    },
    /// Values indexed by bit pattern; `c` defaults to the largest value.
    Table {
        d: usize,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
    },
}

impl FunctionDescriptor {
    pub fn example(xi: Vec<f64>, nu: f64) -> Self {
        Self {
            family: Family::Example { xi, nu },
            permutation: None,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("descriptor is always representable in TOML")
    }

    /// Parameters of the power-sum family, if that is the family described.
    pub fn example_params(&self) -> Option<ExampleFamilyParams> {
        match &self.family {
            Family::Example { xi, nu } => Some(ExampleFamilyParams::new(xi.clone(), *nu)),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Arc<dyn SetFunction>> {
        let base: Arc<dyn SetFunction> = match &self.family {
            Family::Example { xi, nu } => {
                Arc::new(ExampleFamily::new(ExampleFamilyParams::new(xi.clone(), *nu))?)
            }
            Family::Constant { d, value } => {
                if *value < 0.0 {
                    return Err(Error::Parameter(format!("constant value {value} is negative")));
                }
                Arc::new(ConstantFunction::new(*d, *value))
            }
            Family::Table { d, values, c } => {
                let c = c.unwrap_or_else(|| values.iter().copied().fold(0.0, f64::max));
                Arc::new(TableFunction::new(*d, values.clone(), c)?)
            }
        };
        match &self.permutation {
            None => Ok(base),
            Some(order) => Ok(Arc::new(Permuted::new(base, order.clone())?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itemset::ItemSet;

    #[test]
    fn parses_and_builds_each_family() {
        let d = FunctionDescriptor::from_toml_str(
            "family = \"example\"\nxi = [0.5, -0.25]\nnu = 1.0\npermutation = [1, 0]\n",
        )
        .unwrap();
        assert_eq!(d.permutation, Some(vec![1, 0]));
        let f = d.build().unwrap();
        assert_eq!(f.value(&ItemSet::from_items([1])), 0.75);

        let d = FunctionDescriptor::from_toml_str("family = \"constant\"\nd = 3\nvalue = 0.5\n").unwrap();
        assert_eq!(d.build().unwrap().num_items(), 3);

        let d = FunctionDescriptor::from_toml_str(
            "family = \"table\"\nd = 1\nvalues = [0.0, 2.0]\n",
        )
        .unwrap();
        assert_eq!(d.build().unwrap().range_bound(), 2.0);
    }

    #[test]
    fn round_trips_through_toml() {
        let mut d = FunctionDescriptor::example(vec![0.5, -0.25, 1.0], 0.5);
        d.permutation = Some(vec![2, 0, 1]);
        let back = FunctionDescriptor::from_toml_str(&d.to_toml_string()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn rejects_unknown_family_and_bad_params() {
        assert!(FunctionDescriptor::from_toml_str("family = \"cut\"\n").is_err());
        let d = FunctionDescriptor::example(vec![0.5], 2.0);
        assert!(matches!(d.build(), Err(Error::Parameter(_))));
    }
}
