//! Library quantities against the reference implementations in `common`.

mod common;

use common::*;
use dgetc_core::math::{
    argmin_loss_on_interval, default_probability, feasible_interval, g_conf, gamma_conf, loss, loss_minus,
    loss_plus, tau_max, ConfidenceParams, FeasibleInterval, LossArgs,
};
use dgetc_core::setfn::{brute_force_optimum, compute_hardness, validate_range, FunctionDescriptor, Permuted};
use dgetc_core::{ItemSet, SetFunction};
use proptest::prelude::*;

fn xi_strategy(max_d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..=1.0, 1..=max_d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn family_values_match_definition(xi in xi_strategy(10), nu in prop::sample::select(vec![0.25, 0.5, 1.0]), mask in any::<u64>()) {
        let d = xi.len();
        let mask = mask & ((1u64 << d) - 1);
        let f = family(xi.clone(), nu);
        prop_assert!((f.value(&ItemSet::from_bits(mask)) - power_sum(&xi, nu, mask)).abs() < 1e-12);
        prop_assert!((f.range_bound() - declared_c(&xi, nu)).abs() < 1e-12);
    }

    #[test]
    fn optimum_matches_enumeration(xi in xi_strategy(9), nu in prop::sample::select(vec![0.5, 1.0])) {
        let d = xi.len();
        let f = family(xi.clone(), nu);
        let (set, v) = brute_force_optimum(&f).unwrap();
        let want = brute_max(d, |m| power_sum(&xi, nu, m));
        prop_assert!((v - want).abs() < 1e-12);
        prop_assert!((power_sum(&xi, nu, set.bits().unwrap()) - v).abs() < 1e-12);
        prop_assert!(validate_range(&f).is_ok());
    }

    #[test]
    fn modular_gaps_are_weights(xi in prop::collection::vec(prop_oneof![-1.0f64..-1e-3, 1e-3f64..1.0], 1..=10)) {
        let r = compute_hardness(&family(xi.clone(), 1.0)).unwrap();
        for (i, x) in xi.iter().enumerate() {
            prop_assert!((r.gaps[i] - x.abs()).abs() < 1e-9);
            prop_assert!((r.per_item[i] - 1.0 / (x * x)).abs() <= 1e-9 * r.per_item[i]);
        }
        let sum: f64 = r.per_item.iter().sum();
        prop_assert!((r.global - sum).abs() <= 1e-12 * sum);
    }

    #[test]
    fn losses_match_definition(a in -2.0f64..2.0, b in -2.0f64..2.0, p in 0.0f64..=1.0) {
        let args = LossArgs::new(a, b, p);
        prop_assert!((loss_plus(args) - common::loss_plus(a, b, p)).abs() < 1e-12);
        prop_assert!((loss_minus(args) - common::loss_minus(a, b, p)).abs() < 1e-12);
        prop_assert!((loss(args) - common::loss(a, b, p)).abs() < 1e-12);
        prop_assert!((loss_plus(args) + loss_minus(args) - (1.0 - 2.0 * p) * (a - b)).abs() < 1e-12);
    }

    #[test]
    fn interval_and_minimizer_match_reference(a in -1.0f64..1.0, b in -1.0f64..1.0, s in 0.0f64..0.5) {
        let got = feasible_interval(a, b, s);
        match (got, interval(a, b, s)) {
            (FeasibleInterval::Closed { lo, hi }, Some((wl, wh))) => {
                prop_assert!((lo - wl).abs() < 1e-9 && (hi - wh).abs() < 1e-9);
                let (p, v) = argmin_loss_on_interval(a, b, got).unwrap();
                prop_assert!(lo <= p && p <= hi);
                prop_assert!((v - min_loss(a, b, wl, wh)).abs() < 1e-9);
                prop_assert!(v + s <= 1e-12);
            }
            (FeasibleInterval::Empty, None) => {
                prop_assert!(argmin_loss_on_interval(a, b, got).is_err());
            }
            (g, w) => {
                // allowed only when the interval degenerates to a touching point
                let touching = (0..=1000).map(|k| common::loss(a, b, k as f64 / 1000.0) + s).fold(f64::INFINITY, f64::min);
                prop_assert!(touching.abs() < 1e-6, "{:?} vs {:?}", g, w);
            }
        }
    }

    #[test]
    fn radii_match_formulas(d in 1usize..20, t in 2u64..10_000_000, delta in 0.001f64..1.0, sigma in 0.01f64..2.0, c in 0.1f64..5.0) {
        let p = ConfidenceParams { d, horizon: t, delta, sigma, c };
        let g = g_conf(&p).unwrap();
        let gamma = gamma_conf(&p).unwrap();
        prop_assert!((g - g_radius(d, t as f64, delta, sigma, c)).abs() <= 1e-10 * g);
        prop_assert!((gamma - gamma_radius(d, t as f64, delta, sigma, c)).abs() <= 1e-10 * gamma);
        prop_assert_eq!(tau_max(t, d).unwrap(), tau_cap(d, t as f64));
    }

    #[test]
    fn default_weight_never_loses(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        prop_assume!(a + b >= 0.0);
        let p = default_probability(a, b);
        prop_assert!(common::loss(a, b, p) <= 1e-12);
        if a > 0.0 && b > 0.0 {
            prop_assert!((common::loss(a, b, p) + (a - b).powi(2) / (2.0 * (a + b))).abs() < 1e-12);
        }
    }

    #[test]
    fn permutation_relabels_items(xi in xi_strategy(6), seed in any::<u64>()) {
        let d = xi.len();
        let mut order: Vec<usize> = (0..d).collect();
        let mut r = rng(seed);
        use rand::seq::SliceRandom;
        order.shuffle(&mut r);
        let inner = family(xi.clone(), 0.5);
        let permuted = Permuted::new(family(xi.clone(), 0.5), order.clone()).unwrap();
        for mask in 0..1u64 << d {
            let inner_set: ItemSet = (0..d).filter(|k| mask >> k & 1 == 1).map(|k| order[k]).collect();
            prop_assert_eq!(permuted.value(&ItemSet::from_bits(mask)), inner.value(&inner_set));
        }
        let desc = FunctionDescriptor { permutation: Some(order), ..FunctionDescriptor::example(xi, 0.5) };
        let built = desc.build().unwrap();
        prop_assert!((brute_force_optimum(built.as_ref()).unwrap().1 - brute_force_optimum(&inner).unwrap().1).abs() < 1e-12);
    }
}

#[test]
fn hand_derived_examples() {
    let f = family(vec![0.5, -0.25], 1.0);
    let v: Vec<f64> = (0..4).map(|m| f.value(&ItemSet::from_bits(m))).collect();
    assert_eq!(v, vec![0.25, 0.75, 0.0, 0.5]);
    assert_eq!(brute_force_optimum(&family(vec![0.3, 0.7], 1.0)).unwrap(), (ItemSet::full(2), 1.0));
    let single = family(vec![1.0], 0.5);
    assert_eq!((single.value(&ItemSet::empty()), single.value(&ItemSet::full(1))), (0.0, 1.0));
    let r = compute_hardness(&f).unwrap();
    assert_eq!((r.per_item.clone(), r.global, r.gaps.clone()), (vec![4.0, 16.0], 20.0, vec![0.5, 0.25]));
    assert_eq!(tau_max(8, 1).unwrap(), 6);
    assert_eq!(tau_max(1, 2).unwrap(), 1);
}
