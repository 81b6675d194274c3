//! Randomized laws: componentwise products, coset structure, recipe
//! serialization and seeded scans.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use localities::catalog;
use localities::group::FiniteGroup;
use localities::locality::group_locality;
use localities::partial_group::PartialGroup;
use localities::products::direct_product_pg;
use localities::recipe::Recipe;
use localities::suite::{render, run_suite, Format, SuiteConfig};
use localities::words::ScanPlan;

fn groups() -> impl Strategy<Value = FiniteGroup> {
    prop::sample::select(catalog::NAMES.to_vec()).prop_map(|n| catalog::by_name(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_words_fold_associatively(g in groups(), raw in prop::collection::vec(0usize..1000, 0..7)) {
        let w: Vec<usize> = raw.iter().map(|&x| x % g.order()).collect();
        let pg = PartialGroup::from_group(g.clone());
        prop_assert!(pg.in_domain(&w));
        let v = pg.evaluate(&w).unwrap();
        prop_assert_eq!(v, g.fold(&w));
        for k in 0..=w.len() {
            let (a, b) = w.split_at(k);
            prop_assert_eq!(g.mul(g.fold(a), g.fold(b)), v);
        }
        let inv: Vec<usize> = w.iter().rev().map(|&x| g.inv(x)).collect();
        prop_assert_eq!(g.mul(v, pg.evaluate(&inv).unwrap()), 0);
    }

    #[test]
    fn product_words_are_componentwise(a in groups(), b in groups(), raw in prop::collection::vec(0usize..10_000, 0..5)) {
        let (p1, p2) = (PartialGroup::from_group(a.clone()), PartialGroup::from_group(b.clone()));
        let prod = direct_product_pg(&p1, &p2);
        let n2 = b.order();
        let w: Vec<usize> = raw.iter().map(|&x| x % prod.size()).collect();
        let w1: Vec<usize> = w.iter().map(|&x| x / n2).collect();
        let w2: Vec<usize> = w.iter().map(|&x| x % n2).collect();
        prop_assert_eq!(prod.evaluate(&w), Some(a.fold(&w1) * n2 + b.fold(&w2)));
    }

    #[test]
    fn closures_are_subgroups(g in groups(), seed in prop::collection::vec(0usize..1000, 0..3)) {
        let seed: Vec<usize> = seed.iter().map(|&x| x % g.order()).collect();
        let h = g.closure(&seed).unwrap().into_members();
        prop_assert!(g.is_subgroup_set(&h));
        prop_assert_eq!(g.order() % h.len(), 0);
        prop_assert!(seed.iter().all(|x| h.contains(x)));
    }

    #[test]
    fn scan_plans_are_reproducible(n in 2usize..20, len in 1usize..5, budget in 1u64..2000, seed in any::<u64>()) {
        let plan = ScanPlan::new(n, len, budget, seed);
        let collect = || plan.scan(Vec::new, |acc: &mut Vec<Vec<usize>>, w: &[usize]| acc.push(w.to_vec()), |mut a, b| { a.extend(b); a });
        let (x, y) = (collect(), collect());
        prop_assert_eq!(&x.acc, &y.acc);
        prop_assert_eq!(x.exhaustive, plan.exhaustive());
        prop_assert!(x.acc.iter().all(|w| w.len() <= len && w.iter().all(|&e| e < n)));
    }
}

#[test]
fn quotient_carrier_is_product_over_center_for_catalog_pairs() {
    for (a, b) in [("D8", "D8"), ("D8", "C2"), ("Q8", "C4"), ("C4", "C4")] {
        let (ga, gb) = (catalog::by_name(a).unwrap(), catalog::by_name(b).unwrap());
        let (la, lb) = (group_locality(&ga, 2).unwrap(), group_locality(&gb, 2).unwrap());
        let za = ga.center().into_members().into_iter().find(|&x| x != 0 && ga.element_order(x) == 2).unwrap();
        let zb = gb.center().into_members().into_iter().find(|&x| x != 0 && gb.element_order(x) == 2).unwrap();
        let n2 = lb.pg().size();
        let z = BTreeSet::from([0, za * n2 + zb]);
        let cp = localities::quotients::external_central_product_locality(&la, &lb, &z).unwrap();
        assert_eq!(cp.quotient.pg().size() * 2, ga.order() * gb.order(), "{a}∘{b}");
        assert!(Arc::ptr_eq(cp.beta.source(), cp.product.pg()));
    }
}

#[test]
fn recipe_json_round_trips() {
    let text =
        r#"{"direct": {"lhs": {"group": "S4", "p": 2}, "rhs": {"group": "S3", "p": 2, "delta_generators": [[1]]}}}"#;
    let recipe = Recipe::from_json(text).unwrap();
    assert_eq!(Recipe::from_json(&recipe.to_json()).unwrap(), recipe);
    let built = recipe.build().unwrap();
    assert_eq!(built.locality().pg().size(), 24 * 2);
}

#[test]
fn suite_reports_are_seed_deterministic() {
    let cfg = SuiteConfig {
        only: vec!["PartialGroupAxioms".into()],
        instances: vec!["L(S4)xL(S3)".into()],
        ..SuiteConfig::default()
    };
    let a = render(&run_suite(&cfg).unwrap(), Format::Machine);
    let b = render(&run_suite(&cfg).unwrap(), Format::Machine);
    assert_eq!(a, b);
    assert!(a.contains("\tpass\tsampled\t"));
}
