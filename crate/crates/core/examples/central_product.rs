//! D8 ∘ D8: the quotient of L(D8) × L(D8) by its diagonal center.

use std::collections::BTreeSet;

use localities::catalog;
use localities::locality::group_locality;
use localities::quotients::{central_product_fusion_check, external_central_product_locality};
use localities::words::ScanPlan;

fn main() -> localities::Result<()> {
    let d8 = catalog::d8();
    let z = d8.center().into_members().into_iter().find(|&x| x != 0).expect("Z(D8) has order 2");
    let l = group_locality(&d8, 2)?;
    let n = l.pg().size();
    let center = BTreeSet::from([0, z * n + z]);

    let cp = external_central_product_locality(&l, &l, &center)?;
    println!("Z = {}", cp.product.pg().fmt_set(&center));
    println!("|L1 × L2| = {}, |(L1 × L2)/Z| = {}", cp.product.pg().size(), cp.quotient.pg().size());
    let class = cp.beta.classify(&ScanPlan::new(cp.product.pg().size(), 3, 10_000_000, 42));
    println!("β is a {:?}, exhaustive = {}", class.class, class.exhaustive);
    println!("ker β = {}", cp.product.pg().fmt_set(&cp.beta.kernel()?));
    let report = cp.quotient.verify(&ScanPlan::new(cp.quotient.pg().size(), 3, 10_000_000, 42));
    println!("quotient is a locality: {}", report.passed());

    let fusion = central_product_fusion_check(&cp, &l, &l)?;
    println!("F_S((L1 × L2)/Z) = (F1 × F2)/Z: {}", fusion.passed());
    Ok(())
}
