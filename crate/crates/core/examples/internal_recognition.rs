//! Recognizes internal direct and central products from a locality and two
//! sublocalities.

use std::collections::BTreeSet;

use localities::catalog;
use localities::locality::group_locality;
use localities::products::{
    direct_product_locality, hat_sublocality, recognize_internal_product, InternalProductReport,
};
use localities::quotients::external_central_product_locality;
use localities::words::ScanPlan;

fn show(name: &str, r: &InternalProductReport) {
    println!(
        "{name}: verdict {}, φ {:?}, |ker φ| = {}, |L1 ∩ L2| = {}",
        r.verdict.as_str(),
        r.classification,
        r.kernel.len(),
        r.intersection.len()
    );
}

fn main() -> localities::Result<()> {
    let l1 = group_locality(&catalog::s4(), 2)?;
    let l2 = group_locality(&catalog::s3(), 2)?;
    let prod = direct_product_locality(&l1, &l2)?;
    let (h1, h2) = (hat_sublocality(&prod, &l1, 1)?, hat_sublocality(&prod, &l2, 2)?);
    let plan = ScanPlan::new(h1.pg().size() * h2.pg().size(), 3, 10_000_000, 42);
    show("L(S4) × L(S3)", &recognize_internal_product(&prod, &h1, &h2, &plan)?);

    let d8 = catalog::d8();
    let z = d8.center().into_members().into_iter().find(|&x| x != 0).expect("Z(D8) has order 2");
    let l = group_locality(&d8, 2)?;
    let n = l.pg().size();
    let cp = external_central_product_locality(&l, &l, &BTreeSet::from([0, z * n + z]))?;
    let plan = ScanPlan::new(n * n, 3, 10_000_000, 42);
    show("D8 ∘ D8", &recognize_internal_product(&cp.quotient, &cp.images[0], &cp.images[1], &plan)?);
    show("D8 ∘ D8, factors swapped", &recognize_internal_product(&cp.quotient, &cp.images[1], &cp.images[0], &plan)?);
    Ok(())
}
