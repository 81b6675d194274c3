//! L_Δ(S4) × L_Δ(S3): the product locality, its factors and its fusion system.

use localities::catalog;
use localities::fusion::direct_product_fusion;
use localities::locality::group_locality;
use localities::products::{direct_product_centre_check, direct_product_locality, hat_sublocality};
use localities::words::ScanPlan;

fn main() -> localities::Result<()> {
    let l1 = group_locality(&catalog::s4(), 2)?;
    let l2 = group_locality(&catalog::s3(), 2)?;
    let prod = direct_product_locality(&l1, &l2)?;
    println!(
        "{}: |L| = {}, |S| = {}, |Δ| = {}",
        prod.pg().name(),
        prod.pg().size(),
        prod.s_ids().len(),
        prod.delta().len()
    );

    let report = prod.verify(&ScanPlan::new(prod.pg().size(), 3, 10_000_000, 42));
    println!("locality axioms (words of length ≤ 3): {}", report.passed());
    println!("Z(L1 × L2) = Z(L1) × Z(L2): {}", direct_product_centre_check(prod.pg())?.passed());

    let expected = direct_product_fusion(&l1.fusion()?, &l2.fusion()?)?;
    let equality = prod.fusion()?.compare(&expected);
    println!("F_S(L1 × L2) = F1 × F2: {} ({} Hom-sets compared)", equality.passed(), equality.checked);

    for (i, factor) in [(1, &l1), (2, &l2)] {
        let hat = hat_sublocality(&prod, factor, i)?;
        let plan = ScanPlan::new(hat.pg().size(), 3, 10_000_000, 42);
        println!("L̂{i} has {} elements, sublocality: {}", hat.pg().size(), prod.is_sublocality(&hat, &plan));
    }
    Ok(())
}
