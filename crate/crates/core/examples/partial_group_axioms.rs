//! The partial group axioms on a group, a locality and a broken table.

use std::collections::BTreeSet;

use localities::catalog;
use localities::locality::locality_from_group;
use localities::partial_group::PartialGroup;
use localities::words::ScanPlan;

fn main() -> localities::Result<()> {
    let s3 = PartialGroup::from_group(catalog::s3());
    let report = s3.check_axioms(&ScanPlan::new(s3.size(), 4, 10_000_000, 42));
    println!("{}: axioms pass = {}", s3.name(), report.passed());

    let s4 = catalog::s4();
    let v4 = s4.o_p(2).into_members();
    let loc = locality_from_group(&s4, 2, &[v4])?;
    let pg = loc.pg();
    let report = pg.check_axioms(&ScanPlan::new(pg.size(), 4, 10_000_000, 42));
    println!("{}: |L| = {}, axioms pass = {}", pg.name(), pg.size(), report.passed());
    let t = (1..s4.order()).find(|&x| s4.element_order(x) == 2 && !pg.center().contains(&x)).unwrap_or(1);
    let word = [t, t];
    println!("Π{} = {:?}", pg.fmt_word(&word), pg.evaluate(&word).map(|x| pg.label(x).to_string()));
    println!("Z(L) = {}", pg.fmt_set(&pg.center()));
    println!("{{1}} is a subgroup: {}", pg.is_subgroup(&BTreeSet::from([0])));

    let n = 4;
    let mut table: Vec<usize> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    table[n + 2] = 1;
    let broken = PartialGroup::from_raw_table("broken C4", n, table)?;
    let report = broken.check_axioms(&ScanPlan::new(n, 3, 10_000, 42)).to_check_report(&broken);
    println!("{}: {} violations, first: {:?}", broken.name(), report.failure_count, report.failures.first());
    Ok(())
}
