//! L_Δ(S4) for Δ generated by V4: carrier, objects and the locality axioms.

use localities::catalog;
use localities::locality::locality_from_group;
use localities::words::ScanPlan;

fn main() -> localities::Result<()> {
    let s4 = catalog::s4();
    let v4 = s4.o_p(2).into_members();
    let loc = locality_from_group(&s4, 2, &[v4])?;
    println!("{}: |L| = {}, |S| = {}", loc.pg().name(), loc.pg().size(), loc.s_ids().len());
    for p in loc.delta_sets() {
        println!("  object {}", loc.pg().fmt_set(&p));
    }
    let report = loc.verify(&ScanPlan::new(loc.pg().size(), 4, 10_000_000, 42));
    for (name, r) in [("structure", &report.structure), ("L1", &report.l1), ("L2", &report.l2), ("L3", &report.l3)] {
        println!("{name:<9} passed={} checked={} exhaustive={}", r.passed(), r.checked, r.exhaustive);
    }
    println!("objective characteristic 2: {}", loc.is_objective_characteristic_p()?);
    println!("linking locality: {}", loc.is_linking()?);
    Ok(())
}
