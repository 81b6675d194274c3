//! Checks of the structural laws relating fusion systems to their direct
//! products, central quotients and internal central products.

use std::collections::{BTreeSet, HashSet};

use crate::error::{input, Result};
use crate::fusion::{check_delta_closure, induced_morphism_check, FusionMapKind, FusionSystem, GroupHom};
use crate::pgroup::Mask;
use crate::products::product_mask;
use crate::report::CheckReport;

fn classes(f: &FusionSystem) -> Vec<Vec<Mask>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in f.subgroups() {
        if seen.insert(p) {
            let class = f.conjugates(p);
            seen.extend(class.iter().copied());
            out.push(class);
        }
    }
    out
}

/// `Q^{F'} = {P̂α : P̂ ∈ P^F}` for every `P ≥ ker(α)`, where `α` induces an
/// epimorphism `F → F'`.
pub fn epi_conjugates_check(alpha: &GroupHom, f: &FusionSystem, f2: &FusionSystem) -> Result<CheckReport> {
    if induced_morphism_check(alpha, f, f2)? < FusionMapKind::Epimorphism {
        return input("the group map does not induce an epimorphism");
    }
    let kernel = alpha.kernel();
    let mut r = CheckReport::exact();
    for p in f.subgroups().into_iter().filter(|&p| p & kernel == kernel) {
        let expected: BTreeSet<Mask> = f.conjugates(p).iter().map(|&q| alpha.image(q)).collect();
        let actual: BTreeSet<Mask> = f2.conjugates(alpha.image(p)).into_iter().collect();
        r.check(expected == actual, || {
            format!("{}: {} images of conjugates vs {} conjugates", f.s().describe(p), expected.len(), actual.len())
        });
    }
    Ok(r)
}

/// For an epimorphism `α: F → F'` with `ker(α) ≤ Z(F)`:
/// `P ∈ F^{cr}` iff `ker(α) ≤ P` and `Pα ∈ F'^{cr}`, and `P ∈ F^s` iff
/// `Pα ∈ F'^s`.
pub fn central_quotient_check(alpha: &GroupHom, f: &FusionSystem, f2: &FusionSystem) -> Result<CheckReport> {
    if induced_morphism_check(alpha, f, f2)? < FusionMapKind::Epimorphism {
        return input("the group map does not induce an epimorphism");
    }
    let kernel = alpha.kernel();
    if kernel & !f.center() != 0 {
        return input("the kernel is not central in the fusion system");
    }
    let (cr, cr2): (HashSet<Mask>, HashSet<Mask>) =
        (f.centric_radicals().into_iter().collect(), f2.centric_radicals().into_iter().collect());
    let (sc, sc2): (HashSet<Mask>, HashSet<Mask>) =
        (f.subcentrics().into_iter().collect(), f2.subcentrics().into_iter().collect());
    let mut r = CheckReport::exact();
    for p in f.subgroups() {
        let q = alpha.image(p);
        let rhs = p & kernel == kernel && cr2.contains(&q);
        r.check(cr.contains(&p) == rhs, || format!("(a) fails at {}", f.s().describe(p)));
        r.check(sc.contains(&p) == sc2.contains(&q), || format!("(b) fails at {}", f.s().describe(p)));
    }
    Ok(r)
}

/// The six laws relating `F = F1 × F2` to its factors, checked over all
/// pairs `(P1, P2)` of subgroups. `F` lives on `S1 × S2` with the pair
/// encoding `a·|S2| + b`.
pub fn direct_product_fusion_laws(f: &FusionSystem, f1: &FusionSystem, f2: &FusionSystem) -> Result<[CheckReport; 6]> {
    if f.s().order() != f1.s().order() * f2.s().order() || !f1.is_full() || !f2.is_full() {
        return input("F must be a system on S1 × S2 and the factors full systems");
    }
    let m2 = f2.s().order();
    let pm = |a: Mask, b: Mask| product_mask(a, b, m2);
    let mut r: [CheckReport; 6] = std::array::from_fn(|_| CheckReport::exact());
    let (subs1, subs2) = (f1.subgroups(), f2.subgroups());
    let (sc1, sc2, sc): (HashSet<Mask>, HashSet<Mask>, HashSet<Mask>) = (
        f1.subcentrics().into_iter().collect(),
        f2.subcentrics().into_iter().collect(),
        f.subcentrics().into_iter().collect(),
    );
    for &p1 in &subs1 {
        for &p2 in &subs2 {
            let p = pm(p1, p2);
            let name = || format!("{} × {}", f1.s().describe(p1), f2.s().describe(p2));
            r[0].check(f.is_centric(p) == (f1.is_centric(p1) && f2.is_centric(p2)), || format!("centric: {}", name()));
            let sizes = f.aut(p).len() == f1.aut(p1).len() * f2.aut(p2).len();
            r[1].check(sizes, || format!("|Aut_F|: {}", name()));
            let radical = f.is_radical(p) == (f1.is_radical(p1) && f2.is_radical(p2));
            r[1].check(radical, || format!("radical: {}", name()));
            let expected: BTreeSet<Mask> = f1
                .conjugates(p1)
                .iter()
                .flat_map(|&q1| f2.conjugates(p2).into_iter().map(move |q2| pm(q1, q2)))
                .collect();
            let actual: BTreeSet<Mask> = f.conjugates(p).into_iter().collect();
            r[3].check(expected == actual, || format!("conjugates: {}", name()));
            let fully = f.is_fully_normalized(p) == (f1.is_fully_normalized(p1) && f2.is_fully_normalized(p2));
            r[3].check(fully, || format!("fully normalized: {}", name()));
            if sc1.contains(&p1) && sc2.contains(&p2) {
                r[4].check(sc.contains(&p), || format!("subcentric: {}", name()));
            }
        }
    }
    let expected: BTreeSet<Mask> = f1
        .centric_radicals()
        .into_iter()
        .flat_map(|r1| f2.centric_radicals().into_iter().map(move |r2| pm(r1, r2)))
        .collect();
    let actual: BTreeSet<Mask> = f.centric_radicals().into_iter().collect();
    r[2].check(expected == actual, || format!("F^cr has {} members, products give {}", actual.len(), expected.len()));
    for c1 in classes(f1) {
        for c2 in classes(f2) {
            let gamma: Vec<Mask> = c1.iter().flat_map(|&a| c2.iter().map(move |&b| pm(a, b))).collect();
            r[5].check(check_delta_closure(f, &gamma, false), || {
                format!("{} × {} classes not closed", f1.s().describe(c1[0]), f2.s().describe(c2[0]))
            });
        }
    }
    Ok(r)
}

/// The three laws for an internal central product `F` of subsystems `F1`
/// and `F2` with bases `S1`, `S2`.
pub fn central_product_fusion_laws(f: &FusionSystem, f1: &FusionSystem, f2: &FusionSystem) -> Result<[CheckReport; 3]> {
    let s = f.s();
    let mut r: [CheckReport; 3] = std::array::from_fn(|_| CheckReport::exact());
    let expected: BTreeSet<Mask> = f1
        .centric_radicals()
        .into_iter()
        .flat_map(|r1| f2.centric_radicals().into_iter().map(move |r2| s.product(r1, r2)))
        .collect();
    let actual: BTreeSet<Mask> = f.centric_radicals().into_iter().collect();
    r[0].check(expected == actual, || format!("F^cr has {} members, products give {}", actual.len(), expected.len()));
    let sc: HashSet<Mask> = f.subcentrics().into_iter().collect();
    for p1 in f1.subcentrics() {
        for p2 in f2.subcentrics() {
            let p = s.product(p1, p2);
            r[1].check(sc.contains(&p), || format!("{} is not subcentric", s.describe(p)));
        }
    }
    for c1 in classes(f1) {
        for c2 in classes(f2) {
            let gamma: Vec<Mask> = c1.iter().flat_map(|&a| c2.iter().map(move |&b| s.product(a, b))).collect();
            let delta = f.overgroup_closure(&gamma);
            let ok = check_delta_closure(f, &gamma, false) && check_delta_closure(f, &delta, true);
            r[2].check(ok, || format!("classes of {} and {} are not closed", s.describe(c1[0]), s.describe(c2[0])));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fusion::{direct_product_fusion, quotient_fusion};

    #[test]
    fn product_laws_hold_for_s4_and_s3() {
        let f1 = FusionSystem::from_group(&catalog::s4(), 2).unwrap();
        let f2 = FusionSystem::from_group(&catalog::s3(), 2).unwrap();
        let f = direct_product_fusion(&f1, &f2).unwrap();
        for (i, r) in direct_product_fusion_laws(&f, &f1, &f2).unwrap().into_iter().enumerate() {
            assert!(r.passed(), "law {i}: {:?}", r.failures);
        }
    }

    #[test]
    fn central_quotient_laws_hold_for_d8_times_c2() {
        let f1 = FusionSystem::from_group(&catalog::d8(), 2).unwrap();
        let f2 = FusionSystem::from_group(&catalog::c2(), 2).unwrap();
        let f = direct_product_fusion(&f1, &f2).unwrap();
        let z = crate::pgroup::bits(f.center()).find(|&x| x != 0).map(|x| f.s().generate(&[x])).unwrap();
        let (q, alpha) = quotient_fusion(&f, z).unwrap();
        assert!(epi_conjugates_check(&alpha, &f, &q).unwrap().passed());
        assert!(central_quotient_check(&alpha, &f, &q).unwrap().passed());
    }
}
