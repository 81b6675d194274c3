//! External direct products of partial groups and localities, the canonical
//! inclusions and projections, and recognition of internal central and
//! direct products.
//!
//! The pair `(f, g)` of `L1 × L2` has id `f·|L2| + g`. On `S1 × S2` the same
//! encoding is used over positions in `S1` and `S2`.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::fusion::{check_delta_closure, is_internal_central_product, FusionSystem, Morphism};
use crate::group::FiniteGroup;
use crate::locality::{Locality, CONSTRUCTION_PLAN};
use crate::morphism::{MapClass, PartialGroupMap};
use crate::partial_group::PartialGroup;
use crate::pgroup::{bit, bits, Mask, PGroup, MAX_ORDER};
use crate::report::CheckReport;
use crate::words::ScanPlan;
use crate::Elem;

/// The external direct product `L1 × L2`.
pub fn direct_product_pg(l1: &Arc<PartialGroup>, l2: &Arc<PartialGroup>) -> Arc<PartialGroup> {
    Arc::new(PartialGroup::direct_product(Arc::clone(l1), Arc::clone(l2)))
}

fn factors(prod: &PartialGroup) -> Result<(&Arc<PartialGroup>, &Arc<PartialGroup>)> {
    prod.factors().ok_or_else(|| Error::Contract(format!("{} is not an external direct product", prod.name())))
}

/// `P1 × P2` as a mask over `S1 × S2`, where `m2 = |S2|`.
pub fn product_mask(p1: Mask, p2: Mask, m2: usize) -> Mask {
    bits(p1).flat_map(|a| bits(p2).map(move |b| a * m2 + b)).fold(0, |acc, x| acc | bit(x))
}

/// `Δ1 * Δ2`: subgroups of `S1 × S2` containing some `P1 × P2` with
/// `Pi ∈ Δi`.
pub fn star_masks(s: &PGroup, m2: usize, delta1: &[Mask], delta2: &[Mask]) -> Vec<Mask> {
    let gens: HashSet<Mask> =
        delta1.iter().flat_map(|&p1| delta2.iter().map(move |&p2| product_mask(p1, p2, m2))).collect();
    let minimal: Vec<Mask> = gens.iter().copied().filter(|&g| !gens.iter().any(|&h| h != g && h & !g == 0)).collect();
    s.subgroups().iter().copied().filter(|&q| minimal.iter().any(|&g| g & !q == 0)).collect()
}

/// The inclusions `ιi` and projections `πi` of an external direct product.
#[derive(Debug)]
pub struct ProductMaps {
    pub iota1: PartialGroupMap,
    pub iota2: PartialGroupMap,
    pub pi1: PartialGroupMap,
    pub pi2: PartialGroupMap,
}

impl ProductMaps {
    pub fn iota(&self, i: usize) -> &PartialGroupMap {
        if i == 1 {
            &self.iota1
        } else {
            &self.iota2
        }
    }

    pub fn pi(&self, i: usize) -> &PartialGroupMap {
        if i == 1 {
            &self.pi1
        } else {
            &self.pi2
        }
    }
}

pub fn inclusions_and_projections(prod: &Arc<PartialGroup>) -> Result<ProductMaps> {
    let (l1, l2) = factors(prod)?;
    let n2 = l2.size();
    Ok(ProductMaps {
        iota1: PartialGroupMap::new(Arc::clone(l1), Arc::clone(prod), l1.elements().map(|f| f * n2).collect())?,
        iota2: PartialGroupMap::new(Arc::clone(l2), Arc::clone(prod), l2.elements().collect())?,
        pi1: PartialGroupMap::new(Arc::clone(prod), Arc::clone(l1), prod.elements().map(|h| h / n2).collect())?,
        pi2: PartialGroupMap::new(Arc::clone(prod), Arc::clone(l2), prod.elements().map(|h| h % n2).collect())?,
    })
}

/// `Liιi` as carrier ids of the product.
pub fn factor_image(prod: &PartialGroup, i: usize) -> Result<BTreeSet<Elem>> {
    let (l1, l2) = factors(prod)?;
    let n2 = l2.size();
    Ok(if i == 1 { l1.elements().map(|f| f * n2).collect() } else { l2.elements().collect() })
}

/// `(L1 × L2, Δ1 * Δ2, S1 × S2)`, verified under the construction plan.
pub fn direct_product_locality(loc1: &Locality, loc2: &Locality) -> Result<Locality> {
    direct_product_locality_with(loc1, loc2, &CONSTRUCTION_PLAN)
}

pub fn direct_product_locality_with(loc1: &Locality, loc2: &Locality, plan: &ScanPlan) -> Result<Locality> {
    if loc1.p() != loc2.p() {
        return input(format!("prime mismatch: {} and {}", loc1.p(), loc2.p()));
    }
    let (m1, m2) = (loc1.s_ids().len(), loc2.s_ids().len());
    if m1 * m2 > MAX_ORDER {
        return input(format!("|S1 × S2| = {} exceeds {MAX_ORDER}", m1 * m2));
    }
    let pg = direct_product_pg(loc1.pg(), loc2.pg());
    let n2 = loc2.pg().size();
    let s: Vec<Elem> = loc1.s_ids().iter().flat_map(|&a| loc2.s_ids().iter().map(move |&b| a * n2 + b)).collect();
    let mut s_pos = vec![u8::MAX; pg.size()];
    for (i, &x) in s.iter().enumerate() {
        s_pos[x] = i as u8;
    }
    let group = FiniteGroup::direct_product(loc1.s_group().group(), loc2.s_group().group());
    let s_group = PGroup::new(group, loc1.p())?;
    let delta = star_masks(&s_group, m2, loc1.delta(), loc2.delta());
    Locality::from_masks(pg, loc1.p(), s, s_pos, s_group, delta)?.verified(plan)
}

/// The sublocality `(L̂i, Δ̂i, Ŝi) = (Liιi, Δiιi, Siιi)` of the external
/// product `prod` of `loc1` and `loc2`; `factor` is the `Li` in question.
pub fn hat_sublocality(prod: &Locality, factor: &Locality, i: usize) -> Result<Locality> {
    let (l1, l2) = factors(prod.pg())?;
    let expected = if i == 1 { l1 } else { l2 };
    if !(i == 1 || i == 2) || !Arc::ptr_eq(expected, factor.pg()) {
        return Err(Error::Contract(format!("{} is not factor {i} of {}", factor.pg().name(), prod.pg().name())));
    }
    let n2 = l2.size();
    let iota = |x: Elem| if i == 1 { x * n2 } else { x };
    let map = |set: &BTreeSet<Elem>| -> BTreeSet<Elem> { set.iter().map(|&x| iota(x)).collect() };
    let members = factor_image(prod.pg(), i)?;
    let delta: Vec<BTreeSet<Elem>> = factor.delta_sets().iter().map(map).collect();
    let name = format!("{}^", factor.pg().name());
    prod.sublocality(&members, &map(&factor.s()), &delta, name)?.verified(&CONSTRUCTION_PLAN)
}

/// `(f, g) ↦ (fβ1, gβ2)` between external products.
pub fn pair_map(
    source: &Arc<PartialGroup>,
    target: &Arc<PartialGroup>,
    beta1: &PartialGroupMap,
    beta2: &PartialGroupMap,
) -> Result<PartialGroupMap> {
    let (a1, a2) = factors(source)?;
    let (b1, b2) = factors(target)?;
    let same = |x: &Arc<PartialGroup>, y: &Arc<PartialGroup>| Arc::ptr_eq(x, y);
    if !same(a1, beta1.source()) || !same(a2, beta2.source()) || !same(b1, beta1.target()) || !same(b2, beta2.target())
    {
        return input("factor maps do not match the products");
    }
    let (n2, m2) = (a2.size(), b2.size());
    let map = source.elements().map(|h| beta1.apply(h / n2) * m2 + beta2.apply(h % n2)).collect();
    PartialGroupMap::new(Arc::clone(source), Arc::clone(target), map)
}

/// Componentwise conjugation on `L1 × L2`: `D(f) = D1(f1) × D2(f2)`,
/// `(g1, g2)^f = (g1^{f1}, g2^{f2})`, and `S_f = (S1)_{f1} × (S2)_{f2}` for
/// the sets `s1 ⊆ L1`, `s2 ⊆ L2`. Exhaustive over all pairs.
pub fn conjugate_direct_product_check(
    prod: &Arc<PartialGroup>,
    s1: &BTreeSet<Elem>,
    s2: &BTreeSet<Elem>,
) -> Result<CheckReport> {
    let (l1, l2) = factors(prod)?;
    let n2 = l2.size();
    let s: BTreeSet<Elem> = s1.iter().flat_map(|&a| s2.iter().map(move |&b| a * n2 + b)).collect();
    let mut r = CheckReport::exact();
    for f in prod.elements() {
        let (f1, f2) = (f / n2, f % n2);
        for g in prod.elements() {
            let (g1, g2) = (g / n2, g % n2);
            let expected = l1.conj(g1, f1).zip(l2.conj(g2, f2)).map(|(a, b)| a * n2 + b);
            r.check(prod.conj(g, f) == expected, || {
                format!("{}^{}: {:?} vs componentwise {:?}", prod.label(g), prod.label(f), prod.conj(g, f), expected)
            });
        }
        let sf = prod.s_sub_g(&s, f);
        let split: BTreeSet<Elem> =
            l1.s_sub_g(s1, f1).iter().flat_map(|&a| l2.s_sub_g(s2, f2).into_iter().map(move |b| a * n2 + b)).collect();
        r.check(sf == split, || format!("S_{} differs from the product of the factor sets", prod.label(f)));
    }
    Ok(r)
}

/// `Z(L1 × L2) = Z(L1) × Z(L2) = Z(L̂1)Z(L̂2)`.
pub fn direct_product_centre_check(prod: &Arc<PartialGroup>) -> Result<CheckReport> {
    let (l1, l2) = factors(prod)?;
    let n2 = l2.size();
    let z = prod.center();
    let split: BTreeSet<Elem> =
        l1.center().iter().flat_map(|&a| l2.center().into_iter().map(move |b| a * n2 + b)).collect();
    let mut hats = Vec::new();
    for i in 1..=2 {
        let members = factor_image(prod, i)?;
        let sub = PartialGroup::sub(prod, &members, format!("hat{i}"))?;
        let ids: Vec<Elem> = members.iter().copied().collect();
        hats.push(sub.center().iter().map(|&x| ids[x]).collect::<BTreeSet<Elem>>());
    }
    let generated = prod.product_set(&hats[0], &hats[1]);
    let mut r = CheckReport::exact();
    r.check(z == split, || format!("Z(L) = {} but Z(L1) × Z(L2) = {}", prod.fmt_set(&z), prod.fmt_set(&split)));
    r.check(z == generated, || format!("Z(L) = {} but Z(L̂1)Z(L̂2) = {}", prod.fmt_set(&z), prod.fmt_set(&generated)));
    Ok(r)
}

/// `Liιi = ker(π_{3−i})`, `πi` projections mapping p-subgroups of `S` to
/// subgroups, `ιi` injective homomorphisms onto partial normal subgroups,
/// and `(fι1, gι2) ∈ D` with product `(f, g)`.
pub fn inclusion_projection_check(prod: &Locality, plan: &ScanPlan) -> Result<CheckReport> {
    let pg = prod.pg();
    let (l1, l2) = factors(pg)?;
    let n2 = l2.size();
    let maps = inclusions_and_projections(pg)?;
    let mut r = CheckReport::exact();
    for i in 1..=2 {
        let image = factor_image(pg, i)?;
        let iota = maps.iota(i);
        let ci = iota.classify(plan);
        r.exhaustive &= ci.exhaustive;
        r.check(ci.class >= MapClass::Homomorphism && ci.injective, || {
            format!("ι{i} is not an injective homomorphism")
        });
        r.check(pg.is_partial_normal(&image), || format!("L{i}ι{i} is not partial normal"));
        let pi = maps.pi(3 - i);
        let cp = pi.classify(plan);
        r.exhaustive &= cp.exhaustive;
        r.check(cp.class >= MapClass::Projection, || format!("π{} is only {:?}", 3 - i, cp.class));
        if cp.class >= MapClass::Homomorphism {
            let kernel = pi.kernel()?;
            r.check(kernel == image, || format!("ker(π{}) ≠ L{i}ι{i}", 3 - i));
        }
        let factor = if i == 1 { l1 } else { l2 };
        let sub = PartialGroup::sub(pg, &image, format!("L{i}ι{i}"))?;
        let onto = PartialGroupMap::new(Arc::clone(factor), sub, factor.elements().collect())?;
        let co = onto.classify(plan);
        r.exhaustive &= co.exhaustive;
        r.check(co.class == MapClass::Isomorphism, || format!("L{i} → L{i}ι{i} is only {:?}", co.class));
    }
    for q in prod.s_group().subgroups() {
        let set = prod.set_of(*q);
        for i in 1..=2 {
            let img = maps.pi(i).image(&set);
            let target = if i == 1 { l1 } else { l2 };
            r.check(target.is_subgroup(&img), || format!("{}π{i} is not a subgroup", pg.fmt_set(&set)));
        }
    }
    for f in l1.elements() {
        for g in l2.elements() {
            r.check(pg.evaluate(&[f * n2, g]) == Some(f * n2 + g), || {
                format!("Π(({},1),(1,{})) ≠ ({0},{1})", l1.label(f), l2.label(g))
            });
        }
    }
    Ok(r)
}

/// `Hιi` is a partial subgroup for each listed partial subgroup `H` of `Li`.
pub fn inclusion_subgroups_check(
    prod: &Arc<PartialGroup>,
    i: usize,
    subgroups: &[BTreeSet<Elem>],
) -> Result<CheckReport> {
    let (_, l2) = factors(prod)?;
    let n2 = l2.size();
    let mut r = CheckReport::exact();
    for h in subgroups {
        let image: BTreeSet<Elem> = h.iter().map(|&x| if i == 1 { x * n2 } else { x }).collect();
        r.check(prod.is_partial_subgroup(&image), || format!("{}ι{i} is not a partial subgroup", prod.fmt_set(&image)));
    }
    Ok(r)
}

/// `H1 × H2` is a partial subgroup; for subgroups it is a subgroup whose
/// table is the direct product of the factor tables.
pub fn direct_subgroups_check(
    prod: &Arc<PartialGroup>,
    h1s: &[BTreeSet<Elem>],
    h2s: &[BTreeSet<Elem>],
) -> Result<CheckReport> {
    let (l1, l2) = factors(prod)?;
    let n2 = l2.size();
    let mut r = CheckReport::exact();
    for h1 in h1s {
        for h2 in h2s {
            let h: BTreeSet<Elem> = h1.iter().flat_map(|&a| h2.iter().map(move |&b| a * n2 + b)).collect();
            r.check(prod.is_partial_subgroup(&h), || format!("{} is not a partial subgroup", prod.fmt_set(&h)));
            if l1.is_subgroup(h1) && l2.is_subgroup(h2) {
                let as_group = prod.subgroup_as_group(&h, "H");
                let ok = match (as_group, l1.subgroup_as_group(h1, "H1"), l2.subgroup_as_group(h2, "H2")) {
                    (Ok((g, _)), Ok((g1, _)), Ok((g2, _))) => g.same_table(&FiniteGroup::direct_product(&g1, &g2)),
                    _ => false,
                };
                r.check(ok, || format!("{} is not the direct product of the factor groups", prod.fmt_set(&h)));
            }
        }
    }
    Ok(r)
}

/// Normalizers in the product locality: `N_L(P) ⊆ N_{L1}(P1) × N_{L2}(P2)`
/// with equality when `P = P1 × P2`; for `P ∈ Δ`, `Pi ∈ Δi` and the
/// characteristic-p implications. Every subgroup of `S` is scanned.
pub fn normalizers_check(prod: &Locality, loc1: &Locality, loc2: &Locality) -> Result<CheckReport> {
    let pg = prod.pg();
    let (l1, l2) = factors(pg)?;
    if !Arc::ptr_eq(l1, loc1.pg()) || !Arc::ptr_eq(l2, loc2.pg()) {
        return Err(Error::Contract("factor localities do not match the product".into()));
    }
    let n2 = l2.size();
    let p = prod.p();
    let mut r = CheckReport::exact();
    for &q in prod.s_group().subgroups() {
        let set = prod.set_of(q);
        let p1: BTreeSet<Elem> = set.iter().map(|&x| x / n2).collect();
        let p2: BTreeSet<Elem> = set.iter().map(|&x| x % n2).collect();
        let n = pg.normalizer(&set);
        let (n1, n2set) = (l1.normalizer(&p1), l2.normalizer(&p2));
        let split: BTreeSet<Elem> = n1.iter().flat_map(|&a| n2set.iter().map(move |&b| a * n2 + b)).collect();
        let label = pg.fmt_set(&set);
        r.check(n.is_subset(&split), || format!("N_L({label}) ⊄ N_L1(P1) × N_L2(P2)"));
        if set.len() == p1.len() * p2.len() {
            r.check(n == split, || format!("N_L({label}) ≠ N_L1(P1) × N_L2(P2)"));
        }
        if !prod.in_delta(q) {
            continue;
        }
        let m1 = loc1.mask_of(&p1).filter(|&m| loc1.in_delta(m));
        let m2 = loc2.mask_of(&p2).filter(|&m| loc2.in_delta(m));
        r.check(m1.is_some() && m2.is_some(), || format!("{label} ∈ Δ but a projection is not in Δi"));
        let (Some(_), Some(_)) = (m1, m2) else { continue };
        let split_p: BTreeSet<Elem> = p1.iter().flat_map(|&a| p2.iter().map(move |&b| a * n2 + b)).collect();
        let split_mask = prod.mask_of(&split_p);
        r.check(split_mask.is_some_and(|m| prod.in_delta(m)), || format!("P1 × P2 ∉ Δ for {label}"));
        let charp = prod.normalizer_group(&set)?.0.is_characteristic_p(p);
        let c1 = loc1.normalizer_group(&p1)?.0.is_characteristic_p(p);
        let c2 = loc2.normalizer_group(&p2)?.0.is_characteristic_p(p);
        r.check(!(c1 && c2) || charp, || {
            format!("N_L({label}) is not of characteristic p but the factor normalizers are")
        });
        if set == split_p {
            r.check(charp == (c1 && c2), || format!("characteristic p of N_L({label}) differs from its factors"));
        }
    }
    Ok(r)
}

/// `F_{Ŝi}(L̂i)` is the canonical image of `F_{Si}(Li)` inside `F_S(L)`.
pub fn hat_fusion_check(prod: &Locality, hat: &Locality, factor: &Locality, i: usize) -> Result<CheckReport> {
    let n = prod.s_ids().len();
    let m2 = if i == 1 { n / factor.s_ids().len() } else { factor.s_ids().len() };
    let embed = |x: Elem| if i == 1 { x * m2 } else { x };
    let f = factor.fusion()?;
    let base = bits(f.s().full()).fold(0, |acc, x| acc | bit(embed(x)));
    let seeds: Vec<Morphism> = f
        .morphisms()
        .filter(|m| !m.is_identity())
        .map(|m| {
            let dom = bits(m.dom()).fold(0, |acc, x| acc | bit(embed(x)));
            let inv: Vec<Elem> = (0..n).map(|y| if i == 1 { y / m2 } else { y }).collect();
            Morphism::from_fn(n, dom, |y| embed(m.apply(inv[y]).expect("in domain")))
        })
        .collect();
    let image = FusionSystem::generate_in(Arc::clone(prod.s_group()), base, &seeds, "canonical image")?;
    let actual = prod.fusion_of_sublocality(hat)?;
    Ok(actual.compare(&image))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    None,
    Central,
    Direct,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::None => "none",
            Verdict::Central => "central",
            Verdict::Direct => "direct",
        }
    }
}

/// Outcome of testing whether `L` is the internal central or direct
/// product of two sublocalities.
#[derive(Debug, Serialize)]
pub struct InternalProductReport {
    /// `(f, g) ∈ D` for all `f ∈ L1`, `g ∈ L2`.
    pub phi_well_defined: CheckReport,
    /// `D` consists exactly of the words `(Π(f1,g1), …)` of (C1).
    pub c1_holds: CheckReport,
    /// Products of such words agree with `Π(Π(f…), Π(g…))`.
    pub c2_holds: CheckReport,
    /// Uniqueness of the decomposition `h = Π(f, g)`.
    pub d_holds: CheckReport,
    /// `S = S1S2`.
    pub s_product: bool,
    /// `Δ` is the set of overgroups in `S` of the products `P1P2`.
    pub delta_shape: CheckReport,
    pub classification: MapClass,
    /// `ker(φ)` as ids of `L1 × L2`.
    pub kernel: BTreeSet<Elem>,
    /// `ker(φ) = {(f, f⁻¹) : f ∈ L1 ∩ L2}`, central, and meeting each `L̂i`
    /// trivially.
    pub kernel_law: CheckReport,
    /// `L1 ∩ L2` as carrier ids of `L`.
    pub intersection: BTreeSet<Elem>,
    pub exhaustive: bool,
    pub verdict: Verdict,
    #[serde(skip)]
    pub phi: Option<PartialGroupMap>,
}

/// Builds `φ: L1 × L2 → L, (f, g) ↦ Π(f, g)` and decides whether `L` is the
/// internal central or direct product of the sublocalities `loc1`, `loc2`.
/// Word checks use at most length 3 of `plan`.
pub fn recognize_internal_product(
    loc: &Locality,
    loc1: &Locality,
    loc2: &Locality,
    plan: &ScanPlan,
) -> Result<InternalProductReport> {
    let pg = loc.pg();
    for (i, sub) in [(1, loc1), (2, loc2)] {
        let check = loc.sublocality_check(sub, &CONSTRUCTION_PLAN);
        if !check.passed() {
            return Err(Error::Contract(format!(
                "argument {i} is not a sublocality of {}: {}",
                pg.name(),
                check.failures.join("; ")
            )));
        }
    }
    let m1 = loc.members_of(loc1).expect("checked sublocality");
    let m2 = loc.members_of(loc2).expect("checked sublocality");
    let set1: BTreeSet<Elem> = m1.iter().copied().collect();
    let set2: BTreeSet<Elem> = m2.iter().copied().collect();
    let intersection: BTreeSet<Elem> = set1.intersection(&set2).copied().collect();
    let plan = ScanPlan { max_len: plan.max_len.min(3), ..*plan };

    let mut phi_well_defined = CheckReport::exact();
    for &f in &m1 {
        for &g in &m2 {
            phi_well_defined.check(pg.in_domain(&[f, g]), || format!("({}, {}) ∉ D", pg.label(f), pg.label(g)));
        }
    }

    let s1: BTreeSet<Elem> = loc1.s_ids().iter().map(|&x| m1[x]).collect();
    let s2: BTreeSet<Elem> = loc2.s_ids().iter().map(|&x| m2[x]).collect();
    let s_product = pg.product_set(&s1, &s2) == loc.s();
    let delta_shape = delta_shape_check(loc, loc1, loc2, &m1, &m2);

    let mut report = InternalProductReport {
        phi_well_defined,
        c1_holds: CheckReport::exact(),
        c2_holds: CheckReport::exact(),
        d_holds: CheckReport::exact(),
        s_product,
        delta_shape,
        classification: MapClass::None,
        kernel: BTreeSet::new(),
        kernel_law: CheckReport::exact(),
        intersection,
        exhaustive: true,
        verdict: Verdict::None,
        phi: None,
    };
    if !report.phi_well_defined.passed() {
        return Ok(report);
    }

    let ext = direct_product_pg(loc1.pg(), loc2.pg());
    let k2 = m2.len();
    let table: Vec<Elem> =
        ext.elements().map(|h| pg.evaluate(&[m1[h / k2], m2[h % k2]]).expect("φ is well defined")).collect();
    let phi = PartialGroupMap::new(Arc::clone(&ext), Arc::clone(pg), table)?;

    let scan_plan = ScanPlan { n: ext.size(), ..plan };
    let out = scan_plan.scan(
        || (CheckReport::exact(), CheckReport::exact(), Vec::new()),
        |(c1, c2, buf): &mut (CheckReport, CheckReport, Vec<Elem>), u| {
            let Some(value) = ext.evaluate(u) else { return };
            buf.clear();
            buf.extend(u.iter().map(|&h| phi.apply(h)));
            match pg.evaluate(buf) {
                None => c1.fail(format!("{} ∉ D", pg.fmt_word(buf))),
                Some(y) => {
                    c1.tick();
                    c2.check(y == phi.apply(value), || format!("Π{} ≠ Π(Π(f…), Π(g…))", pg.fmt_word(buf)));
                }
            }
        },
        |(a1, a2, buf), (b1, b2, _)| (a1.merged(b1), a2.merged(b2), buf),
    );
    let (mut c1, mut c2, _) = out.acc;
    c1.exhaustive = out.exhaustive;
    c2.exhaustive = out.exhaustive;

    let class = phi.classify(&plan);
    c1.absorb_labeled("no preimage", class.projection.clone());
    report.exhaustive = c1.exhaustive && c2.exhaustive && class.exhaustive;
    report.classification = class.class;

    let mut d = CheckReport::exact();
    let mut seen = vec![None; pg.size()];
    for h in ext.elements() {
        let y = phi.apply(h);
        match seen[y] {
            None => {
                seen[y] = Some(h);
                d.tick();
            }
            Some(first) => d.fail(format!("{} = Π{} = Π{}", pg.label(y), ext.label(first), ext.label(h))),
        }
    }
    for y in pg.elements() {
        d.check(seen[y].is_some(), || format!("{} is not a product of L1 and L2", pg.label(y)));
    }

    if class.class >= MapClass::Homomorphism {
        report.kernel = phi.kernel()?;
        let expected: BTreeSet<Elem> = report
            .intersection
            .iter()
            .map(|&f| {
                let a = m1.binary_search(&f).expect("in L1");
                let b = m2.binary_search(&pg.inv(f)).expect("L2 is inverse closed");
                a * k2 + b
            })
            .collect();
        let mut law = CheckReport::exact();
        law.check(report.kernel == expected, || "ker(φ) ≠ {(f, f⁻¹) : f ∈ L1 ∩ L2}".into());
        law.check(report.kernel.is_subset(&ext.center()), || "ker(φ) is not central in L1 × L2".into());
        for i in 1..=2 {
            let hat = factor_image(&ext, i)?;
            law.check(report.kernel.intersection(&hat).count() == 1, || format!("ker(φ) ∩ L̂{i} ≠ 1"));
        }
        report.kernel_law = law;
    }

    report.c1_holds = c1;
    report.c2_holds = c2;
    report.d_holds = d;
    let central = report.c1_holds.passed()
        && report.c2_holds.passed()
        && report.classification >= MapClass::Projection
        && report.s_product
        && report.delta_shape.passed();
    report.verdict = match (central, report.d_holds.passed()) {
        (false, _) => Verdict::None,
        (true, false) => Verdict::Central,
        (true, true) => Verdict::Direct,
    };
    debug_assert!(report.verdict != Verdict::Direct || report.kernel.len() == 1);
    report.phi = Some(phi);
    Ok(report)
}

fn delta_shape_check(loc: &Locality, loc1: &Locality, loc2: &Locality, m1: &[Elem], m2: &[Elem]) -> CheckReport {
    let mut r = CheckReport::exact();
    let lift = |sub: &Locality, members: &[Elem], mask: Mask| -> Option<Mask> {
        loc.mask_of(&sub.set_of(mask).iter().map(|&x| members[x]).collect())
    };
    let s = loc.s_group();
    let mut gens = HashSet::new();
    for &p1 in loc1.delta() {
        for &p2 in loc2.delta() {
            match (lift(loc1, m1, p1), lift(loc2, m2, p2)) {
                (Some(a), Some(b)) => {
                    gens.insert(s.product(a, b));
                }
                _ => r.fail("Δi is not contained in S"),
            }
        }
    }
    let expected: BTreeSet<Mask> =
        s.subgroups().iter().copied().filter(|&q| gens.iter().any(|&g| g & !q == 0)).collect();
    let actual: BTreeSet<Mask> = loc.delta().iter().copied().collect();
    for q in expected.symmetric_difference(&actual) {
        r.fail(format!(
            "{} is {} Δ but {} an overgroup of some P1P2",
            loc.describe(*q),
            if actual.contains(q) { "in" } else { "not in" },
            if expected.contains(q) { "is" } else { "is not" }
        ));
    }
    r.checked += s.subgroups().len() as u64;
    r
}

/// An implication `factors ⟺ product side` and whether it held.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IffLaw {
    pub factors: bool,
    pub product: bool,
    pub holds: bool,
}

impl IffLaw {
    pub fn new(factors: bool, product: bool) -> Self {
        IffLaw { factors, product, holds: factors == product }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PredicateReport {
    /// `L1 ⊆ C_L(L2)`, `L2 ⊆ C_L(L1)` and `fg = gf`.
    pub centralizes: CheckReport,
    /// `L1` and `L2` are partial normal in `L`.
    pub partial_normal: bool,
    /// `L1 ∩ L2 ≤ S1 ∩ S2`.
    pub intersection_in_s: bool,
    /// Factors of objective characteristic p iff `L1 ∩ L2 ≤ S1 ∩ S2` and
    /// `L` is.
    pub objective: IffLaw,
    /// The same with linking localities.
    pub linking: IffLaw,
}

impl PredicateReport {
    pub fn passed(&self) -> bool {
        self.centralizes.passed() && self.partial_normal && self.objective.holds && self.linking.holds
    }
}

/// Consequences of an internal central product: the factors centralize
/// each other and are partial normal, and the characteristic-p laws.
pub fn internal_product_predicates(loc: &Locality, loc1: &Locality, loc2: &Locality) -> Result<PredicateReport> {
    let pg = loc.pg();
    let m1 = loc.members_of(loc1).ok_or_else(|| Error::Contract("first argument is not inside L".into()))?;
    let m2 = loc.members_of(loc2).ok_or_else(|| Error::Contract("second argument is not inside L".into()))?;
    let set1: BTreeSet<Elem> = m1.iter().copied().collect();
    let set2: BTreeSet<Elem> = m2.iter().copied().collect();
    let mut centralizes = CheckReport::exact();
    let c1 = pg.centralizer(&set2);
    let c2 = pg.centralizer(&set1);
    centralizes.check(set1.is_subset(&c1), || "L1 ⊄ C_L(L2)".into());
    centralizes.check(set2.is_subset(&c2), || "L2 ⊄ C_L(L1)".into());
    for &f in &m1 {
        for &g in &m2 {
            let (fg, gf) = (pg.evaluate(&[f, g]), pg.evaluate(&[g, f]));
            centralizes
                .check(fg.is_some() && fg == gf, || format!("{} and {} do not commute", pg.label(f), pg.label(g)));
        }
    }
    let partial_normal = pg.is_partial_normal(&set1) && pg.is_partial_normal(&set2);
    let s1: BTreeSet<Elem> = loc1.s_ids().iter().map(|&x| m1[x]).collect();
    let s2: BTreeSet<Elem> = loc2.s_ids().iter().map(|&x| m2[x]).collect();
    let intersection_in_s = set1.intersection(&set2).all(|x| s1.contains(x) && s2.contains(x));
    let objective = IffLaw::new(
        loc1.is_objective_characteristic_p()? && loc2.is_objective_characteristic_p()?,
        intersection_in_s && loc.is_objective_characteristic_p()?,
    );
    let linking = IffLaw::new(loc1.is_linking()? && loc2.is_linking()?, intersection_in_s && loc.is_linking()?);
    Ok(PredicateReport { centralizes, partial_normal, intersection_in_s, objective, linking })
}

#[derive(Clone, Debug, Serialize)]
pub struct LastPropositionReport {
    /// `Δ` as masks over `S`, in lattice order.
    pub delta: Vec<Mask>,
    pub closed: bool,
    pub contains_centric_radicals: bool,
    pub within_subcentrics: bool,
}

impl LastPropositionReport {
    pub fn passed(&self) -> bool {
        self.closed && self.contains_centric_radicals && self.within_subcentrics
    }
}

/// For `F` the internal central product of `F1`, `F2` and `Fi^{cr} ⊆ Δi ⊆
/// Fi^s` closed under `Fi`-conjugates and overgroups: the overgroups `Δ`
/// of the products `P1P2` are closed under `F`-conjugates and overgroups
/// and satisfy `F^{cr} ⊆ Δ ⊆ F^s`.
pub fn last_proposition_a_check(
    f: &FusionSystem,
    f1: &FusionSystem,
    f2: &FusionSystem,
    delta1: &[Mask],
    delta2: &[Mask],
) -> Result<LastPropositionReport> {
    let internal = is_internal_central_product(f, f1, f2)?;
    if !internal.verdict {
        return Err(Error::Contract(format!("not an internal central product: {}", internal.diagnostics.join("; "))));
    }
    for (i, fi, di) in [(1, f1, delta1), (2, f2, delta2)] {
        let set: HashSet<Mask> = di.iter().copied().collect();
        if !check_delta_closure(fi, di, true) {
            return Err(Error::Contract(format!("Δ{i} is not closed under F{i}-conjugates and overgroups")));
        }
        if !fi.centric_radicals().iter().all(|m| set.contains(m)) {
            return Err(Error::Contract(format!("F{i}^cr ⊄ Δ{i}")));
        }
        let subcentric: HashSet<Mask> = fi.subcentrics().into_iter().collect();
        if !di.iter().all(|m| subcentric.contains(m)) {
            return Err(Error::Contract(format!("Δ{i} ⊄ F{i}^s")));
        }
    }
    let s = f.s();
    let gens: HashSet<Mask> = delta1.iter().flat_map(|&a| delta2.iter().map(move |&b| s.product(a, b))).collect();
    let delta: Vec<Mask> = f.subgroups().into_iter().filter(|&q| gens.iter().any(|&g| g & !q == 0)).collect();
    let set: HashSet<Mask> = delta.iter().copied().collect();
    let closed = check_delta_closure(f, &delta, true);
    let contains_centric_radicals = f.centric_radicals().iter().all(|m| set.contains(m));
    let subcentric: HashSet<Mask> = f.subcentrics().into_iter().collect();
    let within_subcentrics = delta.iter().all(|m| subcentric.contains(m));
    Ok(LastPropositionReport { delta, closed, contains_centric_radicals, within_subcentrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::locality::group_locality;

    #[test]
    fn c2_times_c2_is_v4() {
        let c2 = PartialGroup::from_group(catalog::c2());
        let prod = direct_product_pg(&c2, &c2);
        assert_eq!(prod.size(), 4);
        assert!(prod.check_axioms(&ScanPlan::new(0, 4, 1_000, 0)).passed());
        assert!(prod.is_subgroup(&prod.carrier()));
    }

    #[test]
    fn external_product_is_internal_direct() {
        let l1 = group_locality(&catalog::d8(), 2).unwrap();
        let l2 = group_locality(&catalog::s3(), 2).unwrap();
        let prod = direct_product_locality(&l1, &l2).unwrap();
        assert_eq!(prod.pg().size(), 48);
        assert_eq!(prod.s_ids().len(), 16);
        let h1 = hat_sublocality(&prod, &l1, 1).unwrap();
        let h2 = hat_sublocality(&prod, &l2, 2).unwrap();
        let plan = ScanPlan::new(0, 3, 200_000, 1);
        let report = recognize_internal_product(&prod, &h1, &h2, &plan).unwrap();
        assert_eq!(report.verdict, Verdict::Direct);
        assert_eq!(report.kernel.len(), 1);
        let swapped = recognize_internal_product(&prod, &h2, &h1, &plan).unwrap();
        assert_eq!(swapped.verdict, Verdict::Direct);
        assert!(direct_product_centre_check(prod.pg()).unwrap().passed());
        assert!(normalizers_check(&prod, &l1, &l2).unwrap().passed());
        assert!(hat_fusion_check(&prod, &h1, &l1, 1).unwrap().passed());
        assert!(hat_fusion_check(&prod, &h2, &l2, 2).unwrap().passed());
    }

    #[test]
    fn a_locality_is_not_a_product_with_itself() {
        let l = group_locality(&catalog::d8(), 2).unwrap();
        let report = recognize_internal_product(&l, &l, &l, &ScanPlan::new(0, 3, 100_000, 1)).unwrap();
        assert_eq!(report.verdict, Verdict::None);
    }
}
