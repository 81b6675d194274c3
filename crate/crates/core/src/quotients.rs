//! Right cosets of partial normal subgroups, canonical projections onto
//! quotients by central subgroups, and external central products of
//! localities.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::fusion::{
    direct_product_fusion, is_internal_central_product, quotient_fusion, GroupHom, InternalFusionReport,
};
use crate::locality::{Locality, CONSTRUCTION_PLAN};
use crate::morphism::{MapClass, PartialGroupMap};
use crate::partial_group::PartialGroup;
use crate::products::{direct_product_locality, factor_image, hat_sublocality, InternalProductReport};
use crate::report::CheckReport;
use crate::words::ScanPlan;
use crate::Elem;

/// The right cosets `Nf = {Π(n, f) : n ∈ N, (n, f) ∈ D}` of a partial
/// normal subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetDecomposition {
    pub normal: BTreeSet<Elem>,
    /// Distinct right cosets, ordered by their members.
    pub cosets: Vec<BTreeSet<Elem>>,
    /// Whether each coset is maximal under inclusion.
    pub maximal: Vec<bool>,
    /// Index in `cosets` of the maximal coset containing each element.
    pub element_to_maximal: Vec<usize>,
}

impl CosetDecomposition {
    pub fn maximal_cosets(&self) -> impl Iterator<Item = &BTreeSet<Elem>> {
        self.cosets.iter().zip(&self.maximal).filter(|(_, &m)| m).map(|(c, _)| c)
    }
}

pub fn right_cosets(pg: &PartialGroup, normal: &BTreeSet<Elem>) -> Result<CosetDecomposition> {
    if !pg.is_partial_normal(normal) {
        return Err(Error::Contract(format!(
            "{} is not a partial normal subgroup of {}",
            pg.fmt_set(normal),
            pg.name()
        )));
    }
    let all: BTreeSet<BTreeSet<Elem>> =
        pg.elements().map(|f| normal.iter().filter_map(|&n| pg.evaluate(&[n, f])).collect()).collect();
    let cosets: Vec<BTreeSet<Elem>> = all.into_iter().collect();
    let maximal: Vec<bool> =
        cosets.iter().map(|c| !cosets.iter().any(|d| d.len() > c.len() && c.is_subset(d))).collect();
    let mut element_to_maximal = vec![usize::MAX; pg.size()];
    for (i, c) in cosets.iter().enumerate().filter(|(i, _)| maximal[*i]) {
        for &x in c {
            if element_to_maximal[x] != usize::MAX {
                return Err(Error::Verification {
                    summary: format!("maximal cosets of {} overlap", pg.fmt_set(normal)),
                    details: vec![format!("{} lies in two maximal cosets", pg.label(x))],
                });
            }
            element_to_maximal[x] = i;
        }
    }
    if let Some(x) = element_to_maximal.iter().position(|&i| i == usize::MAX) {
        return Err(Error::Verification {
            summary: format!("maximal cosets of {} do not cover {}", pg.fmt_set(normal), pg.name()),
            details: vec![format!("{} lies in no maximal coset", pg.label(x))],
        });
    }
    Ok(CosetDecomposition { normal: normal.clone(), cosets, maximal, element_to_maximal })
}

/// `β: L → L/Z` for a central subgroup `Z`, with the quotient locality
/// `(L/Z, Δβ, Sβ)`. Quotient elements are the cosets numbered by their
/// least member.
pub fn canonical_projection_central(loc: &Locality, z: &BTreeSet<Elem>) -> Result<(Locality, PartialGroupMap)> {
    let pg = loc.pg();
    if !pg.is_subgroup(z) {
        return input(format!("{} is not a subgroup of {}", pg.fmt_set(z), pg.name()));
    }
    if !z.is_subset(&pg.center()) {
        return Err(Error::Unsupported(format!(
            "quotients are only built for central subgroups; {} is not central in {}",
            pg.fmt_set(z),
            pg.name()
        )));
    }
    let decomposition = right_cosets(pg, z)?;
    let mut classes: Vec<&BTreeSet<Elem>> = decomposition.maximal_cosets().collect();
    classes.sort_by_key(|c| *c.iter().next().expect("cosets are nonempty"));
    let mut class_of = vec![0; pg.size()];
    for (i, c) in classes.iter().enumerate() {
        for &x in *c {
            class_of[x] = i;
        }
    }
    let reps: Vec<Elem> = classes.iter().map(|c| *c.iter().next().expect("nonempty")).collect();
    let name = format!("{}/{}", pg.name(), pg.fmt_set(z));
    let quotient = Arc::new(PartialGroup::central_quotient(name, Arc::clone(pg), reps, class_of.clone()));
    let image = |set: &BTreeSet<Elem>| -> BTreeSet<Elem> { set.iter().map(|&x| class_of[x]).collect() };
    let delta: Vec<BTreeSet<Elem>> = loc.delta_sets().iter().map(image).collect();
    let qloc = Locality::new(Arc::clone(&quotient), loc.p(), &image(&loc.s()), &delta)?.verified(&CONSTRUCTION_PLAN)?;
    let beta = PartialGroupMap::new(Arc::clone(pg), quotient, class_of)?;
    Ok((qloc, beta))
}

/// The image `(L0β, Δ0β, S0β)` of a sublocality `loc0` of `loc` as a
/// triple inside `target`. Only the shape is checked.
pub fn image_sublocality(
    loc: &Locality,
    beta: &PartialGroupMap,
    target: &Locality,
    loc0: &Locality,
) -> Result<Locality> {
    let members = loc
        .members_of(loc0)
        .ok_or_else(|| Error::Contract(format!("{} is not inside {}", loc0.pg().name(), loc.pg().name())))?;
    let lift = |set: &BTreeSet<Elem>| -> BTreeSet<Elem> { set.iter().map(|&x| beta.apply(members[x])).collect() };
    let image: BTreeSet<Elem> = members.iter().map(|&x| beta.apply(x)).collect();
    let delta: Vec<BTreeSet<Elem>> = loc0.delta_sets().iter().map(lift).collect();
    target.sublocality(&image, &lift(&loc0.s()), &delta, format!("{}β", loc0.pg().name()))
}

/// The external central product of two localities over `Z ≤ Z(L1 × L2)`.
#[derive(Debug)]
pub struct CentralProduct {
    pub product: Locality,
    pub hats: [Locality; 2],
    pub z: BTreeSet<Elem>,
    pub quotient: Locality,
    pub beta: PartialGroupMap,
    /// `(L̂iβ, Δ̂iβ, Ŝiβ)`, verified sublocalities of the quotient.
    pub images: [Locality; 2],
}

/// `(L/Z, Δβ, Sβ)` for `L = L1 × L2` and `Z` given by ids of `L1 × L2`.
pub fn external_central_product_locality(
    loc1: &Locality,
    loc2: &Locality,
    z: &BTreeSet<Elem>,
) -> Result<CentralProduct> {
    let product = direct_product_locality(loc1, loc2)?;
    let pg = product.pg();
    if z.iter().any(|&x| x >= pg.size()) || !pg.is_subgroup(z) {
        return input(format!("{:?} is not a subgroup of {}", z, pg.name()));
    }
    if !z.is_subset(&pg.center()) {
        return input(format!("{} is not central in {}", pg.fmt_set(z), pg.name()));
    }
    for i in 1..=2 {
        if factor_image(pg, i)?.intersection(z).count() != 1 {
            return input(format!("{} meets L̂{i} nontrivially", pg.fmt_set(z)));
        }
    }
    let hats = [hat_sublocality(&product, loc1, 1)?, hat_sublocality(&product, loc2, 2)?];
    let (quotient, beta) = canonical_projection_central(&product, z)?;
    let images = [
        image_sublocality(&product, &beta, &quotient, &hats[0])?.verified(&CONSTRUCTION_PLAN)?,
        image_sublocality(&product, &beta, &quotient, &hats[1])?.verified(&CONSTRUCTION_PLAN)?,
    ];
    Ok(CentralProduct { product, hats, z: z.clone(), quotient, beta, images })
}

/// Checks for a projection `β: L → L'` with central kernel and a
/// sublocality `loc0`: the image is a sublocality, `β|_{L0}` is a
/// projection of partial groups onto it, and partial normality transfers.
pub fn projection_transport_checks(
    loc: &Locality,
    beta: &PartialGroupMap,
    target: &Locality,
    loc0: &Locality,
    plan: &ScanPlan,
) -> Result<CheckReport> {
    let mut r = CheckReport::exact();
    let members: BTreeSet<Elem> = loc
        .members_of(loc0)
        .ok_or_else(|| Error::Contract(format!("{} is not inside {}", loc0.pg().name(), loc.pg().name())))?
        .into_iter()
        .collect();
    let class = beta.classify(plan);
    r.exhaustive &= class.exhaustive;
    r.check(class.class >= MapClass::Projection, || format!("β is only {:?}", class.class));
    if class.class >= MapClass::Homomorphism {
        let kernel = beta.kernel()?;
        r.check(kernel.is_subset(&loc.pg().center()), || "ker(β) is not central".into());
    }
    let image = beta.image_partial_subgroup(&members, plan)?;
    r.check(image.is_partial_subgroup, || "L0β is not a partial subgroup".into());
    r.absorb_labeled("(D ∩ W(L0))β* = D' ∩ W(L0β)", image.domain_equality);
    if loc.pg().is_partial_normal(&members) {
        r.check(image.is_partial_normal, || "L0 is partial normal but L0β is not".into());
    }
    let l0b = image_sublocality(loc, beta, target, loc0)?;
    r.absorb_labeled("sublocality", target.sublocality_check(&l0b, plan));
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralFusionReport {
    pub z_in_s: bool,
    /// `Z ≤ Z(F1 × F2)`.
    pub z_central: bool,
    /// `F_{Sβ}(L/Z) = (F1 × F2)/Z` Hom-set-exactly.
    pub equality: CheckReport,
    /// `(F1 × F2)/Z` is the internal central product of the images of the
    /// factors.
    pub internal: Option<InternalFusionReport>,
}

impl CentralFusionReport {
    pub fn passed(&self) -> bool {
        self.z_in_s && self.z_central && self.equality.passed() && self.internal.as_ref().is_some_and(|r| r.verdict)
    }
}

/// Compares the fusion system of a central product of localities with the
/// quotient `(F1 × F2)/Z` of the product of the factor fusion systems.
pub fn central_product_fusion_check(
    cp: &CentralProduct,
    loc1: &Locality,
    loc2: &Locality,
) -> Result<CentralFusionReport> {
    let prod = &cp.product;
    let Some(z) = prod.mask_of(&cp.z) else {
        return Ok(CentralFusionReport {
            z_in_s: false,
            z_central: false,
            equality: CheckReport::exact(),
            internal: None,
        });
    };
    let f = direct_product_fusion(&loc1.fusion()?, &loc2.fusion()?)?;
    let z_central = z & !f.center() == 0;
    if !z_central {
        return Ok(CentralFusionReport { z_in_s: true, z_central, equality: CheckReport::exact(), internal: None });
    }
    let (fq, alpha) = quotient_fusion(&f, z)?;
    let q = &cp.quotient;
    let mut map = vec![usize::MAX; fq.s().order()];
    for (x, &id) in prod.s_ids().iter().enumerate() {
        let set = BTreeSet::from([cp.beta.apply(id)]);
        let pos = q.mask_of(&set).ok_or_else(|| Error::Contract("Sβ is not the quotient S".into()))?;
        map[alpha.apply(x)] = pos.trailing_zeros() as usize;
    }
    let iso = GroupHom::new(Arc::clone(fq.s()), Arc::clone(q.s_group()), map)?;
    let transported = fq.transport(&iso)?;
    let actual = q.fusion()?;
    let equality = actual.compare(&transported);
    let f1 = q.fusion_of_sublocality(&cp.images[0])?;
    let f2 = q.fusion_of_sublocality(&cp.images[1])?;
    let internal = Some(is_internal_central_product(&actual, &f1, &f2)?);
    Ok(CentralFusionReport { z_in_s: true, z_central, equality, internal })
}

/// For a recognized internal central product with central kernel, the map
/// `(L1 × L2)/ker(φ) → L, h ker(φ) ↦ hφ` is an isomorphism of localities.
pub fn induced_isomorphism_check(
    loc: &Locality,
    loc1: &Locality,
    loc2: &Locality,
    report: &InternalProductReport,
    plan: &ScanPlan,
) -> Result<CheckReport> {
    let phi = report
        .phi
        .as_ref()
        .filter(|_| report.classification >= MapClass::Projection)
        .ok_or_else(|| Error::Contract("φ is not a projection".into()))?;
    let product = direct_product_locality(loc1, loc2)?;
    let (quotient, beta) = canonical_projection_central(&product, &report.kernel)?;
    let mut table = vec![usize::MAX; quotient.pg().size()];
    for h in product.pg().elements() {
        table[beta.apply(h)] = phi.apply(h);
    }
    let induced = PartialGroupMap::new(Arc::clone(quotient.pg()), Arc::clone(loc.pg()), table)?;
    let class = induced.classify(plan);
    let mut r = CheckReport::new(class.exhaustive);
    r.check(class.class == MapClass::Isomorphism, || format!("the induced map is only {:?}", class.class));
    let image: BTreeSet<BTreeSet<Elem>> = quotient.delta_sets().iter().map(|p| induced.image(p)).collect();
    let target: BTreeSet<BTreeSet<Elem>> = loc.delta_sets().into_iter().collect();
    r.check(image == target, || "the induced map does not carry Δ onto Δ".into());
    r.check(induced.image(&quotient.s()) == loc.s(), || "the induced map does not carry S onto S".into());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::locality::group_locality;
    use crate::products::{recognize_internal_product, Verdict};

    fn d8_central_product() -> (Locality, CentralProduct) {
        let d8 = catalog::d8();
        let z = d8.center().into_members().into_iter().find(|&x| x != 0).unwrap();
        let loc = group_locality(&d8, 2).unwrap();
        let cp = external_central_product_locality(&loc, &loc, &BTreeSet::from([0, z * 8 + z])).unwrap();
        (loc, cp)
    }

    #[test]
    fn trivial_normal_subgroup_gives_singletons() {
        let pg = PartialGroup::from_group(catalog::s3());
        let d = right_cosets(&pg, &BTreeSet::from([0])).unwrap();
        assert_eq!(d.cosets.len(), 6);
        assert!(d.maximal.iter().all(|&m| m));
    }

    #[test]
    fn d8_central_product_has_32_elements() {
        let (loc, cp) = d8_central_product();
        assert_eq!(cp.quotient.pg().size(), 32);
        let plan = ScanPlan::new(0, 3, 1_000_000, 0);
        assert_eq!(cp.beta.classify(&plan).class, MapClass::Projection);
        assert_eq!(cp.beta.kernel().unwrap(), cp.z);
        let report = recognize_internal_product(&cp.quotient, &cp.images[0], &cp.images[1], &plan).unwrap();
        assert_eq!(report.verdict, Verdict::Central);
        assert_eq!(report.kernel.len(), 2);
        assert!(induced_isomorphism_check(&cp.quotient, &cp.images[0], &cp.images[1], &report, &plan)
            .unwrap()
            .passed());
        let fusion = central_product_fusion_check(&cp, &loc, &loc).unwrap();
        assert!(fusion.passed(), "{fusion:?}");
        assert!(projection_transport_checks(&cp.product, &cp.beta, &cp.quotient, &cp.hats[0], &plan).unwrap().passed());
    }

    #[test]
    fn non_central_subgroup_is_unsupported() {
        let loc = group_locality(&catalog::d8(), 2).unwrap();
        let center = loc.pg().center();
        let reflection = loc.pg().elements().find(|&x| !center.contains(&x) && loc.pg().inv(x) == x).unwrap();
        let err = canonical_projection_central(&loc, &BTreeSet::from([0, reflection])).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }
}
