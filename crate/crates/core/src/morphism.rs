//! Maps between partial groups, stored extensionally over dense ids, and
//! their classification as homomorphisms, projections or isomorphisms.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::partial_group::{PartialGroup, Provenance};
use crate::report::CheckReport;
use crate::words::{ScanPlan, Word};
use crate::Elem;

/// Lifts tried per target word before a projection check gives up on it.
const LIFT_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapClass {
    None,
    Homomorphism,
    Projection,
    Isomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: MapClass,
    pub injective: bool,
    pub surjective: bool,
    /// Every word up to the length cap was checked on both sides.
    pub exhaustive: bool,
    /// Words of the source checked for the homomorphism property.
    pub homomorphism: CheckReport,
    /// Words of the target checked for a preimage in the source domain.
    pub projection: CheckReport,
}

pub struct PartialGroupMap {
    source: Arc<PartialGroup>,
    target: Arc<PartialGroup>,
    map: Vec<Elem>,
    classification: OnceLock<Classification>,
}

impl std::fmt::Debug for PartialGroupMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PartialGroupMap")
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .field("map", &self.map)
            .finish()
    }
}

impl PartialGroupMap {
    pub fn new(source: Arc<PartialGroup>, target: Arc<PartialGroup>, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.size() {
            return input(format!("map has {} entries, source {} has {}", map.len(), source.name(), source.size()));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.size()) {
            return input(format!("image {bad} is outside {}", target.name()));
        }
        Ok(PartialGroupMap { source, target, map, classification: OnceLock::new() })
    }

    pub fn identity(pg: &Arc<PartialGroup>) -> Self {
        Self::new(Arc::clone(pg), Arc::clone(pg), pg.elements().collect()).expect("identity is total")
    }

    pub fn source(&self) -> &Arc<PartialGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PartialGroup> {
        &self.target
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, f: Elem) -> Elem {
        self.map[f]
    }

    /// `β*`, applied entrywise.
    pub fn induced_word_map(&self, w: &[Elem]) -> Word {
        Word(w.iter().map(|&f| self.map[f]).collect())
    }

    pub fn image(&self, set: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        set.iter().map(|&f| self.map[f]).collect()
    }

    pub fn preimage(&self, set: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        self.source.elements().filter(|&f| set.contains(&self.map[f])).collect()
    }

    pub fn is_injective(&self) -> bool {
        let image: BTreeSet<Elem> = self.map.iter().copied().collect();
        image.len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        let image: BTreeSet<Elem> = self.map.iter().copied().collect();
        image.len() == self.target.size()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PartialGroupMap) -> Result<PartialGroupMap> {
        if !Arc::ptr_eq(&self.target, &next.source) {
            return input(format!("cannot compose: {} is not {}", self.target.name(), next.source.name()));
        }
        let map = self.map.iter().map(|&y| next.map[y]).collect();
        Self::new(Arc::clone(&self.source), Arc::clone(&next.target), map)
    }

    /// The inverse of a bijection.
    pub fn inverse(&self) -> Result<PartialGroupMap> {
        if !(self.is_injective() && self.is_surjective()) {
            return input("only bijections can be inverted");
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Self::new(Arc::clone(&self.target), Arc::clone(&self.source), inv)
    }

    /// Classifies under `plan` and caches the result for [`Self::kernel`].
    ///
    /// Homomorphism: `Π'(vβ*) = Π(v)β` for every checked `v ∈ D`.
    /// Projection: additionally every checked `w ∈ D'` is `vβ*` for some
    /// `v ∈ D`. Isomorphism: an injective projection.
    pub fn classify(&self, plan: &ScanPlan) -> &Classification {
        self.classification.get_or_init(|| self.compute_classification(plan))
    }

    pub fn classification(&self) -> Option<&Classification> {
        self.classification.get()
    }

    fn compute_classification(&self, plan: &ScanPlan) -> Classification {
        let homomorphism = self.homomorphism_report(plan);
        let injective = self.is_injective();
        let surjective = self.is_surjective();
        let projection =
            if homomorphism.passed() && surjective { self.projection_report(plan) } else { CheckReport::exact() };
        let class = match (homomorphism.passed(), surjective && projection.passed(), injective) {
            (false, _, _) => MapClass::None,
            (true, false, _) => MapClass::Homomorphism,
            (true, true, false) => MapClass::Projection,
            (true, true, true) => MapClass::Isomorphism,
        };
        let exhaustive = homomorphism.exhaustive && projection.exhaustive;
        Classification { class, injective, surjective, exhaustive, homomorphism, projection }
    }

    fn homomorphism_report(&self, plan: &ScanPlan) -> CheckReport {
        if self.source.as_group().is_some() && self.target.as_group().is_some() {
            // Both domains are all words; pairs decide the question.
            let mut r = CheckReport::exact();
            for a in self.source.elements() {
                for b in self.source.elements() {
                    let lhs = self.source.evaluate(&[a, b]).map(|x| self.map[x]);
                    let rhs = self.target.evaluate(&[self.map[a], self.map[b]]);
                    r.check(lhs == rhs, || format!("({a}, {b})"));
                }
            }
            return r;
        }
        let plan = ScanPlan { n: self.source.size(), ..*plan };
        let out = plan.scan(
            || (CheckReport::new(true), Vec::new()),
            |(r, buf): &mut (CheckReport, Vec<Elem>), w| {
                let Some(value) = self.source.evaluate(w) else { return };
                buf.clear();
                buf.extend(w.iter().map(|&f| self.map[f]));
                let image = self.target.evaluate(buf);
                r.check(image == Some(self.map[value]), || {
                    format!("{} maps to {}", self.source.fmt_word(w), self.target.fmt_word(buf))
                });
            },
            |(a, buf), (b, _)| (a.merged(b), buf),
        );
        CheckReport { exhaustive: out.exhaustive, ..out.acc.0 }
    }

    fn projection_report(&self, plan: &ScanPlan) -> CheckReport {
        let fibres = self.fibres();
        let plan = ScanPlan { n: self.target.size(), ..*plan };
        let out = plan.scan(
            || CheckReport::new(true),
            |r, w| {
                if !self.target.in_domain(w) {
                    return;
                }
                match lift(&self.source, &fibres, w) {
                    Lift::Found => r.tick(),
                    Lift::None => r.fail(format!("{} has no preimage in the domain", self.target.fmt_word(w))),
                    Lift::GaveUp => {
                        r.tick();
                        r.exhaustive = false;
                    }
                }
            },
            CheckReport::merged,
        );
        let exhaustive = out.exhaustive && out.acc.exhaustive;
        CheckReport { exhaustive, ..out.acc }
    }

    fn fibres(&self) -> Vec<Vec<Elem>> {
        let mut fibres = vec![Vec::new(); self.target.size()];
        for (x, &y) in self.map.iter().enumerate() {
            fibres[y].push(x);
        }
        fibres
    }

    /// `ker(β)`; requires a prior classification as a homomorphism.
    pub fn kernel(&self) -> Result<BTreeSet<Elem>> {
        match self.classification.get() {
            None => Err(Error::Contract("kernel requested before classification".into())),
            Some(c) if c.class == MapClass::None => {
                Err(Error::Contract(format!("{} → {} is not a homomorphism", self.source.name(), self.target.name())))
            }
            Some(_) => Ok(self.source.elements().filter(|&f| self.map[f] == self.target.identity()).collect()),
        }
    }

    /// `Hβ` for a partial subgroup `H`, with a check of
    /// `(D ∩ W(H))β* = D' ∩ W(Hβ)` on the planned words of `W(Hβ)`.
    pub fn image_partial_subgroup(&self, h: &BTreeSet<Elem>, plan: &ScanPlan) -> Result<ImageReport> {
        if !self.source.is_partial_subgroup(h) {
            return input(format!("{} is not a partial subgroup", self.source.fmt_set(h)));
        }
        let image = self.image(h);
        let image_ids: Vec<Elem> = image.iter().copied().collect();
        let fibres: Vec<Vec<Elem>> =
            image_ids.iter().map(|&y| h.iter().copied().filter(|&x| self.map[x] == y).collect()).collect();
        let plan = ScanPlan { n: image_ids.len(), ..*plan };
        let out = plan.scan(
            || (CheckReport::new(true), Vec::new()),
            |(r, buf): &mut (CheckReport, Vec<Elem>), local| {
                buf.clear();
                buf.extend(local.iter().map(|&i| image_ids[i]));
                if !self.target.in_domain(buf) {
                    return;
                }
                let local_fibres: Vec<Vec<Elem>> = local.iter().map(|&i| fibres[i].clone()).collect();
                let idx: Vec<Elem> = (0..local.len()).collect();
                match lift(&self.source, &local_fibres, &idx) {
                    Lift::Found => r.tick(),
                    Lift::None => r.fail(format!("{} has no preimage in W(H) ∩ D", self.target.fmt_word(buf))),
                    Lift::GaveUp => {
                        r.tick();
                        r.exhaustive = false;
                    }
                }
            },
            |(a, buf), (b, _)| (a.merged(b), buf),
        );
        let domain_equality = CheckReport { exhaustive: out.exhaustive && out.acc.0.exhaustive, ..out.acc.0 };
        let central_kernel = {
            let ker: BTreeSet<Elem> = self.source.elements().filter(|&f| self.map[f] == 0).collect();
            ker.is_subset(&self.source.center())
        };
        Ok(ImageReport {
            is_partial_subgroup: self.target.is_partial_subgroup(&image),
            is_partial_normal: self.target.is_partial_normal(&image),
            image,
            central_kernel,
            domain_equality,
        })
    }

    /// Whether source and target come from constructors whose domains make
    /// the classification decidable from finitely many words.
    pub fn structurally_decidable(&self) -> bool {
        use Provenance::*;
        let decidable = |p| matches!(p, Group | LocalityFromGroup | DirectProduct | CentralQuotient);
        decidable(self.source.provenance()) && decidable(self.target.provenance())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    pub image: BTreeSet<Elem>,
    pub is_partial_subgroup: bool,
    pub is_partial_normal: bool,
    /// `ker(β) ⊆ Z(L)`, under which the domain equality holds for all words.
    pub central_kernel: bool,
    pub domain_equality: CheckReport,
}

enum Lift {
    Found,
    None,
    GaveUp,
}

/// Searches a preimage of `w` (indices into `fibres`) inside the domain of
/// `pg`, pruning on prefixes: every prefix of a word in `D` lies in `D`.
fn lift(pg: &PartialGroup, fibres: &[Vec<Elem>], w: &[Elem]) -> Lift {
    let n = w.len();
    if n == 0 {
        return if pg.in_domain(&[]) { Lift::Found } else { Lift::None };
    }
    let mut choice = vec![0usize; n];
    let mut word = Vec::with_capacity(n);
    let mut tried = 0usize;
    let mut depth = 0usize;
    loop {
        if choice[depth] >= fibres[w[depth]].len() {
            if depth == 0 {
                return Lift::None;
            }
            choice[depth] = 0;
            depth -= 1;
            word.pop();
            choice[depth] += 1;
            continue;
        }
        tried += 1;
        if tried > LIFT_CAP {
            return Lift::GaveUp;
        }
        word.push(fibres[w[depth]][choice[depth]]);
        if pg.in_domain(&word) {
            if depth + 1 == n {
                return Lift::Found;
            }
            depth += 1;
        } else {
            word.pop();
            choice[depth] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn identity_is_isomorphism_with_trivial_kernel() {
        let s3 = PartialGroup::from_group(catalog::s3());
        let id = PartialGroupMap::identity(&s3);
        assert!(id.kernel().is_err());
        let c = id.classify(&ScanPlan::new(0, 3, 1_000_000, 42));
        assert_eq!(c.class, MapClass::Isomorphism);
        assert_eq!(id.kernel().unwrap(), BTreeSet::from([0]));
        assert_eq!(id.induced_word_map(&[]), Word::empty());
    }

    #[test]
    fn sign_map_is_projection_with_a3_kernel() {
        let s3 = PartialGroup::from_group(catalog::s3());
        let c2 = PartialGroup::from_group(catalog::c2());
        let g = s3.as_group().unwrap().clone();
        let sign: Vec<Elem> = g.elements().map(|x| usize::from(g.element_order(x) == 2)).collect();
        let beta = PartialGroupMap::new(s3.clone(), c2, sign).unwrap();
        assert_eq!(beta.classify(&ScanPlan::new(0, 3, 1_000_000, 42)).class, MapClass::Projection);
        let ker = beta.kernel().unwrap();
        assert_eq!(ker.len(), 3);
        assert!(s3.is_partial_normal(&ker));
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let s3 = PartialGroup::from_group(catalog::s3());
        let c2 = PartialGroup::from_group(catalog::c2());
        let map = (0..6).map(|x| usize::from(x == 1)).collect();
        let beta = PartialGroupMap::new(s3, c2, map).unwrap();
        assert_eq!(beta.classify(&ScanPlan::new(0, 3, 1000, 0)).class, MapClass::None);
        assert!(matches!(beta.kernel(), Err(Error::Contract(_))));
    }
}
