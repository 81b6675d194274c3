//! Localities `(L, Δ, S)`: a partial group with a maximal p-subgroup `S`
//! and a set `Δ` of subgroups of `S` such that the domain is `D_Δ`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::fusion::{FusionSystem, Morphism};
use crate::group::{is_power_of, is_prime, FiniteGroup};
use crate::partial_group::PartialGroup;
use crate::pgroup::{bit, bits, Mask, PGroup, MAX_ORDER};
use crate::report::CheckReport;
use crate::words::{ScanPlan, DEFAULT_SEED};
use crate::Elem;

const OUTSIDE: u8 = u8::MAX;

/// Word plan used when a constructor verifies its own output.
pub const CONSTRUCTION_PLAN: ScanPlan = ScanPlan { n: 0, max_len: 3, budget: 1_000_000, seed: DEFAULT_SEED };

pub struct Locality {
    pg: Arc<PartialGroup>,
    p: usize,
    /// Carrier ids of `S`, ascending; position `i` is id `i` of `s_group`.
    s: Vec<Elem>,
    s_pos: Vec<u8>,
    s_group: Arc<PGroup>,
    /// Members of `Δ` as masks over positions in `s`, in lattice order.
    delta: Vec<Mask>,
    delta_set: HashSet<Mask>,
}

impl fmt::Debug for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Locality")
            .field("pg", &self.pg.name())
            .field("carrier", &self.pg.size())
            .field("s", &self.s.len())
            .field("delta", &self.delta.len())
            .finish()
    }
}

/// `v ∈ D_Δ via P0, …, Pn`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaWitness {
    pub chain: Vec<BTreeSet<Elem>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LocalityReport {
    pub structure: CheckReport,
    /// `S` is maximal among p-subgroups of `L`.
    pub l1: CheckReport,
    /// `D = D_Δ`.
    pub l2: CheckReport,
    /// `Δ` is closed under overgroups in `S` and under conjugation into `S`.
    pub l3: CheckReport,
}

impl LocalityReport {
    pub fn passed(&self) -> bool {
        self.structure.passed() && self.l1.passed() && self.l2.passed() && self.l3.passed()
    }

    pub fn summary(&self) -> CheckReport {
        let mut r = CheckReport::exact();
        r.absorb_labeled("structure", self.structure.clone());
        r.absorb_labeled("L1", self.l1.clone());
        r.absorb_labeled("L2", self.l2.clone());
        r.absorb_labeled("L3", self.l3.clone());
        r
    }
}

impl Locality {
    /// Wraps `pg` with `S` and `Δ` (sets of carrier ids). Only the shape is
    /// checked here; [`Self::verify`] checks the locality axioms.
    pub fn new(pg: Arc<PartialGroup>, p: usize, s: &BTreeSet<Elem>, delta: &[BTreeSet<Elem>]) -> Result<Self> {
        if !is_prime(p) {
            return input(format!("{p} is not prime"));
        }
        if s.len() > MAX_ORDER {
            return input(format!("|S| = {} exceeds {MAX_ORDER}", s.len()));
        }
        if !pg.is_subgroup(s) {
            return input(format!("{} is not a subgroup of {}", pg.fmt_set(s), pg.name()));
        }
        let s_ids: Vec<Elem> = s.iter().copied().collect();
        let mut s_pos = vec![OUTSIDE; pg.size()];
        for (i, &x) in s_ids.iter().enumerate() {
            s_pos[x] = i as u8;
        }
        let (table, _) = pg.subgroup_as_group(s, format!("S({})", pg.name()))?;
        let s_group = PGroup::new(table, p)?;
        let mut masks = Vec::with_capacity(delta.len());
        for d in delta {
            let mut m = 0;
            for &x in d {
                if x >= pg.size() || s_pos[x] == OUTSIDE {
                    return input(format!("{} is not contained in S", pg.fmt_set(d)));
                }
                m |= bit(s_pos[x] as Elem);
            }
            if !s_group.is_subgroup(m) {
                return input(format!("{} is not a subgroup of S", pg.fmt_set(d)));
            }
            masks.push(m);
        }
        Self::from_masks(pg, p, s_ids, s_pos, s_group, masks)
    }

    pub(crate) fn from_masks(
        pg: Arc<PartialGroup>,
        p: usize,
        s: Vec<Elem>,
        s_pos: Vec<u8>,
        s_group: Arc<PGroup>,
        mut delta: Vec<Mask>,
    ) -> Result<Self> {
        delta.sort_by_key(|m| s_group.subgroup_index(*m));
        delta.dedup();
        if delta.is_empty() {
            return input("Δ must be nonempty");
        }
        let delta_set = delta.iter().copied().collect();
        Ok(Locality { pg, p, s, s_pos, s_group, delta, delta_set })
    }

    pub fn pg(&self) -> &Arc<PartialGroup> {
        &self.pg
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn s(&self) -> BTreeSet<Elem> {
        self.s.iter().copied().collect()
    }

    /// Carrier ids of `S`; position `i` is element `i` of [`Self::s_group`].
    pub fn s_ids(&self) -> &[Elem] {
        &self.s
    }

    pub fn s_group(&self) -> &Arc<PGroup> {
        &self.s_group
    }

    pub fn delta(&self) -> &[Mask] {
        &self.delta
    }

    pub fn in_delta(&self, mask: Mask) -> bool {
        self.delta_set.contains(&mask)
    }

    pub fn delta_sets(&self) -> Vec<BTreeSet<Elem>> {
        self.delta.iter().map(|&m| self.set_of(m)).collect()
    }

    /// Carrier ids of a mask over `S`.
    pub fn set_of(&self, mask: Mask) -> BTreeSet<Elem> {
        bits(mask).map(|i| self.s[i]).collect()
    }

    /// Mask over `S` of a set of carrier ids, if the set lies in `S`.
    pub fn mask_of(&self, set: &BTreeSet<Elem>) -> Option<Mask> {
        set.iter().try_fold(0, |acc, &x| {
            let i = *self.s_pos.get(x)?;
            (i != OUTSIDE).then(|| acc | bit(i as Elem))
        })
    }

    /// Position in `S` of the conjugate `s_i^f`, if defined and in `S`.
    #[inline]
    fn step(&self, i: Elem, f: Elem) -> Option<Elem> {
        let y = self.pg.conj(self.s[i], f)?;
        let j = self.s_pos[y];
        (j != OUTSIDE).then_some(j as Elem)
    }

    /// `S_g` as a mask.
    pub fn s_g(&self, g: Elem) -> Mask {
        (0..self.s.len()).filter(|&i| self.step(i, g).is_some()).fold(0, |acc, i| acc | bit(i))
    }

    /// Image of `P ⊆ S_f` under conjugation by `f`.
    pub fn conj_mask(&self, mask: Mask, f: Elem) -> Option<Mask> {
        bits(mask).try_fold(0, |acc, i| self.step(i, f).map(|j| acc | bit(j)))
    }

    /// `S_w`: elements of `S` whose successive conjugates along `w` are
    /// defined and stay in `S`.
    pub fn s_w(&self, w: &[Elem]) -> Mask {
        (0..self.s.len())
            .filter(|&i| w.iter().try_fold(i, |x, &f| self.step(x, f)).is_some())
            .fold(0, |acc, i| acc | bit(i))
    }

    fn chain_from(&self, start: Mask, w: &[Elem]) -> Option<Vec<Mask>> {
        let mut chain = vec![start];
        let mut cur = start;
        for &f in w {
            cur = self.conj_mask(cur, f)?;
            if !self.in_delta(cur) {
                return None;
            }
            chain.push(cur);
        }
        Some(chain)
    }

    fn dd_chain(&self, w: &[Elem]) -> Option<Vec<Mask>> {
        if w.iter().any(|&f| f >= self.pg.size()) {
            return None;
        }
        let sw = self.s_w(w);
        if self.in_delta(sw) {
            if let Some(chain) = self.chain_from(sw, w) {
                return Some(chain);
            }
        }
        self.delta.iter().rev().filter(|&&p| p & !sw == 0).find_map(|&p| self.chain_from(p, w))
    }

    /// A chain `P0, …, Pn` in `Δ` with `P_{i-1}^{f_i} = P_i`, if `w ∈ D_Δ`.
    pub fn dd_membership(&self, w: &[Elem]) -> Option<DeltaWitness> {
        self.dd_chain(w).map(|chain| DeltaWitness { chain: chain.into_iter().map(|m| self.set_of(m)).collect() })
    }

    pub fn in_dd(&self, w: &[Elem]) -> bool {
        self.dd_chain(w).is_some()
    }

    /// Checks the structural requirements and axioms L1–L3, with `D = D_Δ`
    /// compared on the planned words.
    pub fn verify(&self, plan: &ScanPlan) -> LocalityReport {
        LocalityReport {
            structure: self.structure_check(),
            l1: self.maximality_check(),
            l2: self.domain_check(plan),
            l3: self.closure_check(),
        }
    }

    fn structure_check(&self) -> CheckReport {
        let mut r = CheckReport::exact();
        let s = self.s();
        r.check(self.pg.is_subgroup(&s), || "S is not a subgroup".into());
        r.check(is_power_of(s.len(), self.p), || format!("|S| = {} is not a power of {}", s.len(), self.p));
        r.check(!self.delta.is_empty(), || "Δ is empty".into());
        for &m in &self.delta {
            r.check(self.s_group.is_subgroup(m), || format!("{} is not a subgroup of S", self.describe(m)));
        }
        r
    }

    /// For each `x ∉ S`, closes `S ∪ {x}` under defined binary products.
    /// Every p-subgroup `P > S` contains such a closure for any `x ∈ P \ S`,
    /// and that closure is then itself a p-subgroup, so the scan is exact.
    fn maximality_check(&self) -> CheckReport {
        let n = self.pg.size();
        let mut cap = 1;
        while cap * self.p <= n {
            cap *= self.p;
        }
        let outside: Vec<Elem> = (0..n).filter(|&x| self.s_pos[x] == OUTSIDE).collect();
        let shards: Vec<CheckReport> = outside
            .par_iter()
            .map(|&x| {
                let mut r = CheckReport::exact();
                let closure = self.closure_of(x, cap);
                let violation =
                    closure.as_ref().is_some_and(|c| is_power_of(c.len(), self.p) && self.pg.is_subgroup(c));
                r.check(!violation, || format!("S and {} generate a larger p-subgroup", self.pg.label(x)));
                r
            })
            .collect();
        shards.into_iter().fold(CheckReport::exact(), CheckReport::merged)
    }

    /// Closure of `S ∪ {x}` under defined pair products, or `None` once it
    /// exceeds `cap` elements.
    fn closure_of(&self, x: Elem, cap: usize) -> Option<BTreeSet<Elem>> {
        let mut members: Vec<Elem> = self.s.clone();
        let mut inside = vec![false; self.pg.size()];
        for &s in &self.s {
            inside[s] = true;
        }
        let mut queue = vec![x];
        inside[x] = true;
        members.push(x);
        while let Some(a) = queue.pop() {
            let snapshot = members.clone();
            for b in snapshot {
                for w in [[a, b], [b, a]] {
                    if let Some(c) = self.pg.evaluate(&w) {
                        if !inside[c] {
                            inside[c] = true;
                            members.push(c);
                            if members.len() > cap {
                                return None;
                            }
                            queue.push(c);
                        }
                    }
                }
            }
        }
        Some(members.into_iter().collect())
    }

    fn domain_check(&self, plan: &ScanPlan) -> CheckReport {
        let plan = ScanPlan { n: self.pg.size(), ..*plan };
        let out = plan.scan(
            || CheckReport::new(true),
            |r, w| {
                let (d, dd) = (self.pg.in_domain(w), self.in_dd(w));
                r.check(d == dd, || format!("{}: in D is {d}, in D_Δ is {dd}", self.pg.fmt_word(w)));
            },
            CheckReport::merged,
        );
        CheckReport { exhaustive: out.exhaustive, ..out.acc }
    }

    fn closure_check(&self) -> CheckReport {
        let mut r = CheckReport::exact();
        for &p in &self.delta {
            for q in self.s_group.overgroups(p, self.s_group.full()) {
                r.check(self.in_delta(q), || {
                    format!("{} ∈ Δ but its overgroup {} is not", self.describe(p), self.describe(q))
                });
            }
        }
        r.absorb(self.conjugation_closure_check());
        r
    }

    /// `P^g ∈ Δ` for every `P ∈ Δ` and `g` with `P ⊆ S_g`.
    pub fn conjugation_closure_check(&self) -> CheckReport {
        let shards: Vec<CheckReport> = (0..self.pg.size())
            .into_par_iter()
            .map(|g| {
                let mut r = CheckReport::exact();
                let sg = self.s_g(g);
                for &p in self.delta.iter().filter(|&&p| p & !sg == 0) {
                    let image = self.conj_mask(p, g).expect("P ⊆ S_g");
                    r.check(self.in_delta(image), || {
                        format!("{}^{} = {} ∉ Δ", self.describe(p), self.pg.label(g), self.describe(image))
                    });
                }
                r
            })
            .collect();
        shards.into_iter().fold(CheckReport::exact(), CheckReport::merged)
    }

    /// Fails with the report unless every check passes.
    pub fn verified(self, plan: &ScanPlan) -> Result<Self> {
        let report = self.verify(plan);
        if report.passed() {
            Ok(self)
        } else {
            let summary = report.summary();
            Err(Error::Verification {
                summary: format!("{} is not a locality ({} failures)", self.pg.name(), summary.failure_count),
                details: summary.failures,
            })
        }
    }

    pub fn describe(&self, mask: Mask) -> String {
        self.pg.fmt_set(&self.set_of(mask))
    }

    /// `N_L(P)` for `P ∈ Δ` as a group, with its carrier ids.
    pub fn normalizer_group(&self, p: &BTreeSet<Elem>) -> Result<(FiniteGroup, Vec<Elem>)> {
        let mask = self.mask_of(p).filter(|m| self.in_delta(*m));
        if mask.is_none() {
            return input(format!("{} is not in Δ", self.pg.fmt_set(p)));
        }
        let members = self.pg.normalizer(p);
        self.pg.subgroup_as_group(&members, format!("N({})", self.pg.fmt_set(p)))
    }

    /// `F_S(L)`, generated by the conjugation maps `c_g: S_g → S`.
    pub fn fusion(&self) -> Result<FusionSystem> {
        let n = self.s.len();
        let seeds: BTreeSet<Morphism> = (0..self.pg.size())
            .into_par_iter()
            .map(|g| {
                let dom = self.s_g(g);
                Morphism::from_fn(n, dom, |i| self.step(i, g).expect("i ∈ S_g"))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        let seeds: Vec<Morphism> = seeds.into_iter().collect();
        FusionSystem::generate(Arc::clone(&self.s_group), &seeds, format!("F({})", self.pg.name()))
    }

    /// `N_L(P)` is of characteristic p for every `P ∈ Δ`.
    pub fn is_objective_characteristic_p(&self) -> Result<bool> {
        for &m in &self.delta {
            let (group, _) = self.normalizer_group(&self.set_of(m))?;
            if !group.is_characteristic_p(self.p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Objective characteristic p and `F_S(L)^{cr} ⊆ Δ`.
    pub fn is_linking(&self) -> Result<bool> {
        if !self.is_objective_characteristic_p()? {
            return Ok(false);
        }
        let f = self.fusion()?;
        Ok(f.centric_radicals().iter().all(|m| self.in_delta(*m)))
    }

    /// `loc0` is a sublocality: its partial group is a partial subgroup with
    /// the restricted product, `S0 = S ∩ L0`, `Δ0` consists of subgroups of
    /// `S0`, and it is a locality.
    pub fn sublocality_check(&self, loc0: &Locality, plan: &ScanPlan) -> CheckReport {
        let mut r = CheckReport::exact();
        let Some(members) = self.members_of(loc0) else {
            r.fail(format!("{} is not a sub-partial-group of {}", loc0.pg.name(), self.pg.name()));
            return r;
        };
        let set: BTreeSet<Elem> = members.iter().copied().collect();
        r.check(self.pg.is_partial_subgroup(&set), || "L0 is not a partial subgroup".into());
        r.check(loc0.p == self.p, || "prime mismatch".into());
        let s0: BTreeSet<Elem> = loc0.s_ids().iter().map(|&x| members[x]).collect();
        let expected: BTreeSet<Elem> = set.intersection(&self.s()).copied().collect();
        r.check(s0 == expected, || {
            format!("S0 = {} but S ∩ L0 = {}", self.pg.fmt_set(&s0), self.pg.fmt_set(&expected))
        });
        let report = loc0.verify(plan);
        r.absorb_labeled("L0", report.summary());
        r
    }

    pub fn is_sublocality(&self, loc0: &Locality, plan: &ScanPlan) -> bool {
        self.sublocality_check(loc0, plan).passed()
    }

    /// Carrier ids in `L` of the elements of `loc0`, when the partial group
    /// of `loc0` is `L` itself or was cut out of `L` by [`PartialGroup::sub`].
    pub fn members_of(&self, loc0: &Locality) -> Option<Vec<Elem>> {
        if Arc::ptr_eq(&self.pg, &loc0.pg) {
            return Some(self.pg.elements().collect());
        }
        match loc0.pg.sub_parts() {
            Some((parent, members)) if Arc::ptr_eq(parent, &self.pg) => Some(members.to_vec()),
            _ => None,
        }
    }

    /// The triple `(L0, Δ0, S0)` on the partial subgroup `members`, with
    /// `S0` and `Δ0` given by carrier ids of `L`. Only the shape is checked.
    pub fn sublocality(
        &self,
        members: &BTreeSet<Elem>,
        s0: &BTreeSet<Elem>,
        delta0: &[BTreeSet<Elem>],
        name: impl Into<String>,
    ) -> Result<Locality> {
        let sub = PartialGroup::sub(&self.pg, members, name)?;
        let ids: Vec<Elem> = members.iter().copied().collect();
        let local = |set: &BTreeSet<Elem>| -> Result<BTreeSet<Elem>> {
            set.iter()
                .map(|x| ids.binary_search(x).or_else(|_| input(format!("{} leaves L0", self.pg.fmt_set(set)))))
                .collect()
        };
        let s_local = local(s0)?;
        let delta_local = delta0.iter().map(local).collect::<Result<Vec<_>>>()?;
        Locality::new(sub, self.p, &s_local, &delta_local)
    }

    /// `F_{S0}(L0)` for a sublocality, as a subsystem over `S0` inside `S`.
    pub fn fusion_of_sublocality(&self, loc0: &Locality) -> Result<FusionSystem> {
        let members = self
            .members_of(loc0)
            .ok_or_else(|| Error::Contract(format!("{} is not inside {}", loc0.pg.name(), self.pg.name())))?;
        let s0: BTreeSet<Elem> = loc0.s.iter().map(|&x| members[x]).collect();
        let base = self.mask_of(&s0).ok_or_else(|| Error::Contract("S0 is not contained in S".into()))?;
        let n = self.s.len();
        let seeds: BTreeSet<Morphism> = members
            .iter()
            .map(|&g| {
                let dom = bits(base)
                    .filter(|&i| self.step(i, g).is_some_and(|j| base & bit(j) != 0))
                    .fold(0, |a, i| a | bit(i));
                Morphism::from_fn(n, dom, |i| self.step(i, g).expect("i ∈ (S0)_g"))
            })
            .collect();
        let seeds: Vec<Morphism> = seeds.into_iter().collect();
        FusionSystem::generate_in(Arc::clone(&self.s_group), base, &seeds, format!("F({})", loc0.pg.name()))
    }
}

/// `L_Δ(G)`: `S` a Sylow p-subgroup, `Δ` the closure of the generators
/// under overgroups in `S` and `G`-conjugation into `S`, carrier
/// `{g : S_g ∈ Δ}` and product the fold in `G` restricted to `D_Δ`.
/// Generators outside `S` are first conjugated into `S`.
pub fn locality_from_group(g: &FiniteGroup, p: usize, delta_generators: &[BTreeSet<Elem>]) -> Result<Locality> {
    locality_from_group_with(g, p, delta_generators, &CONSTRUCTION_PLAN)
}

pub fn locality_from_group_with(
    g: &FiniteGroup,
    p: usize,
    delta_generators: &[BTreeSet<Elem>],
    plan: &ScanPlan,
) -> Result<Locality> {
    if !is_prime(p) || !g.order().is_multiple_of(p) {
        return input(format!("{p} is not a prime divisor of |{}|", g.name()));
    }
    if delta_generators.is_empty() {
        return input("at least one Δ generator is required");
    }
    let sylow = g.sylow(p).into_members();
    if sylow.len() > MAX_ORDER {
        return input(format!("Sylow {p}-subgroup of {} exceeds order {MAX_ORDER}", g.name()));
    }
    let s_ids: Vec<Elem> = sylow.iter().copied().collect();
    let mut pos = vec![OUTSIDE; g.order()];
    for (i, &x) in s_ids.iter().enumerate() {
        pos[x] = i as u8;
    }
    let (sg, _) = g.restrict(&sylow, "S")?;
    let s_group = PGroup::new(sg, p)?;
    let to_mask = |set: &BTreeSet<Elem>| -> Option<Mask> {
        set.iter().try_fold(0, |acc, &x| (pos[x] != OUTSIDE).then(|| acc | bit(pos[x] as Elem)))
    };

    let mut delta: BTreeSet<Mask> = BTreeSet::new();
    for gen in delta_generators {
        if gen.iter().any(|&x| x >= g.order()) || !g.is_subgroup_set(gen) || !is_power_of(gen.len(), p) {
            return input(format!("Δ generator {gen:?} is not a {p}-subgroup of {}", g.name()));
        }
        let inside = g
            .elements()
            .map(|x| gen.iter().map(|&y| g.conj(y, x)).collect::<BTreeSet<Elem>>())
            .find_map(|c| to_mask(&c))
            .expect("every p-subgroup is conjugate into a Sylow subgroup");
        delta.insert(inside);
    }
    loop {
        let before = delta.len();
        let current: Vec<Mask> = delta.iter().copied().collect();
        for m in current {
            for q in s_group.overgroups(m, s_group.full()) {
                delta.insert(q);
            }
            let set: BTreeSet<Elem> = bits(m).map(|i| s_ids[i]).collect();
            for x in g.elements() {
                let image: BTreeSet<Elem> = set.iter().map(|&y| g.conj(y, x)).collect();
                if let Some(q) = to_mask(&image) {
                    delta.insert(q);
                }
            }
        }
        if delta.len() == before {
            break;
        }
    }
    let delta: HashSet<Mask> = delta.into_iter().collect();
    let name = format!("L({}, {} objects)", g.name(), delta.len());
    let pg = PartialGroup::objective(name, Arc::new(g.clone()), s_ids, delta.clone());
    let pg = Arc::new(pg);
    let d = pg.group_domain().expect("objective partial group");
    let s_local: Vec<Elem> = d.s.iter().map(|&x| d.local[x]).collect();
    let mut s_pos = vec![OUTSIDE; pg.size()];
    for (i, &x) in s_local.iter().enumerate() {
        s_pos[x] = i as u8;
    }
    let mut masks: Vec<Mask> = delta.into_iter().collect();
    masks.sort();
    let loc = Locality::from_masks(pg, p, s_local, s_pos, s_group, masks)?;
    loc.verified(plan)
}

/// `L_Δ(G)` with `Δ` all subgroups of a Sylow subgroup; this is `G` itself.
pub fn group_locality(g: &FiniteGroup, p: usize) -> Result<Locality> {
    locality_from_group(g, p, &[BTreeSet::from([0])])
}

/// Masks over `S` as sets, in order.
pub fn masks_to_sets(loc: &Locality, masks: &[Mask]) -> Vec<BTreeSet<Elem>> {
    masks.iter().map(|&m| loc.set_of(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn gen(g: &FiniteGroup, labels: &[&str]) -> BTreeSet<Elem> {
        let ids: Vec<Elem> = labels.iter().map(|l| g.find(l).unwrap()).collect();
        g.closure(&ids).unwrap().into_members()
    }

    #[test]
    fn s3_with_sylow_object() {
        let g = catalog::s3();
        let s = g.sylow(2).into_members();
        let loc = locality_from_group(&g, 2, &[s]).unwrap();
        assert_eq!(loc.pg().size(), 2);
        let (n, _) = loc.normalizer_group(&loc.s()).unwrap();
        assert_eq!(n.order(), 2);
        let w = loc.dd_membership(&[1]).unwrap();
        assert_eq!(w.chain.len(), 2);
        assert_eq!(loc.pg().conj_domain(1).unwrap().len(), 2);
    }

    #[test]
    fn s4_localities() {
        let g = catalog::s4();
        let v4 = gen(&g, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        let loc = locality_from_group(&g, 2, &[v4]).unwrap();
        assert_eq!(loc.pg().size(), 24);
        assert_eq!(loc.delta().len(), 2);
        assert!(loc.is_objective_characteristic_p().unwrap());
        assert!(loc.is_linking().unwrap());
        let all = group_locality(&g, 2).unwrap();
        assert_eq!(all.pg().size(), 24);
        assert_eq!(all.delta().len(), 10);
        assert!(all.is_objective_characteristic_p().unwrap());
        let s3 = group_locality(&catalog::s3(), 2).unwrap();
        assert!(!s3.is_objective_characteristic_p().unwrap());
    }

    #[test]
    fn missing_overgroup_is_an_l3_violation() {
        let pg = PartialGroup::from_group(catalog::d8());
        let g = pg.as_group().unwrap().clone();
        let s: BTreeSet<Elem> = g.elements().collect();
        let loc = Locality::new(pg, 2, &s, &[BTreeSet::from([0])]).unwrap();
        let report = loc.verify(&ScanPlan::new(0, 2, 1000, 0));
        assert!(!report.l3.passed());
        assert!(report.l1.passed());
    }

    #[test]
    fn non_maximal_s_is_an_l1_violation() {
        let pg = PartialGroup::from_group(catalog::d8());
        let g = pg.as_group().unwrap().clone();
        let c2 = gen(&g, &["(1 3)"]);
        let loc = Locality::new(pg, 2, &c2, std::slice::from_ref(&c2)).unwrap();
        assert!(!loc.verify(&ScanPlan::new(0, 2, 1000, 0)).l1.passed());
    }
}
