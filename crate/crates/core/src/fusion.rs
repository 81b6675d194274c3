//! Fusion systems over finite p-groups with extensional Hom sets.
//!
//! A system lives inside a [`PGroup`] `S` on a subgroup `base` (usually all
//! of `S`; smaller for subsystems such as `N_F(P)` or the factors of an
//! internal central product). For each subgroup `P ≤ base` it stores
//! `Hom_F(P, base)`; `Hom_F(P, Q)` is the part with image inside `Q`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::group::FiniteGroup;
use crate::pgroup::{bit, bits, order_of, Mask, PGroup};
use crate::report::CheckReport;
use crate::Elem;

const UNDEFINED: u8 = u8::MAX;

/// An injective homomorphism from a subgroup `dom` of `S` into `S`,
/// stored as a table over all of `S` with unmapped entries marked.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    dom: Mask,
    img: Box<[u8]>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = bits(self.dom).map(|x| format!("{x}->{}", self.img[x])).collect();
        write!(f, "Morphism[{}]", pairs.join(" "))
    }
}

impl Morphism {
    pub fn identity(dom: Mask, n: usize) -> Self {
        let mut img = vec![UNDEFINED; n].into_boxed_slice();
        for x in bits(dom) {
            img[x] = x as u8;
        }
        Morphism { dom, img }
    }

    /// `c_g` restricted to `dom`.
    pub fn conjugation(s: &PGroup, dom: Mask, g: Elem) -> Self {
        Self::from_fn(s.order(), dom, |x| s.conj(x, g))
    }

    pub fn from_fn(n: usize, dom: Mask, f: impl Fn(Elem) -> Elem) -> Self {
        let mut img = vec![UNDEFINED; n].into_boxed_slice();
        for x in bits(dom) {
            img[x] = f(x) as u8;
        }
        Morphism { dom, img }
    }

    pub fn dom(&self) -> Mask {
        self.dom
    }

    pub fn image(&self) -> Mask {
        bits(self.dom).fold(0, |acc, x| acc | bit(self.img[x] as Elem))
    }

    /// Image of a subset of the domain.
    pub fn image_of(&self, mask: Mask) -> Mask {
        bits(mask & self.dom).fold(0, |acc, x| acc | bit(self.img[x] as Elem))
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Option<Elem> {
        (self.dom & bit(x) != 0).then(|| self.img[x] as Elem)
    }

    pub fn restrict(&self, sub: Mask) -> Morphism {
        debug_assert_eq!(sub & !self.dom, 0);
        let mut img = vec![UNDEFINED; self.img.len()].into_boxed_slice();
        for x in bits(sub) {
            img[x] = self.img[x];
        }
        Morphism { dom: sub, img }
    }

    /// `self` then `next`; `None` unless the image lies in `next`'s domain.
    pub fn then(&self, next: &Morphism) -> Option<Morphism> {
        let mut img = vec![UNDEFINED; self.img.len()].into_boxed_slice();
        for x in bits(self.dom) {
            let y = self.img[x] as Elem;
            if next.dom & bit(y) == 0 {
                return None;
            }
            img[x] = next.img[y];
        }
        Some(Morphism { dom: self.dom, img })
    }

    pub fn inverse(&self) -> Morphism {
        let mut img = vec![UNDEFINED; self.img.len()].into_boxed_slice();
        for x in bits(self.dom) {
            img[self.img[x] as Elem] = x as u8;
        }
        Morphism { dom: self.image(), img }
    }

    pub fn is_identity(&self) -> bool {
        bits(self.dom).all(|x| self.img[x] as Elem == x)
    }

    /// `dom` is a subgroup and the map is an injective homomorphism into `S`.
    pub fn is_injective_hom(&self, s: &PGroup) -> bool {
        if self.img.len() != s.order() || !s.is_subgroup(self.dom) {
            return false;
        }
        if bits(self.dom).any(|x| self.img[x] as Elem >= s.order()) {
            return false;
        }
        order_of(self.image()) == order_of(self.dom)
            && bits(self.dom).all(|a| {
                bits(self.dom).all(|b| self.img[s.mul(a, b)] as Elem == s.mul(self.img[a] as Elem, self.img[b] as Elem))
            })
    }
}

pub struct FusionSystem {
    s: Arc<PGroup>,
    base: Mask,
    name: String,
    /// `Hom_F(P, base)` by lattice index of `P`, sorted; empty for `P ⊄ base`.
    homs: Vec<Vec<Morphism>>,
}

impl fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionSystem")
            .field("name", &self.name)
            .field("order", &self.s.order())
            .field("base", &self.s.describe(self.base))
            .field("morphisms", &self.morphism_count())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupClassification {
    pub subgroup: Vec<String>,
    pub order: usize,
    pub fully_normalized: bool,
    pub centric: bool,
    pub radical: bool,
    pub centric_radical: bool,
    pub subcentric: bool,
}

impl FusionSystem {
    /// The smallest fusion system over `S` containing `seeds` and the
    /// inner automorphisms of `S`.
    pub fn generate(s: Arc<PGroup>, seeds: &[Morphism], name: impl Into<String>) -> Result<Self> {
        let base = s.full();
        Self::generate_in(s, base, seeds, name)
    }

    /// As [`Self::generate`], on the subgroup `base` of `S`.
    pub fn generate_in(s: Arc<PGroup>, base: Mask, seeds: &[Morphism], name: impl Into<String>) -> Result<Self> {
        if !s.is_subgroup(base) {
            return input("the base of a fusion system must be a subgroup");
        }
        for m in seeds {
            if !m.is_injective_hom(&s) {
                return input(format!("seed {m:?} is not an injective homomorphism"));
            }
            if m.dom & !base != 0 || m.image() & !base != 0 {
                return input(format!("seed {m:?} leaves the base {}", s.describe(base)));
            }
        }
        let mut gens: HashSet<Morphism> = HashSet::new();
        for m in seeds {
            if !m.is_identity() {
                gens.insert(m.clone());
                gens.insert(m.inverse());
            }
        }
        for x in bits(base) {
            let c = Morphism::conjugation(&s, base, x);
            if !c.is_identity() {
                gens.insert(c);
            }
        }
        let mut by_dom: HashMap<Mask, Vec<Morphism>> = HashMap::new();
        for g in gens {
            by_dom.entry(g.dom).or_default().push(g);
        }
        let mut doms: Vec<(Mask, Vec<Morphism>)> = by_dom.into_iter().collect();
        doms.sort_by_key(|(d, _)| *d);
        for (_, v) in doms.iter_mut() {
            v.sort();
        }

        let n = s.order();
        let subgroups = s.subgroups().to_vec();
        let homs = subgroups
            .par_iter()
            .map(|&p| {
                if p & !base != 0 {
                    return Vec::new();
                }
                let start = Morphism::identity(p, n);
                let mut seen: HashSet<Morphism> = HashSet::from([start.clone()]);
                let mut queue = vec![start];
                while let Some(phi) = queue.pop() {
                    let image = phi.image();
                    for (dom, list) in &doms {
                        if image & !dom != 0 {
                            continue;
                        }
                        for g in list {
                            let next = phi.then(g).expect("image inside the generator domain");
                            if !seen.contains(&next) {
                                seen.insert(next.clone());
                                queue.push(next);
                            }
                        }
                    }
                }
                let mut list: Vec<Morphism> = seen.into_iter().collect();
                list.sort();
                list
            })
            .collect();
        Ok(FusionSystem { s, base, name: name.into(), homs })
    }

    /// `F_S(G)` for a Sylow `p`-subgroup `S` of `G`.
    pub fn from_group(g: &FiniteGroup, p: usize) -> Result<Self> {
        let sylow = g.sylow(p).into_members();
        let (sg, elems) = g.restrict(&sylow, format!("Syl{p}({})", g.name()))?;
        let s = PGroup::new(sg, p)?;
        let mut local = vec![UNDEFINED; g.order()];
        for (i, &e) in elems.iter().enumerate() {
            local[e] = i as u8;
        }
        let mut seeds: HashSet<Morphism> = HashSet::new();
        for x in g.elements() {
            let dom = elems
                .iter()
                .enumerate()
                .filter(|(_, &e)| local[g.conj(e, x)] != UNDEFINED)
                .fold(0, |acc, (i, _)| acc | bit(i));
            let m = Morphism::from_fn(elems.len(), dom, |i| local[g.conj(elems[i], x)] as Elem);
            seeds.insert(m);
        }
        let mut seeds: Vec<Morphism> = seeds.into_iter().collect();
        seeds.sort();
        Self::generate(s, &seeds, format!("F({})", g.name()))
    }

    /// A system from explicit Hom sets, which the caller guarantees are
    /// closed.
    fn from_homs(s: Arc<PGroup>, base: Mask, name: String, homs: Vec<Vec<Morphism>>) -> Self {
        FusionSystem { s, base, name, homs }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn s(&self) -> &Arc<PGroup> {
        &self.s
    }

    pub fn p(&self) -> usize {
        self.s.p()
    }

    pub fn base(&self) -> Mask {
        self.base
    }

    pub fn is_full(&self) -> bool {
        self.base == self.s.full()
    }

    /// Subgroups of the base, in lattice order.
    pub fn subgroups(&self) -> Vec<Mask> {
        self.s.subgroups_of(self.base).collect()
    }

    /// `Hom_F(P, base)`; empty when `P` is not a subgroup of the base.
    pub fn hom(&self, p: Mask) -> &[Morphism] {
        match self.s.subgroup_index(p) {
            Some(i) => &self.homs[i],
            None => &[],
        }
    }

    /// `Hom_F(P, Q)`.
    pub fn hom_between(&self, p: Mask, q: Mask) -> impl Iterator<Item = &Morphism> {
        self.hom(p).iter().filter(move |m| m.image() & !q == 0)
    }

    /// `Aut_F(P)`.
    pub fn aut(&self, p: Mask) -> Vec<&Morphism> {
        self.hom_between(p, p).collect()
    }

    pub fn contains(&self, m: &Morphism) -> bool {
        self.hom(m.dom).binary_search(m).is_ok()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &Morphism> {
        self.homs.iter().flatten()
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.iter().map(Vec::len).sum()
    }

    /// `P^F`, in lattice order.
    pub fn conjugates(&self, p: Mask) -> Vec<Mask> {
        let set: HashSet<Mask> = self.hom(p).iter().map(Morphism::image).collect();
        let mut out: Vec<Mask> = set.into_iter().collect();
        out.sort_by_key(|m| self.s.subgroup_index(*m));
        out
    }

    pub fn n_base(&self, p: Mask) -> Mask {
        self.s.normalizer(p, self.base)
    }

    pub fn c_base(&self, p: Mask) -> Mask {
        self.s.centralizer(p, self.base)
    }

    /// `|N_base(P)| ≥ |N_base(Q)|` for every `Q ∈ P^F`.
    pub fn is_fully_normalized(&self, p: Mask) -> bool {
        let own = order_of(self.n_base(p));
        self.conjugates(p).iter().all(|&q| order_of(self.n_base(q)) <= own)
    }

    /// `C_base(Q) ≤ Q` for every `Q ∈ P^F`.
    pub fn is_centric(&self, p: Mask) -> bool {
        self.conjugates(p).iter().all(|&q| self.c_base(q) & !q == 0)
    }

    /// `Aut_F(P)` as a group with the identity first, and its elements.
    pub fn aut_group(&self, p: Mask) -> (FiniteGroup, Vec<Morphism>) {
        let mut auts: Vec<Morphism> = self.aut(p).into_iter().cloned().collect();
        let id = auts.iter().position(Morphism::is_identity).expect("the identity is in every Aut_F(P)");
        auts.swap(0, id);
        let index: HashMap<&Morphism, usize> = auts.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let k = auts.len();
        let mut table = Vec::with_capacity(k * k);
        for a in &auts {
            for b in &auts {
                table.push(index[&a.then(b).expect("automorphisms compose")]);
            }
        }
        let labels = (0..k).map(|i| format!("a{i}")).collect();
        let name = format!("Aut_F({})", self.s.describe(p));
        (FiniteGroup::from_flat_trusted(name, k, table, labels), auts)
    }

    /// `O_p(Aut_F(P)) = Inn(P)`.
    pub fn is_radical(&self, p: Mask) -> bool {
        let (aut, elems) = self.aut_group(p);
        let index: HashMap<&Morphism, usize> = elems.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let inn: BTreeSet<Elem> = bits(p).map(|x| index[&Morphism::conjugation(&self.s, p, x)]).collect();
        aut.o_p(self.p()).into_members() == inn
    }

    /// `N_F(P)` over `N_base(P)`: restrictions to `R` of morphisms of `RP`
    /// that map `P` onto itself. `P` must be fully normalized.
    pub fn normalizer_system(&self, p: Mask) -> Result<FusionSystem> {
        if !self.s.is_subgroup(p) || p & !self.base != 0 {
            return input(format!("{} is not a subgroup of the base", self.s.describe(p)));
        }
        if !self.is_fully_normalized(p) {
            return Err(Error::Contract(format!("{} is not fully normalized", self.s.describe(p))));
        }
        let base = self.n_base(p);
        let homs = self
            .s
            .subgroups()
            .iter()
            .map(|&r| {
                if r & !base != 0 {
                    return Vec::new();
                }
                let rp = self.s.closure(r | p);
                let set: BTreeSet<Morphism> =
                    self.hom(rp).iter().filter(|m| m.image_of(p) == p).map(|m| m.restrict(r)).collect();
                set.into_iter().collect()
            })
            .collect();
        Ok(Self::from_homs(Arc::clone(&self.s), base, format!("N_{}({})", self.name, self.s.describe(p)), homs))
    }

    /// `Q` is normal in `F`: normal in the base, and every morphism
    /// extends to one on `⟨dom, Q⟩` mapping `Q` onto itself.
    pub fn is_normal_subgroup(&self, q: Mask) -> bool {
        if !self.s.is_subgroup(q) || q & !self.base != 0 || self.n_base(q) != self.base {
            return false;
        }
        if !self.is_strongly_closed(q) {
            return false;
        }
        self.subgroups().into_iter().all(|r| {
            let rq = self.s.closure(r | q);
            let ext: HashSet<Morphism> =
                self.hom(rq).iter().filter(|m| m.image_of(q) == q).map(|m| m.restrict(r)).collect();
            self.hom(r).iter().all(|m| ext.contains(m))
        })
    }

    /// Every morphism sends elements of `Q` into `Q`.
    pub fn is_strongly_closed(&self, q: Mask) -> bool {
        bits(q).all(|x| {
            let cyc = self.s.generate(&[x]);
            self.hom(cyc).iter().all(|m| q & bit(m.apply(x).expect("x in domain")) != 0)
        })
    }

    /// `O_p(F)`: the largest subgroup normal in `F`.
    pub fn o_p(&self) -> Mask {
        let mut subs = self.subgroups();
        subs.reverse();
        subs.into_iter().find(|&q| self.is_normal_subgroup(q)).unwrap_or(1)
    }

    /// `Z(F)`: elements fixed by every morphism defined on them.
    pub fn center(&self) -> Mask {
        bits(self.base)
            .filter(|&z| {
                let cyc = self.s.generate(&[z]);
                self.hom(cyc).iter().all(|m| m.apply(z) == Some(z))
            })
            .fold(0, |acc, z| acc | bit(z))
    }

    /// `O_p(N_F(Q))` is centric for every fully normalized `Q ∈ P^F`.
    pub fn is_subcentric(&self, p: Mask) -> bool {
        let normalized: Vec<Mask> = self.conjugates(p).into_iter().filter(|&q| self.is_fully_normalized(q)).collect();
        !normalized.is_empty()
            && normalized.iter().all(|&q| {
                let n = self.normalizer_system(q).expect("fully normalized");
                self.is_centric(n.o_p())
            })
    }

    pub fn classify_subgroup(&self, p: Mask) -> SubgroupClassification {
        let centric = self.is_centric(p);
        let radical = self.is_radical(p);
        SubgroupClassification {
            subgroup: bits(p).map(|x| self.s.group().label(x).to_string()).collect(),
            order: order_of(p),
            fully_normalized: self.is_fully_normalized(p),
            centric,
            radical,
            centric_radical: centric && radical,
            subcentric: self.is_subcentric(p),
        }
    }

    /// `F^{cr}` in lattice order.
    pub fn centric_radicals(&self) -> Vec<Mask> {
        self.subgroups().into_par_iter().filter(|&p| self.is_centric(p) && self.is_radical(p)).collect()
    }

    /// `F^s` in lattice order.
    pub fn subcentrics(&self) -> Vec<Mask> {
        self.subgroups().into_par_iter().filter(|&p| self.is_subcentric(p)).collect()
    }

    /// `F^c` in lattice order.
    pub fn centrics(&self) -> Vec<Mask> {
        self.subgroups().into_iter().filter(|&p| self.is_centric(p)).collect()
    }

    /// Hom-set-exact comparison; both systems must live in the same group.
    pub fn compare(&self, other: &FusionSystem) -> CheckReport {
        let mut r = CheckReport::exact();
        if !self.s.group().same_table(other.s.group()) || self.base != other.base {
            r.fail(format!("{} and {} live on different groups", self.name, other.name));
            return r;
        }
        for (i, &p) in self.s.subgroups().iter().enumerate() {
            let (a, b) = (&self.homs[i], &other.homs[i]);
            r.check(a == b, || format!("Hom({}): {} vs {} morphisms", self.s.describe(p), a.len(), b.len()));
        }
        r
    }

    /// Every morphism of `self` is a morphism of `other`.
    pub fn is_subsystem_of(&self, other: &FusionSystem) -> bool {
        self.s.group().same_table(other.s.group())
            && self.base & !other.base == 0
            && self.morphisms().all(|m| other.hom(m.dom).binary_search(m).is_ok())
    }

    /// The system transported to the base viewed as a group on its own,
    /// with the embedding of the new ids into `S`.
    pub fn restrict_to_base(&self) -> Result<(FusionSystem, Vec<Elem>)> {
        let members = self.s.to_set(self.base);
        let (g, elems) = self.s.group().restrict(&members, format!("{}|base", self.s.group().name()))?;
        let t = PGroup::new(g, self.p())?;
        let mut local = vec![UNDEFINED; self.s.order()];
        for (i, &e) in elems.iter().enumerate() {
            local[e] = i as u8;
        }
        let m = elems.len();
        let homs = t
            .subgroups()
            .iter()
            .map(|&p| {
                let ambient = bits(p).fold(0, |acc, i| acc | bit(elems[i]));
                let mut list: Vec<Morphism> = self
                    .hom(ambient)
                    .iter()
                    .map(|phi| Morphism::from_fn(m, p, |i| local[phi.img[elems[i]] as Elem] as Elem))
                    .collect();
                list.sort();
                list
            })
            .collect();
        Ok((Self::from_homs(t.clone(), t.full(), self.name.clone(), homs), elems))
    }
}

/// A group homomorphism between two p-groups.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<PGroup>,
    target: Arc<PGroup>,
    map: Vec<Elem>,
}

impl GroupHom {
    pub fn new(source: Arc<PGroup>, target: Arc<PGroup>, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
            return input("group map has the wrong shape");
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return input(format!("not a homomorphism at ({a}, {b})"));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn source(&self) -> &Arc<PGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn image(&self, mask: Mask) -> Mask {
        bits(mask).fold(0, |acc, x| acc | bit(self.map[x]))
    }

    pub fn kernel(&self) -> Mask {
        (0..self.source.order()).filter(|&x| self.map[x] == 0).fold(0, |acc, x| acc | bit(x))
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.source.full()) == self.target.full()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel() == 1
    }

    /// The map `ψ` on `Pα` with `(α|_P)ψ = φ(α|_Q)`, when well defined.
    pub fn induce(&self, phi: &Morphism) -> Option<Morphism> {
        let mut img = vec![UNDEFINED; self.target.order()];
        for x in bits(phi.dom) {
            let (from, to) = (self.map[x], self.map[phi.img[x] as Elem]);
            match img[from] {
                UNDEFINED => img[from] = to as u8,
                prev if prev as Elem != to => return None,
                _ => {}
            }
        }
        let m = Morphism { dom: self.image(phi.dom), img: img.into_boxed_slice() };
        (order_of(m.image()) == order_of(m.dom)).then_some(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FusionMapKind {
    None,
    Morphism,
    Epimorphism,
    Isomorphism,
}

/// Strongest kind of map of fusion systems that `α` induces from `F` to
/// `F'`, decided by comparing Hom sets.
pub fn induced_morphism_check(alpha: &GroupHom, f: &FusionSystem, f2: &FusionSystem) -> Result<FusionMapKind> {
    if !f.is_full() || !f2.is_full() {
        return input("induced maps are checked between systems on their whole groups");
    }
    if !alpha.source.group().same_table(f.s.group()) || !alpha.target.group().same_table(f2.s.group()) {
        return input("the group map does not match the systems");
    }
    let morphism = f.morphisms().all(|phi| alpha.induce(phi).is_some_and(|psi| f2.contains(&psi)));
    if !morphism {
        return Ok(FusionMapKind::None);
    }
    if !alpha.is_surjective() {
        return Ok(FusionMapKind::Morphism);
    }
    let kernel = alpha.kernel();
    let epi = f.subgroups().into_iter().filter(|&p| p & kernel == kernel).all(|p| {
        let induced: HashSet<Morphism> = f.hom(p).iter().filter_map(|phi| alpha.induce(phi)).collect();
        f2.hom(alpha.image(p)).iter().all(|psi| induced.contains(psi))
    });
    Ok(match (epi, alpha.is_injective()) {
        (false, _) => FusionMapKind::Morphism,
        (true, false) => FusionMapKind::Epimorphism,
        (true, true) => FusionMapKind::Isomorphism,
    })
}

/// `F1 × F2` over `S1 × S2` with `(a, b)` encoded as `a·|S2| + b`.
pub fn direct_product_fusion(f1: &FusionSystem, f2: &FusionSystem) -> Result<FusionSystem> {
    if f1.p() != f2.p() {
        return input(format!("prime mismatch: {} and {}", f1.p(), f2.p()));
    }
    if !f1.is_full() || !f2.is_full() {
        return input("direct products take systems on their whole groups");
    }
    let g = FiniteGroup::direct_product(f1.s.group(), f2.s.group());
    let s = PGroup::new(g, f1.p())?;
    let n2 = f2.s.order();
    let n = s.order();
    let mut seeds = Vec::new();
    for phi in f1.morphisms().filter(|m| !m.is_identity()) {
        let dom = bits(phi.dom).flat_map(|a| (0..n2).map(move |b| a * n2 + b)).fold(0, |acc, x| acc | bit(x));
        seeds.push(Morphism::from_fn(n, dom, |x| phi.img[x / n2] as Elem * n2 + x % n2));
    }
    for phi in f2.morphisms().filter(|m| !m.is_identity()) {
        let dom = (0..f1.s.order()).flat_map(|a| bits(phi.dom).map(move |b| a * n2 + b)).fold(0, |acc, x| acc | bit(x));
        seeds.push(Morphism::from_fn(n, dom, |x| (x / n2) * n2 + phi.img[x % n2] as Elem));
    }
    FusionSystem::generate(s, &seeds, format!("{} x {}", f1.name, f2.name))
}

/// Checks that every morphism of `F` over `S1 × S2` has the form
/// `(φ1 × φ2)|_P` with `φi ∈ Hom_{Fi}(Pπi)`.
pub fn product_normal_form_check(f: &FusionSystem, f1: &FusionSystem, f2: &FusionSystem) -> CheckReport {
    let n2 = f2.s.order();
    let mut r = CheckReport::exact();
    for phi in f.morphisms() {
        let dom = phi.dom;
        let (mut img1, mut img2) = (vec![UNDEFINED; f1.s.order()], vec![UNDEFINED; n2]);
        let mut consistent = true;
        for x in bits(dom) {
            let y = phi.img[x] as Elem;
            for (slot, v) in [(&mut img1[x / n2], y / n2), (&mut img2[x % n2], y % n2)] {
                if *slot == UNDEFINED {
                    *slot = v as u8;
                } else if *slot as Elem != v {
                    consistent = false;
                }
            }
        }
        let ok = consistent && {
            let d1 = bits(dom).fold(0, |acc, x| acc | bit(x / n2));
            let d2 = bits(dom).fold(0, |acc, x| acc | bit(x % n2));
            let m1 = Morphism { dom: d1, img: img1.into_boxed_slice() };
            let m2 = Morphism { dom: d2, img: img2.into_boxed_slice() };
            f1.contains(&m1) && f2.contains(&m2)
        };
        r.check(ok, || format!("{phi:?} is not a restricted product of factor morphisms"));
    }
    r
}

/// `F/Z` for `Z ≤ Z(F)` together with the natural map `S → S/Z`.
pub fn quotient_fusion(f: &FusionSystem, z: Mask) -> Result<(FusionSystem, GroupHom)> {
    if !f.is_full() {
        return input("quotients take systems on their whole group");
    }
    if !f.s.is_subgroup(z) || z & !f.center() != 0 {
        return Err(Error::Unsupported(format!("{} is not a central subgroup of the fusion system", f.s.describe(z))));
    }
    let (q, class_of) = f.s.group().quotient(&f.s.to_set(z))?;
    let t = PGroup::new(q, f.p())?;
    let alpha = GroupHom::new(Arc::clone(&f.s), Arc::clone(&t), class_of)?;
    let mut seeds: HashSet<Morphism> = HashSet::new();
    for p in f.subgroups().into_iter().filter(|&p| p & z == z) {
        for phi in f.hom(p) {
            let psi = alpha.induce(phi).ok_or_else(|| Error::Contract("Z is not fixed by F".into()))?;
            seeds.insert(psi);
        }
    }
    let mut seeds: Vec<Morphism> = seeds.into_iter().collect();
    seeds.sort();
    let name = format!("{}/{}", f.name, order_of(z));
    Ok((FusionSystem::generate(t, &seeds, name)?, alpha))
}

#[derive(Clone, Debug, Serialize)]
pub struct InternalFusionReport {
    pub subsystems: bool,
    pub commute: bool,
    pub generates: bool,
    pub intersection_central: bool,
    pub induced: FusionMapKind,
    pub images_match: bool,
    pub verdict: bool,
    pub diagnostics: Vec<String>,
}

/// Whether `F` is the internal central product of its subsystems `F1`, `F2`.
pub fn is_internal_central_product(
    f: &FusionSystem,
    f1: &FusionSystem,
    f2: &FusionSystem,
) -> Result<InternalFusionReport> {
    let s = &f.s;
    let (s1, s2) = (f1.base, f2.base);
    let mut diagnostics = Vec::new();
    let subsystems = f.is_full() && f1.is_subsystem_of(f) && f2.is_subsystem_of(f);
    if !subsystems {
        diagnostics.push("factors are not subsystems of F".to_string());
    }
    let commute = bits(s1).all(|a| bits(s2).all(|b| s.mul(a, b) == s.mul(b, a)));
    if !commute {
        diagnostics.push("[S1, S2] ≠ 1".to_string());
    }
    let generates = s.product(s1, s2) == s.full();
    if !generates {
        diagnostics.push("S ≠ S1S2".to_string());
    }
    let meet = s1 & s2;
    let intersection_central = meet & !f1.center() == 0 && meet & !f2.center() == 0;
    if !intersection_central {
        diagnostics.push("S1 ∩ S2 is not central in both factors".to_string());
    }
    let mut induced = FusionMapKind::None;
    let mut images_match = false;
    if subsystems && commute {
        let (r1, e1) = f1.restrict_to_base()?;
        let (r2, e2) = f2.restrict_to_base()?;
        let product = direct_product_fusion(&r1, &r2)?;
        let n2 = e2.len();
        let map = (0..product.s.order()).map(|x| s.mul(e1[x / n2], e2[x % n2])).collect();
        let alpha = GroupHom::new(Arc::clone(&product.s), Arc::clone(s), map)?;
        induced = induced_morphism_check(&alpha, &product, f)?;
        let hat = |factor: usize| -> Mask {
            (0..product.s.order())
                .filter(|&x| if factor == 1 { x % n2 == 0 } else { x / n2 == 0 })
                .fold(0, |a, x| a | bit(x))
        };
        let image_system = |factor: usize, target: &FusionSystem| -> Result<bool> {
            let seeds: Vec<Morphism> = product
                .subgroups_of_mask(hat(factor))
                .flat_map(|p| product.hom_between(p, hat(factor)))
                .filter_map(|phi| alpha.induce(phi))
                .collect();
            let image = FusionSystem::generate_in(Arc::clone(s), alpha.image(hat(factor)), &seeds, "image")?;
            Ok(image.compare(target).passed())
        };
        images_match = image_system(1, f1)? && image_system(2, f2)?;
        if !images_match {
            diagnostics.push("the images of the canonical factors differ from F1, F2".to_string());
        }
        if induced < FusionMapKind::Epimorphism {
            diagnostics.push(format!("α induces only {induced:?}"));
        }
    }
    let verdict = subsystems
        && commute
        && generates
        && intersection_central
        && induced >= FusionMapKind::Epimorphism
        && images_match;
    Ok(InternalFusionReport {
        subsystems,
        commute,
        generates,
        intersection_central,
        induced,
        images_match,
        verdict,
        diagnostics,
    })
}

impl FusionSystem {
    /// The image of a system on its whole group under a group isomorphism
    /// `iso: S → T`.
    pub fn transport(&self, iso: &GroupHom) -> Result<FusionSystem> {
        if !self.is_full() || !iso.source.group().same_table(self.s.group()) {
            return input("transport takes a system on its whole group and a map out of it");
        }
        if !iso.is_injective() || !iso.is_surjective() {
            return input("transport needs an isomorphism");
        }
        let seeds: Vec<Morphism> = self
            .morphisms()
            .filter(|m| !m.is_identity())
            .map(|m| iso.induce(m).expect("isomorphisms induce every map"))
            .collect();
        FusionSystem::generate(Arc::clone(&iso.target), &seeds, self.name.clone())
    }

    fn subgroups_of_mask(&self, within: Mask) -> impl Iterator<Item = Mask> + '_ {
        self.s.subgroups_of(within)
    }

    /// Closure of `gamma` under `F`-conjugation.
    pub fn conjugation_closure(&self, gamma: &[Mask]) -> Vec<Mask> {
        let set: BTreeSet<usize> = gamma
            .iter()
            .flat_map(|&p| self.conjugates(p))
            .chain(gamma.iter().copied())
            .filter_map(|m| self.s.subgroup_index(m))
            .collect();
        set.into_iter().map(|i| self.s.subgroups()[i]).collect()
    }

    /// Subgroups of the base containing a member of `gamma`.
    pub fn overgroup_closure(&self, gamma: &[Mask]) -> Vec<Mask> {
        self.subgroups().into_iter().filter(|&q| gamma.iter().any(|&p| p & !q == 0)).collect()
    }
}

/// `Γ` is closed under `F`-conjugates, and under overgroups in the base
/// when `overgroups` is set.
pub fn check_delta_closure(f: &FusionSystem, gamma: &[Mask], overgroups: bool) -> bool {
    let set: HashSet<Mask> = gamma.iter().copied().collect();
    let conj = gamma.iter().all(|&p| f.conjugates(p).iter().all(|q| set.contains(q)));
    let over = !overgroups || gamma.iter().all(|&p| f.s.overgroups(p, f.base).all(|q| set.contains(&q)));
    conj && over
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn find(s: &PGroup, labels: &[&str]) -> Mask {
        let gens: Vec<Elem> = labels.iter().map(|l| s.group().find(l).unwrap()).collect();
        s.generate(&gens)
    }

    #[test]
    fn inner_fusion_of_d8() {
        let s = PGroup::new(catalog::d8(), 2).unwrap();
        let f = FusionSystem::generate(s.clone(), &[], "D8").unwrap();
        let from_group = FusionSystem::from_group(&catalog::d8(), 2).unwrap();
        assert!(f.compare(&from_group).passed());
        assert_eq!(order_of(f.center()), 2);
        assert_eq!(f.o_p(), s.full());
        assert!(f.is_centric(s.full()) && f.is_subcentric(s.full()));
    }

    #[test]
    fn s4_fusion_on_d8() {
        let f = FusionSystem::from_group(&catalog::s4(), 2).unwrap();
        let s = f.s().clone();
        let klein: Vec<Mask> =
            f.subgroups().into_iter().filter(|&m| order_of(m) == 4 && bits(m).all(|x| s.mul(x, x) == 0)).collect();
        let auts: Vec<usize> = klein.iter().map(|&v| f.aut(v).len()).collect();
        assert!(auts.contains(&6));
        assert_eq!(order_of(f.center()), 1);
        let centric_radical = f.centric_radicals();
        assert!(centric_radical.contains(&s.full()));
        assert_eq!(order_of(f.o_p()), 4);
    }

    #[test]
    fn s3_fusion_is_trivial() {
        let f = FusionSystem::from_group(&catalog::s3(), 2).unwrap();
        assert_eq!(f.s().order(), 2);
        assert_eq!(f.hom(f.s().full()).len(), 1);
    }

    #[test]
    fn rejects_non_injective_seed() {
        let s = PGroup::new(catalog::cyclic(4), 2).unwrap();
        let bad = Morphism::from_fn(4, s.full(), |_| 0);
        assert!(FusionSystem::generate(s, &[bad], "bad").is_err());
    }

    #[test]
    fn quotient_of_inner_fusion() {
        let s = PGroup::new(catalog::d8(), 2).unwrap();
        let f = FusionSystem::generate(s.clone(), &[], "D8").unwrap();
        let (q, alpha) = quotient_fusion(&f, f.center()).unwrap();
        assert_eq!(q.s().order(), 4);
        assert_eq!(induced_morphism_check(&alpha, &f, &q).unwrap(), FusionMapKind::Epimorphism);
        let inner = FusionSystem::generate(q.s().clone(), &[], "V4").unwrap();
        assert!(q.compare(&inner).passed());
        assert!(matches!(quotient_fusion(&f, find(&s, &["(1 3)"])), Err(Error::Unsupported(_))));
    }
}
