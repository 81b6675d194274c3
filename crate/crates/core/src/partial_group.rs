//! Partial groups: a carrier `0..n`, an inversion, and a product defined on
//! a domain `D` of words. The domain is never enumerated; each constructor
//! supplies a membership rule, and [`PartialGroup::evaluate`] returns the
//! product exactly when the word lies in `D`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::group::FiniteGroup;
use crate::pgroup::{bit, bits, Mask};
use crate::report::{CheckReport, WITNESS_CAP};
use crate::words::{ScanPlan, Word};
use crate::Elem;

const NO_CONJ: u32 = u32::MAX;
const OUTSIDE: Elem = usize::MAX;
const WORD_BUF: usize = 16;

/// Which constructor produced a partial group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Group,
    Table,
    LocalityFromGroup,
    DirectProduct,
    CentralQuotient,
    SubPartialGroup,
}

/// Domain data of `L_Δ(G)`: a word lies in `D` iff the subgroup `S_w` of
/// elements of `S` that stay in `S` along the word belongs to `Δ`.
pub(crate) struct GroupDomain {
    pub(crate) group: Arc<FiniteGroup>,
    /// Carrier id to group id.
    pub(crate) elems: Vec<Elem>,
    /// Group id to carrier id, `OUTSIDE` if absent.
    pub(crate) local: Vec<Elem>,
    /// Group ids of `S`, ascending.
    pub(crate) s: Vec<Elem>,
    /// Group id to index in `s`, 255 outside `S`.
    pub(crate) s_index: Vec<u8>,
    /// Row per carrier element: index of `s^f` in `s`, 255 if it leaves `S`.
    s_action: Vec<u8>,
    /// Members of `Δ` as masks over indices of `s`.
    pub(crate) delta: HashSet<Mask>,
}

impl GroupDomain {
    fn s_w(&self, w: &[Elem]) -> Mask {
        let m = self.s.len();
        let mut alive = full_mask(m);
        let mut cur = [0u8; 64];
        for (i, c) in cur.iter_mut().enumerate().take(m) {
            *c = i as u8;
        }
        for &f in w {
            let row = &self.s_action[f * m..(f + 1) * m];
            for i in bits(alive) {
                let j = row[cur[i] as usize];
                if j == 255 {
                    alive &= !bit(i);
                } else {
                    cur[i] = j;
                }
            }
            if alive == 0 {
                break;
            }
        }
        alive
    }
}

enum Kind {
    Group(Arc<FiniteGroup>),
    Table(Vec<Elem>),
    Objective(GroupDomain),
    Product(Arc<PartialGroup>, Arc<PartialGroup>),
    Quotient { parent: Arc<PartialGroup>, reps: Vec<Elem>, class_of: Vec<Elem> },
    Sub { parent: Arc<PartialGroup>, members: Vec<Elem>, local: Vec<Elem> },
}

pub struct PartialGroup {
    name: String,
    n: usize,
    inverse: Vec<Elem>,
    labels: Vec<String>,
    kind: Kind,
    conj: OnceLock<Vec<u32>>,
}

impl fmt::Debug for PartialGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialGroup")
            .field("name", &self.name)
            .field("size", &self.n)
            .field("provenance", &self.provenance())
            .finish()
    }
}

impl PartialGroup {
    fn assemble(name: String, inverse: Vec<Elem>, labels: Vec<String>, kind: Kind) -> Self {
        PartialGroup { name, n: inverse.len(), inverse, labels, kind, conj: OnceLock::new() }
    }

    /// A group viewed as a partial group: every word is in the domain.
    pub fn from_group(group: FiniteGroup) -> Arc<Self> {
        Self::from_group_arc(Arc::new(group))
    }

    pub fn from_group_arc(group: Arc<FiniteGroup>) -> Arc<Self> {
        let inverse = group.elements().map(|x| group.inv(x)).collect();
        let labels = group.labels().to_vec();
        Arc::new(Self::assemble(group.name().to_string(), inverse, labels, Kind::Group(group)))
    }

    /// Every word is in the domain and products fold `table` left to right.
    /// Nothing is validated, so this is how negative-control fixtures are
    /// built from corrupted tables.
    pub fn from_raw_table(name: impl Into<String>, order: usize, table: Vec<Elem>) -> Result<Arc<Self>> {
        if order == 0 || table.len() != order * order || table.iter().any(|&x| x >= order) {
            return input("raw table must be order×order with ids in range");
        }
        let inverse = (0..order).map(|x| (0..order).find(|&y| table[x * order + y] == 0).unwrap_or(x)).collect();
        let labels = (0..order).map(|i| i.to_string()).collect();
        Ok(Arc::new(Self::assemble(name.into(), inverse, labels, Kind::Table(table))))
    }

    /// `L_Δ(G)` on the carrier `{g : S_g ∈ Δ}`. `delta` holds masks over
    /// the positions of `s`, which must be sorted and start with `0`.
    pub(crate) fn objective(name: String, group: Arc<FiniteGroup>, s: Vec<Elem>, delta: HashSet<Mask>) -> Self {
        let n = group.order();
        let m = s.len();
        let mut s_index = vec![255u8; n];
        for (i, &x) in s.iter().enumerate() {
            s_index[x] = i as u8;
        }
        let row_of = |g: Elem| -> Vec<u8> { s.iter().map(|&x| s_index[group.conj(x, g)]).collect() };
        let mut elems = Vec::new();
        let mut s_action = Vec::new();
        for g in group.elements() {
            let row = row_of(g);
            let s_g = row.iter().enumerate().filter(|(_, &j)| j != 255).fold(0, |acc, (i, _)| acc | bit(i));
            if delta.contains(&s_g) {
                elems.push(g);
                s_action.extend(row);
            }
        }
        let mut local = vec![OUTSIDE; n];
        for (i, &g) in elems.iter().enumerate() {
            local[g] = i;
        }
        debug_assert!(m <= 64);
        let inverse = elems.iter().map(|&g| local[group.inv(g)]).collect();
        let labels = elems.iter().map(|&g| group.label(g).to_string()).collect();
        let domain = GroupDomain { group, elems, local, s, s_index, s_action, delta };
        Self::assemble(name, inverse, labels, Kind::Objective(domain))
    }

    /// External direct product; `(i, j)` has id `i·|L2| + j`.
    pub(crate) fn direct_product(l1: Arc<PartialGroup>, l2: Arc<PartialGroup>) -> Self {
        let (n1, n2) = (l1.n, l2.n);
        let mut inverse = Vec::with_capacity(n1 * n2);
        let mut labels = Vec::with_capacity(n1 * n2);
        for a in 0..n1 {
            for b in 0..n2 {
                inverse.push(l1.inv(a) * n2 + l2.inv(b));
                labels.push(format!("({},{})", l1.label(a), l2.label(b)));
            }
        }
        let name = format!("{} x {}", l1.name, l2.name);
        Self::assemble(name, inverse, labels, Kind::Product(l1, l2))
    }

    /// Quotient whose elements are classes of `parent`; `reps[c]` is the
    /// representative of class `c` and `class_of` the class of each element.
    /// The caller guarantees the classes are cosets of a central subgroup.
    pub(crate) fn central_quotient(
        name: String,
        parent: Arc<PartialGroup>,
        reps: Vec<Elem>,
        class_of: Vec<Elem>,
    ) -> Self {
        let inverse = reps.iter().map(|&r| class_of[parent.inv(r)]).collect();
        let labels = reps.iter().map(|&r| format!("[{}]", parent.label(r))).collect();
        Self::assemble(name, inverse, labels, Kind::Quotient { parent, reps, class_of })
    }

    /// The partial subgroup `members` with the restricted product. Ids follow
    /// the ascending order of `members`.
    pub fn sub(parent: &Arc<PartialGroup>, members: &BTreeSet<Elem>, name: impl Into<String>) -> Result<Arc<Self>> {
        if !parent.is_partial_subgroup(members) {
            return input(format!("{} is not a partial subgroup of {}", parent.fmt_set(members), parent.name));
        }
        let members: Vec<Elem> = members.iter().copied().collect();
        let mut local = vec![OUTSIDE; parent.n];
        for (i, &x) in members.iter().enumerate() {
            local[x] = i;
        }
        let inverse = members.iter().map(|&x| local[parent.inv(x)]).collect();
        let labels = members.iter().map(|&x| parent.label(x).to_string()).collect();
        let kind = Kind::Sub { parent: Arc::clone(parent), members, local };
        Ok(Arc::new(Self::assemble(name.into(), inverse, labels, kind)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    pub fn carrier(&self) -> BTreeSet<Elem> {
        self.elements().collect()
    }

    #[inline]
    pub fn inv(&self, f: Elem) -> Elem {
        self.inverse[f]
    }

    pub fn label(&self, f: Elem) -> &str {
        &self.labels[f]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> Provenance {
        match self.kind {
            Kind::Group(_) => Provenance::Group,
            Kind::Table(_) => Provenance::Table,
            Kind::Objective(_) => Provenance::LocalityFromGroup,
            Kind::Product(..) => Provenance::DirectProduct,
            Kind::Quotient { .. } => Provenance::CentralQuotient,
            Kind::Sub { .. } => Provenance::SubPartialGroup,
        }
    }

    pub fn as_group(&self) -> Option<&Arc<FiniteGroup>> {
        match &self.kind {
            Kind::Group(g) => Some(g),
            _ => None,
        }
    }

    /// The factors when this is an external direct product.
    pub fn factors(&self) -> Option<(&Arc<PartialGroup>, &Arc<PartialGroup>)> {
        match &self.kind {
            Kind::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Parent, class representatives and class map of a central quotient.
    pub fn quotient_parts(&self) -> Option<(&Arc<PartialGroup>, &[Elem], &[Elem])> {
        match &self.kind {
            Kind::Quotient { parent, reps, class_of } => Some((parent, reps, class_of)),
            _ => None,
        }
    }

    /// Parent and member ids of a sub-partial-group.
    pub fn sub_parts(&self) -> Option<(&Arc<PartialGroup>, &[Elem])> {
        match &self.kind {
            Kind::Sub { parent, members, .. } => Some((parent, members)),
            _ => None,
        }
    }

    pub(crate) fn group_domain(&self) -> Option<&GroupDomain> {
        match &self.kind {
            Kind::Objective(d) => Some(d),
            _ => None,
        }
    }

    /// `Π(w)` if `w ∈ D`, otherwise `None`.
    pub fn evaluate(&self, w: &[Elem]) -> Option<Elem> {
        match &self.kind {
            Kind::Group(g) => Some(g.fold(w)),
            Kind::Table(t) => Some(w.iter().fold(0, |acc, &x| t[acc * self.n + x])),
            Kind::Objective(d) => {
                if !d.delta.contains(&d.s_w(w)) {
                    return None;
                }
                let g = w.iter().fold(0, |acc, &x| d.group.mul(acc, d.elems[x]));
                Some(d.local[g]).filter(|&x| x != OUTSIDE)
            }
            Kind::Product(l1, l2) => {
                let n2 = l2.n;
                let a = with_mapped(w, |x| x / n2, |u| l1.evaluate(u))?;
                let b = with_mapped(w, |x| x % n2, |u| l2.evaluate(u))?;
                Some(a * n2 + b)
            }
            Kind::Quotient { parent, reps, class_of } => {
                with_mapped(w, |x| reps[x], |u| parent.evaluate(u)).map(|y| class_of[y])
            }
            Kind::Sub { parent, members, local } => {
                with_mapped(w, |x| members[x], |u| parent.evaluate(u)).map(|y| local[y]).filter(|&x| x != OUTSIDE)
            }
        }
    }

    pub fn in_domain(&self, w: &[Elem]) -> bool {
        self.evaluate(w).is_some()
    }

    /// `Π(w)`, or a contract error when `w ∉ D`.
    pub fn product(&self, w: &[Elem]) -> Result<Elem> {
        self.check_ids(w)?;
        self.evaluate(w)
            .ok_or_else(|| Error::Contract(format!("{} is not in the domain of {}", self.fmt_word(w), self.name)))
    }

    fn check_ids(&self, ids: &[Elem]) -> Result<()> {
        match ids.iter().find(|&&x| x >= self.n) {
            Some(&bad) => input(format!("element {bad} is not in {}", self.name)),
            None => Ok(()),
        }
    }

    fn conj_table(&self) -> &[u32] {
        self.conj.get_or_init(|| {
            let n = self.n;
            (0..n)
                .into_par_iter()
                .flat_map_iter(|x| {
                    (0..n).map(move |g| match self.evaluate(&[self.inv(g), x, g]) {
                        Some(y) => y as u32,
                        None => NO_CONJ,
                    })
                })
                .collect()
        })
    }

    /// `x^g = Π(g⁻¹, x, g)` when `x ∈ D(g)`.
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Option<Elem> {
        let y = self.conj_table()[x * self.n + g];
        (y != NO_CONJ).then_some(y as Elem)
    }

    /// `D(g)`.
    pub fn conj_domain(&self, g: Elem) -> Result<BTreeSet<Elem>> {
        self.check_ids(&[g])?;
        Ok(self.elements().filter(|&x| self.conj(x, g).is_some()).collect())
    }

    pub fn conjugate(&self, x: Elem, g: Elem) -> Result<Elem> {
        self.check_ids(&[x, g])?;
        self.conj(x, g).ok_or(Error::UndefinedConjugation { x, g })
    }

    /// `S_g = {s ∈ S ∩ D(g) : s^g ∈ S}`.
    pub fn s_sub_g(&self, s: &BTreeSet<Elem>, g: Elem) -> BTreeSet<Elem> {
        s.iter().copied().filter(|&x| self.conj(x, g).is_some_and(|y| s.contains(&y))).collect()
    }

    /// `X^g` when `X ⊆ D(g)`.
    pub fn conj_set(&self, set: &BTreeSet<Elem>, g: Elem) -> Option<BTreeSet<Elem>> {
        set.iter().map(|&x| self.conj(x, g)).collect()
    }

    /// `C_L(X)`; the full carrier for empty `X`.
    pub fn centralizer(&self, set: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        self.elements().filter(|&f| set.iter().all(|&x| self.conj(x, f) == Some(x))).collect()
    }

    /// `N_L(X) = {g : X ⊆ D(g), X^g = X}`.
    pub fn normalizer(&self, set: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        self.elements().filter(|&g| self.conj_set(set, g).as_ref() == Some(set)).collect()
    }

    /// `Z(L) = C_L(L)`.
    pub fn center(&self) -> BTreeSet<Elem> {
        self.centralizer(&self.carrier())
    }

    /// `XY = {Π(x, y) : (x, y) ∈ D}`.
    pub fn product_set(&self, xs: &BTreeSet<Elem>, ys: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        xs.iter().flat_map(|&x| ys.iter().filter_map(move |&y| self.evaluate(&[x, y]))).collect()
    }

    /// Inverse-closed and closed under defined binary products. Longer words
    /// reduce to pairs by the substitution axiom.
    pub fn is_partial_subgroup(&self, h: &BTreeSet<Elem>) -> bool {
        h.iter().all(|&x| x < self.n)
            && h.contains(&0)
            && h.iter().all(|&x| h.contains(&self.inv(x)))
            && h.iter().all(|&x| h.iter().all(|&y| self.evaluate(&[x, y]).is_none_or(|z| h.contains(&z))))
    }

    /// `W(H) ⊆ D`, decided exactly from the constructor's domain rule.
    pub fn words_in_domain(&self, h: &BTreeSet<Elem>) -> bool {
        if h.iter().any(|&x| x >= self.n) {
            return false;
        }
        match &self.kind {
            Kind::Group(_) | Kind::Table(_) => true,
            Kind::Objective(d) => {
                // The prefix products of words over H range over ⟨H⟩, so the
                // smallest S_w is the core ⋂_{k∈⟨H⟩} S ∩ S^{k⁻¹}.
                let gens: Vec<Elem> = h.iter().map(|&x| d.elems[x]).collect();
                let closure = d.group.closure_set(gens);
                let core = d.s.iter().enumerate().fold(0, |acc, (i, &s)| {
                    if closure.iter().all(|&k| d.s_index[d.group.conj(s, k)] != 255) {
                        acc | bit(i)
                    } else {
                        acc
                    }
                });
                d.delta.contains(&core)
            }
            Kind::Product(l1, l2) => {
                let n2 = l2.n;
                let h1 = h.iter().map(|&x| x / n2).collect();
                let h2 = h.iter().map(|&x| x % n2).collect();
                l1.words_in_domain(&h1) && l2.words_in_domain(&h2)
            }
            Kind::Quotient { parent, reps, .. } => parent.words_in_domain(&h.iter().map(|&x| reps[x]).collect()),
            Kind::Sub { parent, members, .. } => parent.words_in_domain(&h.iter().map(|&x| members[x]).collect()),
        }
    }

    /// A partial subgroup `H` with `W(H) ⊆ D`.
    pub fn is_subgroup(&self, h: &BTreeSet<Elem>) -> bool {
        self.is_partial_subgroup(h) && self.words_in_domain(h)
    }

    /// A partial subgroup with `n^f ∈ N` whenever `n ∈ N ∩ D(f)`.
    pub fn is_partial_normal(&self, set: &BTreeSet<Elem>) -> bool {
        self.is_partial_subgroup(set)
            && self.elements().all(|f| set.iter().all(|&x| self.conj(x, f).is_none_or(|y| set.contains(&y))))
    }

    /// A subgroup as a group in its own right; ids follow the ascending order
    /// of `h`.
    pub fn subgroup_as_group(&self, h: &BTreeSet<Elem>, name: impl Into<String>) -> Result<(FiniteGroup, Vec<Elem>)> {
        if !self.is_subgroup(h) {
            return input(format!("{} is not a subgroup of {}", self.fmt_set(h), self.name));
        }
        let elems: Vec<Elem> = h.iter().copied().collect();
        let index = |x: Elem| elems.binary_search(&x).expect("subgroups are closed");
        let rows = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| index(self.evaluate(&[a, b]).expect("W(H) ⊆ D"))).collect())
            .collect();
        let labels = elems.iter().map(|&x| self.label(x).to_string()).collect();
        Ok((FiniteGroup::from_table(name, rows, Some(labels))?, elems))
    }

    pub fn fmt_word(&self, w: &[Elem]) -> String {
        let parts: Vec<&str> = w.iter().map(|&x| self.labels.get(x).map_or("?", String::as_str)).collect();
        format!("({})", parts.join(", "))
    }

    pub fn fmt_set(&self, set: &BTreeSet<Elem>) -> String {
        let parts: Vec<&str> = set.iter().map(|&x| self.labels.get(x).map_or("?", String::as_str)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Checks the four partial-group axioms on every planned word:
    /// (1) letters lie in `D` and `D` is closed under splitting `u∘v`;
    /// (2) `Π` is the identity on letters and `Π(∅) = 1`;
    /// (3) `u∘v∘w ∈ D` implies `u∘(Π(v))∘w ∈ D` with the same product;
    /// (4) inversion is involutory and `w ∈ D` implies `w⁻¹∘w ∈ D` with product `1`.
    pub fn check_axioms(&self, plan: &ScanPlan) -> AxiomReport {
        let plan = ScanPlan { n: self.n, ..*plan };
        let out = plan.scan(AxiomAcc::default, |acc, w| self.axioms_on_word(acc, w), AxiomAcc::merge);
        out.acc.report.finish(out.words, out.exhaustive)
    }

    fn axioms_on_word(&self, acc: &mut AxiomAcc, w: &[Elem]) {
        let n = w.len();
        let value = self.evaluate(w);
        if n == 0 && value != Some(0) {
            acc.report.violate(Axiom::Unit, vec![Word::empty()]);
        }
        if n == 1 {
            let f = w[0];
            match value {
                None => acc.report.violate(Axiom::Splitting, vec![w.into()]),
                Some(y) if y != f => acc.report.violate(Axiom::Unit, vec![w.into()]),
                _ => {}
            }
            if self.inv(self.inv(f)) != f {
                acc.report.violate(Axiom::Inversion, vec![w.into()]);
            }
        }
        let Some(value) = value else { return };
        for k in 1..n {
            if self.evaluate(&w[..k]).is_none() || self.evaluate(&w[k..]).is_none() {
                acc.report.violate(Axiom::Splitting, vec![w[..k].into(), w[k..].into()]);
            }
        }
        for i in 0..n {
            for j in i + 2..=n {
                let Some(inner) = self.evaluate(&w[i..j]) else { continue };
                let buf = &mut acc.scratch;
                buf.clear();
                buf.extend_from_slice(&w[..i]);
                buf.push(inner);
                buf.extend_from_slice(&w[j..]);
                if self.evaluate(buf) != Some(value) {
                    let reduced = Word(buf.clone());
                    acc.report.violate(Axiom::Substitution, vec![w.into(), reduced]);
                }
            }
        }
        let buf = &mut acc.scratch;
        buf.clear();
        buf.extend(w.iter().rev().map(|&f| self.inv(f)));
        buf.extend_from_slice(w);
        if self.evaluate(buf) != Some(0) {
            acc.report.violate(Axiom::Inversion, vec![w.into()]);
        }
    }

    /// Inserting `1` anywhere into a word of `D` keeps it in `D` with the
    /// same product, and words made only of `1` have product `1`.
    pub fn identity_insertion_check(&self, plan: &ScanPlan) -> AxiomReport {
        let plan = ScanPlan { n: self.n, ..*plan };
        let out = plan.scan(
            AxiomAcc::default,
            |acc, w| {
                let Some(value) = self.evaluate(w) else { return };
                for k in 0..=w.len() {
                    let buf = &mut acc.scratch;
                    buf.clear();
                    buf.extend_from_slice(&w[..k]);
                    buf.push(0);
                    buf.extend_from_slice(&w[k..]);
                    if self.evaluate(buf) != Some(value) {
                        let padded = Word(buf.clone());
                        acc.report.violate(Axiom::OnesInsertion, vec![w.into(), padded]);
                    }
                }
            },
            AxiomAcc::merge,
        );
        let mut report = out.acc.report;
        for len in 0..=plan.max_len + 1 {
            let ones = vec![0; len];
            if self.evaluate(&ones) != Some(0) {
                report.violate(Axiom::OnesWord, vec![Word(ones)]);
            }
        }
        report.finish(out.words + plan.max_len as u64 + 2, out.exhaustive)
    }

    /// For every pair `(f, g)`: the four conditions `f ∈ C(g)`, `g ∈ C(f)`,
    /// `Π(f⁻¹,g⁻¹,f,g) = 1`, `Π(g⁻¹,f⁻¹,g,f) = 1` agree, and when they hold
    /// `(f,g), (g,f) ∈ D` with `fg = gf`.
    pub fn centralizer_equivalences_check(&self) -> CheckReport {
        let n = self.n;
        let shards: Vec<CheckReport> = (0..n)
            .into_par_iter()
            .map(|f| {
                let mut r = CheckReport::exact();
                for g in 0..n {
                    let (fi, gi) = (self.inv(f), self.inv(g));
                    let c1 = self.conj(g, f) == Some(g);
                    let c2 = self.conj(f, g) == Some(f);
                    let c3 = self.evaluate(&[fi, gi, f, g]) == Some(0);
                    let c4 = self.evaluate(&[gi, fi, g, f]) == Some(0);
                    r.check(c1 == c2 && c2 == c3 && c3 == c4, || {
                        format!("f={}, g={}: conditions {c1} {c2} {c3} {c4}", self.label(f), self.label(g))
                    });
                    if c1 {
                        let fg = self.evaluate(&[f, g]);
                        let gf = self.evaluate(&[g, f]);
                        r.check(fg.is_some() && fg == gf, || {
                            format!(
                                "f={}, g={} commute by conjugation but fg, gf disagree",
                                self.label(f),
                                self.label(g)
                            )
                        });
                    }
                }
                r
            })
            .collect();
        shards.into_iter().fold(CheckReport::exact(), CheckReport::merged)
    }
}

fn full_mask(m: usize) -> Mask {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Runs `k` on the image of `w` under `f`, on the stack for short words.
#[inline]
fn with_mapped<R>(w: &[Elem], f: impl Fn(Elem) -> Elem, k: impl FnOnce(&[Elem]) -> R) -> R {
    if w.len() <= WORD_BUF {
        let mut buf = [0usize; WORD_BUF];
        for (b, &x) in buf.iter_mut().zip(w) {
            *b = f(x);
        }
        k(&buf[..w.len()])
    } else {
        let v: Vec<Elem> = w.iter().map(|&x| f(x)).collect();
        k(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    /// (1) letters in `D`, `D` closed under splitting.
    Splitting,
    /// (2) `Π` fixes letters and sends `∅` to `1`.
    Unit,
    /// (3) substitution of a subword by its product.
    Substitution,
    /// (4) involutory inversion, `w⁻¹∘w ∈ D` with product `1`.
    Inversion,
    /// Inserting `1` keeps a word in `D` with the same product.
    OnesInsertion,
    /// Words of `1`s have product `1`.
    OnesWord,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Splitting => "axiom 1 (splitting)",
            Axiom::Unit => "axiom 2 (unit)",
            Axiom::Substitution => "axiom 3 (substitution)",
            Axiom::Inversion => "axiom 4 (inversion)",
            Axiom::OnesInsertion => "identity insertion",
            Axiom::OnesWord => "identity words",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub words: Vec<Word>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checked_words: u64,
    pub exhaustive: bool,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn violate(&mut self, axiom: Axiom, words: Vec<Word>) {
        self.violation_count += 1;
        if self.violations.len() < WITNESS_CAP {
            self.violations.push(Violation { axiom, words });
        }
    }

    fn finish(mut self, checked: u64, exhaustive: bool) -> Self {
        self.checked_words = checked;
        self.exhaustive = exhaustive;
        self
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    /// Summary in the common report shape, words rendered by `pg`.
    pub fn to_check_report(&self, pg: &PartialGroup) -> CheckReport {
        CheckReport {
            checked: self.checked_words,
            exhaustive: self.exhaustive,
            failure_count: self.violation_count,
            failures: self
                .violations
                .iter()
                .map(|v| {
                    let ws: Vec<String> = v.words.iter().map(|w| pg.fmt_word(w)).collect();
                    format!("{}: {}", v.axiom, ws.join(" / "))
                })
                .collect(),
        }
    }
}

#[derive(Default)]
struct AxiomAcc {
    report: AxiomReport,
    scratch: Vec<Elem>,
}

impl AxiomAcc {
    fn merge(mut a: AxiomAcc, b: AxiomAcc) -> AxiomAcc {
        a.report.violation_count += b.report.violation_count;
        for v in b.report.violations {
            if a.report.violations.len() < WITNESS_CAP {
                a.report.violations.push(v);
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn set(xs: &[Elem]) -> BTreeSet<Elem> {
        xs.iter().copied().collect()
    }

    #[test]
    fn group_case_products() {
        let c2 = PartialGroup::from_group(catalog::c2());
        assert_eq!(c2.product(&[1, 1]).unwrap(), 0);
        let s3 = PartialGroup::from_group(catalog::s3());
        let g = s3.as_group().unwrap().clone();
        let (a, b) = (g.find("(1 2)").unwrap(), g.find("(1 3)").unwrap());
        assert_eq!(s3.label(s3.product(&[a, b]).unwrap()), "(1 2 3)");
        let c = g.find("(1 2 3)").unwrap();
        assert_eq!(s3.label(s3.conjugate(a, c).unwrap()), "(2 3)");
    }

    #[test]
    fn empty_and_letters() {
        let s3 = PartialGroup::from_group(catalog::s3());
        assert_eq!(s3.evaluate(&[]), Some(0));
        for f in s3.elements() {
            assert_eq!(s3.evaluate(&[f]), Some(f));
            assert_eq!(s3.inv(s3.inv(f)), f);
        }
    }

    #[test]
    fn center_and_subgroups() {
        let d8 = PartialGroup::from_group(catalog::d8());
        assert_eq!(d8.center().len(), 2);
        let s3 = PartialGroup::from_group(catalog::s3());
        assert_eq!(s3.center(), set(&[0]));
        let t = s3.as_group().unwrap().find("(1 2)").unwrap();
        let h = set(&[0, t]);
        assert!(s3.is_partial_subgroup(&h));
        assert!(s3.is_subgroup(&h));
        assert!(!s3.is_partial_normal(&h));
        assert!(s3.is_subgroup(&set(&[0])));
        assert!(!s3.is_partial_subgroup(&set(&[t])));
    }

    #[test]
    fn empty_set_degenerate_cases() {
        let s3 = PartialGroup::from_group(catalog::s3());
        assert_eq!(s3.centralizer(&BTreeSet::new()), s3.carrier());
        assert_eq!(s3.normalizer(&BTreeSet::new()), s3.carrier());
    }

    #[test]
    fn group_axioms_pass() {
        let s3 = PartialGroup::from_group(catalog::s3());
        let report = s3.check_axioms(&ScanPlan::new(0, 4, 10_000_000, 42));
        assert!(report.passed() && report.exhaustive);
        assert_eq!(report.checked_words, 1 + 6 + 36 + 216 + 1296);
    }

    #[test]
    fn corrupted_table_violates_substitution() {
        let mut t: Vec<Elem> = (0..3).flat_map(|a| (0..3).map(move |b| (a + b) % 3)).collect();
        t[3 + 1] = 0;
        t[3 + 2] = 2;
        let bad = PartialGroup::from_raw_table("bad", 3, t).unwrap();
        let report = bad.check_axioms(&ScanPlan::new(0, 3, 10_000_000, 42));
        assert!(report.violates(Axiom::Substitution));
    }

    #[test]
    fn undefined_conjugation_error() {
        let s3 = PartialGroup::from_group(catalog::s3());
        assert!(matches!(s3.conjugate(0, 99), Err(Error::Input(_))));
    }

    #[test]
    fn sub_partial_group_restricts() {
        let s4 = PartialGroup::from_group(catalog::s4());
        let g = s4.as_group().unwrap().clone();
        let v4: BTreeSet<Elem> =
            g.closure(&[g.find("(1 2)(3 4)").unwrap(), g.find("(1 3)(2 4)").unwrap()]).unwrap().into_members();
        let sub = PartialGroup::sub(&s4, &v4, "V4").unwrap();
        assert_eq!(sub.size(), 4);
        assert!(sub.check_axioms(&ScanPlan::new(0, 3, 1000, 0)).passed());
        assert!(PartialGroup::sub(&s4, &set(&[0, 1, 2]), "junk").is_err());
    }
}
