//! Finite groups given by explicit multiplication tables.
//!
//! Elements are dense ids `0..order` with `0` the identity. Products are
//! written left to right, so `mul(x, y)` is "first `x`, then `y`" and
//! conjugation is `x^g = g⁻¹ x g`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::Elem;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("name", &self.name).field("order", &self.order).finish()
    }
}

/// On-disk form of a group: `{"name", "order", "table", "labels"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Builds a group from its multiplication table, checking every group axiom.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<Elem>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return input("a group table must have at least one row");
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return input(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return input(format!("row {i} contains out-of-range id {bad}"));
            }
            table.extend_from_slice(row);
        }
        for x in 0..n {
            if table[x] != x || table[x * n] != x {
                return input(format!("0 is not a two-sided identity at element {x}"));
            }
        }
        for x in 0..n {
            let mut seen = vec![false; n];
            for y in 0..n {
                let z = table[x * n + y];
                if seen[z] {
                    return input(format!("row {x} is not a permutation"));
                }
                seen[z] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return input(format!("table is not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => return input(format!("{} labels given for a group of order {n}", l.len())),
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self::assemble(name.into(), n, table, labels))
    }

    /// Constructs from a flat table that is a group by construction (products,
    /// quotients, restrictions of groups). Only the cheap checks run.
    pub(crate) fn from_flat_trusted(
        name: impl Into<String>,
        order: usize,
        table: Vec<Elem>,
        labels: Vec<String>,
    ) -> Self {
        debug_assert_eq!(table.len(), order * order);
        debug_assert!((0..order).all(|x| table[x] == x && table[x * order] == x));
        Self::assemble(name.into(), order, table, labels)
    }

    fn assemble(name: String, order: usize, table: Vec<Elem>, labels: Vec<String>) -> Self {
        let mut inverse = vec![0; order];
        for x in 0..order {
            inverse[x] = (0..order)
                .find(|&y| table[x * order + y] == 0)
                .expect("every row of a group table contains the identity");
        }
        FiniteGroup { name, order, table, inverse, labels }
    }

    pub fn from_file(file: GroupFile) -> Result<Self> {
        if file.order != file.table.len() {
            return input(format!("declared order {} but table has {} rows", file.order, file.table.len()));
        }
        Self::from_table(file.name, file.table, file.labels)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            name: self.name.clone(),
            order: self.order,
            table: self.table.chunks(self.order).map(<[Elem]>::to_vec).collect(),
            labels: Some(self.labels.clone()),
        }
    }

    /// Resolves a catalog name or reads a group file from `path`.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Some(g) = crate::catalog::by_name(name_or_path) {
            return Ok(g);
        }
        let path = Path::new(name_or_path);
        if !path.exists() {
            return Err(Error::Input(format!("`{name_or_path}` is neither a catalog group nor an existing file")));
        }
        let text = std::fs::read_to_string(path)?;
        Self::from_file(serde_json::from_str(&text)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    /// `x^g = g⁻¹ x g`.
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inverse[g], x), g)
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Element id for a label, if any element carries it.
    pub fn find(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn fold(&self, word: &[Elem]) -> Elem {
        word.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Equal multiplication tables, ignoring names and labels.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.table == other.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn check_ids(&self, ids: &[Elem]) -> Result<()> {
        match ids.iter().find(|&&x| x >= self.order) {
            Some(&bad) => input(format!("element id {bad} out of range for {}", self.name)),
            None => Ok(()),
        }
    }

    /// Membership vector of the subgroup generated by `seed`.
    pub(crate) fn closure_mask(&self, seed: impl IntoIterator<Item = Elem>) -> Vec<bool> {
        let gens: Vec<Elem> = seed.into_iter().filter(|&g| g != 0).collect();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        inside
    }

    pub(crate) fn closure_set(&self, seed: impl IntoIterator<Item = Elem>) -> BTreeSet<Elem> {
        mask_to_set(&self.closure_mask(seed))
    }

    /// Smallest subgroup containing `seed`.
    pub fn closure(&self, seed: &[Elem]) -> Result<Subgroup<'_>> {
        self.check_ids(seed)?;
        Ok(Subgroup { parent: self, members: self.closure_set(seed.iter().copied()) })
    }

    /// Wraps a member set, checking it is a subgroup.
    pub fn subgroup(&self, members: impl IntoIterator<Item = Elem>) -> Result<Subgroup<'_>> {
        let members: BTreeSet<Elem> = members.into_iter().collect();
        let ids: Vec<Elem> = members.iter().copied().collect();
        self.check_ids(&ids)?;
        if !self.is_subgroup_set(&members) {
            return input(format!("{ids:?} is not a subgroup of {}", self.name));
        }
        Ok(Subgroup { parent: self, members })
    }

    pub fn whole(&self) -> Subgroup<'_> {
        Subgroup { parent: self, members: self.elements().collect() }
    }

    pub fn trivial(&self) -> Subgroup<'_> {
        Subgroup { parent: self, members: BTreeSet::from([0]) }
    }

    pub fn is_subgroup_set(&self, set: &BTreeSet<Elem>) -> bool {
        set.contains(&0)
            && set.iter().all(|&a| {
                a < self.order && set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            })
    }

    pub fn centralizer_set(&self, set: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        self.elements().filter(|&g| set.iter().all(|&x| self.mul(x, g) == self.mul(g, x))).collect()
    }

    pub fn normalizer_set(&self, set: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        self.elements().filter(|&g| set.iter().all(|&x| set.contains(&self.conj(x, g)))).collect()
    }

    pub fn center(&self) -> Subgroup<'_> {
        let all: BTreeSet<Elem> = self.elements().collect();
        Subgroup { parent: self, members: self.centralizer_set(&all) }
    }

    pub fn is_normal_set(&self, set: &BTreeSet<Elem>) -> bool {
        self.elements().all(|g| set.iter().all(|&x| set.contains(&self.conj(x, g))))
    }

    pub fn normal_closure(&self, seed: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        let conjugates: BTreeSet<Elem> =
            seed.iter().flat_map(|&x| self.elements().map(move |g| (x, g))).map(|(x, g)| self.conj(x, g)).collect();
        self.closure_set(conjugates)
    }

    /// The largest power of `p` dividing the order.
    pub fn p_part(&self, p: usize) -> usize {
        let mut n = self.order;
        let mut part = 1;
        while n.is_multiple_of(p) {
            n /= p;
            part *= p;
        }
        part
    }

    /// A Sylow `p`-subgroup, grown one step at a time inside normalizers.
    /// Candidates are scanned in ascending id order, so the result is
    /// reproducible.
    pub fn sylow(&self, p: usize) -> Subgroup<'_> {
        let target = self.p_part(p);
        let mut current: BTreeSet<Elem> = BTreeSet::from([0]);
        while current.len() < target {
            let normalizer = self.normalizer_set(&current);
            let next = normalizer
                .iter()
                .filter(|x| !current.contains(x))
                .map(|&x| self.closure_set(current.iter().copied().chain([x])))
                .find(|q| is_power_of(q.len(), p))
                .expect("a non-Sylow p-subgroup has a p-overgroup in its normalizer");
            current = next;
        }
        Subgroup { parent: self, members: current }
    }

    /// `O_p(G)`: the join of all normal `p`-subgroups. Each `p`-element whose
    /// normal closure is a `p`-group contributes that closure.
    pub fn o_p(&self, p: usize) -> Subgroup<'_> {
        let mut gens = Vec::new();
        for x in self.elements() {
            if x == 0 || !is_power_of(self.element_order(x), p) {
                continue;
            }
            let closure = self.normal_closure(&BTreeSet::from([x]));
            if is_power_of(closure.len(), p) {
                gens.push(x);
            }
        }
        Subgroup { parent: self, members: self.closure_set(gens) }
    }

    /// `C_G(O_p(G)) ≤ O_p(G)`.
    pub fn is_characteristic_p(&self, p: usize) -> bool {
        let op = self.o_p(p);
        self.centralizer_set(&op.members).is_subset(&op.members)
    }

    /// Every subgroup, sorted by order and then by member list.
    pub fn all_subgroups(&self) -> Vec<BTreeSet<Elem>> {
        let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
        let mut queue = vec![BTreeSet::from([0])];
        found.insert(vec![0]);
        while let Some(h) = queue.pop() {
            for x in self.elements() {
                if h.contains(&x) {
                    continue;
                }
                let k = self.closure_set(h.iter().copied().chain([x]));
                let key: Vec<Elem> = k.iter().copied().collect();
                if found.insert(key) {
                    queue.push(k);
                }
            }
        }
        let mut all: Vec<BTreeSet<Elem>> = found.into_iter().map(|v| v.into_iter().collect()).collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        all
    }

    /// The direct product with element `(i, j)` encoded as `i·|G2| + j`.
    pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (g1.order, g2.order);
        let n = n1 * n2;
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            let (a1, a2) = (a / n2, a % n2);
            for b in 0..n {
                let (b1, b2) = (b / n2, b % n2);
                table.push(g1.mul(a1, b1) * n2 + g2.mul(a2, b2));
            }
        }
        let labels = (0..n).map(|a| format!("({},{})", g1.label(a / n2), g2.label(a % n2))).collect();
        FiniteGroup::from_flat_trusted(format!("{}x{}", g1.name, g2.name), n, table, labels)
    }

    /// `G/N` for a normal subgroup `N`. Cosets are numbered by their least
    /// member; the second component maps each element to its coset.
    pub fn quotient(&self, normal: &BTreeSet<Elem>) -> Result<(FiniteGroup, Vec<Elem>)> {
        if !self.is_subgroup_set(normal) || !self.is_normal_set(normal) {
            return input(format!("{normal:?} is not a normal subgroup of {}", self.name));
        }
        let mut class_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in self.elements() {
            if class_of[x] != usize::MAX {
                continue;
            }
            for &n in normal {
                class_of[self.mul(n, x)] = reps.len();
            }
            reps.push(x);
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                table.push(class_of[self.mul(a, b)]);
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
        let q = FiniteGroup::from_flat_trusted(format!("{}/{}", self.name, normal.len()), m, table, labels);
        Ok((q, class_of))
    }

    /// The subgroup `members` as a group in its own right; ids follow the
    /// ascending order of `members`.
    pub fn restrict(&self, members: &BTreeSet<Elem>, name: impl Into<String>) -> Result<(FiniteGroup, Vec<Elem>)> {
        if !self.is_subgroup_set(members) {
            return input(format!("{members:?} is not a subgroup of {}", self.name));
        }
        let elems: Vec<Elem> = members.iter().copied().collect();
        let mut local = vec![usize::MAX; self.order];
        for (i, &e) in elems.iter().enumerate() {
            local[e] = i;
        }
        let m = elems.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &elems {
            for &b in &elems {
                table.push(local[self.mul(a, b)]);
            }
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((FiniteGroup::from_flat_trusted(name, m, table, labels), elems))
    }
}

/// A subgroup of a specific parent group. Equality is only meaningful within
/// one parent, so comparison goes through [`Subgroup::try_eq`].
#[derive(Clone, Debug)]
pub struct Subgroup<'g> {
    parent: &'g FiniteGroup,
    members: BTreeSet<Elem>,
}

impl<'g> Subgroup<'g> {
    pub fn parent(&self) -> &'g FiniteGroup {
        self.parent
    }

    pub fn members(&self) -> &BTreeSet<Elem> {
        &self.members
    }

    pub fn into_members(self) -> BTreeSet<Elem> {
        self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(&x)
    }

    pub fn is_p_group(&self, p: usize) -> bool {
        is_power_of(self.members.len(), p)
    }

    pub fn is_normal(&self) -> bool {
        self.parent.is_normal_set(&self.members)
    }

    /// Member-set equality; errors when the parents differ.
    pub fn try_eq(&self, other: &Subgroup<'_>) -> Result<bool> {
        if !std::ptr::eq(self.parent, other.parent) {
            return Err(Error::Contract(format!(
                "cannot compare subgroups of {} and {}",
                self.parent.name, other.parent.name
            )));
        }
        Ok(self.members == other.members)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|&x| self.parent.label(x)).collect()
    }
}

pub(crate) fn mask_to_set(mask: &[bool]) -> BTreeSet<Elem> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// True for `1, p, p², …`.
pub fn is_power_of(mut n: usize, p: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn rejects_non_associative_table() {
        // A Latin square with identity 0 that is not associative.
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("bad", rows, None), Err(Error::Input(_))));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(FiniteGroup::from_table("empty", vec![], None).is_err());
        assert!(FiniteGroup::from_table("ragged", vec![vec![0, 1], vec![1]], None).is_err());
        assert!(FiniteGroup::from_table("range", vec![vec![0, 2], vec![1, 0]], None).is_err());
    }

    #[test]
    fn closure_examples() {
        let s3 = catalog::s3();
        assert_eq!(s3.closure(&[]).unwrap().order(), 1);
        let t = s3.find("(1 2)").unwrap();
        assert_eq!(s3.closure(&[t]).unwrap().order(), 2);
        assert!(matches!(s3.closure(&[99]), Err(Error::Input(_))));
    }

    #[test]
    fn cross_parent_comparison_is_an_error() {
        let a = catalog::c2();
        let b = catalog::c2();
        assert!(a.trivial().try_eq(&b.trivial()).is_err());
        assert!(a.trivial().try_eq(&a.closure(&[]).unwrap()).unwrap());
    }

    #[test]
    fn quotient_by_center_of_d8() {
        let d8 = catalog::d8();
        let z = d8.center().into_members();
        let (q, class_of) = d8.quotient(&z).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_abelian());
        assert_eq!(class_of[0], 0);
        assert!(d8.quotient(&d8.closure_set([d8.find("(1 3)").unwrap()])).is_err());
    }

    #[test]
    fn group_file_round_trip() {
        let s3 = catalog::s3();
        let back = FiniteGroup::from_file(s3.to_file()).unwrap();
        assert_eq!(back, s3);
    }
}
