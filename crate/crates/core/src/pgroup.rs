//! Small groups (at most 64 elements) with subgroups packed into `u64`
//! masks and a precomputed subgroup lattice. This is the carrier for
//! fusion systems and for the `S` and `Δ` of a locality.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{input, Result};
use crate::group::{is_power_of, FiniteGroup};
use crate::Elem;

pub type Mask = u64;

pub const MAX_ORDER: usize = 64;

#[derive(Debug)]
pub struct PGroup {
    group: FiniteGroup,
    p: usize,
    /// Subgroups sorted by order, then lexicographically by member list.
    subgroups: Vec<Mask>,
    index: HashMap<Mask, usize>,
    full: Mask,
}

impl PGroup {
    pub fn new(group: FiniteGroup, p: usize) -> Result<Arc<Self>> {
        let n = group.order();
        if n > MAX_ORDER {
            return input(format!("{} has order {n}; at most {MAX_ORDER} is supported", group.name()));
        }
        if !is_power_of(n, p) {
            return input(format!("{} has order {n}, not a power of {p}", group.name()));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut pg = PGroup { group, p, subgroups: Vec::new(), index: HashMap::new(), full };
        pg.enumerate_subgroups();
        Ok(Arc::new(pg))
    }

    fn enumerate_subgroups(&mut self) {
        let n = self.group.order();
        let mut found: HashMap<Mask, Vec<Elem>> = HashMap::from([(1, Vec::new())]);
        let mut queue: Vec<Mask> = vec![1];
        while let Some(h) = queue.pop() {
            let gens = found[&h].clone();
            for x in 0..n {
                if h & bit(x) != 0 {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(x);
                let k = self.generate(&g2);
                if let std::collections::hash_map::Entry::Vacant(e) = found.entry(k) {
                    e.insert(g2);
                    queue.push(k);
                }
            }
        }
        let mut subs: Vec<Mask> = found.into_keys().collect();
        subs.sort_by(|&a, &b| {
            a.count_ones()
                .cmp(&b.count_ones())
                .then_with(|| bits(a).collect::<Vec<_>>().cmp(&bits(b).collect::<Vec<_>>()))
        });
        self.index = subs.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        self.subgroups = subs;
    }

    /// Mask of the subgroup generated by `gens`.
    pub fn generate(&self, gens: &[Elem]) -> Mask {
        let mut inside: Mask = 1;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.group.mul(x, g);
                if inside & bit(y) == 0 {
                    inside |= bit(y);
                    stack.push(y);
                }
            }
        }
        inside
    }

    pub fn closure(&self, mask: Mask) -> Mask {
        self.generate(&bits(mask).collect::<Vec<_>>())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn full(&self) -> Mask {
        self.full
    }

    pub fn subgroups(&self) -> &[Mask] {
        &self.subgroups
    }

    pub fn is_subgroup(&self, mask: Mask) -> bool {
        self.index.contains_key(&mask)
    }

    pub fn subgroup_index(&self, mask: Mask) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Subgroups contained in `within`.
    pub fn subgroups_of(&self, within: Mask) -> impl Iterator<Item = Mask> + '_ {
        self.subgroups.iter().copied().filter(move |&m| m & !within == 0)
    }

    /// Subgroups of `within` containing `mask`.
    pub fn overgroups(&self, mask: Mask, within: Mask) -> impl Iterator<Item = Mask> + '_ {
        self.subgroups.iter().copied().filter(move |&m| m & mask == mask && m & !within == 0)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.group.mul(a, b)
    }

    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.group.conj(x, g)
    }

    pub fn conj_mask(&self, mask: Mask, g: Elem) -> Mask {
        bits(mask).fold(0, |acc, x| acc | bit(self.conj(x, g)))
    }

    pub fn normalizer(&self, mask: Mask, within: Mask) -> Mask {
        bits(within).filter(|&g| self.conj_mask(mask, g) == mask).fold(0, |acc, g| acc | bit(g))
    }

    pub fn centralizer(&self, mask: Mask, within: Mask) -> Mask {
        bits(within).filter(|&g| bits(mask).all(|x| self.mul(x, g) == self.mul(g, x))).fold(0, |acc, g| acc | bit(g))
    }

    /// Product set `AB`; a subgroup when `A` and `B` commute as sets.
    pub fn product(&self, a: Mask, b: Mask) -> Mask {
        let mut out = 0;
        for x in bits(a) {
            for y in bits(b) {
                out |= bit(self.mul(x, y));
            }
        }
        out
    }

    pub fn to_set(&self, mask: Mask) -> BTreeSet<Elem> {
        bits(mask).collect()
    }

    pub fn from_set(&self, set: &BTreeSet<Elem>) -> Result<Mask> {
        let mut m = 0;
        for &x in set {
            if x >= self.order() {
                return input(format!("element {x} out of range for {}", self.group.name()));
            }
            m |= bit(x);
        }
        Ok(m)
    }

    pub fn describe(&self, mask: Mask) -> String {
        let labels: Vec<&str> = bits(mask).map(|x| self.group.label(x)).collect();
        format!("{{{}}}", labels.join(", "))
    }
}

#[inline]
pub fn bit(x: Elem) -> Mask {
    1u64 << x
}

pub fn bits(mask: Mask) -> impl Iterator<Item = Elem> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as Elem;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn order_of(mask: Mask) -> usize {
    mask.count_ones() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn subgroup_counts() {
        // D8 has 10 subgroups, Q8 has 6, C8 has 4, V4 has 5.
        for (g, count) in [(catalog::d8(), 10), (catalog::q8(), 6), (catalog::cyclic(8), 4), (catalog::v4(), 5)] {
            let pg = PGroup::new(g, 2).unwrap();
            assert_eq!(pg.subgroups().len(), count, "{}", pg.group().name());
        }
    }

    #[test]
    fn lattice_matches_generic_enumeration() {
        let d8 = catalog::d8();
        let generic = d8.all_subgroups();
        let pg = PGroup::new(d8, 2).unwrap();
        let masks: Vec<BTreeSet<Elem>> = pg.subgroups().iter().map(|&m| pg.to_set(m)).collect();
        assert_eq!(masks, generic);
    }

    #[test]
    fn rejects_non_p_groups() {
        assert!(PGroup::new(catalog::s3(), 2).is_err());
        let big = FiniteGroup::direct_product(&catalog::cyclic(8), &catalog::d8());
        assert!(PGroup::new(FiniteGroup::direct_product(&big, &catalog::c2()), 2).is_err());
    }

    #[test]
    fn full_mask_for_order_64() {
        let g = FiniteGroup::direct_product(&catalog::d8(), &catalog::d8());
        let pg = PGroup::new(g, 2).unwrap();
        assert_eq!(pg.full(), u64::MAX);
        assert!(pg.is_subgroup(u64::MAX));
    }
}
