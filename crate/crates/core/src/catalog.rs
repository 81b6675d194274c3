//! Built-in small groups: `C2 C3 C4 V4 C8 D8 Q8 S3 S4 A4`.
//!
//! Permutation groups list their elements in lexicographic order of the
//! image tuple, which puts the identity first. Labels use cycle notation
//! on `1..=n`.

use std::collections::BTreeSet;

use crate::group::FiniteGroup;
use crate::Elem;

pub const NAMES: [&str; 10] = ["C2", "C3", "C4", "V4", "C8", "D8", "Q8", "S3", "S4", "A4"];

pub fn by_name(name: &str) -> Option<FiniteGroup> {
    Some(match name {
        "C2" => cyclic(2),
        "C3" => cyclic(3),
        "C4" => cyclic(4),
        "C8" => cyclic(8),
        "V4" => v4(),
        "D8" => d8(),
        "Q8" => q8(),
        "S3" => s3(),
        "S4" => s4(),
        "A4" => a4(),
        _ => return None,
    })
}

pub fn all() -> Vec<FiniteGroup> {
    NAMES.iter().map(|n| by_name(n).expect("catalog name")).collect()
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
    let labels = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{k}"),
        })
        .collect();
    FiniteGroup::from_flat_trusted(format!("C{n}"), n, table, labels)
}

pub fn c2() -> FiniteGroup {
    cyclic(2)
}

pub fn v4() -> FiniteGroup {
    let table = (0..4).flat_map(|a| (0..4).map(move |b| a ^ b)).collect();
    let labels = ["1", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
    FiniteGroup::from_flat_trusted("V4", 4, table, labels)
}

/// Quaternion group with ids `1, -1, i, -i, j, -j, k, -k`.
pub fn q8() -> FiniteGroup {
    // unit index: 0 = 1, 1 = i, 2 = j, 3 = k; element id = 2·unit + sign
    fn unit_mul(a: usize, b: usize) -> (usize, bool) {
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 1) => (3, true),
            (2, 3) => (1, false),
            (3, 2) => (1, true),
            (3, 1) => (2, false),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    }
    let mut table = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            let (u, neg) = unit_mul(a / 2, b / 2);
            let sign = (a % 2) ^ (b % 2) ^ usize::from(neg);
            table.push(2 * u + sign);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    FiniteGroup::from_flat_trusted("Q8", 8, table, labels)
}

pub fn s3() -> FiniteGroup {
    permutation_group("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]])
}

pub fn s4() -> FiniteGroup {
    permutation_group("S4", 4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]])
}

pub fn a4() -> FiniteGroup {
    permutation_group("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

/// Symmetries of a square, `⟨(1 2 3 4), (1 3)⟩`, which is a Sylow 2-subgroup
/// of `S4`.
pub fn d8() -> FiniteGroup {
    permutation_group("D8", 4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]])
}

/// Closes the generating permutations (images of `0..degree`) and builds
/// the table with `(a·b)(i) = b(a(i))`.
pub fn permutation_group(name: &str, degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
    let identity: Vec<usize> = (0..degree).collect();
    let mut elems: BTreeSet<Vec<usize>> = BTreeSet::from([identity.clone()]);
    let mut stack = vec![identity];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
            if elems.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    let elems: Vec<Vec<usize>> = elems.into_iter().collect();
    let n = elems.len();
    let index = |perm: &Vec<usize>| -> Elem { elems.binary_search(perm).expect("closed under products") };
    let mut table = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            let ab: Vec<usize> = a.iter().map(|&i| b[i]).collect();
            table.push(index(&ab));
        }
    }
    let labels = elems.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_flat_trusted(name, n, table, labels)
}

fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut i = perm[start];
        while i != start {
            seen[i] = true;
            cycle.push(i + 1);
            i = perm[i];
        }
        let body: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let orders: Vec<usize> = all().iter().map(FiniteGroup::order).collect();
        assert_eq!(orders, vec![2, 3, 4, 4, 8, 8, 8, 6, 24, 12]);
    }

    #[test]
    fn catalog_tables_pass_full_validation() {
        for g in all() {
            let rows: Vec<Vec<Elem>> = g.to_file().table;
            let checked = FiniteGroup::from_table(g.name(), rows, Some(g.labels().to_vec())).unwrap();
            assert_eq!(checked, g);
        }
    }

    #[test]
    fn identity_is_listed_first() {
        for g in all() {
            assert!(g.label(0) == "()" || g.label(0) == "1", "{}", g.name());
        }
    }

    #[test]
    fn quaternion_relations() {
        let q = q8();
        let (i, j, k) = (q.find("i").unwrap(), q.find("j").unwrap(), q.find("k").unwrap());
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), q.find("-k").unwrap());
        assert_eq!(q.mul(i, i), q.find("-1").unwrap());
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 4).count(), 6);
    }

    #[test]
    fn d8_has_two_elements_of_order_four() {
        let d = d8();
        assert_eq!(d.order(), 8);
        assert_eq!((0..8).filter(|&x| d.element_order(x) == 4).count(), 2);
        assert!(!d.is_abelian());
    }

    #[test]
    fn s3_conjugation_convention() {
        let s3 = s3();
        let t = s3.find("(1 2)").unwrap();
        let c = s3.find("(1 2 3)").unwrap();
        assert_eq!(s3.label(s3.conj(t, c)), "(2 3)");
    }
}
