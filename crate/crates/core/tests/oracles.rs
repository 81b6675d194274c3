//! Library results against independent brute-force computations on the raw
//! multiplication tables.

use std::collections::{BTreeMap, BTreeSet};

use localities::catalog;
use localities::fusion::FusionSystem;
use localities::group::FiniteGroup;
use localities::locality::{group_locality, locality_from_group};
use localities::partial_group::PartialGroup;
use localities::pgroup::{bits, Mask};
use localities::products::direct_product_pg;
use localities::quotients::external_central_product_locality;
use localities::Elem;

type Set = BTreeSet<Elem>;

fn naive_closure(g: &FiniteGroup, seed: &[Elem]) -> Set {
    let mut set: Set = seed.iter().copied().chain([0]).collect();
    loop {
        let next: Set =
            set.iter().flat_map(|&a| set.iter().map(move |&b| g.mul(a, b))).chain(set.iter().copied()).collect();
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

fn naive_subgroups(g: &FiniteGroup) -> BTreeSet<Set> {
    let mut found: BTreeSet<Set> = BTreeSet::from([Set::from([0])]);
    let mut frontier: Vec<Set> = found.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        for x in g.elements() {
            if h.contains(&x) {
                continue;
            }
            let mut seed: Vec<Elem> = h.iter().copied().collect();
            seed.push(x);
            let k = naive_closure(g, &seed);
            if found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    found
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// O_p(G) as the intersection of all Sylow p-subgroups.
fn oracle_o_p(g: &FiniteGroup, p: usize) -> Set {
    let subs = naive_subgroups(g);
    let top = subs.iter().filter(|h| is_p_power(h.len(), p)).map(Set::len).max().unwrap();
    subs.iter()
        .filter(|h| h.len() == top && is_p_power(h.len(), p))
        .fold(g.elements().collect::<Set>(), |acc, h| acc.intersection(h).copied().collect())
}

fn oracle_center(g: &FiniteGroup) -> Set {
    g.elements().filter(|&x| g.elements().all(|y| g.mul(x, y) == g.mul(y, x))).collect()
}

fn oracle_char_p(g: &FiniteGroup, p: usize) -> bool {
    let o = oracle_o_p(g, p);
    g.elements().filter(|&x| o.iter().all(|&y| g.mul(x, y) == g.mul(y, x))).all(|x| o.contains(&x))
}

#[test]
fn closure_of_two_double_transpositions_is_klein() {
    let s4 = catalog::s4();
    let a = s4.find("(1 2)(3 4)").unwrap();
    let b = s4.find("(1 3)(2 4)").unwrap();
    let h = s4.closure(&[a, b]).unwrap();
    assert_eq!(h.order(), 4);
    assert_eq!(h.into_members(), naive_closure(&s4, &[a, b]));
    assert_eq!(s4.closure(&[]).unwrap().order(), 1);
}

#[test]
fn subgroup_lattices_match_brute_force() {
    for g in catalog::all() {
        let lib: BTreeSet<Set> = g.all_subgroups().into_iter().collect();
        assert_eq!(lib, naive_subgroups(&g), "{}", g.name());
    }
}

#[test]
fn sylow_o_p_and_characteristic_p_match_oracles() {
    for g in catalog::all() {
        for p in [2, 3] {
            if g.order() % p != 0 {
                continue;
            }
            let syl = g.sylow(p);
            assert_eq!(syl.order(), g.p_part(p), "{} p={p}", g.name());
            assert!(naive_subgroups(&g).contains(syl.members()));
            assert_eq!(g.o_p(p).into_members(), oracle_o_p(&g, p), "O_{p}({})", g.name());
            assert_eq!(g.is_characteristic_p(p), oracle_char_p(&g, p), "{} p={p}", g.name());
        }
        assert_eq!(g.center().into_members(), oracle_center(&g), "Z({})", g.name());
    }
    let s4 = catalog::s4();
    assert_eq!(s4.sylow(2).order(), 8);
    assert_eq!(s4.o_p(2).order(), 4);
    assert!(s4.is_characteristic_p(2));
    assert!(!catalog::s3().is_characteristic_p(2));
    let d8s3 = FiniteGroup::direct_product(&catalog::d8(), &catalog::s3());
    assert!(!d8s3.is_characteristic_p(2));
    assert!(!oracle_char_p(&d8s3, 2));
}

#[test]
fn s3_table_conventions() {
    let g = catalog::s3();
    let pg = PartialGroup::from_group(g.clone());
    let (t12, t13, c123) = (g.find("(1 2)").unwrap(), g.find("(1 3)").unwrap(), g.find("(1 2 3)").unwrap());
    let prod = pg.evaluate(&[t12, t13]).unwrap();
    assert_eq!(prod, g.mul(t12, t13));
    assert_eq!(g.element_order(prod), 3);
    assert_eq!(g.conj(t12, c123), g.find("(2 3)").unwrap());
    assert_eq!(pg.center(), Set::from([0]));
    let h = Set::from([0, t12]);
    assert!(pg.is_partial_subgroup(&h));
    assert!(pg.is_subgroup(&h));
    assert!(!pg.is_partial_normal(&h));
}

#[test]
fn words_of_ones_evaluate_to_one() {
    let s4 = catalog::s4();
    let loc = locality_from_group(&s4, 2, &[s4.o_p(2).into_members()]).unwrap();
    for pg in [PartialGroup::from_group(catalog::d8()), std::sync::Arc::clone(loc.pg())] {
        for len in 0..=5 {
            let w = vec![0; len];
            assert!(pg.in_domain(&w));
            assert_eq!(pg.evaluate(&w), Some(0));
        }
    }
}

#[test]
fn small_localities_from_groups() {
    let s3 = catalog::s3();
    let s = s3.sylow(2).into_members();
    let loc = locality_from_group(&s3, 2, std::slice::from_ref(&s)).unwrap();
    assert_eq!(loc.pg().size(), 2);
    let f = loc.fusion().unwrap();
    for p in f.subgroups() {
        assert_eq!(f.hom(p).len(), 1, "only inclusions");
    }
    let s4 = catalog::s4();
    let loc = locality_from_group(&s4, 2, &[s4.o_p(2).into_members()]).unwrap();
    assert_eq!(loc.pg().size(), 24);
    assert_eq!(PartialGroup::from_group(catalog::d8()).center().len(), 2);
}

/// `Hom_F(P, S)` of `F_S(G)` as maps on local ids of `S`, computed from
/// conjugation in `G`.
fn oracle_homs(g: &FiniteGroup, elems: &[Elem], p: Mask) -> BTreeSet<Vec<(Elem, Elem)>> {
    let local: BTreeMap<Elem, Elem> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    g.elements()
        .filter_map(|x| bits(p).map(|i| local.get(&g.conj(elems[i], x)).map(|&j| (i, j))).collect::<Option<Vec<_>>>())
        .collect()
}

fn lib_homs(f: &FusionSystem, p: Mask) -> BTreeSet<Vec<(Elem, Elem)>> {
    f.hom(p).iter().map(|m| bits(p).map(|i| (i, m.apply(i).unwrap())).collect()).collect()
}

#[test]
fn group_fusion_systems_match_conjugation() {
    for (g, p) in [(catalog::s4(), 2), (catalog::a4(), 2), (catalog::d8(), 2), (catalog::s3(), 3), (catalog::q8(), 2)] {
        let f = FusionSystem::from_group(&g, p).unwrap();
        let sylow = g.sylow(p).into_members();
        let (sg, elems) = g.restrict(&sylow, "S").unwrap();
        for a in sg.elements() {
            for b in sg.elements() {
                assert_eq!(elems[sg.mul(a, b)], g.mul(elems[a], elems[b]));
            }
        }
        for q in f.subgroups() {
            assert_eq!(lib_homs(&f, q), oracle_homs(&g, &elems, q), "{} {}", g.name(), f.s().describe(q));
        }
    }
}

/// The largest subgroup `Q` of `S` such that every `φ ∈ Hom_F(P, S)`
/// extends to some `ψ ∈ Hom_F(PQ, S)` with `Qψ = Q`.
fn oracle_o_p_fusion(f: &FusionSystem) -> Mask {
    let s = f.s();
    let normal = |q: Mask| {
        f.subgroups().into_iter().all(|p| {
            let pq = s.product(p, q);
            f.hom(p).iter().all(|phi| {
                f.hom(pq).iter().any(|psi| {
                    bits(p).all(|x| psi.apply(x) == phi.apply(x))
                        && bits(q).map(|x| psi.apply(x).unwrap()).all(|y| q >> y & 1 == 1)
                })
            })
        })
    };
    f.subgroups().into_iter().filter(|&q| normal(q)).max_by_key(|&q| q.count_ones()).unwrap()
}

#[test]
fn fusion_invariants_of_s4_and_d8() {
    let f = FusionSystem::from_group(&catalog::s4(), 2).unwrap();
    let o2 = f.o_p();
    assert_eq!(o2, oracle_o_p_fusion(&f));
    assert_eq!(o2.count_ones(), 4);
    assert_eq!(f.aut(o2).len(), 6);
    assert!(f.is_centric(o2) && f.is_radical(o2));
    let order4: Vec<Mask> = f.subgroups().into_iter().filter(|q| q.count_ones() == 4).collect();
    let classes: BTreeSet<Vec<Mask>> = order4
        .iter()
        .map(|&q| {
            let mut c = f.conjugates(q);
            c.sort();
            c
        })
        .collect();
    assert_eq!(classes.len(), 3);

    let d8 = FusionSystem::from_group(&catalog::d8(), 2).unwrap();
    assert_eq!(d8.center().count_ones(), 2);
    assert_eq!(d8.o_p(), d8.s().full());
}

#[test]
fn product_partial_group_centre_and_domain() {
    for (a, b) in [(catalog::d8(), catalog::q8()), (catalog::s3(), catalog::c2())] {
        let prod = direct_product_pg(&PartialGroup::from_group(a.clone()), &PartialGroup::from_group(b.clone()));
        let g = FiniteGroup::direct_product(&a, &b);
        assert_eq!(prod.center(), oracle_center(&g));
    }
    let l1 = group_locality(&catalog::s4(), 2).unwrap();
    let l2 = group_locality(&catalog::s3(), 2).unwrap();
    let prod = direct_product_pg(l1.pg(), l2.pg());
    assert_eq!(prod.size(), 144);
    let n2 = l2.pg().size();
    for f in (0..prod.size()).step_by(7) {
        for g in (0..prod.size()).step_by(5) {
            let (w1, w2) = ([f / n2, g / n2], [f % n2, g % n2]);
            let expected = l1.pg().in_domain(&w1) && l2.pg().in_domain(&w2);
            assert_eq!(prod.in_domain(&[f, g]), expected);
            if expected {
                let v = prod.evaluate(&[f, g]).unwrap();
                assert_eq!(v, l1.pg().evaluate(&w1).unwrap() * n2 + l2.pg().evaluate(&w2).unwrap());
            }
        }
    }
}

#[test]
fn d8_central_quotient_cosets_have_two_elements() {
    let d8 = catalog::d8();
    let z = oracle_center(&d8).into_iter().find(|&x| x != 0).unwrap();
    let l = group_locality(&d8, 2).unwrap();
    let n = l.pg().size();
    let zz = Set::from([0, z * n + z]);
    let cp = external_central_product_locality(&l, &l, &zz).unwrap();
    assert_eq!(cp.quotient.pg().size(), 32);
    let mut fibres: BTreeMap<Elem, Set> = BTreeMap::new();
    for x in cp.product.pg().elements() {
        fibres.entry(cp.beta.apply(x)).or_default().insert(x);
    }
    assert_eq!(fibres.len(), 32);
    let g = FiniteGroup::direct_product(&d8, &d8);
    for coset in fibres.values() {
        let x = *coset.first().unwrap();
        assert_eq!(coset, &zz.iter().map(|&y| g.mul(x, y)).collect::<Set>());
    }
    assert_eq!(cp.quotient.delta().len(), cp.quotient.s_group().subgroups().len());
}
