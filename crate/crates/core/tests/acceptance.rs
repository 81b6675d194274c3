//! Acceptance criteria. Prints one line per criterion and exits non-zero if
//! any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use localities::catalog;
use localities::fusion::{direct_product_fusion, quotient_fusion, FusionSystem};
use localities::fusion_laws::{central_quotient_check, direct_product_fusion_laws, epi_conjugates_check};
use localities::group::FiniteGroup;
use localities::locality::{group_locality, locality_from_group, Locality};
use localities::morphism::MapClass;
use localities::partial_group::PartialGroup;
use localities::pgroup::bits;
use localities::products::{
    conjugate_direct_product_check, direct_product_centre_check, direct_product_locality, factor_image,
    hat_sublocality, inclusion_projection_check, inclusions_and_projections, normalizers_check,
    recognize_internal_product, Verdict,
};
use localities::quotients::external_central_product_locality;
use localities::report::CheckReport;
use localities::suite::{render, run_suite, Format, LemmaRecord, Status, SuiteConfig};
use localities::words::{for_each_word_of_len, ScanPlan};
use localities::{Elem, Result};

const BUDGET: u64 = 10_000_000;
const SAMPLE: u64 = 100_000;
const SEED: u64 = 42;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn first_failure(r: &CheckReport) -> String {
    r.failures.first().cloned().unwrap_or_default()
}

fn d8_central() -> Result<(Locality, localities::quotients::CentralProduct)> {
    let d8 = catalog::d8();
    let z = d8.center().into_members().into_iter().find(|&x| x != 0).expect("Z(D8) has order 2");
    let l = group_locality(&d8, 2)?;
    let n = l.pg().size();
    let cp = external_central_product_locality(&l, &l, &BTreeSet::from([0, z * n + z]))?;
    Ok((l, cp))
}

fn suite(only: &[&str], instances: &[&str]) -> Result<Vec<LemmaRecord>> {
    run_suite(&SuiteConfig {
        only: only.iter().map(|s| s.to_string()).collect(),
        instances: instances.iter().map(|s| s.to_string()).collect(),
        ..SuiteConfig::default()
    })
}

fn suite_outcome(records: &[LemmaRecord], extra: &str) -> Outcome {
    let failed: Vec<String> =
        records.iter().filter(|r| r.status != Status::Pass).map(|r| format!("{} on {}", r.lemma, r.instance)).collect();
    let sampled = records.iter().filter(|r| !r.exhaustive).count();
    outcome(
        failed.is_empty() && !records.is_empty(),
        format!("{} records, {} not passing {:?}, {} sampled{extra}", records.len(), failed.len(), failed, sampled),
    )
}

fn axioms(pg: &PartialGroup, plan: &ScanPlan) -> CheckReport {
    pg.check_axioms(plan).to_check_report(pg)
}

/// Axiom suite, exhaustive at length 4 except on the 144-element product,
/// where length 3 is exhaustive and length 4 is sampled.
fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let mut cases: Vec<(String, Arc<PartialGroup>)> = Vec::new();
    for g in catalog::all().into_iter().filter(|g| g.order() <= 24) {
        cases.push((g.name().to_string(), PartialGroup::from_group(g)));
    }
    let s3 = group_locality(&catalog::s3(), 2)?;
    let s4 = group_locality(&catalog::s4(), 2)?;
    let s4g = catalog::s4();
    let s4v = locality_from_group(&s4g, 2, &[s4g.o_p(2).into_members()])?;
    cases.push(("L(S3)".into(), Arc::clone(s3.pg())));
    cases.push(("L(S4)".into(), Arc::clone(s4.pg())));
    cases.push(("L(S4;V4)".into(), Arc::clone(s4v.pg())));
    cases.push(("L(S3)xL(S3)".into(), Arc::clone(direct_product_locality(&s3, &s3)?.pg())));
    let (_, cp) = d8_central()?;
    cases.push(("D8oD8".into(), Arc::clone(cp.quotient.pg())));

    let mut bad = Vec::new();
    let mut words = 0;
    for (name, pg) in &cases {
        let plan = ScanPlan::new(pg.size(), 4, BUDGET, SEED);
        let r = axioms(pg, &plan);
        words += r.checked;
        if !r.passed() || !r.exhaustive {
            bad.push(format!("{name}: passed={} exhaustive={} {}", r.passed(), r.exhaustive, first_failure(&r)));
        }
    }
    let big = direct_product_locality(&s4, &s3)?;
    let len3 = axioms(big.pg(), &ScanPlan::new(144, 3, BUDGET, SEED));
    let len4 = axioms(big.pg(), &ScanPlan::new(144, 4, 2 * SAMPLE, SEED));
    if !len3.passed() || !len3.exhaustive || !len4.passed() {
        bad.push(format!("L(S4)xL(S3): {}", first_failure(&len3.clone().merged(len4.clone()))));
    }

    let n = 4;
    let cyclic: Vec<Elem> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let mut non_associative = cyclic.clone();
    non_associative[n + 1] = 3;
    non_associative[n + 2] = 2;
    let mut no_inverse = cyclic.clone();
    no_inverse[n + 3] = 1;
    no_inverse[3 * n + 1] = 1;
    let mut controls = Vec::new();
    for (name, table) in [("non-associative", non_associative), ("missing inverse", no_inverse)] {
        let pg = PartialGroup::from_raw_table(name, n, table)?;
        let r = axioms(&pg, &ScanPlan::new(n, 4, BUDGET, SEED));
        controls.push(r.failure_count);
        if r.passed() {
            bad.push(format!("negative control `{name}` passed"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        bad.push(format!("took {elapsed:?}"));
    }
    Ok(outcome(
        bad.is_empty(),
        format!(
            "{} carriers exhaustive at length 4 ({words} words); 144-element product exhaustive at length 3, {} sampled words of length 3 to 4; controls {:?} violations; {:.1}s {:?}",
            cases.len(),
            len4.checked - (1 + 144 + 144 * 144),
            controls,
            elapsed.as_secs_f64(),
            bad
        ),
    ))
}

/// Direct-product laws on product partial groups and localities.
fn criterion_2() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut sampled = 0;
    let pairs = [("S4", "S3"), ("S3", "S3"), ("D8", "D8"), ("D8", "C2"), ("Q8", "D8")];
    for (a, b) in pairs {
        let l1 = group_locality(&catalog::by_name(a).unwrap(), 2)?;
        let l2 = group_locality(&catalog::by_name(b).unwrap(), 2)?;
        let prod = direct_product_locality(&l1, &l2)?;
        let n = prod.pg().size();
        let budget = if l1.pg().size() <= 48 && l2.pg().size() <= 48 && n <= 48 { BUDGET } else { SAMPLE };
        let plan = ScanPlan::new(n, 3, budget.max(if (n as u64).pow(3) <= BUDGET { BUDGET } else { 0 }), SEED);
        let mut r = conjugate_direct_product_check(prod.pg(), &l1.s(), &l2.s())?;
        r.absorb_labeled("centre", direct_product_centre_check(prod.pg())?);
        r.absorb_labeled("normalizers", normalizers_check(&prod, &l1, &l2)?);
        r.absorb_labeled("inclusions", inclusion_projection_check(&prod, &plan)?);
        let maps = inclusions_and_projections(prod.pg())?;
        for i in 1..=2 {
            let pi = maps.pi(3 - i);
            pi.classify(&plan);
            r.check(pi.kernel()? == factor_image(prod.pg(), i)?, || format!("ker(π{}) ≠ L{i}ι{i}", 3 - i));
            let iota = maps.iota(i);
            let c = iota.classify(&plan);
            r.check(c.injective && c.class == MapClass::Homomorphism, || format!("ι{i} is {:?}", c.class));
        }
        checked += r.checked;
        if !r.exhaustive {
            sampled += 1;
        }
        if !r.passed() {
            bad.push(format!("{a}x{b}: {}", first_failure(&r)));
        }
    }
    Ok(outcome(
        bad.is_empty(),
        format!("{} products, {checked} checks, {sampled} with sampled word scans {bad:?}", pairs.len()),
    ))
}

/// Locality axioms on every constructed instance, and conjugation closure
/// of Δ on L_Δ(S4) with Δ generated by V4.
fn criterion_3() -> Result<Outcome> {
    let start = Instant::now();
    let records = suite(&["LocalityDefinition"], &[])?;
    let s4 = catalog::s4();
    let loc = locality_from_group(&s4, 2, &[s4.o_p(2).into_members()])?;
    let closure = loc.conjugation_closure_check();
    let report = loc.verify(&ScanPlan::new(24, 4, BUDGET, SEED));
    let elapsed = start.elapsed();
    let mut o = suite_outcome(&records, &format!("; Δ(V4) closure {} checks", closure.checked));
    o.passed &= closure.passed() && closure.exhaustive && report.passed() && elapsed < Duration::from_secs(30);
    o.detail += &format!(", {:.1}s", elapsed.as_secs_f64());
    Ok(o)
}

/// Hom-set-exact equality of fusion systems for L_Δ(S4) × L_Δ(S3).
fn criterion_4() -> Result<Outcome> {
    let start = Instant::now();
    let l1 = group_locality(&catalog::s4(), 2)?;
    let l2 = group_locality(&catalog::s3(), 2)?;
    let prod = direct_product_locality(&l1, &l2)?;
    let f = prod.fusion()?;
    let expected = direct_product_fusion(&l1.fusion()?, &l2.fusion()?)?;
    let r = f.compare(&expected);
    let order = f.s().order();
    Ok(outcome(
        r.passed() && order == 16 && start.elapsed() < Duration::from_secs(300),
        format!(
            "|S| = {order}, {} Hom-sets equal, {} morphisms, {:.1}s {}",
            r.checked,
            f.morphism_count(),
            start.elapsed().as_secs_f64(),
            first_failure(&r)
        ),
    ))
}

/// Fusion-system transfer laws for products with |S1 × S2| ≤ 16 and the
/// D8 ∘ D8 quotient.
fn criterion_5() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut checked = 0;
    let pairs = [("S4", "S3", 2), ("D8", "C2", 2), ("Q8", "C2", 2), ("A4", "C4", 2), ("C4", "V4", 2), ("S3", "A4", 3)];
    for (a, b, p) in pairs {
        let f1 = FusionSystem::from_group(&catalog::by_name(a).unwrap(), p)?;
        let f2 = FusionSystem::from_group(&catalog::by_name(b).unwrap(), p)?;
        let f = direct_product_fusion(&f1, &f2)?;
        for (part, r) in ["a", "b", "c", "d", "e", "f"].iter().zip(direct_product_fusion_laws(&f, &f1, &f2)?) {
            checked += r.checked;
            if !r.passed() || !r.exhaustive {
                bad.push(format!("{a}x{b} ({part}): {}", first_failure(&r)));
            }
        }
    }
    let d8 = FusionSystem::from_group(&catalog::d8(), 2)?;
    let f = direct_product_fusion(&d8, &d8)?;
    let m = d8.s().order();
    let z = bits(d8.center()).find(|&x| x != 0).expect("Z(D8) ≠ 1");
    let (q, alpha) = quotient_fusion(&f, f.s().generate(&[z * m + z]))?;
    for (name, r) in [
        ("CentralQuotient", central_quotient_check(&alpha, &f, &q)?),
        ("EpiConjugates", epi_conjugates_check(&alpha, &f, &q)?),
    ] {
        checked += r.checked;
        if !r.passed() {
            bad.push(format!("{name}: {}", first_failure(&r)));
        }
    }
    Ok(outcome(
        bad.is_empty(),
        format!("{} products and D8∘D8 (|S/Z| = {}), {checked} subgroup checks {bad:?}", pairs.len(), q.s().order()),
    ))
}

/// L = D8 × D8 modulo the diagonal center.
fn criterion_6() -> Result<Outcome> {
    let start = Instant::now();
    let (_, cp) = d8_central()?;
    let (pg, q, beta) = (cp.product.pg(), cp.quotient.pg(), &cp.beta);
    let mut r = CheckReport::exact();
    let mut fibres: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for x in pg.elements() {
        fibres.entry(beta.apply(x)).or_default().push(x);
    }
    r.check(fibres.values().all(|c| c.len() == 2), || "a coset does not have 2 elements".into());
    r.check(q.size() == 32 && fibres.len() == 32, || format!("quotient has {} elements", q.size()));
    let class = beta.classify(&ScanPlan::new(pg.size(), 3, BUDGET, SEED));
    r.check(class.class >= MapClass::Projection, || format!("β is only {:?}", class.class));
    r.check(beta.kernel()? == cp.z, || "ker β ≠ Z".into());
    let mut source_words = 0u64;
    let mut image = Vec::new();
    for len in 0..=3 {
        for_each_word_of_len(pg.size(), len, |w| {
            source_words += 1;
            image.clear();
            image.extend(w.iter().map(|&x| beta.apply(x)));
            r.check(pg.in_domain(w) == q.in_domain(&image), || format!("{} breaks v ∈ D ⟺ vβ* ∈ D'", pg.fmt_word(w)));
        });
    }
    let mut triples = 0u64;
    for_each_word_of_len(q.size(), 3, |w| {
        triples += 1;
        let lifted = fibres[&w[0]]
            .iter()
            .any(|&a| fibres[&w[1]].iter().any(|&b| fibres[&w[2]].iter().any(|&c| pg.in_domain(&[a, b, c]))));
        r.check(q.in_domain(w) == lifted, || format!("{} has no preimage in D", q.fmt_word(w)));
    });
    let elapsed = start.elapsed();
    Ok(outcome(
        r.passed() && triples == 32_768 && elapsed < Duration::from_secs(10),
        format!(
            "|L/Z| = {}, {triples} quotient triples, {source_words} source words, {:.1}s {}",
            q.size(),
            elapsed.as_secs_f64(),
            first_failure(&r)
        ),
    ))
}

/// Internal recognition of external products.
fn criterion_7() -> Result<Outcome> {
    let mut bad = Vec::new();
    let l1 = group_locality(&catalog::s4(), 2)?;
    let l2 = group_locality(&catalog::s3(), 2)?;
    let prod = direct_product_locality(&l1, &l2)?;
    let (h1, h2) = (hat_sublocality(&prod, &l1, 1)?, hat_sublocality(&prod, &l2, 2)?);
    let plan = ScanPlan::new(144, 3, BUDGET, SEED);
    let direct = recognize_internal_product(&prod, &h1, &h2, &plan)?;
    let swapped = recognize_internal_product(&prod, &h2, &h1, &plan)?;
    if direct.verdict != Verdict::Direct || swapped.verdict != Verdict::Direct {
        bad.push(format!("L(S4)xL(S3): {} / {}", direct.verdict.as_str(), swapped.verdict.as_str()));
    }
    let (_, cp) = d8_central()?;
    let plan = ScanPlan::new(64, 3, BUDGET, SEED);
    let central = recognize_internal_product(&cp.quotient, &cp.images[0], &cp.images[1], &plan)?;
    let back = recognize_internal_product(&cp.quotient, &cp.images[1], &cp.images[0], &plan)?;
    if central.verdict != Verdict::Central || central.kernel.len() != 2 || central.intersection.len() != 2 {
        bad.push(format!(
            "D8∘D8: {} |ker| {} |L1∩L2| {}",
            central.verdict.as_str(),
            central.kernel.len(),
            central.intersection.len()
        ));
    }
    if back.verdict != central.verdict {
        bad.push("D8∘D8 verdict depends on factor order".into());
    }
    Ok(outcome(
        bad.is_empty(),
        format!(
            "L(S4)xL(S3): {}, D8∘D8: {} with |ker φ| = {}, |L1 ∩ L2| = {}, swapped: {} {bad:?}",
            direct.verdict.as_str(),
            central.verdict.as_str(),
            central.kernel.len(),
            central.intersection.len(),
            back.verdict.as_str()
        ),
    ))
}

/// Characteristic-p laws, brute force over catalog pairs plus the suite
/// iff-laws on the D8- and S4-based instances.
fn criterion_8() -> Result<Outcome> {
    let groups = catalog::all();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for p in [2, 3] {
        for a in &groups {
            for b in &groups {
                pairs += 1;
                let g = FiniteGroup::direct_product(a, b);
                if g.is_characteristic_p(p) != (a.is_characteristic_p(p) && b.is_characteristic_p(p)) {
                    bad.push(format!("{}x{} p={p}", a.name(), b.name()));
                }
            }
        }
    }
    let records = suite(
        &[
            "DirectProductObjectiveCharp",
            "DirectProductLinkingLocality",
            "InternalCentralProductLinkingLocality",
            "ExternalCentralProductLemma",
        ],
        &[],
    )?;
    let mut o = suite_outcome(&records, &format!("; {pairs} group pairs"));
    o.passed &= bad.is_empty();
    if !bad.is_empty() {
        o.detail += &format!(" {bad:?}");
    }
    Ok(o)
}

/// Δ = Δ1 ∗ Δ2 for Δi among the F^cr-closure and F^s on D8 ∘ D8.
fn criterion_9() -> Result<Outcome> {
    let start = Instant::now();
    let records = suite(&["LastProposition"], &["L(D8)oL(D8)"])?;
    let mut o = suite_outcome(&records, "");
    o.passed &= start.elapsed() < Duration::from_secs(300);
    o.detail += &format!(", 4 choices of (Δ1, Δ2), {:.1}s", start.elapsed().as_secs_f64());
    Ok(o)
}

/// Two full default runs with seed 42 give byte-identical machine reports.
fn criterion_10() -> Result<Outcome> {
    let start = Instant::now();
    let first = render(&run_suite(&SuiteConfig::default())?, Format::Machine);
    let once = start.elapsed();
    let second = render(&run_suite(&SuiteConfig::default())?, Format::Machine);
    let records = first.lines().count() - 1;
    let fails = first.lines().filter(|l| l.contains("\tfail\t")).count();
    Ok(outcome(
        first == second && fails == 0 && once < Duration::from_secs(900),
        format!(
            "{records} records, {fails} failing, identical = {}, one run {:.1}s",
            first == second,
            once.as_secs_f64()
        ),
    ))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("axiom suite", criterion_1),
        ("direct-product laws", criterion_2),
        ("locality verification", criterion_3),
        ("fusion equality", criterion_4),
        ("fusion transfer laws", criterion_5),
        ("central quotient", criterion_6),
        ("internal recognition", criterion_7),
        ("characteristic-p laws", criterion_8),
        ("Δ1 ∗ Δ2 closure", criterion_9),
        ("determinism", criterion_10),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("criterion {:>2}", i + 1);
        if filter.as_ref().is_some_and(|f| !id.contains(f.as_str()) && !name.contains(f.as_str())) {
            continue;
        }
        let o = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.passed {
            failed += 1;
        }
        println!("{id} {:<4} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
