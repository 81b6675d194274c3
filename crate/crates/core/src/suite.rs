//! The lemma suite: every structural law of the library, run over a fixed
//! matrix of small instances, reported as one record per (lemma, instance).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::fusion::{direct_product_fusion, quotient_fusion, FusionSystem, GroupHom};
use crate::fusion_laws::{
    central_product_fusion_laws, central_quotient_check, direct_product_fusion_laws, epi_conjugates_check,
};
use crate::group::FiniteGroup;
use crate::locality::{group_locality, locality_from_group, Locality};
use crate::morphism::{MapClass, PartialGroupMap};
use crate::partial_group::PartialGroup;
use crate::pgroup::{bits, Mask};
use crate::products::{
    conjugate_direct_product_check, direct_product_centre_check, direct_product_locality, direct_product_pg,
    direct_subgroups_check, factor_image, hat_fusion_check, hat_sublocality, inclusion_projection_check,
    inclusion_subgroups_check, inclusions_and_projections, internal_product_predicates, last_proposition_a_check,
    normalizers_check, pair_map, recognize_internal_product, IffLaw, InternalProductReport, Verdict,
};
use crate::quotients::{
    canonical_projection_central, central_product_fusion_check, external_central_product_locality, image_sublocality,
    induced_isomorphism_check, projection_transport_checks, right_cosets, CentralProduct,
};
use crate::report::CheckReport;
use crate::words::{for_each_word_of_len, ScanPlan, DEFAULT_BUDGET, DEFAULT_MAX_LEN, DEFAULT_SEED};
use crate::Elem;

/// Word budget for sampled scans over carriers too large to enumerate.
pub const SAMPLE_BUDGET: u64 = 100_000;

/// Carriers up to this size are scanned exhaustively when the budget allows.
pub const EXHAUSTIVE_CARRIER: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Fail,
    Pass,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaRecord {
    pub lemma: String,
    pub instance: String,
    pub status: Status,
    pub exhaustive: bool,
    pub checked: u64,
    pub witnesses: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LemmaRecord {
    fn new(lemma: &str, instance: &str, outcome: Result<CheckReport>, elapsed: Duration) -> Self {
        let (status, exhaustive, checked, mut witnesses) = match outcome {
            Ok(r) => {
                let status = if !r.passed() {
                    Status::Fail
                } else if r.checked == 0 {
                    Status::Skipped
                } else {
                    Status::Pass
                };
                (status, r.exhaustive, r.checked, r.failures)
            }
            Err(e) => (Status::Fail, true, 0, vec![format!("error: {e}")]),
        };
        if status == Status::Fail && witnesses.is_empty() {
            witnesses.push("failed without a recorded witness".into());
        }
        LemmaRecord { lemma: lemma.into(), instance: instance.into(), status, exhaustive, checked, witnesses, elapsed }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fixtures {
    #[default]
    Standard,
    /// Deliberately broken inputs; every record is expected to fail.
    Corrupted,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_word_len: usize,
    pub budget: u64,
    pub seed: u64,
    /// Lemma ids to run; empty runs all.
    pub only: Vec<String>,
    /// Instance ids to run; empty runs all.
    pub instances: Vec<String>,
    pub fixtures: Fixtures,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_word_len: DEFAULT_MAX_LEN,
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            only: Vec::new(),
            instances: Vec::new(),
            fixtures: Fixtures::Standard,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Machine,
}

const GROUPS: &[&str] = &["C2", "C3", "C4", "V4", "C8", "D8", "Q8", "S3", "S4", "A4"];
const BASE: &[&str] = &["L(S3)", "L(S3;S)", "L(S4)", "L(S4;V4)", "L(S4;T)", "L(D8)", "L(C2)", "L(C6)"];
const PRODUCTS: &[&str] = &["L(S4)xL(S3)", "L(S4)xL(S3;S)", "L(S3)xL(S3)", "L(D8)xL(D8)", "L(D8)xL(C2)"];
const CENTRAL: &[&str] = &["L(D8)oL(D8)", "L(D8)oL(C2)", "L(C6)oL(C6)"];
const SMALL_PRODUCTS: &[&str] = &["L(S4)xL(S3;S)", "L(S3)xL(S3)", "L(D8)xL(C2)"];
const CENTRAL_IN_S: &[&str] = &["L(D8)oL(D8)", "L(D8)oL(C2)"];
const FUSION_PAIRS: &[&str] = &["F(S4)xF(S3)", "F(D8)xF(C2)", "F(Q8)xF(C2)", "F(A4)xF(C4)", "F(S3;3)xF(A4;3)"];
const FUSION_QUOTIENTS: &[&str] = &["F(D8)xF(D8)/Z", "F(D8)xF(C2)/Z"];
const INTERNAL: &[&str] = &["L(S4)xL(S3)", "L(S4)xL(S3;S)", "L(D8)xL(D8)", "L(D8)oL(D8)", "L(D8)oL(C2)", "L(S3)|self"];
const INTERNAL_CENTRAL: &[&str] = &["L(S4)xL(S3)", "L(S4)xL(S3;S)", "L(D8)xL(D8)", "L(D8)oL(D8)", "L(D8)oL(C2)"];

/// `(lemma, instances)` in the default suite.
fn matrix() -> Vec<(&'static str, Vec<&'static str>)> {
    let cat =
        |parts: &[&[&'static str]]| -> Vec<&'static str> { parts.iter().flat_map(|p| p.iter().copied()).collect() };
    let all_localities = cat(&[BASE, PRODUCTS, CENTRAL]);
    let axioms = cat(&[GROUPS, &["L(S3)", "L(S4)", "L(S4;T)", "L(S4)xL(S3)", "L(S3)xL(S3)", "L(D8)oL(D8)"]]);
    vec![
        ("PartialGroupAxioms", axioms.clone()),
        ("Ones", axioms),
        ("Centralizers", vec!["L(S3)", "L(S4;T)", "L(S3)xL(S3)", "L(D8)oL(D8)"]),
        ("PartialSubgroupProjection", cat(&[&["L(S4)xL(S3)"], CENTRAL_IN_S])),
        ("IsomorphismOfPartialGroups", vec!["L(S4;T)", "L(S3)xL(S3)", "L(D8)xL(C2)"]),
        ("StructureTransport", vec!["L(S4;T)", "L(D8)oL(D8)"]),
        ("LocalityDefinition", all_localities.clone()),
        ("LocalitiesProp", all_localities),
        ("ModCentral1", CENTRAL.to_vec()),
        ("LocalitiesProjectionsModCentral", CENTRAL.to_vec()),
        ("LocalitiesProjectionsPartialNormal", cat(&[&["L(S4)xL(S3)"], CENTRAL])),
        ("SublocalityUnderPartialHom", vec!["L(S4)xL(S3)", "L(S4)xL(S3;S)"]),
        ("SublocalityUnderProjection", CENTRAL.to_vec()),
        ("DirectSubgroups", vec!["L(S4)xL(S3)", "L(S4;T)xL(S3)"]),
        ("DirectProductsLocalitiesProjections", PRODUCTS.to_vec()),
        ("IotaRemark", PRODUCTS.to_vec()),
        ("DirectProductsLocalitiesInclusions", PRODUCTS.to_vec()),
        ("DirectProductPartialGroupIso", vec!["L(S3)xL(S3)", "L(D8)xL(C2)"]),
        ("ConjugateDirectProduct", PRODUCTS.to_vec()),
        ("DirectProductCentre", PRODUCTS.to_vec()),
        ("DirectProductIsLocality", vec!["L(S4)xL(S3)", "L(S4)xL(S3;S)", "L(D8)xL(C2)"]),
        ("DirectProductLiSublocality", vec!["L(S4)xL(S3)", "L(S4)xL(S3;S)", "L(D8)xL(C2)"]),
        ("GroupsDirectProductCharp", vec!["catalog^2;p=2", "catalog^2;p=3"]),
        ("DirectProductsLocalitiesNormalizers", PRODUCTS.to_vec()),
        ("DirectProductObjectiveCharp", PRODUCTS.to_vec()),
        ("DirectProductLinkingLocality", PRODUCTS.to_vec()),
        ("ExternalCentralProductLemma", CENTRAL.to_vec()),
        ("EpiConjugates", FUSION_QUOTIENTS.to_vec()),
        ("CentralQuotient", FUSION_QUOTIENTS.to_vec()),
        ("DirectProductFusionSystems", FUSION_PAIRS.to_vec()),
        ("CentralProductFusionSystems", vec!["L(D8)oL(D8)", "L(D8)oL(C2)", "L(S4)xL(S3;S)"]),
        ("CentralProductProduct", INTERNAL_CENTRAL.to_vec()),
        ("CentralProductCentralizer", INTERNAL_CENTRAL.to_vec()),
        ("InternalCentralProductsPartialGroups", INTERNAL.to_vec()),
        ("DirectProductPartialGroupExternalInternal", SMALL_PRODUCTS.to_vec()),
        ("CentralProductExternalInternal", cat(&[SMALL_PRODUCTS, CENTRAL_IN_S])),
        ("CentralProductTranslateProjection", CENTRAL_IN_S.to_vec()),
        ("InternalCentralProductsLocalities", INTERNAL.to_vec()),
        ("InternalCentralProductFactorsPartialNormal", INTERNAL_CENTRAL.to_vec()),
        ("InternalCentralProductLinkingLocality", INTERNAL_CENTRAL.to_vec()),
        ("LastProposition", vec!["L(D8)oL(D8)"]),
    ]
}

fn corrupted_matrix() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("PartialGroupAxioms", vec!["broken-table"]),
        ("LocalityDefinition", vec!["L(S4) minus a conjugate"]),
        ("ModCentral1", vec!["L(D8)xL(D8) over a reflection"]),
        ("DirectProductIsLocality", vec!["L(S4)xL(S3) vs F_S(S)xF(S3)"]),
    ]
}

/// Lemma ids of the default suite, sorted.
pub fn lemma_ids() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = matrix().into_iter().map(|(l, _)| l).collect();
    ids.sort();
    ids
}

/// Instance ids used anywhere in the default or corrupted suite, sorted.
pub fn instance_ids() -> Vec<&'static str> {
    let set: BTreeSet<&'static str> = matrix().into_iter().chain(corrupted_matrix()).flat_map(|(_, i)| i).collect();
    set.into_iter().collect()
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<LemmaRecord>> {
    if cfg.max_word_len == 0 || cfg.budget == 0 {
        return Err(Error::Config("word length and budget must be positive".into()));
    }
    let entries = match cfg.fixtures {
        Fixtures::Standard => matrix(),
        Fixtures::Corrupted => corrupted_matrix(),
    };
    let lemmas: BTreeSet<&str> = entries.iter().map(|(l, _)| *l).collect();
    let instances: BTreeSet<&str> = entries.iter().flat_map(|(_, i)| i.iter().copied()).collect();
    for id in &cfg.only {
        if !lemmas.contains(id.as_str()) {
            return Err(Error::Config(format!("unknown lemma id {id:?}")));
        }
    }
    for id in &cfg.instances {
        if !instances.contains(id.as_str()) {
            return Err(Error::Config(format!("unknown instance id {id:?}")));
        }
    }
    let ctx = Ctx::new(cfg);
    let mut records = Vec::new();
    for (lemma, list) in &entries {
        if !cfg.only.is_empty() && !cfg.only.iter().any(|o| o == lemma) {
            continue;
        }
        for instance in list {
            if !cfg.instances.is_empty() && !cfg.instances.iter().any(|i| i == instance) {
                continue;
            }
            let start = Instant::now();
            let outcome = match cfg.fixtures {
                Fixtures::Standard => run_entry(&ctx, lemma, instance),
                Fixtures::Corrupted => run_corrupted(&ctx, lemma),
            };
            records.push(LemmaRecord::new(lemma, instance, outcome, start.elapsed()));
        }
    }
    records.sort_by(|a, b| (&a.lemma, &a.instance).cmp(&(&b.lemma, &b.instance)));
    Ok(records)
}

pub fn all_passed(records: &[LemmaRecord]) -> bool {
    records.iter().all(|r| r.status != Status::Fail)
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

/// Renders records. Machine output is tab-separated, sorted by lemma and
/// instance, and carries no timings. The table lists failures first.
pub fn render(records: &[LemmaRecord], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Machine => {
            out.push_str("lemma\tinstance\tstatus\tcoverage\tchecked\twitnesses\n");
            let mut sorted: Vec<&LemmaRecord> = records.iter().collect();
            sorted.sort_by(|a, b| (&a.lemma, &a.instance).cmp(&(&b.lemma, &b.instance)));
            for r in sorted {
                let coverage = if r.exhaustive { "exhaustive" } else { "sampled" };
                let witnesses: Vec<String> = r.witnesses.iter().map(|w| clean(w)).collect();
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.lemma,
                    r.instance,
                    r.status.as_str(),
                    coverage,
                    r.checked,
                    witnesses.join(" | ")
                );
            }
        }
        Format::Table => {
            let mut sorted: Vec<&LemmaRecord> = records.iter().collect();
            sorted.sort_by(|a, b| (a.status, &a.lemma, &a.instance).cmp(&(b.status, &b.lemma, &b.instance)));
            let lw = sorted.iter().map(|r| r.lemma.chars().count()).max().unwrap_or(0).max(5);
            let iw = sorted.iter().map(|r| r.instance.chars().count()).max().unwrap_or(0).max(8);
            let _ = writeln!(
                out,
                "{:<7} {:<lw$} {:<iw$} {:>10} {:>9}  coverage",
                "status", "lemma", "instance", "checked", "ms"
            );
            for r in &sorted {
                let coverage = if r.exhaustive { "exhaustive" } else { "sampled" };
                let _ = writeln!(
                    out,
                    "{:<7} {:<lw$} {:<iw$} {:>10} {:>9}  {}",
                    r.status.as_str(),
                    r.lemma,
                    r.instance,
                    r.checked,
                    r.elapsed.as_millis(),
                    coverage
                );
                for w in r.witnesses.iter().take(3) {
                    let _ = writeln!(out, "        - {}", clean(w));
                }
            }
            if !records.is_empty() {
                let count = |s: Status| records.iter().filter(|r| r.status == s).count();
                let _ = writeln!(
                    out,
                    "{} records: {} pass, {} fail, {} skipped",
                    records.len(),
                    count(Status::Pass),
                    count(Status::Fail),
                    count(Status::Skipped)
                );
            }
        }
    }
    out
}

type Lazy<T> = OnceLock<std::result::Result<T, String>>;

fn force<T>(cell: &Lazy<T>, build: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(|| build().map_err(|e| e.to_string())).as_ref().map_err(|e| Error::Contract(e.clone()))
}

struct ProductInstance {
    factors: [Locality; 2],
    product: Locality,
    hats: [Locality; 2],
}

struct CentralInstance {
    factors: [Locality; 2],
    cp: CentralProduct,
}

struct Ctx {
    max_len: usize,
    budget: u64,
    seed: u64,
    base: BTreeMap<&'static str, Lazy<Locality>>,
    products: BTreeMap<&'static str, Lazy<ProductInstance>>,
    central: BTreeMap<&'static str, Lazy<CentralInstance>>,
    recognized: BTreeMap<&'static str, Lazy<InternalProductReport>>,
}

fn unknown<T>(kind: &str, name: &str) -> Result<T> {
    Err(Error::Config(format!("unknown {kind} instance {name:?}")))
}

fn lazy<T>(names: &[&'static str]) -> BTreeMap<&'static str, Lazy<T>> {
    names.iter().map(|&n| (n, OnceLock::new())).collect()
}

impl Ctx {
    fn new(cfg: &SuiteConfig) -> Self {
        Ctx {
            max_len: cfg.max_word_len,
            budget: cfg.budget,
            seed: cfg.seed,
            base: lazy(BASE),
            products: lazy(&[PRODUCTS, &["L(S4;T)xL(S3)"]].concat()),
            central: lazy(CENTRAL),
            recognized: lazy(&[INTERNAL, PRODUCTS].concat()),
        }
    }

    fn plan(&self, n: usize) -> ScanPlan {
        let budget = if n > EXHAUSTIVE_CARRIER { self.budget.min(SAMPLE_BUDGET) } else { self.budget };
        ScanPlan::new(n, self.max_len, budget, self.seed)
    }

    /// Words of length at most 3, exhaustive whenever the full budget
    /// covers them.
    fn short_plan(&self, n: usize) -> ScanPlan {
        let full = ScanPlan::new(n, self.max_len.min(3), self.budget, self.seed);
        if full.exhaustive() {
            full
        } else {
            ScanPlan { max_len: self.max_len.min(3), ..self.plan(n) }
        }
    }

    /// Runs `check` exhaustively up to the longest length the budget
    /// covers, then on a seeded sample up to the configured length.
    fn word_check(&self, n: usize, check: impl Fn(&ScanPlan) -> CheckReport) -> CheckReport {
        let full = ScanPlan::new(n, self.max_len, self.budget, self.seed);
        if full.exhaustive() {
            return check(&full);
        }
        let len =
            (1..=self.max_len).rev().find(|&l| ScanPlan::new(n, l, self.budget, self.seed).exhaustive()).unwrap_or(1);
        let mut r = check(&ScanPlan::new(n, len, self.budget, self.seed));
        r.absorb(check(&ScanPlan::new(n, self.max_len, self.budget.min(SAMPLE_BUDGET), self.seed)));
        r.exhaustive = false;
        r
    }

    fn base(&self, name: &str) -> Result<&Locality> {
        let Some((&key, cell)) = self.base.get_key_value(name) else { return unknown("locality", name) };
        force(cell, || build_base(key))
    }

    fn product(&self, name: &str) -> Result<&ProductInstance> {
        let Some((&key, cell)) = self.products.get_key_value(name) else { return unknown("product", name) };
        force(cell, || {
            let (a, b) = key.split_once('x').expect("product names contain x");
            let factors = [build_base(a)?, build_base(b)?];
            let product = direct_product_locality(&factors[0], &factors[1])?;
            let hats = [hat_sublocality(&product, &factors[0], 1)?, hat_sublocality(&product, &factors[1], 2)?];
            Ok(ProductInstance { factors, product, hats })
        })
    }

    fn central(&self, name: &str) -> Result<&CentralInstance> {
        let Some((&key, cell)) = self.central.get_key_value(name) else { return unknown("central product", name) };
        force(cell, || {
            let (a, b) = key.split_once('o').expect("central product names contain o");
            let factors = [build_base(a)?, build_base(b)?];
            let z = diagonal_center(&factors[0], &factors[1])?;
            let cp = external_central_product_locality(&factors[0], &factors[1], &z)?;
            Ok(CentralInstance { factors, cp })
        })
    }

    /// Any locality of the matrix: base, product or central quotient.
    fn locality(&self, name: &str) -> Result<&Locality> {
        if self.base.contains_key(name) {
            self.base(name)
        } else if self.products.contains_key(name) {
            Ok(&self.product(name)?.product)
        } else if self.central.contains_key(name) {
            Ok(&self.central(name)?.cp.quotient)
        } else {
            unknown("locality", name)
        }
    }

    fn partial_group(&self, name: &str) -> Result<Arc<PartialGroup>> {
        match catalog::by_name(name) {
            Some(g) => Ok(PartialGroup::from_group(g)),
            None => Ok(Arc::clone(self.locality(name)?.pg())),
        }
    }

    /// `(L, L1, L2)` for an internal product case.
    fn internal(&self, name: &str) -> Result<(&Locality, &Locality, &Locality)> {
        if name == "L(S3)|self" {
            let l = self.base("L(S3)")?;
            return Ok((l, l, l));
        }
        if self.products.contains_key(name) {
            let p = self.product(name)?;
            return Ok((&p.product, &p.hats[0], &p.hats[1]));
        }
        let c = self.central(name)?;
        Ok((&c.cp.quotient, &c.cp.images[0], &c.cp.images[1]))
    }

    fn recognized(&self, name: &str) -> Result<&InternalProductReport> {
        let Some(cell) = self.recognized.get(name) else { return unknown("internal product", name) };
        force(cell, || {
            let (l, l1, l2) = self.internal(name)?;
            let n = l1.pg().size() * l2.pg().size();
            recognize_internal_product(l, l1, l2, &self.short_plan(n))
        })
    }
}

fn build_base(name: &str) -> Result<Locality> {
    match name {
        "L(S3)" => group_locality(&catalog::s3(), 2),
        "L(S3;S)" => {
            let g = catalog::s3();
            let s = g.sylow(2).into_members();
            locality_from_group(&g, 2, &[s])
        }
        "L(S4)" => group_locality(&catalog::s4(), 2),
        "L(S4;V4)" => {
            let g = catalog::s4();
            let v4 = g.o_p(2).into_members();
            locality_from_group(&g, 2, &[v4])
        }
        "L(S4;T)" => {
            let g = catalog::s4();
            let v4 = g.o_p(2).into_members();
            let t =
                g.elements().find(|&x| x != 0 && g.element_order(x) == 2 && !v4.contains(&x)).expect("a transposition");
            locality_from_group(&g, 2, &[BTreeSet::from([0, t])])
        }
        "L(D8)" => group_locality(&catalog::d8(), 2),
        "L(C2)" => group_locality(&catalog::c2(), 2),
        "L(C6)" => group_locality(&catalog::cyclic(6), 2),
        _ => unknown("locality", name),
    }
}

fn pg_order(pg: &PartialGroup, x: Elem) -> Result<usize> {
    let (mut y, mut k) = (x, 1);
    while y != 0 {
        y = pg.evaluate(&[y, x]).ok_or_else(|| Error::Contract(format!("powers of {} are undefined", pg.label(x))))?;
        k += 1;
    }
    Ok(k)
}

/// `Z = ⟨(z1, z2)⟩` for central elements of the factors of equal order,
/// preferring `p'`-elements, in ids of `L1 × L2`.
fn diagonal_center(l1: &Locality, l2: &Locality) -> Result<BTreeSet<Elem>> {
    let (p1, p2) = (l1.pg(), l2.pg());
    let z1: Vec<(Elem, usize)> =
        p1.center().into_iter().filter(|&x| x != 0).map(|x| Ok((x, pg_order(p1, x)?))).collect::<Result<_>>()?;
    let z2: Vec<(Elem, usize)> =
        p2.center().into_iter().filter(|&x| x != 0).map(|x| Ok((x, pg_order(p2, x)?))).collect::<Result<_>>()?;
    let (a, b, order) = z1
        .iter()
        .flat_map(|&(a, oa)| z2.iter().filter(move |&&(_, ob)| ob == oa).map(move |&(b, _)| (a, b, oa)))
        .min_by_key(|&(a, b, o)| (is_p_power(o, l1.p()), o, a, b))
        .ok_or_else(|| Error::Contract("no central elements of equal order".into()))?;
    let n2 = p2.size();
    let (mut x, mut y) = (a, b);
    let mut z = BTreeSet::from([0]);
    for _ in 1..order {
        z.insert(x * n2 + y);
        x = p1.evaluate(&[x, a]).expect("powers of a central element");
        y = p2.evaluate(&[y, b]).expect("powers of a central element");
    }
    Ok(z)
}

fn iff(r: &mut CheckReport, law: IffLaw, what: &str) {
    r.check(law.holds, || format!("{what}: factors {} vs product {}", law.factors, law.product));
}

fn run_entry(ctx: &Ctx, lemma: &str, inst: &str) -> Result<CheckReport> {
    match lemma {
        "PartialGroupAxioms" => {
            let pg = ctx.partial_group(inst)?;
            Ok(ctx.word_check(pg.size(), |plan| pg.check_axioms(plan).to_check_report(&pg)))
        }
        "Ones" => {
            let pg = ctx.partial_group(inst)?;
            let mut r = ctx.word_check(pg.size(), |plan| pg.identity_insertion_check(plan).to_check_report(&pg));
            r.check(pg.is_subgroup(&BTreeSet::from([0])), || "{1} is not a subgroup".into());
            Ok(r)
        }
        "Centralizers" => Ok(ctx.locality(inst)?.pg().centralizer_equivalences_check()),
        "PartialSubgroupProjection" => partial_subgroup_projection(ctx, inst),
        "IsomorphismOfPartialGroups" => isomorphism_of_partial_groups(ctx, inst),
        "StructureTransport" => structure_transport(ctx, inst),
        "LocalityDefinition" => {
            let loc = ctx.locality(inst)?;
            Ok(loc.verify(&ctx.plan(loc.pg().size())).summary())
        }
        "LocalitiesProp" => {
            let loc = ctx.locality(inst)?;
            let mut r = CheckReport::exact();
            for p in loc.delta_sets() {
                r.check(loc.normalizer_group(&p).is_ok(), || {
                    format!("N_L({}) is not a subgroup", loc.pg().fmt_set(&p))
                });
            }
            r.absorb_labeled("(b)", loc.conjugation_closure_check());
            Ok(r)
        }
        "ModCentral1" => mod_central(ctx, inst),
        "LocalitiesProjectionsModCentral" => {
            let c = ctx.central(inst)?;
            let (prod, beta) = (&c.cp.product, &c.cp.beta);
            let mut r = CheckReport::exact();
            for h in partial_subgroups(prod)? {
                let image = beta.image_partial_subgroup(&h, &ctx.short_plan(h.len()))?;
                r.check(image.is_partial_subgroup, || format!("{}β is not a partial subgroup", prod.pg().fmt_set(&h)));
                r.absorb(image.domain_equality);
            }
            Ok(r)
        }
        "LocalitiesProjectionsPartialNormal" => projections_partial_normal(ctx, inst),
        "SublocalityUnderPartialHom" => sublocality_under_partial_hom(ctx, inst),
        "SublocalityUnderProjection" => {
            let c = ctx.central(inst)?;
            let cp = &c.cp;
            let mut r = CheckReport::exact();
            for (i, loc0) in cp.hats.iter().chain([&cp.product]).enumerate() {
                let plan = ctx.short_plan(loc0.pg().size());
                r.absorb_labeled(
                    &format!("L0 #{i}"),
                    projection_transport_checks(&cp.product, &cp.beta, &cp.quotient, loc0, &plan)?,
                );
            }
            Ok(r)
        }
        "DirectSubgroups" => {
            let p = ctx.product(inst)?;
            let h1 = partial_subgroups(&p.factors[0])?;
            let h2 = partial_subgroups(&p.factors[1])?;
            direct_subgroups_check(p.product.pg(), &h1, &h2)
        }
        "DirectProductsLocalitiesProjections" => {
            let p = ctx.product(inst)?;
            let pg = p.product.pg();
            let maps = inclusions_and_projections(pg)?;
            let mut r = CheckReport::exact();
            for i in 1..=2 {
                let c = maps.pi(i).classify(&ctx.short_plan(pg.size()));
                r.exhaustive &= c.exhaustive;
                r.check(c.class >= MapClass::Homomorphism, || format!("π{i} is only {:?}", c.class));
                let target = &p.factors[i - 1];
                for &q in p.product.s_group().subgroups() {
                    let img = maps.pi(i).image(&p.product.set_of(q));
                    let ok = target.pg().is_subgroup(&img) && is_p_power(img.len(), target.p());
                    r.check(ok, || format!("{}π{i} is not a p-subgroup", p.product.describe(q)));
                }
            }
            Ok(r)
        }
        "IotaRemark" => {
            let p = ctx.product(inst)?;
            let pg = p.product.pg();
            let (l1, l2) = (p.factors[0].pg(), p.factors[1].pg());
            let n2 = l2.size();
            let mut r = CheckReport::exact();
            for f in l1.elements() {
                for g in l2.elements() {
                    r.check(pg.evaluate(&[f * n2, g]) == Some(f * n2 + g), || {
                        format!("Π(({},1),(1,{})) ≠ ({0},{1})", l1.label(f), l2.label(g))
                    });
                }
            }
            Ok(r)
        }
        "DirectProductsLocalitiesInclusions" => {
            let p = ctx.product(inst)?;
            let mut r = inclusion_projection_check(&p.product, &ctx.short_plan(p.product.pg().size()))?;
            for i in 1..=2 {
                let subs = partial_subgroups(&p.factors[i - 1])?;
                r.absorb_labeled("(c)", inclusion_subgroups_check(p.product.pg(), i, &subs)?);
            }
            Ok(r)
        }
        "DirectProductPartialGroupIso" => {
            let p = ctx.product(inst)?;
            let copies = [
                canonical_projection_central(&p.factors[0], &BTreeSet::from([0]))?,
                canonical_projection_central(&p.factors[1], &BTreeSet::from([0]))?,
            ];
            let target = direct_product_pg(copies[0].0.pg(), copies[1].0.pg());
            let beta = pair_map(p.product.pg(), &target, &copies[0].1, &copies[1].1)?;
            let c = beta.classify(&ctx.plan(beta.source().size()));
            let mut r = CheckReport::new(c.exhaustive);
            r.check(c.class == MapClass::Isomorphism, || format!("the pair map is only {:?}", c.class));
            Ok(r)
        }
        "ConjugateDirectProduct" => {
            let p = ctx.product(inst)?;
            conjugate_direct_product_check(p.product.pg(), &p.factors[0].s(), &p.factors[1].s())
        }
        "DirectProductCentre" => direct_product_centre_check(ctx.product(inst)?.product.pg()),
        "DirectProductIsLocality" => {
            let p = ctx.product(inst)?;
            let mut r = p.product.verify(&ctx.plan(p.product.pg().size())).summary();
            let expected = direct_product_fusion(&p.factors[0].fusion()?, &p.factors[1].fusion()?)?;
            r.absorb_labeled("F_S(L) = F1 × F2", p.product.fusion()?.compare(&expected));
            Ok(r)
        }
        "DirectProductLiSublocality" => {
            let p = ctx.product(inst)?;
            let mut r = CheckReport::exact();
            for i in 0..2 {
                let plan = ctx.plan(p.hats[i].pg().size());
                r.absorb_labeled(&format!("L̂{}", i + 1), p.product.sublocality_check(&p.hats[i], &plan));
                r.absorb_labeled("fusion", hat_fusion_check(&p.product, &p.hats[i], &p.factors[i], i + 1)?);
            }
            Ok(r)
        }
        "GroupsDirectProductCharp" => {
            let p = if inst.ends_with("p=3") { 3 } else { 2 };
            Ok(groups_direct_product_charp(p))
        }
        "DirectProductsLocalitiesNormalizers" => {
            let p = ctx.product(inst)?;
            normalizers_check(&p.product, &p.factors[0], &p.factors[1])
        }
        "DirectProductObjectiveCharp" => {
            let p = ctx.product(inst)?;
            let mut r = CheckReport::exact();
            let factors =
                p.factors[0].is_objective_characteristic_p()? && p.factors[1].is_objective_characteristic_p()?;
            iff(&mut r, IffLaw::new(factors, p.product.is_objective_characteristic_p()?), "objective characteristic p");
            Ok(r)
        }
        "DirectProductLinkingLocality" => {
            let p = ctx.product(inst)?;
            let mut r = CheckReport::exact();
            let factors = p.factors[0].is_linking()? && p.factors[1].is_linking()?;
            iff(&mut r, IffLaw::new(factors, p.product.is_linking()?), "linking");
            Ok(r)
        }
        "ExternalCentralProductLemma" => external_central_product_lemma(ctx, inst),
        "EpiConjugates" | "CentralQuotient" => {
            let (f, q, alpha) = fusion_quotient(inst)?;
            if lemma == "EpiConjugates" {
                epi_conjugates_check(&alpha, &f, &q)
            } else {
                central_quotient_check(&alpha, &f, &q)
            }
        }
        "DirectProductFusionSystems" => {
            let (f1, f2) = fusion_pair(inst)?;
            let f = direct_product_fusion(&f1, &f2)?;
            let mut r = CheckReport::exact();
            for (part, report) in
                ["(a)", "(b)", "(c)", "(d)", "(e)", "(f)"].iter().zip(direct_product_fusion_laws(&f, &f1, &f2)?)
            {
                r.absorb_labeled(part, report);
            }
            Ok(r)
        }
        "CentralProductFusionSystems" => {
            let (f, f1, f2) = internal_fusion(ctx, inst)?;
            let mut r = CheckReport::exact();
            for (part, report) in ["(a)", "(b)", "(c)"].iter().zip(central_product_fusion_laws(&f, &f1, &f2)?) {
                r.absorb_labeled(part, report);
            }
            Ok(r)
        }
        "CentralProductProduct" => {
            let (l, l1, l2) = ctx.internal(inst)?;
            let pg = l.pg();
            let (m1, m2) = (members(l, l1)?, members(l, l2)?);
            let products: HashSet<Elem> =
                m1.iter().flat_map(|&f| m2.iter().filter_map(move |&g| pg.evaluate(&[f, g]))).collect();
            let mut r = CheckReport::exact();
            for h in pg.elements() {
                r.check(products.contains(&h), || format!("{} is not a product fg", pg.label(h)));
            }
            Ok(r)
        }
        "CentralProductCentralizer" => {
            let (l, l1, l2) = ctx.internal(inst)?;
            let mut r = internal_product_predicates(l, l1, l2)?.centralizes;
            let forward = ctx.recognized(inst)?;
            let backward = recognize_internal_product(l, l2, l1, &ctx.short_plan(l1.pg().size() * l2.pg().size()))?;
            r.check(forward.verdict == backward.verdict, || {
                format!("verdicts differ: {} vs {}", forward.verdict.as_str(), backward.verdict.as_str())
            });
            r.check(forward.verdict >= Verdict::Central, || "not an internal central product".into());
            Ok(r)
        }
        "InternalCentralProductsPartialGroups" => internal_partial_groups(ctx, inst),
        "DirectProductPartialGroupExternalInternal" => {
            let report = ctx.recognized(inst)?;
            let mut r = CheckReport::new(report.exhaustive);
            r.check(report.verdict == Verdict::Direct, || format!("verdict {}", report.verdict.as_str()));
            Ok(r)
        }
        "CentralProductExternalInternal" => central_external_internal(ctx, inst),
        "CentralProductTranslateProjection" => {
            let c = ctx.central(inst)?;
            let cp = &c.cp;
            let mut r = CheckReport::exact();
            let before = ctx_recognize(ctx, &cp.product, &cp.hats[0], &cp.hats[1])?;
            r.check(before.verdict >= Verdict::Central, || "L is not an internal central product".into());
            for hat in &cp.hats {
                let plan = ctx.short_plan(hat.pg().size());
                r.absorb(projection_transport_checks(&cp.product, &cp.beta, &cp.quotient, hat, &plan)?);
            }
            let after = ctx.recognized(inst)?;
            r.check(after.verdict >= Verdict::Central, || format!("images give verdict {}", after.verdict.as_str()));
            Ok(r)
        }
        "InternalCentralProductsLocalities" => internal_localities(ctx, inst),
        "InternalCentralProductFactorsPartialNormal" => {
            let (l, l1, l2) = ctx.internal(inst)?;
            let mut r = CheckReport::exact();
            for (i, sub) in [(1, l1), (2, l2)] {
                let set: BTreeSet<Elem> = members(l, sub)?.into_iter().collect();
                r.check(l.pg().is_partial_normal(&set), || format!("L{i} is not partial normal"));
            }
            Ok(r)
        }
        "InternalCentralProductLinkingLocality" => {
            let (l, l1, l2) = ctx.internal(inst)?;
            let preds = internal_product_predicates(l, l1, l2)?;
            let mut r = CheckReport::exact();
            iff(&mut r, preds.objective, "objective characteristic p");
            iff(&mut r, preds.linking, "linking");
            Ok(r)
        }
        "LastProposition" => last_proposition(ctx, inst),
        _ => Err(Error::Config(format!("unknown lemma id {lemma:?}"))),
    }
}

fn ctx_recognize(ctx: &Ctx, l: &Locality, l1: &Locality, l2: &Locality) -> Result<InternalProductReport> {
    recognize_internal_product(l, l1, l2, &ctx.short_plan(l1.pg().size() * l2.pg().size()))
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn members(l: &Locality, sub: &Locality) -> Result<Vec<Elem>> {
    l.members_of(sub).ok_or_else(|| Error::Contract(format!("{} is not inside {}", sub.pg().name(), l.pg().name())))
}

/// Partial subgroups used as test inputs: the subgroups of `S`, the
/// normalizers of members of `Δ`, and the carrier.
fn partial_subgroups(loc: &Locality) -> Result<Vec<BTreeSet<Elem>>> {
    let mut out: BTreeSet<BTreeSet<Elem>> = loc.s_group().subgroups().iter().map(|&q| loc.set_of(q)).collect();
    for p in loc.delta_sets() {
        out.insert(loc.pg().normalizer(&p));
    }
    out.insert(loc.pg().carrier());
    Ok(out.into_iter().collect())
}

fn partial_subgroup_projection(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let maps;
    let (source, beta): (&Locality, &PartialGroupMap) = if let Ok(c) = ctx.central(inst) {
        (&c.cp.product, &c.cp.beta)
    } else {
        let p = ctx.product(inst)?;
        maps = inclusions_and_projections(p.product.pg())?;
        (&p.product, maps.pi(1))
    };
    let plan = ctx.short_plan(source.pg().size());
    let class = beta.classify(&plan);
    let mut r = CheckReport::new(class.exhaustive);
    r.check(class.class >= MapClass::Homomorphism, || "β is not a homomorphism".into());
    for h in partial_subgroups(source)? {
        let image = beta.image_partial_subgroup(&h, &ctx.short_plan(h.len()))?;
        r.exhaustive &= image.domain_equality.exhaustive;
        if image.domain_equality.passed() {
            r.check(image.is_partial_subgroup, || format!("{}β is not a partial subgroup", source.pg().fmt_set(&h)));
            let sub = PartialGroup::sub(source.pg(), &h, "H")?;
            let target = PartialGroup::sub(beta.target(), &image.image, "Hβ")?;
            let local: Vec<Elem> =
                h.iter().map(|&x| image.image.iter().position(|&y| y == beta.apply(x)).expect("in image")).collect();
            let restricted = PartialGroupMap::new(sub, target, local)?;
            let c = restricted.classify(&ctx.short_plan(h.len()));
            r.exhaustive &= c.exhaustive;
            r.check(c.class >= MapClass::Projection, || {
                format!("β restricted to {} is only {:?}", source.pg().fmt_set(&h), c.class)
            });
        } else {
            r.tick();
        }
    }
    Ok(r)
}

fn isomorphism_of_partial_groups(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let loc = ctx.locality(inst)?;
    let (copy, beta) = canonical_projection_central(loc, &BTreeSet::from([0]))?;
    let plan = ctx.short_plan(loc.pg().size());
    let c = beta.classify(&plan);
    let mut r = CheckReport::new(c.exhaustive);
    r.check(c.class == MapClass::Isomorphism, || format!("β is only {:?}", c.class));
    let inverse = beta.inverse()?;
    let ci = inverse.classify(&plan);
    r.exhaustive &= ci.exhaustive;
    r.check(ci.class == MapClass::Isomorphism, || format!("β⁻¹ is only {:?}", ci.class));
    let mut candidates = partial_subgroups(loc)?;
    let extra: Vec<BTreeSet<Elem>> = candidates
        .iter()
        .filter(|h| h.len() > 2)
        .map(|h| {
            let mut k = h.clone();
            let last = *k.iter().next_back().expect("nonempty");
            k.remove(&last);
            k
        })
        .collect();
    candidates.extend(extra);
    for h in candidates {
        let image = beta.image(&h);
        let (a, b) = (loc.pg().is_partial_subgroup(&h), copy.pg().is_partial_subgroup(&image));
        r.check(a == b, || format!("{}: partial subgroup {a} but image {b}", loc.pg().fmt_set(&h)));
    }
    Ok(r)
}

fn structure_transport(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let loc = ctx.locality(inst)?;
    let (copy, beta) = canonical_projection_central(loc, &BTreeSet::from([0]))?;
    let plan = ctx.plan(loc.pg().size());
    let mut r = copy.verify(&plan).summary();
    let c = beta.classify(&ctx.short_plan(loc.pg().size()));
    r.exhaustive &= c.exhaustive;
    r.check(c.class == MapClass::Isomorphism, || format!("β is only {:?}", c.class));
    let image: BTreeSet<BTreeSet<Elem>> = loc.delta_sets().iter().map(|p| beta.image(p)).collect();
    let target: BTreeSet<BTreeSet<Elem>> = copy.delta_sets().into_iter().collect();
    r.check(image == target, || "Δβ differs from the transported Δ".into());
    r.check(beta.image(&loc.s()) == copy.s(), || "Sβ differs from the transported S".into());
    Ok(r)
}

fn mod_central(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let c = ctx.central(inst)?;
    let cp = &c.cp;
    let pg = cp.product.pg();
    let mut r = CheckReport::exact();
    let cosets = right_cosets(pg, &cp.z)?;
    for coset in &cosets.cosets {
        r.check(coset.len() == cp.z.len(), || format!("coset {} has {} elements", pg.fmt_set(coset), coset.len()));
    }
    r.check(cosets.maximal.iter().all(|&m| m), || "a coset is not maximal".into());
    r.check(cp.quotient.pg().size() * cp.z.len() == pg.size(), || "|L/Z| ≠ |L|/|Z|".into());
    let plan = ctx.short_plan(pg.size());
    let class = cp.beta.classify(&plan);
    r.exhaustive &= class.exhaustive;
    r.check(class.class >= MapClass::Projection, || format!("β is only {:?}", class.class));
    r.check(cp.beta.kernel().ok().as_ref() == Some(&cp.z), || "ker(β) ≠ Z".into());
    let q = cp.quotient.pg();
    let len = self_len(ctx, pg.size());
    let mut buf = Vec::with_capacity(len);
    for l in 0..=len {
        for_each_word_of_len(pg.size(), l, |w| {
            buf.clear();
            buf.extend(w.iter().map(|&x| cp.beta.apply(x)));
            let (a, b) = (pg.in_domain(w), q.in_domain(&buf));
            r.check(a == b, || format!("{}: in D {a}, image in D' {b}", pg.fmt_word(w)));
        });
    }
    if len < 3 {
        r.exhaustive = false;
    }
    Ok(r)
}

/// Longest word length, at most 3, whose words over `n` letters fit the
/// budget.
fn self_len(ctx: &Ctx, n: usize) -> usize {
    (1..=3usize).rev().find(|&l| (n as u64).checked_pow(l as u32).is_some_and(|t| t <= ctx.budget)).unwrap_or(1)
}

fn projections_partial_normal(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let mut r = CheckReport::exact();
    let maps;
    let mut cases: Vec<(&Locality, &PartialGroupMap)> = Vec::new();
    if let Ok(c) = ctx.central(inst) {
        cases.push((&c.cp.product, &c.cp.beta));
    } else {
        let p = ctx.product(inst)?;
        maps = inclusions_and_projections(p.product.pg())?;
        cases.push((&p.product, maps.pi(1)));
        cases.push((&p.product, maps.pi(2)));
    }
    for (loc, beta) in cases {
        let c = beta.classify(&ctx.short_plan(loc.pg().size()));
        r.exhaustive &= c.exhaustive;
        if c.class < MapClass::Projection {
            r.fail(format!("the map is only {:?}", c.class));
            continue;
        }
        for n in partial_normal_candidates(loc)? {
            let image = beta.image(&n);
            r.check(beta.target().is_partial_normal(&image), || {
                format!("{}β = {} is not partial normal", loc.pg().fmt_set(&n), beta.target().fmt_set(&image))
            });
        }
    }
    Ok(r)
}

/// Partial normal subgroups found among the center, its subgroups, the
/// factor images of a product, and the products of normal subgroups of the
/// factor groups.
fn partial_normal_candidates(loc: &Locality) -> Result<Vec<BTreeSet<Elem>>> {
    let pg = loc.pg();
    let mut out: BTreeSet<BTreeSet<Elem>> = BTreeSet::new();
    let center = pg.center();
    out.insert(center.clone());
    for &z in &center {
        out.insert(BTreeSet::from([0, z]));
    }
    out.insert(pg.carrier());
    if let Some((l1, l2)) = pg.factors() {
        out.insert(factor_image(pg, 1)?);
        out.insert(factor_image(pg, 2)?);
        if let (Some(g1), Some(g2)) = (l1.as_group(), l2.as_group()) {
            let n2 = l2.size();
            let normal = |g: &FiniteGroup| -> Vec<BTreeSet<Elem>> {
                g.all_subgroups().into_iter().filter(|h| g.is_normal_set(h)).collect()
            };
            for a in normal(g1) {
                for b in normal(g2) {
                    out.insert(a.iter().flat_map(|&x| b.iter().map(move |&y| x * n2 + y)).collect());
                }
            }
        }
    }
    Ok(out.into_iter().filter(|n| pg.is_partial_normal(n)).collect())
}

fn sublocality_under_partial_hom(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let p = ctx.product(inst)?;
    let maps = inclusions_and_projections(p.product.pg())?;
    let mut r = CheckReport::exact();
    for i in 1..=2 {
        let beta = maps.pi(i);
        let target = &p.factors[i - 1];
        for loc0 in [&p.product, &p.hats[i - 1]] {
            let set: BTreeSet<Elem> = members(&p.product, loc0)?.into_iter().collect();
            let image = beta.image_partial_subgroup(&set, &ctx.short_plan(set.len()))?;
            let s0 =
                beta.image(&loc0.s().iter().map(|&x| members(&p.product, loc0).map(|m| m[x])).collect::<Result<_>>()?);
            if !image.domain_equality.passed() || !s0.is_subset(&target.s()) {
                continue;
            }
            r.exhaustive &= image.domain_equality.exhaustive;
            r.check(image.is_partial_subgroup, || format!("L0π{i} is not a partial subgroup"));
            let l0b = image_sublocality(&p.product, beta, target, loc0)?;
            r.absorb_labeled(&format!("L0π{i}"), target.sublocality_check(&l0b, &ctx.plan(l0b.pg().size())));
        }
    }
    Ok(r)
}

fn groups_direct_product_charp(p: usize) -> CheckReport {
    let groups = catalog::all();
    let mut r = CheckReport::exact();
    for g1 in &groups {
        for g2 in &groups {
            let g = FiniteGroup::direct_product(g1, g2);
            let expected = g1.is_characteristic_p(p) && g2.is_characteristic_p(p);
            r.check(g.is_characteristic_p(p) == expected, || {
                format!("{}x{}: characteristic {p} mismatch", g1.name(), g2.name())
            });
            let n2 = g2.order();
            let o1 = g1.o_p(p).into_members();
            let o2 = g2.o_p(p).into_members();
            let product: BTreeSet<Elem> = o1.iter().flat_map(|&a| o2.iter().map(move |&b| a * n2 + b)).collect();
            r.check(g.o_p(p).into_members() == product, || {
                format!("{}x{}: O_{p} is not the product", g1.name(), g2.name())
            });
        }
    }
    r
}

fn external_central_product_lemma(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let c = ctx.central(inst)?;
    let cp = &c.cp;
    let [l1, l2] = &c.factors;
    let z_in_s = cp.z.is_subset(&cp.product.s());
    let mut r = CheckReport::exact();
    let objective = l1.is_objective_characteristic_p()? && l2.is_objective_characteristic_p()?;
    iff(&mut r, IffLaw::new(objective, z_in_s && cp.quotient.is_objective_characteristic_p()?), "(a)");
    let linking = l1.is_linking()? && l2.is_linking()?;
    iff(&mut r, IffLaw::new(linking, z_in_s && cp.quotient.is_linking()?), "(b)");
    if z_in_s {
        let fusion = central_product_fusion_check(cp, l1, l2)?;
        r.check(fusion.z_central, || "(c) Z is not central in F1 × F2".into());
        r.absorb_labeled("(c)", fusion.equality.clone());
        r.check(fusion.internal.as_ref().is_some_and(|i| i.verdict), || {
            "(c) (F1 × F2)/Z is not a central product".into()
        });
    }
    Ok(r)
}

fn fusion_pair(inst: &str) -> Result<(FusionSystem, FusionSystem)> {
    let parse = |s: &str| -> Result<FusionSystem> {
        let inner = s.trim_start_matches("F(").trim_end_matches(')');
        let (name, p) = match inner.split_once(';') {
            Some((n, p)) => (n, p.parse().map_err(|_| Error::Config(format!("bad prime in {s:?}")))?),
            None => (inner, 2),
        };
        let g = catalog::by_name(name).ok_or_else(|| Error::Config(format!("unknown group {name:?}")))?;
        FusionSystem::from_group(&g, p)
    };
    let (a, b) = inst.split_once('x').ok_or_else(|| Error::Config(format!("bad fusion pair {inst:?}")))?;
    Ok((parse(a)?, parse(b)?))
}

/// `F = F1 × F2`, `F/Z` for `Z` the diagonal of the centers, and `S → S/Z`.
fn fusion_quotient(inst: &str) -> Result<(FusionSystem, FusionSystem, GroupHom)> {
    let (f1, f2) = fusion_pair(inst.trim_end_matches("/Z"))?;
    let f = direct_product_fusion(&f1, &f2)?;
    let m2 = f2.s().order();
    let z1 = bits(f1.center()).find(|&x| x != 0 && f1.s().group().element_order(x) == 2);
    let z2 = bits(f2.center()).find(|&x| x != 0 && f2.s().group().element_order(x) == 2);
    let (Some(a), Some(b)) = (z1, z2) else { return Err(Error::Contract("factor centers have no involution".into())) };
    let z: Mask = f.s().generate(&[a * m2 + b]);
    let (q, alpha) = quotient_fusion(&f, z)?;
    Ok((f, q, alpha))
}

/// `F_S(L)` with the fusion systems of the two factors of an internal
/// product case, as subsystems.
fn internal_fusion(ctx: &Ctx, inst: &str) -> Result<(FusionSystem, FusionSystem, FusionSystem)> {
    let (l, l1, l2) = ctx.internal(inst)?;
    Ok((l.fusion()?, l.fusion_of_sublocality(l1)?, l.fusion_of_sublocality(l2)?))
}

fn internal_partial_groups(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let rep = ctx.recognized(inst)?;
    let mut r = CheckReport::new(rep.exhaustive);
    let defined = rep.phi_well_defined.passed();
    let c1c2 = defined && rep.c1_holds.passed() && rep.c2_holds.passed();
    let projection = defined && rep.classification >= MapClass::Projection;
    r.check(c1c2 == projection, || format!("(a) C1∧C2 {c1c2} but φ projection {projection}"));
    if projection {
        r.absorb_labeled("(b)", rep.kernel_law.clone());
    }
    let direct = c1c2 && rep.d_holds.passed();
    let iso = defined && rep.classification == MapClass::Isomorphism;
    r.check(direct == iso, || format!("(c) internal direct {direct} but φ isomorphism {iso}"));
    if defined {
        let (l, l1, l2) = ctx.internal(inst)?;
        let phi = rep.phi.as_ref().ok_or_else(|| Error::Contract("φ missing".into()))?;
        let ext = Arc::clone(phi.source());
        for (i, sub) in [(1, l1), (2, l2)] {
            let hat = factor_image(&ext, i)?;
            let expected: BTreeSet<Elem> = members(l, sub)?.into_iter().collect();
            r.check(phi.image(&hat) == expected, || format!("(d) L̂{i}φ ≠ L{i}"));
            let hat_pg = PartialGroup::sub(&ext, &hat, "hat")?;
            let target = PartialGroup::sub(l.pg(), &expected, "Li")?;
            let ranks: Vec<Elem> = expected.iter().copied().collect();
            let local: Vec<Elem> =
                hat.iter().map(|&x| ranks.binary_search(&phi.apply(x)).expect("image inside Li")).collect();
            let induced = PartialGroupMap::new(hat_pg, target, local)?;
            let c = induced.classify(&ctx.short_plan(hat.len()));
            r.exhaustive &= c.exhaustive;
            r.check(c.class == MapClass::Isomorphism, || format!("(d) L̂{i} → L{i} is only {:?}", c.class));
        }
    }
    Ok(r)
}

fn central_external_internal(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let mut r = CheckReport::exact();
    if let Ok(p) = ctx.product(inst) {
        for hat in &p.hats {
            r.absorb_labeled("(a) sublocality", p.product.sublocality_check(hat, &ctx.plan(hat.pg().size())));
        }
        let rep = ctx.recognized(inst)?;
        r.exhaustive &= rep.exhaustive;
        r.check(rep.verdict == Verdict::Direct, || format!("(a) verdict {}", rep.verdict.as_str()));
    } else {
        let c = ctx.central(inst)?;
        let cp = &c.cp;
        for (hat, image) in cp.hats.iter().zip(&cp.images) {
            let plan = ctx.short_plan(hat.pg().size());
            r.absorb_labeled(
                "(b) transport",
                projection_transport_checks(&cp.product, &cp.beta, &cp.quotient, hat, &plan)?,
            );
            r.absorb_labeled("(b) sublocality", cp.quotient.sublocality_check(image, &ctx.plan(image.pg().size())));
        }
        let rep = ctx.recognized(inst)?;
        r.exhaustive &= rep.exhaustive;
        r.check(rep.verdict >= Verdict::Central, || format!("(b) verdict {}", rep.verdict.as_str()));
    }
    Ok(r)
}

fn internal_localities(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let rep = ctx.recognized(inst)?;
    let (l, l1, l2) = ctx.internal(inst)?;
    let mut r = CheckReport::new(rep.exhaustive);
    let defined = rep.phi_well_defined.passed();
    let shape = rep.s_product && rep.delta_shape.passed();
    let internal = defined && rep.c1_holds.passed() && rep.c2_holds.passed() && shape;
    let projection = defined && rep.classification >= MapClass::Projection && shape;
    r.check(internal == projection, || format!("(a) internal central {internal} but φ projection {projection}"));
    if projection && rep.kernel_law.passed() {
        let external = external_central_product_locality(l1, l2, &rep.kernel);
        r.check(external.is_ok(), || "(b) (L1 × L2)/ker(φ) is not an external central product".into());
        r.absorb_labeled("(b)", induced_isomorphism_check(l, l1, l2, rep, &ctx.short_plan(l.pg().size()))?);
        let iso = rep.classification == MapClass::Isomorphism;
        let trivial_kernel = rep.kernel.len() == 1;
        let direct = rep.verdict == Verdict::Direct;
        let trivial_meet = rep.intersection.len() == 1;
        r.check(iso == trivial_kernel && iso == direct && iso == trivial_meet, || {
            format!("(c) iso {iso}, trivial kernel {trivial_kernel}, direct {direct}, trivial meet {trivial_meet}")
        });
    }
    Ok(r)
}

fn last_proposition(ctx: &Ctx, inst: &str) -> Result<CheckReport> {
    let (f, f1, f2) = internal_fusion(ctx, inst)?;
    let choices = |fi: &FusionSystem| -> Vec<(&'static str, Vec<Mask>)> {
        vec![("cr-closure", fi.overgroup_closure(&fi.centric_radicals())), ("s", fi.subcentrics())]
    };
    let mut r = CheckReport::exact();
    for (n1, d1) in choices(&f1) {
        for (n2, d2) in choices(&f2) {
            let rep = last_proposition_a_check(&f, &f1, &f2, &d1, &d2)?;
            r.check(rep.closed, || format!("Δ({n1}, {n2}) is not closed"));
            r.check(rep.contains_centric_radicals, || format!("F^cr ⊄ Δ({n1}, {n2})"));
            r.check(rep.within_subcentrics, || format!("Δ({n1}, {n2}) ⊄ F^s"));
        }
    }
    Ok(r)
}

fn run_corrupted(ctx: &Ctx, lemma: &str) -> Result<CheckReport> {
    match lemma {
        "PartialGroupAxioms" => {
            let n = 4;
            let mut table: Vec<Elem> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
            table[n + 2] = 1;
            table[2 * n + 1] = 1;
            let pg = PartialGroup::from_raw_table("broken", n, table)?;
            Ok(ctx.word_check(n, |plan| pg.check_axioms(plan).to_check_report(&pg)))
        }
        "LocalityDefinition" => {
            let loc = ctx.base("L(S4)")?;
            let mut delta = loc.delta_sets();
            let victim = delta
                .iter()
                .position(|p| p.len() == 2 && !loc.pg().center().is_superset(p))
                .expect("a subgroup of order 2");
            delta.remove(victim);
            let broken = Locality::new(Arc::clone(loc.pg()), 2, &loc.s(), &delta)?;
            Ok(broken.verify(&ctx.plan(loc.pg().size())).summary())
        }
        "ModCentral1" => {
            let p = ctx.product("L(D8)xL(D8)")?;
            let f1 = p.factors[0].pg();
            let center = f1.center();
            let reflection =
                f1.elements().find(|&x| x != 0 && f1.inv(x) == x && !center.contains(&x)).expect("a reflection");
            canonical_projection_central(&p.product, &BTreeSet::from([0, reflection * p.factors[1].pg().size()]))?;
            Ok(CheckReport::exact())
        }
        "DirectProductIsLocality" => {
            let p = ctx.product("L(S4)xL(S3)")?;
            let f1 = p.factors[0].fusion()?;
            let inner = FusionSystem::generate(Arc::clone(f1.s()), &[], "F_S(S)")?;
            let wrong = direct_product_fusion(&inner, &p.factors[1].fusion()?)?;
            Ok(p.product.fusion()?.compare(&wrong))
        }
        _ => Err(Error::Config(format!("no corrupted fixture for {lemma:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(lemma: &str, instance: &str, status: Status) -> LemmaRecord {
        LemmaRecord {
            lemma: lemma.into(),
            instance: instance.into(),
            status,
            exhaustive: true,
            checked: 1,
            witnesses: if status == Status::Fail { vec!["w".into()] } else { vec![] },
            elapsed: Duration::ZERO,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(render(&[], Format::Machine).lines().count(), 1);
        assert_eq!(render(&[], Format::Table).lines().count(), 1);
    }

    #[test]
    fn table_lists_failures_first() {
        let recs = vec![record("A", "x", Status::Pass), record("B", "y", Status::Fail)];
        let table = render(&recs, Format::Table);
        let rows: Vec<&str> = table.lines().skip(1).collect();
        assert!(rows[0].starts_with("fail"));
        let machine = render(&recs, Format::Machine);
        assert!(machine.lines().nth(1).unwrap().starts_with("A\tx\tpass"));
    }

    #[test]
    fn unknown_ids_are_config_errors() {
        let cfg = SuiteConfig { only: vec!["NoSuchLemma".into()], ..Default::default() };
        assert!(matches!(run_suite(&cfg), Err(Error::Config(_))));
        let cfg = SuiteConfig { instances: vec!["nowhere".into()], ..Default::default() };
        assert!(matches!(run_suite(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn only_selects_a_single_lemma() {
        let cfg = SuiteConfig {
            only: vec!["DirectProductCentre".into()],
            instances: vec!["L(S3)xL(S3)".into()],
            ..Default::default()
        };
        let recs = run_suite(&cfg).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].status, Status::Pass);
    }

    #[test]
    fn diagonal_center_of_d8_pair_has_order_two() {
        let d8 = group_locality(&catalog::d8(), 2).unwrap();
        let z = diagonal_center(&d8, &d8).unwrap();
        assert_eq!(z.len(), 2);
        let c6 = group_locality(&catalog::cyclic(6), 2).unwrap();
        assert_eq!(diagonal_center(&c6, &c6).unwrap().len(), 3);
    }
}
