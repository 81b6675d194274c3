//! Command-line front end. [`run`] returns the process exit code: 0 when
//! every check passed, 1 when one failed, 2 on a configuration error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::locality::Locality;
use crate::products::recognize_internal_product;
use crate::recipe::{Built, CentralPair, Pair, Recipe};
use crate::report::CheckReport;
use crate::suite::{all_passed, render, run_suite, Fixtures, Format, SuiteConfig};
use crate::words::{ScanPlan, DEFAULT_BUDGET, DEFAULT_MAX_LEN, DEFAULT_SEED};
use crate::Elem;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "localities", version, about = "Finite partial groups, localities and fusion systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    Table,
    Machine,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Table => Format::Table,
            OutputFormat::Machine => Format::Machine,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
    pub max_word_len: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl ScanArgs {
    fn plan(&self, n: usize) -> Result<ScanPlan> {
        if self.max_word_len == 0 || self.budget == 0 {
            return Err(Error::Config("--max-word-len and --budget must be positive".into()));
        }
        Ok(ScanPlan::new(n, self.max_word_len, self.budget, self.seed))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the locality axioms of a recipe.
    Verify {
        /// Recipe file, or a catalog group as `NAME` or `NAME:p`.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Build a direct or central product of two localities.
    Product {
        #[command(subcommand)]
        kind: ProductKind,
    },
    /// Decide whether a locality is the internal central or direct product
    /// of two sublocalities.
    Recognize {
        #[arg(long)]
        ambient: String,
        /// `factor1`, `factor2`, or a JSON list of element ids.
        #[arg(long)]
        sub1: String,
        #[arg(long)]
        sub2: String,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Classify the subgroups of `S` in the fusion system of a locality.
    Fusion {
        #[arg(long)]
        input: String,
        /// Comma-separated subset of `cr,s,c,f`.
        #[arg(long, default_value = "cr,s,c,f")]
        classify: String,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Run the lemma suite.
    LemmaSuite {
        #[command(flatten)]
        scan: ScanArgs,
        /// Comma-separated lemma ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Comma-separated instance ids.
        #[arg(long, value_delimiter = ',')]
        instance: Vec<String>,
        /// Run the negative-control fixtures instead.
        #[arg(long)]
        corrupted: bool,
        /// List lemma and instance ids and exit.
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProductKind {
    Direct {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    Central {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Generators of `Z` as JSON pairs `[[i, j], ...]`.
        #[arg(long)]
        center: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        scan: ScanArgs,
    },
}

/// Text to print and the exit code.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// Parses arguments, runs the command and prints its output.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Input(_) | Error::Io(_) | Error::Json(_) | Error::Unsupported(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify { input, scan, format } => {
            let built = Recipe::load(input)?.build()?;
            let loc = built.locality();
            let report = loc.verify(&scan.plan(loc.pg().size())?);
            let rows = [("structure", &report.structure), ("L1", &report.l1), ("L2", &report.l2), ("L3", &report.l3)];
            Ok(Outcome { text: check_table(&describe(loc), &rows, *format), passed: report.passed() })
        }
        Command::Product { kind } => product(kind),
        Command::Recognize { ambient, sub1, sub2, scan, format } => {
            let built = Recipe::load(ambient)?.build()?;
            let loc = built.locality();
            let (mut slot1, mut slot2) = (None, None);
            let l1 = sub_locality(&built, sub1, 1, &mut slot1)?;
            let l2 = sub_locality(&built, sub2, 2, &mut slot2)?;
            let n = l1.pg().size() * l2.pg().size();
            let rep = recognize_internal_product(loc, l1, l2, &scan.plan(n)?)?;
            let text = match format {
                OutputFormat::Machine => {
                    let mut t = String::from("verdict\tclassification\tkernel\tintersection\texhaustive\n");
                    let _ = writeln!(
                        t,
                        "{}\t{:?}\t{}\t{}\t{}",
                        rep.verdict.as_str(),
                        rep.classification,
                        rep.kernel.len(),
                        rep.intersection.len(),
                        rep.exhaustive
                    );
                    t
                }
                OutputFormat::Table => {
                    let rows = [
                        ("phi defined", &rep.phi_well_defined),
                        ("C1", &rep.c1_holds),
                        ("C2", &rep.c2_holds),
                        ("D", &rep.d_holds),
                        ("delta shape", &rep.delta_shape),
                        ("kernel law", &rep.kernel_law),
                    ];
                    let mut t = check_table_with(&describe(loc), &rows, OutputFormat::Table, ("holds", "no"));
                    let _ = writeln!(
                        t,
                        "S = S1S2: {}\nphi: {:?}\n|ker phi| = {}, |L1 ∩ L2| = {}\nverdict: {}",
                        rep.s_product,
                        rep.classification,
                        rep.kernel.len(),
                        rep.intersection.len(),
                        rep.verdict.as_str()
                    );
                    t
                }
            };
            Ok(Outcome { text, passed: rep.verdict != crate::products::Verdict::None })
        }
        Command::Fusion { input, classify, format } => fusion(input, classify, *format),
        Command::LemmaSuite { scan, only, instance, corrupted, list, format } => {
            if *list {
                let mut text = String::from("lemmas:\n");
                for id in crate::suite::lemma_ids() {
                    let _ = writeln!(text, "  {id}");
                }
                text.push_str("instances:\n");
                for id in crate::suite::instance_ids() {
                    let _ = writeln!(text, "  {id}");
                }
                return Ok(Outcome { text, passed: true });
            }
            let cfg = SuiteConfig {
                max_word_len: scan.max_word_len,
                budget: scan.budget,
                seed: scan.seed,
                only: only.clone(),
                instances: instance.clone(),
                fixtures: if *corrupted { Fixtures::Corrupted } else { Fixtures::Standard },
            };
            let records = run_suite(&cfg)?;
            Ok(Outcome { text: render(&records, (*format).into()), passed: all_passed(&records) })
        }
    }
}

fn describe(loc: &Locality) -> String {
    format!(
        "{}: |L| = {}, p = {}, |S| = {}, |Δ| = {}\n",
        loc.pg().name(),
        loc.pg().size(),
        loc.p(),
        loc.s_ids().len(),
        loc.delta().len()
    )
}

fn check_table(header: &str, rows: &[(&str, &CheckReport)], format: OutputFormat) -> String {
    check_table_with(header, rows, format, ("pass", "FAIL"))
}

fn check_table_with(header: &str, rows: &[(&str, &CheckReport)], format: OutputFormat, words: (&str, &str)) -> String {
    let mut t = String::new();
    match format {
        OutputFormat::Machine => {
            t.push_str("check\tstatus\tcoverage\tchecked\twitnesses\n");
            for (name, r) in rows {
                let _ = writeln!(
                    t,
                    "{name}\t{}\t{}\t{}\t{}",
                    if r.passed() { "pass" } else { "fail" },
                    if r.exhaustive { "exhaustive" } else { "sampled" },
                    r.checked,
                    r.failures.join(" | ").replace(['\t', '\n'], " ")
                );
            }
        }
        OutputFormat::Table => {
            t.push_str(header);
            for (name, r) in rows {
                let _ = writeln!(
                    t,
                    "  {name:<12} {:<5} {:>10} checked  {}",
                    if r.passed() { words.0 } else { words.1 },
                    r.checked,
                    if r.exhaustive { "exhaustive" } else { "sampled" }
                );
                for w in r.failures.iter().take(5) {
                    let _ = writeln!(t, "      {w}");
                }
            }
        }
    }
    t
}

fn product(kind: &ProductKind) -> Result<Outcome> {
    let (recipe, out, scan) = match kind {
        ProductKind::Direct { lhs, rhs, out, scan } => (
            Recipe::Direct { direct: Pair { lhs: Box::new(Recipe::load(lhs)?), rhs: Box::new(Recipe::load(rhs)?) } },
            out,
            scan,
        ),
        ProductKind::Central { lhs, rhs, center, out, scan } => {
            let center: Vec<[Elem; 2]> = serde_json::from_str(center)
                .map_err(|e| Error::Config(format!("--center must be a JSON list of pairs: {e}")))?;
            let central = CentralPair { lhs: Box::new(Recipe::load(lhs)?), rhs: Box::new(Recipe::load(rhs)?), center };
            (Recipe::Central { central }, out, scan)
        }
    };
    let built = recipe.build()?;
    let loc = built.locality();
    let report = loc.verify(&scan.plan(loc.pg().size())?);
    let mut text = describe(loc);
    let _ = writeln!(text, "locality axioms: {}", if report.passed() { "pass" } else { "FAIL" });
    for w in report.summary().failures.iter().take(5) {
        let _ = writeln!(text, "  {w}");
    }
    if let Some(path) = out {
        std::fs::write(path, recipe.to_json() + "\n")?;
        let _ = writeln!(text, "recipe written to {}", path.display());
    }
    Ok(Outcome { text, passed: report.passed() })
}

/// `factor1`/`factor2` name the factors of a product recipe; otherwise a
/// JSON list of element ids of the ambient locality, with `S0 = S ∩ L0` and
/// `Δ0 = {P ∩ S0 : P ∈ Δ}`.
fn sub_locality<'a>(built: &'a Built, arg: &str, i: usize, slot: &'a mut Option<Locality>) -> Result<&'a Locality> {
    let loc = built.locality();
    if let Some(k) = arg.strip_prefix("factor") {
        let k: usize = k.parse().map_err(|_| Error::Config(format!("bad factor name `{arg}`")))?;
        let sub = built
            .factor_sublocality(k)
            .ok_or_else(|| Error::Config(format!("`{arg}` needs a direct or central product recipe")))?;
        return Ok(sub);
    }
    let text = match std::path::Path::new(arg).exists() {
        true => std::fs::read_to_string(arg)?,
        false => arg.to_string(),
    };
    let members: BTreeSet<Elem> = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("--sub{i} must be factor1, factor2 or a JSON id list: {e}")))?;
    if members.iter().any(|&x| x >= loc.pg().size()) {
        return Err(Error::Config(format!("--sub{i} names ids outside the ambient locality")));
    }
    let s = loc.s();
    let s0: BTreeSet<Elem> = s.intersection(&members).copied().collect();
    let delta0: BTreeSet<BTreeSet<Elem>> = loc.delta_sets().into_iter().map(|p| &p & &s0).collect();
    let delta0: Vec<BTreeSet<Elem>> = delta0.into_iter().collect();
    Ok(slot.insert(loc.sublocality(&members, &s0, &delta0, format!("L{i}"))?))
}

fn fusion(input: &str, classify: &str, format: OutputFormat) -> Result<Outcome> {
    let mut columns = Vec::new();
    for c in classify.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        match c {
            "cr" | "s" | "c" | "f" => columns.push(c),
            _ => return Err(Error::Config(format!("unknown class `{c}`; expected cr, s, c or f"))),
        }
    }
    let built = Recipe::load(input)?.build()?;
    let f = built.locality().fusion()?;
    let mut text = String::new();
    let header: Vec<&str> = ["subgroup", "order"].into_iter().chain(columns.iter().copied()).collect();
    match format {
        OutputFormat::Machine => {
            text.push_str(&header.join("\t"));
            text.push('\n');
        }
        OutputFormat::Table => {
            let _ = writeln!(text, "{} on S of order {}, {} morphisms", f.name(), f.s().order(), f.morphism_count());
        }
    }
    for p in f.subgroups() {
        let c = f.classify_subgroup(p);
        let flags: Vec<bool> = columns
            .iter()
            .map(|&col| match col {
                "cr" => c.centric_radical,
                "s" => c.subcentric,
                "c" => c.centric,
                _ => c.fully_normalized,
            })
            .collect();
        let name = format!("{{{}}}", c.subgroup.join(", "));
        match format {
            OutputFormat::Machine => {
                let cells: Vec<String> = flags.iter().map(|&b| u8::from(b).to_string()).collect();
                let _ = writeln!(text, "{name}\t{}\t{}", c.order, cells.join("\t"));
            }
            OutputFormat::Table => {
                let marks: Vec<String> = columns
                    .iter()
                    .zip(&flags)
                    .map(|(col, &b)| format!("{col}={}", if b { "y" } else { "-" }))
                    .collect();
                let _ = writeln!(text, "  {:>3}  {:<40} {}", c.order, name, marks.join(" "));
            }
        }
    }
    Ok(Outcome { text, passed: true })
}
