//! The `localities` binary: outputs and exit codes.

use std::process::{Command, Output};

use localities::recipe::Recipe;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localities")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_catalog_locality_passes() {
    let o = run(&["verify", "--input", "S3", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("check\tstatus\tcoverage\tchecked\twitnesses\n"));
    assert_eq!(text.lines().filter(|l| l.contains("\tpass\texhaustive\t")).count(), 4);
}

#[test]
fn verify_recipe_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s4.json");
    let v4 = localities::catalog::s4().o_p(2).into_members();
    let gens: Vec<usize> = v4.into_iter().filter(|&x| x != 0).collect();
    std::fs::write(&path, format!(r#"{{"group": "S4", "p": 2, "delta_generators": [{gens:?}]}}"#)).unwrap();
    let o = run(&["verify", "--input", path.to_str().unwrap(), "--max-word-len", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("|L| = 24"));
}

#[test]
fn central_product_round_trips_through_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cp.json");
    let d8 = localities::catalog::d8();
    let z = d8.center().into_members().into_iter().find(|&x| x != 0).unwrap();
    let center = format!("[[{z},{z}]]");
    let o = run(&[
        "product",
        "central",
        "--lhs",
        "D8",
        "--rhs",
        "D8",
        "--center",
        &center,
        "--out",
        out.to_str().unwrap(),
        "--max-word-len",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("|L| = 32"));
    let recipe = Recipe::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(matches!(recipe, Recipe::Central { .. }));

    let o = run(&[
        "recognize",
        "--ambient",
        out.to_str().unwrap(),
        "--sub1",
        "factor1",
        "--sub2",
        "factor2",
        "--format",
        "machine",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("central\tProjection\t2\t2\t"), "{text}");
}

#[test]
fn direct_product_is_recognized_as_direct() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prod.json");
    let o = run(&["product", "direct", "--lhs", "S3", "--rhs", "C2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["recognize", "--ambient", out.to_str().unwrap(), "--sub1", "factor1", "--sub2", "factor2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: direct"));
}

#[test]
fn fusion_machine_output_has_one_line_per_subgroup() {
    let o = run(&["fusion", "--input", "S4", "--classify", "cr,s", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("subgroup\torder\tcr\ts"));
    assert_eq!(lines.count(), 10);
}

#[test]
fn lemma_suite_only_selects_one_lemma() {
    let o = run(&["lemma-suite", "--only", "DirectProductCentre", "--instance", "L(D8)xL(D8)", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("DirectProductCentre\tL(D8)xL(D8)\tpass\texhaustive\t"));
}

#[test]
fn corrupted_fixtures_fail_with_exit_one() {
    let o = run(&["lemma-suite", "--corrupted", "--only", "PartialGroupAxioms", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\tfail\t"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["lemma-suite", "--only", "NoSuchLemma"][..],
        &["verify", "--input", "does-not-exist"],
        &["fusion", "--input", "S4", "--classify", "xyz"],
        &["product", "central", "--lhs", "D8", "--rhs", "D8", "--center", "not json"],
        &["verify", "--input", "S3", "--budget", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
