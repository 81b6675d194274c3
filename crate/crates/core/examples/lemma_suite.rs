//! Runs part of the lemma suite and prints the machine report.

use localities::suite::{all_passed, render, run_suite, Format, SuiteConfig};

fn main() -> localities::Result<()> {
    let cfg = SuiteConfig {
        only: vec!["DirectProductCentre".into(), "ModCentral1".into(), "LastProposition".into()],
        ..SuiteConfig::default()
    };
    let records = run_suite(&cfg)?;
    print!("{}", render(&records, Format::Machine));
    println!("all passed: {}", all_passed(&records));
    Ok(())
}
