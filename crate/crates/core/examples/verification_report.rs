//! Running a verification suite from code and reading its report.
use extcalc::cli::{run_suite, Suite, SuiteConfig};

fn main() -> extcalc::Result<()> {
    let cfg = SuiteConfig { seed: 7, cases: 5, sig: Some("1,3".parse()?), ..SuiteConfig::default() };
    let report = run_suite(Suite::Stokes, &cfg)?;
    print!("{}", report.to_table());
    println!("all pass: {}", report.all_pass());
    Ok(())
}
