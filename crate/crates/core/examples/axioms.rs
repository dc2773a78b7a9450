// Check the conformal-algebra axioms of `K_n` and the consistency of the
// three descriptions of the annihilation algebra.

use conformalk::kn_algebra::check_axioms;

pub fn run_example() -> conformalk::Result<()> {
    for n in 0..=3 {
        let report = check_axioms(n, 2);
        println!("n = {n}: {}", if report.passed { "all checks pass" } else { "FAILED" });
        for c in &report.checks {
            println!("  {:<26} {:>6} cases  {}", c.name, c.cases, if c.passed { "ok" } else { "FAIL" });
        }
        if !report.passed {
            return Err(conformalk::Error::Unsupported(format!("axioms fail for n = {n}: {:?}", report.counterexample)));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
