// Solve for the non-trivial singular vectors of a few induced modules and
// re-check each one by direct annihilation.

use conformalk::induced::Induced;
use conformalk::singular::{family_b_spotcheck, oracle_failures, solve_induced, Family};
use conformalk::so_rep::build_irrep;

pub fn run_example() -> conformalk::Result<()> {
    for (n, mu, dmax) in [(4, "-1;1,0", 2), (4, "3;1,0", 2), (3, "3/2;1/2", 2), (4, "1;1,0", 2)] {
        let ind = Induced::new(build_irrep(n, &mu.parse()?)?);
        let r = solve_induced(&ind, dmax)?;
        println!("n = {n}, mu = ({mu}): {} vector(s), expected {:?}", r.vectors.len(), r.expected);
        for v in &r.vectors {
            let bad = oracle_failures(&ind, &v.vector, 2 * dmax as i64 + n as i64)?;
            println!("  [{}] {}  (annihilation re-check: {})", v.family, v.vector.display(&ind.rep), if bad.is_empty() { "ok" } else { "FAIL" });
            if v.family == Family::B {
                let s = family_b_spotcheck(&ind.rep, &v.vector);
                println!("  relation spot-check: {}/{} hold", s.relations.iter().filter(|r| r.passed).count(), s.relations.len());
            }
        }
        if !r.matches_expectation() {
            return Err(conformalk::Error::Unsupported(format!("unexpected singular space at ({mu})")));
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
