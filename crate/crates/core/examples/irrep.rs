// Build irreducible so(n)-modules from a highest weight and compare their
// dimensions with the Weyl formula.

use conformalk::so_rep::{build_irrep, weyl_dim, Weight};

pub fn run_example() -> conformalk::Result<()> {
    for (n, mu) in [(3, "0;1/2"), (3, "0;2"), (4, "0;1,0"), (4, "0;1,-1"), (5, "0;1/2,1/2"), (6, "0;1,1,0")] {
        let w: Weight = mu.parse()?;
        let rep = build_irrep(n, &w)?;
        let wd = weyl_dim(n, &w)?;
        let ok = rep.dim as u64 == wd && rep.bracket_fidelity_failures().is_empty() && rep.borel_failures().is_empty();
        println!("so({n}) {w}: dim {} (Weyl {wd}) {}", rep.dim, if ok { "ok" } else { "FAIL" });
        if !ok {
            return Err(conformalk::Error::Unsupported(format!("irrep check failed for {w}")));
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
