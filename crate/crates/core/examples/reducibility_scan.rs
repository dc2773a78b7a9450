// Reducibility of Ind(F) along a line of weights (μ_0; 1, 0) for K_4.

use conformalk::singular::scan;
use conformalk::so_rep::Weight;

pub fn run_example() -> conformalk::Result<()> {
    let ws: Vec<Weight> = (-2..=4).map(|m| Weight::from_ints(m, &[1, 0])).collect();
    for r in scan(4, &ws, 1)? {
        println!("{:<14} {:<12} {:?}", r.weight, if r.reducible { "reducible" } else { "irreducible" }, r.families);
        if !r.matches {
            return Err(conformalk::Error::Unsupported(format!("scan mismatch at {}", r.weight)));
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
