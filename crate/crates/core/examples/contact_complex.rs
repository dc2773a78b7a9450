// The contact quotient complex Ω/I on both sides for K_3: exactness defects,
// the homotopy formula, and the weights of the Γ modules.

use conformalk::contact_forms::{gamma_weights, graded_character_compare, homotopy_check, quotient_complex, Side};

pub fn run_example() -> conformalk::Result<()> {
    let n = 3;
    let h = homotopy_check(n, 2, 2);
    println!("Kd + dK = Id - eps on {} monomials: {} failures", h.monomials, h.failures.len());
    for side in [Side::Plus, Side::Minus] {
        let cx = quotient_complex(n, side, n, 3)?;
        println!("{side:?}: d(I) in I = {}, d^2 = 0 = {}, defects by level {:?}", cx.ideal_closed, cx.dd_zero, cx.defect_by_level());
        for k in 0..=2 {
            let g = gamma_weights(n, k, side)?;
            println!("  Gamma^{k}: {} (expected {})", g.weight.unwrap_or_default(), g.expected);
        }
    }
    for l in 0..=2 {
        let c = graded_character_compare(n, l, 4)?;
        println!("l = {l}: graded dims {:?} match Ind(T^l): {}", c.rows.iter().map(|r| r.forms).collect::<Vec<_>>(), c.passed);
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
