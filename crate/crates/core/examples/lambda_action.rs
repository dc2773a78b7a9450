// λ-action of K_4 on Ind(F): the closed formula in the natural basis, the same
// action transported to the Hodge-dual basis, and the α-twisted module.

use conformalk::grassmann::{GrassmannElement, Mono};
use conformalk::induced::{hodge_transport, hodge_transport_action, Basis, Induced, InducedVector};
use conformalk::so_rep::build_irrep;
use conformalk::GaussScalar;

pub fn run_example() -> conformalk::Result<()> {
    let n = 4;
    let rep = build_irrep(n, &"-1;1,0".parse()?)?;
    let hw = rep.hw_index;
    let ind = Induced::new(rep);
    let f = GrassmannElement::mono(n, Mono::from_indices(&[1, 2]), GaussScalar::one());
    let w = InducedVector::mono(n, Basis::Natural, 0, Mono::from_indices(&[3]), hw, GaussScalar::one());
    let nat = ind.lambda_action_natural(&f, &w)?;
    println!("natural: (x1 x2)_lambda ({}) = {}", w.display(&ind.rep), nat.display(&ind.rep));
    let wd = hodge_transport(&w);
    let dual = ind.lambda_action_dual(&f, &wd)?;
    println!("dual:    (x1 x2)_lambda ({}) = {}", wd.display(&ind.rep), dual.display(&ind.rep));
    if hodge_transport_action(&nat) != dual {
        return Err(conformalk::Error::Unsupported("natural and dual actions disagree".into()));
    }
    let twisted = nat.twist_alpha(&GaussScalar::from_ratio(1, 2));
    println!("alpha = 1/2: {}", twisted.display(&ind.rep));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
