// The catalog of finite irreducible K_4-modules, with its exceptional weights
// checked by a live scan.

pub fn run_example() -> conformalk::Result<()> {
    let code = conformalk::cli::run(["conformalk", "catalog", "--n", "4", "--kmax", "2"]);
    if code != 0 {
        return Err(conformalk::Error::Unsupported(format!("catalog exited with {code}")));
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
