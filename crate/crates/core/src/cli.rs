//! Command-line front end. Every run is a pure function of its arguments;
//! JSON reports echo the full configuration and the tool version.
//!
//! Exit codes: 0 — computation agrees with the expected classification,
//! 1 — mathematical mismatch, 2 — usage or configuration error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::contact_forms::{gamma_weights, quotient_complex, Side};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Mono};
use crate::induced::{Basis, Induced, InducedVector};
use crate::kn_algebra::check_axioms;
use crate::scalar::{GaussScalar, Rational};
use crate::singular::{scan, solve_induced, Expected, ScanRow};
use crate::so_rep::{build_irrep, rank_of, weight_json, weyl_dim, Weight};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "conformalk", version, about = "Exact computations for the Lie conformal superalgebras K_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of odd variables.
    #[arg(long)]
    pub n: usize,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Allow n outside 3..=8 (cost grows exponentially in n).
    #[arg(long)]
    pub force_n: bool,
    #[arg(short, long)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Skew-symmetry / Jacobi of the λ-bracket and bracket consistency.
    Axioms {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        tmax: u32,
    },
    /// Build the irreducible so(n)-module of a highest weight.
    Rep {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// λ-action of f on g⊗v (v the highest-weight vector).
    Action {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "1")]
        g: String,
        /// Label g by its Hodge dual.
        #[arg(long)]
        dual: bool,
        /// Twist ∂ ↦ ∂ + α.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Non-trivial singular vectors of Ind(F).
    Singular {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = 3)]
        dmax: u32,
    },
    /// Reducibility over a grid of weights, e.g. `--mu-grid '-2..4;0..2,0'`.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        mu_grid: String,
        #[arg(long, default_value_t = 2)]
        dmax: u32,
    },
    /// Contact quotient complex: graded dims, d-ranks, defects, Γ weights.
    Contact {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        side: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 4)]
        tmax: i32,
    },
    /// Finite irreducible modules, cross-checked by a live scan.
    Catalog {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Axioms { common, .. }
            | Command::Rep { common, .. }
            | Command::Action { common, .. }
            | Command::Singular { common, .. }
            | Command::Scan { common, .. }
            | Command::Contact { common, .. }
            | Command::Catalog { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Axioms { .. } => "axioms",
            Command::Rep { .. } => "rep",
            Command::Action { .. } => "action",
            Command::Singular { .. } => "singular",
            Command::Scan { .. } => "scan",
            Command::Contact { .. } => "contact",
            Command::Catalog { .. } => "catalog",
        }
    }

    fn config(&self) -> Value {
        let c = self.common();
        let mut v = match self {
            Command::Axioms { tmax, .. } => json!({ "tmax": tmax }),
            Command::Rep { mu, .. } => json!({ "mu": mu }),
            Command::Action { mu, f, g, dual, alpha, .. } => json!({ "mu": mu, "f": f, "g": g, "dual": dual, "alpha": alpha }),
            Command::Singular { mu, dmax, .. } => json!({ "mu": mu, "dmax": dmax }),
            Command::Scan { mu_grid, dmax, .. } => json!({ "muGrid": mu_grid, "dmax": dmax }),
            Command::Contact { side, kmax, tmax, .. } => json!({ "side": side, "kmax": kmax, "tmax": tmax }),
            Command::Catalog { kmax, .. } => json!({ "kmax": kmax }),
        };
        v["command"] = json!(self.name());
        v["n"] = json!(c.n);
        v["forceN"] = json!(c.force_n);
        v["threads"] = json!(threads());
        v
    }
}

/// `CONFORMALK_THREADS`, echoed into reports. Execution is sequential.
pub fn threads() -> Option<usize> {
    std::env::var("CONFORMALK_THREADS").ok().and_then(|s| s.parse().ok())
}

/// Outcome of one command: a report and whether it met expectations.
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub matched: bool,
}

fn parse_weight(n: usize, s: &str) -> Result<Weight> {
    let w: Weight = s.parse()?;
    if w.mu.len() != rank_of(n) {
        return Err(Error::Usage(format!("weight {s:?} needs {} entries after ';' for n = {n}", rank_of(n))));
    }
    w.validate(n)?;
    Ok(w)
}

fn range_values(spec: &str) -> Result<Vec<Rational>> {
    // "a..b", "a..b/2" (half steps) or a single value
    let bad = || Error::Usage(format!("bad grid range {spec:?}"));
    let s = spec.trim();
    let Some((a, rest)) = s.split_once("..") else {
        return Ok(vec![s.parse::<Rational>().map_err(|_| bad())?]);
    };
    let (b, step) = match rest.split_once('/') {
        Some((b, d)) => (b, Rational::new(1, d.trim().parse::<i64>().map_err(|_| bad())?)),
        None => (rest, Rational::one()),
    };
    let lo: Rational = a.trim().parse().map_err(|_| bad())?;
    let hi: Rational = b.trim().parse().map_err(|_| bad())?;
    if step.is_negative() || step.is_zero() || lo > hi {
        return Err(bad());
    }
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x.clone());
        x = &x + &step;
        if out.len() > 10_000 {
            return Err(bad());
        }
    }
    Ok(out)
}

/// `"m0range;m1range,m2range,…"`; missing trailing entries are 0. Weights that
/// are not dominant-integral are skipped.
pub fn parse_grid(n: usize, spec: &str) -> Result<Vec<Weight>> {
    let (a, b) = spec.split_once(';').ok_or_else(|| Error::Usage(format!("grid {spec:?}: expected 'mu0;mu1,...'")))?;
    let m = rank_of(n);
    let mu0s = range_values(a)?;
    let mut axes: Vec<Vec<Rational>> = b.split(',').filter(|p| !p.trim().is_empty()).map(range_values).collect::<Result<_>>()?;
    if axes.len() > m {
        return Err(Error::Usage(format!("grid {spec:?} has more than {m} so(n) entries")));
    }
    axes.resize(m, vec![Rational::zero()]);
    let mut tuples: Vec<Vec<Rational>> = vec![Vec::new()];
    for axis in &axes {
        tuples = tuples.into_iter().flat_map(|t| axis.iter().map(move |x| [t.clone(), vec![x.clone()]].concat())).collect();
    }
    let mut out = Vec::new();
    for mu in &tuples {
        for mu0 in &mu0s {
            let w = Weight { mu0: GaussScalar::real(mu0.clone()), mu: mu.clone() };
            if w.validate(n).is_ok() {
                out.push(w);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Usage(format!("grid {spec:?} contains no dominant integral weight")));
    }
    Ok(out)
}

fn cmd_axioms(n: usize, tmax: u32) -> Outcome {
    let r = check_axioms(n, tmax);
    let mut text = format!("K_{n} axioms (t-powers <= {tmax}): {}\n", if r.passed { "pass" } else { "FAIL" });
    for c in &r.checks {
        text += &format!("  {:<28} {:>7} cases  {}\n", c.name, c.cases, if c.passed { "ok" } else { "FAIL" });
    }
    if let Some(cx) = &r.counterexample {
        text += &format!("  counterexample: {cx}\n");
    }
    Outcome { report: serde_json::to_value(&r).expect("serializable"), text, matched: r.passed }
}

fn cmd_rep(n: usize, mu: &str) -> Result<Outcome> {
    let w = parse_weight(n, mu)?;
    let rep = build_irrep(n, &w)?;
    let wd = weyl_dim(n, &w)?;
    let fid = rep.bracket_fidelity_failures();
    let borel = rep.borel_failures();
    let matched = rep.dim as u64 == wd && fid.is_empty() && borel.is_empty();
    let text = format!(
        "so({n}) irrep {w}: dim {} (Weyl formula {wd}); bracket fidelity {}; Borel kills hw: {}\n",
        rep.dim,
        if fid.is_empty() { "ok" } else { "FAIL" },
        if borel.is_empty() { "yes" } else { "NO" }
    );
    let mut report = rep.to_json();
    report["weylDim"] = json!(wd);
    report["fidelityFailures"] = json!(fid);
    report["borelFailures"] = json!(borel);
    Ok(Outcome { report, text, matched })
}

fn cmd_action(n: usize, mu: &str, f: &str, g: &str, dual: bool, alpha: Option<&str>) -> Result<Outcome> {
    let w = parse_weight(n, mu)?;
    let rep = build_irrep(n, &w)?;
    let fm = GrassmannElement::parse_mono(n, f)?;
    let gm: Mono = GrassmannElement::parse_mono(n, g)?;
    let basis = if dual { Basis::Dual } else { Basis::Natural };
    let hw = rep.hw_index;
    let ind = Induced::new(rep);
    let v = InducedVector::mono(n, basis, 0, gm, hw, GaussScalar::one());
    let mut a = ind.lambda_action(&GrassmannElement::mono(n, fm, GaussScalar::one()), &v)?;
    let alpha = alpha.map(|s| s.parse::<GaussScalar>()).transpose()?;
    if let Some(al) = &alpha {
        a = a.twist_alpha(al);
    }
    let shown = a.display(&ind.rep);
    let text = format!("({})_lambda ({}) = {shown}\n", crate::grassmann::mono_str(fm), v.display(&ind.rep));
    let terms: Vec<Value> = a.terms.iter().map(|(&(l, k, m, b), c)| json!({ "lambda": l, "dpow": k, "xi": m.indices(), "vecIndex": b, "coeff": c })).collect();
    let report = json!({ "basis": basis, "weight": weight_json(&w), "text": shown, "terms": terms, "degree": a.degree() });
    Ok(Outcome { report, text, matched: true })
}

fn cmd_singular(n: usize, mu: &str, dmax: u32) -> Result<Outcome> {
    let w = parse_weight(n, mu)?;
    let ind = Induced::new(build_irrep(n, &w)?);
    let r = solve_induced(&ind, dmax)?;
    let mut text = format!(
        "Ind(F) for n = {n}, mu = {w}, dMax = {dmax}: {} unknowns, {} non-trivial singular vector(s); expected {:?}\n",
        r.unknowns,
        r.vectors.len(),
        r.expected
    );
    for v in &r.vectors {
        text += &format!(
            "  [{}] grade {} weight {}: {}\n",
            v.family,
            v.grade,
            v.weight.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "-".into()),
            v.vector.display(&ind.rep)
        );
    }
    let matched = r.matches_expectation();
    text += if matched { "agrees with the classification\n" } else { "MISMATCH with the classification\n" };
    Ok(Outcome { report: r.to_json(&ind.rep), text, matched })
}

fn scan_text(rows: &[ScanRow]) -> String {
    let mut text = String::new();
    for r in rows {
        text += &format!(
            "  {:<22} dim F {:>3}  {:<11} {:?}{}\n",
            r.weight,
            r.dim_f,
            if r.reducible { "reducible" } else { "irreducible" },
            r.families,
            if r.matches { "" } else { "  MISMATCH" }
        );
    }
    text
}

fn cmd_scan(n: usize, grid: &str, dmax: u32) -> Result<Outcome> {
    let ws = parse_grid(n, grid)?;
    let rows = scan(n, &ws, dmax)?;
    let matched = rows.iter().all(|r| r.matches);
    let text = format!("scan n = {n}, {} weights, dMax = {dmax}\n{}", rows.len(), scan_text(&rows));
    Ok(Outcome { report: json!({ "rows": rows }), text, matched })
}

/// Expected total defect per level: plus side ℂ at level 0 and a class at
/// level 1; minus side a single class at level 1.
pub fn expected_defect(side: Side, k: usize) -> usize {
    match (side, k) {
        (Side::Plus, 0 | 1) => 1,
        (Side::Minus, 1) => 1,
        _ => 0,
    }
}

fn cmd_contact(n: usize, side: &str, kmax: usize, tmax: i32) -> Result<Outcome> {
    let side: Side = side.parse().map_err(|e: Error| Error::Usage(e.to_string()))?;
    if n < 2 {
        return Err(Error::Usage("contact needs n >= 2".into()));
    }
    let cx = quotient_complex(n, side, kmax, tmax)?;
    let by_level = cx.defect_by_level();
    let mut text = format!("contact complex n = {n}, side {side:?}, kmax = {kmax}, tMax = {tmax}: d(I) in I {}, d^2 = 0 {}\n", cx.ideal_closed, cx.dd_zero);
    let mut matched = cx.ideal_closed && cx.dd_zero;
    let mut levels = Vec::new();
    for (&k, &d) in &by_level {
        let e = expected_defect(side, k);
        matched &= d == e;
        let dims: Vec<(i64, usize)> = cx.comps.iter().filter(|((kk, _), _)| *kk == k).map(|((_, w), c)| (*w, c.dim())).filter(|(_, d)| *d > 0).collect();
        text += &format!("  level {k}: total defect {d} (expected {e}){}\n", if d == e { "" } else { "  MISMATCH" });
        levels.push(json!({
            "k": k,
            "defect": d,
            "expectedDefect": e,
            "gradedDims": dims.iter().map(|(w, d)| json!({"weight": w, "dim": d})).collect::<Vec<_>>(),
            "ranks": cx.ranks.iter().filter(|((kk, _), r)| *kk == k && **r > 0).map(|((_, w), r)| json!({"weight": w, "rank": r})).collect::<Vec<_>>(),
        }));
    }
    let mut gammas = Vec::new();
    for k in 0..=kmax.min(3) {
        let g = gamma_weights(n, k, side)?;
        matched &= g.passed;
        text += &format!(
            "  Gamma^{k}: weight {} (expected {}){}\n",
            g.weight.clone().unwrap_or_else(|| "-".into()),
            g.expected,
            if g.passed { "" } else { "  MISMATCH" }
        );
        gammas.push(serde_json::to_value(&g).expect("serializable"));
    }
    let report = json!({
        "idealClosed": cx.ideal_closed,
        "dSquaredZero": cx.dd_zero,
        "levels": levels,
        "defects": cx.defects(),
        "clipped": cx.clipped,
        "gamma": gammas,
    });
    Ok(Outcome { report, text, matched })
}

fn hw_k(n: usize, mu0: i64, k: u32) -> Weight {
    let mut mu = vec![Rational::zero(); rank_of(n)];
    mu[0] = Rational::from_int(k as i64);
    Weight { mu0: GaussScalar::from_int(mu0), mu }
}

fn cmd_catalog(n: usize, kmax: u32) -> Result<Outcome> {
    if n < 4 {
        return Err(Error::Usage(format!(
            "catalog for n = {n} is not available: the finite irreducible modules of K_3 (like K_4' and CK_6) are not classified by the construction used here"
        )));
    }
    // the exceptional weights, scanned live (dMax = 1 suffices: both families have ∂-power ≤ 1)
    let mut weights = Vec::new();
    for k in 1..=kmax {
        weights.push(hw_k(n, -(k as i64), k));
        weights.push(hw_k(n, n as i64 + k as i64 - 2, k));
    }
    let rows = scan(n, &weights, 1)?;
    let mut generic = Vec::new();
    for k in 1..=kmax.min(2) {
        generic.push(hw_k(n, 1, k));
    }
    let generic_rows = scan(n, &generic, 1)?;
    let matched = rows.iter().all(|r| r.reducible && r.matches) && generic_rows.iter().all(|r| !r.reducible && r.expected == Expected::None);
    let mut text = format!("Finite irreducible K_{n}-modules (up to the twist ∂ -> ∂ + alpha):\n");
    text += "  (1) Ind(F)_alpha, F an irreducible cso(n)-module whose highest weight is not of the form\n";
    text += "      (-k; k, 0, ..., 0) or (n+k-2; k, 0, ..., 0), k >= 1 (k = 0: only the trivial modules remain open)\n";
    text += "  (2) (Omega^k/I^k)^*_alpha / Ker d^*, k >= 1: the irreducible quotient of Ind(F), F of weight (-k; k, 0, ..., 0)\n";
    text += "  (3) the image of d^* in the dual minus-side complex: irreducible quotient of Ind(F), F of weight (n+k-2; k, 0, ..., 0)\n";
    if n % 2 == 1 {
        text += "  (odd n: the Borel subalgebra contains the short-root vectors gamma_k)\n";
    }
    text += "live check of the excluded weights (reducible = has a non-trivial singular vector):\n";
    text += &scan_text(&rows);
    text += "generic weights (must be irreducible):\n";
    text += &scan_text(&generic_rows);
    let families = json!([
        {"family": 1, "module": "Ind(F)_alpha", "excluded": rows.iter().map(|r| r.weight.clone()).collect::<Vec<_>>()},
        {"family": 2, "module": "(Omega^k/I^k)^*_alpha / Ker d^*", "weights": (1..=kmax).map(|k| hw_k(n, -(k as i64), k).to_string()).collect::<Vec<_>>()},
        {"family": 3, "module": "Im d^* (minus side)", "weights": (1..=kmax).map(|k| hw_k(n, n as i64 + k as i64 - 2, k).to_string()).collect::<Vec<_>>()},
    ]);
    Ok(Outcome { report: json!({ "families": families, "scan": rows, "generic": generic_rows }), text, matched })
}

/// Run a parsed command.
pub fn execute(cmd: &Command) -> Result<Outcome> {
    let c = cmd.common();
    if !(3..=8).contains(&c.n) {
        if !c.force_n {
            return Err(Error::Usage(format!("n = {} outside 3..=8; pass --force-n to run anyway", c.n)));
        }
        eprintln!("warning: n = {} is outside 3..=8; sizes grow like 2^n", c.n);
    }
    match cmd {
        Command::Axioms { tmax, .. } => Ok(cmd_axioms(c.n, *tmax)),
        Command::Rep { mu, .. } => cmd_rep(c.n, mu),
        Command::Action { mu, f, g, dual, alpha, .. } => cmd_action(c.n, mu, f, g, *dual, alpha.as_deref()),
        Command::Singular { mu, dmax, .. } => cmd_singular(c.n, mu, *dmax),
        Command::Scan { mu_grid, dmax, .. } => cmd_scan(c.n, mu_grid, *dmax),
        Command::Contact { side, kmax, tmax, .. } => cmd_contact(c.n, side, *kmax, *tmax),
        Command::Catalog { kmax, .. } => cmd_catalog(c.n, *kmax),
    }
}

/// Full JSON document for an outcome.
pub fn document(cmd: &Command, o: &Outcome) -> Value {
    json!({
        "tool": "conformalk",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cmd.config(),
        "matched": o.matched,
        "report": o.report,
    })
}

/// Parse `argv`, run, print, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = match execute(&cli.command) {
        Ok(o) => o,
        Err(
            e @ (Error::Usage(_) | Error::Parse(_) | Error::NonDominant(_) | Error::NonIntegral(_) | Error::RankMismatch(..) | Error::IndexOutOfRange { .. }),
        ) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_MISMATCH;
        }
    };
    print!("{}", out.text);
    if let Some(path) = &cli.command.common().json {
        let doc = serde_json::to_string_pretty(&document(&cli.command, &out)).expect("serializable") + "\n";
        let res = if path.as_os_str() == "-" {
            print!("{doc}");
            Ok(())
        } else {
            std::fs::write(path, doc)
        };
        if let Err(e) = res {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if out.matched {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let ws = parse_grid(4, "-2..4;0..2").unwrap();
        assert_eq!(ws.len(), 7 * 3);
        let ws = parse_grid(3, "0..1/2;1/2").unwrap();
        assert_eq!(ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["(0; 1/2)", "(1/2; 1/2)", "(1; 1/2)"]);
        assert!(parse_grid(4, "1..0;1").is_err());
        assert!(parse_grid(4, "bad").is_err());
        // non-dominant points dropped
        assert_eq!(parse_grid(4, "0;0..1,-2..2").unwrap().len(), 1 + 3);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["conformalk", "singular", "--n", "4", "--mu", "bad"]), EXIT_USAGE);
        assert_eq!(run(["conformalk", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["conformalk", "rep", "--n", "12", "--mu", "0;0,0,0,0,0,0"]), EXIT_USAGE);
        assert_eq!(run(["conformalk", "singular", "--n", "4", "--mu", "-1;1,0", "--dmax", "1"]), EXIT_OK);
        assert_eq!(run(["conformalk", "singular", "--n", "4", "--mu", "1;1,0", "--dmax", "1"]), EXIT_OK);
        assert_eq!(run(["conformalk", "catalog", "--n", "3"]), EXIT_USAGE);
    }

    #[test]
    fn reports_are_deterministic() {
        let cli = Cli::try_parse_from(["conformalk", "singular", "--n", "3", "--mu", "3/2;1/2", "--dmax", "2"]).unwrap();
        let a = document(&cli.command, &execute(&cli.command).unwrap()).to_string();
        let b = document(&cli.command, &execute(&cli.command).unwrap()).to_string();
        assert_eq!(a, b);
        assert!(a.contains("\"version\""));
    }
}
