// Acceptance suite: one PASS/FAIL line per criterion. Every bound, grid and
// time limit is pinned below. All arithmetic is exact, so "tolerance" means
// zero mismatches everywhere.
//
// Exit status: 0 iff the set of failing criteria equals KNOWN_FAILURES.

use std::time::{Duration, Instant};

use conformalk::contact_forms::{gamma_weights, graded_character_compare, homotopy_check, quotient_complex, Side};
use conformalk::grassmann::all_monos;
use conformalk::induced::{hodge_inverse, max_lambda_degree, natural_dual_mismatches, Basis, Induced};
use conformalk::kn_algebra::{check_axioms, check_conformal_axioms_with, mono_bracket};
use conformalk::singular::{
    brute_force, expected, family_a_vector, family_b_spotcheck, family_c_vector, oracle_failures, predicted_family_b, same_span, solve_induced, Expected,
    Family, SingularVectorReport,
};
use conformalk::so_rep::{build_irrep, weyl_dim, Weight};
use conformalk::Rational;

/// Criteria expected to fail, with the reason recorded alongside the code:
/// 9 — the plus-side level-1 class `t dt` is `d(t²/2)`, hence exact; the
/// computed defect there is 0, not 1.
const KNOWN_FAILURES: &[u32] = &[9];

const SINGULAR_DMAX: u32 = 3;
const BRUTE_DMAX: u32 = 3;
const CONTACT_TMAX: i32 = 4;
const CHARACTER_DEPTH: i64 = 6;

struct Outcome {
    passed: bool,
    detail: String,
}

fn ok(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn w(s: &str) -> Weight {
    s.parse().expect("weight literal")
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e <= limit, format!("{:.1}s of {}s", e.as_secs_f64(), limit.as_secs()))
}

// 1. skew-symmetry and Jacobi, n = 0..5, exhaustive on monomials
fn c1() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in 0..=5 {
        let mut checks = Vec::new();
        let mut cx = None;
        check_conformal_axioms_with(&mono_bracket, n, &mut checks, &mut cx);
        for name in ["skew_symmetry", "jacobi"] {
            if !checks.iter().any(|c| c.name == name && c.passed) {
                bad.push(format!("n={n} {name} {cx:?}"));
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(120));
    ok(bad.is_empty() && fast, format!("{} failures; {time}", bad.len()))
}

// 2. n-th products vs contact bracket vs vector fields, n ≤ 4, t-powers ≤ 3
fn c2() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in 0..=4 {
        let r = check_axioms(n, 3);
        for name in ["products_vs_contact", "contact_vs_vector_fields"] {
            if !r.check(name).is_some_and(|c| c.passed) {
                bad.push(format!("n={n} {name}"));
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(60));
    ok(bad.is_empty() && fast, format!("{bad:?}; {time}"))
}

fn small_reps() -> Vec<(usize, &'static str)> {
    vec![
        (3, "0;0"),
        (3, "1;1/2"),
        (3, "-1;1"),
        (3, "2;3/2"),
        (3, "1/2;2"),
        (4, "0;0,0"),
        (4, "1;1,0"),
        (4, "-2;1/2,1/2"),
        (4, "3;1/2,-1/2"),
        (4, "0;1,1"),
        (4, "5;1,-1"),
        (5, "0;0,0"),
        (5, "2;1,0"),
        (5, "-1;1/2,1/2"),
    ]
}

// 3. λ-degree ≤ 2 for dim F ≤ 5
fn c3() -> Outcome {
    let t = Instant::now();
    let mut worst = 0;
    let mut bad = Vec::new();
    for (n, mu) in small_reps() {
        let rep = build_irrep(n, &w(mu)).expect("rep");
        assert!(rep.dim <= 5);
        let d = max_lambda_degree(&Induced::new(rep));
        worst = worst.max(d);
        if d > 2 {
            bad.push(format!("n={n} ({mu}): {d}"));
        }
    }
    let (fast, time) = within(t, Duration::from_secs(60));
    ok(bad.is_empty() && fast, format!("max lambda-degree {worst}; {bad:?}; {time}"))
}

// 4. natural and dual formulas agree through the Hodge transport, n ≤ 4
fn c4() -> Outcome {
    let mut total = 0;
    let mut bad = Vec::new();
    for (n, mu) in [(3, "1;1"), (3, "0;1/2"), (4, "0;1,0"), (4, "2;1/2,-1/2")] {
        let (cases, fails) = natural_dual_mismatches(&Induced::new(build_irrep(n, &w(mu)).expect("rep")));
        total += cases;
        bad.extend(fails.into_iter().map(|f| format!("n={n} ({mu}) {f}")));
    }
    ok(bad.is_empty(), format!("{total} cases, {} mismatches", bad.len()))
}

// 5. module axioms (M1)/(M2), ∂-power ≤ 2, both bases
fn c5() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for (n, mu) in [(3, "1;1"), (4, "0;1,0"), (5, "0;1,0")] {
        let ind = Induced::new(build_irrep(n, &w(mu)).expect("rep"));
        for basis in [Basis::Natural, Basis::Dual] {
            let r = ind.check_module_axioms(basis, 2);
            if !r.passed {
                bad.push(format!("n={n} ({mu}) {basis:?}: {:?}", r.failure));
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(300));
    ok(bad.is_empty() && fast, format!("{bad:?}; {time}"))
}

struct Case {
    n: usize,
    mu: &'static str,
    family: Option<Family>,
}

fn singular_cases() -> Vec<Case> {
    let c = |n, mu, family| Case { n, mu, family };
    vec![
        c(4, "-1;1,0", Some(Family::A)),
        c(4, "-2;2,0", Some(Family::A)),
        c(4, "3;1,0", Some(Family::B)),
        c(5, "4;1,0", Some(Family::B)),
        c(6, "5;1,0,0", Some(Family::B)),
        c(3, "-1/2;1/2", Some(Family::A)),
        c(3, "2;1", Some(Family::B)),
        c(3, "3/2;1/2", Some(Family::C3)),
        c(4, "1;1,0", None),
        c(4, "-1;2,0", None),
        c(4, "5;1,1", None),
    ]
}

fn solve_cases() -> Vec<(Case, Induced, SingularVectorReport)> {
    singular_cases()
        .into_iter()
        .map(|c| {
            let ind = Induced::new(build_irrep(c.n, &w(c.mu)).expect("rep"));
            let r = solve_induced(&ind, SINGULAR_DMAX).expect("solve");
            (c, ind, r)
        })
        .collect()
}

// 6. the singular spaces, projectively equal to the predicted vectors
fn c6(solved: &[(Case, Induced, SingularVectorReport)], elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    for (c, ind, r) in solved {
        let got: Vec<_> = r.vectors.iter().map(|v| v.vector.clone()).collect();
        let good = match c.family {
            None => got.is_empty(),
            Some(f) => {
                let predicted = match f {
                    Family::A => family_a_vector(&ind.rep),
                    Family::B => predicted_family_b(&ind.rep).expect("prediction"),
                    _ => family_c_vector(&ind.rep).expect("prediction"),
                };
                got.len() == 1 && r.vectors[0].family == f && same_span(&got, &[predicted])
            }
        };
        if !good {
            bad.push(format!("n={} ({}): {} vectors {:?}", c.n, c.mu, got.len(), r.vectors.iter().map(|v| v.family).collect::<Vec<_>>()));
        }
    }
    let fast = elapsed <= Duration::from_secs(15 * 60);
    ok(bad.is_empty() && fast, format!("{} cases; {bad:?}; {:.1}s of 900s", solved.len(), elapsed.as_secs_f64()))
}

// 7. independent re-check: direct annihilation + relation spot-check for family b
fn c7(solved: &[(Case, Induced, SingularVectorReport)]) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (c, ind, r) in solved {
        for v in &r.vectors {
            checked += 1;
            let fails = oracle_failures(ind, &v.vector, 2 * SINGULAR_DMAX as i64 + c.n as i64).expect("oracle");
            if !fails.is_empty() {
                bad.push(format!("n={} ({}): killed-by failures {fails:?}", c.n, c.mu));
            }
            if v.family == Family::B {
                let s = family_b_spotcheck(&ind.rep, &v.vector);
                if !s.passed || s.relations.is_empty() {
                    bad.push(format!("n={} ({}): relations {:?}", c.n, c.mu, s.relations.iter().filter(|r| !r.passed).map(|r| &r.name).collect::<Vec<_>>()));
                }
            }
        }
    }
    ok(bad.is_empty() && checked > 0, format!("{checked} vectors; {bad:?}"))
}

fn brute_weights() -> Vec<(usize, Weight)> {
    let mut out = Vec::new();
    for m1 in [Rational::zero(), Rational::new(1, 2), Rational::one()] {
        for twice in -4..=6 {
            out.push((3, Weight::new(conformalk::GaussScalar::from_ratio(twice, 2), vec![m1.clone()])));
        }
    }
    for mu in [[0, 0], [2, 0], [1, 1], [1, -1], [2, 2], [2, -2]] {
        for mu0 in -3..=5 {
            // integer entries doubled above to allow spin weights
            let m: Vec<Rational> = mu.iter().map(|x| Rational::new(*x, 2)).collect();
            out.push((4, Weight::new(conformalk::GaussScalar::from_int(mu0), m)));
        }
    }
    out
}

// 8. brute-force completeness at dMax = 3
fn c8() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut found = 0;
    let grid = brute_weights();
    for (n, wt) in &grid {
        let rep = build_irrep(*n, wt).expect("rep");
        assert!(weyl_dim(*n, wt).expect("dim") <= 5);
        let ind = Induced::new(rep);
        let brute = brute_force(&ind, BRUTE_DMAX).expect("brute force");
        found += brute.len();
        if brute.iter().any(|v| v.terms.keys().any(|(k, _, _)| *k >= 3)) {
            bad.push(format!("n={n} {wt}: dpow 3 present"));
        }
        let r = solve_induced(&ind, BRUTE_DMAX).expect("solve");
        let solver: Vec<_> = r.vectors.iter().map(|v| hodge_inverse(&v.vector)).collect();
        if !same_span(&brute, &solver) {
            bad.push(format!("n={n} {wt}: brute {} vs solver {}", brute.len(), solver.len()));
        }
        let allowed = match expected(*n, wt) {
            Expected::None => brute.is_empty(),
            Expected::Open => true,
            _ => brute.len() == 1 && r.matches_expectation(),
        };
        if !allowed {
            bad.push(format!("n={n} {wt}: {} vectors, expected {:?}", brute.len(), expected(*n, wt)));
        }
    }
    let (fast, time) = within(t, Duration::from_secs(600));
    ok(bad.is_empty() && fast, format!("{} weights, {found} vectors; {bad:?}; {time}", grid.len()))
}

// 9. contact complex
fn c9() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in [3, 4] {
        let h = homotopy_check(n, n + 1, CONTACT_TMAX);
        if !h.failures.is_empty() || !h.d_squared_failures.is_empty() {
            bad.push(format!("n={n}: homotopy {} / d^2 {} failures", h.failures.len(), h.d_squared_failures.len()));
        }
        for side in [Side::Plus, Side::Minus] {
            let cx = quotient_complex(n, side, n, CONTACT_TMAX).expect("complex");
            if !cx.dd_zero || !cx.ideal_closed {
                bad.push(format!("n={n} {side:?}: d^2 on quotient {} / d(I) in I {}", cx.dd_zero, cx.ideal_closed));
            }
            let got = cx.defect_by_level();
            for k in 0..=n {
                let want = match (side, k) {
                    (Side::Plus, 0) => 1, // ker d = constants
                    (Side::Plus, 1) => 1,
                    (Side::Minus, 1) => 1,
                    _ => 0,
                };
                if got[&k] != want {
                    bad.push(format!("n={n} {side:?} level {k}: defect {} (expected {want})", got[&k]));
                }
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(600));
    ok(bad.is_empty() && fast, format!("{bad:?}; {time}"))
}

// 10. Γ weights
fn c10() -> Outcome {
    let mut bad = Vec::new();
    for n in [4, 5] {
        for k in 0..=3 {
            for side in [Side::Plus, Side::Minus] {
                let g = gamma_weights(n, k, side).expect("gamma");
                if !g.passed {
                    bad.push(format!("n={n} k={k} {side:?}: {:?} vs {}", g.weight, g.expected));
                }
            }
        }
    }
    ok(bad.is_empty(), format!("16 weights; {bad:?}"))
}

// 11. graded characters of Ω^l/I^l vs Ind(T^l)
fn c11() -> Outcome {
    let mut bad = Vec::new();
    for n in [3, 4] {
        for l in 0..=3 {
            let c = graded_character_compare(n, l, CHARACTER_DEPTH).expect("characters");
            if !c.passed {
                bad.push(format!("n={n} l={l}: {:?}", c.rows.iter().map(|r| (r.forms, r.induced)).collect::<Vec<_>>()));
            }
        }
    }
    ok(bad.is_empty(), format!("8 pairs to depth {CHARACTER_DEPTH}; {bad:?}"))
}

// 12. representation builder vs Weyl dimension, bracket fidelity
fn c12() -> Outcome {
    let weights: [(usize, &str); 20] = [
        (3, "0;0"),
        (3, "0;1/2"),
        (3, "0;1"),
        (3, "0;3/2"),
        (3, "0;3"),
        (5, "0;1,0"),
        (5, "0;1/2,1/2"),
        (5, "0;1,1"),
        (5, "0;2,0"),
        (5, "0;3/2,1/2"),
        (4, "0;1,0"),
        (4, "0;1/2,1/2"),
        (4, "0;1/2,-1/2"),
        (4, "0;2,1"),
        (4, "0;3/2,-3/2"),
        (6, "0;1,0,0"),
        (6, "0;1/2,1/2,1/2"),
        (6, "0;1/2,1/2,-1/2"),
        (6, "0;1,1,0"),
        (6, "0;2,0,0"),
    ];
    let mut bad = Vec::new();
    for (n, mu) in weights {
        let wt = w(mu);
        let rep = build_irrep(n, &wt).expect("rep");
        let wd = weyl_dim(n, &wt).expect("dim");
        if rep.dim as u64 != wd || !rep.bracket_fidelity_failures().is_empty() || !rep.borel_failures().is_empty() {
            bad.push(format!("so({n}) {mu}: dim {} vs {wd}", rep.dim));
        }
    }
    ok(bad.is_empty(), format!("20 weights; {bad:?}"))
}

fn main() {
    // `cargo test` passes harness flags; a name filter that excludes us is honoured.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    assert!(!all_monos(3).is_empty());
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!("{} criterion {id:>2} {name} ({:.1}s): {}", if o.passed { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64(), o.detail);
        results.push((id, name, o));
    };
    run(1, "conformal axioms", &c1);
    run(2, "bracket consistency", &c2);
    run(3, "lambda-degree bound", &c3);
    run(4, "natural/dual equivalence", &c4);
    run(5, "module axioms", &c5);
    let t = Instant::now();
    let solved = solve_cases();
    let elapsed = t.elapsed();
    run(6, "singular vectors", &|| c6(&solved, elapsed));
    run(7, "independent re-check", &|| c7(&solved));
    run(8, "brute-force completeness", &c8);
    run(9, "contact complex", &c9);
    run(10, "gamma weights", &c10);
    run(11, "graded characters", &c11);
    run(12, "representation builder", &c12);

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    println!("failed criteria: {failed:?}; known failures: {KNOWN_FAILURES:?}");
    if failed != KNOWN_FAILURES {
        eprintln!("acceptance: failures differ from the documented set");
        std::process::exit(1);
    }
}
