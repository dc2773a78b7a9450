//! The induced module `Ind(F) ≅ ℂ[∂]⊗Λ(n)⊗F` and the λ-action of `K(1,n)_+`.
//!
//! Three independent implementations of the same action live here: the
//! closed formula in the natural basis `∂^k ξ_I⊗v`, the closed formula in the
//! Hodge-dual basis, and a first-principles evaluation in `U(g)` (straighten
//! `x·∂^k ξ_I⊗v` with commutators until `x` hits `1⊗v`). Each is the others'
//! oracle.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{mono_derive, mono_derive_by, mono_derive_multi, mono_hodge, mono_mul, mono_str, GrassmannElement, Mono};
use crate::kn_algebra::{ann_bracket, grading, lambda_bracket, partial_element, AnnihilationElement, ConformalElement};
use crate::scalar::{binomial, factorial, GaussScalar, Rational};
use crate::so_rep::{f_elem, rank_of, SoRep, Weight};
use crate::sparse::Lin;

fn int(k: i64) -> GaussScalar {
    GaussScalar::from_int(k)
}

fn sgn(s: i32) -> GaussScalar {
    GaussScalar::from_int(s as i64)
}

/// Which basis of `Λ(n)` labels the vector: `ξ_I` itself, or its Hodge dual.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Natural,
    Dual,
}

/// `(∂-power, ξ_I, index of the basis vector of F)`.
pub type IndKey = (u32, Mono, usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedVector {
    pub n: usize,
    pub basis: Basis,
    pub terms: Lin<IndKey>,
}

impl InducedVector {
    pub fn zero(n: usize, basis: Basis) -> Self {
        InducedVector { n, basis, terms: Lin::new() }
    }

    pub fn mono(n: usize, basis: Basis, k: u32, m: Mono, b: usize, c: GaussScalar) -> Self {
        InducedVector { n, basis, terms: Lin::single((k, m, b), c) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        t.add(&o.terms);
        InducedVector { n: self.n, basis: self.basis, terms: t }
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        InducedVector { n: self.n, basis: self.basis, terms: self.terms.scaled(c) }
    }

    /// Multiply by `∂`.
    pub fn partial(&self) -> Self {
        InducedVector { n: self.n, basis: self.basis, terms: self.terms.map_keys(|(k, m, b)| Some(((k + 1, *m, *b), int(1)))) }
    }

    /// Text form with the basis of `F` labelled by `rep`.
    pub fn display(&self, rep: &SoRep) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((k, m, b), c)| {
                let d = match k {
                    0 => String::new(),
                    1 => "d ".into(),
                    _ => format!("d^{k} "),
                };
                let tag = if self.basis == Basis::Dual { "*" } else { "" };
                format!("({c}) {d}[{}]{tag} (x) {}", mono_str(*m), rep.label(*b))
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for InducedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((k, m, b), c)| format!("({c}) d^{k}[{}] v{b}", mono_str(*m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial in `λ` with coefficients in `Ind(F)`; keys `(λ-power, ∂-power, ξ_I, b)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaAction {
    pub n: usize,
    pub basis: Basis,
    pub terms: Lin<(u32, u32, Mono, usize)>,
}

impl LambdaAction {
    pub fn zero(n: usize, basis: Basis) -> Self {
        LambdaAction { n, basis, terms: Lin::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn coeff(&self, j: u32) -> InducedVector {
        let terms = self.terms.iter().filter(|(k, _)| k.0 == j).map(|(k, c)| ((k.1, k.2, k.3), c.clone())).collect();
        InducedVector { n: self.n, basis: self.basis, terms }
    }

    /// Replace `∂` by `∂ + α` (the module `Tens_α`).
    pub fn twist_alpha(&self, alpha: &GaussScalar) -> LambdaAction {
        let mut t = Lin::new();
        for (&(l, k, m, b), c) in &self.terms {
            for j in 0..=k {
                let coef = &(&GaussScalar::from(binomial(k, j)) * &alpha.pow(k - j)) * c;
                t.add_term((l, j, m, b), coef);
            }
        }
        LambdaAction { n: self.n, basis: self.basis, terms: t }
    }

    /// Text form, one `λ`-power per group.
    pub fn display(&self, rep: &SoRep) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for j in 0..=self.degree().unwrap_or(0) {
            let c = self.coeff(j);
            if !c.is_zero() {
                let s = c.display(rep);
                parts.push(match j {
                    0 => format!("[{s}]"),
                    1 => format!("lambda [{s}]"),
                    _ => format!("lambda^{j} [{s}]"),
                });
            }
        }
        parts.join(" + ")
    }
}

/// Basis action of a monomial `f` on `g⊗v_b` (no `∂`), as `(λ, ∂, ξ_L, b')` terms.
pub type ActTerms = Lin<(u32, u32, Mono, usize)>;

/// Signature of a basis-level action formula.
pub type BaseAction = dyn Fn(&Induced, Mono, Mono, usize) -> ActTerms;

type PbwKey = (u32, Mono, u32, Mono, usize);

/// `Ind(F)` for a fixed `cso(n)`-irreducible `F`.
pub struct Induced {
    pub n: usize,
    pub rep: SoRep,
    fcache: Vec<Vec<Vec<(usize, GaussScalar)>>>,
    memo: RefCell<HashMap<PbwKey, Lin<IndKey>>>,
}

impl Induced {
    pub fn new(rep: SoRep) -> Self {
        let n = rep.n;
        // F_ij v_b for all i, j (1-based; zero when i == j)
        let mut fcache = vec![vec![Vec::new(); (n + 1) * (n + 1)]; rep.dim];
        for b in 0..rep.dim {
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        let v = rep.act(&f_elem(i, j), &rep.basis_vector(b));
                        fcache[b][i * (n + 1) + j] = v.into_iter().collect();
                    }
                }
            }
        }
        Induced { n, rep, fcache, memo: RefCell::new(HashMap::new()) }
    }

    fn fv(&self, i: usize, j: usize, b: usize) -> &[(usize, GaussScalar)] {
        &self.fcache[b][i * (self.n + 1) + j]
    }

    fn mu0(&self) -> &GaussScalar {
        &self.rep.weight.mu0
    }

    // ------------------------------------------------------------ formulas

    /// Closed formula in the natural basis, `f, g` monomials, `k = 0`.
    pub fn natural_base(&self, f: Mono, g: Mono, b: usize) -> ActTerms {
        let n = self.n;
        let mut out = Lin::new();
        let pf = f.parity() as i64;
        let sf = int(if pf == 1 { -1 } else { 1 });
        let deg_f = f.degree() as i64;
        // λ⁰
        if let Some((s, m)) = mono_derive_by(f, g) {
            out.add_term((0, 1, m, b), &(&sf * &int(deg_f - 2)) * &sgn(s));
        }
        for i in 1..=n {
            let Some((s1, fi)) = mono_derive(i, f) else { continue };
            let Some((s2, xg)) = mono_mul(Mono::xi(i), g) else { continue };
            if let Some((s3, m)) = mono_derive_by(fi, xg) {
                out.add_term((0, 0, m, b), sgn(s1 * s2 * s3));
            }
        }
        for r in 1..=n {
            for s in r + 1..=n {
                let Some((s1, frs)) = mono_derive_multi(&[r, s], f) else { continue };
                let Some((s2, m)) = mono_derive_by(frs, g) else { continue };
                let c = &sf * &sgn(s1 * s2);
                for (bb, x) in self.fv(r, s, b) {
                    out.add_term((0, 0, m, *bb), &c * x);
                }
            }
        }
        // λ¹
        if let Some((s, m)) = mono_derive_by(f, g) {
            out.add_term((1, 0, m, b), &(&sf * self.mu0()) * &sgn(s));
        }
        let sfg = int(if (pf + g.parity() as i64) % 2 == 1 { -1 } else { 1 });
        for i in 1..=n {
            let Some((s1, gi)) = mono_derive(i, g) else { continue };
            let Some((s2, h)) = mono_derive_by(f, gi) else { continue };
            if let Some((s3, m)) = mono_mul(h, Mono::xi(i)) {
                out.add_term((1, 0, m, b), &sfg * &sgn(s1 * s2 * s3));
            }
        }
        for i in 1..=n {
            let Some((s1, fi)) = mono_derive(i, f) else { continue };
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let Some((s2, gj)) = mono_derive(j, g) else { continue };
                if let Some((s3, m)) = mono_derive_by(fi, gj) {
                    for (bb, x) in self.fv(i, j, b) {
                        out.add_term((1, 0, m, *bb), &sgn(s1 * s2 * s3) * x);
                    }
                }
            }
        }
        // λ²
        for i in 1..=n {
            for j in i + 1..=n {
                let Some((s1, gij)) = mono_derive_multi(&[i, j], g) else { continue };
                if let Some((s2, m)) = mono_derive_by(f, gij) {
                    for (bb, x) in self.fv(i, j, b) {
                        out.add_term((2, 0, m, *bb), &(&sf * &sgn(s1 * s2)) * x);
                    }
                }
            }
        }
        out
    }

    /// Closed formula in the Hodge-dual basis, `f, g` monomials, `k = 0`.
    pub fn dual_base(&self, f: Mono, g: Mono, b: usize) -> ActTerms {
        dual_base_with(self, f, g, b, false)
    }

    /// Extend a basis action to `∂^k g⊗v` by `f_λ(∂w) = (λ+∂) f_λ(w)`.
    fn extend(base: &ActTerms, k: u32, c: &GaussScalar, out: &mut ActTerms) {
        for (&(l, d, m, b), x) in base {
            for j in 0..=k {
                let coef = &(&GaussScalar::from(binomial(k, j)) * x) * c;
                out.add_term((l + j, d + k - j, m, b), coef);
            }
        }
    }

    fn action_with(&self, base: &BaseAction, f: &GrassmannElement, w: &InducedVector) -> LambdaAction {
        let mut out = Lin::new();
        for (fm, fc) in &f.terms {
            for (&(k, g, b), wc) in &w.terms {
                let bt = base(self, *fm, g, b);
                debug_assert!(bt.keys().all(|k| k.0 <= 2));
                Self::extend(&bt, k, &(fc * wc), &mut out);
            }
        }
        LambdaAction { n: self.n, basis: w.basis, terms: out }
    }

    /// `f_λ w` for `w` in the natural basis (closed formula).
    pub fn lambda_action_natural(&self, f: &GrassmannElement, w: &InducedVector) -> Result<LambdaAction> {
        if w.basis != Basis::Natural {
            return Err(Error::BasisMismatch { expected: "natural", got: "dual" });
        }
        self.check_n(f.n, w.n)?;
        Ok(self.action_with(&|s: &Induced, f, g, b| s.natural_base(f, g, b), f, w))
    }

    /// `f_λ w` for `w` in the Hodge-dual basis (closed formula).
    pub fn lambda_action_dual(&self, f: &GrassmannElement, w: &InducedVector) -> Result<LambdaAction> {
        if w.basis != Basis::Dual {
            return Err(Error::BasisMismatch { expected: "dual", got: "natural" });
        }
        self.check_n(f.n, w.n)?;
        Ok(self.action_with(&|s: &Induced, f, g, b| s.dual_base(f, g, b), f, w))
    }

    /// Dispatch on the basis tag of `w`.
    pub fn lambda_action(&self, f: &GrassmannElement, w: &InducedVector) -> Result<LambdaAction> {
        match w.basis {
            Basis::Natural => self.lambda_action_natural(f, w),
            Basis::Dual => self.lambda_action_dual(f, w),
        }
    }

    fn check_n(&self, a: usize, b: usize) -> Result<()> {
        if a != self.n {
            return Err(Error::RankMismatch(self.n, a));
        }
        if b != self.n {
            return Err(Error::RankMismatch(self.n, b));
        }
        Ok(())
    }

    // ------------------------------------------------------------ U(g) oracle

    /// `x·w` computed in `U(g)⊗_{U(g_{≥0})} F`, `w` in the natural basis.
    pub fn pbw_apply(&self, x: &AnnihilationElement, w: &InducedVector) -> Result<InducedVector> {
        if w.basis != Basis::Natural {
            return Err(Error::BasisMismatch { expected: "natural", got: "dual" });
        }
        self.check_n(x.n, w.n)?;
        let mut out = Lin::new();
        for (&(p, j), xc) in &x.terms {
            for (&(k, i, b), wc) in &w.terms {
                out.add_scaled(&self.pbw_mono(p, j, k, i, b), &(xc * wc));
            }
        }
        Ok(InducedVector { n: self.n, basis: Basis::Natural, terms: out })
    }

    fn pbw_mono(&self, p: u32, j: Mono, k: u32, i: Mono, b: usize) -> Lin<IndKey> {
        if grading(p, j) > 2 * k as i64 + i.degree() as i64 {
            return Lin::new();
        }
        let key = (p, j, k, i, b);
        if let Some(r) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        let n = self.n;
        let x = AnnihilationElement::mono(n, p, j, int(1));
        let mut out: Lin<IndKey> = Lin::new();
        if k > 0 {
            // x·∂y = ∂(x·y) + [x, ∂]·y
            let inner = self.pbw_mono(p, j, k - 1, i, b);
            for ((kk, m, bb), c) in &inner {
                out.add_term((kk + 1, *m, *bb), c.clone());
            }
            let br = ann_bracket(&x, &partial_element(n)).expect("same n");
            for (&(p2, j2), c) in &br.terms {
                out.add_scaled(&self.pbw_mono(p2, j2, k - 1, i, b), c);
            }
        } else if i != Mono::ONE {
            // ξ_I = ξ_{j1} ξ_{I'} with j1 the smallest index
            let j1 = i.indices()[0];
            let rest = Mono(i.0 & !(1 << (j1 - 1)));
            let br = ann_bracket(&x, &AnnihilationElement::xi(n, j1)).expect("same n");
            for (&(p2, j2), c) in &br.terms {
                out.add_scaled(&self.pbw_mono(p2, j2, 0, rest, b), c);
            }
            let inner = self.pbw_mono(p, j, 0, rest, b);
            let s = int(if j.parity() == 1 { -1 } else { 1 });
            for (&(kk, m, bb), c) in &inner {
                let (key2, s2) = left_xi(j1, kk, m);
                out.add_term((key2.0, key2.1, bb), &(&s * c) * &sgn(s2));
            }
        } else {
            // x·(1⊗v)
            let g = grading(p, j);
            match (g, p, j.degree()) {
                (-2, _, _) => out.add_term((1, Mono::ONE, b), int(-2)),
                (-1, _, _) => out.add_term((0, j, b), int(1)),
                (0, 1, 0) => out.add_term((0, Mono::ONE, b), self.mu0().clone()),
                (0, 0, 2) => {
                    let idx = j.indices();
                    // ξ_aξ_b = −F_ab
                    for (bb, c) in self.fv(idx[0], idx[1], b) {
                        out.add_term((0, Mono::ONE, *bb), -c.clone());
                    }
                }
                _ => {}
            }
        }
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// `f_λ w = Σ_j λ^j/j! (t^j f)·w`, all `j` with a possibly non-zero mode.
    pub fn lambda_action_pbw(&self, f: &GrassmannElement, w: &InducedVector) -> Result<LambdaAction> {
        if w.basis != Basis::Natural {
            return Err(Error::BasisMismatch { expected: "natural", got: "dual" });
        }
        self.check_n(f.n, w.n)?;
        let depth = w.terms.keys().map(|(k, i, _)| 2 * *k as i64 + i.degree() as i64).max().unwrap_or(0);
        let mut out = Lin::new();
        for (fm, fc) in &f.terms {
            let mut jmax = 0u32;
            while grading(jmax + 1, *fm) <= depth {
                jmax += 1;
            }
            for jj in 0..=jmax {
                let x = AnnihilationElement::mono(self.n, jj, *fm, fc.clone());
                let y = self.pbw_apply(&x, w)?;
                let inv = GaussScalar::from(factorial(jj).recip().expect("nonzero"));
                for (&(k, m, b), c) in &y.terms {
                    out.add_term((jj, k, m, b), c * &inv);
                }
            }
        }
        Ok(LambdaAction { n: self.n, basis: Basis::Natural, terms: out })
    }

    /// `(∂^a ξ_J)_ν w` for an element of `K_n`, using `(∂a)_ν = −ν a_ν`.
    fn conformal_action(&self, base: &BaseAction, a: &ConformalElement, w: &InducedVector) -> ActTerms {
        let mut out = Lin::new();
        for (&(d, m), c) in &a.terms {
            let act = self.action_with(base, &GrassmannElement::mono(self.n, m, c.clone()), w);
            let s = int(if d % 2 == 1 { -1 } else { 1 });
            for (&(l, k, mm, b), x) in &act.terms {
                out.add_term((l + d, k, mm, b), &s * x);
            }
        }
        out
    }

    /// Exhaustive (M1)/(M2) check for a basis-level action formula on all
    /// monomial pairs and all basis vectors `∂^k ξ_I⊗v` with `k ≤ kmax`.
    pub fn check_module_axioms_with(&self, base: &BaseAction, basis: Basis, kmax: u32) -> ModuleReport {
        let n = self.n;
        let monos = crate::grassmann::all_monos(n);
        let mut vectors = Vec::new();
        for k in 0..=kmax {
            for &m in &monos {
                for b in 0..self.rep.dim {
                    vectors.push(InducedVector::mono(n, basis, k, m, b, int(1)));
                }
            }
        }
        let to_nat = |w: &InducedVector| if basis == Basis::Dual { hodge_inverse(w) } else { w.clone() };
        let from_nat = |a: LambdaAction| if basis == Basis::Dual { hodge_transport_action(&a) } else { a };

        // (M1): both sesquilinearity rules, left sides evaluated in U(g)
        let mut m1_fail = None;
        let mut m1_cases = 0;
        for &a in &monos {
            let f = GrassmannElement::mono(n, a, int(1));
            for w in vectors.iter().filter(|w| w.terms.keys().all(|k| k.0 < kmax.max(1))) {
                m1_cases += 1;
                let lhs = from_nat(self.lambda_action_pbw(&f, &to_nat(&w.partial())).expect("natural"));
                let rhs = self.action_with(base, &f, &w.partial());
                let lhs2 = from_nat(self.pbw_partial_action(a, &to_nat(w)));
                let rhs2 = self.conformal_action(base, &ConformalElement::mono(n, 1, a, int(1)), w);
                if (lhs.terms != rhs.terms || lhs2.terms != rhs2) && m1_fail.is_none() {
                    m1_fail = Some(format!("f={}, w={w}", mono_str(a)));
                }
            }
        }

        // (M2): a_λ(b_μ w) − (−1)^{p(a)p(b)} b_μ(a_λ w) = [a_λ b]_{λ+μ} w
        let mut m2_fail = None;
        let mut m2_cases = 0;
        let mut degree_fail = None;
        'outer: for &a in &monos {
            for &bm in &monos {
                let ea = ConformalElement::mono(n, 0, a, int(1));
                let eb = ConformalElement::mono(n, 0, bm, int(1));
                let br = lambda_bracket(&ea, &eb).expect("same n");
                let sign = int(if a.parity() * bm.parity() == 1 { -1 } else { 1 });
                for w in &vectors {
                    m2_cases += 1;
                    let bw = self.conformal_action(base, &eb, w);
                    let aw = self.conformal_action(base, &ea, w);
                    let k0 = w.terms.keys().all(|k| k.0 == 0);
                    if k0 && bw.keys().chain(aw.keys()).any(|k| k.0 > 2) && degree_fail.is_none() {
                        degree_fail = Some(format!("f={}, w={w}", mono_str(a)));
                    }
                    let mut lhs: Lin<(u32, u32, u32, Mono, usize)> = Lin::new();
                    // a_λ(b_μ w)
                    for (mu_pow, inner) in split_lambda(&bw, n, basis) {
                        for (&(l, k, m, b), c) in &self.conformal_action(base, &ea, &inner) {
                            lhs.add_term((l, mu_pow, k, m, b), c.clone());
                        }
                    }
                    // b_μ(a_λ w)
                    for (la_pow, inner) in split_lambda(&aw, n, basis) {
                        for (&(l, k, m, b), c) in &self.conformal_action(base, &eb, &inner) {
                            lhs.add_term((la_pow, l, k, m, b), -(&sign * c));
                        }
                    }
                    // [a_λ b]_{λ+μ} w
                    let mut rhs: Lin<(u32, u32, u32, Mono, usize)> = Lin::new();
                    for (&(l, d, m), c) in &br.terms {
                        let act = self.conformal_action(base, &ConformalElement::mono(n, d, m, c.clone()), w);
                        for (&(nu, k, mm, b), x) in &act {
                            // λ^l (λ+μ)^nu
                            for j in 0..=nu {
                                let coef = &GaussScalar::from(binomial(nu, j)) * x;
                                rhs.add_term((l + j, nu - j, k, mm, b), coef);
                            }
                        }
                    }
                    if lhs != rhs {
                        m2_fail = Some(format!("a={}, b={}, w={w}", mono_str(a), mono_str(bm)));
                        break 'outer;
                    }
                }
            }
        }
        let checks = vec![
            ModuleCheck {
                name: "M1".into(),
                basis: "a_l(d w) = (l+d) a_l w and (d a)_l w = -l a_l w, left sides computed in U(g)".into(),
                cases: m1_cases,
                passed: m1_fail.is_none(),
            },
            ModuleCheck {
                name: "M2".into(),
                basis: "a_l(b_m w) - (-1)^{p(a)p(b)} b_m(a_l w) = [a_l b]_{l+m} w as a polynomial in (l, m)".into(),
                cases: m2_cases,
                passed: m2_fail.is_none(),
            },
            ModuleCheck {
                name: "lambda_degree".into(),
                basis: "f_l(g v) has lambda-degree at most 2 (no d-power on the vector)".into(),
                cases: m2_cases,
                passed: degree_fail.is_none(),
            },
        ];
        let failure = m1_fail.map(|s| format!("M1: {s}")).or(m2_fail.map(|s| format!("M2: {s}"))).or(degree_fail);
        ModuleReport { n, weight: self.rep.weight.to_string(), basis, kmax, passed: failure.is_none(), checks, failure }
    }

    /// (M1)/(M2) for the closed formula of the given basis.
    pub fn check_module_axioms(&self, basis: Basis, kmax: u32) -> ModuleReport {
        match basis {
            Basis::Natural => self.check_module_axioms_with(&|s: &Induced, f, g, b| s.natural_base(f, g, b), basis, kmax),
            Basis::Dual => self.check_module_axioms_with(&|s: &Induced, f, g, b| s.dual_base(f, g, b), basis, kmax),
        }
    }

    /// `(∂ξ_A)_λ w` from its annihilation modes: `(t^j ∂a) = −j t^{j−1} a`.
    fn pbw_partial_action(&self, a: Mono, w: &InducedVector) -> LambdaAction {
        let depth = w.terms.keys().map(|(k, i, _)| 2 * *k as i64 + i.degree() as i64).max().unwrap_or(0);
        let mut out = Lin::new();
        let mut jj = 1u32;
        while grading(jj - 1, a) <= depth {
            let x = AnnihilationElement::mono(self.n, jj - 1, a, int(-(jj as i64)));
            let y = self.pbw_apply(&x, w).expect("natural");
            let inv = GaussScalar::from(factorial(jj).recip().expect("nonzero"));
            for (&(k, m, b), c) in &y.terms {
                out.add_term((jj, k, m, b), c * &inv);
            }
            jj += 1;
        }
        LambdaAction { n: self.n, basis: Basis::Natural, terms: out }
    }
}

/// Dual-basis formula; `flip_lambda2` negates the `λ²` group (mutation self-test).
pub fn dual_base_with(ind: &Induced, f: Mono, g: Mono, b: usize, flip_lambda2: bool) -> ActTerms {
    let n = ind.n;
    let mut out = Lin::new();
    let df = f.degree() as i64;
    let dg = g.degree() as i64;
    let pre = int(if (df * (df + 1) / 2 + df * dg) % 2 == 1 { -1 } else { 1 });
    let spf = int(if f.parity() == 1 { -1 } else { 1 });
    let fg = mono_mul(f, g);
    // λ⁰
    if let Some((s, m)) = fg {
        out.add_term((0, 1, m, b), &(&pre * &int(df - 2)) * &sgn(s));
    }
    for i in 1..=n {
        let (Some((s1, fi)), Some((s2, gi))) = (mono_derive(i, f), mono_derive(i, g)) else { continue };
        if let Some((s3, m)) = mono_mul(fi, gi) {
            out.add_term((0, 0, m, b), -(&(&pre * &spf) * &sgn(s1 * s2 * s3)));
        }
    }
    for r in 1..=n {
        for s in r + 1..=n {
            let Some((s1, frs)) = mono_derive_multi(&[r, s], f) else { continue };
            let Some((s2, m)) = mono_mul(frs, g) else { continue };
            let c = -(&pre * &sgn(s1 * s2));
            for (bb, x) in ind.fv(r, s, b) {
                out.add_term((0, 0, m, *bb), &c * x);
            }
        }
    }
    // λ¹
    if let Some((s, m)) = fg {
        out.add_term((1, 0, m, b), &(&pre * ind.mu0()) * &sgn(s));
    }
    for i in 1..=n {
        let Some((s1, xg)) = mono_mul(Mono::xi(i), g) else { continue };
        let Some((s2, fxg)) = mono_mul(f, xg) else { continue };
        if let Some((s3, m)) = mono_derive(i, fxg) {
            out.add_term((1, 0, m, b), -(&(&pre * &spf) * &sgn(s1 * s2 * s3)));
        }
    }
    for i in 1..=n {
        let Some((s1, fi)) = mono_derive(i, f) else { continue };
        for j in 1..=n {
            if i == j {
                continue;
            }
            let Some((s2, xg)) = mono_mul(Mono::xi(j), g) else { continue };
            if let Some((s3, m)) = mono_mul(fi, xg) {
                let c = &(&pre * &spf) * &sgn(s1 * s2 * s3);
                for (bb, x) in ind.fv(i, j, b) {
                    out.add_term((1, 0, m, *bb), &c * x);
                }
            }
        }
    }
    // λ²
    let s2sign = if flip_lambda2 { int(1) } else { int(-1) };
    for i in 1..=n {
        for j in i + 1..=n {
            let Some((s1, xij)) = mono_mul(Mono::xi(i), Mono::xi(j)) else { continue };
            let Some((s2, xg)) = mono_mul(xij, g) else { continue };
            if let Some((s3, m)) = mono_mul(f, xg) {
                let c = &(&pre * &s2sign) * &sgn(s1 * s2 * s3);
                for (bb, x) in ind.fv(i, j, b) {
                    out.add_term((2, 0, m, *bb), &c * x);
                }
            }
        }
    }
    out
}

/// `ξ_j · ∂^k ξ_L` in `U(g)`, using `ξ_j² = ∂`: returns `((k', L'), sign)`.
fn left_xi(j: usize, k: u32, l: Mono) -> ((u32, Mono), i32) {
    match mono_mul(Mono::xi(j), l) {
        Some((s, m)) => ((k, m), s),
        None => {
            let s = if crate::grassmann::epsilon(j, l).is_multiple_of(2) { 1 } else { -1 };
            ((k + 1, Mono(l.0 & !(1 << (j - 1)))), s)
        }
    }
}

fn split_lambda(a: &ActTerms, n: usize, basis: Basis) -> Vec<(u32, InducedVector)> {
    let mut by: std::collections::BTreeMap<u32, InducedVector> = std::collections::BTreeMap::new();
    for (&(l, k, m, b), c) in a {
        by.entry(l).or_insert_with(|| InducedVector::zero(n, basis)).terms.add_term((k, m, b), c.clone());
    }
    by.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleCheck {
    pub name: String,
    pub basis: String,
    pub cases: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub n: usize,
    pub weight: String,
    pub basis: Basis,
    pub kmax: u32,
    pub passed: bool,
    pub checks: Vec<ModuleCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// `T(∂^k g⊗v) = ∂^k ḡ⊗v` (natural → dual coordinates).
pub fn hodge_transport(w: &InducedVector) -> InducedVector {
    let n = w.n;
    let terms = w.terms.map_keys(|&(k, m, b)| {
        let (s, c) = mono_hodge(m, n);
        Some(((k, c, b), sgn(s)))
    });
    InducedVector { n, basis: Basis::Dual, terms }
}

/// `T^{-1}` (dual → natural coordinates).
pub fn hodge_inverse(w: &InducedVector) -> InducedVector {
    let n = w.n;
    let terms = w.terms.map_keys(|&(k, m, b)| {
        let c = m.complement(n);
        let (s, _) = mono_hodge(c, n);
        Some(((k, c, b), sgn(s)))
    });
    InducedVector { n, basis: Basis::Natural, terms }
}

/// Apply `T` to every coefficient of a natural-basis λ-action.
pub fn hodge_transport_action(a: &LambdaAction) -> LambdaAction {
    let n = a.n;
    let terms = a.terms.map_keys(|&(l, k, m, b)| {
        let (s, c) = mono_hodge(m, n);
        Some(((l, k, c, b), sgn(s)))
    });
    LambdaAction { n, basis: Basis::Dual, terms }
}

/// Compare `T∘natural∘T^{-1}` with the dual formula on every monomial pair and
/// basis vector of `F`; returns the failing cases.
pub fn natural_dual_mismatches(ind: &Induced) -> (usize, Vec<String>) {
    let n = ind.n;
    let mut bad = Vec::new();
    let mut cases = 0;
    for f in crate::grassmann::all_monos(n) {
        for g in crate::grassmann::all_monos(n) {
            for b in 0..ind.rep.dim {
                cases += 1;
                let w = InducedVector::mono(n, Basis::Dual, 0, g, b, int(1));
                let fe = GrassmannElement::mono(n, f, int(1));
                let via = hodge_transport_action(&ind.lambda_action_natural(&fe, &hodge_inverse(&w)).expect("natural"));
                let direct = ind.lambda_action_dual(&fe, &w).expect("dual");
                if via != direct {
                    bad.push(format!("f={}, g={}, b={b}", mono_str(f), mono_str(g)));
                }
            }
        }
    }
    (cases, bad)
}

/// Compare the natural closed formula with the `U(g)` evaluation on every
/// monomial `f` and basis vector `∂^k ξ_I⊗v`, `k ≤ kmax`.
pub fn natural_pbw_mismatches(ind: &Induced, kmax: u32) -> (usize, Vec<String>) {
    let n = ind.n;
    let mut bad = Vec::new();
    let mut cases = 0;
    for f in crate::grassmann::all_monos(n) {
        for k in 0..=kmax {
            for g in crate::grassmann::all_monos(n) {
                for b in 0..ind.rep.dim {
                    cases += 1;
                    let w = InducedVector::mono(n, Basis::Natural, k, g, b, int(1));
                    let fe = GrassmannElement::mono(n, f, int(1));
                    let a = ind.lambda_action_natural(&fe, &w).expect("natural");
                    let p = ind.lambda_action_pbw(&fe, &w).expect("natural");
                    if a != p {
                        bad.push(format!("f={}, k={k}, g={}, b={b}", mono_str(f), mono_str(g)));
                    }
                }
            }
        }
    }
    (cases, bad)
}

/// Largest λ-power with a non-zero coefficient in `f_λ(g⊗v)`, from the
/// `U(g)` evaluation of every mode, over all monomials `f, g` and basis
/// vectors of `F`. (On `∂^k g⊗v` the degree grows by `k` through `(λ+∂)^k`.)
pub fn max_lambda_degree(ind: &Induced) -> u32 {
    let n = ind.n;
    let mut best = 0;
    for f in crate::grassmann::all_monos(n) {
        let fe = GrassmannElement::mono(n, f, int(1));
        {
            let k = 0;
            for g in crate::grassmann::all_monos(n) {
                for b in 0..ind.rep.dim {
                    let w = InducedVector::mono(n, Basis::Natural, k, g, b, int(1));
                    let a = ind.lambda_action_pbw(&fe, &w).expect("natural");
                    best = best.max(a.degree().unwrap_or(0));
                }
            }
        }
    }
    best
}

/// Weight under `(E_00; H_1..H_m)` and ℤ-grade of a single basis term.
/// The weight is `None` when `ξ_I` mixes a pair `ξ_{2j−1}, ξ_{2j}` (not an
/// `H_j`-eigenvector). `ad E_00` is the grading, so `E_00` acts by `μ_0 + grade`.
pub fn weight_and_grade(rep: &SoRep, basis: Basis, key: &IndKey) -> (Option<Weight>, i64) {
    let n = rep.n;
    let (k, m, b) = *key;
    let nat = match basis {
        Basis::Natural => m,
        Basis::Dual => m.complement(n),
    };
    let grade = -2 * k as i64 - nat.degree() as i64;
    let mu0 = &rep.weight.mu0 + &int(grade);
    for j in 1..=rank_of(n) {
        if nat.contains(2 * j - 1) != nat.contains(2 * j) {
            return (None, grade);
        }
    }
    let mu: Vec<Rational> = rep.weights[b].clone();
    (Some(Weight { mu0, mu }), grade)
}
