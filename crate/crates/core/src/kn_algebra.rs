//! The conformal superalgebra `K_n = ℂ[∂]⊗Λ(n)`, its annihilation algebra
//! `K(1,n)_+ = ℂ[t]⊗Λ(n)`, and exhaustive axiom checkers.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{all_monos, mono_derive, mono_mul, mono_str, Mono};
use crate::scalar::{binomial, factorial, falling_factorial, GaussScalar};
use crate::sparse::Lin;

fn int(k: i64) -> GaussScalar {
    GaussScalar::from_int(k)
}

/// Element of `K_n`: terms `∂^k ξ_I`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConformalElement {
    pub n: usize,
    pub terms: Lin<(u32, Mono)>,
}

impl ConformalElement {
    pub fn zero(n: usize) -> Self {
        ConformalElement { n, terms: Lin::new() }
    }

    pub fn mono(n: usize, dpow: u32, m: Mono, c: GaussScalar) -> Self {
        ConformalElement { n, terms: Lin::single((dpow, m), c) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Multiply by `∂`.
    pub fn partial(&self) -> Self {
        ConformalElement { n: self.n, terms: self.terms.map_keys(|(k, m)| Some(((k + 1, *m), GaussScalar::one()))) }
    }
}

impl fmt::Display for ConformalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((k, m), c)| match k {
                0 => format!("{c}*[{}]", mono_str(*m)),
                1 => format!("{c}*d[{}]", mono_str(*m)),
                _ => format!("{c}*d^{k}[{}]", mono_str(*m)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial in one formal variable `λ` with `K_n` coefficients; key `(λ-power, ∂-power, ξ_I)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaPoly {
    pub n: usize,
    pub terms: Lin<(u32, u32, Mono)>,
}

impl LambdaPoly {
    pub fn zero(n: usize) -> Self {
        LambdaPoly { n, terms: Lin::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    /// Coefficient of `λ^j`.
    pub fn coeff(&self, j: u32) -> ConformalElement {
        let terms = self.terms.iter().filter(|(k, _)| k.0 == j).map(|(k, c)| ((k.1, k.2), c.clone())).collect();
        ConformalElement { n: self.n, terms }
    }

    pub fn from_coeffs(n: usize, cs: &[(u32, ConformalElement)]) -> Self {
        let mut terms = Lin::new();
        for (j, e) in cs {
            for ((k, m), c) in &e.terms {
                terms.add_term((*j, *k, *m), c.clone());
            }
        }
        LambdaPoly { n, terms }
    }

    /// Multiply by `(λ+∂)`.
    fn times_lambda_plus_d(&self) -> Self {
        let mut t = Lin::new();
        for ((l, k, m), c) in &self.terms {
            t.add_term((l + 1, *k, *m), c.clone());
            t.add_term((*l, k + 1, *m), c.clone());
        }
        LambdaPoly { n: self.n, terms: t }
    }

    /// Multiply by `(−λ)`.
    fn times_minus_lambda(&self) -> Self {
        LambdaPoly { n: self.n, terms: self.terms.map_keys(|(l, k, m)| Some(((l + 1, *k, *m), int(-1)))) }
    }

    fn scale(&self, c: &GaussScalar) -> Self {
        LambdaPoly { n: self.n, terms: self.terms.scaled(c) }
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let deg = self.degree().unwrap_or(0);
        let mut parts = Vec::new();
        for j in 0..=deg {
            let c = self.coeff(j);
            if !c.is_zero() {
                parts.push(match j {
                    0 => format!("({c})"),
                    1 => format!("lambda*({c})"),
                    _ => format!("lambda^{j}*({c})"),
                });
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Bracket of two Grassmann monomials, the only input the checkers need.
pub type MonoBracket = dyn Fn(usize, Mono, Mono) -> LambdaPoly;

/// `[f_λ g] = (r−2)∂(fg) + (−1)^r Σ_i (∂_i f)(∂_i g) + λ(r+s−4) fg`.
pub fn mono_bracket(n: usize, f: Mono, g: Mono) -> LambdaPoly {
    let r = f.degree() as i64;
    let s = g.degree() as i64;
    let mut t = Lin::new();
    if let Some((sg, fg)) = mono_mul(f, g) {
        t.add_term((0, 1, fg), int((r - 2) * sg as i64));
        t.add_term((1, 0, fg), int((r + s - 4) * sg as i64));
    }
    let sr = if r % 2 == 0 { 1 } else { -1 };
    for i in 1..=n {
        if let (Some((s1, df)), Some((s2, dg))) = (mono_derive(i, f), mono_derive(i, g)) {
            if let Some((s3, p)) = mono_mul(df, dg) {
                t.add_term((0, 0, p), int((sr * s1 * s2 * s3) as i64));
            }
        }
    }
    LambdaPoly { n, terms: t }
}

/// Extend a monomial bracket to all of `K_n` by bilinearity and sesquilinearity:
/// `[∂^a f_λ ∂^b g] = (−λ)^a (λ+∂)^b [f_λ g]`.
pub fn bracket_with(br: &MonoBracket, a: &ConformalElement, b: &ConformalElement) -> LambdaPoly {
    let n = a.n;
    let mut out = LambdaPoly::zero(n);
    for ((ka, fa), ca) in &a.terms {
        for ((kb, gb), cb) in &b.terms {
            let mut p = br(n, *fa, *gb);
            for _ in 0..*ka {
                p = p.times_minus_lambda();
            }
            for _ in 0..*kb {
                p = p.times_lambda_plus_d();
            }
            out.terms.add_scaled(&p.terms, &(ca * cb));
        }
    }
    out
}

pub fn lambda_bracket(a: &ConformalElement, b: &ConformalElement) -> Result<LambdaPoly> {
    if a.n != b.n {
        return Err(Error::RankMismatch(a.n, b.n));
    }
    Ok(bracket_with(&mono_bracket, a, b))
}

/// `a_{(j)} b = j! · [λ^j] [a_λ b]`.
pub fn nth_product(a: &ConformalElement, j: u32, b: &ConformalElement) -> Result<ConformalElement> {
    let p = lambda_bracket(a, b)?;
    let c = p.coeff(j);
    Ok(ConformalElement { n: c.n, terms: c.terms.scaled(&factorial(j).into()) })
}

/// Formal substitution `λ → −λ−∂`, with `∂` acting on the coefficient.
pub fn subst_neg(p: &LambdaPoly) -> LambdaPoly {
    let mut t = Lin::new();
    for ((l, k, m), c) in &p.terms {
        // (−λ−∂)^l = (−1)^l Σ_j C(l,j) λ^j ∂^{l−j}
        let sign = GaussScalar::sign(*l as i64);
        for j in 0..=*l {
            let coef = &(c * &sign) * &GaussScalar::from(binomial(*l, j));
            t.add_term((j, k + (l - j), *m), coef);
        }
    }
    LambdaPoly { n: p.n, terms: t }
}

/// Two-variable polynomial: key `(λ-power, μ-power, ∂-power, ξ_I)`.
pub type LambdaMuPoly = Lin<(u32, u32, u32, Mono)>;

/// `[a_λ[b_μ c]] − (−1)^{p(a)p(b)}[b_μ[a_λ c]] − [[a_λ b]_{λ+μ} c]` for monomials.
pub fn jacobi_defect(br: &MonoBracket, n: usize, a: Mono, b: Mono, c: Mono) -> LambdaMuPoly {
    let el = |m: Mono| ConformalElement::mono(n, 0, m, GaussScalar::one());
    let (ea, eb, ec) = (el(a), el(b), el(c));
    let mut out: LambdaMuPoly = Lin::new();

    let inner = bracket_with(br, &eb, &ec);
    for ((j, k, m), cf) in &inner.terms {
        let p = bracket_with(br, &ea, &ConformalElement::mono(n, *k, *m, cf.clone()));
        for ((i, d, mm), x) in &p.terms {
            out.add_term((*i, *j, *d, *mm), x.clone());
        }
    }

    let sign = GaussScalar::sign((a.parity() * b.parity()) as i64);
    let inner = bracket_with(br, &ea, &ec);
    for ((i, k, m), cf) in &inner.terms {
        let p = bracket_with(br, &eb, &ConformalElement::mono(n, *k, *m, cf.clone()));
        for ((j, d, mm), x) in &p.terms {
            out.add_term((*i, *j, *d, *mm), -(x * &sign));
        }
    }

    let inner = bracket_with(br, &ea, &eb);
    for ((i, k, m), cf) in &inner.terms {
        let p = bracket_with(br, &ConformalElement::mono(n, *k, *m, cf.clone()), &ec);
        for ((l, d, mm), x) in &p.terms {
            for r in 0..=*l {
                let coef = x * &GaussScalar::from(binomial(*l, r));
                out.add_term((i + r, l - r, *d, *mm), -coef);
            }
        }
    }
    out
}

/// `[a_λ b] + (−1)^{p(a)p(b)} [b_{−λ−∂} a]` for monomials.
pub fn skew_defect(br: &MonoBracket, n: usize, a: Mono, b: Mono) -> LambdaPoly {
    let ab = br(n, a, b);
    let ba = subst_neg(&br(n, b, a)).scale(&GaussScalar::sign((a.parity() * b.parity()) as i64));
    let mut t = ab.terms.clone();
    t.add(&ba.terms);
    LambdaPoly { n, terms: t }
}

// ---------------------------------------------------------------------------
// annihilation algebra

/// Element of `Λ(1,n)_+ = ℂ[t]⊗Λ(n)`: terms `t^m ξ_I`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnnihilationElement {
    pub n: usize,
    pub terms: Lin<(u32, Mono)>,
}

impl AnnihilationElement {
    pub fn zero(n: usize) -> Self {
        AnnihilationElement { n, terms: Lin::new() }
    }

    pub fn mono(n: usize, tpow: u32, m: Mono, c: GaussScalar) -> Self {
        AnnihilationElement { n, terms: Lin::single((tpow, m), c) }
    }

    pub fn one(n: usize) -> Self {
        Self::mono(n, 0, Mono::ONE, GaussScalar::one())
    }

    pub fn t(n: usize) -> Self {
        Self::mono(n, 1, Mono::ONE, GaussScalar::one())
    }

    pub fn xi(n: usize, i: usize) -> Self {
        Self::mono(n, 0, Mono::xi(i), GaussScalar::one())
    }

    /// `F_ij = −ξ_i ξ_j` (any order of `i ≠ j`).
    pub fn f_ij(n: usize, i: usize, j: usize) -> Self {
        Self::xi(n, i).mul(&Self::xi(n, j)).scale(&int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        t.add(&o.terms);
        AnnihilationElement { n: self.n, terms: t }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AnnihilationElement { n: self.n, terms: self.terms.sub(&o.terms) }
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        AnnihilationElement { n: self.n, terms: self.terms.scaled(c) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut t = Lin::new();
        for ((p, a), ca) in &self.terms {
            for ((q, b), cb) in &o.terms {
                if let Some((s, m)) = mono_mul(*a, *b) {
                    t.add_term((p + q, m), &(ca * cb) * &int(s as i64));
                }
            }
        }
        AnnihilationElement { n: self.n, terms: t }
    }

    pub fn d_t(&self) -> Self {
        let terms = self.terms.map_keys(|(p, m)| if *p == 0 { None } else { Some(((p - 1, *m), int(*p as i64))) });
        AnnihilationElement { n: self.n, terms }
    }

    pub fn d_xi(&self, i: usize) -> Self {
        let terms = self.terms.map_keys(|(p, m)| mono_derive(i, *m).map(|(s, r)| ((*p, r), int(s as i64))));
        AnnihilationElement { n: self.n, terms }
    }

    /// `Σ_i ξ_i ∂_i`, the degree operator on Λ(n).
    pub fn euler(&self) -> Self {
        let terms = self.terms.map_keys(|(p, m)| Some(((*p, *m), int(m.degree() as i64))));
        AnnihilationElement { n: self.n, terms }
    }

    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|(_, m)| m.parity());
        let p = it.next().unwrap_or(0);
        if it.all(|q| q == p) {
            Some(p)
        } else {
            None
        }
    }

    /// Split into parity-homogeneous parts `(even, odd)`.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut e = Self::zero(self.n);
        let mut o = Self::zero(self.n);
        for ((p, m), c) in &self.terms {
            if m.parity() == 0 {
                e.terms.add_term((*p, *m), c.clone());
            } else {
                o.terms.add_term((*p, *m), c.clone());
            }
        }
        (e, o)
    }

    /// Grade if homogeneous.
    pub fn grade(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|(p, m)| grading(*p, *m));
        let g = it.next()?;
        if it.all(|h| h == g) {
            Some(g)
        } else {
            None
        }
    }
}

impl fmt::Display for AnnihilationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((p, m), c)| match p {
                0 => format!("{c}*[{}]", mono_str(*m)),
                1 => format!("{c}*t[{}]", mono_str(*m)),
                _ => format!("{c}*t^{p}[{}]", mono_str(*m)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `deg(t^m ξ_I) = 2m + |I| − 2`
pub fn grading(m: u32, i: Mono) -> i64 {
    2 * m as i64 + i.degree() as i64 - 2
}

/// Bracket of `K(1,n)_+` from the n-th products:
/// `[a t^p, b t^q] = Σ_j C(p,j) (a_{(j)} b) t^{p+q−j}`, with `∂ ↦ −∂_t`.
pub fn ann_bracket(x: &AnnihilationElement, y: &AnnihilationElement) -> Result<AnnihilationElement> {
    if x.n != y.n {
        return Err(Error::RankMismatch(x.n, y.n));
    }
    Ok(ann_bracket_with(&mono_bracket, x, y))
}

pub fn ann_bracket_with(br: &MonoBracket, x: &AnnihilationElement, y: &AnnihilationElement) -> AnnihilationElement {
    let n = x.n;
    let mut out = AnnihilationElement::zero(n);
    for ((p, a), ca) in &x.terms {
        for ((q, b), cb) in &y.terms {
            let poly = br(n, *a, *b);
            for ((j, k, m), c) in &poly.terms {
                if j > p {
                    continue;
                }
                let s = p + q - j;
                if *k > s {
                    continue;
                }
                // j! from the n-th product, C(p,j), and (−∂_t)^k t^s
                let coef = GaussScalar::from(&(&factorial(*j) * &binomial(*p, *j)) * &falling_factorial(s, *k));
                let coef = &(&coef * &GaussScalar::sign(*k as i64)) * &(&(ca * cb) * c);
                out.terms.add_term((s - k, *m), coef);
            }
        }
    }
    out
}

/// The contact bracket
/// `[f,g] = (2f − Σξ_i∂_i f)(∂_t g) − (∂_t f)(2g − Σξ_i∂_i g) + (−1)^{p(f)} Σ(∂_i f)(∂_i g)`.
pub fn contact_bracket(f: &AnnihilationElement, g: &AnnihilationElement) -> AnnihilationElement {
    let n = f.n;
    let two = int(2);
    let (fe, fo) = f.split_parity();
    let mut out = AnnihilationElement::zero(n);
    for (part, sign) in [(fe, 1i64), (fo, -1i64)] {
        if part.is_zero() {
            continue;
        }
        let a = part.scale(&two).sub(&part.euler()).mul(&g.d_t());
        let b = part.d_t().mul(&g.scale(&two).sub(&g.euler()));
        let mut c = AnnihilationElement::zero(n);
        for i in 1..=n {
            c = c.add(&part.d_xi(i).mul(&g.d_xi(i)));
        }
        out = out.add(&a.sub(&b)).add(&c.scale(&int(sign)));
    }
    out
}

/// Vector field `a ∂_t + Σ a_i ∂_i` with coefficients in `Λ(1,n)_+`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    pub n: usize,
    pub parity: u32,
    pub a: AnnihilationElement,
    pub ai: Vec<AnnihilationElement>,
}

impl VectorField {
    pub fn apply(&self, h: &AnnihilationElement) -> AnnihilationElement {
        let mut out = self.a.mul(&h.d_t());
        for i in 1..=self.n {
            out = out.add(&self.ai[i - 1].mul(&h.d_xi(i)));
        }
        out
    }

    /// Super-commutator `[D1, D2] = D1 D2 − (−1)^{p1 p2} D2 D1`.
    pub fn commutator(&self, o: &VectorField) -> VectorField {
        let s = GaussScalar::sign((self.parity * o.parity) as i64);
        let a = self.apply(&o.a).sub(&o.apply(&self.a).scale(&s));
        let ai = (0..self.n).map(|i| self.apply(&o.ai[i]).sub(&o.apply(&self.ai[i]).scale(&s))).collect();
        VectorField { n: self.n, parity: (self.parity + o.parity) % 2, a, ai }
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField { n: self.n, parity: self.parity, a: self.a.add(&o.a), ai: self.ai.iter().zip(&o.ai).map(|(x, y)| x.add(y)).collect() }
    }
}

/// `f ↦ 2f∂_t + (−1)^{p(f)} Σ_i (ξ_i ∂_t f + ∂_i f)(ξ_i ∂_t + ∂_i)`, for parity-homogeneous `f`.
pub fn to_vector_field(f: &AnnihilationElement) -> Result<VectorField> {
    let n = f.n;
    let p = f.parity().ok_or_else(|| Error::Unsupported("vector field of a parity-mixed element".into()))?;
    let sign = GaussScalar::sign(p as i64);
    let mut a = f.scale(&int(2));
    let mut ai = Vec::with_capacity(n);
    for i in 1..=n {
        let xi = AnnihilationElement::xi(n, i);
        let ci = xi.mul(&f.d_t()).add(&f.d_xi(i)).scale(&sign);
        a = a.add(&ci.mul(&xi));
        ai.push(ci);
    }
    Ok(VectorField { n, parity: p, a, ai })
}

/// Grading element `∂ = −½·1` of the annihilation algebra.
pub fn partial_element(n: usize) -> AnnihilationElement {
    AnnihilationElement::mono(n, 0, Mono::ONE, GaussScalar::from_ratio(-1, 2))
}

/// Basis of `(K(1,n)_+)_j`.
pub fn graded_basis(n: usize, j: i64) -> Vec<AnnihilationElement> {
    let mut out = Vec::new();
    for m in all_monos(n) {
        let rest = j + 2 - m.degree() as i64;
        if rest >= 0 && rest % 2 == 0 {
            out.push(AnnihilationElement::mono(n, (rest / 2) as u32, m, GaussScalar::one()));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// checkers

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub basis: String,
    pub cases: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub n: usize,
    pub tmax: u32,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl AxiomReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tally {
    checks: Vec<Check>,
    counterexample: Option<String>,
}

impl Tally {
    fn push(&mut self, name: &str, basis: &str, cases: usize, failure: Option<String>) {
        if self.counterexample.is_none() {
            self.counterexample = failure.as_ref().map(|f| format!("{name}: {f}"));
        }
        self.checks.push(Check { name: name.into(), basis: basis.into(), cases, passed: failure.is_none() });
    }
}

/// Exhaustive check of the conformal axioms for a monomial bracket.
pub fn check_conformal_axioms_with(br: &MonoBracket, n: usize, t: &mut Vec<Check>, cx: &mut Option<String>) {
    let monos = all_monos(n);
    let mut tally = Tally { checks: Vec::new(), counterexample: None };

    // sesquilinearity: ∂ is a derivation of the bracket
    let mut fail = None;
    let mut cases = 0;
    for &a in &monos {
        for &b in &monos {
            cases += 1;
            let ea = ConformalElement::mono(n, 0, a, GaussScalar::one());
            let eb = ConformalElement::mono(n, 0, b, GaussScalar::one());
            let lhs = bracket_with(br, &ea.partial(), &eb);
            let rhs = bracket_with(br, &ea, &eb).times_minus_lambda();
            let lhs2 = bracket_with(br, &ea, &eb.partial());
            let rhs2 = bracket_with(br, &ea, &eb).times_lambda_plus_d();
            if (lhs != rhs || lhs2 != rhs2) && fail.is_none() {
                fail = Some(format!("a={}, b={}", mono_str(a), mono_str(b)));
            }
        }
    }
    tally.push("sesquilinearity", "[da_l b] = -l[a_l b] and [a_l db] = (l+d)[a_l b]", cases, fail);

    let mut fail = None;
    let mut cases = 0;
    let mut deg_fail = None;
    for &a in &monos {
        for &b in &monos {
            cases += 1;
            let d = skew_defect(br, n, a, b);
            if !d.is_zero() && fail.is_none() {
                fail = Some(format!("a={}, b={}, defect={d}", mono_str(a), mono_str(b)));
            }
            if br(n, a, b).degree().unwrap_or(0) > 1 && deg_fail.is_none() {
                deg_fail = Some(format!("a={}, b={}", mono_str(a), mono_str(b)));
            }
        }
    }
    tally.push("skew_symmetry", "[a_l b] = -(-1)^{p(a)p(b)} [b_{-l-d} a]", cases, fail);
    tally.push("lambda_degree", "lambda-degree of [f_l g] is at most 1 on monomials", cases, deg_fail);

    let mut fail = None;
    let mut cases = 0;
    'outer: for &a in &monos {
        for &b in &monos {
            for &c in &monos {
                cases += 1;
                let d = jacobi_defect(br, n, a, b, c);
                if !d.is_zero() {
                    fail = Some(format!("a={}, b={}, c={}", mono_str(a), mono_str(b), mono_str(c)));
                    break 'outer;
                }
            }
        }
    }
    tally.push("jacobi", "[a_l[b_m c]] - (-1)^{p(a)p(b)}[b_m[a_l c]] = [[a_l b]_{l+m} c] as a polynomial in (l, m)", cases, fail);
    t.extend(tally.checks);
    if cx.is_none() {
        *cx = tally.counterexample;
    }
}

fn ann_monos(n: usize, tmax: u32) -> Vec<AnnihilationElement> {
    let mut v = Vec::new();
    for m in all_monos(n) {
        for p in 0..=tmax {
            v.push(AnnihilationElement::mono(n, p, m, GaussScalar::one()));
        }
    }
    v
}

/// λ-bracket route, contact bracket, and vector-field commutator agree on all
/// monomials `t^p ξ_I` with `p ≤ tmax`; the grading is additive.
pub fn check_bracket_consistency(n: usize, tmax: u32, t: &mut Vec<Check>, cx: &mut Option<String>) {
    let els = ann_monos(n, tmax);
    let fields: Vec<VectorField> = els.iter().map(|x| to_vector_field(x).expect("homogeneous")).collect();
    let mut tally = Tally { checks: Vec::new(), counterexample: None };
    let (mut f1, mut f2, mut f3) = (None, None, None);
    let mut cases = 0;
    for (i, x) in els.iter().enumerate() {
        for (j, y) in els.iter().enumerate() {
            cases += 1;
            let via_products = ann_bracket_with(&mono_bracket, x, y);
            let contact = contact_bracket(x, y);
            if via_products != contact && f1.is_none() {
                f1 = Some(format!("x={x}, y={y}: {via_products} vs {contact}"));
            }
            let vf = to_vector_field(&contact).unwrap_or_else(|_| VectorField {
                n,
                parity: 0,
                a: AnnihilationElement::zero(n),
                ai: vec![AnnihilationElement::zero(n); n],
            });
            let comm = fields[i].commutator(&fields[j]);
            let same = if contact.is_zero() { comm.a.is_zero() && comm.ai.iter().all(|c| c.is_zero()) } else { vf.a == comm.a && vf.ai == comm.ai };
            if !same && f2.is_none() {
                f2 = Some(format!("x={x}, y={y}"));
            }
            if let (Some(gx), Some(gy)) = (x.grade(), y.grade()) {
                if !contact.is_zero() && contact.grade() != Some(gx + gy) && f3.is_none() {
                    f3 = Some(format!("x={x}, y={y}"));
                }
            }
        }
    }
    tally.push("products_vs_contact", "t-expansion of the n-th products equals the contact bracket", cases, f1);
    tally.push("contact_vs_vector_fields", "vector field of [f,g] equals the commutator of the vector fields", cases, f2);
    tally.push("grading_additive", "deg [x,y] = deg x + deg y", cases, f3);

    // contact condition: D ω = f_D ω, ω = dt − Σ ξ_i dξ_i; checked via D(t) − Σ ξ_i D(ξ_i) ... see below
    let mut f4 = None;
    for (x, vf) in els.iter().zip(&fields) {
        if let Some(err) = contact_condition_failure(x, vf) {
            f4.get_or_insert(err);
        }
    }
    tally.push("contact_condition", "each image vector field rescales the contact form", els.len(), f4);

    // (L1)-(L3): depth 2 and ∂ = −½·1 maps g_i onto g_{i−2}
    let mut f5 = None;
    let dd = partial_element(n);
    for i in 0..=2i64 {
        let img: Vec<AnnihilationElement> = graded_basis(n, i).iter().map(|x| ann_bracket_with(&mono_bracket, &dd, x)).collect();
        let target = graded_basis(n, i - 2);
        let mut rows = Vec::new();
        for e in &img {
            if !e.is_zero() && e.grade() != Some(i - 2) {
                f5.get_or_insert(format!("[d, g_{i}] leaves g_{}", i - 2));
            }
            rows.push(to_row(e, &target));
        }
        if crate::linalg::rank(rows) != target.len() {
            f5.get_or_insert(format!("[d, g_{i}] does not span g_{}", i - 2));
        }
    }
    if !graded_basis(n, -3).is_empty() {
        f5.get_or_insert("depth exceeds 2".into());
    }
    tally.push("grading_element", "depth 2; [d, g_i] = g_{i-2} for i = 0, 1, 2 with d = -1/2", 3, f5);
    t.extend(tally.checks);
    if cx.is_none() {
        *cx = tally.counterexample;
    }
}

fn to_row(e: &AnnihilationElement, basis: &[AnnihilationElement]) -> crate::linalg::Row {
    let mut r = crate::linalg::Row::new();
    for (k, b) in basis.iter().enumerate() {
        let key = b.terms.first().unwrap().0;
        let c = e.terms.get(key);
        if !c.is_zero() {
            r.insert(k, c);
        }
    }
    r
}

/// With `L_D(dt) = d(D t)`-type rules, `L_D ω = D(dt) − Σ D(ξ_i) dξ_i − Σ ξ_i D(dξ_i)`.
/// Writing the 1-form in the basis (dt, dξ_j), the condition is that it equals `f_D·ω`.
fn contact_condition_failure(x: &AnnihilationElement, vf: &VectorField) -> Option<String> {
    let n = x.n;
    let s = GaussScalar::sign(vf.parity as i64);
    // d(h) = (∂_t h) dt + Σ_j (∂_j h) dξ_j, with sign (−1)^{p(h)+1}... handled by left derivatives:
    // for even dξ_j and a left derivative, d h = dt·∂_t h + Σ dξ_j ∂_j h; dt is odd so we keep
    // coefficients to the right of dt and move them to the left with the parity sign.
    let coeff_dt = |h: &AnnihilationElement| -> AnnihilationElement {
        // dt · ∂_t h = (−1)^{p(h)} (∂_t h) dt
        let (e, o) = h.d_t().split_parity();
        e.sub(&o)
    };
    // L_D(dt) = (−1)^{p(D)} d(a), L_D(dξ_i) = (−1)^{p(D)} d(a_i)
    // coefficient of dt in L_D ω:
    let mut c_dt = coeff_dt(&vf.a).scale(&s);
    let mut c_dxi: Vec<AnnihilationElement> = (1..=n).map(|j| vf.a.d_xi(j).scale(&s)).collect();
    for i in 1..=n {
        let xi = AnnihilationElement::xi(n, i);
        // − D(ξ_i ∧ dξ_i) = −D(ξ_i) dξ_i − (−1)^{p(D)} ξ_i D(dξ_i)
        c_dxi[i - 1] = c_dxi[i - 1].sub(&vf.ai[i - 1]);
        c_dt = c_dt.sub(&xi.mul(&coeff_dt(&vf.ai[i - 1])).scale(&s).scale(&s));
        for j in 1..=n {
            c_dxi[j - 1] = c_dxi[j - 1].sub(&xi.mul(&vf.ai[i - 1].d_xi(j)).scale(&s).scale(&s));
        }
    }
    // f_D from the dt coefficient; then check dξ_j coefficients equal −f_D ξ_j
    let f = c_dt;
    for j in 1..=n {
        let expected = f.mul(&AnnihilationElement::xi(n, j)).scale(&int(-1));
        // ω = dt − Σ ξ_j dξ_j, so f·ω has dξ_j coefficient −f ξ_j
        if c_dxi[j - 1] != expected {
            return Some(format!("x={x}: dxi_{j} coefficient"));
        }
    }
    None
}

/// Full axiom report for `K_n` and `K(1,n)_+`.
pub fn check_axioms(n: usize, tmax: u32) -> AxiomReport {
    check_axioms_with(&mono_bracket, n, tmax)
}

pub fn check_axioms_with(br: &MonoBracket, n: usize, tmax: u32) -> AxiomReport {
    let mut checks = Vec::new();
    let mut cx = None;
    check_conformal_axioms_with(br, n, &mut checks, &mut cx);
    check_bracket_consistency(n, tmax, &mut checks, &mut cx);
    AxiomReport { n, tmax, passed: checks.iter().all(|c| c.passed), checks, counterexample: cx }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ce(n: usize, idx: &[usize]) -> ConformalElement {
        ConformalElement::mono(n, 0, Mono::from_indices(idx), GaussScalar::one())
    }

    fn ae(n: usize, p: u32, idx: &[usize]) -> AnnihilationElement {
        AnnihilationElement::mono(n, p, Mono::from_indices(idx), GaussScalar::one())
    }

    #[test]
    fn bracket_examples() {
        let n = 2;
        let p = lambda_bracket(&ce(n, &[]), &ce(n, &[])).unwrap();
        let expect =
            LambdaPoly::from_coeffs(n, &[(0, ConformalElement::mono(n, 1, Mono::ONE, int(-2))), (1, ConformalElement::mono(n, 0, Mono::ONE, int(-4)))]);
        assert_eq!(p, expect);
        let p = lambda_bracket(&ce(n, &[1]), &ce(n, &[1])).unwrap();
        assert_eq!(p, LambdaPoly::from_coeffs(n, &[(0, ConformalElement::mono(n, 0, Mono::ONE, int(-1)))]));
        assert!(lambda_bracket(&ce(n, &[1, 2]), &ce(n, &[1, 2])).unwrap().is_zero());
        assert!(lambda_bracket(&ce(2, &[]), &ce(3, &[])).is_err());
    }

    #[test]
    fn nth_products() {
        let one = ce(1, &[]);
        assert_eq!(nth_product(&one, 0, &one).unwrap(), ConformalElement::mono(1, 1, Mono::ONE, int(-2)));
        assert_eq!(nth_product(&one, 1, &one).unwrap(), ConformalElement::mono(1, 0, Mono::ONE, int(-4)));
        assert!(nth_product(&one, 2, &one).unwrap().is_zero());
    }

    #[test]
    fn substitution() {
        let n = 0;
        let lam = LambdaPoly { n, terms: Lin::single((1, 0, Mono::ONE), int(1)) };
        let got = subst_neg(&lam);
        let mut want = Lin::new();
        want.add_term((1, 0, Mono::ONE), int(-1));
        want.add_term((0, 1, Mono::ONE), int(-1));
        assert_eq!(got.terms, want);
        let c = LambdaPoly { n, terms: Lin::single((0, 0, Mono::ONE), int(3)) };
        assert_eq!(subst_neg(&c), c);
        let sq = LambdaPoly { n, terms: Lin::single((2, 0, Mono::ONE), int(1)) };
        let mut want = Lin::new();
        want.add_term((2, 0, Mono::ONE), int(1));
        want.add_term((1, 1, Mono::ONE), int(2));
        want.add_term((0, 2, Mono::ONE), int(1));
        assert_eq!(subst_neg(&sq).terms, want);
    }

    #[test]
    fn annihilation_examples() {
        let n = 3;
        assert_eq!(ann_bracket(&ae(n, 1, &[1]), &ae(n, 0, &[1])).unwrap(), ae(n, 1, &[]).scale(&int(-1)));
        assert_eq!(ann_bracket(&ae(n, 0, &[2]), &ae(n, 0, &[2])).unwrap(), ae(n, 0, &[]).scale(&int(-1)));
        assert_eq!(ann_bracket(&ae(n, 1, &[]), &ae(n, 0, &[])).unwrap(), ae(n, 0, &[]).scale(&int(-2)));
        assert_eq!(grading(0, Mono::ONE), -2);
        assert_eq!(grading(0, Mono::xi(1)), -1);
        assert_eq!(grading(1, Mono::xi(1)), 1);
    }

    #[test]
    fn contact_examples() {
        let n = 3;
        assert_eq!(contact_bracket(&ae(n, 1, &[]), &ae(n, 0, &[])), ae(n, 0, &[]).scale(&int(-2)));
        let f12 = AnnihilationElement::f_ij(n, 1, 2);
        let f23 = AnnihilationElement::f_ij(n, 2, 3);
        assert_eq!(contact_bracket(&f12, &f23), AnnihilationElement::f_ij(n, 1, 3));
        let g = ae(n, 3, &[1, 3]);
        assert_eq!(contact_bracket(&ae(n, 0, &[]), &g), g.d_t().scale(&int(2)));
    }

    #[test]
    fn vector_field_examples() {
        let n = 2;
        let one = to_vector_field(&ae(n, 0, &[])).unwrap();
        assert_eq!(one.a, ae(n, 0, &[]).scale(&int(2)));
        assert!(one.ai.iter().all(|c| c.is_zero()));
        let x1 = to_vector_field(&ae(n, 0, &[1])).unwrap();
        assert_eq!(x1.a, ae(n, 0, &[1]));
        assert_eq!(x1.ai[0], ae(n, 0, &[]).scale(&int(-1)));
        assert!(x1.ai[1].is_zero());
        let t = to_vector_field(&ae(n, 1, &[])).unwrap();
        assert_eq!(t.a, ae(n, 1, &[]).scale(&int(2)));
        assert_eq!(t.ai[0], ae(n, 0, &[1]));
        assert_eq!(t.ai[1], ae(n, 0, &[2]));
    }

    #[test]
    fn axioms_small_n() {
        for n in 0..=3 {
            let r = check_axioms(n, 2);
            assert!(r.passed, "n={n}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn corrupted_bracket_breaks_jacobi() {
        // flipping the sign of Σ ∂_i f ∂_i g is the rescaling ξ_i → iξ_i, an isomorphism;
        // doubling the λ-term of the bracket of 1 with itself is not
        let bad = |n: usize, f: Mono, g: Mono| {
            let mut p = mono_bracket(n, f, g);
            if f == Mono::ONE && g == Mono::ONE {
                let good = p.clone();
                p.terms = Lin::new();
                for ((l, k, m), c) in &good.terms {
                    p.terms.add_term((*l, *k, *m), if *l == 1 { c.clone() * int(2) } else { c.clone() });
                }
            }
            p
        };
        let r = check_axioms_with(&bad, 2, 1);
        assert!(!r.check("jacobi").unwrap().passed);
        assert!(!r.passed);
    }
}
