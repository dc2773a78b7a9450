//! Non-trivial singular vectors of `Ind(F)`.
//!
//! Unknowns are the Hodge-dual basis terms `∂^k ξ_J⊗v_b`, `k ≤ dmax`. A vector
//! is singular iff every positive-grade mode of `K(1,n)_+` and the nilradical
//! of the Borel subalgebra of `so(n)` kill it; in λ-language: all λ^{≥2}
//! coefficients of `f_λ m` vanish, the λ¹ coefficient for `|f| ≥ 1`, and the λ⁰
//! coefficient for `|f| ≥ 3` or `f` in the Borel nilradical. The action is
//! graded, so the system splits into blocks of fixed grade; the grade-0 block
//! (`1⊗F`) is the trivial part and is never solved for.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grassmann::{all_monos, GrassmannElement, Mono};
use crate::induced::{hodge_inverse, Basis, IndKey, Induced, InducedVector};
use crate::kn_algebra::{grading, AnnihilationElement};
use crate::linalg::{nullspace, Echelon, Row};
use crate::scalar::{GaussScalar, Rational};
use crate::so_rep::{alpha, beta, borel_basis, build_irrep, gamma, rank_of, root_vector, SoElement, SoRep, Weight};
use crate::sparse::Lin;

fn int(k: i64) -> GaussScalar {
    GaussScalar::from_int(k)
}

fn rat(r: &Rational) -> GaussScalar {
    GaussScalar::real(r.clone())
}

/// Sign of the `ξ_{(2m+1)^c}⊗w_{m+1}` coordinate (odd `n`): `v_{2m+1} = s·i·w_{m+1}`.
/// `+1` is the only choice under which the predicted odd-`n` vectors are
/// singular; with `−1` the `ξ_a` mode-0 conditions fail (see tests).
pub const ODD_SIGN: i64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    A,
    B,
    C3,
    #[serde(rename = "unknown-trivial")]
    UnknownTrivial,
    #[serde(rename = "unknown")]
    Unknown,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C3 => "C3",
            Family::UnknownTrivial => "unknown-trivial",
            Family::Unknown => "unknown",
        };
        write!(f, "{s}")
    }
}

/// What the classification predicts for a weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    /// No non-trivial singular vector.
    None,
    A,
    B,
    C3,
    /// Boundary weight whose status is not settled by the classification
    /// statement (`k = 0` members); the computed answer is recorded as-is.
    Open,
}

// ---------------------------------------------------------------- system

/// The stacked linear system over the dual-basis unknowns.
pub struct SingularCandidateSpace {
    pub n: usize,
    pub dmax: u32,
    pub basis: Vec<IndKey>,
    pub rows: Vec<Row>,
    /// Row counts from the λ^{≥2}, λ¹ and λ⁰ conditions.
    pub rows_by_source: [usize; 3],
}

/// Element `Σ c_ab F_ab` of `so(n)` as `−Σ c_ab ξ_aξ_b ∈ Λ(n)`.
pub fn so_as_grassmann(n: usize, x: &SoElement) -> GrassmannElement {
    let mut terms = Lin::new();
    for (&(a, b), c) in x {
        terms.add_term(Mono::from_indices(&[a, b]), -c.clone());
    }
    GrassmannElement { n, terms }
}

fn so_as_annihilation(n: usize, x: &SoElement) -> AnnihilationElement {
    let mut out = AnnihilationElement::zero(n);
    for (&(a, b), c) in x {
        out = out.add(&AnnihilationElement::f_ij(n, a, b).scale(c));
    }
    out
}

/// `2k + |J^c|`: minus the grade of a dual-basis term.
fn depth_dual(n: usize, key: &IndKey) -> i64 {
    2 * key.0 as i64 + (n - key.1.degree()) as i64
}

fn depth_natural(key: &IndKey) -> i64 {
    2 * key.0 as i64 + key.1.degree() as i64
}

pub fn dual_basis(n: usize, dim: usize, dmax: u32) -> Vec<IndKey> {
    let mut out = Vec::new();
    for k in 0..=dmax {
        for m in all_monos(n) {
            for b in 0..dim {
                out.push((k, m, b));
            }
        }
    }
    out
}

/// Generators with the λ-powers they constrain: `(f, lowest power, only λ⁰)`.
fn generators(n: usize) -> Vec<(GrassmannElement, u32, bool)> {
    let mut gens = Vec::new();
    for f in all_monos(n) {
        let lmin = match f.degree() {
            0 => 2,
            1 | 2 => 1,
            _ => 0,
        };
        gens.push((GrassmannElement::mono(n, f, int(1)), lmin, false));
    }
    for (_, x) in borel_basis(n) {
        gens.push((so_as_grassmann(n, &x), 0, true));
    }
    gens
}

pub fn build_constraints(ind: &Induced, dmax: u32) -> Result<SingularCandidateSpace> {
    let n = ind.n;
    let basis = dual_basis(n, ind.rep.dim, dmax);
    let mut rows: BTreeMap<(usize, u32, IndKey), Row> = BTreeMap::new();
    let mut by_source = [0usize; 3];
    for (gi, (f, lmin, only0)) in generators(n).iter().enumerate() {
        for (col, &(k, m, b)) in basis.iter().enumerate() {
            let u = InducedVector::mono(n, Basis::Dual, k, m, b, int(1));
            let a = ind.lambda_action_dual(f, &u)?;
            for (&(l, kk, mm, bb), c) in &a.terms {
                if l < *lmin || (*only0 && l > 0) {
                    continue;
                }
                let e = rows.entry((gi, l, (kk, mm, bb))).or_default();
                if e.is_empty() {
                    by_source[if l >= 2 { 0 } else { 2 - l as usize }] += 1;
                }
                e.insert(col, c.clone());
            }
        }
    }
    Ok(SingularCandidateSpace { n, dmax, basis, rows: rows.into_values().collect(), rows_by_source: by_source })
}

impl SingularCandidateSpace {
    /// Nullspace restricted to the non-trivial blocks, one basis per grade.
    pub fn nontrivial_nullspace(&self) -> BTreeMap<i64, Vec<InducedVector>> {
        let n = self.n;
        let block_of: Vec<i64> = self.basis.iter().map(|k| depth_dual(n, k)).collect();
        let mut cols: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (c, d) in block_of.iter().enumerate() {
            cols.entry(*d).or_default().push(c);
        }
        let mut local: HashMap<usize, usize> = HashMap::new();
        for cs in cols.values() {
            for (i, c) in cs.iter().enumerate() {
                local.insert(*c, i);
            }
        }
        let mut rows_in: BTreeMap<i64, Vec<Row>> = BTreeMap::new();
        for r in &self.rows {
            let Some((&c0, _)) = r.iter().next() else { continue };
            let d = block_of[c0];
            debug_assert!(r.keys().all(|c| block_of[*c] == d), "constraint row mixes grades");
            if d == 0 {
                continue;
            }
            rows_in.entry(d).or_default().push(r.iter().map(|(c, x)| (local[c], x.clone())).collect());
        }
        let mut out = BTreeMap::new();
        for (d, cs) in &cols {
            if *d == 0 {
                continue;
            }
            let ns = nullspace(rows_in.remove(d).unwrap_or_default(), cs.len());
            if ns.is_empty() {
                continue;
            }
            let vs = ns
                .into_iter()
                .map(|r| {
                    let terms = r.into_iter().map(|(i, x)| (self.basis[cs[i]], x)).collect();
                    InducedVector { n, basis: Basis::Dual, terms }
                })
                .collect();
            out.insert(-d, vs);
        }
        out
    }
}

// ---------------------------------------------------------------- weights

/// `H_j·w` (`H_j = −iξ_{2j−1}ξ_{2j}`), `w` in the dual basis.
pub fn h_action(ind: &Induced, j: usize, w: &InducedVector) -> Result<InducedVector> {
    let f = GrassmannElement::mono(ind.n, Mono::from_indices(&[2 * j - 1, 2 * j]), -GaussScalar::i());
    Ok(ind.lambda_action(&f, w)?.coeff(0))
}

/// `E_00·w = t·w`, the λ¹ coefficient of `1_λ w`.
pub fn e00_action(ind: &Induced, w: &InducedVector) -> Result<InducedVector> {
    Ok(ind.lambda_action(&GrassmannElement::one(ind.n), w)?.coeff(1))
}

fn combine(vs: &[InducedVector], a: &Row) -> InducedVector {
    let mut out = InducedVector::zero(vs[0].n, vs[0].basis);
    for (i, c) in a {
        out = out.add(&vs[*i].scale(c));
    }
    out
}

/// Split `span(vs)` into eigenspaces of `op` for the candidate eigenvalues.
/// Whatever the candidates miss is returned under `None`.
fn eigensplit(
    vs: &[InducedVector],
    op: &dyn Fn(&InducedVector) -> Result<InducedVector>,
    cands: &[Rational],
) -> Result<Vec<(Option<Rational>, Vec<InducedVector>)>> {
    let imgs: Vec<InducedVector> = vs.iter().map(op).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut found = 0;
    for c in cands {
        let mut by_key: BTreeMap<IndKey, Row> = BTreeMap::new();
        for (i, (v, hv)) in vs.iter().zip(&imgs).enumerate() {
            let u = hv.add(&v.scale(&-rat(c)));
            for (key, x) in &u.terms {
                by_key.entry(*key).or_default().insert(i, x.clone());
            }
        }
        let ns = nullspace(by_key.into_values(), vs.len());
        if !ns.is_empty() {
            found += ns.len();
            out.push((Some(c.clone()), ns.iter().map(|a| combine(vs, a)).collect()));
        }
    }
    if found < vs.len() {
        out.push((None, vs.to_vec()));
    }
    Ok(out)
}

/// Reduced echelon basis of a span (column order = basis-key order), so each
/// vector's first coefficient is 1.
pub fn canonical_basis(vs: &[InducedVector]) -> Vec<InducedVector> {
    if vs.is_empty() {
        return Vec::new();
    }
    let mut keys: Vec<IndKey> = vs.iter().flat_map(|v| v.terms.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let idx: HashMap<IndKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v.terms.iter().map(|(k, c)| (idx[k], c.clone())).collect());
    }
    let (n, basis) = (vs[0].n, vs[0].basis);
    e.reduced_rows().into_values().map(|r| InducedVector { n, basis, terms: r.into_iter().map(|(i, c)| (keys[i], c)).collect() }).collect()
}

// ---------------------------------------------------------------- families

fn dual_hat(n: usize, i: usize) -> Mono {
    Mono::xi(i).complement(n)
}

fn row_to_terms(out: &mut Lin<IndKey>, k: u32, m: Mono, v: &Row, c: &GaussScalar) {
    for (b, x) in v {
        out.add_term((k, m, *b), c * x);
    }
}

/// `(ξ_{2^c} − iξ_{1^c})⊗v_μ`.
pub fn family_a_vector(rep: &SoRep) -> InducedVector {
    let n = rep.n;
    let mut t = Lin::new();
    t.add_term((0, dual_hat(n, 2), rep.hw_index), int(1));
    t.add_term((0, dual_hat(n, 1), rep.hw_index), -GaussScalar::i());
    InducedVector { n, basis: Basis::Dual, terms: t }
}

/// `n = 3`: `∂(ξ_*⊗v) + iξ_{12^c}⊗v − 2ξ_{23^c}⊗F_23 v + 2ξ_{13^c}⊗F_13 v`.
pub fn family_c_vector(rep: &SoRep) -> Result<InducedVector> {
    if rep.n != 3 {
        return Err(Error::Unsupported("the ∂-family exists only for n = 3".into()));
    }
    let v = rep.hw();
    let mut t = Lin::new();
    t.add_term((1, Mono::top(3), rep.hw_index), int(1));
    t.add_term((0, Mono::xi(3), rep.hw_index), GaussScalar::i());
    row_to_terms(&mut t, 0, Mono::xi(1), &rep.act_f(2, 3, &v), &int(-2));
    row_to_terms(&mut t, 0, Mono::xi(2), &rep.act_f(1, 3, &v), &int(2));
    Ok(InducedVector { n: 3, basis: Basis::Dual, terms: t })
}

fn neg_root(n: usize, pairs: &[(usize, i32)]) -> Result<SoElement> {
    let mut r = vec![0; rank_of(n)];
    for &(k, s) in pairs {
        r[k - 1] = s;
    }
    root_vector(n, &r)
}

/// `μ = (n+k−2; k, 0, …)`: returns `k`.
fn family_b_k(n: usize, w: &Weight) -> Option<Rational> {
    if !w.mu0.is_real() || w.mu.is_empty() || w.mu[1..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let k = w.mu[0].clone();
    (w.mu0.re == &k + &Rational::from_int(n as i64 - 2)).then_some(k)
}

/// The `w_l, w̄_l, w_{m+1}` of the second family, all determined by `w_1 = v_μ`.
pub struct FamilyBData {
    pub w: Vec<Row>,
    pub wbar: Vec<Row>,
    pub w_odd: Option<Row>,
}

pub fn family_b_data(rep: &SoRep) -> Result<FamilyBData> {
    let n = rep.n;
    let m = rank_of(n);
    let odd = n % 2 == 1;
    let k = family_b_k(n, &rep.weight).ok_or_else(|| Error::Unsupported(format!("weight {} is not of the form (n+k-2; k, 0, ...)", rep.weight)))?;
    if k.is_zero() {
        return Err(Error::Unsupported("k = 0: the explicit formulas divide by mu_1".into()));
    }
    if n == 3 && k == Rational::new(1, 2) {
        return Err(Error::Unsupported("n = 3, k = 1/2 is excluded".into()));
    }
    let mu1 = rat(&k);
    let inv_2mu1 = (&int(2) * &mu1).inv()?;
    let w1 = rep.hw();
    let mut w = vec![w1.clone()];
    let mut wbar = vec![Row::new()];
    for l in 2..=m {
        let em = rep.act(&neg_root(n, &[(1, -1), (l, 1)])?, &w1);
        let ep = rep.act(&neg_root(n, &[(1, -1), (l, -1)])?, &w1);
        w.push(scale_row(&em, &-inv_2mu1.clone()));
        wbar.push(scale_row(&ep, &inv_2mu1));
    }
    let w_odd = if odd {
        let e1 = rep.act(&neg_root(n, &[(1, -1)])?, &w1);
        Some(scale_row(&e1, &-mu1.inv()?))
    } else {
        None
    };
    // w̄_1 = C[Σ_{l>1} E_{−(ε1+εl)}E_{−(ε1−εl)}w_1 + δ_odd E_{−ε1}²w_1]
    let mut s = Row::new();
    for l in 2..=m {
        let x = rep.act(&neg_root(n, &[(1, -1), (l, 1)])?, &w1);
        s = add_row(&s, &rep.act(&neg_root(n, &[(1, -1), (l, -1)])?, &x));
    }
    if odd {
        let e = neg_root(n, &[(1, -1)])?;
        s = add_row(&s, &rep.act(&e, &rep.act(&e, &w1)));
    }
    let c = (&(&int(2) * &mu1) * &(&int(n as i64 - 4) + &(&int(2) * &mu1))).inv()?;
    wbar[0] = scale_row(&s, &c);
    Ok(FamilyBData { w, wbar, w_odd })
}

/// Assemble `Σ_l [(ξ_{2l^c} + iξ_{2l−1^c})⊗w_l + (ξ_{2l^c} − iξ_{2l−1^c})⊗w̄_l] + s·iξ_{2m+1^c}⊗w_{m+1}`.
pub fn assemble_family_b(n: usize, d: &FamilyBData, odd_sign: i64) -> InducedVector {
    let i = GaussScalar::i();
    let mut t = Lin::new();
    for l in 1..=rank_of(n) {
        row_to_terms(&mut t, 0, dual_hat(n, 2 * l), &d.w[l - 1], &int(1));
        row_to_terms(&mut t, 0, dual_hat(n, 2 * l - 1), &d.w[l - 1], &i);
        row_to_terms(&mut t, 0, dual_hat(n, 2 * l), &d.wbar[l - 1], &int(1));
        row_to_terms(&mut t, 0, dual_hat(n, 2 * l - 1), &d.wbar[l - 1], &-i.clone());
    }
    if let Some(wo) = &d.w_odd {
        row_to_terms(&mut t, 0, dual_hat(n, n), wo, &(&i * &int(odd_sign)));
    }
    InducedVector { n, basis: Basis::Dual, terms: t }
}

/// The predicted second-family vector, from `w_1 = v_μ`.
pub fn predicted_family_b(rep: &SoRep) -> Result<InducedVector> {
    Ok(assemble_family_b(rep.n, &family_b_data(rep)?, ODD_SIGN))
}

fn is_trivial(n: usize, v: &InducedVector) -> bool {
    v.terms.keys().all(|k| depth_dual(n, k) == 0)
}

fn proportional(a: &InducedVector, b: &InducedVector) -> bool {
    a.basis == b.basis && a.terms.proportional(&b.terms)
}

/// Tag a (dual-basis) solver output with its family.
pub fn classify(v: &InducedVector, rep: &SoRep) -> Family {
    let n = rep.n;
    if v.is_zero() || v.basis != Basis::Dual {
        return Family::Unknown;
    }
    if is_trivial(n, v) {
        return Family::UnknownTrivial;
    }
    if n >= 2 && proportional(v, &family_a_vector(rep)) {
        return Family::A;
    }
    if n == 3 {
        if let Ok(c) = family_c_vector(rep) {
            if proportional(v, &c) {
                return Family::C3;
            }
        }
    }
    match predicted_family_b(rep) {
        Ok(p) if proportional(v, &p) => return Family::B,
        Ok(_) => {}
        Err(_) => {
            // no explicit formula (k = 0): fall back to the support pattern
            let shape = v.terms.keys().all(|&(k, m, _)| k == 0 && m.degree() + 1 == n);
            if shape && family_b_k(n, &rep.weight).is_some() {
                return Family::B;
            }
        }
    }
    Family::Unknown
}

/// Classification prediction for the weight of `F`.
pub fn expected(n: usize, w: &Weight) -> Expected {
    if !w.mu0.is_real() || w.mu.is_empty() || w.mu[1..].iter().any(|x| !x.is_zero()) {
        return Expected::None;
    }
    let mu0 = &w.mu0.re;
    let k = &w.mu[0];
    let zero = Rational::zero();
    if n == 3 {
        let half = Rational::new(1, 2);
        if *k == half && *mu0 == Rational::new(3, 2) {
            return Expected::C3;
        }
        if *k > zero && *mu0 == -k.clone() {
            return Expected::A;
        }
        if *k > zero && *k != half && *mu0 == k + &Rational::one() {
            return Expected::B;
        }
        if k.is_zero() && (mu0.is_zero() || *mu0 == Rational::one()) {
            return Expected::Open;
        }
        return Expected::None;
    }
    if !k.is_integer() {
        return Expected::None;
    }
    if *k > zero && *mu0 == -k.clone() {
        return Expected::A;
    }
    if *k > zero && *mu0 == k + &Rational::from_int(n as i64 - 2) {
        return Expected::B;
    }
    if k.is_zero() && (mu0.is_zero() || *mu0 == Rational::from_int(n as i64 - 2)) {
        return Expected::Open;
    }
    Expected::None
}

// ---------------------------------------------------------------- solve

#[derive(Clone, Debug)]
pub struct SingularVector {
    pub vector: InducedVector,
    /// `(E_00; H_1, …, H_m)` eigenvalues; `None` if not a weight vector.
    pub weight: Option<Weight>,
    pub grade: i64,
    pub family: Family,
}

impl SingularVector {
    pub fn max_dpow(&self) -> u32 {
        self.vector.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct SingularVectorReport {
    pub n: usize,
    pub weight: Weight,
    pub dmax: u32,
    pub unknowns: usize,
    pub rows_by_source: [usize; 3],
    pub vectors: Vec<SingularVector>,
    pub expected: Expected,
}

impl SingularVectorReport {
    /// Does the computed space agree with the classification? Open weights
    /// always agree (their answer is whatever was computed).
    pub fn matches_expectation(&self) -> bool {
        let fam = |f: Family| self.vectors.len() == 1 && self.vectors[0].family == f;
        match self.expected {
            Expected::None => self.vectors.is_empty(),
            Expected::A => fam(Family::A),
            Expected::B => fam(Family::B),
            Expected::C3 => fam(Family::C3),
            Expected::Open => true,
        }
    }

    pub fn max_dpow(&self) -> Option<u32> {
        self.vectors.iter().map(|v| v.max_dpow()).max()
    }

    pub fn to_json(&self, rep: &SoRep) -> Value {
        json!({
            "n": self.n,
            "mu": mu_strings(&self.weight),
            "dmax": self.dmax,
            "unknowns": self.unknowns,
            "rows": {"lambda2": self.rows_by_source[0], "lambda1": self.rows_by_source[1], "lambda0": self.rows_by_source[2]},
            "expected": self.expected,
            "matches": self.matches_expectation(),
            "dimension": self.vectors.len(),
            "vectors": self.vectors.iter().map(|v| json!({
                "weight": v.weight.as_ref().map(|w| w.to_string()),
                "grade": v.grade,
                "family": v.family,
                "display": v.vector.display(rep),
                "vector": vector_json(&v.vector, &self.weight),
            })).collect::<Vec<_>>(),
        })
    }
}

fn mu_strings(w: &Weight) -> Vec<String> {
    std::iter::once(w.mu0.to_string()).chain(w.mu.iter().map(|x| x.to_string())).collect()
}

/// `{"n", "mu", "basis", "terms": [{"dpow", "xi", "vecIndex", "coeff": [re, im]}]}`.
pub fn vector_json(v: &InducedVector, w: &Weight) -> Value {
    json!({
        "n": v.n,
        "mu": mu_strings(w),
        "basis": v.basis,
        "terms": v.terms.iter().map(|(&(k, m, b), c)| json!({
            "dpow": k,
            "xi": m.indices(),
            "vecIndex": b,
            "coeff": c.to_pair(),
        })).collect::<Vec<_>>(),
    })
}

pub fn solve(n: usize, w: &Weight, dmax: u32) -> Result<SingularVectorReport> {
    let rep = build_irrep(n, w)?;
    solve_induced(&Induced::new(rep), dmax)
}

pub fn solve_induced(ind: &Induced, dmax: u32) -> Result<SingularVectorReport> {
    let n = ind.n;
    let rep = &ind.rep;
    let space = build_constraints(ind, dmax)?;
    let m = rank_of(n);
    let mut vectors = Vec::new();
    for (grade, vs) in space.nontrivial_nullspace() {
        // split by (H_1, …, H_m)
        let mut parts: Vec<(Vec<Option<Rational>>, Vec<InducedVector>)> = vec![(Vec::new(), vs)];
        for j in 1..=m {
            let mut cands: Vec<Rational> = Vec::new();
            for wb in &rep.weights {
                for e in -1..=1 {
                    cands.push(&wb[j - 1] + &Rational::from_int(e));
                }
            }
            cands.sort();
            cands.dedup();
            cands.reverse();
            let op = |x: &InducedVector| h_action(ind, j, x);
            let mut next = Vec::new();
            for (hs, span) in parts {
                for (h, sub) in eigensplit(&span, &op, &cands)? {
                    let mut hs2 = hs.clone();
                    hs2.push(h);
                    next.push((hs2, sub));
                }
            }
            parts = next;
        }
        for (hs, span) in parts {
            let weight = hs.iter().cloned().collect::<Option<Vec<Rational>>>().map(|mu| Weight { mu0: &rep.weight.mu0 + &int(grade), mu });
            for v in canonical_basis(&span) {
                let family = classify(&v, rep);
                vectors.push(SingularVector { vector: v, weight: weight.clone(), grade, family });
            }
        }
    }
    Ok(SingularVectorReport {
        n,
        weight: rep.weight.clone(),
        dmax,
        unknowns: space.basis.len(),
        rows_by_source: space.rows_by_source,
        vectors,
        expected: expected(n, &rep.weight),
    })
}

// ---------------------------------------------------------------- re-checks

/// Positive-grade monomials `t^p ξ_I` with grade `≤ bound`.
pub fn positive_monomials(n: usize, bound: i64) -> Vec<AnnihilationElement> {
    let mut out = Vec::new();
    let mut p = 0;
    while 2 * p as i64 - 2 <= bound {
        for m in all_monos(n) {
            let g = grading(p, m);
            if g > 0 && g <= bound {
                out.push(AnnihilationElement::mono(n, p, m, int(1)));
            }
        }
        p += 1;
    }
    out
}

/// The elements a singular vector must be killed by: positive-grade monomials
/// up to `bound` and the Borel nilradical.
fn annihilators(n: usize, bound: i64) -> Vec<(String, AnnihilationElement)> {
    let mut out: Vec<(String, AnnihilationElement)> = positive_monomials(n, bound).into_iter().map(|x| (x.to_string(), x)).collect();
    for (name, x) in borel_basis(n) {
        out.push((name, so_as_annihilation(n, &x)));
    }
    out
}

/// Direct `U(g)` check that `v` is killed by `g_{>0}` (all monomials of grade
/// `≤ bound`) and by the Borel nilradical; returns the failing elements.
pub fn oracle_failures(ind: &Induced, v: &InducedVector, bound: i64) -> Result<Vec<String>> {
    let nat = match v.basis {
        Basis::Dual => hodge_inverse(v),
        Basis::Natural => v.clone(),
    };
    let mut bad = Vec::new();
    for (name, x) in annihilators(ind.n, bound) {
        if !ind.pbw_apply(&x, &nat)?.is_zero() {
            bad.push(name);
        }
    }
    Ok(bad)
}

/// Exhaustive search in the natural basis `∂^k ξ_I⊗v`, `k ≤ dmax`, using only
/// `U(g)` annihilation conditions. Returns a canonical basis of the
/// non-trivial solution space.
pub fn brute_force(ind: &Induced, dmax: u32) -> Result<Vec<InducedVector>> {
    let n = ind.n;
    let dim = ind.rep.dim;
    let bound = 2 * dmax as i64 + n as i64;
    let ann = annihilators(n, bound);
    let mut out = Vec::new();
    let mut blocks: BTreeMap<i64, Vec<IndKey>> = BTreeMap::new();
    for key in dual_basis(n, dim, dmax) {
        let d = depth_natural(&key);
        if d > 0 {
            blocks.entry(d).or_default().push(key);
        }
    }
    for keys in blocks.values() {
        let mut rows: BTreeMap<(usize, IndKey), Row> = BTreeMap::new();
        for (col, &(k, m, b)) in keys.iter().enumerate() {
            let u = InducedVector::mono(n, Basis::Natural, k, m, b, int(1));
            for (xi, (_, x)) in ann.iter().enumerate() {
                for (key, c) in &ind.pbw_apply(x, &u)?.terms {
                    rows.entry((xi, *key)).or_default().insert(col, c.clone());
                }
            }
        }
        let ns = nullspace(rows.into_values(), keys.len());
        let vs: Vec<InducedVector> =
            ns.into_iter().map(|r| InducedVector { n, basis: Basis::Natural, terms: r.into_iter().map(|(i, c)| (keys[i], c)).collect() }).collect();
        out.extend(canonical_basis(&vs));
    }
    Ok(out)
}

/// Do two families of vectors span the same space?
pub fn same_span(a: &[InducedVector], b: &[InducedVector]) -> bool {
    let all: Vec<InducedVector> = a.iter().chain(b).cloned().collect();
    let r = |vs: &[InducedVector]| canonical_basis(vs).len();
    let ra = r(a);
    ra == r(b) && ra == r(&all)
}

/// Support in `{∂ξ_*} ∪ {ξ_J : |J| ≥ n−2}` (dual labels).
pub fn has_reduced_support(v: &InducedVector) -> bool {
    let n = v.n;
    v.terms.keys().all(|&(k, m, _)| (k == 1 && m == Mono::top(n)) || (k == 0 && m.degree() + 2 >= n))
}

// ---------------------------------------------------------------- coordinates

fn add_row(a: &Row, b: &Row) -> Row {
    scaled_sum(&[(a, int(1)), (b, int(1))])
}

fn scale_row(a: &Row, c: &GaussScalar) -> Row {
    scaled_sum(&[(a, c.clone())])
}

fn scaled_sum(parts: &[(&Row, GaussScalar)]) -> Row {
    let mut out: Lin<usize> = Lin::new();
    for (r, c) in parts {
        for (k, x) in *r {
            out.add_term(*k, x * c);
        }
    }
    out.into_terms().into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpotcheckReport {
    pub relations: Vec<Relation>,
    pub passed: bool,
}

/// Coordinates `v_i` of `m = Σ_i ξ_{i^c}⊗v_i`; `None` if `m` has other terms.
pub fn hat_coordinates(v: &InducedVector) -> Option<Vec<Row>> {
    let n = v.n;
    let mut out = vec![Row::new(); n + 1];
    for (&(k, m, b), c) in &v.terms {
        if k != 0 || m.degree() + 1 != n {
            return None;
        }
        let i = m.complement(n).indices()[0];
        out[i].insert(b, c.clone());
    }
    Some(out)
}

/// Relations between the `w_l, w̄_l (, w_{m+1})` coordinates that are
/// equivalent to `v` being singular, each checked exactly.
pub fn family_b_spotcheck(rep: &SoRep, v: &InducedVector) -> SpotcheckReport {
    family_b_spotcheck_with(rep, v, ODD_SIGN)
}

pub fn family_b_spotcheck_with(rep: &SoRep, v: &InducedVector, odd_sign: i64) -> SpotcheckReport {
    let n = rep.n;
    let m = rank_of(n);
    let mut rel = Vec::new();
    let Some(vv) = hat_coordinates(v) else {
        return SpotcheckReport { relations: vec![Relation { name: "support in xi_{i^c} (x) F".into(), passed: false }], passed: false };
    };
    let i = GaussScalar::i();
    let half = GaussScalar::from_ratio(1, 2);
    let sg = |k: usize| int(if k.is_multiple_of(2) { 1 } else { -1 });
    let mut check = |name: String, lhs: Row| rel.push(Relation { name, passed: lhs.is_empty() });
    // (−1)^a E00 v_a − Σ_{k≠a} (−1)^k F_ak v_k = 0
    for a in 1..=n {
        let mut parts = vec![(vv[a].clone(), &sg(a) * rep.e00())];
        for k in (1..=n).filter(|&k| k != a) {
            parts.push((rep.act_f(a, k, &vv[k]), -sg(k)));
        }
        let refs: Vec<(&Row, GaussScalar)> = parts.iter().map(|(r, c)| (r, c.clone())).collect();
        check(format!("xi_{a} mode-0 condition"), scaled_sum(&refs));
    }
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                let x = rep.act_f(a, b, &vv[c]);
                let y = rep.act_f(a, c, &vv[b]);
                let z = rep.act_f(b, c, &vv[a]);
                check(format!("xi_{a}{b}{c} mode-0 condition"), scaled_sum(&[(&x, sg(c)), (&y, -sg(b)), (&z, sg(a))]));
            }
        }
    }
    // w_l = (v_{2l} − i v_{2l−1})/2, w̄_l = (v_{2l} + i v_{2l−1})/2
    let mut w = vec![Row::new()];
    let mut wb = vec![Row::new()];
    for l in 1..=m {
        w.push(scaled_sum(&[(&vv[2 * l], half.clone()), (&vv[2 * l - 1], -(&i * &half))]));
        wb.push(scaled_sum(&[(&vv[2 * l], half.clone()), (&vv[2 * l - 1], &i * &half)]));
    }
    let wodd = if n % 2 == 1 { scale_row(&vv[n], &(&i * &int(odd_sign)).inv().expect("nonzero")) } else { Row::new() };
    let diff = |a: Row, b: Row| scaled_sum(&[(&a, int(1)), (&b, int(-1))]);
    for a in 1..=m {
        for j in a + 1..=m {
            let al = alpha(a, j);
            let be = beta(a, j);
            let act = |x: &SoElement, r: &Row| rep.act(x, r);
            check(format!("alpha_{a}{j} w_{a} = 0"), act(&al, &w[a]));
            check(format!("alpha_{a}{j} wbar_{a} = w_{j} - wbar_{j}"), diff(act(&al, &wb[a]), diff(w[j].clone(), wb[j].clone())));
            check(format!("alpha_{a}{j} w_{j} = w_{a}"), diff(act(&al, &w[j]), w[a].clone()));
            check(format!("alpha_{a}{j} wbar_{j} = -w_{a}"), add_row(&act(&al, &wb[j]), &w[a]));
            check(format!("beta_{a}{j} w_{a} = 0"), act(&be, &w[a]));
            check(format!("beta_{a}{j} wbar_{a} = -(w_{j} + wbar_{j})"), add_row(&act(&be, &wb[a]), &add_row(&w[j], &wb[j])));
            check(format!("beta_{a}{j} w_{j} = w_{a}"), diff(act(&be, &w[j]), w[a].clone()));
            check(format!("beta_{a}{j} wbar_{j} = w_{a}"), diff(act(&be, &wb[j]), w[a].clone()));
            for k in (1..=m).filter(|&k| k != a && k != j) {
                check(format!("alpha_{a}{j} w_{k} = 0"), act(&al, &w[k]));
                check(format!("alpha_{a}{j} wbar_{k} = 0"), act(&al, &wb[k]));
                check(format!("beta_{a}{j} w_{k} = 0"), act(&be, &w[k]));
                check(format!("beta_{a}{j} wbar_{k} = 0"), act(&be, &wb[k]));
            }
        }
    }
    if n % 2 == 1 {
        for k in 1..=m {
            let g = gamma(n, k);
            check(format!("gamma_{k} w_{k} = 0"), rep.act(&g, &w[k]));
            check(format!("gamma_{k} wbar_{k} = w_odd"), diff(rep.act(&g, &wb[k]), wodd.clone()));
            check(format!("gamma_{k} w_odd = 2 w_{k}"), diff(rep.act(&g, &wodd), scale_row(&w[k], &int(2))));
            for l in (1..=m).filter(|&l| l != k) {
                check(format!("gamma_{k} w_{l} = 0"), rep.act(&g, &w[l]));
                check(format!("gamma_{k} wbar_{l} = 0"), rep.act(&g, &wb[l]));
            }
        }
    }
    let passed = rel.iter().all(|r| r.passed);
    SpotcheckReport { relations: rel, passed }
}

// ---------------------------------------------------------------- scan

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub weight: String,
    pub dim_f: usize,
    pub singular: usize,
    pub families: Vec<Family>,
    pub reducible: bool,
    pub expected: Expected,
    pub matches: bool,
}

/// Reducibility verdicts (reducible iff a non-trivial singular vector exists).
pub fn scan(n: usize, weights: &[Weight], dmax: u32) -> Result<Vec<ScanRow>> {
    weights
        .iter()
        .map(|w| {
            let r = solve(n, w, dmax)?;
            let dim_f = crate::so_rep::weyl_dim(n, w)? as usize;
            Ok(ScanRow {
                weight: w.to_string(),
                dim_f,
                singular: r.vectors.len(),
                families: r.vectors.iter().map(|v| v.family).collect(),
                reducible: !r.vectors.is_empty(),
                expected: r.expected,
                matches: r.matches_expectation(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(n: usize, w: &str) -> Induced {
        Induced::new(build_irrep(n, &w.parse().unwrap()).unwrap())
    }

    #[test]
    fn family_a_at_n4() {
        let i = ind(4, "-1;1,0");
        let r = solve_induced(&i, 2).unwrap();
        assert_eq!(r.vectors.len(), 1, "{:?}", r.vectors);
        assert_eq!(r.vectors[0].family, Family::A);
        assert!(r.matches_expectation());
        assert!(oracle_failures(&i, &r.vectors[0].vector, 8).unwrap().is_empty());
    }

    #[test]
    fn nothing_at_generic_weight() {
        let r = solve(4, &"1;1,0".parse().unwrap(), 2).unwrap();
        assert!(r.vectors.is_empty());
        let r = solve(3, &"2;0".parse().unwrap(), 2).unwrap();
        assert!(r.vectors.is_empty());
    }

    #[test]
    fn family_c_exact() {
        let i = ind(3, "3/2;1/2");
        let r = solve_induced(&i, 2).unwrap();
        assert_eq!(r.vectors.len(), 1);
        assert_eq!(r.vectors[0].family, Family::C3);
        assert!(has_reduced_support(&r.vectors[0].vector));
    }

    #[test]
    fn odd_sign_is_forced() {
        let i = ind(3, "2;1");
        let d = family_b_data(&i.rep).unwrap();
        let good = assemble_family_b(3, &d, ODD_SIGN);
        let bad = assemble_family_b(3, &d, -ODD_SIGN);
        assert!(oracle_failures(&i, &good, 5).unwrap().is_empty());
        assert!(!oracle_failures(&i, &bad, 5).unwrap().is_empty());
        assert!(family_b_spotcheck(&i.rep, &good).passed);
        let flipped = family_b_spotcheck_with(&i.rep, &good, -ODD_SIGN);
        assert!(!flipped.passed);
    }

    #[test]
    fn spotcheck_mutation() {
        let i = ind(4, "3;1,0");
        let mut d = family_b_data(&i.rep).unwrap();
        let v = assemble_family_b(4, &d, ODD_SIGN);
        assert!(family_b_spotcheck(&i.rep, &v).passed);
        d.wbar[0] = scale_row(&d.wbar[0], &int(2));
        let rep = family_b_spotcheck(&i.rep, &assemble_family_b(4, &d, ODD_SIGN));
        assert!(!rep.passed);
        assert!(rep.relations.iter().any(|r| !r.passed && (r.name.starts_with("alpha_12 wbar_1") || r.name.starts_with("beta_12 wbar_1"))));
    }

    #[test]
    fn classify_negative_control() {
        let i = ind(4, "-1;1,0");
        let junk = InducedVector::mono(4, Basis::Dual, 0, Mono::from_indices(&[1, 2]), 0, int(1));
        assert_eq!(classify(&junk, &i.rep), Family::Unknown);
        let triv = InducedVector::mono(4, Basis::Dual, 0, Mono::top(4), 0, int(1));
        assert_eq!(classify(&triv, &i.rep), Family::UnknownTrivial);
    }

    #[test]
    fn expectations() {
        let e = |n, s: &str| expected(n, &s.parse().unwrap());
        assert_eq!(e(4, "-2;2,0"), Expected::A);
        assert_eq!(e(4, "3;1,0"), Expected::B);
        assert_eq!(e(4, "5;1,1"), Expected::None);
        assert_eq!(e(4, "2;0,0"), Expected::Open);
        assert_eq!(e(3, "3/2;1/2"), Expected::C3);
        assert_eq!(e(3, "-1/2;1/2"), Expected::A);
        assert_eq!(e(3, "2;1"), Expected::B);
    }
}
