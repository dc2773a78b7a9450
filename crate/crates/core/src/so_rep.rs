//! Finite-dimensional irreducible modules over `cso(n) = ℂE_00 ⊕ so(n)`.
//!
//! `F_ij` corresponds to the matrix `E_ij − E_ji`; the Cartan basis is
//! `H_j = i F_{2j−1,2j}` and weights are written `(μ_0; μ_1, …, μ_m)` with
//! `m = ⌊n/2⌋`. Irreducibles are built from the highest weight vector by
//! applying simple lowering operators level by level, keeping a candidate only
//! if its image under the raising operators is new. In an irreducible module
//! the only vectors killed by every raising operator are highest weight
//! vectors, so this is exactly the quotient by the radical of the
//! contravariant form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Row};
use crate::scalar::{GaussScalar, Rational};
use crate::sparse::Lin;

/// Linear combination of `F_ij` (keys always `i < j`, 1-based).
pub type SoElement = Lin<(usize, usize)>;

/// Matrix stored as its columns (the image of each basis vector).
pub type Mat = Vec<Row>;

fn int(k: i64) -> GaussScalar {
    GaussScalar::from_int(k)
}

/// `F_ij` as an element, with `F_ji = −F_ij` and `F_ii = 0`.
pub fn f_elem(i: usize, j: usize) -> SoElement {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Lin::single((i, j), int(1)),
        std::cmp::Ordering::Greater => Lin::single((j, i), int(-1)),
        std::cmp::Ordering::Equal => Lin::new(),
    }
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// `[F_ij, F_kl] = δ_jk F_il − δ_ik F_jl − δ_jl F_ik + δ_il F_jk`.
pub fn so_bracket(x: &SoElement, y: &SoElement) -> SoElement {
    let mut out = Lin::new();
    for (&(i, j), a) in x {
        for (&(k, l), b) in y {
            let c = a * b;
            for (d, p, q) in [(delta(j, k), i, l), (-delta(i, k), j, l), (-delta(j, l), i, k), (delta(i, l), j, k)] {
                if d != 0 {
                    out.add_scaled(&f_elem(p, q), &(&c * &int(d)));
                }
            }
        }
    }
    out
}

pub fn rank_of(n: usize) -> usize {
    n / 2
}

/// `H_j = i F_{2j−1,2j}`.
pub fn cartan(j: usize) -> SoElement {
    Lin::single((2 * j - 1, 2 * j), GaussScalar::i())
}

/// Root vector `E_α` for a root given in ε-coordinates, e.g. `[1, -1]` for
/// `ε_1 − ε_2` or `[0, -1]` for `−ε_2` (odd `n` only).
pub fn root_vector(n: usize, root: &[i32]) -> Result<SoElement> {
    let m = rank_of(n);
    let bad = || Error::InvalidRoot(format!("{root:?} for so({n})"));
    if root.len() != m || root.iter().any(|c| c.abs() > 1) {
        return Err(bad());
    }
    let nz: Vec<usize> = (0..m).filter(|&k| root[k] != 0).collect();
    let i = GaussScalar::i();
    let mut e = Lin::new();
    match nz.as_slice() {
        [k0] if n % 2 == 1 => {
            // E_{±ε_k} = F_{2k−1,2m+1} ∓ i F_{2k,2m+1}
            let k = k0 + 1;
            e.add(&f_elem(2 * k - 1, n));
            e.add_scaled(&f_elem(2 * k, n), &(&i * &int(-root[*k0] as i64)));
        }
        [l0, j0] => {
            let (l, j) = (l0 + 1, j0 + 1);
            let (a, b, c, d) = (f_elem(2 * l - 1, 2 * j - 1), f_elem(2 * l, 2 * j), f_elem(2 * l - 1, 2 * j), f_elem(2 * l, 2 * j - 1));
            let (sl, sj) = (root[*l0], root[*j0]);
            e.add(&a);
            if sl == -sj {
                // ±(ε_l − ε_j): F + F ± i(F − F)
                e.add(&b);
                let s = &i * &int(sl as i64);
                e.add_scaled(&c, &s);
                e.add_scaled(&d, &-s);
            } else {
                // ±(ε_l + ε_j): F − F ∓ i(F + F)
                e.add_scaled(&b, &int(-1));
                let s = &i * &int(-sl as i64);
                e.add_scaled(&c, &s);
                e.add_scaled(&d, &s);
            }
        }
        _ => return Err(bad()),
    }
    Ok(e)
}

/// Positive roots in ε-coordinates: `ε_l ± ε_j` (l < j) and, for odd n, `ε_k`.
pub fn positive_roots(n: usize) -> Vec<Vec<i32>> {
    let m = rank_of(n);
    let mut out = Vec::new();
    for l in 0..m {
        for j in l + 1..m {
            for s in [-1, 1] {
                let mut r = vec![0; m];
                r[l] = 1;
                r[j] = s;
                out.push(r);
            }
        }
    }
    if n % 2 == 1 {
        for k in 0..m {
            let mut r = vec![0; m];
            r[k] = 1;
            out.push(r);
        }
    }
    out
}

/// Simple roots in the order `ε_1−ε_2, …, ε_{m−1}−ε_m`, then `ε_m` (odd n) or
/// `ε_{m−1}+ε_m` (even n).
pub fn simple_roots(n: usize) -> Vec<Vec<i32>> {
    let m = rank_of(n);
    let mut out = Vec::new();
    for k in 0..m.saturating_sub(1) {
        let mut r = vec![0; m];
        r[k] = 1;
        r[k + 1] = -1;
        out.push(r);
    }
    if n % 2 == 1 && m >= 1 {
        let mut r = vec![0; m];
        r[m - 1] = 1;
        out.push(r);
    } else if n.is_multiple_of(2) && m >= 2 {
        let mut r = vec![0; m];
        r[m - 2] = 1;
        r[m - 1] = 1;
        out.push(r);
    }
    out
}

/// `α_lj = F_{2l−1,2j−1} − i F_{2l,2j−1}`.
pub fn alpha(l: usize, j: usize) -> SoElement {
    let mut e = f_elem(2 * l - 1, 2 * j - 1);
    e.add_scaled(&f_elem(2 * l, 2 * j - 1), &-GaussScalar::i());
    e
}

/// `β_lj = F_{2l,2j} + i F_{2l−1,2j}`.
pub fn beta(l: usize, j: usize) -> SoElement {
    let mut e = f_elem(2 * l, 2 * j);
    e.add_scaled(&f_elem(2 * l - 1, 2 * j), &GaussScalar::i());
    e
}

/// `γ_k = E_{ε_k}` (odd n).
pub fn gamma(n: usize, k: usize) -> SoElement {
    let mut r = vec![0; rank_of(n)];
    r[k - 1] = 1;
    root_vector(n, &r).expect("short root")
}

/// Basis `{α_lj, β_lj, γ_k}` of the nilradical of the Borel subalgebra.
pub fn borel_basis(n: usize) -> Vec<(String, SoElement)> {
    let m = rank_of(n);
    let mut out = Vec::new();
    for l in 1..=m {
        for j in l + 1..=m {
            out.push((format!("alpha_{l}{j}"), alpha(l, j)));
            out.push((format!("beta_{l}{j}"), beta(l, j)));
        }
    }
    if n % 2 == 1 {
        for k in 1..=m {
            out.push((format!("gamma_{k}"), gamma(n, k)));
        }
    }
    out
}

// ---------------------------------------------------------------- matrices

pub fn mat_zero(dim: usize) -> Mat {
    vec![Row::new(); dim]
}

pub fn mat_identity(dim: usize) -> Mat {
    (0..dim).map(|k| Row::from([(k, int(1))])).collect()
}

/// `a ∘ b`.
pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    b.iter().map(|col| linalg::apply(a, col)).collect()
}

pub fn mat_axpy(dst: &mut Mat, src: &Mat, c: &GaussScalar) {
    for (d, s) in dst.iter_mut().zip(src) {
        let mut acc: Lin<usize> = d.iter().map(|(k, v)| (*k, v.clone())).collect();
        for (k, v) in s {
            acc.add_term(*k, v * c);
        }
        *d = acc.into_terms().into_iter().collect();
    }
}

pub fn mat_comm(a: &Mat, b: &Mat) -> Mat {
    let mut out = mat_mul(a, b);
    mat_axpy(&mut out, &mat_mul(b, a), &int(-1));
    out
}

pub fn mat_is_zero(a: &Mat) -> bool {
    a.iter().all(|c| c.is_empty())
}

fn mat_flatten(a: &Mat) -> Row {
    let d = a.len();
    let mut r = Row::new();
    for (c, col) in a.iter().enumerate() {
        for (k, v) in col {
            r.insert(c * d + k, v.clone());
        }
    }
    r
}

pub fn mat_trace(a: &Mat) -> GaussScalar {
    a.iter().enumerate().fold(GaussScalar::zero(), |acc, (k, col)| match col.get(&k) {
        Some(v) => &acc + v,
        None => acc,
    })
}

/// Matrix of an element in the vector representation `ℂ^n`.
pub fn vector_matrix(n: usize, x: &SoElement) -> Mat {
    let mut m = mat_zero(n);
    for (&(i, j), c) in x {
        // (E_ij − E_ji): e_j ↦ e_i, e_i ↦ −e_j
        let ins = |m: &mut Mat, col: usize, row: usize, v: GaussScalar| {
            let e = m[col].entry(row).or_insert_with(GaussScalar::zero);
            *e = &*e + &v;
            if e.is_zero() {
                m[col].remove(&row);
            }
        };
        ins(&mut m, j - 1, i - 1, c.clone());
        ins(&mut m, i - 1, j - 1, -c);
    }
    m
}

// ---------------------------------------------------------------- weights

/// Highest weight `(μ_0; μ_1, …, μ_m)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Weight {
    pub mu0: GaussScalar,
    pub mu: Vec<Rational>,
}

impl Weight {
    pub fn new(mu0: GaussScalar, mu: Vec<Rational>) -> Self {
        Weight { mu0, mu }
    }

    pub fn from_ints(mu0: i64, mu: &[i64]) -> Self {
        Weight { mu0: int(mu0), mu: mu.iter().map(|&k| Rational::from_int(k)).collect() }
    }

    pub fn check_integral(&self) -> Result<()> {
        let two = Rational::from_int(2);
        let all_int = self.mu.iter().all(|x| x.is_integer());
        let all_half = self.mu.iter().all(|x| !x.is_integer() && (x * &two).is_integer());
        if all_int || all_half {
            Ok(())
        } else {
            Err(Error::NonIntegral(self.to_string()))
        }
    }

    /// Dominance for `B_m` (odd n) or `D_m` (even n), plus integrality.
    pub fn validate(&self, n: usize) -> Result<()> {
        let m = rank_of(n);
        if self.mu.len() != m {
            return Err(Error::RankMismatch(m, self.mu.len()));
        }
        if n <= 2 {
            // so(2) is abelian: every character is allowed
            return Ok(());
        }
        self.check_integral()?;
        let bad = || Error::NonDominant(format!("{self} for so({n})"));
        for k in 0..m - 1 {
            if self.mu[k] < self.mu[k + 1] {
                return Err(bad());
            }
        }
        if n % 2 == 1 {
            if self.mu[m - 1].is_negative() {
                return Err(bad());
            }
        } else if self.mu[m - 2] < self.mu[m - 1].abs() {
            return Err(bad());
        }
        Ok(())
    }

    /// ε-coordinates as Gaussian scalars.
    pub fn mu_scalars(&self) -> Vec<GaussScalar> {
        self.mu.iter().map(|x| GaussScalar::real(x.clone())).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.mu.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", self.mu0, mu.join(", "))
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// `"-1;1,0"`, `"(3/2; 1/2)"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = t.split_once(';').ok_or_else(|| Error::Parse(format!("weight {s:?}: expected 'mu0;mu1,...'")))?;
        let mu0: GaussScalar = a.trim().parse()?;
        let mut mu = Vec::new();
        for part in b.split(',') {
            let p = part.trim();
            if p.is_empty() {
                continue;
            }
            mu.push(p.parse::<Rational>().map_err(|_| Error::Parse(format!("weight {s:?}: bad entry {p:?}")))?);
        }
        Ok(Weight { mu0, mu })
    }
}

/// Weyl dimension formula with `ρ_j = m − j + ½` (odd n) or `m − j` (even n).
pub fn weyl_dim(n: usize, w: &Weight) -> Result<u64> {
    w.validate(n)?;
    let m = rank_of(n);
    if n <= 2 {
        return Ok(1);
    }
    let half = Rational::new(1, 2);
    let rho: Vec<Rational> = (1..=m)
        .map(|j| {
            let r = Rational::from_int((m - j) as i64);
            if n % 2 == 1 {
                &r + &half
            } else {
                r
            }
        })
        .collect();
    let lr: Vec<Rational> = (0..m).map(|j| &w.mu[j] + &rho[j]).collect();
    let mut num = Rational::one();
    let mut den = Rational::one();
    for root in positive_roots(n) {
        let pair = |v: &[Rational]| root.iter().zip(v).fold(Rational::zero(), |acc, (c, x)| &acc + &(&Rational::from_int(*c as i64) * x));
        num = &num * &pair(&lr);
        den = &den * &pair(&rho);
    }
    let d = &num * &den.recip()?;
    d.to_i64().map(|x| x as u64).ok_or_else(|| Error::NonIntegral(format!("Weyl dimension {d}")))
}

// ---------------------------------------------------------------- irreps

/// Irreducible `cso(n)`-module with matrices for every `F_ij`.
#[derive(Clone, Debug)]
pub struct SoRep {
    pub n: usize,
    pub weight: Weight,
    pub dim: usize,
    /// Lowering words: `[2, 1]` means `f_2 f_1 v_μ` with simple-root indices.
    pub labels: Vec<Vec<usize>>,
    /// ε-weight of each basis vector.
    pub weights: Vec<Vec<Rational>>,
    pub f: BTreeMap<(usize, usize), Mat>,
    pub hw_index: usize,
}

impl SoRep {
    pub fn matrix(&self, x: &SoElement) -> Mat {
        let mut out = mat_zero(self.dim);
        for (k, c) in x {
            mat_axpy(&mut out, &self.f[k], c);
        }
        out
    }

    pub fn act(&self, x: &SoElement, v: &Row) -> Row {
        let mut out: Lin<usize> = Lin::new();
        for (k, c) in x {
            for (col, a) in v {
                for (r, b) in &self.f[k][*col] {
                    out.add_term(*r, &(c * a) * b);
                }
            }
        }
        out.into_terms().into_iter().collect()
    }

    /// `F_ij v` (any order of `i, j`).
    pub fn act_f(&self, i: usize, j: usize, v: &Row) -> Row {
        self.act(&f_elem(i, j), v)
    }

    pub fn e00(&self) -> &GaussScalar {
        &self.weight.mu0
    }

    pub fn basis_vector(&self, k: usize) -> Row {
        Row::from([(k, int(1))])
    }

    pub fn hw(&self) -> Row {
        self.basis_vector(self.hw_index)
    }

    pub fn label(&self, k: usize) -> String {
        if self.labels[k].is_empty() {
            return "v".into();
        }
        let w: Vec<String> = self.labels[k].iter().map(|i| format!("f{}", i + 1)).collect();
        format!("{} v", w.join(" "))
    }

    /// Failing pairs of the identity `[F_ij, F_kl] = …` (empty when faithful to the bracket).
    pub fn bracket_fidelity_failures(&self) -> Vec<String> {
        let keys: Vec<(usize, usize)> = self.f.keys().copied().collect();
        let mut bad = Vec::new();
        for a in &keys {
            for b in &keys {
                let lhs = mat_comm(&self.f[a], &self.f[b]);
                let rhs = self.matrix(&so_bracket(&Lin::single(*a, int(1)), &Lin::single(*b, int(1))));
                let mut d = lhs;
                mat_axpy(&mut d, &rhs, &int(-1));
                if !mat_is_zero(&d) {
                    bad.push(format!("[F{}{}, F{}{}]", a.0, a.1, b.0, b.1));
                }
            }
        }
        bad
    }

    /// Names of Borel elements that do not kill the highest weight vector.
    pub fn borel_failures(&self) -> Vec<String> {
        borel_basis(self.n).into_iter().filter(|(_, x)| !self.act(x, &self.hw()).is_empty()).map(|(s, _)| s).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut mats = serde_json::Map::new();
        for ((i, j), m) in &self.f {
            let entries: Vec<Value> = m.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| json!([r, c, v]))).collect();
            mats.insert(format!("F{i},{j}"), Value::Array(entries));
        }
        json!({
            "n": self.n,
            "weight": weight_json(&self.weight),
            "dim": self.dim,
            "hw_index": self.hw_index,
            "basis": (0..self.dim).map(|k| self.label(k)).collect::<Vec<_>>(),
            "basis_weights": self.weights.iter().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "matrices": mats,
            "matrix_format": "sparse [row, col, [re, im]] entries of F_ij acting on column vectors",
        })
    }
}

pub fn weight_json(w: &Weight) -> Value {
    json!({ "mu0": w.mu0, "mu": w.mu.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "text": w.to_string() })
}

/// Coefficients `a_j` with `[E_α, E_{−α}] = Σ a_j H_j`.
fn coroot(n: usize, root: &[i32]) -> Result<Vec<GaussScalar>> {
    let m = rank_of(n);
    let neg: Vec<i32> = root.iter().map(|c| -c).collect();
    let h = so_bracket(&root_vector(n, root)?, &root_vector(n, &neg)?);
    let basis: Vec<Row> = (1..=m).map(|j| mat_flatten(&vector_matrix(n, &cartan(j)))).collect();
    let target = mat_flatten(&vector_matrix(n, &h));
    let coords = linalg::solve_in_span(&basis, &[target]).ok_or_else(|| Error::InvalidRoot(format!("{root:?}: [E, E-] not in the Cartan")))?;
    Ok((0..m).map(|j| coords[0].get(&j).cloned().unwrap_or_else(GaussScalar::zero)).collect())
}

fn dot(a: &[GaussScalar], w: &[Rational]) -> GaussScalar {
    a.iter().zip(w).fold(GaussScalar::zero(), |acc, (x, y)| &acc + &(x * &GaussScalar::real(y.clone())))
}

/// Irreducible module of highest weight `w`.
pub fn build_irrep(n: usize, w: &Weight) -> Result<SoRep> {
    let target = weyl_dim(n, w)? as usize;
    if n <= 2 {
        let mut f = BTreeMap::new();
        if n == 2 {
            // H_1 = i F_12 acts by μ_1
            let c = &-GaussScalar::i() * &GaussScalar::real(w.mu[0].clone());
            f.insert((1, 2), vec![if c.is_zero() { Row::new() } else { Row::from([(0, c)]) }]);
        }
        return Ok(SoRep { n, weight: w.clone(), dim: 1, labels: vec![vec![]], weights: vec![w.mu.clone()], f, hw_index: 0 });
    }
    let simple = simple_roots(n);
    let r = simple.len();
    let cor: Vec<Vec<GaussScalar>> = simple.iter().map(|a| coroot(n, a)).collect::<Result<_>>()?;

    let mut labels: Vec<Vec<usize>> = vec![vec![]];
    let mut weights: Vec<Vec<Rational>> = vec![w.mu.clone()];
    // e_act[k][b], f_act[k][b]: images of basis vector b
    let mut e_act: Vec<Vec<Row>> = vec![vec![Row::new()]; r];
    let mut f_act: Vec<Vec<Row>> = vec![vec![Row::new()]; r];
    let mut level: Vec<usize> = vec![0];
    while !level.is_empty() {
        let base = labels.len();
        let mut ech = Echelon::new();
        let mut chosen: Vec<Row> = Vec::new();
        let mut cands: Vec<(usize, usize, Vec<Row>, Row)> = Vec::new();
        let mut chosen_idx = Vec::new();
        for &b in &level {
            for i in 0..r {
                // e_k(f_i b) = f_i(e_k b) + δ_ik ⟨coroot_i, wt b⟩ b
                let imgs: Vec<Row> = (0..r)
                    .map(|k| {
                        let mut v = linalg::apply(&f_act[i], &e_act[k][b]);
                        if k == i {
                            let c = dot(&cor[i], &weights[b]);
                            let e = v.entry(b).or_insert_with(GaussScalar::zero);
                            *e = &*e + &c;
                            if e.is_zero() {
                                v.remove(&b);
                            }
                        }
                        v
                    })
                    .collect();
                let stacked = stack(&imgs, base);
                if ech.insert(stacked.clone()) {
                    chosen_idx.push(cands.len());
                    chosen.push(stacked.clone());
                }
                cands.push((b, i, imgs, stacked));
            }
        }
        let mut new_level = Vec::new();
        for (j, &ci) in chosen_idx.iter().enumerate() {
            let (b, i, imgs, _) = &cands[ci];
            let mut lab = labels[*b].clone();
            lab.insert(0, *i);
            labels.push(lab);
            let mut wt = weights[*b].clone();
            for (x, c) in wt.iter_mut().zip(&simple[*i]) {
                *x = &*x - &Rational::from_int(*c as i64);
            }
            weights.push(wt);
            for k in 0..r {
                e_act[k].push(imgs[k].clone());
            }
            new_level.push(base + j);
        }
        for fa in f_act.iter_mut() {
            fa.resize(labels.len(), Row::new());
        }
        for (b, i, _, stacked) in cands {
            if stacked.is_empty() {
                continue;
            }
            let coords = linalg::solve_in_span(&chosen, &[stacked]).expect("candidate in span").remove(0);
            f_act[i][b] = coords.into_iter().map(|(j, c)| (base + j, c)).collect();
        }
        if labels.len() > target {
            return Err(Error::Unsupported(format!("irrep construction exceeded the Weyl dimension {target} for {w}")));
        }
        level = new_level;
    }
    let dim = labels.len();
    if dim != target {
        return Err(Error::Unsupported(format!("built dimension {dim} differs from Weyl dimension {target} for {w}")));
    }
    let e_mats: Vec<Mat> = e_act;
    let f_mats: Vec<Mat> = f_act;
    let f = close_algebra(n, &simple, &e_mats, &f_mats)?;
    Ok(SoRep { n, weight: w.clone(), dim, labels, weights, f, hw_index: 0 })
}

fn stack(imgs: &[Row], base: usize) -> Row {
    let r = imgs.len();
    let mut out = Row::new();
    for (k, v) in imgs.iter().enumerate() {
        for (idx, c) in v {
            debug_assert!(*idx < base);
            out.insert(idx * r + k, c.clone());
        }
    }
    out
}

/// Recover every `F_ij` from the simple raising/lowering matrices by closing
/// under commutators alongside the vector representation.
fn close_algebra(n: usize, simple: &[Vec<i32>], e: &[Mat], f: &[Mat]) -> Result<BTreeMap<(usize, usize), Mat>> {
    let total = n * (n - 1) / 2;
    let mut gens: Vec<(Mat, Mat)> = Vec::new();
    for (k, a) in simple.iter().enumerate() {
        let neg: Vec<i32> = a.iter().map(|c| -c).collect();
        gens.push((vector_matrix(n, &root_vector(n, a)?), e[k].clone()));
        gens.push((vector_matrix(n, &root_vector(n, &neg)?), f[k].clone()));
    }
    let mut ech = Echelon::new();
    let mut span: Vec<(Mat, Mat)> = Vec::new();
    let mut queue: Vec<(Mat, Mat)> = gens.clone();
    while let Some((v, m)) = queue.pop() {
        if span.len() == total {
            break;
        }
        if ech.insert(mat_flatten(&v)) {
            for (gv, gm) in &gens {
                queue.insert(0, (mat_comm(gv, &v), mat_comm(gm, &m)));
            }
            span.push((v, m));
        }
    }
    if span.len() != total {
        return Err(Error::Unsupported(format!("simple root vectors span only {} of so({n})", span.len())));
    }
    let basis: Vec<Row> = span.iter().map(|(v, _)| mat_flatten(v)).collect();
    let dim = span[0].1.len();
    let mut out = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let coords = linalg::solve_in_span(&basis, &[mat_flatten(&vector_matrix(n, &f_elem(i, j)))]).expect("so(n) spanned");
            let mut mm = mat_zero(dim);
            for (k, c) in &coords[0] {
                mat_axpy(&mut mm, &span[*k].1, c);
            }
            out.insert((i, j), mm);
        }
    }
    Ok(out)
}

/// Simultaneous eigenvalues of `(E_00; H_1, …, H_m)` on `v`; `None` if `v` is
/// not a weight vector.
pub fn weight_of(rep: &SoRep, v: &Row) -> Result<Option<Weight>> {
    let (&k0, c0) = v.iter().next().ok_or(Error::ZeroVector)?;
    let _ = k0;
    let mut mu = Vec::new();
    for j in 1..=rank_of(rep.n) {
        let hv = rep.act(&cartan(j), v);
        let lam = hv.get(&k0).cloned().unwrap_or_else(GaussScalar::zero) / c0.clone();
        let mut diff: Lin<usize> = hv.iter().map(|(k, c)| (*k, c.clone())).collect();
        for (k, c) in v {
            diff.add_term(*k, -(c * &lam));
        }
        if !diff.is_zero() || !lam.is_real() {
            return Ok(None);
        }
        mu.push(lam.re.clone());
    }
    Ok(Some(Weight { mu0: rep.weight.mu0.clone(), mu }))
}

// ---------------------------------------------------------------- harmonic model

/// Degree-`k` polynomials in `x_1..x_n` modulo `(Σ x_i²)·(degree k−2)`, with
/// `F_ij = x_i∂_j − x_j∂_i`. Basis: monomials with `x_n`-exponent ≤ 1.
#[derive(Clone, Debug)]
pub struct HarmonicModel {
    pub n: usize,
    pub k: u32,
    pub basis: Vec<Vec<u32>>,
    pub f: BTreeMap<(usize, usize), Mat>,
}

fn exps(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in (0..=k).rev() {
        for mut rest in exps(n - 1, k - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn harmonic_reduce(e: Vec<u32>, c: GaussScalar, out: &mut Lin<Vec<u32>>) {
    let n = e.len();
    if e[n - 1] < 2 {
        out.add_term(e, c);
        return;
    }
    // x_n² = −Σ_{i<n} x_i²
    for i in 0..n - 1 {
        let mut e2 = e.clone();
        e2[n - 1] -= 2;
        e2[i] += 2;
        harmonic_reduce(e2, -c.clone(), out);
    }
}

pub fn harmonic_model(n: usize, k: u32) -> HarmonicModel {
    let basis: Vec<Vec<u32>> = exps(n, k).into_iter().filter(|e| e[n - 1] <= 1).collect();
    let index: BTreeMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
    let mut f = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let mut mat = mat_zero(basis.len());
            for (col, e) in basis.iter().enumerate() {
                let mut acc = Lin::new();
                // x_i ∂_j − x_j ∂_i
                for (a, b, s) in [(i, j, 1i64), (j, i, -1)] {
                    if e[b - 1] > 0 {
                        let mut e2 = e.clone();
                        let c = int(s * e[b - 1] as i64);
                        e2[b - 1] -= 1;
                        e2[a - 1] += 1;
                        harmonic_reduce(e2, c, &mut acc);
                    }
                }
                mat[col] = acc.iter().map(|(e, c)| (index[e], c.clone())).collect();
            }
            f.insert((i, j), mat);
        }
    }
    HarmonicModel { n, k, basis, f }
}

fn casimir(f: &BTreeMap<(usize, usize), Mat>, dim: usize) -> Mat {
    let mut c = mat_zero(dim);
    for m in f.values() {
        mat_axpy(&mut c, &mat_mul(m, m), &int(1));
    }
    c
}

fn power_traces(f: &BTreeMap<(usize, usize), Mat>, n: usize, dim: usize) -> Vec<GaussScalar> {
    // generic Cartan element h = Σ c_j H_j with c_j = 3^(j−1)
    let mut h = Lin::new();
    let mut c = 1i64;
    for j in 1..=rank_of(n) {
        h.add_scaled(&cartan(j), &int(c));
        c *= 3;
    }
    let mut hm = mat_zero(dim);
    for (k, a) in &h {
        mat_axpy(&mut hm, &f[k], a);
    }
    let mut p = mat_identity(dim);
    (1..=dim)
        .map(|_| {
            p = mat_mul(&hm, &p);
            mat_trace(&p)
        })
        .collect()
}

/// Compare an irrep with the harmonic model of the same degree: dimensions,
/// traces of powers of a generic Cartan element (equal weight multisets), and
/// the scalar Casimir `Σ F_ij²`.
pub fn matches_harmonic(rep: &SoRep, model: &HarmonicModel) -> bool {
    if rep.n != model.n || rep.dim != model.basis.len() {
        return false;
    }
    if power_traces(&rep.f, rep.n, rep.dim) != power_traces(&model.f, model.n, rep.dim) {
        return false;
    }
    let c1 = casimir(&rep.f, rep.dim);
    let c2 = casimir(&model.f, rep.dim);
    let s1 = c1[0].get(&0).cloned().unwrap_or_else(GaussScalar::zero);
    let s2 = c2[0].get(&0).cloned().unwrap_or_else(GaussScalar::zero);
    let scalar = |c: &Mat, s: &GaussScalar| c.iter().enumerate().all(|(k, col)| *col == if s.is_zero() { Row::new() } else { Row::from([(k, s.clone())]) });
    s1 == s2 && scalar(&c1, &s1) && scalar(&c2, &s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kn_algebra::{contact_bracket, AnnihilationElement};

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn root_vectors_as_displayed() {
        let i = GaussScalar::i();
        let e = root_vector(4, &[1, -1]).unwrap();
        let mut want = f_elem(1, 3);
        want.add(&f_elem(2, 4));
        want.add_scaled(&f_elem(1, 4), &i);
        want.add_scaled(&f_elem(2, 3), &-i.clone());
        assert_eq!(e, want);
        let e = root_vector(5, &[1, 0]).unwrap();
        let mut want = f_elem(1, 5);
        want.add_scaled(&f_elem(2, 5), &-i.clone());
        assert_eq!(e, want);
        let mut half = root_vector(4, &[1, -1]).unwrap();
        half.add(&root_vector(4, &[1, 1]).unwrap());
        assert_eq!(half.scaled(&GaussScalar::from_ratio(1, 2)), alpha(1, 2));
        let mut d = root_vector(4, &[1, -1]).unwrap();
        d.add_scaled(&root_vector(4, &[1, 1]).unwrap(), &int(-1));
        assert_eq!(d.scaled(&GaussScalar::from_ratio(1, 2)), beta(1, 2));
        assert!(root_vector(4, &[1, 0]).is_err());
        assert!(root_vector(5, &[2, 0]).is_err());
    }

    #[test]
    fn root_vectors_are_eigenvectors() {
        for n in 2..=7 {
            let m = rank_of(n);
            let roots: Vec<Vec<i32>> = positive_roots(n).into_iter().flat_map(|r| [r.clone(), r.iter().map(|c| -c).collect()]).collect();
            for r in roots {
                let e = root_vector(n, &r).unwrap();
                for j in 1..=m {
                    let lhs = so_bracket(&cartan(j), &e);
                    assert_eq!(lhs, e.scaled(&int(r[j - 1] as i64)), "n={n} root={r:?} H{j}");
                }
            }
        }
    }

    #[test]
    fn bracket_matches_matrices_and_grassmann_model() {
        for n in 2..=6 {
            let keys: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            for &a in &keys {
                for &b in &keys {
                    let x = Lin::single(a, int(1));
                    let y = Lin::single(b, int(1));
                    let br = so_bracket(&x, &y);
                    let lhs = mat_comm(&vector_matrix(n, &x), &vector_matrix(n, &y));
                    assert_eq!(lhs, vector_matrix(n, &br));
                    let g = contact_bracket(&AnnihilationElement::f_ij(n, a.0, a.1), &AnnihilationElement::f_ij(n, b.0, b.1));
                    let mut want = AnnihilationElement::zero(n);
                    for (&(i, j), c) in &br {
                        want = want.add(&AnnihilationElement::f_ij(n, i, j).scale(c));
                    }
                    assert_eq!(g, want, "n={n} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dim(5, &w("0;1,0")).unwrap(), 5);
        assert_eq!(weyl_dim(5, &w("0;1/2,1/2")).unwrap(), 4);
        assert_eq!(weyl_dim(5, &w("0;1,1")).unwrap(), 10);
        assert_eq!(weyl_dim(4, &w("0;1,0")).unwrap(), 4);
        assert_eq!(weyl_dim(4, &w("0;1/2,-1/2")).unwrap(), 2);
        assert_eq!(weyl_dim(3, &w("0;1/2")).unwrap(), 2);
        assert_eq!(weyl_dim(3, &w("0;2")).unwrap(), 5);
        assert_eq!(weyl_dim(6, &w("0;1,1,0")).unwrap(), 15);
        assert_eq!(weyl_dim(6, &w("0;1/2,1/2,1/2")).unwrap(), 4);
        for n in 2..=8 {
            assert_eq!(weyl_dim(n, &Weight::from_ints(0, &vec![0; n / 2])).unwrap(), 1);
        }
        assert!(matches!(weyl_dim(5, &w("0;0,1")), Err(Error::NonDominant(_))));
        assert!(matches!(weyl_dim(4, &w("0;0,1")), Err(Error::NonDominant(_))));
        assert!(matches!(weyl_dim(5, &w("0;1,1/2")), Err(Error::NonIntegral(_))));
        assert!(matches!(weyl_dim(5, &w("0;1")), Err(Error::RankMismatch(2, 1))));
    }

    #[test]
    fn weight_parsing() {
        let x = w("-1;1,0");
        assert_eq!(x.mu0, int(-1));
        assert_eq!(x.mu, vec![q(1, 1), q(0, 1)]);
        assert_eq!(w("(3/2; 1/2)").mu, vec![q(1, 2)]);
        assert!("bad".parse::<Weight>().is_err());
        assert!("1;x".parse::<Weight>().is_err());
        assert_eq!(x.to_string(), "(-1; 1, 0)");
    }

    #[test]
    fn small_irreps() {
        for (n, s, d) in [(4, "0;1,0", 4), (3, "0;1/2", 2), (5, "0;1,0", 5), (3, "0;1", 3), (6, "0;1,0,0", 6), (5, "0;1/2,1/2", 4)] {
            let rep = build_irrep(n, &w(s)).unwrap();
            assert_eq!(rep.dim, d, "n={n} {s}");
            assert!(rep.bracket_fidelity_failures().is_empty(), "n={n} {s}");
            assert!(rep.borel_failures().is_empty(), "n={n} {s}");
            assert_eq!(weight_of(&rep, &rep.hw()).unwrap().unwrap(), w(s));
        }
        let rep = build_irrep(2, &w("0;3/2")).unwrap();
        assert_eq!(weight_of(&rep, &rep.hw()).unwrap().unwrap(), w("0;3/2"));
    }

    #[test]
    fn weight_of_vectors() {
        let rep = build_irrep(4, &w("-1;1,0")).unwrap();
        assert_eq!(weight_of(&rep, &rep.hw()).unwrap().unwrap(), w("-1;1,0"));
        let low = rep.act(&root_vector(4, &[-1, 1]).unwrap(), &rep.hw());
        assert_eq!(weight_of(&rep, &low).unwrap().unwrap(), w("-1;0,1"));
        let mut mix = rep.hw();
        for (k, c) in &low {
            mix.insert(*k, c.clone());
        }
        assert_eq!(weight_of(&rep, &mix).unwrap(), None);
        assert!(matches!(weight_of(&rep, &Row::new()), Err(Error::ZeroVector)));
    }

    #[test]
    fn cartan_acts_diagonally() {
        let rep = build_irrep(5, &w("2;3/2,1/2")).unwrap();
        for k in 0..rep.dim {
            let wt = weight_of(&rep, &rep.basis_vector(k)).unwrap().unwrap();
            assert_eq!(wt.mu, rep.weights[k]);
        }
    }

    #[test]
    fn harmonic_cross_check() {
        for n in 3..=6 {
            for k in 0..=3u32 {
                let mut mu = vec![0i64; n / 2];
                mu[0] = k as i64;
                let rep = build_irrep(n, &Weight::from_ints(0, &mu)).unwrap();
                let model = harmonic_model(n, k);
                assert!(matches_harmonic(&rep, &model), "n={n} k={k}");
            }
        }
        // a different irrep of equal dimension is told apart
        let spin = build_irrep(6, &w("0;1/2,1/2,1/2")).unwrap();
        let vec4 = build_irrep(6, &w("0;1,0,0")).unwrap();
        assert!(!matches_harmonic(&spin, &harmonic_model(6, 1)));
        assert!(matches_harmonic(&vec4, &harmonic_model(6, 1)));
    }

    #[test]
    fn json_export() {
        let rep = build_irrep(3, &w("0;1/2")).unwrap();
        let j = rep.to_json();
        assert_eq!(j["dim"], 2);
        assert_eq!(j["weight"]["mu"][0], "1/2");
    }
}
