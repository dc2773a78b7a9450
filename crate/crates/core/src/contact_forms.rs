//! Super differential forms on `(t, ξ_1..ξ_n)`, the contact ideal and the
//! Rumin-type quotient complex.
//!
//! A monomial is `t^a ξ_I (dt)^e Π dξ_i^{c_i}` in exactly that order (`dt` odd,
//! `dξ_i` even). The plus space has `a ≥ 0`, the minus space `a ≤ −1`; on the
//! minus side every product / Lie derivative is computed in Laurent forms and
//! the non-negative `t`-powers are dropped afterwards.
//!
//! Everything is graded by the `E_00`-eigenvalue
//! `2a + |I| + 2e + Σc_i` (`E_00 = 2t∂_t + Σξ_i∂_i`, extended to commute with
//! `d`) and by form degree `e + Σc_i`; `d`, `ω` and `dω` are homogeneous, so
//! each `(degree, weight)` component is finite and handled separately.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{all_monos, mono_derive, mono_mul, mono_str, Mono};
use crate::kn_algebra::{to_vector_field, AnnihilationElement, VectorField};
use crate::linalg::{Echelon, Row};
use crate::scalar::{GaussScalar, Rational};
use crate::so_rep::{rank_of, root_vector, weyl_dim, SoElement, Weight};
use crate::sparse::Lin;

fn int(k: i64) -> GaussScalar {
    GaussScalar::from_int(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Side::Plus),
            "minus" | "-" => Ok(Side::Minus),
            _ => Err(Error::Parse(format!("side must be plus or minus, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormMonomial {
    /// `dt` first so that the dt-free monomials come first in the order.
    pub dt: bool,
    pub dxi: Vec<u8>,
    pub xi: Mono,
    pub tpow: i32,
}

impl FormMonomial {
    pub fn function(n: usize, tpow: i32, xi: Mono) -> Self {
        FormMonomial { dt: false, dxi: vec![0; n], xi, tpow }
    }

    pub fn parity(&self) -> u32 {
        (self.xi.parity() + self.dt as u32) % 2
    }

    pub fn degree(&self) -> usize {
        self.dt as usize + self.dxi.iter().map(|c| *c as usize).sum::<usize>()
    }

    /// `E_00`-eigenvalue.
    pub fn weight(&self) -> i64 {
        2 * self.tpow as i64 + self.xi.degree() as i64 + 2 * self.dt as i64 + self.dxi.iter().map(|c| *c as i64).sum::<i64>()
    }
}

impl fmt::Display for FormMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.tpow {
            0 => {}
            1 => parts.push("t".to_string()),
            p => parts.push(format!("t^{p}")),
        }
        if self.xi != Mono::ONE {
            parts.push(format!("[{}]", mono_str(self.xi)));
        }
        if self.dt {
            parts.push("dt".into());
        }
        for (i, c) in self.dxi.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("dx{}", i + 1)),
                _ => parts.push(format!("dx{}^{c}", i + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Product of two monomials (`None` when it vanishes).
fn mono_wedge(a: &FormMonomial, b: &FormMonomial) -> Option<(i32, FormMonomial)> {
    if a.dt && b.dt {
        return None;
    }
    // move ξ_{I_b} left past (dt)^{e_a}
    let s0 = if a.dt && b.xi.parity() == 1 { -1 } else { 1 };
    let (s1, xi) = mono_mul(a.xi, b.xi)?;
    let dxi = a.dxi.iter().zip(&b.dxi).map(|(x, y)| x + y).collect();
    Some((s0 * s1, FormMonomial { dt: a.dt || b.dt, dxi, xi, tpow: a.tpow + b.tpow }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormElement {
    pub n: usize,
    pub side: Side,
    pub terms: Lin<FormMonomial>,
}

impl FormElement {
    pub fn zero(n: usize, side: Side) -> Self {
        FormElement { n, side, terms: Lin::new() }
    }

    pub fn mono(n: usize, side: Side, m: FormMonomial, c: GaussScalar) -> Self {
        FormElement { n, side, terms: Lin::single(m, c) }.projected()
    }

    pub fn one(n: usize) -> Self {
        Self::mono(n, Side::Plus, FormMonomial::function(n, 0, Mono::ONE), int(1))
    }

    pub fn t_pow(n: usize, side: Side, a: i32) -> Self {
        Self::mono(n, side, FormMonomial::function(n, a, Mono::ONE), int(1))
    }

    pub fn xi(n: usize, i: usize) -> Self {
        Self::mono(n, Side::Plus, FormMonomial::function(n, 0, Mono::xi(i)), int(1))
    }

    pub fn dt(n: usize) -> Self {
        let mut m = FormMonomial::function(n, 0, Mono::ONE);
        m.dt = true;
        Self::mono(n, Side::Plus, m, int(1))
    }

    pub fn dxi(n: usize, i: usize) -> Self {
        let mut m = FormMonomial::function(n, 0, Mono::ONE);
        m.dxi[i - 1] = 1;
        Self::mono(n, Side::Plus, m, int(1))
    }

    /// `Σ_{a ∈ A} c_a t^a ξ_J` with `A` the annihilation-algebra terms.
    pub fn from_function(f: &AnnihilationElement) -> Self {
        let n = f.n;
        let terms = f.terms.map_keys(|&(p, m)| Some((FormMonomial::function(n, p as i32, m), int(1))));
        FormElement { n, side: Side::Plus, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn on_side(mut self, side: Side) -> Self {
        self.side = side;
        self.projected()
    }

    fn projected(mut self) -> Self {
        match self.side {
            Side::Plus => self.terms.retain(|m| m.tpow >= 0),
            Side::Minus => self.terms.retain(|m| m.tpow < 0),
        }
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        t.add(&o.terms);
        FormElement { n: self.n, side: self.side, terms: t }
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        FormElement { n: self.n, side: self.side, terms: self.terms.scaled(c) }
    }

    /// Super-commutative product. Minus-side operands make a minus-side result
    /// (projected); plus × plus stays plus.
    pub fn wedge(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::RankMismatch(self.n, o.n));
        }
        let side = if self.side == Side::Minus || o.side == Side::Minus { Side::Minus } else { Side::Plus };
        let mut t = Lin::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some((s, m)) = mono_wedge(a, b) {
                    t.add_term(m, &(x * y) * &int(s as i64));
                }
            }
        }
        Ok(FormElement { n: self.n, side, terms: t }.projected())
    }

    /// The odd derivation with `d t = dt`, `d ξ_i = dξ_i`.
    pub fn d(&self) -> Self {
        let mut t = Lin::new();
        for (m, c) in &self.terms {
            for (s, r) in d_mono(m) {
                t.add_term(r, c * &s);
            }
        }
        FormElement { n: self.n, side: self.side, terms: t }.projected()
    }

    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.weight());
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }
}

impl fmt::Display for FormElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn d_mono(m: &FormMonomial) -> Vec<(GaussScalar, FormMonomial)> {
    let mut out = Vec::new();
    // d(t^a) ξ_I … = a t^{a−1} dt ξ_I … = (−1)^{|I|} a t^{a−1} ξ_I dt …
    if m.tpow != 0 && !m.dt {
        let mut r = m.clone();
        r.tpow -= 1;
        r.dt = true;
        let s = if m.xi.parity() == 1 { -1 } else { 1 };
        out.push((int(s * m.tpow as i64), r));
    }
    for i in 1..=m.dxi.len() {
        if let Some((s, rest)) = mono_derive(i, m.xi) {
            let mut r = m.clone();
            r.xi = rest;
            r.dxi[i - 1] += 1;
            out.push((int(s as i64), r));
        }
    }
    out
}

/// `ω = dt − Σ ξ_i dξ_i`.
pub fn omega(n: usize) -> FormElement {
    let mut w = FormElement::dt(n);
    for i in 1..=n {
        w = w.add(&FormElement::xi(n, i).wedge(&FormElement::dxi(n, i)).expect("same n").scale(&int(-1)));
    }
    w
}

// ---------------------------------------------------------------- Lie derivative

fn field_apply(v: &VectorField, f: &FormMonomial) -> FormElement {
    // D(t^a ξ_I) = a·A t^{a−1}ξ_I + Σ A_i t^a ∂_iξ_I, as a (Laurent) function
    let n = v.n;
    let mut out = FormElement::zero(n, Side::Plus);
    out.side = Side::Minus; // no projection until the caller decides
    let mut terms = Lin::new();
    let mut push = |coef: &AnnihilationElement, tpow: i32, xi: Mono, c: GaussScalar| {
        for (&(p, j), x) in &coef.terms {
            if let Some((s, m)) = mono_mul(j, xi) {
                terms.add_term(FormMonomial::function(n, p as i32 + tpow, m), &(x * &c) * &int(s as i64));
            }
        }
    };
    if f.tpow != 0 {
        push(&v.a, f.tpow - 1, f.xi, int(f.tpow as i64));
    }
    for i in 1..=n {
        if let Some((s, r)) = mono_derive(i, f.xi) {
            push(&v.ai[i - 1], f.tpow, r, int(s as i64));
        }
    }
    out.terms = terms;
    out
}

fn laurent(mut f: FormElement) -> FormElement {
    // Laurent container: side is irrelevant until projection, mark as plus
    f.side = Side::Plus;
    f
}

fn raw_wedge(a: &FormElement, b: &FormElement) -> FormElement {
    let mut t = Lin::new();
    for (x, p) in &a.terms {
        for (y, q) in &b.terms {
            if let Some((s, m)) = mono_wedge(x, y) {
                t.add_term(m, &(p * q) * &int(s as i64));
            }
        }
    }
    FormElement { n: a.n, side: Side::Plus, terms: t }
}

fn raw_d(a: &FormElement) -> FormElement {
    let mut t = Lin::new();
    for (m, c) in &a.terms {
        for (s, r) in d_mono(m) {
            t.add_term(r, c * &s);
        }
    }
    FormElement { n: a.n, side: Side::Plus, terms: t }
}

/// `L_D`, `D ∈ K(1,n)_+` parity-homogeneous, as the derivation of parity
/// `p(D)` that agrees with the vector field on functions and supercommutes
/// with `d`.
pub fn lie_derivative(d: &AnnihilationElement, a: &FormElement) -> Result<FormElement> {
    if d.n != a.n {
        return Err(Error::RankMismatch(d.n, a.n));
    }
    let v = to_vector_field(d)?;
    Ok(lie_derivative_field(&v, a))
}

pub fn lie_derivative_field(v: &VectorField, a: &FormElement) -> FormElement {
    let n = a.n;
    let pd = v.parity;
    // L_D d = (−1)^{p(D)} d L_D
    let sd = int(if pd == 1 { -1 } else { 1 });
    let ldt = raw_d(&FormElement::from_function(&v.a)).scale(&sd);
    let ldxi: Vec<FormElement> = v.ai.iter().map(|x| raw_d(&FormElement::from_function(x)).scale(&sd)).collect();
    let mut out = FormElement::zero(n, Side::Plus);
    for (m, c) in &a.terms {
        let f = FormMonomial::function(n, m.tpow, m.xi);
        let mut tail = m.clone();
        tail.tpow = 0;
        tail.xi = Mono::ONE;
        let tail_f = FormElement { n, side: Side::Plus, terms: Lin::single(tail.clone(), int(1)) };
        // L(f)·tail
        let mut acc = raw_wedge(&laurent(field_apply(v, &f)), &tail_f);
        let sf = int(if pd * m.xi.parity() % 2 == 1 { -1 } else { 1 });
        let fe = FormElement { n, side: Side::Plus, terms: Lin::single(f.clone(), int(1)) };
        let mut rest = tail.clone();
        if m.dt {
            // f · L(dt) · dξ^c
            rest.dt = false;
            let rest_e = FormElement { n, side: Side::Plus, terms: Lin::single(rest.clone(), int(1)) };
            acc = acc.add(&raw_wedge(&raw_wedge(&fe, &ldt), &rest_e).scale(&sf));
        }
        // f dt^e · Σ c_i dξ_i^{c_i − 1} … · L(dξ_i)
        let sfe = int(if pd * m.parity() % 2 == 1 { -1 } else { 1 });
        for i in 0..n {
            let ci = m.dxi[i];
            if ci == 0 {
                continue;
            }
            let mut head = m.clone();
            head.dxi[i] -= 1;
            let he = FormElement { n, side: Side::Plus, terms: Lin::single(head, int(1)) };
            acc = acc.add(&raw_wedge(&he, &ldxi[i]).scale(&(&sfe * &int(ci as i64))));
        }
        out = out.add(&acc.scale(c));
    }
    out.side = a.side;
    out.projected()
}

/// `E_00`, `H_j` and Borel elements as annihilation-algebra elements.
pub fn so_element(n: usize, x: &SoElement) -> AnnihilationElement {
    let mut out = AnnihilationElement::zero(n);
    for (&(a, b), c) in x {
        out = out.add(&AnnihilationElement::f_ij(n, a, b).scale(c));
    }
    out
}

// ---------------------------------------------------------------- homotopy

/// `K(dξ_n ν) = ξ_n ν`, `K = 0` on monomials without `dξ_n`.
pub fn homotopy_k(a: &FormElement) -> FormElement {
    let n = a.n;
    let mut t = Lin::new();
    for (m, c) in &a.terms {
        if m.dxi[n - 1] == 0 {
            continue;
        }
        let mut r = m.clone();
        r.dxi[n - 1] -= 1;
        if let Some((s, xi)) = mono_mul(Mono::xi(n), r.xi) {
            r.xi = xi;
            t.add_term(r, c * &int(s as i64));
        }
    }
    FormElement { n, side: a.side, terms: t }
}

/// `ε(ν) = ν` unless `ν` involves `dξ_n` or `ξ_n`, then 0.
pub fn homotopy_eps(a: &FormElement) -> FormElement {
    let n = a.n;
    let mut t = a.terms.clone();
    t.retain(|m| m.dxi[n - 1] == 0 && !m.xi.contains(n));
    FormElement { n, side: a.side, terms: t }
}

// ---------------------------------------------------------------- components

fn compositions(parts: usize, total: usize) -> Vec<Vec<u8>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

/// All monomials of form degree `k` and weight `w` on the given side.
pub fn component_monomials(n: usize, side: Side, k: usize, w: i64) -> Vec<FormMonomial> {
    let mut out = Vec::new();
    for e in [false, true] {
        if e && k == 0 {
            continue;
        }
        let cdeg = k - e as usize;
        for xi in all_monos(n) {
            let rest = w - xi.degree() as i64 - e as i64 - k as i64;
            if rest % 2 != 0 {
                continue;
            }
            let a = (rest / 2) as i32;
            let ok = match side {
                Side::Plus => a >= 0,
                Side::Minus => a < 0,
            };
            if !ok {
                continue;
            }
            for c in compositions(n, cdeg) {
                out.push(FormMonomial { dt: e, dxi: c, xi, tpow: a });
            }
        }
    }
    out.sort();
    out
}

/// Extreme `t`-power in a component (max on plus side, min on minus side).
fn extreme_tpow(n: usize, side: Side, k: usize, w: i64) -> Option<i32> {
    let ms = component_monomials(n, side, k, w);
    match side {
        Side::Plus => ms.iter().map(|m| m.tpow).max(),
        Side::Minus => ms.iter().map(|m| m.tpow).min(),
    }
}

fn within(side: Side, t: Option<i32>, tmax: i32) -> bool {
    match (side, t) {
        (_, None) => true,
        (Side::Plus, Some(a)) => a <= tmax,
        (Side::Minus, Some(a)) => a >= -tmax,
    }
}

/// Graded piece of `Ω^k / I^k` at one weight.
#[derive(Clone, Debug)]
pub struct Component {
    pub k: usize,
    pub weight: i64,
    pub basis: Vec<FormMonomial>,
    pub index: BTreeMap<FormMonomial, usize>,
    pub ideal: Echelon,
    /// Basis columns that survive in the quotient.
    pub quotient: Vec<usize>,
}

impl Component {
    pub fn new(n: usize, side: Side, k: usize, w: i64) -> Self {
        let basis = component_monomials(n, side, k, w);
        let index: BTreeMap<FormMonomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ideal = Echelon::new();
        for g in ideal_generators(n, side, k, w) {
            ideal.insert(to_row(&index, &g).expect("ideal generator in component"));
        }
        let quotient = (0..basis.len()).filter(|c| !ideal.is_pivot(*c)).collect();
        Component { k, weight: w, basis, index, ideal, quotient }
    }

    pub fn dim(&self) -> usize {
        self.quotient.len()
    }

    /// Coordinates of a form in this component modulo the ideal.
    pub fn reduce(&self, a: &FormElement) -> Option<Row> {
        Some(self.ideal.reduce(to_row(&self.index, a)?))
    }
}

fn to_row(index: &BTreeMap<FormMonomial, usize>, a: &FormElement) -> Option<Row> {
    let mut r = Row::new();
    for (m, c) in &a.terms {
        r.insert(*index.get(m)?, c.clone());
    }
    Some(r)
}

/// Spanning set of `I^k` at weight `w`: `ω∧Ω^{k−1}_{w−2} + dω∧Ω^{k−2}_{w−2}`.
pub fn ideal_generators(n: usize, side: Side, k: usize, w: i64) -> Vec<FormElement> {
    let mut out = Vec::new();
    let om = omega(n);
    let dom = om.d();
    if k >= 1 {
        for m in component_monomials(n, side, k - 1, w - 2) {
            let x = FormElement { n, side, terms: Lin::single(m, int(1)) };
            out.push(om.wedge(&x).expect("same n").on_side(side));
        }
    }
    if k >= 2 {
        for m in component_monomials(n, side, k - 2, w - 2) {
            let x = FormElement { n, side, terms: Lin::single(m, int(1)) };
            out.push(dom.wedge(&x).expect("same n").on_side(side));
        }
    }
    out.retain(|g| !g.is_zero());
    out
}

/// Reduced echelon basis of the ideal's graded piece, as forms.
pub fn ideal_component(n: usize, side: Side, k: usize, w: i64) -> Vec<FormElement> {
    let c = Component::new(n, side, k, w);
    c.ideal.reduced_rows().into_values().map(|r| FormElement { n, side, terms: r.into_iter().map(|(i, x)| (c.basis[i].clone(), x)).collect() }).collect()
}

// ---------------------------------------------------------------- complex

#[derive(Clone, Debug, Serialize)]
pub struct LevelDefect {
    pub k: usize,
    pub weight: i64,
    pub dim: usize,
    pub kernel: usize,
    pub image_in: usize,
    pub defect: usize,
}

pub struct QuotientComplex {
    pub n: usize,
    pub side: Side,
    pub kmax: usize,
    pub tmax: i32,
    pub comps: BTreeMap<(usize, i64), Component>,
    /// Rank of `d: (k, w) → (k+1, w)` on the quotients.
    pub ranks: BTreeMap<(usize, i64), usize>,
    /// `d(I^k) ⊆ I^{k+1}` on every generator.
    pub ideal_closed: bool,
    /// `d∘d = 0` on the quotients.
    pub dd_zero: bool,
    /// Components `(k, w)` inside the requested range that the truncation clips.
    pub clipped: Vec<(usize, i64)>,
}

fn weight_range(n: usize, side: Side, k: usize, tmax: i32) -> (i64, i64) {
    // w = 2a + |I| + e + k; padded so that empty neighbours are present too
    match side {
        Side::Plus => (k as i64 - 2, 2 * tmax as i64 + n as i64 + 1 + k as i64),
        Side::Minus => (-2 * tmax as i64 + k as i64 - 2, n as i64 + k as i64 + 1),
    }
}

/// Quotient complex at levels `0..=kmax+1`, components whose `t`-powers stay
/// within `tmax`.
pub fn quotient_complex(n: usize, side: Side, kmax: usize, tmax: i32) -> Result<QuotientComplex> {
    if n == 0 {
        return Err(Error::Unsupported("n = 0 has no odd variables".into()));
    }
    let mut comps = BTreeMap::new();
    let mut clipped = Vec::new();
    for k in 0..=kmax + 1 {
        let (lo, hi) = weight_range(n, side, k, tmax);
        for w in lo..=hi {
            if within(side, extreme_tpow(n, side, k, w), tmax) {
                comps.insert((k, w), Component::new(n, side, k, w));
            } else {
                clipped.push((k, w));
            }
        }
    }
    let mut ranks = BTreeMap::new();
    let mut ideal_closed = true;
    let mut images: BTreeMap<(usize, i64), Vec<Row>> = BTreeMap::new();
    for (&(k, w), c) in &comps {
        let Some(t) = comps.get(&(k + 1, w)) else { continue };
        for g in ideal_generators(n, side, k, w) {
            let r = t.reduce(&g.d()).expect("d preserves weight");
            ideal_closed &= r.is_empty();
        }
        let mut e = Echelon::new();
        let mut imgs = Vec::new();
        for &q in &c.quotient {
            let x = FormElement { n, side, terms: Lin::single(c.basis[q].clone(), int(1)) };
            let r = t.reduce(&x.d()).expect("d preserves weight");
            imgs.push(r.clone());
            e.insert(r);
        }
        ranks.insert((k, w), e.rank());
        images.insert((k, w), imgs);
    }
    // d∘d on quotient coordinates
    let mut dd_zero = true;
    for (&(k, w), imgs) in &images {
        let (Some(mid), Some(top)) = (comps.get(&(k + 1, w)), comps.get(&(k + 2, w))) else { continue };
        for r in imgs {
            let x = FormElement { n, side, terms: r.iter().map(|(i, c)| (mid.basis[*i].clone(), c.clone())).collect() };
            dd_zero &= top.reduce(&x.d()).expect("weight").is_empty();
        }
    }
    Ok(QuotientComplex { n, side, kmax, tmax, comps, ranks, ideal_closed, dd_zero, clipped })
}

impl QuotientComplex {
    /// `dim ker d_k − rank d_{k−1}` on every component whose neighbours are
    /// inside the truncation.
    pub fn defects(&self) -> Vec<LevelDefect> {
        let mut out = Vec::new();
        for (&(k, w), c) in &self.comps {
            if k > self.kmax {
                continue;
            }
            let Some(&r) = self.ranks.get(&(k, w)) else { continue };
            let rin = if k == 0 {
                0
            } else {
                match self.ranks.get(&(k - 1, w)) {
                    Some(x) => *x,
                    None => continue,
                }
            };
            let kernel = c.dim() - r;
            out.push(LevelDefect { k, weight: w, dim: c.dim(), kernel, image_in: rin, defect: kernel - rin });
        }
        out
    }

    /// Total defect per level.
    pub fn defect_by_level(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for k in 0..=self.kmax {
            m.insert(k, 0);
        }
        for d in self.defects() {
            *m.entry(d.k).or_insert(0) += d.defect;
        }
        m
    }

    /// Quotient dimension of `(k, w)` if represented.
    pub fn dim(&self, k: usize, w: i64) -> Option<usize> {
        self.comps.get(&(k, w)).map(|c| c.dim())
    }
}

// ---------------------------------------------------------------- checks

/// Every plus-side monomial with `t`-power `≤ tmax` and form degree `≤ kmax`.
pub fn plus_monomials(n: usize, kmax: usize, tmax: i32) -> Vec<FormMonomial> {
    let mut out = Vec::new();
    for k in 0..=kmax {
        for e in [false, true] {
            if e && k == 0 {
                continue;
            }
            for c in compositions(n, k - e as usize) {
                for xi in all_monos(n) {
                    for a in 0..=tmax {
                        out.push(FormMonomial { dt: e, dxi: c.clone(), xi, tpow: a });
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyReport {
    pub n: usize,
    pub monomials: usize,
    pub failures: Vec<String>,
    pub d_squared_failures: Vec<String>,
}

/// `Kd + dK = Id − ε` and `d² = 0` on every plus-side monomial in range.
pub fn homotopy_check(n: usize, kmax: usize, tmax: i32) -> HomotopyReport {
    let ms = plus_monomials(n, kmax, tmax);
    let mut failures = Vec::new();
    let mut dd = Vec::new();
    for m in &ms {
        let x = FormElement { n, side: Side::Plus, terms: Lin::single(m.clone(), int(1)) };
        let lhs = homotopy_k(&x.d()).add(&homotopy_k(&x).d());
        let rhs = x.add(&homotopy_eps(&x).scale(&int(-1)));
        if lhs != rhs {
            failures.push(m.to_string());
        }
        if !x.d().d().is_zero() {
            dd.push(m.to_string());
        }
    }
    HomotopyReport { n, monomials: ms.len(), failures, d_squared_failures: dd }
}

/// Weight of a form under `(E_00; H_1..H_m)`, if it is a joint eigenvector.
pub fn form_weight(a: &FormElement) -> Result<Option<Weight>> {
    let n = a.n;
    let eig = |x: &AnnihilationElement| -> Result<Option<GaussScalar>> {
        let b = lie_derivative(x, a)?;
        let Some((m, c)) = a.terms.first() else { return Err(Error::ZeroVector) };
        let lam = &b.terms.get(m) / c;
        Ok((b == a.scale(&lam)).then_some(lam))
    };
    let Some(mu0) = eig(&AnnihilationElement::t(n))? else { return Ok(None) };
    let mut mu = Vec::new();
    for j in 1..=rank_of(n) {
        let h = AnnihilationElement::f_ij(n, 2 * j - 1, 2 * j).scale(&GaussScalar::i());
        match eig(&h)? {
            Some(x) if x.is_real() => mu.push(x.re),
            _ => return Ok(None),
        }
    }
    Ok(Some(Weight { mu0, mu }))
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub n: usize,
    pub side: Side,
    pub k: usize,
    pub vector: String,
    /// Highest weight of the module (`T^k` on the plus side, `Γ^k_−` on the minus side).
    pub weight: Option<String>,
    pub expected: String,
    /// Extremal-vector conditions (root vectors of the relevant sign kill it
    /// modulo the ideal) and, on the minus side, triviality of `g_{>0}`.
    pub extremal: bool,
    pub passed: bool,
}

fn power(a: &FormElement, k: usize) -> FormElement {
    let mut out = FormElement::one(a.n).on_side(a.side);
    if a.side == Side::Minus {
        out = FormElement::mono(a.n, Side::Plus, FormMonomial::function(a.n, 0, Mono::ONE), int(1));
    }
    for _ in 0..k {
        out = raw_wedge(&out, a);
    }
    out
}

fn modulo_ideal_zero(x: &FormElement, k: usize, side: Side) -> bool {
    let mut by_w: BTreeMap<i64, FormElement> = BTreeMap::new();
    for (m, c) in &x.terms {
        by_w.entry(m.weight()).or_insert_with(|| FormElement::zero(x.n, side)).terms.add_term(m.clone(), c.clone());
    }
    by_w.into_iter().all(|(w, part)| Component::new(x.n, side, k, w).reduce(&part).map(|r| r.is_empty()).unwrap_or(false))
}

/// Weight of the distinguished vector of `Γ^k`: plus side — the lowest-weight
/// vector `(dξ_1 + i dξ_2)^k` (reported as the highest weight of its dual
/// `T^k`, i.e. negated); minus side — `t^{−1}ξ_*(dξ_1 − i dξ_2)^k`.
pub fn gamma_weights(n: usize, k: usize, side: Side) -> Result<GammaReport> {
    if n < 2 {
        return Err(Error::Unsupported("needs n >= 2".into()));
    }
    let i = GaussScalar::i();
    let s = if side == Side::Plus { i.clone() } else { -i.clone() };
    let lin = FormElement::dxi(n, 1).add(&FormElement::dxi(n, 2).scale(&s));
    let mut v = power(&lin, k);
    if side == Side::Minus {
        let pre = FormElement { n, side: Side::Plus, terms: Lin::single(FormMonomial::function(n, -1, Mono::top(n)), int(1)) };
        v = raw_wedge(&pre, &v);
    }
    v.side = side;
    let v = v.projected();
    let w = form_weight(&v)?;
    let m = rank_of(n);
    let kk = k as i64;
    let mut mu: Vec<Rational> = vec![Rational::zero(); m];
    let (mu0, sign) = match side {
        Side::Plus => {
            mu[0] = Rational::from_int(kk);
            (-kk, -1)
        }
        Side::Minus => {
            mu[0] = Rational::from_int(kk);
            (n as i64 + kk - 2, 1)
        }
    };
    let expected = Weight { mu0: int(mu0), mu };
    let reported = w.map(|w| if sign < 0 { Weight { mu0: -w.mu0, mu: w.mu.iter().map(|x| -x.clone()).collect() } } else { w });
    // extremal: raising (minus side) / lowering (plus side) root vectors kill v mod I
    let mut extremal = true;
    for r in crate::so_rep::positive_roots(n) {
        let root: Vec<i32> = r.iter().map(|c| c * sign).collect();
        let x = so_element(n, &root_vector(n, &root)?);
        extremal &= modulo_ideal_zero(&lie_derivative(&x, &v)?, k, side);
    }
    if side == Side::Minus {
        for j in 1..=3 {
            for x in crate::kn_algebra::graded_basis(n, j) {
                if x.parity().is_some() {
                    extremal &= modulo_ideal_zero(&lie_derivative(&x, &v)?, k, side);
                }
            }
        }
    }
    let passed = extremal && reported.as_ref() == Some(&expected);
    Ok(GammaReport { n, side, k, vector: v.to_string(), weight: reported.map(|w| w.to_string()), expected: expected.to_string(), extremal, passed })
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    pub depth: i64,
    pub forms: usize,
    pub induced: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterReport {
    pub n: usize,
    pub l: usize,
    pub dim_gamma: u64,
    pub rows: Vec<CharacterRow>,
    pub passed: bool,
}

/// Graded dims of `Ω^l_+/I^l_+` at weight `l + j` against those of
/// `Ind(T^l)` at grade `−j`, `0 ≤ j ≤ depth`.
pub fn graded_character_compare(n: usize, l: usize, depth: i64) -> Result<CharacterReport> {
    let hw = Weight {
        mu0: int(-(l as i64)),
        mu: std::iter::once(Rational::from_int(l as i64)).chain(std::iter::repeat(Rational::zero())).take(rank_of(n)).collect(),
    };
    let dim_gamma = if n >= 2 { weyl_dim(n, &hw)? } else { 1 };
    let mut rows = Vec::new();
    for j in 0..=depth {
        let c = Component::new(n, Side::Plus, l, l as i64 + j);
        let mut count = 0usize;
        for k in 0..=j / 2 {
            let s = (j - 2 * k) as usize;
            if s <= n {
                count += binom(n, s);
            }
        }
        rows.push(CharacterRow { depth: j, forms: c.dim(), induced: count * dim_gamma as usize });
    }
    let passed = rows.iter().all(|r| r.forms == r.induced);
    Ok(CharacterReport { n, l, dim_gamma, rows, passed })
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_basics() {
        let n = 3;
        assert!(FormElement::dt(n).wedge(&FormElement::dt(n)).unwrap().is_zero());
        let a = FormElement::dxi(n, 1).wedge(&FormElement::dxi(n, 1)).unwrap();
        assert_eq!(a.terms.len(), 1);
        assert_eq!(a.terms.keys().next().unwrap().dxi, vec![2, 0, 0]);
        let x = FormElement::xi(n, 1).wedge(&FormElement::dt(n)).unwrap();
        let y = FormElement::dt(n).wedge(&FormElement::xi(n, 1)).unwrap();
        assert_eq!(x, y.scale(&int(-1)));
    }

    #[test]
    fn d_of_contact_form() {
        let n = 4;
        let mut expect = FormElement::zero(n, Side::Plus);
        for i in 1..=n {
            expect = expect.add(&FormElement::dxi(n, i).wedge(&FormElement::dxi(n, i)).unwrap().scale(&int(-1)));
        }
        assert_eq!(omega(n).d(), expect);
        assert_eq!(FormElement::t_pow(n, Side::Plus, 1).d(), FormElement::dt(n));
        let x = FormElement::xi(n, 1).wedge(&FormElement::xi(n, 2)).unwrap();
        assert!(x.d().d().is_zero());
    }

    #[test]
    fn e00_is_weight() {
        let n = 3;
        for m in component_monomials(n, Side::Plus, 2, 5).into_iter().chain(component_monomials(n, Side::Minus, 2, 1)) {
            let side = if m.tpow < 0 { Side::Minus } else { Side::Plus };
            let x = FormElement { n, side, terms: Lin::single(m.clone(), int(1)) };
            let y = lie_derivative(&AnnihilationElement::t(n), &x).unwrap();
            assert_eq!(y, x.scale(&int(m.weight())), "{m}");
        }
    }

    #[test]
    fn lie_commutes_with_d_and_brackets() {
        let n = 3;
        let gens = [
            AnnihilationElement::xi(n, 1),
            AnnihilationElement::t(n),
            AnnihilationElement::f_ij(n, 1, 2),
            AnnihilationElement::mono(n, 1, Mono::from_indices(&[2]), int(1)),
            AnnihilationElement::mono(n, 0, Mono::from_indices(&[1, 2, 3]), int(1)),
        ];
        let forms = [
            FormElement::mono(n, Side::Plus, FormMonomial { dt: true, dxi: vec![1, 0, 2], xi: Mono::from_indices(&[2]), tpow: 2 }, int(1)),
            FormElement::mono(n, Side::Minus, FormMonomial { dt: false, dxi: vec![0, 1, 0], xi: Mono::from_indices(&[1, 3]), tpow: -2 }, int(1)),
        ];
        for x in &gens {
            let p = x.parity().unwrap();
            for a in &forms {
                let l1 = lie_derivative(x, &a.d()).unwrap();
                let l2 = lie_derivative(x, a).unwrap().d().scale(&GaussScalar::sign(p as i64));
                assert_eq!(l1, l2, "[L, d] for {x}");
            }
            for y in &gens {
                let q = y.parity().unwrap();
                let br = crate::kn_algebra::contact_bracket(x, y);
                for a in &forms {
                    let lhs = lie_derivative(&br, a).unwrap();
                    let ab = lie_derivative(x, &lie_derivative(y, a).unwrap()).unwrap();
                    let ba = lie_derivative(y, &lie_derivative(x, a).unwrap()).unwrap();
                    let rhs = ab.add(&ba.scale(&GaussScalar::sign((p * q) as i64)).scale(&int(-1)));
                    assert_eq!(lhs, rhs, "bracket {x}, {y}");
                }
            }
        }
    }

    #[test]
    fn homotopy_small() {
        let r = homotopy_check(2, 2, 2);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.d_squared_failures.is_empty());
    }

    #[test]
    fn t_dt_is_exact() {
        let n = 3;
        let c = quotient_complex(n, Side::Plus, 1, 3).unwrap();
        let tdt = FormElement::t_pow(n, Side::Plus, 1).wedge(&FormElement::dt(n)).unwrap();
        assert_eq!(FormElement::t_pow(n, Side::Plus, 2).d().scale(&GaussScalar::from_ratio(1, 2)), tdt);
        assert_eq!(c.defect_by_level()[&0], 1);
        assert_eq!(c.defect_by_level()[&1], 0);
    }

    #[test]
    fn ideal_basics() {
        assert!(ideal_component(3, Side::Plus, 0, 0).is_empty());
        // Σ(dξ_i)² ∈ I²
        let c = Component::new(3, Side::Plus, 2, 2);
        let dom = omega(3).d();
        assert!(c.reduce(&dom).unwrap().is_empty());
    }

    #[test]
    fn minus_gamma_weight() {
        let r = gamma_weights(4, 2, Side::Minus).unwrap();
        assert_eq!(r.weight.as_deref(), Some("(4; 2, 0)"));
        assert!(r.passed, "{r:?}");
        let r = gamma_weights(4, 1, Side::Plus).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
