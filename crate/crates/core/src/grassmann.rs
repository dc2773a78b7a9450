//! The Grassmann superalgebra Λ(n).
//!
//! A monomial `ξ_I` is a bit mask (bit `i-1` ↔ `ξ_i`), always stored in
//! increasing index order. Derivatives are *left* derivatives:
//! `∂_i ξ_I = (-1)^{ε_i(I)} ξ_{I∖i}` with `ε_i(I) = #{j ∈ I : j < i}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::GaussScalar;
use crate::sparse::Lin;

/// Canonical monomial `ξ_I`; ordered by degree, then mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub u32);

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.count_ones(), self.0).cmp(&(other.0.count_ones(), other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn xi(i: usize) -> Mono {
        debug_assert!(i >= 1);
        Mono(1 << (i - 1))
    }

    pub fn from_indices(idx: &[usize]) -> Mono {
        Mono(idx.iter().fold(0, |m, &i| m | (1 << (i - 1))))
    }

    /// `ξ_*` = ξ_1…ξ_n.
    pub fn top(n: usize) -> Mono {
        Mono(full_mask(n))
    }

    /// `ξ_{I^c}` written in increasing order (no sign).
    pub fn complement(self, n: usize) -> Mono {
        Mono(full_mask(n) & !self.0)
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn parity(self) -> u32 {
        self.0.count_ones() & 1
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `ε_i(I) = #{j ∈ I : j < i}`
pub fn epsilon(i: usize, set: Mono) -> u32 {
    (set.0 & ((1u32 << (i - 1)) - 1)).count_ones()
}

/// `ξ_A ξ_B = sign · ξ_{A∪B}`, or `None` when the sets meet.
pub fn mono_mul(a: Mono, b: Mono) -> Option<(i32, Mono)> {
    if a.0 & b.0 != 0 {
        return None;
    }
    // count pairs (x ∈ A, y ∈ B) with x > y
    let mut inv = 0u32;
    let mut bb = b.0;
    while bb != 0 {
        let y = bb.trailing_zeros();
        inv += (a.0 >> (y + 1)).count_ones();
        bb &= bb - 1;
    }
    Some((if inv.is_multiple_of(2) { 1 } else { -1 }, Mono(a.0 | b.0)))
}

/// Left derivative `∂_i ξ_I`.
pub fn mono_derive(i: usize, m: Mono) -> Option<(i32, Mono)> {
    if !m.contains(i) {
        return None;
    }
    let s = if epsilon(i, m).is_multiple_of(2) { 1 } else { -1 };
    Some((s, Mono(m.0 & !(1 << (i - 1)))))
}

/// `∂_{l_1}…∂_{l_s} ξ_I` (rightmost derivative applied first).
pub fn mono_derive_multi(list: &[usize], m: Mono) -> Option<(i32, Mono)> {
    let mut sign = 1;
    let mut cur = m;
    for &l in list.iter().rev() {
        let (s, r) = mono_derive(l, cur)?;
        sign *= s;
        cur = r;
    }
    Some((sign, cur))
}

/// `∂_L ξ_I` for `L` given as a monomial (indices in increasing order).
pub fn mono_derive_by(l: Mono, m: Mono) -> Option<(i32, Mono)> {
    mono_derive_multi(&l.indices(), m)
}

/// Hodge dual: `hodge(ξ_I) = s · ξ_{I^c}` with `s·ξ_{I^c} ξ_I = ξ_*`.
pub fn mono_hodge(m: Mono, n: usize) -> (i32, Mono) {
    let c = m.complement(n);
    let (s, _) = mono_mul(c, m).expect("disjoint");
    (s, c)
}

fn sgn(s: i32) -> GaussScalar {
    GaussScalar::from_int(s as i64)
}

/// Element of Λ(n).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GrassmannElement {
    pub n: usize,
    pub terms: Lin<Mono>,
}

impl GrassmannElement {
    pub fn zero(n: usize) -> Self {
        GrassmannElement { n, terms: Lin::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::mono(n, Mono::ONE, GaussScalar::one())
    }

    pub fn mono(n: usize, m: Mono, c: GaussScalar) -> Self {
        GrassmannElement { n, terms: Lin::single(m, c) }
    }

    pub fn xi(n: usize, i: usize) -> Self {
        Self::mono(n, Mono::xi(i), GaussScalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut t = self.terms.clone();
        t.add(&other.terms);
        Ok(GrassmannElement { n: self.n, terms: t })
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        GrassmannElement { n: self.n, terms: self.terms.scaled(c) }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Lin::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, m)) = mono_mul(*a, *b) {
                    out.add_term(m, &(ca * cb) * &sgn(s));
                }
            }
        }
        Ok(GrassmannElement { n: self.n, terms: out })
    }

    pub fn derive(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let terms = self.terms.map_keys(|m| mono_derive(i, *m).map(|(s, r)| (r, sgn(s))));
        Ok(GrassmannElement { n: self.n, terms })
    }

    pub fn derive_multi(&self, list: &[usize]) -> Result<Self> {
        for &l in list {
            self.check_index(l)?;
        }
        let terms = self.terms.map_keys(|m| mono_derive_multi(list, *m).map(|(s, r)| (r, sgn(s))));
        Ok(GrassmannElement { n: self.n, terms })
    }

    pub fn hodge(&self) -> Self {
        let n = self.n;
        let terms = self.terms.map_keys(|m| {
            let (s, r) = mono_hodge(*m, n);
            Some((r, sgn(s)))
        });
        GrassmannElement { n, terms }
    }

    /// Parity if homogeneous.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let p = it.next().unwrap_or(0);
        if it.all(|q| q == p) {
            Some(p)
        } else {
            None
        }
    }

    /// Parse `"x1 x3"`, `"1"`, or a signed sum such as `"x1 x2 - i x3"` is not supported; monomials only.
    pub fn parse_mono(n: usize, s: &str) -> Result<Mono> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Mono::ONE);
        }
        let mut idx = Vec::new();
        for tok in s.split_whitespace() {
            let num = tok.strip_prefix('x').ok_or_else(|| Error::Parse(format!("bad monomial token `{tok}`")))?;
            let i: usize = num.parse().map_err(|_| Error::Parse(format!("bad index `{tok}`")))?;
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            idx.push(i);
        }
        let mut m = Mono::ONE;
        let mut sign = 1;
        for i in idx {
            let (s, r) = mono_mul(m, Mono::xi(i)).ok_or_else(|| Error::Parse(format!("repeated index in `{s}`")))?;
            sign *= s;
            m = r;
        }
        if sign != 1 {
            return Err(Error::Parse(format!("monomial `{s}` must list indices in increasing order")));
        }
        Ok(m)
    }
}

pub fn mono_str(m: Mono) -> String {
    if m.0 == 0 {
        return "1".into();
    }
    m.indices().iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*[{}]", mono_str(*m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All monomials of Λ(n) in canonical order.
pub fn all_monos(n: usize) -> Vec<Mono> {
    let mut v: Vec<Mono> = (0..(1u32 << n)).map(Mono).collect();
    v.sort();
    v
}

impl FromStr for Mono {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GrassmannElement::parse_mono(31, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(idx: &[usize]) -> Mono {
        Mono::from_indices(idx)
    }

    #[test]
    fn products() {
        assert_eq!(mono_mul(m(&[1]), m(&[2])), Some((1, m(&[1, 2]))));
        assert_eq!(mono_mul(m(&[2]), m(&[1])), Some((-1, m(&[1, 2]))));
        assert_eq!(mono_mul(m(&[1]), m(&[1])), None);
    }

    #[test]
    fn derivatives() {
        assert_eq!(mono_derive(1, m(&[1, 2])), Some((1, m(&[2]))));
        assert_eq!(mono_derive(2, m(&[1, 2])), Some((-1, m(&[1]))));
        assert_eq!(mono_derive(3, m(&[1, 2])), None);
        assert_eq!(mono_derive_multi(&[1, 2], m(&[1, 2])), Some((-1, Mono::ONE)));
        assert_eq!(mono_derive_multi(&[1, 2, 3], m(&[1, 2, 3])), Some((-1, Mono::ONE)));
        assert_eq!(mono_derive_multi(&[1], m(&[2])), None);
        let e = GrassmannElement::xi(2, 1);
        assert!(matches!(e.derive(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn epsilon_counts() {
        assert_eq!(epsilon(3, m(&[1, 2, 4])), 2);
        assert_eq!(epsilon(1, m(&[1, 2, 4])), 0);
        assert_eq!(epsilon(5, m(&[1, 2, 3, 4])), 4);
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(mono_hodge(m(&[1, 2]), 3), (1, m(&[3])));
        assert_eq!(mono_hodge(m(&[1]), 2), (-1, m(&[2])));
        assert_eq!(mono_hodge(Mono::ONE, 4), (1, Mono::top(4)));
    }

    #[test]
    fn leibniz_check_of_second_derivative_sign() {
        // ∂_2(ξ_1 ξ_2) = (∂_2 ξ_1)ξ_2 − ξ_1 ∂_2 ξ_2 = −ξ_1
        let x1 = GrassmannElement::xi(2, 1);
        let x2 = GrassmannElement::xi(2, 2);
        let lhs = x1.mul(&x2).unwrap().derive(2).unwrap();
        let rhs = x1.derive(2).unwrap().mul(&x2).unwrap().add(&x1.mul(&x2.derive(2).unwrap()).unwrap().scale(&GaussScalar::from_int(-1))).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, x1.scale(&GaussScalar::from_int(-1)));
    }

    fn el(n: usize, a: Mono) -> GrassmannElement {
        GrassmannElement::mono(n, a, GaussScalar::one())
    }

    fn sign_pow(k: usize) -> GaussScalar {
        GaussScalar::sign(k as i64)
    }

    #[test]
    fn exhaustive_algebra_identities() {
        for n in 0..=5 {
            let monos = all_monos(n);
            for &a in &monos {
                for &b in &monos {
                    let fa = el(n, a);
                    let fb = el(n, b);
                    let ab = fa.mul(&fb).unwrap();
                    // super-commutativity
                    let ba = fb.mul(&fa).unwrap().scale(&sign_pow(a.degree() * b.degree()));
                    assert_eq!(ab, ba);
                    // odd derivation
                    for i in 1..=n {
                        let lhs = ab.derive(i).unwrap();
                        let rhs = fa.derive(i).unwrap().mul(&fb).unwrap().add(&fa.mul(&fb.derive(i).unwrap()).unwrap().scale(&sign_pow(a.degree()))).unwrap();
                        assert_eq!(lhs, rhs, "n={n} a={a:?} b={b:?} i={i}");
                    }
                    for &c in &monos {
                        let fc = el(n, c);
                        assert_eq!(ab.mul(&fc).unwrap(), fa.mul(&fb.mul(&fc).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn left_derivative_sign_identities() {
        for n in 0..=5 {
            let monos = all_monos(n);
            for &i_set in &monos {
                let k = i_set.degree();
                let tri = k * k.saturating_sub(1) / 2;
                // ∂_I ξ_I = (−1)^{|I|(|I|−1)/2}
                assert_eq!(mono_derive_by(i_set, i_set), Some((sign_i(tri), Mono::ONE)));
                for i in i_set.indices() {
                    // ∂_{I∖i} ξ_I = (−1)^{ε_i + |I|(|I|−1)/2} ξ_i
                    let rest = Mono(i_set.0 & !(1 << (i - 1)));
                    let e = epsilon(i, i_set) as usize;
                    assert_eq!(mono_derive_by(rest, i_set), Some((sign_i(e + tri), Mono::xi(i))));
                    for j in i_set.indices().into_iter().filter(|&j| j > i) {
                        let rest2 = Mono(rest.0 & !(1 << (j - 1)));
                        let ej = epsilon(j, i_set) as usize;
                        let (s, r) = mono_mul(Mono::xi(i), Mono::xi(j)).unwrap();
                        let got = mono_derive_by(rest2, i_set);
                        assert_eq!(got, Some((sign_i(e + ej + tri) * s, r)), "I={i_set:?} i={i} j={j}");
                    }
                }
                // ∂_I(ξ_J ξ_K) = (−1)^{|I||J|} ξ_J ∂_I(ξ_K) for J ∩ I = ∅
                for &j_set in &monos {
                    if j_set.0 & i_set.0 != 0 {
                        continue;
                    }
                    for &k_set in &monos {
                        let jk = el(n, j_set).mul(&el(n, k_set)).unwrap();
                        let lhs = jk.derive_multi(&i_set.indices()).unwrap();
                        let rhs =
                            el(n, j_set).mul(&el(n, k_set).derive_multi(&i_set.indices()).unwrap()).unwrap().scale(&sign_pow(i_set.degree() * j_set.degree()));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    fn sign_i(k: usize) -> i32 {
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn hodge_derivative_identities() {
        for n in 1..=5 {
            let monos = all_monos(n);
            for &g in &monos {
                let gb = el(n, g).hodge();
                // defining relation
                assert_eq!(gb.mul(&el(n, g)).unwrap(), el(n, Mono::top(n)));
                let gbar_deg = n - g.degree();
                // involution up to a sign, re-solved from the defining relation
                let gbb = gb.hodge();
                let (s1, _) = mono_hodge(g, n);
                let (s2, back) = mono_hodge(g.complement(n), n);
                assert_eq!(back, g);
                assert_eq!(gbb, el(n, g).scale(&GaussScalar::from_int((s1 * s2) as i64)));
                assert_eq!(s1 * s2, sign_i(g.degree() * gbar_deg));
                for i in 1..=n {
                    let xi = GrassmannElement::xi(n, i);
                    // overline{∂_i g} = overline{g} ξ_i = (−1)^{|ḡ|} ξ_i ḡ
                    let lhs = el(n, g).derive(i).unwrap().hodge();
                    assert_eq!(lhs, gb.mul(&xi).unwrap());
                    assert_eq!(lhs, xi.mul(&gb).unwrap().scale(&sign_pow(gbar_deg)));
                    // overline{ξ_i g} = −(−1)^{|ḡ|} ∂_i ḡ
                    let lhs = xi.mul(&el(n, g)).unwrap().hodge();
                    assert_eq!(lhs, gb.derive(i).unwrap().scale(&sign_pow(gbar_deg + 1)));
                    // overline{g ξ_i} = −(−1)^n ∂_i ḡ
                    let lhs = el(n, g).mul(&xi).unwrap().hodge();
                    assert_eq!(lhs, gb.derive(i).unwrap().scale(&sign_pow(n + 1)));
                }
                // overline{∂_f g} = (−1)^{|f|(|f|−1)/2 + |f||ḡ|} f ḡ
                for &f in &monos {
                    let lhs = el(n, g).derive_multi(&f.indices()).unwrap().hodge();
                    let fd = f.degree();
                    let rhs = el(n, f).mul(&gb).unwrap().scale(&sign_pow(fd * fd.saturating_sub(1) / 2 + fd * gbar_deg));
                    assert_eq!(lhs, rhs, "n={n} f={f:?} g={g:?}");
                }
            }
        }
    }

    #[test]
    fn parse_monomials() {
        assert_eq!(GrassmannElement::parse_mono(4, "x1 x3 x4").unwrap(), m(&[1, 3, 4]));
        assert_eq!(GrassmannElement::parse_mono(4, "1").unwrap(), Mono::ONE);
        assert!(GrassmannElement::parse_mono(4, "x5").is_err());
        assert!(GrassmannElement::parse_mono(4, "x2 x1").is_err());
        assert_eq!(mono_str(m(&[1, 3])), "x1 x3");
    }
}
