//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! [`Rational`] keeps values that fit in machine words on a fast path and
//! promotes to [`BigRational`] on overflow. Every value has exactly one
//! representation (small whenever it fits, always in lowest terms with a
//! positive denominator), so derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

/// Arbitrary precision rational number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) if n != i64::MIN => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational is already reduced with positive denominator.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(r))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// Value as `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        })
    }

    /// Normalized copy. Values are always stored normalized, so this is a clone.
    pub fn normalize(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*n as i128, *d as i128),
            Repr::Big(r) => Self::from_big(r.clone()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rational::from_i128(a + c, b);
            }
            if let Some(num) = (a * d).checked_add(c * b) {
                return Rational::from_i128(num, b * d);
            }
        }
        Rational::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            return Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, d)),
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -self.clone()
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

macro_rules! owned_binops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl AddAssign<&$t> for $t {
            fn add_assign(&mut self, rhs: &$t) {
                *self = &*self + rhs;
            }
        }
        impl SubAssign<&$t> for $t {
            fn sub_assign(&mut self, rhs: &$t) {
                *self = &*self - rhs;
            }
        }
        impl MulAssign<&$t> for $t {
            fn mul_assign(&mut self, rhs: &$t) {
                *self = &*self * rhs;
            }
        }
    };
}

owned_binops!(Rational);

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &other.0) {
            return (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128));
        }
        self.to_big().cmp(&other.to_big())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from_big(BigRational::new(num, den)))
    }
}

/// Exact Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussScalar {
    pub re: Rational,
    pub im: Rational,
}

/// Operation selector for [`GaussScalar::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl GaussScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussScalar { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussScalar::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussScalar::new(Rational::from_int(n), Rational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussScalar::new(Rational::new(num, den), Rational::zero())
    }

    pub fn real(r: Rational) -> Self {
        GaussScalar::new(r, Rational::zero())
    }

    /// `(-1)^k`
    pub fn sign(k: impl Into<i64>) -> Self {
        if k.into().rem_euclid(2) == 0 {
            Self::one()
        } else {
            Self::from_int(-1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re == Rational::one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussScalar::new(self.re.clone(), -&self.im)
    }

    /// `|z|^2`, a rational.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = n.recip()?;
        Ok(GaussScalar::new(&self.re * &r, -(&self.im * &r)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// The four field operations; division by zero is an error.
    pub fn arith(&self, rhs: &Self, op: ArithOp) -> Result<Self> {
        Ok(match op {
            ArithOp::Add => self + rhs,
            ArithOp::Sub => self - rhs,
            ArithOp::Mul => self * rhs,
            ArithOp::Div => self.checked_div(rhs)?,
        })
    }

    pub fn normalize(&self) -> Self {
        GaussScalar::new(self.re.normalize(), self.im.normalize())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Two-string JSON form `["p/q", "r/s"]`.
    pub fn to_pair(&self) -> [String; 2] {
        [self.re.to_string(), self.im.to_string()]
    }

    pub fn from_pair(re: &str, im: &str) -> Result<Self> {
        Ok(GaussScalar::new(re.parse()?, im.parse()?))
    }
}

impl From<i64> for GaussScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for GaussScalar {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn add(self, rhs: &GaussScalar) -> GaussScalar {
        GaussScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn sub(self, rhs: &GaussScalar) -> GaussScalar {
        GaussScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn mul(self, rhs: &GaussScalar) -> GaussScalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussScalar::real(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        GaussScalar::new(re, im)
    }
}

impl Neg for GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar::new(-self.re, -self.im)
    }
}

impl Neg for &GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        -self.clone()
    }
}

/// Panics on division by zero; use [`GaussScalar::checked_div`] to recover.
impl<'a> Div<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn div(self, rhs: &GaussScalar) -> GaussScalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

owned_binops!(GaussScalar);

impl Div for GaussScalar {
    type Output = GaussScalar;
    fn div(self, rhs: GaussScalar) -> GaussScalar {
        &self / &rhs
    }
}

impl fmt::Display for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &Rational| -> String {
            if *im == Rational::one() {
                "i".to_string()
            } else if *im == -Rational::one() {
                "-i".to_string()
            } else if im.is_integer() {
                format!("{im}i")
            } else {
                format!("({im})i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({}{}{})", self.re, sign, im_part(&self.im.abs()))
            }
        }
    }
}

impl fmt::Debug for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussScalar {
    type Err = Error;

    /// Accepts `p/q`, `p/qi`, `i`, `-i`, `a+bi`, `a-b/ci` and parenthesized forms.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let parse_im = |x: &str| -> Result<Rational> {
            let body = x.strip_suffix('i').unwrap_or(x);
            match body {
                "" | "+" => Ok(Rational::one()),
                "-" => Ok(-Rational::one()),
                b => b.parse(),
            }
        };
        if !t.ends_with('i') {
            return Ok(GaussScalar::real(t.parse()?));
        }
        // find split between real and imaginary parts: last +/- not at position 0
        let split = t.char_indices().filter(|(k, c)| *k > 0 && (*c == '+' || *c == '-')).map(|(k, _)| k).next_back();
        match split {
            Some(k) => {
                let re: Rational = t[..k].parse()?;
                let im = parse_im(&t[k..])?;
                Ok(GaussScalar::new(re, im))
            }
            None => Ok(GaussScalar::new(Rational::zero(), parse_im(&t)?)),
        }
    }
}

impl Serialize for GaussScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pair().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        GaussScalar::from_pair(&re, &im).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `n choose k` as a rational; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Rational::from_big(BigRational::from_integer(acc))
}

/// `n! / (n-k)!`
pub fn falling_factorial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    Rational::from_big(BigRational::from_integer(acc))
}

pub fn factorial(n: u32) -> Rational {
    falling_factorial(n, n)
}

/// Greatest common divisor of two big integers (used for fraction-free row scaling).
pub fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> GaussScalar {
        GaussScalar::from_ratio(n, d)
    }

    #[test]
    fn conjugate_sum() {
        let a: GaussScalar = "1+i".parse().unwrap();
        let b: GaussScalar = "1-i".parse().unwrap();
        assert_eq!(&a + &b, GaussScalar::from_int(2));
    }

    #[test]
    fn i_squared() {
        assert_eq!(&GaussScalar::i() * &GaussScalar::i(), GaussScalar::from_int(-1));
    }

    #[test]
    fn division_by_two_i() {
        let two_i = &GaussScalar::from_int(2) * &GaussScalar::i();
        let minus_half_i = &q(-1, 2) * &GaussScalar::i();
        assert_eq!(&two_i * &minus_half_i, GaussScalar::one());
        assert_eq!(GaussScalar::one().arith(&two_i, ArithOp::Div).unwrap(), minus_half_i);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = GaussScalar::one().arith(&GaussScalar::zero(), ArithOp::Div);
        assert!(matches!(r, Err(Error::DivisionByZero)));
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Rational::from_int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.numer(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = &sq * &big.recip().unwrap();
        assert_eq!(back, big);
        assert_eq!(format!("{:?}", back.0), format!("{:?}", Repr::Small(i64::MAX, 1)));
    }

    #[test]
    fn parse_and_display() {
        for s in ["0", "-3/2", "i", "-i", "(1/2-3i)", "(2+(1/3)i)"] {
            let z: GaussScalar = s.parse().unwrap();
            let again: GaussScalar = z.to_string().parse().unwrap();
            assert_eq!(z, again, "{s}");
        }
        assert_eq!("1/2".parse::<GaussScalar>().unwrap(), q(1, 2));
        assert_eq!("-2i".parse::<GaussScalar>().unwrap(), &GaussScalar::from_int(-2) * &GaussScalar::i());
        assert!("x".parse::<GaussScalar>().is_err());
    }

    #[test]
    fn json_pair_encoding() {
        let z = GaussScalar::new(Rational::new(3, 4), Rational::from_int(-2));
        let js = serde_json::to_string(&z).unwrap();
        assert_eq!(js, r#"["3/4","-2"]"#);
        let back: GaussScalar = serde_json::from_str(&js).unwrap();
        assert_eq!(back, z);
    }

    fn arb_scalar() -> impl Strategy<Value = GaussScalar> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| GaussScalar::new(Rational::new(a, b), Rational::new(c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), GaussScalar::one());
            }
            prop_assert_eq!(&a - &a, GaussScalar::zero());
        }

        #[test]
        fn normalize_is_idempotent(a in arb_scalar()) {
            let n = a.normalize();
            prop_assert_eq!(&n, &a);
            prop_assert_eq!(n.normalize(), n);
        }
    }
}
