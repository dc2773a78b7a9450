//! Sparse formal linear combinations with exact coefficients.

use std::collections::btree_map::{self, BTreeMap};

use crate::scalar::GaussScalar;

/// Finite combination `Σ c_k · k` over an ordered key type; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, GaussScalar>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: GaussScalar) -> Self {
        let mut s = Self::new();
        s.add_term(k, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &K) -> GaussScalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, GaussScalar> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn first(&self) -> Option<(&K, &GaussScalar)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, k: K, c: GaussScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, c: &GaussScalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add(&mut self, other: &Lin<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scaled(&self, c: &GaussScalar) -> Lin<K> {
        let mut out = Lin::new();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Lin<K> {
        self.scaled(&GaussScalar::from_int(-1))
    }

    pub fn sub(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_scaled(other, &GaussScalar::from_int(-1));
        out
    }

    /// Rebuild with every key passed through `f`, which may also return a sign/scale.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Option<(J, GaussScalar)>) -> Lin<J> {
        let mut out = Lin::new();
        for (k, v) in &self.terms {
            if let Some((j, c)) = f(k) {
                out.add_term(j, v * &c);
            }
        }
        out
    }

    pub fn retain(&mut self, mut f: impl FnMut(&K) -> bool) {
        self.terms.retain(|k, _| f(k));
    }

    pub fn into_terms(self) -> BTreeMap<K, GaussScalar> {
        self.terms
    }

    /// True if `self = c · other` for some scalar `c` (both nonzero, or both zero).
    pub fn proportional(&self, other: &Lin<K>) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.len() != other.len() {
            return false;
        }
        let (k0, a0) = self.first().unwrap();
        let b0 = other.get(k0);
        if b0.is_zero() {
            return false;
        }
        let c = a0 / &b0;
        *self == other.scaled(&c)
    }

    /// Scale so the first coefficient is 1.
    pub fn normalized(&self) -> Lin<K> {
        match self.first() {
            None => self.clone(),
            Some((_, c)) => self.scaled(&c.inv().expect("nonzero")),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, GaussScalar)> for Lin<K> {
    fn from_iter<T: IntoIterator<Item = (K, GaussScalar)>>(iter: T) -> Self {
        let mut out = Lin::new();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<'a, K: Ord> IntoIterator for &'a Lin<K> {
    type Item = (&'a K, &'a GaussScalar);
    type IntoIter = btree_map::Iter<'a, K, GaussScalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_are_dropped() {
        let mut a: Lin<u32> = Lin::single(1, GaussScalar::one());
        a.add_term(1, GaussScalar::from_int(-1));
        assert!(a.is_zero());
        a.add_term(2, GaussScalar::zero());
        assert!(a.is_zero());
    }

    #[test]
    fn proportionality() {
        let a: Lin<u32> = [(1, GaussScalar::from_int(2)), (3, GaussScalar::i())].into_iter().collect();
        let b = a.scaled(&GaussScalar::from_ratio(-1, 3));
        assert!(a.proportional(&b));
        let mut c = b.clone();
        c.add_term(4, GaussScalar::one());
        assert!(!a.proportional(&c));
        assert_eq!(b.normalized().first().unwrap().1, &GaussScalar::one());
    }
}
