//! Exact sparse Gaussian elimination over ℚ(i).
//!
//! Rows are sparse maps `column → coefficient`. Pivots are always the smallest
//! remaining column of a row, so results are deterministic for a fixed
//! column order.

use std::collections::BTreeMap;

use crate::scalar::GaussScalar;

pub type Row = BTreeMap<usize, GaussScalar>;

fn axpy(dst: &mut Row, src: &Row, c: &GaussScalar) {
    for (k, v) in src {
        let prod = v * c;
        match dst.get_mut(k) {
            Some(e) => {
                *e = &*e + &prod;
                if e.is_zero() {
                    dst.remove(k);
                }
            }
            None => {
                if !prod.is_zero() {
                    dst.insert(*k, prod);
                }
            }
        }
    }
}

/// Row echelon form built incrementally. Each stored row has leading
/// coefficient 1 at its pivot column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Row>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    /// Eliminate every pivot column from `v`.
    pub fn reduce(&self, mut v: Row) -> Row {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            match next {
                None => return v,
                Some((k, c)) => {
                    axpy(&mut v, &self.rows[&k], &-c);
                    cursor = k + 1;
                }
            }
        }
    }

    /// Insert a row; returns true if it increased the rank.
    pub fn insert(&mut self, v: Row) -> bool {
        let r = self.reduce(v);
        match r.iter().next() {
            None => false,
            Some((&p, c)) => {
                let inv = c.inv().expect("nonzero pivot");
                let mut row = Row::new();
                for (k, x) in &r {
                    row.insert(*k, x * &inv);
                }
                self.rows.insert(p, row);
                true
            }
        }
    }

    pub fn contains(&self, v: &Row) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Fully reduced rows (pivot columns appear only in their own row).
    pub fn reduced_rows(&self) -> BTreeMap<usize, Row> {
        let mut out: BTreeMap<usize, Row> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut r = row.clone();
            let others: Vec<(usize, GaussScalar)> = r.iter().filter(|(k, _)| **k != p && out.contains_key(k)).map(|(k, c)| (*k, c.clone())).collect();
            for (k, c) in others {
                let c = r.get(&k).cloned().unwrap_or(c);
                if !c.is_zero() {
                    axpy(&mut r, &out[&k], &-c);
                }
            }
            out.insert(p, r);
        }
        out
    }

    /// Basis of `{x : row·x = 0 for all rows}` in `ncols` unknowns; each
    /// vector has a 1 at its free column.
    pub fn nullspace(&self, ncols: usize) -> Vec<Row> {
        let rr = self.reduced_rows();
        let mut out = Vec::new();
        for f in 0..ncols {
            if rr.contains_key(&f) {
                continue;
            }
            let mut v = Row::new();
            v.insert(f, GaussScalar::one());
            for (&p, row) in &rr {
                if let Some(c) = row.get(&f) {
                    v.insert(p, -c);
                }
            }
            out.push(v);
        }
        out
    }
}

/// Rank of a set of sparse rows.
pub fn rank(rows: impl IntoIterator<Item = Row>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Nullspace of the matrix whose rows are given, in `ncols` unknowns.
pub fn nullspace(rows: impl IntoIterator<Item = Row>, ncols: usize) -> Vec<Row> {
    let mut e = Echelon::new();
    for r in rows {
        if e.rank() == ncols {
            break;
        }
        e.insert(r);
    }
    e.nullspace(ncols)
}

/// Apply a column-indexed linear map given by `images[col]` to a vector.
pub fn apply(images: &[Row], x: &Row) -> Row {
    let mut out = Row::new();
    for (c, v) in x {
        axpy(&mut out, &images[*c], v);
    }
    out
}

/// Express the column vectors `vs` in terms of a basis; returns the coordinate
/// rows or `None` if some vector is outside the span.
pub fn solve_in_span(basis: &[Row], vs: &[Row]) -> Option<Vec<Row>> {
    // augmented columns: unknown j ↔ basis[j]; rows are coordinates of the ambient space
    let mut out = Vec::new();
    for v in vs {
        let mut e = Echelon::new();
        let nb = basis.len();
        let mut by_coord: BTreeMap<usize, Row> = BTreeMap::new();
        for (j, b) in basis.iter().enumerate() {
            for (k, c) in b {
                by_coord.entry(*k).or_default().insert(j, c.clone());
            }
        }
        for (k, c) in v {
            by_coord.entry(*k).or_default().insert(nb, -c);
        }
        for (_, r) in by_coord {
            e.insert(r);
        }
        // x with x_nb = 1 in the nullspace
        let ns = e.nullspace(nb + 1);
        let sol = ns.into_iter().find(|r| r.get(&nb).map(|c| !c.is_zero()).unwrap_or(false))?;
        let scale = sol[&nb].inv().ok()?;
        let mut coords = Row::new();
        for (j, c) in sol {
            if j < nb {
                let val = &c * &scale;
                if !val.is_zero() {
                    coords.insert(j, val);
                }
            }
        }
        out.push(coords);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(entries: &[(usize, i64)]) -> Row {
        entries.iter().filter(|(_, c)| *c != 0).map(|(k, c)| (*k, GaussScalar::from_int(*c))).collect()
    }

    fn dot(a: &Row, b: &Row) -> GaussScalar {
        a.iter().fold(GaussScalar::zero(), |acc, (k, v)| match b.get(k) {
            Some(w) => &acc + &(v * w),
            None => acc,
        })
    }

    #[test]
    fn small_nullspace() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(1, 1), (2, -1)])];
        let ns = nullspace(rows.clone(), 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn span_solve() {
        let basis = vec![row(&[(0, 1), (1, 1)]), row(&[(1, 1)])];
        let coords = solve_in_span(&basis, &[row(&[(0, 2), (1, 5)])]).unwrap();
        assert_eq!(coords[0], row(&[(0, 2), (1, 3)]));
        assert!(solve_in_span(&basis, &[row(&[(2, 1)])]).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec((0usize..6, 0usize..7, -3i64..4), 0..25)) {
            let mut rows: BTreeMap<usize, Row> = BTreeMap::new();
            for (r, c, v) in entries {
                if v != 0 {
                    rows.entry(r).or_default().insert(c, GaussScalar::from_int(v));
                }
            }
            let rows: Vec<Row> = rows.into_values().collect();
            let ns = nullspace(rows.clone(), 7);
            prop_assert_eq!(ns.len() + rank(rows.clone()), 7);
            for v in &ns {
                for r in &rows {
                    prop_assert!(dot(r, v).is_zero());
                }
            }
            prop_assert_eq!(rank(ns.clone()), ns.len());
        }
    }
}
