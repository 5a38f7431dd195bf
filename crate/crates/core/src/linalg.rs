//! Row spaces over ℚ kept in reduced row echelon form.

use num_traits::{One, Zero};

use crate::scalar::Rat;

/// A subspace of ℚ^width, stored as its unique reduced row echelon basis.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    width: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(width: usize) -> Self {
        RowSpace {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The unique representative of `v + span` with zeros in every pivot column.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        debug_assert_eq!(v.len(), self.width);
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &c * r;
                }
            }
        }
        out
    }

    /// Adds `v` to the span. Returns false when `v` was already in it.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = r[p].clone();
        if !lead.is_one() {
            for x in r.iter_mut() {
                *x /= &lead;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        true
    }
}

/// Rank over ℚ of a list of equal-length rational vectors.
pub fn rank(vectors: &[Vec<Rat>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut space = RowSpace::new(first.len());
    vectors.iter().filter(|v| space.insert(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let mut a = RowSpace::new(3);
        a.insert(&v(&[1, 2, 3]));
        a.insert(&v(&[0, 1, 1]));
        let mut b = RowSpace::new(3);
        b.insert(&v(&[1, 3, 4]));
        b.insert(&v(&[2, 4, 6]));
        b.insert(&v(&[1, 1, 2]));
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.pivots(), &[0, 1]);
        assert_eq!(a.reduce(&v(&[2, 5, 7])), v(&[0, 0, 0]));
    }

    #[test]
    fn rank_counts_independent() {
        assert_eq!(rank(&[v(&[1, 0]), v(&[2, 0])]), 1);
        assert_eq!(rank(&[v(&[1, 0]), v(&[0, 1])]), 2);
        assert_eq!(rank(&[]), 0);
    }
}
