//! The five-variable point at infinity used throughout the docs and tests.
//!
//! Its residue field `ℚ(z, w)` with `0 < w < c < z` for all positive
//! constants `c` and `1/w^N < z` is flattened into `ℤ⁴_lex`:
//! `w = t^(0,0,0,1)` and `z = t^(0,0,-1,0)`, while the original value group
//! `ℤ²_lex` occupies the first two axes.

use crate::chart::MonomialMap;
use crate::hahn::{HahnFraction, HahnPoly};
use crate::lex::LexVector;
use crate::point::Point;
use crate::scalar::Rat;
use num_traits::One;

pub const RANK: usize = 4;

fn t(exp: [i64; 4]) -> HahnFraction {
    HahnFraction::monomial(Rat::one(), LexVector::from_ints(&exp))
}

fn one_plus_t(exp: [i64; 4]) -> HahnFraction {
    HahnFraction::from_poly(HahnPoly::one(RANK).add(&HahnPoly::monomial(Rat::one(), LexVector::from_ints(&exp))))
}

/// `x1 = w, x2 = 1 + t^(0,1), x3 = z, x4 = t^(1,0), x5 = z·t^(1,0)`.
pub fn delta() -> Point {
    Point::with_positive_signs(
        RANK,
        vec![
            t([0, 0, 0, 1]),
            one_plus_t([0, 1, 0, 0]),
            t([0, 0, -1, 0]),
            t([1, 0, 0, 0]),
            t([1, 0, -1, 0]),
        ],
    )
    .expect("valid example point")
}

/// The chart image of [`delta`] for `T = {3}`.
///
/// `y5 = x5 = z·t^(1,0)` has exponent `(1,0,-1,0)` under the same
/// flattening that gives `y3 = 1/z = t^(0,0,1,0)`.
pub fn delta_star() -> Point {
    Point::with_positive_signs(
        RANK,
        vec![
            t([0, 0, 0, 1]),
            one_plus_t([0, 1, 0, 0]),
            t([0, 0, 1, 0]),
            t([1, 0, 0, 0]),
            t([1, 0, -1, 0]),
        ],
    )
    .expect("valid example point")
}

/// The exponent printed for `y5` in the original write-up of this example.
/// It disagrees in the third coordinate with the value forced by `y5 = z·t^(1,0)`.
pub fn published_y5_exponent() -> LexVector {
    LexVector::from_ints(&[1, 0, 1, 0])
}

/// The transform of [`delta`] under [`blowup`]: `x5' = z`.
pub fn delta_prime() -> Point {
    Point::with_positive_signs(
        RANK,
        vec![
            t([0, 0, 0, 1]),
            one_plus_t([0, 1, 0, 0]),
            t([0, 0, -1, 0]),
            t([1, 0, 0, 0]),
            t([0, 0, -1, 0]),
        ],
    )
    .expect("valid example point")
}

/// `x5 ↦ x4'·x5'`, other coordinates fixed.
pub fn blowup() -> MonomialMap {
    let mut rows = vec![vec![0i64; 5]; 5];
    for (j, row) in rows.iter_mut().enumerate() {
        row[j] = 1;
    }
    rows[4][3] = 1;
    MonomialMap::new(rows).expect("unimodular")
}
