//! The ambient value group `(ℚ(√2))^m` with lexicographic order.
//!
//! Besides the group itself this module holds the pieces of ordered-group
//! theory the rest of the crate needs: archimedean levels, convex subgroups
//! and the quotient maps by them, the decision procedure for isomorphism of
//! ordered groups with marked generators, and (scalewise) ℚ-independence.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::RowSpace;
use crate::scalar::{QuadExt, Rat};

/// An element of the ambient lex group. Comparison is as words in a dictionary.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LexVector(Vec<QuadExt>);

impl LexVector {
    pub fn new(coords: Vec<QuadExt>) -> Self {
        LexVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        LexVector(coords.iter().map(|&c| QuadExt::int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LexVector(vec![QuadExt::zero(); rank])
    }

    /// Unit vector at the 1-based `level`.
    pub fn unit(rank: usize, level: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[level - 1] = QuadExt::int(1);
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[QuadExt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Sign of the first nonzero coordinate, i.e. the sign in the ordered group.
    pub fn sign(&self) -> i8 {
        self.0.iter().map(QuadExt::sign).find(|&s| s != 0).unwrap_or(0)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// 1-based index of the first nonzero coordinate; `m + 1` for zero.
    ///
    /// `level(u) < level(v)` exactly when `N|v| < |u|` for every natural `N`.
    pub fn level(&self) -> usize {
        self.0
            .iter()
            .position(|c| !c.is_zero())
            .map_or(self.rank() + 1, |i| i + 1)
    }

    pub fn lex_cmp(&self, other: &LexVector) -> Result<Ordering> {
        if self.rank() != other.rank() {
            return Err(Error::LengthMismatch {
                expected: self.rank(),
                got: other.rank(),
            });
        }
        Ok(self.cmp(other))
    }

    pub fn scale(&self, r: &Rat) -> LexVector {
        LexVector(self.0.iter().map(|c| c.scale(r)).collect())
    }

    pub fn scale_int(&self, n: i64) -> LexVector {
        self.scale(&crate::scalar::rat_int(n))
    }

    pub fn abs(&self) -> LexVector {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// All coordinates lie in ℤ (no √2 part).
    pub fn is_integral_at(&self, axis: usize) -> bool {
        self.0[axis].is_integer()
    }

    pub fn is_rational(&self) -> bool {
        self.0.iter().all(QuadExt::is_rational)
    }
}

impl Ord for LexVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for LexVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a LexVector> for &'a LexVector {
    type Output = LexVector;
    fn add(self, rhs: &'a LexVector) -> LexVector {
        assert_eq!(self.rank(), rhs.rank(), "lex rank mismatch");
        LexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a LexVector> for &'a LexVector {
    type Output = LexVector;
    fn sub(self, rhs: &'a LexVector) -> LexVector {
        assert_eq!(self.rank(), rhs.rank(), "lex rank mismatch");
        LexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for LexVector {
    type Output = LexVector;
    fn add(self, rhs: LexVector) -> LexVector {
        &self + &rhs
    }
}

impl Sub for LexVector {
    type Output = LexVector;
    fn sub(self, rhs: LexVector) -> LexVector {
        &self - &rhs
    }
}

impl Neg for &LexVector {
    type Output = LexVector;
    fn neg(self) -> LexVector {
        LexVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for LexVector {
    type Output = LexVector;
    fn neg(self) -> LexVector {
        -&self
    }
}

impl fmt::Display for LexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The convex subgroup `{v : level(v) ≥ cut_level}` of a rank-`m` lex group.
///
/// `cut_level = 1` is the whole group and `cut_level = m + 1` is `{0}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ConvexSubgroup {
    pub cut_level: usize,
    pub rank: usize,
}

impl ConvexSubgroup {
    pub fn trivial(rank: usize) -> Self {
        ConvexSubgroup {
            cut_level: rank + 1,
            rank,
        }
    }

    pub fn whole(rank: usize) -> Self {
        ConvexSubgroup { cut_level: 1, rank }
    }

    pub fn is_trivial(&self) -> bool {
        self.cut_level > self.rank
    }

    pub fn contains(&self, v: &LexVector) -> bool {
        v.level() >= self.cut_level
    }
}

/// Smallest convex subgroup containing every element of `set`.
pub fn convex_hull<'a>(rank: usize, set: impl IntoIterator<Item = &'a LexVector>) -> ConvexSubgroup {
    let cut_level = set
        .into_iter()
        .map(LexVector::level)
        .min()
        .unwrap_or(rank + 1)
        .min(rank + 1);
    ConvexSubgroup { cut_level, rank }
}

/// Image of `u` in the quotient by `delta`, realized by zeroing the tail.
pub fn project_mod(u: &LexVector, delta: &ConvexSubgroup) -> LexVector {
    LexVector(
        u.0.iter()
            .enumerate()
            .map(|(i, c)| {
                if i + 1 >= delta.cut_level {
                    QuadExt::zero()
                } else {
                    c.clone()
                }
            })
            .collect(),
    )
}

/// Canonical invariant of the sign function `m ↦ sign(Σ m_j a_j)` on `ℤ^ℓ`.
///
/// Each kept row is a linear form on `ℚ^ℓ` with coefficients in ℚ(√2),
/// reduced modulo the rational forms already known to vanish and scaled so
/// that its leading entry is `±1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelCanonicalForm {
    pub rows: Vec<Vec<QuadExt>>,
}

fn check_tuple(a: &[LexVector]) -> Result<usize> {
    let rank = a.first().map_or(0, LexVector::rank);
    if let Some(bad) = a.iter().find(|v| v.rank() != rank) {
        return Err(Error::RankMismatch(rank, bad.rank()));
    }
    Ok(rank)
}

impl RelCanonicalForm {
    pub fn of(a: &[LexVector]) -> Result<Self> {
        let rank = check_tuple(a)?;
        let ell = a.len();
        let mut vanishing = RowSpace::new(ell);
        let mut rows = Vec::new();
        for i in 0..rank {
            let ra: Vec<Rat> = a.iter().map(|v| v.0[i].a.clone()).collect();
            let rb: Vec<Rat> = a.iter().map(|v| v.0[i].b.clone()).collect();
            let ra = vanishing.reduce(&ra);
            let rb = vanishing.reduce(&rb);
            let row: Vec<QuadExt> = ra
                .iter()
                .zip(&rb)
                .map(|(x, y)| QuadExt::new(x.clone(), y.clone()))
                .collect();
            let Some(lead) = row.iter().find(|c| !c.is_zero()) else {
                continue;
            };
            let scale = lead.abs().inv().expect("nonzero lead");
            rows.push(row.iter().map(|c| c * &scale).collect());
            // for rational m: (ra + √2 rb)(m) = 0 iff ra(m) = 0 and rb(m) = 0
            vanishing.insert(&ra);
            vanishing.insert(&rb);
        }
        Ok(RelCanonicalForm { rows })
    }
}

/// Isomorphism of `(⟨a⟩, a_1..a_ℓ)` and `(⟨b⟩, b_1..b_ℓ)` as ordered groups with marked generators.
pub fn ogm_equiv(a: &[LexVector], b: &[LexVector]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(RelCanonicalForm::of(a)? == RelCanonicalForm::of(b)?)
}

/// Each vector as rational coordinates `(c_1.a, c_1.b, c_2.a, …)`.
fn rational_rows(a: &[LexVector]) -> Vec<Vec<Rat>> {
    a.iter()
        .map(|v| v.0.iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect())
        .collect()
}

pub fn q_lin_independent(a: &[LexVector]) -> bool {
    if a.is_empty() {
        return true;
    }
    crate::linalg::rank(&rational_rows(a)) == a.len()
}

/// Levels realized by nonzero elements of the group generated by `a`, ascending.
pub fn realized_levels(a: &[LexVector]) -> Vec<usize> {
    let rows = rational_rows(a);
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let mut space = RowSpace::new(first.len());
    for r in &rows {
        space.insert(r);
    }
    let mut levels: Vec<usize> = space.pivots().iter().map(|p| p / 2 + 1).collect();
    levels.dedup();
    levels
}

/// ℚ-independence of the images of `a` in every quotient `Δ_q / Δ_{q+1}` of
/// consecutive isolated subgroups of the group they generate.
pub fn scalewise_independent(a: &[LexVector]) -> bool {
    let levels = realized_levels(a);
    for (k, &lo) in levels.iter().enumerate() {
        let hi = levels.get(k + 1).copied().unwrap_or(usize::MAX);
        let slices: Vec<LexVector> = a
            .iter()
            .filter(|v| v.level() == lo)
            .map(|v| LexVector(v.0[lo - 1..hi.min(v.rank() + 1) - 1].to_vec()))
            .collect();
        if !q_lin_independent(&slices) {
            return false;
        }
    }
    // zero entries are never part of an independent family
    a.iter().all(|v| !v.is_zero())
}

/// Smallest positive integer `N` with `N·base > target`, if one exists.
pub fn min_multiplier_exceeding(base: &LexVector, target: &LexVector) -> Option<u64> {
    if target.is_negative() || target.is_zero() {
        // if base ≤ target ≤ 0 then N·base ≤ base ≤ target for all N ≥ 1
        return (base > target).then_some(1);
    }
    if !base.is_positive() || base.level() > target.level() {
        return None;
    }
    if base.level() < target.level() {
        return Some(1);
    }
    let i = base.level() - 1;
    let ratio = &target.0[i] / &base.0[i];
    let mut n = ratio.floor().max(num_bigint::BigInt::zero());
    loop {
        let candidate = base.scale(&Rat::from_integer(n.clone()));
        if n.is_positive() && candidate > *target {
            return u64::try_from(n).ok();
        }
        n += 1;
    }
}
