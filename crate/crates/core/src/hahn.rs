//! Finite-support generalized power series `Σ a_γ t^γ` over ℚ and their quotients.
//!
//! A finite support is trivially well ordered, so these are honest elements
//! of the Hahn field `ℚ((t^Γ))`. Points store exact quotients of such series;
//! nothing is ever truncated except by [`HahnFraction::expand`], which exists
//! for display.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lex::{min_multiplier_exceeding, LexVector};
use crate::scalar::{sign_of, Rat};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HahnPoly {
    rank: usize,
    terms: BTreeMap<LexVector, Rat>,
}

impl HahnPoly {
    pub fn zero(rank: usize) -> Self {
        HahnPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: Rat) -> Self {
        Self::monomial(c, LexVector::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, Rat::one())
    }

    /// `c · t^exp`
    pub fn monomial(c: Rat, exp: LexVector) -> Self {
        let mut p = Self::zero(exp.rank());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds from `(coefficient, exponent)` pairs, merging repeated exponents.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Rat, LexVector)>) -> Result<Self> {
        let mut p = Self::zero(rank);
        for (c, e) in terms {
            if e.rank() != rank {
                return Err(Error::RankMismatch(rank, e.rank()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: LexVector, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.is_zero() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&LexVector, &Rat)> {
        self.terms.iter()
    }

    /// Lowest term `(exponent, coefficient)`.
    pub fn leading(&self) -> Option<(&LexVector, &Rat)> {
        self.terms.iter().next()
    }

    /// The t-adic valuation: least exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Result<LexVector> {
        self.leading().map(|(e, _)| e.clone()).ok_or(Error::ZeroSeries)
    }

    fn check_rank(&self, other: &HahnPoly) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &HahnPoly) -> Result<HahnPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &HahnPoly) -> Result<HahnPoly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &HahnPoly) -> Result<HahnPoly> {
        self.check_rank(other)?;
        let mut out = HahnPoly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &HahnPoly) -> HahnPoly {
        self.try_add(other).expect("rank mismatch")
    }

    pub fn sub(&self, other: &HahnPoly) -> HahnPoly {
        self.try_sub(other).expect("rank mismatch")
    }

    pub fn mul(&self, other: &HahnPoly) -> HahnPoly {
        self.try_mul(other).expect("rank mismatch")
    }

    pub fn neg(&self) -> HahnPoly {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> HahnPoly {
        if c.is_zero() {
            return HahnPoly::zero(self.rank);
        }
        HahnPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplication by `t^exp`.
    pub fn shift(&self, exp: &LexVector) -> HahnPoly {
        HahnPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, x)| (e + exp, x.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> HahnPoly {
        let mut acc = HahnPoly::one(self.rank);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Keeps only the terms with exponent strictly below `frontier`.
    pub fn truncate_below(&self, frontier: &LexVector) -> HahnPoly {
        HahnPoly {
            rank: self.rank,
            terms: self
                .terms
                .range(..frontier.clone())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn exponents(&self) -> impl Iterator<Item = &LexVector> {
        self.terms.keys()
    }
}

impl fmt::Display for HahnPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e.is_zero() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "t^{e}")?;
            } else {
                write!(f, "{abs}*t^{e}")?;
            }
        }
        Ok(())
    }
}

/// Signs `±1` attached to the axes of the value group: `sign(t^γ) = Π s_i^{γ_i}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignData {
    pub axis_signs: Vec<i8>,
}

impl SignData {
    pub fn positive(rank: usize) -> Self {
        SignData {
            axis_signs: vec![1; rank],
        }
    }

    pub fn new(axis_signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = axis_signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::Invalid(format!("axis sign must be ±1, got {bad}")));
        }
        Ok(SignData { axis_signs })
    }

    pub fn rank(&self) -> usize {
        self.axis_signs.len()
    }

    /// Sign of the monomial `t^exp`; exponents on negative axes must be integers.
    pub fn monomial_sign(&self, exp: &LexVector) -> Result<i8> {
        let mut s = 1i8;
        for (axis, (&sign, c)) in self.axis_signs.iter().zip(exp.coords()).enumerate() {
            if sign > 0 || c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return Err(Error::NonIntegerSignedExponent {
                    axis: axis + 1,
                    coord: c.to_string(),
                });
            }
            if c.a.to_integer().bit(0) {
                s = -s;
            }
        }
        Ok(s)
    }

    /// Checks every exponent of `p` against the integrality constraint.
    pub fn admits(&self, p: &HahnPoly) -> Result<()> {
        for e in p.exponents() {
            self.monomial_sign(e)?;
        }
        Ok(())
    }

    /// Sign of a nonzero series: leading coefficient times the character of its valuation.
    pub fn series_sign(&self, p: &HahnPoly) -> Result<i8> {
        match p.leading() {
            None => Ok(0),
            Some((e, c)) => Ok(sign_of(c) * self.monomial_sign(e)?),
        }
    }
}

/// `num / den` with `den ≠ 0`, kept with `den` having leading term `1·t^0`.
#[derive(Clone, Debug)]
pub struct HahnFraction {
    num: HahnPoly,
    den: HahnPoly,
}

impl HahnFraction {
    pub fn new(num: HahnPoly, den: HahnPoly) -> Result<Self> {
        if num.rank() != den.rank() {
            return Err(Error::RankMismatch(num.rank(), den.rank()));
        }
        if den.is_zero() {
            return Err(Error::ZeroSeries);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: HahnPoly) -> Self {
        let rank = p.rank();
        HahnFraction {
            num: p,
            den: HahnPoly::one(rank),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_poly(HahnPoly::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::from_poly(HahnPoly::one(rank))
    }

    pub fn constant(rank: usize, c: Rat) -> Self {
        Self::from_poly(HahnPoly::constant(rank, c))
    }

    pub fn monomial(c: Rat, exp: LexVector) -> Self {
        Self::from_poly(HahnPoly::monomial(c, exp))
    }

    // Monomials are units, so dividing both sides by the leading monomial of
    // the denominator changes nothing but makes `den = 1` recognizable.
    fn normalized(num: HahnPoly, den: HahnPoly) -> Self {
        let (e, c) = den.leading().expect("nonzero denominator");
        let (e, c) = (-e, c.recip());
        if num.is_zero() {
            return Self::zero(den.rank());
        }
        let num = num.shift(&e).scale(&c);
        let den = den.shift(&e).scale(&c);
        if num == den {
            return Self::one(den.rank());
        }
        HahnFraction { num, den }
    }

    pub fn num(&self) -> &HahnPoly {
        &self.num
    }

    pub fn den(&self) -> &HahnPoly {
        &self.den
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is exactly 1.
    pub fn is_series(&self) -> bool {
        self.den.is_one()
    }

    pub fn try_add(&self, other: &HahnFraction) -> Result<HahnFraction> {
        if self.den == other.den {
            return HahnFraction::new(self.num.try_add(&other.num)?, self.den.clone());
        }
        let num = self.num.try_mul(&other.den)?.try_add(&other.num.try_mul(&self.den)?)?;
        HahnFraction::new(num, self.den.try_mul(&other.den)?)
    }

    pub fn try_mul(&self, other: &HahnFraction) -> Result<HahnFraction> {
        HahnFraction::new(self.num.try_mul(&other.num)?, self.den.try_mul(&other.den)?)
    }

    pub fn add(&self, other: &HahnFraction) -> HahnFraction {
        self.try_add(other).expect("rank mismatch")
    }

    pub fn sub(&self, other: &HahnFraction) -> HahnFraction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &HahnFraction) -> HahnFraction {
        self.try_mul(other).expect("rank mismatch")
    }

    pub fn neg(&self) -> HahnFraction {
        HahnFraction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> HahnFraction {
        if c.is_zero() {
            return Self::zero(self.rank());
        }
        HahnFraction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn invert(&self) -> Result<HahnFraction> {
        if self.num.is_zero() {
            return Err(Error::ZeroSeries);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &HahnFraction) -> Result<HahnFraction> {
        self.try_mul(&other.invert()?)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, k: i64) -> Result<HahnFraction> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let k = u32::try_from(k.unsigned_abs()).map_err(|_| Error::Invalid("exponent too large".into()))?;
        Ok(HahnFraction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn valuation(&self) -> Result<LexVector> {
        Ok(&self.num.valuation()? - &self.den.valuation()?)
    }

    pub fn sign(&self, signs: &SignData) -> Result<i8> {
        Ok(signs.series_sign(&self.num)? * signs.series_sign(&self.den)?)
    }

    /// A finite series agreeing with `self` at every exponent below `frontier`.
    ///
    /// Uses `1/(1 + r) = Σ (−r)^k` on the normalized denominator. Fails with
    /// [`Error::DivergentExpansion`] when infinitely many terms lie below the
    /// frontier, e.g. `1/(1 + t^(0,1))` below `t^(1,0)`.
    pub fn expand(&self, frontier: &LexVector) -> Result<HahnPoly> {
        let base = self.num.valuation()?;
        let rank = self.rank();
        let tail = self.den.sub(&HahnPoly::one(rank));
        if tail.is_zero() {
            return Ok(self.num.truncate_below(frontier));
        }
        let step = tail.valuation()?;
        let target = frontier - &base;
        let iterations = if target.sign() <= 0 {
            0
        } else {
            min_multiplier_exceeding(&step, &target).ok_or(Error::DivergentExpansion)?
        };
        let minus_tail = tail.neg();
        let mut power = HahnPoly::one(rank);
        let mut sum = HahnPoly::zero(rank);
        for _ in 0..iterations {
            sum = sum.add(&power);
            power = power.mul(&minus_tail).truncate_below(&target);
        }
        Ok(self.num.mul(&sum).truncate_below(frontier))
    }
}

impl PartialEq for HahnFraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for HahnFraction {}

impl fmt::Display for HahnFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_series() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
