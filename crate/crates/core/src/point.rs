//! Points of the real spectrum given as semi-curvettes.
//!
//! A point `δ` of `Sper ℚ[x_1..x_n]` is stored by the images of the
//! coordinates in the field of fractions of `ℚ[t^Γ]`, plus the sign data
//! that orders that field. Residue-field transcendentals are flattened into
//! extra `t`-monomials on their own lex levels, so one representation covers
//! finite points and points at infinity alike.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::hahn::{HahnFraction, HahnPoly, SignData};
use crate::lex::{convex_hull, project_mod, ConvexSubgroup, LexVector};
use crate::poly::Polynomial;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ExponentField {
    Q,
    QSqrt2,
}

impl ExponentField {
    pub fn name(&self) -> &'static str {
        match self {
            ExponentField::Q => "Q",
            ExponentField::QSqrt2 => "Qsqrt2",
        }
    }
}

/// A valuation value: an element of the lex group, or `∞` for zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Value {
    Finite(LexVector),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&LexVector> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        self.finite().is_some_and(LexVector::is_zero)
    }

    /// Strictly greater than zero; `∞` counts as positive.
    pub fn is_positive(&self) -> bool {
        self.finite().is_none_or(LexVector::is_positive)
    }

    pub fn is_negative(&self) -> bool {
        self.finite().is_some_and(LexVector::is_negative)
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }

    pub fn project(&self, delta: &ConvexSubgroup) -> Value {
        match self {
            Value::Finite(v) => Value::Finite(project_mod(v, delta)),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
            (Value::Finite(_), Value::Infinity) => Ordering::Less,
            (Value::Infinity, Value::Finite(_)) => Ordering::Greater,
            (Value::Infinity, Value::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

fn frac_value(f: &HahnFraction) -> Value {
    match f.valuation() {
        Ok(v) => Value::Finite(v),
        Err(_) => Value::Infinity,
    }
}

/// A semi-curvette `ℚ[x_1..x_n] → Frac ℚ[t^Γ]` together with its sign data.
#[derive(Clone, Debug)]
pub struct Point {
    n: usize,
    m: usize,
    field: ExponentField,
    images: Vec<HahnFraction>,
    signs: SignData,
}

impl Point {
    pub fn new(field: ExponentField, images: Vec<HahnFraction>, signs: SignData) -> Result<Self> {
        let m = signs.rank();
        for img in &images {
            if img.rank() != m {
                return Err(Error::RankMismatch(m, img.rank()));
            }
            for e in img.num().exponents().chain(img.den().exponents()) {
                if field == ExponentField::Q && !e.is_rational() {
                    return Err(Error::Invalid(format!(
                        "exponent {e} is not rational but the exponent field is Q"
                    )));
                }
                signs.monomial_sign(e)?;
            }
        }
        Ok(Point {
            n: images.len(),
            m,
            field,
            images,
            signs,
        })
    }

    /// All axes positive, exponent field inferred from the images.
    pub fn with_positive_signs(rank: usize, images: Vec<HahnFraction>) -> Result<Self> {
        let rational = images
            .iter()
            .flat_map(|i| i.num().exponents().chain(i.den().exponents()))
            .all(LexVector::is_rational);
        let field = if rational { ExponentField::Q } else { ExponentField::QSqrt2 };
        Point::new(field, images, SignData::positive(rank))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> ExponentField {
        self.field
    }

    pub fn images(&self) -> &[HahnFraction] {
        &self.images
    }

    /// Image of `x_j`, 1-based.
    pub fn image(&self, j: usize) -> &HahnFraction {
        &self.images[j - 1]
    }

    pub fn signs(&self) -> &SignData {
        &self.signs
    }

    /// 1-based indices of coordinates mapped to zero.
    pub fn support_coordinates(&self) -> BTreeSet<usize> {
        (1..=self.n).filter(|&j| self.image(j).is_zero()).collect()
    }

    /// Same point data with the coordinate images replaced.
    pub fn with_images(&self, images: Vec<HahnFraction>) -> Result<Point> {
        Point::new(self.field, images, self.signs.clone())
    }

    /// The image of `f` under the semi-curvette, over a common denominator.
    pub fn eval_poly(&self, f: &Polynomial) -> Result<HahnFraction> {
        if f.nvars() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: f.nvars(),
            });
        }
        let maxe = f.max_exponents();
        let num_pows: Vec<Vec<HahnPoly>> = self
            .images
            .iter()
            .zip(&maxe)
            .map(|(img, &e)| powers(img.num(), e))
            .collect();
        let den_pows: Vec<Vec<HahnPoly>> = self
            .images
            .iter()
            .zip(&maxe)
            .map(|(img, &e)| powers(img.den(), e))
            .collect();
        let mut num = HahnPoly::zero(self.m);
        for (e, c) in f.terms() {
            let mut term = HahnPoly::constant(self.m, c.clone());
            for j in 0..self.n {
                let k = e[j] as usize;
                let top = maxe[j] as usize;
                if k > 0 {
                    term = term.mul(&num_pows[j][k]);
                }
                if top > k && !self.images[j].is_series() {
                    term = term.mul(&den_pows[j][top - k]);
                }
            }
            num = num.add(&term);
        }
        let mut den = HahnPoly::one(self.m);
        for j in 0..self.n {
            if maxe[j] > 0 && !self.images[j].is_series() {
                den = den.mul(&den_pows[j][maxe[j] as usize]);
            }
        }
        HahnFraction::new(num, den)
    }

    pub fn in_support(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.eval_poly(f)?.is_zero())
    }

    /// Sign of `f` in the ordering `≤_δ`; zero exactly on the support.
    pub fn poly_sign(&self, f: &Polynomial) -> Result<i8> {
        self.eval_poly(f)?.sign(&self.signs)
    }

    pub fn sign_of(&self, f: &HahnFraction) -> Result<i8> {
        f.sign(&self.signs)
    }

    /// The full t-adic value `ν̂(f)`.
    pub fn fine_valuation(&self, f: &Polynomial) -> Result<Value> {
        Ok(frac_value(&self.eval_poly(f)?))
    }

    /// `ν̂(x_j)` for every coordinate.
    pub fn coordinate_values(&self) -> Vec<Value> {
        self.images.iter().map(frac_value).collect()
    }

    /// Convex hull of the negative coordinate values.
    ///
    /// An element is bounded by a polynomial in the coordinates exactly when
    /// its value is nonnegative or lies in this subgroup, so quotienting by
    /// it gives the valuation `ν_δ`.
    pub fn delta_subgroup(&self) -> ConvexSubgroup {
        let values = self.coordinate_values();
        let negative: Vec<&LexVector> = values
            .iter()
            .filter_map(Value::finite)
            .filter(|v| v.is_negative())
            .collect();
        convex_hull(self.m, negative)
    }

    pub fn nu_delta(&self, f: &Polynomial) -> Result<Value> {
        Ok(self.fine_valuation(f)?.project(&self.delta_subgroup()))
    }

    /// `ν_δ` of an arbitrary element of the function field.
    pub fn coarse_value(&self, f: &HahnFraction) -> Value {
        frac_value(f).project(&self.delta_subgroup())
    }

    pub fn fine_value(&self, f: &HahnFraction) -> Value {
        frac_value(f)
    }

    /// `ν_δ(x_j)` for every coordinate.
    pub fn coarse_coordinate_values(&self) -> Vec<Value> {
        let delta = self.delta_subgroup();
        self.coordinate_values().iter().map(|v| v.project(&delta)).collect()
    }

    pub fn classify(&self) -> Classification {
        let delta = self.delta_subgroup();
        let mut c = Classification {
            i: BTreeSet::new(),
            f: BTreeSet::new(),
            g: BTreeSet::new(),
            p: BTreeSet::new(),
            delta_kernel: delta,
        };
        for (j, v) in self.coordinate_values().into_iter().enumerate() {
            let j = j + 1;
            match v {
                Value::Finite(v) if v.is_negative() => c.g.insert(j),
                Value::Finite(v) if v.is_zero() => c.f.insert(j),
                Value::Finite(v) if delta.contains(&v) => c.i.insert(j),
                _ => c.p.insert(j),
            };
        }
        c
    }

    pub fn is_finite_point(&self) -> bool {
        self.coordinate_values().iter().all(|v| !v.is_negative())
    }

    /// Same ranks and signs, and every coordinate image equal as a fraction.
    pub fn point_equal(&self, other: &Point) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.signs == other.signs
            && self.images.iter().zip(&other.images).all(|(a, b)| a == b)
    }
}

fn powers(base: &HahnPoly, top: u32) -> Vec<HahnPoly> {
    let mut out = Vec::with_capacity(top as usize + 1);
    out.push(HahnPoly::one(base.rank()));
    if base.is_one() {
        out.resize(top as usize + 1, HahnPoly::one(base.rank()));
        return out;
    }
    for k in 1..=top as usize {
        let next = out[k - 1].mul(base);
        out.push(next);
    }
    out
}

/// The partition of `{1..n}` into `I`, `F`, `G` and the remaining indices `P`
/// with positive `ν_δ`, all 1-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Classification {
    pub i: BTreeSet<usize>,
    pub f: BTreeSet<usize>,
    pub g: BTreeSet<usize>,
    pub p: BTreeSet<usize>,
    pub delta_kernel: ConvexSubgroup,
}

impl Classification {
    /// Coordinates with `ν_δ(x_j) = 0`, i.e. `I ∪ F ∪ G`.
    pub fn unit_coordinates(&self) -> BTreeSet<usize> {
        self.i.iter().chain(&self.f).chain(&self.g).copied().collect()
    }

    /// Number of coordinates with zero `ν_δ`-value.
    pub fn p_count(&self) -> usize {
        self.i.len() + self.f.len() + self.g.len()
    }

    pub fn is_finite(&self) -> bool {
        self.g.is_empty()
    }

    pub fn triple(&self) -> (BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>) {
        (self.i.clone(), self.f.clone(), self.g.clone())
    }
}

/// Constant-coordinate helper used by tests and the CLI.
pub fn constant_point(values: &[crate::scalar::Rat], rank: usize) -> Result<Point> {
    let images = values
        .iter()
        .map(|c| HahnFraction::constant(rank, c.clone()))
        .collect();
    Point::new(ExponentField::Q, images, SignData::positive(rank))
}

/// `|x_j|` as a polynomial with the sign fixed at `δ`.
pub fn abs_coordinate(point: &Point, j: usize) -> Result<Polynomial> {
    let x = Polynomial::var(point.n(), j);
    Ok(if point.poly_sign(&x)? < 0 { x.neg() } else { x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example;
    use crate::scalar::{rat, rat_int};

    fn lv(xs: &[i64]) -> Value {
        Value::Finite(LexVector::from_ints(xs))
    }

    fn x(n: usize, j: usize) -> Polynomial {
        Polynomial::var(n, j)
    }

    #[test]
    fn eval_examples() {
        let d = example::delta();
        let f = x(5, 2).sub(&Polynomial::one(5));
        assert_eq!(
            d.eval_poly(&f).unwrap(),
            HahnFraction::monomial(rat_int(1), LexVector::from_ints(&[0, 1, 0, 0]))
        );
        let c = Polynomial::constant(5, rat(-3, 7));
        assert_eq!(d.eval_poly(&c).unwrap(), HahnFraction::constant(4, rat(-3, 7)));
        let prod = x(5, 4).mul(&x(5, 3));
        assert_eq!(d.eval_poly(&prod).unwrap(), *d.image(5));
        assert!(d.eval_poly(&Polynomial::one(3)).is_err());
    }

    #[test]
    fn support_and_sign() {
        let d = example::delta();
        assert!(d.in_support(&Polynomial::zero(5)).unwrap());
        assert!(d.in_support(&x(5, 5).sub(&x(5, 3).mul(&x(5, 4)))).unwrap());
        assert!(!d.in_support(&x(5, 1)).unwrap());

        for n in [0, 1, 1000, 1_000_000] {
            let f = x(5, 3).sub(&Polynomial::constant(5, rat_int(n)));
            assert_eq!(d.poly_sign(&f).unwrap(), 1);
        }
        assert_eq!(d.poly_sign(&x(5, 1).neg()).unwrap(), -1);
        let f = x(5, 1).sub(&Polynomial::constant(5, rat(1, 1000)));
        assert_eq!(d.poly_sign(&f).unwrap(), -1);
    }

    #[test]
    fn valuations_of_the_worked_example() {
        let d = example::delta();
        assert_eq!(d.fine_valuation(&x(5, 1)).unwrap(), lv(&[0, 0, 0, 1]));
        assert_eq!(d.fine_valuation(&x(5, 2)).unwrap(), lv(&[0, 0, 0, 0]));
        assert_eq!(d.fine_valuation(&Polynomial::zero(5)).unwrap(), Value::Infinity);

        assert_eq!(d.delta_subgroup().cut_level, 3);
        for j in 1..=3 {
            assert_eq!(d.nu_delta(&x(5, j)).unwrap(), lv(&[0, 0, 0, 0]));
        }
        assert_eq!(d.nu_delta(&x(5, 4)).unwrap(), lv(&[1, 0, 0, 0]));
        assert_eq!(d.nu_delta(&x(5, 5)).unwrap(), lv(&[1, 0, 0, 0]));
    }

    #[test]
    fn delta_subgroup_cases() {
        let finite = constant_point(&[rat_int(2), rat_int(-1)], 2).unwrap();
        assert!(finite.delta_subgroup().is_trivial());

        let inf = Point::with_positive_signs(1, vec![HahnFraction::monomial(rat_int(1), LexVector::from_ints(&[-1]))]).unwrap();
        assert_eq!(inf.delta_subgroup(), ConvexSubgroup::whole(1));
        assert_eq!(inf.nu_delta(&x(1, 1)).unwrap(), lv(&[0]));
    }

    #[test]
    fn classification() {
        let d = example::delta();
        let c = d.classify();
        assert_eq!(c.i, BTreeSet::from([1]));
        assert_eq!(c.f, BTreeSet::from([2]));
        assert_eq!(c.g, BTreeSet::from([3]));
        assert_eq!(c.p, BTreeSet::from([4, 5]));
        assert_eq!(c.p_count(), 3);
        assert!(!d.is_finite_point());

        let k = constant_point(&[rat_int(2), rat_int(-1), rat(1, 3)], 1).unwrap();
        let c = k.classify();
        assert_eq!(c.f, BTreeSet::from([1, 2, 3]));
        assert!(c.i.is_empty() && c.g.is_empty() && c.p.is_empty());
        assert!(k.is_finite_point());

        let t = Point::with_positive_signs(1, vec![HahnFraction::monomial(rat_int(1), LexVector::from_ints(&[1]))]).unwrap();
        let c = t.classify();
        assert_eq!(c.p, BTreeSet::from([1]));
        assert!(t.is_finite_point());
    }

    #[test]
    fn support_coordinates_go_to_p() {
        let p = Point::with_positive_signs(
            2,
            vec![HahnFraction::zero(2), HahnFraction::monomial(rat_int(1), LexVector::from_ints(&[-1, 0]))],
        )
        .unwrap();
        let c = p.classify();
        assert_eq!(c.p, BTreeSet::from([1]));
        assert_eq!(c.g, BTreeSet::from([2]));
        assert_eq!(p.support_coordinates(), BTreeSet::from([1]));
    }

    #[test]
    fn equality() {
        let d = example::delta();
        assert!(d.point_equal(&d));
        let mut images = d.images().to_vec();
        let f = &images[1];
        let doubled = HahnFraction::new(f.num().scale(&rat_int(2)), f.den().scale(&rat_int(2))).unwrap();
        images[1] = doubled;
        assert!(d.point_equal(&d.with_images(images).unwrap()));
        assert!(!d.point_equal(&example::delta_star()));
    }
}
