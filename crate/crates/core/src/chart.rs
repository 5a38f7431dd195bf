//! The chart map `ψ: δ ↦ δ*`, which inverts a chosen set `T` of coordinates,
//! and the checks relating the valuations of `δ` and `δ*`.
//!
//! For `T ⊆ {1..n}` the chart ring is `B_T = ℚ[y_1..y_n]` with `y_j = 1/x_j`
//! for `j ∈ T` and `y_j = x_j` otherwise. Both rings sit in the same
//! function field, so `δ*` is `δ` with the images of `x_j`, `j ∈ T`,
//! inverted, and `ψ` is its own inverse.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::hahn::HahnFraction;
use crate::lex::{min_multiplier_exceeding, ogm_equiv, q_lin_independent, LexVector};
use crate::point::{Classification, Point, Value};
use crate::poly::Polynomial;
use crate::scalar::Rat;

/// The set `T` of inverted coordinates (1-based).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ChartSpec {
    pub t: BTreeSet<usize>,
}

impl ChartSpec {
    pub fn new(t: impl IntoIterator<Item = usize>) -> Self {
        ChartSpec {
            t: t.into_iter().collect(),
        }
    }

    /// `G ⊆ T ⊆ G ∪ F`.
    pub fn is_valid_for(&self, c: &Classification) -> bool {
        c.g.is_subset(&self.t) && self.t.iter().all(|j| c.g.contains(j) || c.f.contains(j))
    }
}

/// Every `T` with `G ⊆ T ⊆ G ∪ F`, in binary-counting order over `F`.
pub fn valid_charts(c: &Classification) -> Vec<ChartSpec> {
    let f: Vec<usize> = c.f.iter().copied().collect();
    (0u64..1 << f.len())
        .map(|mask| {
            let mut t = c.g.clone();
            t.extend(f.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &j)| j));
            ChartSpec { t }
        })
        .collect()
}

pub fn transform(point: &Point, chart: &ChartSpec) -> Result<Point> {
    let mut images = point.images().to_vec();
    for &j in &chart.t {
        if j == 0 || j > point.n() {
            return Err(Error::InvalidChart(format!("index {j} outside 1..={}", point.n())));
        }
        images[j - 1] = images[j - 1].invert().map_err(|_| Error::ChartOnSupport(j))?;
    }
    point.with_images(images)
}

pub fn inverse_transform(point_star: &Point, chart: &ChartSpec) -> Result<Point> {
    transform(point_star, chart)
}

/// Rewrites `g(y)` with `y_j = 1/x_j` (`j ∈ T`) as `h(x) / Π_{j∈T} x_j^{d_j}`.
///
/// Returns `h` and the exponents `d_j` (zero outside `T`).
pub fn clear_chart_denominators(g: &Polynomial, chart: &ChartSpec) -> (Polynomial, Vec<u32>) {
    let n = g.nvars();
    let d: Vec<u32> = g
        .max_exponents()
        .into_iter()
        .enumerate()
        .map(|(j, e)| if chart.t.contains(&(j + 1)) { e } else { 0 })
        .collect();
    let mut h = Polynomial::zero(n);
    for (e, c) in g.terms() {
        let exps = e
            .iter()
            .zip(&d)
            .enumerate()
            .map(|(j, (&k, &dj))| if chart.t.contains(&(j + 1)) { dj - k } else { k })
            .collect();
        h = h.add(&Polynomial::monomial(c.clone(), exps));
    }
    (h, d)
}

/// One row of the comparison between `ν_{δ*}(y_j)` and `ν_δ(x_j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiRow {
    pub j: usize,
    pub star_value: Value,
    pub coarse_value: Value,
    pub consistent: bool,
}

/// For each coordinate: `ν_{δ*}(y_j)`, `ν_δ(x_j)`, and whether the quotient map sends the first to the second.
pub fn phi_tilde_report(point: &Point, chart: &ChartSpec) -> Result<Vec<PhiRow>> {
    let star = transform(point, chart)?;
    let delta = point.delta_subgroup();
    let star_values = star.coarse_coordinate_values();
    let coarse = point.coarse_coordinate_values();
    Ok(star_values
        .into_iter()
        .zip(coarse)
        .enumerate()
        .map(|(j, (s, c))| PhiRow {
            j: j + 1,
            consistent: s.project(&delta) == c,
            star_value: s,
            coarse_value: c,
        })
        .collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }

    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClauseResult {
    pub clause: String,
    pub status: Status,
    pub witness: Json,
}

impl ClauseResult {
    pub fn to_json(&self) -> Json {
        json!({"clause": self.clause, "status": self.status.as_str(), "witness": self.witness})
    }
}

/// Outcome of checking the seven valuation properties of a chart transform.
#[derive(Clone, Debug)]
pub struct Prop31Report {
    pub clauses: Vec<ClauseResult>,
}

impl Prop31Report {
    pub fn status(&self, clause: &str) -> Option<Status> {
        self.clauses.iter().find(|c| c.clause == clause).map(|c| c.status)
    }

    pub fn any_failed(&self) -> bool {
        self.clauses.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> Json {
        Json::Array(self.clauses.iter().map(ClauseResult::to_json).collect())
    }
}

fn values_json(values: &[(usize, &Value)]) -> Json {
    Json::Object(values.iter().map(|(j, v)| (format!("{j}"), Json::String(v.to_string()))).collect())
}

/// `f` lies in the valuation ring of `point` iff it is bounded by some
/// `c·x_k^N`, i.e. its value is nonnegative or dominated by a power of a
/// coordinate with negative value.
pub fn bounded_by_coordinate_power(point_values: &[Value], v: &Value) -> bool {
    match v {
        Value::Infinity => true,
        Value::Finite(v) if !v.is_negative() => true,
        Value::Finite(v) => point_values
            .iter()
            .filter_map(Value::finite)
            .any(|w| w.is_negative() && w.level() <= v.level()),
    }
}

/// `x_j`, `1/x_j` off the support, and every monomial of degree ≤ 2 in the
/// `x`'s and in the `y`'s, as elements of the common function field.
fn witness_corpus(point: &Point, star: &Point) -> Vec<(String, HahnFraction)> {
    let n = point.n();
    let mut out = Vec::new();
    for j in 1..=n {
        out.push((format!("x{j}"), point.image(j).clone()));
        if let Ok(inv) = point.image(j).invert() {
            out.push((format!("1/x{j}"), inv));
        }
    }
    for (name, p) in [("x", point), ("y", star)] {
        for a in 1..=n {
            for b in a..=n {
                out.push((format!("{name}{a}*{name}{b}"), p.image(a).mul(p.image(b))));
            }
        }
    }
    out
}

/// Checks clauses (1)–(7) for `δ* = ψ(δ)` on a chart valid for `δ`.
///
/// Clause (4) quantifies over the whole valuation ring; here it is checked on
/// the finite witness corpus from [`witness_corpus`] together with the
/// convexity of the kernel, which holds by construction.
pub fn verify_prop31(point: &Point, chart: &ChartSpec) -> Result<Prop31Report> {
    let class = point.classify();
    if !chart.is_valid_for(&class) {
        return Err(Error::InvalidChart(format!(
            "T = {:?} is not between G = {:?} and G ∪ F",
            chart.t, class.g
        )));
    }
    let star = transform(point, chart)?;
    let delta = point.delta_subgroup();
    let star_vals = star.coarse_coordinate_values();
    let coarse = point.coarse_coordinate_values();
    let units = class.unit_coordinates();
    let tail: Vec<usize> = class.p.iter().copied().collect();
    let sv = |j: usize| &star_vals[j - 1];
    let mut clauses = Vec::new();

    // (1)
    let bad: Vec<usize> = class.f.iter().copied().filter(|&j| !sv(j).is_zero()).collect();
    clauses.push(ClauseResult {
        clause: "1".into(),
        status: Status::of(bad.is_empty()),
        witness: json!({"values": values_json(&class.f.iter().map(|&j| (j, sv(j))).collect::<Vec<_>>()), "violations": bad}),
    });

    // (2)
    let ig: Vec<usize> = class.i.union(&class.g).copied().collect();
    let bad: Vec<usize> = ig.iter().copied().filter(|&j| !(sv(j).is_positive() && !sv(j).is_infinite())).collect();
    clauses.push(ClauseResult {
        clause: "2".into(),
        status: Status::of(bad.is_empty()),
        witness: json!({"values": values_json(&ig.iter().map(|&j| (j, sv(j))).collect::<Vec<_>>()), "violations": bad}),
    });

    // (3)
    clauses.push(clause3(&class, &star_vals));

    // (4)
    let fine_delta = point.coordinate_values();
    let fine_star = star.coordinate_values();
    let mut failures = Vec::new();
    let corpus = witness_corpus(point, &star);
    for (name, f) in &corpus {
        let in_star_ring = bounded_by_coordinate_power(&fine_star, &star.fine_value(f));
        let in_ring = bounded_by_coordinate_power(&fine_delta, &point.fine_value(f));
        let coarse_nonneg = !point.coarse_value(f).is_negative();
        if (in_star_ring && !in_ring) || in_ring != coarse_nonneg {
            failures.push(name.clone());
        }
    }
    let kernel_convex = (1..=point.m()).all(|lvl| {
        let probe = LexVector::unit(point.m(), lvl);
        delta.contains(&probe) == (lvl >= delta.cut_level)
    });
    clauses.push(ClauseResult {
        clause: "4".into(),
        status: Status::of(failures.is_empty() && kernel_convex),
        witness: json!({
            "kernel_cut_level": delta.cut_level,
            "corpus_size": corpus.len(),
            "violations": failures,
            "note": "ring inclusion checked on the witness corpus {x_j, 1/x_j, degree<=2 monomials in x and y}",
        }),
    });

    // (5)
    let bad: Vec<usize> = (1..=point.n()).filter(|&j| sv(j).project(&delta) != coarse[j - 1]).collect();
    clauses.push(ClauseResult {
        clause: "5".into(),
        status: Status::of(bad.is_empty()),
        witness: json!({"kernel_cut_level": delta.cut_level, "violations": bad}),
    });

    // (6)
    let mut bad = Vec::new();
    for &j in &units {
        let in_kernel = sv(j).finite().is_some_and(|v| delta.contains(v));
        if !in_kernel {
            bad.push(json!([j, null]));
            continue;
        }
        for &t in &tail {
            if !infinitely_smaller(sv(j), sv(t)) {
                bad.push(json!([j, t]));
            }
        }
    }
    clauses.push(ClauseResult {
        clause: "6".into(),
        status: Status::of(bad.is_empty()),
        witness: json!({"violations": bad}),
    });

    // (7)
    clauses.push(clause7(&tail, &star_vals, &coarse)?);

    Ok(Prop31Report { clauses })
}

/// `N·small < large` for every natural `N` (including `N = 0`).
pub fn infinitely_smaller(small: &Value, large: &Value) -> bool {
    match (small, large) {
        (Value::Infinity, _) => false,
        (Value::Finite(_), Value::Infinity) => true,
        (Value::Finite(s), Value::Finite(l)) => {
            l.is_positive() && (!s.is_positive() || s.level() > l.level())
        }
    }
}

/// Smallest `N ≥ 1` with `N·base > target`, for possibly infinite values.
pub fn multiplier_exceeding(base: &Value, target: &Value) -> Option<u64> {
    match (base, target) {
        (_, Value::Infinity) => None,
        (Value::Infinity, Value::Finite(_)) => Some(1),
        (Value::Finite(b), Value::Finite(t)) => min_multiplier_exceeding(b, t),
    }
}

/// Among `G`, the coordinate with the largest `|x_q|`: least level of
/// `ν̂(x_q) = −ν*(y_q)`, then most negative value.
fn dominant_infinite_coordinate(class: &Classification, star_vals: &[Value]) -> Option<usize> {
    class.g.iter().copied().max_by(|&a, &b| {
        let (va, vb) = (&star_vals[a - 1], &star_vals[b - 1]);
        let level = |v: &Value| v.finite().map_or(usize::MAX, LexVector::level);
        level(vb).cmp(&level(va)).then_with(|| va.cmp(vb))
    })
}

fn clause3(class: &Classification, star_vals: &[Value]) -> ClauseResult {
    let clause = "3".to_string();
    if class.i.is_empty() {
        let q = dominant_infinite_coordinate(class, star_vals);
        return ClauseResult {
            clause,
            status: Status::Pass,
            witness: json!({"q": q, "N": 1, "note": "I is empty"}),
        };
    }
    let Some(q) = dominant_infinite_coordinate(class, star_vals) else {
        return ClauseResult {
            clause,
            status: Status::Fail,
            witness: json!({"note": "I is nonempty but G is empty"}),
        };
    };
    let mut n_max = 1u64;
    let mut bad = Vec::new();
    for &j in &class.i {
        match multiplier_exceeding(&star_vals[q - 1], &star_vals[j - 1]) {
            Some(n) => n_max = n_max.max(n),
            None => bad.push(j),
        }
    }
    ClauseResult {
        clause,
        status: Status::of(bad.is_empty()),
        witness: json!({"q": q, "N": n_max, "violations": bad}),
    }
}

fn clause7(tail: &[usize], star_vals: &[Value], coarse: &[Value]) -> Result<ClauseResult> {
    let clause = "7".to_string();
    let coarse_tail: Option<Vec<LexVector>> = tail.iter().map(|&t| coarse[t - 1].finite().cloned()).collect();
    let star_tail: Option<Vec<LexVector>> = tail.iter().map(|&t| star_vals[t - 1].finite().cloned()).collect();
    let (Some(coarse_tail), Some(star_tail)) = (coarse_tail, star_tail) else {
        return Ok(ClauseResult {
            clause,
            status: Status::Skipped,
            witness: json!({"tail": tail, "note": "hypothesis fails: a tail coordinate lies in the support"}),
        });
    };
    if !q_lin_independent(&coarse_tail) {
        return Ok(ClauseResult {
            clause,
            status: Status::Skipped,
            witness: json!({
                "tail": tail,
                "coarse_values": coarse_tail.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "note": "hypothesis fails: tail values are not Q-linearly independent",
            }),
        });
    }
    let equiv = ogm_equiv(&star_tail, &coarse_tail)?;
    Ok(ClauseResult {
        clause,
        status: Status::of(equiv),
        witness: json!({
            "tail": tail,
            "star_values": star_tail.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "coarse_values": coarse_tail.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
    })
}

/// Unimodular monomial substitution `x_i ↦ Π_j x'_j^{E_ij}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialMap {
    rows: Vec<Vec<i64>>,
}

fn determinant(rows: &[Vec<i64>]) -> Rat {
    let n = rows.len();
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let pivot_row = a[col].clone();
            for (x, y) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

impl MonomialMap {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotUnimodular("matrix is not square".into()));
        }
        let det = determinant(&rows);
        if det != Rat::one() && det != -Rat::one() {
            return Err(Error::NotUnimodular(format!("determinant {det}")));
        }
        Ok(MonomialMap { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        MonomialMap { rows }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// The integer inverse matrix, via Gauss–Jordan over ℚ.
    pub fn inverse(&self) -> MonomialMap {
        let n = self.n();
        let mut a: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .map(|&x| Rat::from_integer(x.into()))
                    .chain((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }))
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("unimodular");
            a.swap(piv, col);
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        let rows = a
            .into_iter()
            .map(|r| {
                r[n..]
                    .iter()
                    .map(|x| {
                        let v = x.to_integer();
                        i64::try_from(v).expect("unimodular inverse fits in i64")
                    })
                    .collect()
            })
            .collect();
        MonomialMap { rows }
    }

    /// `f ∘ π` as a polynomial in the primed variables; `None` if `E` has a negative entry.
    pub fn pullback(&self, f: &Polynomial) -> Option<Polynomial> {
        let n = self.n();
        let images: Option<Vec<Polynomial>> = self
            .rows
            .iter()
            .map(|row| {
                let exps: Option<Vec<u32>> = row.iter().map(|&e| u32::try_from(e).ok()).collect();
                exps.map(|e| Polynomial::monomial(Rat::one(), e))
            })
            .collect();
        let images = images?;
        debug_assert_eq!(images.len(), n);
        Some(f.substitute(&images))
    }
}

/// The unique point `δ'` with `π*(δ') = δ`: `x'_j ↦ Π_i x_i^{(E⁻¹)_{ji}}`.
pub fn monomial_substitution(point: &Point, map: &MonomialMap) -> Result<Point> {
    if map.n() != point.n() {
        return Err(Error::LengthMismatch {
            expected: point.n(),
            got: map.n(),
        });
    }
    let inv = map.inverse();
    let mut images = Vec::with_capacity(point.n());
    for row in inv.rows() {
        let mut img = HahnFraction::one(point.m());
        for (i, &e) in row.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let x = point.image(i + 1);
            if e < 0 && x.is_zero() {
                return Err(Error::SupportObstruction(i + 1));
            }
            img = img.mul(&x.pow(e)?);
        }
        images.push(img);
    }
    point.with_images(images)
}
