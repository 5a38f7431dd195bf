#![allow(dead_code)]

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sper_atlas::atlas::{random_point, RandomParams};
use sper_atlas::point::ExponentField;
use sper_atlas::scalar::{rat, rat_int};
use sper_atlas::{HahnPoly, LexVector, Point, QuadExt, Rat, SignData};

/// The seeded sample shared by the suites: `n` cycles through 1..=6, `m`
/// through 1..=4, both exponent fields and several densities.
pub fn sample(count: usize, base_seed: u64) -> Vec<Point> {
    (0..count)
        .map(|k| {
            let params = RandomParams {
                n: 1 + k % 6,
                m: 1 + (k / 6) % 4,
                field: if (k / 24) % 2 == 0 { ExponentField::Q } else { ExponentField::QSqrt2 },
                density: [0.0, 0.3, 0.6, 1.0][(k / 48) % 4],
            };
            random_point(base_seed.wrapping_add(k as u64), params)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank over ℚ by plain Gaussian elimination.
pub fn rank_q(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[rank][col];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coordinates `[lo, hi)` (0-based) of each vector, split into rational and surd parts.
pub fn split_columns(vs: &[LexVector], lo: usize, hi: usize) -> Vec<Vec<Rat>> {
    vs.iter()
        .map(|v| v.coords()[lo..hi].iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect())
        .collect()
}

/// Signs of `Σ m_i a_i` for every `m ∈ {-3..3}^ℓ`.
pub fn sign_table(a: &[LexVector]) -> Vec<i8> {
    let l = a.len();
    let rank = a.first().map_or(0, LexVector::rank);
    let mut out = Vec::new();
    for code in 0..7usize.pow(l as u32) {
        let mut c = code;
        let mut s = LexVector::zero(rank);
        for v in a {
            let k = (c % 7) as i64 - 3;
            c /= 7;
            s = &s + &v.scale_int(k);
        }
        out.push(s.sign());
    }
    out
}

pub fn brute_force_equiv(a: &[LexVector], b: &[LexVector]) -> bool {
    a.len() == b.len() && sign_table(a) == sign_table(b)
}

/// Scalewise independence from the definition: level `l` is a scale of the
/// generated group when some combination has its first nonzero coordinate
/// there, i.e. the ℚ-rank of the columns up to `l` exceeds the rank of the
/// columns before it. Each element belongs to the scale containing its
/// level, and the elements of one scale must be independent on that
/// scale's columns (everything at later scales is quotiented out).
pub fn scalewise_oracle(a: &[LexVector]) -> bool {
    if a.iter().any(LexVector::is_zero) {
        return false;
    }
    let Some(first) = a.first() else {
        return true;
    };
    let m = first.rank();
    let prefix_rank = |to: usize| rank_q(&split_columns(a, 0, to));
    let scales: Vec<usize> = (0..m).filter(|&l| prefix_rank(l + 1) > prefix_rank(l)).collect();
    for (k, &lo) in scales.iter().enumerate() {
        let hi = scales.get(k + 1).copied().unwrap_or(m);
        let members: Vec<LexVector> = a
            .iter()
            .filter(|v| {
                let lvl = v.level() - 1;
                lvl >= lo && lvl < hi
            })
            .cloned()
            .collect();
        if rank_q(&split_columns(&members, lo, hi)) != members.len() {
            return false;
        }
    }
    true
}

pub fn small_scalar(rng: &mut ChaCha8Rng, surds: bool) -> QuadExt {
    let a = rat_int(rng.gen_range(-1..=1));
    if surds && rng.gen_bool(0.2) {
        QuadExt::new(a, rat_int(rng.gen_range(-1..=1)))
    } else {
        QuadExt::rational(a)
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, rank: usize, surds: bool, zero_bias: f64) -> LexVector {
    LexVector::new(
        (0..rank)
            .map(|_| if rng.gen_bool(zero_bias) { QuadExt::int(0) } else { small_scalar(rng, surds) })
            .collect(),
    )
}

pub fn random_tuple(rng: &mut ChaCha8Rng, len: usize, rank: usize, surds: bool) -> Vec<LexVector> {
    (0..len).map(|_| random_vector(rng, rank, surds, 0.4)).collect()
}

/// An injective order-preserving linear map applied to every entry: each
/// output coordinate is a positive multiple of the same input coordinate
/// plus a combination of the earlier ones, followed by zero padding.
pub fn order_preserving_image(rng: &mut ChaCha8Rng, a: &[LexVector], pad: usize) -> Vec<LexVector> {
    let rank = a.first().map_or(0, LexVector::rank);
    let diag: Vec<QuadExt> = (0..rank)
        .map(|_| match rng.gen_range(0..3) {
            0 => QuadExt::int(1),
            1 => QuadExt::rational(rat(1, 2)),
            _ => QuadExt::new(rat_int(1), rat_int(1)),
        })
        .collect();
    let lower: Vec<Vec<Rat>> = (0..rank).map(|k| (0..k).map(|_| rat_int(rng.gen_range(-1..=1))).collect()).collect();
    a.iter()
        .map(|v| {
            let c = v.coords();
            let mut out: Vec<QuadExt> = (0..rank)
                .map(|k| {
                    let mut x = &diag[k] * &c[k];
                    for (j, l) in lower[k].iter().enumerate() {
                        x = &x + &c[j].scale(l);
                    }
                    x
                })
                .collect();
            out.extend((0..pad).map(|_| QuadExt::int(0)));
            LexVector::new(out)
        })
        .collect()
}

/// A random pair: unrelated, an order-preserving image, or a one-entry perturbation.
pub fn random_tuple_pair(rng: &mut ChaCha8Rng) -> (Vec<LexVector>, Vec<LexVector>) {
    let len = rng.gen_range(1..=4);
    let rank = rng.gen_range(1..=3);
    let surds = rng.gen_bool(0.3);
    let a = random_tuple(rng, len, rank, surds);
    let b = match rng.gen_range(0..3) {
        0 => random_tuple(rng, len, rank, surds),
        1 => {
            let pad = rng.gen_range(0..=1);
            order_preserving_image(rng, &a, pad)
        }
        _ => {
            let mut b = a.clone();
            let i = rng.gen_range(0..len);
            let k = rng.gen_range(0..rank);
            let mut c = b[i].coords().to_vec();
            c[k] = &c[k] + &QuadExt::int(if rng.gen_bool(0.5) { 1 } else { -1 });
            b[i] = LexVector::new(c);
            b
        }
    };
    (a, b)
}

/// A short random series and compatible sign data: integer exponents with
/// arbitrary axis signs, or `ℚ(√2)` exponents with all axes positive.
pub fn random_series_pair(rng: &mut ChaCha8Rng) -> (HahnPoly, HahnPoly, SignData) {
    let rank = rng.gen_range(1..=3);
    let surds = rng.gen_bool(0.5);
    let signs = if surds {
        SignData::positive(rank)
    } else {
        SignData::new((0..rank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect()).unwrap()
    };
    let mut series = || {
        let terms = rng.gen_range(1..=3);
        let mut p = HahnPoly::zero(rank);
        while p.is_zero() {
            for _ in 0..terms {
                let mut c = 0;
                while c == 0 {
                    c = rng.gen_range(-4..=4);
                }
                let exp = LexVector::new(
                    (0..rank)
                        .map(|_| {
                            let a = rat_int(rng.gen_range(-2..=2));
                            if surds && rng.gen_bool(0.3) {
                                QuadExt::new(a, rat_int(rng.gen_range(-1..=1)))
                            } else {
                                QuadExt::rational(a)
                            }
                        })
                        .collect(),
                );
                p = p.add(&HahnPoly::monomial(rat(c, rng.gen_range(1..=3)), exp));
            }
        }
        p
    };
    let f = series();
    let g = series();
    (f, g, signs)
}

pub fn abs_series(p: &HahnPoly, signs: &SignData) -> HahnPoly {
    if signs.series_sign(p).unwrap() < 0 {
        p.neg()
    } else {
        p.clone()
    }
}
