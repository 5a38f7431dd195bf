//! Sparse polynomials in `ℚ[x_1, …, x_n]`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    /// The coordinate `x_j`, 1-based.
    pub fn var(nvars: usize, j: usize) -> Self {
        assert!((1..=nvars).contains(&j), "variable index out of range");
        let mut e = vec![0; nvars];
        e[j - 1] = 1;
        Self::monomial(Rat::one(), e)
    }

    pub fn monomial(c: Rat, exps: Vec<u32>) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of each variable over all terms.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (o, &x) in out.iter_mut().zip(e) {
                *o = (*o).max(x);
            }
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Substitutes `x_i ↦ images[i]` (each a polynomial in `images[i].nvars()` variables).
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, Polynomial::nvars);
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&img.pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Renders with variables named `{prefix}1`, `{prefix}2`, ….
    pub fn display_with(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("{prefix}{}", j + 1)
                    } else {
                        format!("{prefix}{}^{k}", j + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn arithmetic_and_display() {
        let x1 = Polynomial::var(3, 1);
        let x3 = Polynomial::var(3, 3);
        let p = x1.pow(2).mul(&x3).sub(&Polynomial::constant(3, rat(7, 2)));
        assert_eq!(p.to_string(), "x1^2*x3 - 7/2");
        assert_eq!(p.degree(), 3);
        assert!(p.sub(&p).is_zero());
        assert_eq!(x1.add(&x1).to_string(), "2*x1");
        assert_eq!(p.max_exponents(), vec![2, 0, 1]);
    }

    #[test]
    fn substitution() {
        // x1 ↦ y1*y2, x2 ↦ y2
        let y1 = Polynomial::var(2, 1);
        let y2 = Polynomial::var(2, 2);
        let f = Polynomial::var(2, 1).sub(&Polynomial::var(2, 2).pow(2));
        let g = f.substitute(&[y1.mul(&y2), y2.clone()]);
        assert_eq!(g, y1.mul(&y2).sub(&y2.pow(2)));
        assert_eq!(Polynomial::constant(2, rat_int(3)).substitute(&[y1, y2]), Polynomial::constant(2, rat_int(3)));
    }
}
