//! Sparse integer polynomials in the five trace variables `x, y, z, u, v`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::mat2::Tuple5;

pub const VAR_NAMES: [&str; 5] = ["x", "y", "z", "u", "v"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    U = 3,
    V = 4,
}

/// Exponent vector `(e_x, e_y, e_z, e_u, e_v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [u8; 5]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 5]);

    pub fn var(v: Var) -> Monomial {
        let mut e = [0; 5];
        e[v as usize] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn weighted_degree(&self, weights: [u32; 5]) -> u32 {
        self.0.iter().zip(weights).map(|(&e, w)| e as u32 * w).sum()
    }

    fn mul(self, other: Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a = a.checked_add(b).expect("exponent overflow");
        }
        Monomial(e)
    }

    /// Graded lexicographic order: higher total degree first, then
    /// lexicographic on `(x, y, z, u, v)` with larger exponents first.
    pub fn grlex_desc(&self, other: &Monomial) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// Polynomial with `i128` coefficients. Zero coefficients are never stored,
/// so structural equality is polynomial identity and the derived `Hash`
/// is a valid dedup key.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly5 {
    terms: BTreeMap<Monomial, i128>,
}

impl Poly5 {
    pub fn zero() -> Poly5 {
        Poly5::default()
    }

    pub fn constant(c: i128) -> Poly5 {
        Poly5::monomial(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Poly5 {
        Poly5::monomial(1, Monomial::var(v))
    }

    pub fn monomial(c: i128, m: Monomial) -> Poly5 {
        let mut p = Poly5::zero();
        p.add_term(m, c);
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &i128)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> i128 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn max_abs_coefficient(&self) -> u128 {
        self.terms.values().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: i128) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m).or_insert(0);
        *entry = entry.checked_add(c).expect("coefficient overflow");
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: i128) -> Poly5 {
        if c == 0 {
            return Poly5::zero();
        }
        Poly5 {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.checked_mul(c).expect("coefficient overflow")))
                .collect(),
        }
    }

    /// Multiply by a monomial `c * m`.
    pub fn mul_monomial(&self, c: i128, m: Monomial) -> Poly5 {
        if c == 0 {
            return Poly5::zero();
        }
        Poly5 {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.checked_mul(c).expect("coefficient overflow")))
                .collect(),
        }
    }

    pub fn mul_var(&self, v: Var) -> Poly5 {
        self.mul_monomial(1, Monomial::var(v))
    }

    pub fn eval(&self, t: &Tuple5) -> f64 {
        let vals = t.as_array();
        self.terms
            .iter()
            .map(|(m, &c)| {
                let mut acc = c as f64;
                for (e, x) in m.0.iter().zip(vals) {
                    if *e > 0 {
                        acc *= x.powi(*e as i32);
                    }
                }
                acc
            })
            .sum()
    }

    /// Substitute `u = v = 1`.
    pub fn reduce_determinants(&self) -> Poly5 {
        let mut out = Poly5::zero();
        for (m, &c) in &self.terms {
            let mut e = m.0;
            e[Var::U as usize] = 0;
            e[Var::V as usize] = 0;
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// The single weighted degree of all terms, or `None` when the terms
    /// disagree (or the polynomial is zero).
    pub fn homogeneous_weight(&self, weights: [u32; 5]) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Terms in graded-lex order, highest first.
    pub fn sorted_terms(&self) -> Vec<(Monomial, i128)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, *c)).collect();
        v.sort_by(|a, b| a.0.grlex_desc(&b.0));
        v
    }

    /// Flattened form for fast repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        let terms = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| (c as f64, m.0))
            .collect();
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.0)
            .max()
            .unwrap_or(0) as usize;
        CompiledPoly { terms, max_exp }
    }
}

impl Add for &Poly5 {
    type Output = Poly5;
    fn add(self, rhs: &Poly5) -> Poly5 {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub for &Poly5 {
    type Output = Poly5;
    fn sub(self, rhs: &Poly5) -> Poly5 {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(*m, c.checked_neg().expect("coefficient overflow"));
        }
        out
    }
}

impl Neg for &Poly5 {
    type Output = Poly5;
    fn neg(self) -> Poly5 {
        self.scale(-1)
    }
}

impl Mul for &Poly5 {
    type Output = Poly5;
    fn mul(self, rhs: &Poly5) -> Poly5 {
        let mut out = Poly5::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca.checked_mul(cb).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl fmt::Display for Poly5 {
    /// Canonical text form, e.g. `x^2 - 2*u`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (i, c < 0) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            let abs = c.unsigned_abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(VAR_NAMES)
                .filter(|(e, _)| **e > 0)
                .map(|(&e, name)| {
                    if e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A polynomial flattened into `(coefficient, exponents)` pairs for
/// evaluation in the search hot loop.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, [u8; 5])>,
    max_exp: usize,
}

impl CompiledPoly {
    pub fn max_exponent(&self) -> usize {
        self.max_exp
    }

    /// Evaluate against precomputed power tables, `powers[var][k] = var^k`.
    pub fn eval_with_powers(&self, powers: &PowerTable) -> f64 {
        let p = &powers.0;
        self.terms
            .iter()
            .map(|(c, e)| {
                c * p[0][e[0] as usize]
                    * p[1][e[1] as usize]
                    * p[2][e[2] as usize]
                    * p[3][e[3] as usize]
                    * p[4][e[4] as usize]
            })
            .sum()
    }
}

/// Powers `0..=max` of each of the five variables.
#[derive(Clone, Debug)]
pub struct PowerTable([Vec<f64>; 5]);

impl PowerTable {
    pub fn new(t: &Tuple5, max: usize) -> PowerTable {
        let table = |base: f64| {
            let mut v = Vec::with_capacity(max + 1);
            let mut acc = 1.0;
            for _ in 0..=max {
                v.push(acc);
                acc *= base;
            }
            v
        };
        let [x, y, z, u, v] = t.as_array();
        PowerTable([table(x), table(y), table(z), table(u), table(v)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly5 {
        Poly5::var(Var::X)
    }
    fn u() -> Poly5 {
        Poly5::var(Var::U)
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = &x() - &x();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn display_graded_lex() {
        let p = &(&x() * &x()) - &u().scale(2);
        assert_eq!(p.to_string(), "x^2 - 2*u");
        let q = &(&u().scale(-3) + &Poly5::constant(4)) + &x().mul_var(Var::Y);
        assert_eq!(q.to_string(), "x*y - 3*u + 4");
        assert_eq!((-&x()).to_string(), "-x");
    }

    #[test]
    fn multiplication_distributes() {
        let a = &x() + &Poly5::constant(1);
        let b = &x() - &Poly5::constant(1);
        assert_eq!((&a * &b).to_string(), "x^2 - 1");
    }

    #[test]
    fn compiled_matches_direct() {
        let p = &(&(&x() * &x()) - &u().scale(2)) + &Poly5::var(Var::Z).mul_var(Var::V);
        let t = Tuple5::new(1.5, -0.5, 2.0, 3.0, -1.25);
        let c = p.compile();
        let powers = PowerTable::new(&t, c.max_exponent());
        assert!((c.eval_with_powers(&powers) - p.eval(&t)).abs() < 1e-12);
    }
}
