//! Fricke trace polynomials.
//!
//! For 2×2 matrices the trace of any word `w(A, B)` is an integer polynomial
//! `F_w(x, y, z, u, v)` in `x = tr A`, `y = tr B`, `z = tr AB`, `u = det A`,
//! `v = det B`. The polynomial is computed by folding the word into the
//! basis `{I, A, B, AB}` using Cayley–Hamilton:
//!
//! ```text
//! A² = xA − uI        B² = yB − vI
//! BA = −AB + yA + xB − (xy − z)I
//! ```
//!
//! from which `(AB)·A = zA + uB − yuI` and `(AB)·B = yAB − vA` follow.

use std::collections::HashSet;

use crate::mat2::Tuple5;
use crate::poly::{Poly5, Var};
use crate::words::{Letter, Word};

/// Weights under which `F_w` is homogeneous of degree `#a(w)`.
pub const WEIGHTS_A: [u32; 5] = [1, 0, 1, 2, 0];
/// Weights under which `F_w` is homogeneous of degree `#b(w)`.
pub const WEIGHTS_B: [u32; 5] = [0, 1, 1, 0, 2];

/// `w(A, B) = c0·I + c1·A + c2·B + c3·AB`, valid for every pair of 2×2
/// matrices with the given invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRep {
    pub c0: Poly5,
    pub c1: Poly5,
    pub c2: Poly5,
    pub c3: Poly5,
}

impl LinearRep {
    pub fn identity() -> LinearRep {
        LinearRep {
            c0: Poly5::constant(1),
            c1: Poly5::zero(),
            c2: Poly5::zero(),
            c3: Poly5::zero(),
        }
    }

    /// Right-multiply by `A` or `B` and reduce back to the basis.
    pub fn push(&self, letter: Letter) -> LinearRep {
        let LinearRep { c0, c1, c2, c3 } = self;
        match letter {
            Letter::A => {
                // c0·A + c1·(xA − uI) + c2·(−AB + yA + xB − (xy−z)I) + c3·(zA + uB − yuI)
                let xy_minus_z = &Poly5::var(Var::X).mul_var(Var::Y) - &Poly5::var(Var::Z);
                let n0 = &(&(-&c1.mul_var(Var::U)) - &(c2 * &xy_minus_z))
                    - &c3.mul_var(Var::Y).mul_var(Var::U);
                let n1 = &(&(c0 + &c1.mul_var(Var::X)) + &c2.mul_var(Var::Y))
                    + &c3.mul_var(Var::Z);
                let n2 = &c2.mul_var(Var::X) + &c3.mul_var(Var::U);
                let n3 = -c2;
                LinearRep { c0: n0, c1: n1, c2: n2, c3: n3 }
            }
            Letter::B => {
                // c0·B + c1·AB + c2·(yB − vI) + c3·(yAB − vA)
                LinearRep {
                    c0: -&c2.mul_var(Var::V),
                    c1: -&c3.mul_var(Var::V),
                    c2: c0 + &c2.mul_var(Var::Y),
                    c3: c1 + &c3.mul_var(Var::Y),
                }
            }
        }
    }

    /// `tr(c0 I + c1 A + c2 B + c3 AB) = 2c0 + x c1 + y c2 + z c3`.
    pub fn trace(&self) -> Poly5 {
        let mut t = self.c0.scale(2);
        t = &t + &self.c1.mul_var(Var::X);
        t = &t + &self.c2.mul_var(Var::Y);
        &t + &self.c3.mul_var(Var::Z)
    }
}

pub fn linear_rep(word: &Word) -> LinearRep {
    word.letters()
        .iter()
        .fold(LinearRep::identity(), |rep, &l| rep.push(l))
}

pub fn fricke_polynomial(word: &Word) -> Poly5 {
    linear_rep(word).trace()
}

/// `F_w(x, y, z, 1, 1)`.
pub fn reduced_fricke(word: &Word) -> Poly5 {
    fricke_polynomial(word).reduce_determinants()
}

pub fn is_2_isospectral(w1: &Word, w2: &Word) -> bool {
    if w1.letter_counts() != w2.letter_counts() {
        return false;
    }
    fricke_polynomial(w1) == fricke_polynomial(w2)
}

pub fn eval_trace(word: &Word, t: &Tuple5) -> f64 {
    fricke_polynomial(word).eval(t)
}

/// Largest modulus among the roots of `λ² − τλ + δ`.
pub fn quadratic_root_modulus(tau: f64, delta: f64) -> f64 {
    let disc = tau * tau - 4.0 * delta;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (tau + s).abs().max((tau - s).abs()) / 2.0
    } else {
        delta.sqrt()
    }
}

/// Spectral radius of `w(A, B)` and its `|w|`-th root, given the trace of
/// the product.
pub fn spectrum_from_trace(word: &Word, trace: f64, t: &Tuple5) -> (f64, f64) {
    let (na, nb) = word.letter_counts();
    let delta = t.u.powi(na as i32) * t.v.powi(nb as i32);
    let rho = quadratic_root_modulus(trace, delta);
    (rho, rho.powf(1.0 / word.len() as f64))
}

/// `(ρ, ρ^{1/|w|})` for the product `w(A, B)` of any pair with invariants `t`.
pub fn eval_product_spectrum(word: &Word, t: &Tuple5) -> (f64, f64) {
    spectrum_from_trace(word, eval_trace(word, t), t)
}

/// One representative (the first seen) per 2-isospectrality class.
pub fn dedup_isospectral(words: &[Word]) -> Vec<Word> {
    let mut seen = HashSet::new();
    words
        .iter()
        .filter(|w| seen.insert(fricke_polynomial(w)))
        .cloned()
        .collect()
}

/// Like [`dedup_isospectral`] but keeps the polynomials.
pub fn dedup_with_polynomials(words: &[Word]) -> Vec<(Word, Poly5)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for w in words {
        let p = fricke_polynomial(w);
        if seen.insert(p.clone()) {
            out.push((w.clone(), p));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{mirror, w};

    #[test]
    fn small_polynomials() {
        assert_eq!(fricke_polynomial(&w("a")).to_string(), "x");
        assert_eq!(fricke_polynomial(&w("b")).to_string(), "y");
        assert_eq!(fricke_polynomial(&w("ab")).to_string(), "z");
        assert_eq!(fricke_polynomial(&w("ba")).to_string(), "z");
        assert_eq!(fricke_polynomial(&w("aa")).to_string(), "x^2 - 2*u");
        // tr(A²B) = x·z − u·y
        assert_eq!(fricke_polynomial(&w("aab")).to_string(), "x*z - y*u");
    }

    #[test]
    fn reduced() {
        assert_eq!(reduced_fricke(&w("aa")).to_string(), "x^2 - 2");
        assert_eq!(reduced_fricke(&w("ab")).to_string(), "z");
        assert_eq!(reduced_fricke(&w("ba")).to_string(), "z");
    }

    #[test]
    fn shortest_chiral_pair_has_equal_polynomials() {
        let d = &fricke_polynomial(&w("aababb")) - &fricke_polynomial(&w("bbabaa"));
        assert!(d.is_zero());
    }

    #[test]
    fn isospectrality() {
        assert!(is_2_isospectral(&w("aababb"), &w("bbabaa")));
        assert!(is_2_isospectral(&w("ababbaabbaba"), &w("babaabbaabab")));
        assert!(!is_2_isospectral(&w("aab"), &w("abb")));
        assert!(!is_2_isospectral(&w("aabb"), &w("abab")));
    }

    #[test]
    fn eval_small() {
        let t = Tuple5::new(3.0, 0.0, 0.0, 2.0, 1.0);
        assert_eq!(eval_trace(&w("a"), &t), 3.0);
        assert_eq!(eval_trace(&w("aa"), &t), 5.0);
    }

    #[test]
    fn spectrum_double_root() {
        let t = Tuple5::new(2.0, 0.0, 0.0, 1.0, 1.0);
        let (rho, nr) = eval_product_spectrum(&w("a"), &t);
        assert!((rho - 1.0).abs() < 1e-15);
        assert!((nr - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_determinant_spectrum() {
        assert_eq!(quadratic_root_modulus(-3.0, 0.0), 3.0);
        assert_eq!(quadratic_root_modulus(0.0, 4.0), 2.0);
    }

    #[test]
    fn dedup_small() {
        assert_eq!(dedup_isospectral(&[w("aababb"), w("bbabaa")]).len(), 1);
        assert_eq!(dedup_isospectral(&[w("a"), w("b")]).len(), 2);
    }

    #[test]
    fn mirror_identity_short_words() {
        for n in 1..=8usize {
            for bits in 0u32..(1 << n) {
                let word: Word = (0..n)
                    .map(|i| if bits >> i & 1 == 0 { 'a' } else { 'b' })
                    .collect::<String>()
                    .parse()
                    .unwrap();
                assert_eq!(fricke_polynomial(&word), fricke_polynomial(&mirror(&word)));
            }
        }
    }

    #[test]
    fn weighted_homogeneity() {
        for s in ["a", "ab", "aababb", "abbab", "aaabaab", "babba"] {
            let word = w(s);
            let (na, nb) = word.letter_counts();
            let p = fricke_polynomial(&word);
            assert_eq!(p.homogeneous_weight(WEIGHTS_A), Some(na as u32), "{s}");
            assert_eq!(p.homogeneous_weight(WEIGHTS_B), Some(nb as u32), "{s}");
        }
    }
}
