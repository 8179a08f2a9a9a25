//! Real and complex 2×2 matrices, spectral quantities, joint spectral radius
//! bounds and the trace/determinant parametrization of matrix pairs.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// Largest product length accepted by [`jsr_bounds`].
pub const MAX_BOUNDS_LEN: usize = 20;

pub type Vec2 = [f64; 2];
pub type CVec2 = [Complex64; 2];

/// `a ≈ b` with relative tolerance `1e-9` and absolute floor `1e-12`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) + 1e-12
}

/// A real 2×2 matrix, serialized as `[[a11, a12], [a21, a22]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Mat2 {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub fn diag(a: f64, b: f64) -> Mat2 {
        Mat2::new(a, 0.0, 0.0, b)
    }

    pub fn rotation(theta: f64) -> Mat2 {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn transpose(&self) -> Mat2 {
        let m = self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, c: f64) -> Mat2 {
        let m = self.0;
        Mat2([[c * m[0][0], c * m[0][1]], [c * m[1][0], c * m[1][1]]])
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        let m = self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Eigenvalues as complex numbers, larger modulus first.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let t = self.trace();
        let d = self.det();
        let disc = t * t - 4.0 * d;
        if disc >= 0.0 {
            let s = disc.sqrt();
            // avoid cancellation in the smaller root
            let big = if t >= 0.0 { (t + s) / 2.0 } else { (t - s) / 2.0 };
            let small = if big != 0.0 { d / big } else { 0.0 };
            [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
        } else {
            let im = (-disc).sqrt() / 2.0;
            [Complex64::new(t / 2.0, im), Complex64::new(t / 2.0, -im)]
        }
    }

    /// Largest singular value, from the closed form on `MᵗM`.
    pub fn spectral_norm(&self) -> f64 {
        let s: f64 = self.0.iter().flatten().map(|x| x * x).sum();
        let d = self.det();
        let disc = (s * s - 4.0 * d * d).max(0.0);
        ((s + disc.sqrt()) / 2.0).sqrt()
    }

    pub fn to_complex(&self) -> CMat2 {
        let m = self.0;
        let c = |x: f64| Complex64::new(x, 0.0);
        CMat2([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

/// A complex 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[Complex64; 2]; 2]);

impl CMat2 {
    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, c: Complex64) -> CMat2 {
        let m = self.0;
        CMat2([[c * m[0][0], c * m[0][1]], [c * m[1][0], c * m[1][1]]])
    }

    pub fn apply(&self, v: CVec2) -> CVec2 {
        let m = self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Eigenvalues, larger modulus first.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let t = self.trace();
        let d = self.det();
        let s = (t * t - 4.0 * d).sqrt();
        let (l1, l2) = ((t + s) / 2.0, (t - s) / 2.0);
        if l1.norm() >= l2.norm() {
            [l1, l2]
        } else {
            [l2, l1]
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues()[0].norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, rhs: CMat2) -> CMat2 {
        let (a, b) = (self.0, rhs.0);
        CMat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, rhs: CMat2) -> CMat2 {
        let (a, b) = (self.0, rhs.0);
        CMat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

/// The invariants `(tr A, tr B, tr AB, det A, det B)` of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tuple5 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub u: f64,
    pub v: f64,
}

impl Tuple5 {
    pub fn new(x: f64, y: f64, z: f64, u: f64, v: f64) -> Tuple5 {
        Tuple5 { x, y, z, u, v }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.x, self.y, self.z, self.u, self.v]
    }

    pub fn magnitude(&self) -> f64 {
        self.as_array().iter().fold(0.0f64, |m, a| m.max(a.abs()))
    }

    /// Componentwise match at relative tolerance `1e-9` of the tuple's
    /// magnitude, with absolute floor `1e-12`.
    pub fn matches(&self, other: &Tuple5) -> bool {
        let scale = self.magnitude().max(other.magnitude());
        self.as_array()
            .iter()
            .zip(other.as_array())
            .all(|(a, b)| (a - b).abs() <= 1e-9 * scale + 1e-12)
    }

    pub fn gram_like(&self) -> GramLikeMatrix {
        let Tuple5 { x, y, z, u, v } = *self;
        GramLikeMatrix([
            [u, x / 2.0, z / 2.0],
            [x / 2.0, 1.0, y / 2.0],
            [z / 2.0, y / 2.0, v],
        ])
    }

    /// `4u − x²`, four times the second leading minor of [`GramLikeMatrix`].
    pub fn minor2(&self) -> f64 {
        4.0 * self.u - self.x * self.x
    }

    /// `4uv − z² − vx² − uy² + xyz`, four times the determinant of
    /// [`GramLikeMatrix`].
    pub fn minor3(&self) -> f64 {
        let Tuple5 { x, y, z, u, v } = *self;
        4.0 * u * v - z * z - v * x * x - u * y * y + x * y * z
    }
}

/// The symmetric matrix `[[u, x/2, z/2], [x/2, 1, y/2], [z/2, y/2, v]]`; a
/// tuple is realized by real matrices iff this is not positive definite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramLikeMatrix(pub [[f64; 3]; 3]);

impl GramLikeMatrix {
    pub fn det(&self) -> f64 {
        let m = self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

pub fn spectral_radius(m: &Mat2) -> f64 {
    m.eigenvalues()[0].norm()
}

/// Dominant eigenvalue when it is real, `None` for a complex pair.
pub fn dominant_real_eigenvalue(m: &Mat2) -> Option<f64> {
    let [l1, _] = m.eigenvalues();
    (l1.im == 0.0).then_some(l1.re)
}

pub fn generator(letter: Letter, a: &Mat2, b: &Mat2) -> Mat2 {
    match letter {
        Letter::A => *a,
        Letter::B => *b,
    }
}

/// `w(A, B)`, multiplying left to right.
pub fn evaluate_word(word: &Word, a: &Mat2, b: &Mat2) -> Mat2 {
    word.letters()
        .iter()
        .fold(Mat2::IDENTITY, |acc, &l| acc * generator(l, a, b))
}

pub fn evaluate_word_complex(word: &Word, a: &CMat2, b: &CMat2) -> CMat2 {
    word.letters().iter().fold(
        Mat2::IDENTITY.to_complex(),
        |acc, &l| match l {
            Letter::A => acc * *a,
            Letter::B => acc * *b,
        },
    )
}

/// `ρ(w(A, B))^{1/|w|}`.
pub fn normalized_spectral_radius(word: &Word, a: &Mat2, b: &Mat2) -> f64 {
    spectral_radius(&evaluate_word(word, a, b)).powf(1.0 / word.len() as f64)
}

pub fn invariants_of_pair(a: &Mat2, b: &Mat2) -> Tuple5 {
    Tuple5::new(a.trace(), b.trace(), (*a * *b).trace(), a.det(), b.det())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Lower bound: best `ρ(Π)^{1/|Π|}` over products of length `1..=k` (powers
/// and rotations repeat values, so this is the maximum over primitive
/// rotation classes). Upper bound: best `‖Π‖^{1/k}` in spectral norm over
/// products of length exactly `k`.
pub fn jsr_bounds(a: &Mat2, b: &Mat2, k: usize) -> Result<JsrBounds> {
    if !(1..=MAX_BOUNDS_LEN).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "k must be in 1..={MAX_BOUNDS_LEN}, got {k}"
        )));
    }
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    // depth-first over prefixes; `stack` holds (product, length)
    let mut stack = vec![(*a, 1usize), (*b, 1usize)];
    while let Some((p, len)) = stack.pop() {
        lower = lower.max(spectral_radius(&p).powf(1.0 / len as f64));
        if len == k {
            upper = upper.max(p.spectral_norm().powf(1.0 / k as f64));
        } else {
            stack.push((p * *a, len + 1));
            stack.push((p * *b, len + 1));
        }
    }
    Ok(JsrBounds { lower, upper })
}

/// Explicit Sylvester-criterion form of realizability:
/// `min(4u − x², 4uv − z² − vx² − uy² + xyz) <= 0`.
pub fn realizable(t: &Tuple5) -> bool {
    t.minor2().min(t.minor3()) <= 0.0
}

/// A real pair `(A, B)` with the prescribed invariants.
pub fn realize(t: &Tuple5) -> Result<(Mat2, Mat2)> {
    if !t.as_array().iter().all(|a| a.is_finite()) {
        return Err(Error::InvalidArgument("non-finite tuple".into()));
    }
    if !realizable(t) {
        return Err(Error::NotRealizable);
    }
    let Tuple5 { x, y, z, u, v } = *t;
    if t.minor2() <= 0.0 {
        let (a, b) = realize_triangular(x, y, z, u, v);
        return Ok((a, b));
    }
    if 4.0 * v - y * y <= 0.0 {
        // tr AB = tr BA, so the roles of the two matrices can be exchanged
        let (b, a) = realize_triangular(y, x, z, v, u);
        return Ok((a, b));
    }
    realize_rotation(t)
}

/// `A = [[λ1, μ], [0, λ2]]` with real `λ1 + λ2 = x`, `λ1 λ2 = u`, and `B` the
/// companion matrix `[[0, −v], [1, y]]`. Then `tr AB = μ + λ2·y`, which fixes
/// `μ`; the coefficient of `μ` is the constant `1`, so this never degenerates.
fn realize_triangular(x: f64, y: f64, z: f64, u: f64, v: f64) -> (Mat2, Mat2) {
    let s = (x * x / 4.0 - u).max(0.0).sqrt();
    let l1 = if x >= 0.0 { x / 2.0 + s } else { x / 2.0 - s };
    let l2 = if l1 != 0.0 { u / l1 } else { x - l1 };
    let mu = z - l2 * y;
    (Mat2::new(l1, mu, 0.0, l2), Mat2::new(0.0, -v, 1.0, y))
}

/// Both matrices in rotation-like form; `μ` solves `s μ² + (z − xy/2) μ + s = 0`
/// with `s = sqrt(u − x²/4)·sqrt(v − y²/4)`, whose discriminant is `−4 det M`.
fn realize_rotation(t: &Tuple5) -> Result<(Mat2, Mat2)> {
    let Tuple5 { x, y, z, u, v } = *t;
    let sa = (u - x * x / 4.0).sqrt();
    let sb = (v - y * y / 4.0).sqrt();
    let s = sa * sb;
    let b = z - x * y / 2.0;
    let mut disc = b * b - 4.0 * s * s;
    if disc < 0.0 {
        if disc >= -1e-12 * (b * b).max(4.0 * s * s).max(1.0) {
            disc = 0.0;
        } else {
            return Err(Error::NotRealizable);
        }
    }
    if s == 0.0 {
        return Err(Error::Degenerate("zero rotation amplitude".into()));
    }
    // root of larger modulus, then the other as its reciprocal (product is 1)
    let q = -(b + b.signum() * disc.sqrt()) / 2.0;
    let mu = if q != 0.0 { q / s } else { -b / (2.0 * s) };
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::Degenerate("vanishing rotation parameter".into()));
    }
    let a = Mat2::new(x / 2.0, -sa, sa, x / 2.0);
    let bm = Mat2::new(y / 2.0, -sb / mu, mu * sb, y / 2.0);
    Ok((a, bm))
}

/// `tr((AB − BA)³)`, identically zero for 2×2 matrices.
pub fn commutator_cube_trace(a: &Mat2, b: &Mat2) -> f64 {
    let c = *a * *b - *b * *a;
    (c * c * c).trace()
}
