//! Robustness of a real certificate under complex perturbation, through the
//! absolute convex hull of the perturbed vertices.

use num_complex::Complex64;

use super::{Certificate, Gauge, MATCH_TOL};
use crate::mat2::{evaluate_word_complex, CMat2, CVec2, Mat2, Vec2};
use crate::words::Letter;

/// Slack allowed on `|α|` when a perturbed edge image is a unit-modulus
/// multiple of the perturbed target.
const EDGE_MODULUS_TOL: f64 = 1e-9;

fn cnorm(v: CVec2) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

fn csub(a: CVec2, b: CVec2) -> CVec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cscale(c: Complex64, v: CVec2) -> CVec2 {
    [c * v[0], c * v[1]]
}

fn real(v: Vec2) -> CVec2 {
    [Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0)]
}

/// `⟨u, v⟩ = ū·v`.
fn inner(u: CVec2, v: CVec2) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// Dominant eigenvector of a complex matrix, if strictly dominant.
fn leading_eigenvector(p: &CMat2) -> Option<CVec2> {
    let [l1, l2] = p.eigenvalues();
    if l1.norm() - l2.norm() <= 1e-12 * l1.norm() {
        return None;
    }
    let m = p.0;
    let c1 = [m[0][1], l1 - m[0][0]];
    let c2 = [l1 - m[1][1], m[1][0]];
    let v = if cnorm(c1) >= cnorm(c2) { c1 } else { c2 };
    let n = cnorm(v);
    (n > 0.0).then(|| cscale(Complex64::new(1.0 / n, 0.0), v))
}

/// Solves `target = α·p + β·q` for complex `α, β`.
fn solve2(p: CVec2, q: CVec2, target: CVec2) -> Option<(Complex64, Complex64)> {
    let det = p[0] * q[1] - q[0] * p[1];
    if det.norm() == 0.0 {
        return None;
    }
    let alpha = (target[0] * q[1] - q[0] * target[1]) / det;
    let beta = (p[0] * target[1] - target[0] * p[1]) / det;
    Some((alpha, beta))
}

/// Coefficients of `p` in the cone of `(u, w)`: `p = α u + β w`.
fn solve_real(u: Vec2, w: Vec2, p: Vec2) -> (f64, f64) {
    let det = u[0] * w[1] - w[0] * u[1];
    ((p[0] * w[1] - w[0] * p[1]) / det, (u[0] * p[1] - p[0] * u[1]) / det)
}

/// Checks that the absolute convex hull `T` of the perturbed vertices
/// satisfies `ÃT ⊆ T` and `B̃T ⊆ T`, which proves that `(Ã, B̃)` still has
/// joint spectral radius equal to the normalized spectral radius of the
/// certified cycles, with the same maximizing products.
///
/// The pair is first normalized so the first certified cycle has spectral
/// radius 1. Perturbed vertices follow the generating paths recorded in the
/// certificate from perturbed seed eigenvectors. A generator image that was
/// a vertex in the real polygon must be a multiple of modulus at most one of
/// the corresponding perturbed vertex; any other image is written as
/// `α̃ ṽ_k + β̃ ṽ_{k+1}` in the triangle slice holding its real counterpart
/// and must satisfy `|α̃| + |β̃| < 1`. Returns `false` (never panics) when the
/// perturbation is too large for this argument.
pub fn certify_complex(a: &CMat2, b: &CMat2, base: &Certificate) -> bool {
    if !base.verdict.is_certified() || base.seeds.is_empty() {
        return false;
    }
    if !(a.is_finite() && b.is_finite()) {
        return false;
    }
    let first = &base.seeds[0].cycle;
    let rho = evaluate_word_complex(first, a, b).spectral_radius();
    if !(rho.is_finite() && rho > 0.0) {
        return false;
    }
    let s = Complex64::new(rho.powf(-1.0 / first.len() as f64), 0.0);
    let (at, bt) = (a.scale(s), b.scale(s));
    let gen = |l: Letter| match l {
        Letter::A => at,
        Letter::B => bt,
    };

    // perturbed seeds, aligned with the real seeds (the choice of phase does
    // not change the absolutely convex hull)
    let mut seeds = Vec::with_capacity(base.seeds.len());
    for seed in &base.seeds {
        let p = evaluate_word_complex(&seed.cycle, &at, &bt);
        let Some(e) = leading_eigenvector(&p) else {
            return false;
        };
        let target = real(seed.vector);
        let c = inner(e, target) / inner(e, e);
        seeds.push(cscale(c, e));
    }

    let poly = &base.polygon;
    let m = poly.half_len();
    if m == 0 || base.origins.len() != m {
        return false;
    }
    let mut tilde: Vec<CVec2> = Vec::with_capacity(m);
    for o in &base.origins {
        let mut v = seeds[o.seed];
        for &l in &o.path {
            v = gen(l).apply(v);
        }
        tilde.push(cscale(Complex64::new(o.sign as f64, 0.0), v));
    }
    let vertex = |j: usize| -> CVec2 {
        let v = tilde[j % m];
        if j >= m {
            [-v[0], -v[1]]
        } else {
            v
        }
    };

    let Ok(gauge): Result<Gauge, _> = poly.gauge_fn() else {
        return false;
    };
    let real_gen = |l: Letter| -> Mat2 {
        match l {
            Letter::A => base.a,
            Letter::B => base.b,
        }
    };
    let n = poly.len();
    for i in 0..m {
        for l in [Letter::A, Letter::B] {
            let img = gen(l).apply(tilde[i]);
            if let Some(e) = base.graph.edge(i, l) {
                let target = vertex(if e.gen.negative { e.to + m } else { e.to });
                let alpha = inner(target, img) / inner(target, target);
                let resid = cnorm(csub(img, cscale(alpha, target)));
                if resid <= MATCH_TOL * cnorm(target) && alpha.norm() <= 1.0 + EDGE_MODULUS_TOL {
                    continue;
                }
            }
            let p = real_gen(l).apply(poly.vertex(i));
            let k = gauge.active_edge(p);
            let (ra, rb) = solve_real(poly.vertex(k), poly.vertex((k + 1) % n), p);
            if ra < -1e-12 || rb < -1e-12 {
                return false;
            }
            let Some((alpha, beta)) = solve2(vertex(k), vertex(k + 1), img) else {
                return false;
            };
            if !(alpha.norm() + beta.norm() < 1.0) {
                return false;
            }
        }
    }
    true
}
