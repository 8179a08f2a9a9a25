//! Centrally symmetric convex polygons in the plane: construction as the
//! symmetric hull of a point set, Minkowski gauge, boundary distance and
//! the strict-convexity check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{Mat2, Vec2};

/// Turn threshold below which three consecutive vertices count as collinear
/// (sine of the turning angle).
pub const COLLINEAR_TOL: f64 = 1e-12;

fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Cyclically ordered (counterclockwise) vertex list. Polygons produced by
/// [`Polygon::symmetric_hull`] have `2m` vertices with `v[m + i] = −v[i]`;
/// [`Polygon::from_vertices`] accepts any list so that arbitrary input can be
/// validated with [`check_convex_position`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

/// A hull vertex expressed through the input points: `sign · points[source]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HullSource {
    pub source: usize,
    pub sign: i8,
}

impl Polygon {
    pub fn from_vertices(vertices: Vec<Vec2>) -> Polygon {
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of vertex pairs `m`.
    pub fn half_len(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i % self.vertices.len()]
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices.iter().map(|&v| norm(v)).fold(0.0, f64::max)
    }

    /// Strictly convex hull of `±points`, ordered counterclockwise starting
    /// from the vertex of least polar angle in `[0, π)`. Returns the polygon
    /// and, for each of the first `m` vertices, which input point it is.
    ///
    /// Fails when the hull is not two-dimensional.
    pub fn symmetric_hull(points: &[Vec2]) -> Result<(Polygon, Vec<HullSource>)> {
        let mut cloud: Vec<(Vec2, HullSource)> = Vec::with_capacity(2 * points.len());
        for (i, &p) in points.iter().enumerate() {
            cloud.push((p, HullSource { source: i, sign: 1 }));
            cloud.push(([-p[0], -p[1]], HullSource { source: i, sign: -1 }));
        }
        let hull = monotone_chain(&mut cloud);
        if hull.len() < 4 || !hull.len().is_multiple_of(2) {
            return Err(Error::NotCertifiable(format!(
                "degenerate symmetric hull with {} vertices",
                hull.len()
            )));
        }
        let angle = |p: Vec2| {
            let a = p[1].atan2(p[0]);
            if a < 0.0 {
                a + 2.0 * std::f64::consts::PI
            } else {
                a
            }
        };
        let start = (0..hull.len())
            .min_by(|&i, &j| angle(hull[i].0).total_cmp(&angle(hull[j].0)))
            .expect("nonempty hull");
        let m = hull.len() / 2;
        let half: Vec<(Vec2, HullSource)> = (0..m).map(|k| hull[(start + k) % hull.len()]).collect();
        // the opposite half must be the negation of the first
        for k in 0..m {
            let (p, _) = hull[(start + m + k) % hull.len()];
            let q = half[k].0;
            if p[0] != -q[0] || p[1] != -q[1] {
                return Err(Error::NotCertifiable("hull is not centrally symmetric".into()));
            }
        }
        let mut vertices: Vec<Vec2> = half.iter().map(|(p, _)| *p).collect();
        vertices.extend(half.iter().map(|(p, _)| [-p[0], -p[1]]));
        let sources = half.into_iter().map(|(_, s)| s).collect();
        Ok((Polygon { vertices }, sources))
    }

    fn check_full_dimensional(&self) -> Result<()> {
        let n = self.vertices.len();
        if n < 4 {
            return Err(Error::InvalidArgument(format!("degenerate polygon with {n} vertices")));
        }
        for i in 0..n {
            if cross(self.vertex(i), self.vertex(i + 1)) <= 0.0 {
                return Err(Error::InvalidArgument(
                    "polygon does not contain the origin in its interior".into(),
                ));
            }
        }
        Ok(())
    }

    /// Outward edge normals scaled so that `n_i · v_i = n_i · v_{i+1} = 1`;
    /// these are the vertices of the polar polygon.
    pub fn edge_normals(&self) -> Result<Vec<Vec2>> {
        self.check_full_dimensional()?;
        Ok((0..self.vertices.len())
            .map(|i| {
                let (a, b) = (self.vertex(i), self.vertex(i + 1));
                let c = cross(a, b);
                [(b[1] - a[1]) / c, -(b[0] - a[0]) / c]
            })
            .collect())
    }

    /// The polar polygon `{w : v·w <= 1 for all vertices v}`.
    pub fn polar(&self) -> Result<Polygon> {
        Ok(Polygon { vertices: self.edge_normals()? })
    }

    /// Bound view for repeated gauge evaluation.
    pub fn gauge_fn(&self) -> Result<Gauge> {
        Ok(Gauge { normals: self.edge_normals()? })
    }

    /// Minkowski gauge `inf{t > 0 : p ∈ tS}`.
    pub fn gauge(&self, p: Vec2) -> Result<f64> {
        Ok(self.gauge_fn()?.eval(p))
    }

    /// Support function `max_v v·w`; the gauge of the polar polygon.
    pub fn support(&self, w: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[0] * w[0] + v[1] * w[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Gauge of a polygon through its edge normals.
#[derive(Clone, Debug)]
pub struct Gauge {
    normals: Vec<Vec2>,
}

impl Gauge {
    pub fn eval(&self, p: Vec2) -> f64 {
        self.normals
            .iter()
            .map(|n| n[0] * p[0] + n[1] * p[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Signed Euclidean distance to the boundary, positive inside.
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        self.normals
            .iter()
            .map(|n| (1.0 - (n[0] * p[0] + n[1] * p[1])) / norm(*n))
            .fold(f64::INFINITY, f64::min)
    }

    /// Index `k` of the edge `(v_k, v_{k+1})` whose halfplane is tightest at `p`.
    pub fn active_edge(&self, p: Vec2) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (k, n) in self.normals.iter().enumerate() {
            let val = n[0] * p[0] + n[1] * p[1];
            if val > best_val {
                best_val = val;
                best = k;
            }
        }
        best
    }
}

/// Andrew's monotone chain, dropping collinear points.
fn monotone_chain<T: Copy>(pts: &mut [(Vec2, T)]) -> Vec<(Vec2, T)> {
    pts.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.0[1].total_cmp(&b.0[1])));
    let turn = |o: Vec2, a: Vec2, b: Vec2| {
        let (u, v) = (sub(a, o), sub(b, o));
        let denom = norm(u) * norm(v);
        if denom == 0.0 {
            0.0
        } else {
            cross(u, v) / denom
        }
    };
    let mut hull: Vec<(Vec2, T)> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(Vec2, T)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && turn(hull[hull.len() - 2].0, hull[hull.len() - 1].0, p.0) <= COLLINEAR_TOL
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub ok: bool,
    pub max_interior_angle_deg: f64,
}

/// Strict convexity of the cyclic vertex list and its largest interior angle.
pub fn check_convex_position(poly: &Polygon) -> ConvexityReport {
    let n = poly.len();
    if n < 3 {
        return ConvexityReport { ok: false, max_interior_angle_deg: 180.0 };
    }
    let mut ok = true;
    let mut max_angle = 0.0f64;
    for i in 0..n {
        let prev = poly.vertex(i + n - 1);
        let cur = poly.vertex(i);
        let next = poly.vertex(i + 1);
        let (e1, e2) = (sub(cur, prev), sub(next, cur));
        let denom = norm(e1) * norm(e2);
        let sin_turn = if denom == 0.0 { 0.0 } else { cross(e1, e2) / denom };
        if sin_turn <= COLLINEAR_TOL {
            ok = false;
        }
        let (a, b) = (sub(prev, cur), sub(next, cur));
        let cos = (a[0] * b[0] + a[1] * b[1]) / (norm(a) * norm(b));
        let angle = cos.clamp(-1.0, 1.0).acos().to_degrees();
        max_angle = max_angle.max(angle);
    }
    ConvexityReport { ok, max_interior_angle_deg: max_angle }
}

/// Operator norm of `m` for the norm whose unit ball is `poly`.
pub fn polytope_norm(poly: &Polygon, m: &Mat2) -> Result<f64> {
    let g = poly.gauge_fn()?;
    Ok(poly
        .vertices()
        .iter()
        .map(|&v| g.eval(m.apply(v)))
        .fold(0.0, f64::max))
}

/// Residual of the Barabanov equation for the transposed pair in the norm
/// whose unit ball is the polar of `poly`:
/// `max_w |max(h(Aᵗw), h(Bᵗw)) − h(w)|` over `samples` unit directions,
/// where `h` is the support function of `poly`.
///
/// A small residual says the polygon equals the convex hull of its images
/// under the pair, which is what the equation needs; it is numerical
/// evidence, not a proof.
pub fn barabanov_polar_check(poly: &Polygon, a: &Mat2, b: &Mat2, samples: usize) -> Result<f64> {
    poly.polar()?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let (at, bt) = (a.transpose(), b.transpose());
    let mut worst = 0.0f64;
    for k in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let w = [theta.cos(), theta.sin()];
        let lhs = poly.support(at.apply(w)).max(poly.support(bt.apply(w)));
        worst = worst.max((lhs - poly.support(w)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::symmetric_hull(&[[1.0, 1.0], [-1.0, 1.0]]).unwrap().0
    }

    #[test]
    fn symmetric_hull_of_square() {
        let (p, src) = Polygon::symmetric_hull(&[[1.0, 1.0], [-1.0, 1.0], [0.2, 0.1]]).unwrap();
        assert_eq!(p.vertices(), &[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]);
        assert_eq!(src, vec![HullSource { source: 0, sign: 1 }, HullSource { source: 1, sign: 1 }]);
    }

    #[test]
    fn collinear_points_are_dropped() {
        let (p, _) = Polygon::symmetric_hull(&[[1.0, 1.0], [-1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn degenerate_hull_fails() {
        assert!(Polygon::symmetric_hull(&[[1.0, 2.0]]).is_err());
        assert!(Polygon::symmetric_hull(&[[1.0, 2.0], [2.0, 4.0]]).is_err());
    }

    #[test]
    fn gauge_and_distance() {
        let s = square();
        let g = s.gauge_fn().unwrap();
        assert!((g.eval([0.5, 0.25]) - 0.5).abs() < 1e-15);
        assert!((g.eval([-3.0, 1.0]) - 3.0).abs() < 1e-15);
        assert!((g.boundary_distance([0.5, 0.0]) - 0.5).abs() < 1e-15);
        assert!(g.boundary_distance([2.0, 0.0]) < 0.0);
    }

    #[test]
    fn convexity_of_square() {
        let r = check_convex_position(&square());
        assert!(r.ok);
        assert!((r.max_interior_angle_deg - 90.0).abs() < 1e-9);
    }

    #[test]
    fn convexity_with_midpoint() {
        let p = Polygon::from_vertices(vec![
            [1.0, 1.0],
            [0.0, 1.0],
            [-1.0, 1.0],
            [-1.0, -1.0],
            [1.0, -1.0],
        ]);
        let r = check_convex_position(&p);
        assert!(!r.ok);
        assert!((r.max_interior_angle_deg - 180.0).abs() < 1e-9);
    }

    #[test]
    fn norms_on_square() {
        let s = square();
        assert!((polytope_norm(&s, &Mat2::IDENTITY).unwrap() - 1.0).abs() < 1e-15);
        assert!((polytope_norm(&s, &Mat2::diag(3.0, 1.0)).unwrap() - 3.0).abs() < 1e-15);
        let seg = Polygon::from_vertices(vec![[1.0, 0.0], [-1.0, 0.0]]);
        assert!(polytope_norm(&seg, &Mat2::IDENTITY).is_err());
    }

    #[test]
    fn polar_of_square_is_diamond() {
        let polar = square().polar().unwrap();
        for v in polar.vertices() {
            assert!((v[0].abs() + v[1].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn barabanov_for_rotation_of_regular_polygon() {
        let n = 24;
        let pts: Vec<Vec2> = (0..n / 2)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        let (poly, _) = Polygon::symmetric_hull(&pts).unwrap();
        let r = Mat2::rotation(2.0 * std::f64::consts::PI / n as f64);
        let res = barabanov_polar_check(&poly, &r, &r, 720).unwrap();
        assert!(res < 1e-12, "residual {res}");
    }
}
