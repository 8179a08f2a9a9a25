//! Invariant-polygon certification of spectrum-maximizing products.
//!
//! Given a pair normalized so that the candidate products have spectral
//! radius 1, the leading eigenvectors of the candidate cycles (scaled by
//! balancing ratios) are pushed through `±A, ±B` until every image is either
//! an existing vertex or lies inside the symmetric convex hull. The result is
//! a polygon `S` with `AS ⊆ S` and `BS ⊆ S`, which proves the joint spectral
//! radius is 1. The vertex-to-vertex images form a graph whose recurrent part
//! decides whether the candidates are the only spectrum-maximizing products.

mod complex;
mod graph;
mod polygon;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fricke::is_2_isospectral;
use crate::mat2::{evaluate_word, generator, spectral_radius, Mat2, Vec2};
use crate::words::{is_chiral, is_primitive, Letter, Word};

pub use complex::certify_complex;
pub use graph::{uniqueness_check, Edge, GraphCycle, SignedGen, VertexGraph};
pub use polygon::{
    barabanov_polar_check, check_convex_position, polytope_norm, ConvexityReport, Gauge,
    HullSource, Polygon,
};

/// An image within this distance (relative to the polygon size) of a vertex
/// is that vertex.
pub const MATCH_TOL: f64 = 1e-7;
/// An image joins the vertex set when its gauge exceeds `1 + JOIN_TOL`.
pub const JOIN_TOL: f64 = 1e-9;
/// Interior images must clear the boundary by more than this.
pub const INTERIOR_TOL: f64 = 1e-9;
/// Default cap on the number of vertex pairs.
pub const DEFAULT_BUDGET: usize = 256;
/// Products up to this length are screened before building a polygon.
pub const PRECHECK_LEN: usize = 8;
/// Geometric grid for the balancing ratio.
pub const BALANCE_RANGE: (f64, f64) = (0.5, 2.0);
pub const BALANCE_GRID: usize = 64;
/// Product length used to estimate the viable ratio window.
pub const WINDOW_DEPTH: usize = 16;
const GOLDEN_ITERS: usize = 40;
/// Growth factor (relative to the seeds) that counts as divergence.
const DIVERGENCE_FACTOR: f64 = 1e6;

const LETTERS: [Letter; 2] = [Letter::A, Letter::B];

fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

fn dist(a: Vec2, b: Vec2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Unit eigenvector for the dominant eigenvalue, with the first nonzero
/// coordinate positive, together with that eigenvalue.
///
/// Fails unless the dominant eigenvalue is real and strictly dominant.
pub fn leading_eigenvector(p: &Mat2) -> Result<(Vec2, f64)> {
    let [l1, l2] = p.eigenvalues();
    if l1.im != 0.0 {
        return Err(Error::NotCertifiable("dominant eigenvalues are complex".into()));
    }
    if l1.norm() - l2.norm() <= 1e-12 * l1.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotCertifiable("dominant eigenvalue is not simple".into()));
    }
    let lambda = l1.re;
    let m = p.0;
    let c1 = [m[0][1], lambda - m[0][0]];
    let c2 = [lambda - m[1][1], m[1][0]];
    let v = if norm(c1) >= norm(c2) { c1 } else { c2 };
    let n = norm(v);
    if n == 0.0 {
        return Err(Error::NotCertifiable("eigenvector computation degenerated".into()));
    }
    let mut e = [v[0] / n, v[1] / n];
    let first = if e[0].abs() > 1e-14 { e[0] } else { e[1] };
    if first < 0.0 {
        e = [-e[0], -e[1]];
    }
    Ok((e, lambda))
}

/// Starting vertex of one candidate cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub cycle: Word,
    pub ratio: f64,
    pub eigenvalue: f64,
    pub vector: Vec2,
}

/// How a polygon vertex was generated: `sign · g_k ⋯ g_1 (seed)` where
/// `path = [g_1, …, g_k]` in application order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexOrigin {
    pub seed: usize,
    pub path: Vec<Letter>,
    pub sign: i8,
}

/// Output of [`build_polytope`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltPolytope {
    pub polygon: Polygon,
    pub graph: VertexGraph,
    pub seeds: Vec<Seed>,
    /// One entry per vertex pair, in polygon order.
    pub origins: Vec<VertexOrigin>,
}

struct Point {
    v: Vec2,
    seed: usize,
    parent: Option<(usize, Letter)>,
}

fn path_of(points: &[Point], mut i: usize) -> Vec<Letter> {
    let mut path = Vec::new();
    while let Some((p, l)) = points[i].parent {
        path.push(l);
        i = p;
    }
    path.reverse();
    path
}

/// Seeds for `cycles`, each product already normalized to spectral radius 1.
pub fn seeds_for(a: &Mat2, b: &Mat2, cycles: &[Word], ratios: &[f64]) -> Result<Vec<Seed>> {
    if cycles.is_empty() || cycles.len() != ratios.len() {
        return Err(Error::InvalidArgument("need one ratio per cycle".into()));
    }
    cycles
        .iter()
        .zip(ratios)
        .map(|(c, &r)| {
            let p = evaluate_word(c, a, b);
            let rho = spectral_radius(&p);
            if (rho - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "cycle {c} has spectral radius {rho}, expected 1"
                )));
            }
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidArgument(format!("bad ratio {r}")));
            }
            let (e, lambda) = leading_eigenvector(&p)?;
            Ok(Seed { cycle: c.clone(), ratio: r, eigenvalue: lambda, vector: [r * e[0], r * e[1]] })
        })
        .collect()
}

/// Runs the orbit-closure construction from the scaled leading eigenvectors
/// of `cycles`, then reads off the polygon and its vertex graph.
pub fn build_polytope(
    a: &Mat2,
    b: &Mat2,
    cycles: &[Word],
    ratios: &[f64],
    budget: usize,
) -> Result<BuiltPolytope> {
    let seeds = seeds_for(a, b, cycles, ratios)?;
    let scale0 = seeds.iter().map(|s| norm(s.vector)).fold(0.0, f64::max);
    let mut points: Vec<Point> = Vec::new();
    let mut queue = VecDeque::new();
    for (k, s) in seeds.iter().enumerate() {
        let dup = points.iter().any(|p| {
            dist(p.v, s.vector) <= MATCH_TOL * scale0
                || dist(p.v, [-s.vector[0], -s.vector[1]]) <= MATCH_TOL * scale0
        });
        if !dup {
            points.push(Point { v: s.vector, seed: k, parent: None });
            queue.push_back(points.len() - 1);
        }
    }
    let hull_gauge = |points: &[Point]| -> Option<Gauge> {
        let vs: Vec<Vec2> = points.iter().map(|p| p.v).collect();
        Polygon::symmetric_hull(&vs).ok().and_then(|(poly, _)| poly.gauge_fn().ok())
    };
    let mut gauge = hull_gauge(&points);
    let mut scale = scale0;
    while let Some(i) = queue.pop_front() {
        for letter in LETTERS {
            let img = generator(letter, a, b).apply(points[i].v);
            let tol = MATCH_TOL * scale;
            let matched = points
                .iter()
                .any(|p| dist(p.v, img) <= tol || dist([-p.v[0], -p.v[1]], img) <= tol);
            if matched {
                continue;
            }
            let outside = match &gauge {
                Some(g) => g.eval(img) > 1.0 + JOIN_TOL,
                None => true,
            };
            if !outside {
                continue;
            }
            let n = norm(img);
            if !n.is_finite() || n > DIVERGENCE_FACTOR * scale0 {
                return Err(Error::NotCertifiable(
                    "diverging orbit: images keep leaving the hull".into(),
                ));
            }
            scale = scale.max(n);
            points.push(Point { v: img, seed: points[i].seed, parent: Some((i, letter)) });
            if points.len() > budget {
                return Err(Error::NotCertifiable(format!(
                    "vertex budget {budget} exceeded"
                )));
            }
            queue.push_back(points.len() - 1);
            gauge = hull_gauge(&points);
        }
    }
    let vs: Vec<Vec2> = points.iter().map(|p| p.v).collect();
    let (polygon, sources) = Polygon::symmetric_hull(&vs)?;
    let origins = sources
        .iter()
        .map(|s| VertexOrigin { seed: points[s.source].seed, path: path_of(&points, s.source), sign: s.sign })
        .collect();
    let graph = vertex_graph(&polygon, a, b);
    Ok(BuiltPolytope { polygon, graph, seeds, origins })
}

/// Edges `g(v_i) = ±v_j` among the polygon's vertex pairs.
pub fn vertex_graph(poly: &Polygon, a: &Mat2, b: &Mat2) -> VertexGraph {
    let m = poly.half_len();
    let tol = MATCH_TOL * poly.max_vertex_norm();
    let mut edges = Vec::new();
    for i in 0..m {
        for letter in LETTERS {
            let img = generator(letter, a, b).apply(poly.vertex(i));
            let hit = (0..poly.len())
                .map(|j| (j, dist(img, poly.vertex(j))))
                .min_by(|x, y| x.1.total_cmp(&y.1));
            if let Some((j, d)) = hit {
                if d <= tol {
                    edges.push(Edge {
                        from: i,
                        gen: SignedGen { letter, negative: j >= m },
                        to: j % m,
                    });
                }
            }
        }
    }
    VertexGraph { nodes: m, edges }
}

/// Result of [`check_images`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageCheck {
    pub ok: bool,
    /// Least Euclidean distance from an interior image to the boundary.
    pub min_margin: f64,
    /// The vertex/generator achieving `min_margin`.
    pub closest: Option<(usize, Letter)>,
    pub failure: Option<String>,
}

/// Every generator image of every vertex must be a graph edge target or lie
/// strictly inside the polygon.
pub fn check_images(poly: &Polygon, a: &Mat2, b: &Mat2, graph: &VertexGraph) -> Result<ImageCheck> {
    let gauge = poly.gauge_fn()?;
    let tol = MATCH_TOL * poly.max_vertex_norm();
    let mut min_margin = f64::INFINITY;
    let mut closest = None;
    for i in 0..poly.half_len() {
        for letter in LETTERS {
            let img = generator(letter, a, b).apply(poly.vertex(i));
            if let Some(e) = graph.edge(i, letter) {
                let target = poly.vertex(e.to);
                let sign = if e.gen.negative { -1.0 } else { 1.0 };
                if dist(img, [sign * target[0], sign * target[1]]) <= tol {
                    continue;
                }
            }
            let d = gauge.boundary_distance(img);
            if d <= INTERIOR_TOL {
                let what = if d < -INTERIOR_TOL { "outside" } else { "on the boundary of" };
                return Ok(ImageCheck {
                    ok: false,
                    min_margin: d.min(min_margin),
                    closest: Some((i, letter)),
                    failure: Some(format!(
                        "image of vertex {i} under {} lies {what} the polygon (distance {d:.3e})",
                        letter.as_char().to_ascii_uppercase()
                    )),
                });
            }
            if d < min_margin {
                min_margin = d;
                closest = Some((i, letter));
            }
        }
    }
    Ok(ImageCheck { ok: true, min_margin, closest, failure: None })
}

/// Verdict of [`certify`]. Failures are data, not errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    /// The candidates are a chiral pair and, with their rotations, the only
    /// spectrum-maximizing products.
    CertifiedUniquePair,
    /// The candidates are the only spectrum-maximizing products.
    Certified,
    Failed { reason: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Verdict::Failed { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Input pair.
    pub original_a: Mat2,
    pub original_b: Mat2,
    /// `ρ(first candidate)^{1/len}` of the input pair; equals its joint
    /// spectral radius when certified.
    pub rescale_factor: f64,
    /// Normalized pair `original / rescale_factor`.
    pub a: Mat2,
    pub b: Mat2,
    /// Joint spectral radius of the normalized pair, known once a polygon is built.
    pub jsr: Option<f64>,
    pub smp_words: Vec<Word>,
    /// Ratio of the second cycle's seed to the first (1 for a single cycle).
    pub balancing_ratio: f64,
    pub seeds: Vec<Seed>,
    pub polygon: Polygon,
    pub origins: Vec<VertexOrigin>,
    pub graph: VertexGraph,
    pub min_interior_margin: Option<f64>,
    pub max_interior_angle_deg: Option<f64>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn vertex_count(&self) -> usize {
        self.polygon.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub budget: usize,
    /// Fixed ratios instead of a balancing search.
    pub ratios: Option<Vec<f64>>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { budget: DEFAULT_BUDGET, ratios: None }
    }
}

/// Build, then run the convexity, image and uniqueness checks.
fn evaluate_polytope(
    a: &Mat2,
    b: &Mat2,
    cycles: &[Word],
    ratios: &[f64],
    budget: usize,
) -> std::result::Result<(BuiltPolytope, ImageCheck, ConvexityReport), String> {
    let built = build_polytope(a, b, cycles, ratios, budget).map_err(|e| e.to_string())?;
    let convex = check_convex_position(&built.polygon);
    if !convex.ok {
        return Err("polygon vertices are not in strictly convex position".into());
    }
    let images = check_images(&built.polygon, a, b, &built.graph).map_err(|e| e.to_string())?;
    if !images.ok {
        return Err(images.failure.unwrap_or_else(|| "image check failed".into()));
    }
    if !uniqueness_check(&built.graph, cycles) {
        return Err("vertex graph has recurrent paths other than the candidate cycles".into());
    }
    Ok((built, images, convex))
}

/// Balancing score of one ratio vector: fewer vertex pairs first, then a
/// larger least interior margin relative to the polygon size.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Score {
    pairs: usize,
    margin: f64,
}

impl Score {
    fn beats(&self, other: &Option<Score>) -> bool {
        match other {
            None => true,
            Some(o) => self.pairs < o.pairs || (self.pairs == o.pairs && self.margin > o.margin),
        }
    }
}

fn better(x: Option<Score>, y: Option<Score>) -> bool {
    x.is_some_and(|s| s.beats(&y))
}

fn balance_score(a: &Mat2, b: &Mat2, cycles: &[Word], ratios: &[f64], budget: usize) -> Option<Score> {
    evaluate_polytope(a, b, cycles, ratios, budget)
        .ok()
        .map(|(built, images, _)| Score {
            pairs: built.polygon.half_len(),
            // relative to the polygon size, so that swapping the roles of
            // the cycles (r ↦ 1/r) leaves the score unchanged
            margin: images.min_margin / built.polygon.max_vertex_norm(),
        })
}

/// Maximizes `f` over `[lo, hi]`: best point of a geometric grid, then
/// golden-section refinement between its neighbours.
fn maximize_ratio(lo: f64, hi: f64, mut f: impl FnMut(f64) -> Option<Score>) -> Option<(f64, Score)> {
    let n = BALANCE_GRID;
    let grid: Vec<f64> = (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect();
    let vals: Vec<Option<Score>> = grid.iter().map(|&r| f(r)).collect();
    let mut best = 0;
    for i in 1..n {
        if better(vals[i], vals[best]) {
            best = i;
        }
    }
    let best_val = vals[best]?;
    let (mut l, mut h) = (grid[best.saturating_sub(1)], grid[(best + 1).min(n - 1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = h - phi * (h - l);
    let mut x2 = l + phi * (h - l);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut top = (grid[best], best_val);
    for _ in 0..GOLDEN_ITERS {
        for (x, v) in [(x1, f1), (x2, f2)] {
            if let Some(v) = v {
                if v.beats(&Some(top.1)) {
                    top = (x, v);
                }
            }
        }
        if !better(f2, f1) {
            h = x2;
            x2 = x1;
            f2 = f1;
            x1 = h - phi * (h - l);
            f1 = f(x1);
        } else {
            l = x1;
            x1 = x2;
            f1 = f2;
            x2 = l + phi * (h - l);
            f2 = f(x2);
        }
    }
    Some(top)
}

/// Left eigenvector of the dominant eigenvalue, scaled so that it takes the
/// value 1 on the right one.
fn dominant_functional(p: &Mat2) -> Result<(Vec2, Vec2)> {
    let (e, _) = leading_eigenvector(p)?;
    let (l, _) = leading_eigenvector(&p.transpose())?;
    let s = l[0] * e[0] + l[1] * e[1];
    if s.abs() < 1e-12 {
        return Err(Error::NotCertifiable("dominant eigenvectors are degenerate".into()));
    }
    Ok((e, [l[0] / s, l[1] / s]))
}

/// `max |l(Π v)|` over products `Π` of length at most `depth`.
fn sup_functional(a: &Mat2, b: &Mat2, v: Vec2, l: Vec2, depth: usize) -> f64 {
    let here = (l[0] * v[0] + l[1] * v[1]).abs();
    if depth == 0 || !here.is_finite() {
        return here;
    }
    let sa = sup_functional(a, b, a.apply(v), l, depth - 1);
    let sb = sup_functional(a, b, b.apply(v), l, depth - 1);
    here.max(sa).max(sb)
}

/// Interval of ratios for cycle `k` (others as in `ratios`) outside which no
/// finite invariant polygon exists.
///
/// Along cycle `j` the functional `ℓ_j` of its dominant eigenvalue keeps its
/// modulus, and on the invariant polygon its largest modulus is the seed's,
/// `r_j`. Every orbit point `Π r_i e_i` therefore needs `|ℓ_j(Π r_i e_i)| ≤ r_j`.
/// The suprema are estimated from products of length `WINDOW_DEPTH`.
/// Returns `None` when the estimate is empty or not finite.
pub fn ratio_window(a: &Mat2, b: &Mat2, cycles: &[Word], ratios: &[f64], k: usize) -> Option<(f64, f64)> {
    let mut eig = Vec::with_capacity(cycles.len());
    for c in cycles {
        eig.push(dominant_functional(&evaluate_word(c, a, b)).ok()?);
    }
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for j in 0..cycles.len() {
        if j == k {
            continue;
        }
        // seed j pushed towards cycle k, and seed k towards cycle j
        let into_k = sup_functional(a, b, eig[j].0, eig[k].1, WINDOW_DEPTH);
        let into_j = sup_functional(a, b, eig[k].0, eig[j].1, WINDOW_DEPTH);
        lo = lo.max(ratios[j] * into_k);
        hi = hi.min(ratios[j] / into_j);
    }
    (lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi).then_some((lo, hi))
}

/// Ratios (first pinned to 1) giving the polygon with the fewest vertices
/// and, among those, the largest least interior margin. With more than two cycles each ratio is optimized
/// in turn with the others held fixed.
///
/// The grid and golden-section search run over the window of
/// [`ratio_window`] when it is nonempty; the window can be far narrower than
/// the spacing of a grid over the whole of `BALANCE_RANGE`.
pub fn balancing_search(a: &Mat2, b: &Mat2, cycles: &[Word], budget: usize) -> Result<Vec<f64>> {
    let mut ratios = vec![1.0; cycles.len()];
    for k in 1..cycles.len() {
        let (lo, hi) = ratio_window(a, b, cycles, &ratios, k).unwrap_or(BALANCE_RANGE);
        let found = maximize_ratio(lo, hi, |r| {
            let mut trial = ratios.clone();
            trial[k] = r;
            balance_score(a, b, cycles, &trial, budget)
        });
        match found {
            Some((r, _)) => ratios[k] = r,
            None => {
                return Err(Error::NotCertifiable(
                    "no balancing ratio yields an invariant polygon".into(),
                ))
            }
        }
    }
    Ok(ratios)
}

/// Best normalized spectral radius over products of length `1..=max_len`
/// that are not rotations of `exclude`, with the word attaining it.
pub fn best_other_product(a: &Mat2, b: &Mat2, max_len: usize, exclude: &[Word]) -> Option<(Word, f64)> {
    let classes: Vec<Word> = exclude.iter().map(|w| w.canonical()).collect();
    let mut best: Option<(Word, f64)> = None;
    for word in crate::words::lyndon_words(max_len).ok()? {
        if classes.contains(&word) {
            continue;
        }
        let r = spectral_radius(&evaluate_word(&word, a, b)).powf(1.0 / word.len() as f64);
        if best.as_ref().is_none_or(|(_, v)| r > *v) {
            best = Some((word, r));
        }
    }
    best
}

pub fn certify(a: &Mat2, b: &Mat2, smp_candidates: &[Word]) -> Certificate {
    certify_with(a, b, smp_candidates, &CertifyOptions::default())
}

pub fn certify_with(a: &Mat2, b: &Mat2, smp_candidates: &[Word], opts: &CertifyOptions) -> Certificate {
    let mut cert = Certificate {
        original_a: *a,
        original_b: *b,
        rescale_factor: f64::NAN,
        a: *a,
        b: *b,
        jsr: None,
        smp_words: smp_candidates.to_vec(),
        balancing_ratio: 1.0,
        seeds: Vec::new(),
        polygon: Polygon::from_vertices(Vec::new()),
        origins: Vec::new(),
        graph: VertexGraph::default(),
        min_interior_margin: None,
        max_interior_angle_deg: None,
        verdict: Verdict::Failed { reason: String::new() },
    };
    let fail = |mut cert: Certificate, reason: String| {
        cert.verdict = Verdict::Failed { reason };
        cert
    };
    if smp_candidates.is_empty() {
        return fail(cert, "no candidate products".into());
    }
    if let Some(w) = smp_candidates.iter().find(|w| !is_primitive(w)) {
        return fail(cert, format!("candidate {w} is not primitive"));
    }
    if !(a.is_finite() && b.is_finite()) {
        return fail(cert, "non-finite matrix entries".into());
    }
    // one representative per rotation class, in input order
    let mut cycles: Vec<Word> = Vec::new();
    for w in smp_candidates {
        if !cycles.iter().any(|c| c.is_rotation_of(w)) {
            cycles.push(w.clone());
        }
    }
    let first = &cycles[0];
    let factor = spectral_radius(&evaluate_word(first, a, b)).powf(1.0 / first.len() as f64);
    if !(factor.is_finite() && factor > 0.0) {
        return fail(cert, format!("candidate {first} has zero spectral radius"));
    }
    let (an, bn) = (a.scale(1.0 / factor), b.scale(1.0 / factor));
    cert.rescale_factor = factor;
    cert.a = an;
    cert.b = bn;
    for c in &cycles[1..] {
        let r = spectral_radius(&evaluate_word(c, &an, &bn)).powf(1.0 / c.len() as f64);
        if (r - 1.0).abs() > 1e-9 {
            return fail(cert, format!("candidates {first} and {c} do not tie ({r})"));
        }
    }
    if let Some((w, r)) = best_other_product(&an, &bn, PRECHECK_LEN, &cycles) {
        if r > 1.0 + JOIN_TOL {
            return fail(cert, format!("product {w} beats the candidates ({r:.8})"));
        }
    }
    let ratios = match &opts.ratios {
        Some(r) => r.clone(),
        None if cycles.len() == 1 => vec![1.0],
        None => match balancing_search(&an, &bn, &cycles, opts.budget) {
            Ok(r) => r,
            Err(e) => return fail(cert, e.to_string()),
        },
    };
    cert.balancing_ratio = ratios.get(1).copied().unwrap_or(1.0);
    match evaluate_polytope(&an, &bn, &cycles, &ratios, opts.budget) {
        Err(reason) => {
            if let Ok(built) = build_polytope(&an, &bn, &cycles, &ratios, opts.budget) {
                cert.seeds = built.seeds;
                cert.polygon = built.polygon;
                cert.origins = built.origins;
                cert.graph = built.graph;
            }
            fail(cert, reason)
        }
        Ok((built, images, convex)) => {
            cert.seeds = built.seeds;
            cert.polygon = built.polygon;
            cert.origins = built.origins;
            cert.graph = built.graph;
            cert.min_interior_margin = Some(images.min_margin);
            cert.max_interior_angle_deg = Some(convex.max_interior_angle_deg);
            cert.jsr = Some(1.0);
            let pair = cycles.len() == 2
                && is_chiral(&cycles[0])
                && cycles[1].is_rotation_of(&cycles[0].mirror())
                && is_2_isospectral(&cycles[0], &cycles[1]);
            cert.verdict = if pair { Verdict::CertifiedUniquePair } else { Verdict::Certified };
            cert
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn eigenvector_of_diagonal() {
        let (e, l) = leading_eigenvector(&Mat2::diag(2.0, 1.0)).unwrap();
        assert_eq!(e, [1.0, 0.0]);
        assert_eq!(l, 2.0);
        let (e, _) = leading_eigenvector(&Mat2::diag(1.0, -3.0)).unwrap();
        assert_eq!(e, [0.0, 1.0]);
    }

    #[test]
    fn eigenvector_errors() {
        assert!(leading_eigenvector(&Mat2::rotation(0.4)).is_err());
        assert!(leading_eigenvector(&Mat2::IDENTITY).is_err());
        assert!(leading_eigenvector(&Mat2::diag(1.0, -1.0)).is_err());
    }

    #[test]
    fn build_requires_normalized_cycles() {
        let h = Mat2::diag(0.5, 0.5);
        assert!(matches!(
            build_polytope(&h, &h, &[w("a")], &[1.0], 64),
            Err(Error::InvalidArgument(_))
        ));
        let i = Mat2::IDENTITY;
        assert!(matches!(
            build_polytope(&i, &i, &[w("a")], &[1.0], 64),
            Err(Error::NotCertifiable(_))
        ));
    }

    #[test]
    fn images_of_contraction_are_interior() {
        let (sq, _) = Polygon::symmetric_hull(&[[1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let r = Mat2::rotation(std::f64::consts::FRAC_PI_4).scale(0.5);
        let g = vertex_graph(&sq, &r, &r);
        assert!(g.edges.is_empty());
        let c = check_images(&sq, &r, &r, &g).unwrap();
        assert!(c.ok);
        assert!(c.min_margin > 0.0);
    }

    #[test]
    fn images_of_expansion_fail() {
        let (sq, _) = Polygon::symmetric_hull(&[[1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let a = Mat2::diag(2.0, 1.0);
        let g = vertex_graph(&sq, &a, &Mat2::IDENTITY.scale(0.5));
        let c = check_images(&sq, &a, &Mat2::IDENTITY.scale(0.5), &g).unwrap();
        assert!(!c.ok);
        assert!(c.failure.unwrap().contains("outside"));
    }

    #[test]
    fn single_cycle_needs_no_balancing() {
        let a = Mat2::new(0.0, 1.0, -1.0, 0.0);
        assert_eq!(balancing_search(&a, &a, &[w("a")], 16).unwrap(), vec![1.0]);
    }

    #[test]
    fn tied_generators_fail() {
        let cert = certify(&Mat2::diag(2.0, 1.0), &Mat2::diag(1.0, 2.0), &[w("ab")]);
        assert!(!cert.verdict.is_certified());
    }

    #[test]
    fn non_primitive_candidate_fails() {
        let cert = certify(&Mat2::diag(2.0, 1.0), &Mat2::diag(1.0, 2.0), &[w("abab")]);
        assert!(matches!(cert.verdict, Verdict::Failed { ref reason } if reason.contains("primitive")));
    }

    #[test]
    fn dominant_single_letter_certifies() {
        let a = Mat2::diag(1.0, 0.3);
        let b = Mat2::rotation(1.0).scale(0.3);
        let cert = certify(&a, &b, &[w("a")]);
        assert_eq!(cert.verdict, Verdict::Certified, "{:?}", cert.verdict);
        assert!((cert.rescale_factor - 1.0).abs() < 1e-12);
    }

    fn paper_certificate() -> Certificate {
        use crate::constants::{paper_smp_pair, PAPER_A0, PAPER_B0, PAPER_BALANCING_RATIO};
        let opts = CertifyOptions { ratios: Some(vec![1.0, PAPER_BALANCING_RATIO]), ..Default::default() };
        certify_with(&PAPER_A0, &PAPER_B0, &paper_smp_pair(), &opts)
    }

    #[test]
    fn paper_pair_at_published_ratio() {
        let cert = paper_certificate();
        assert_eq!(cert.verdict, Verdict::CertifiedUniquePair, "{:?}", cert.verdict);
        assert_eq!(cert.vertex_count(), 32);
        let margin = cert.min_interior_margin.unwrap();
        assert!((margin - 7.6e-4).abs() < 0.3 * 7.6e-4, "{margin}");
        let angle = cert.max_interior_angle_deg.unwrap();
        assert!((angle - 175.8).abs() < 0.5, "{angle}");
        // Lemma 2.4: two recurrent 6-cycles
        let rec = cert.graph.recurrent_components();
        assert_eq!(rec.len(), 2);
        assert!(rec.iter().all(|c| c.len() == 6));
        // AS ⊆ S
        assert!(polytope_norm(&cert.polygon, &cert.a).unwrap() <= 1.0 + 1e-9);
        assert!(polytope_norm(&cert.polygon, &cert.b).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn paper_pair_balancing() {
        use crate::constants::{paper_smp_pair, PAPER_A0, PAPER_B0};
        let cert = certify(&PAPER_A0, &PAPER_B0, &paper_smp_pair());
        assert_eq!(cert.verdict, Verdict::CertifiedUniquePair);
        assert!((cert.balancing_ratio - 0.885).abs() < 0.01, "{}", cert.balancing_ratio);
        let (lo, hi) = ratio_window(&cert.a, &cert.b, &cert.smp_words, &[1.0, 1.0], 1).unwrap();
        assert!(lo < 0.885 && 0.885 < hi && hi - lo < 0.02, "{lo} {hi}");
    }

    #[test]
    fn symmetric_pair_balances_at_one() {
        let r = Mat2::rotation(0.2);
        let a = r * Mat2::new(1.0, 0.4, 0.0, 0.3) * r.transpose();
        let j = Mat2::new(0.0, 1.0, 1.0, 0.0);
        let b = j * a * j;
        let cert = certify(&a, &b, &[w("a"), w("b")]);
        assert_eq!(cert.verdict, Verdict::Certified, "{:?}", cert.verdict);
        assert!((cert.balancing_ratio - 1.0).abs() < 1e-6, "{}", cert.balancing_ratio);
    }

    #[test]
    fn perturbed_pair_has_single_smp() {
        use crate::constants::{paper_runner_up, paper_smp_pair, perturbed_b0, PAPER_A0, PAPER_B21_SHIFT};
        let b = perturbed_b0(PAPER_B21_SHIFT);
        let cert = certify(&PAPER_A0, &b, &[paper_runner_up()]);
        assert_eq!(cert.verdict, Verdict::Certified, "{:?}", cert.verdict);
        assert!(!certify(&PAPER_A0, &b, &paper_smp_pair()).verdict.is_certified());
    }

    #[test]
    fn complex_check_on_paper_pair() {
        use crate::mat2::CMat2;
        use num_complex::Complex64;
        let cert = paper_certificate();
        let (a, b) = (cert.a.to_complex(), cert.b.to_complex());
        assert!(certify_complex(&a, &b, &cert));
        let bump = |m: &CMat2, eps: f64| {
            let mut out = *m;
            for (k, e) in out.0.iter_mut().flatten().enumerate() {
                let t = k as f64 + 1.0;
                *e += Complex64::new(eps * t.sin(), eps * t.cos());
            }
            out
        };
        assert!(certify_complex(&bump(&a, 1e-6), &bump(&b, 1e-6), &cert));
        assert!(!certify_complex(&bump(&a, 1e-1), &bump(&b, 1e-1), &cert));
    }
}
