//! Hard-coded reference data: the explicit chiral-SMP example pair and the
//! table of further trace tuples with chiral SMPs.

use crate::mat2::{Mat2, Tuple5};
use crate::words::{w, Word};

/// `A₀` of the explicit example.
pub const PAPER_A0: Mat2 = Mat2([[0.81427, -0.32898], [0.73419, 0.50393]]);
/// `B₀` of the explicit example.
pub const PAPER_B0: Mat2 = Mat2([[-0.06078, 1.01008], [-0.88368, -0.26830]]);

/// Published balancing ratio between the eigenvectors of `A²BAB²` and
/// `B²ABA²` (Euclidean lengths 1 and 0.885).
pub const PAPER_BALANCING_RATIO: f64 = 0.885;

/// Published leading eigenvectors of `A²BAB²` and `B²ABA²` after balancing.
pub const PAPER_V4: [f64; 2] = [0.63620, 0.77152];
pub const PAPER_V9: [f64; 2] = [0.88452, 0.02929];

/// Dominant eigenvalue of `A₀²B₀A₀B₀²`.
pub const PAPER_DOMINANT_EIGENVALUE: f64 = -0.99998;
/// Smallest distance from an interior generator image to the boundary.
pub const PAPER_MIN_MARGIN: f64 = 7.6e-4;
/// Largest interior angle of the invariant polygon, degrees.
pub const PAPER_MAX_ANGLE_DEG: f64 = 175.8;
/// Vertex count of the invariant polygon (16 × 2).
pub const PAPER_VERTEX_COUNT: usize = 32;
/// Normalized spectral radius of the runner-up product `A³BA²B`.
pub const PAPER_RUNNER_UP_RHO: f64 = 0.99936;
/// Shift added to `B[1][0]` that makes `A³BA²B` the unique SMP.
pub const PAPER_B21_SHIFT: f64 = 0.005;

pub fn paper_smp_pair() -> [Word; 2] {
    [w("aababb"), w("bbabaa")]
}

pub fn paper_runner_up() -> Word {
    w("aaabaab")
}

/// `B₀` with `PAPER_B21_SHIFT` added to its `(2,1)` entry.
pub fn perturbed_b0(shift: f64) -> Mat2 {
    let mut b = PAPER_B0;
    b.0[1][0] += shift;
    b
}

/// A row of the table of trace tuples with chiral SMPs.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub smp: &'static str,
    pub tuple: Tuple5,
    /// Half the vertex count of the published invariant polygon.
    pub n: usize,
}

pub fn table_rows() -> Vec<TableRow> {
    let row = |smp, x, y, z, u, v, n| TableRow {
        smp,
        tuple: Tuple5::new(x, y, z, u, v),
        n,
    };
    vec![
        row("a2b2ab", 3.38477, -0.84501, 5.58856, 4.29803, 5.99245, 18),
        row("a2b2ab", -1.81325, 3.83802, 8.57711, 8.79352, 7.69271, 18),
        row("a3bab2", -0.28009, 2.51662, -9.78050, 7.09393, 3.76472, 34),
        row("a3bab2", -2.41561, 4.01089, -10.27036, 8.39182, 4.16903, 40),
        row("a2b2ab3", -2.27713, -4.85077, -3.83135, 7.50043, 7.58161, 19),
        row("a2b2ab3", -2.46102, -5.50086, -4.86349, 9.90656, 9.80116, 23),
        row("a2ba2bab2", 2.48264, -0.68806, 3.67748, 2.74344, 3.59137, 30),
        row("a2ba2bab2", 3.16180, -0.93207, 5.83803, 4.74510, 5.58561, 30),
    ]
}
