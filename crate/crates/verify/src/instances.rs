//! Seeded random instances.

use grassmann_core::atlas::{chart_inverse, in_chart_domain, ChartFlavor, ChartId, ChartPoint};
use grassmann_core::operator::{Mat, Operator};
use grassmann_core::random::{gaussian_matrix, haar_unitary};
use grassmann_core::subspace::Subspace;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Rejection threshold on the smallest singular value of `[B_F | B_G]`.
pub const SPLIT_MARGIN: f64 = 1e-3;
/// Points used across several charts sit at least this far inside each.
pub const DOMAIN_MARGIN: f64 = 1e-2;
const MAX_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("no acceptable instance after {MAX_REJECTIONS} draws")]
pub struct Exhausted;

pub fn subspace(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Subspace {
    Subspace::from_spanning(&gaussian_matrix(rng, n, k)).expect("Gaussian matrices have full rank")
}

/// Rank in `1..n`.
pub fn rank(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.random_range(1..n)
}

pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    gaussian_matrix(rng, rows, cols)
}

pub fn chart(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Result<ChartId, Exhausted> {
    for _ in 0..MAX_REJECTIONS {
        let f = subspace(rng, n, k);
        let g = subspace(rng, n, n - k);
        if let Ok(c) = ChartId::with_tol_split(f, g, ChartFlavor::General, SPLIT_MARGIN) {
            return Ok(c);
        }
    }
    Err(Exhausted)
}

pub fn charts(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    count: usize,
) -> Result<Vec<ChartId>, Exhausted> {
    (0..count).map(|_| chart(rng, n, k)).collect()
}

pub fn hilbert_chart(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ChartId {
    ChartId::hilbert(subspace(rng, n, k)).expect("orthogonal complement splits")
}

pub fn point(rng: &mut ChaCha8Rng, chart: &ChartId, scale: f64) -> ChartPoint {
    let k = chart.rank();
    let a = gaussian_matrix(rng, chart.ambient_dim() - k, k) * Complex64::new(scale, 0.0);
    ChartPoint::new(chart.clone(), Operator::new(a)).expect("shapes match the chart")
}

/// A point of `charts[0]` lying inside every other chart with margin.
pub fn point_in_all(rng: &mut ChaCha8Rng, charts: &[ChartId]) -> Result<ChartPoint, Exhausted> {
    point_in_all_with_margin(rng, charts, DOMAIN_MARGIN)
}

pub fn point_in_all_with_margin(
    rng: &mut ChaCha8Rng,
    charts: &[ChartId],
    margin: f64,
) -> Result<ChartPoint, Exhausted> {
    for _ in 0..MAX_REJECTIONS {
        let scale = rng.random_range(0.1..1.0);
        let pt = point(rng, &charts[0], scale);
        let h = chart_inverse(&pt);
        if charts[1..]
            .iter()
            .all(|c| in_chart_domain(&h, c).is_ok_and(|d| d.conditioning > margin))
        {
            return Ok(pt);
        }
    }
    Err(Exhausted)
}

/// A subspace inside the domain of `chart` with margin.
pub fn subspace_in(rng: &mut ChaCha8Rng, chart: &ChartId) -> Result<Subspace, Exhausted> {
    for _ in 0..MAX_REJECTIONS {
        let h = subspace(rng, chart.ambient_dim(), chart.rank());
        if in_chart_domain(&h, chart).is_ok_and(|d| d.conditioning > DOMAIN_MARGIN) {
            return Ok(h);
        }
    }
    Err(Exhausted)
}

/// `diag(U₋, U₊)` on a polarized space laid out minus-first.
pub fn block_unitary(rng: &mut ChaCha8Rng, n_minus: usize, n_plus: usize) -> Mat {
    let um = haar_unitary(rng, n_minus);
    let up = haar_unitary(rng, n_plus);
    let n = n_minus + n_plus;
    let mut u = Mat::zeros(n, n);
    u.view_mut((0, 0), (n_minus, n_minus)).copy_from(&um);
    u.view_mut((n_minus, n_minus), (n_plus, n_plus))
        .copy_from(&up);
    u
}

/// A chart `(F, G)` and a subspace `H` such that `π_G(F)|_H` has smallest
/// singular value exactly `conditioning` in orthonormal bases.
///
/// `H` is spanned by `c f₁ + s g₁, f₂, …, f_k` with `c = conditioning`,
/// `c² + s² = 1`, in the Hilbert chart of `F`.
pub fn near_boundary(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    conditioning: f64,
) -> (ChartId, Subspace) {
    let u = haar_unitary(rng, n);
    let f = Subspace::from_orthonormal(u.columns(0, k).into_owned()).expect("unitary columns");
    let chart = ChartId::hilbert(f).expect("orthogonal complement splits");
    let c = conditioning;
    let s = (1.0 - c * c).sqrt();
    let mut basis = u.columns(0, k).into_owned();
    let tilted = u.column(0) * Complex64::new(c, 0.0) + u.column(k) * Complex64::new(s, 0.0);
    basis.set_column(0, &tilted);
    let h = Subspace::from_orthonormal(basis).expect("tilted frame stays orthonormal");
    (chart, h)
}

/// Two subspaces of complementary dimension whose joint frame has smallest
/// singular value about `gap`.
pub fn nearly_split(rng: &mut ChaCha8Rng, n: usize, k: usize, gap: f64) -> (Subspace, Subspace) {
    let u = haar_unitary(rng, n);
    let f = Subspace::from_orthonormal(u.columns(0, k).into_owned()).expect("unitary columns");
    // g₁ makes angle θ with f₁, so σ_min([f₁ g₁]) = √(1 − cos θ) ≈ θ/√2.
    let theta = gap * std::f64::consts::SQRT_2;
    let mut g = u.columns(k, n - k).into_owned();
    let tilted = u.column(0) * Complex64::new(theta.cos(), 0.0)
        + u.column(k) * Complex64::new(theta.sin(), 0.0);
    g.set_column(0, &tilted);
    let g = Subspace::from_orthonormal(g).expect("tilted frame stays orthonormal");
    (f, g)
}
