#![allow(dead_code)]

use grassmann_core::atlas::{chart_inverse, in_chart_domain, ChartFlavor, ChartId, ChartPoint};
use grassmann_core::operator::{Mat, Operator};
use grassmann_core::random::{gaussian_matrix, haar_unitary, seeded_rng};
use grassmann_core::subspace::Subspace;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SPLIT_MARGIN: f64 = 1e-3;
pub const DOMAIN_MARGIN: f64 = 1e-2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    seeded_rng(seed)
}

pub fn random_subspace(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Subspace {
    Subspace::from_spanning(&gaussian_matrix(rng, n, k)).unwrap()
}

pub fn random_chart(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ChartId {
    loop {
        let f = random_subspace(rng, n, k);
        let g = random_subspace(rng, n, n - k);
        if let Ok(chart) = ChartId::with_tol_split(f, g, ChartFlavor::General, SPLIT_MARGIN) {
            return chart;
        }
    }
}

pub fn random_hilbert_chart(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ChartId {
    ChartId::hilbert(random_subspace(rng, n, k)).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Operator {
    Operator::new(gaussian_matrix(rng, rows, cols) * Complex64::new(scale, 0.0))
}

pub fn random_point(rng: &mut ChaCha8Rng, chart: &ChartId, scale: f64) -> ChartPoint {
    let k = chart.rank();
    let m = chart.ambient_dim() - k;
    ChartPoint::new(chart.clone(), random_matrix(rng, m, k, scale)).unwrap()
}

/// A point of the first chart that lies comfortably inside every other chart.
pub fn point_in_all(rng: &mut ChaCha8Rng, charts: &[ChartId]) -> ChartPoint {
    loop {
        let scale = rng.random_range(0.1..1.0);
        let pt = random_point(rng, &charts[0], scale);
        let h = chart_inverse(&pt);
        if charts[1..]
            .iter()
            .all(|c| in_chart_domain(&h, c).unwrap().conditioning > DOMAIN_MARGIN)
        {
            return pt;
        }
    }
}

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

pub fn rel_err(got: &Mat, want: &Mat) -> f64 {
    (got - want).norm() / (1.0 + want.norm())
}
