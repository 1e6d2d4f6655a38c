//! Reference computations that share no code path with the library
//! routines they check.

use grassmann_core::atlas::{transition_base, ChartId, ChartPoint};
use grassmann_core::error::Result;
use grassmann_core::operator::{realify, Mat, Operator};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Complex-step size. Far below the square root of machine epsilon, which
/// the complex step tolerates because it involves no subtraction.
pub const COMPLEX_STEP: f64 = 1e-20;
/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;

fn blocks(l: &Mat, k: usize) -> [Mat; 4] {
    let n = l.nrows();
    let m = n - k;
    [
        l.view((0, 0), (k, k)).into_owned(),
        l.view((0, k), (k, m)).into_owned(),
        l.view((k, 0), (m, k)).into_owned(),
        l.view((k, k), (m, m)).into_owned(),
    ]
}

fn lift(m: &DMatrix<f64>) -> Mat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Directional derivative of the transition `ψ(A) = (L21 + L22 A)(L11 + L12 A)⁻¹`
/// along `x`, by the complex step applied to the realified map.
///
/// The frame change is formed with an explicit inverse of the target frame,
/// the Möbius map is evaluated on real block matrices whose entries carry an
/// independent imaginary unit, and the derivative is read off the imaginary
/// part. The result is de-realified back to complex coordinates.
pub fn complex_step_tangent(pt: &ChartPoint, x: &Mat, target: &ChartId) -> Option<Mat> {
    let source = pt.chart();
    let k = source.rank();
    let l = target.frame().clone().try_inverse()? * source.frame();
    let [l11, l12, l21, l22] = blocks(&l, k).map(|b| lift(&realify(&b)));
    let a = realify(pt.coords().matrix());
    let dx = realify(x);
    let perturbed = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        Complex64::new(a[(i, j)], COMPLEX_STEP * dx[(i, j)])
    });
    let num = &l21 + &l22 * &perturbed;
    let den = &l11 + &l12 * &perturbed;
    // Y D = N  ⇔  Dᵀ Yᵀ = Nᵀ.
    let y = den.transpose().lu().solve(&num.transpose())?.transpose();
    let d = y.map(|z| z.im / COMPLEX_STEP);
    let (m, k) = (x.nrows(), x.ncols());
    Some(Mat::from_fn(m, k, |i, j| {
        Complex64::new(d[(i, j)], d[(i + m, j)])
    }))
}

/// `‖x‖ (ψ(A + h u) − ψ(A − h u)) / 2h` with `u = x / ‖x‖`, through the
/// library transition. Stepping along the unit direction keeps the
/// truncation error independent of the size of `x`.
pub fn central_difference_tangent(pt: &ChartPoint, x: &Mat, target: &ChartId) -> Result<Mat> {
    let size = x.norm();
    if size == 0.0 {
        return Ok(x.clone());
    }
    let step = x * Complex64::new(FD_STEP / size, 0.0);
    let at = |a: Mat| -> Result<Mat> {
        let moved = ChartPoint::new(pt.chart().clone(), Operator::new(a))?;
        Ok(transition_base(&moved, target)?.coords().matrix().clone())
    };
    let a = pt.coords().matrix();
    let plus = at(a + &step)?;
    let minus = at(a - &step)?;
    Ok((plus - minus) * Complex64::new(size / (2.0 * FD_STEP), 0.0))
}

/// `Σ_ij μ_ij X_ji`.
pub fn elementwise_trace(mu: &Mat, x: &Mat) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..mu.nrows() {
        for j in 0..mu.ncols() {
            acc += mu[(i, j)] * x[(j, i)];
        }
    }
    acc
}

/// Frobenius-relative difference `‖got − want‖ / (1 + ‖want‖)`.
pub fn rel_err(got: &Mat, want: &Mat) -> f64 {
    (got - want).norm() / (1.0 + want.norm())
}
