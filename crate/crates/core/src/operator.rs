//! Dense complex operators between finite-dimensional coordinate spaces.
//!
//! [`Operator`] wraps a `DMatrix<Complex64>` together with optional domain and
//! codomain labels. Labels are bookkeeping only: when both sides of a
//! composition carry labels they must agree, otherwise composition fails with
//! [`Error::LabelMismatch`].
//!
//! The free functions at the bottom (`solve`, `solve_right`,
//! `singular_values`, `orthonormalize`) are the numerical kernels shared by
//! the rest of the crate. No inverse is ever formed outside of them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat = DMatrix<Complex64>;

/// Relative pivot threshold below which an LU factorization is treated as
/// singular.
pub const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: Mat,
    domain: Option<String>,
    codomain: Option<String>,
}

impl From<Mat> for Operator {
    fn from(mat: Mat) -> Self {
        Self::new(mat)
    }
}

impl Operator {
    pub fn new(mat: Mat) -> Self {
        Self {
            mat,
            domain: None,
            codomain: None,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(Mat::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Mat::identity(n, n))
    }

    /// Rectangular diagonal operator with real diagonal entries.
    pub fn from_real_diagonal(rows: usize, cols: usize, diag: &[f64]) -> Self {
        let mut mat = Mat::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            mat[(i, i)] = Complex64::new(*d, 0.0);
        }
        Self::new(mat)
    }

    /// Builds an operator from real entries given row by row.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::new(Mat::from_fn(nrows, ncols, |i, j| {
            Complex64::new(rows[i][j], 0.0)
        })))
    }

    pub fn with_labels(mut self, domain: impl Into<String>, codomain: impl Into<String>) -> Self {
        self.domain = Some(domain.into());
        self.codomain = Some(codomain.into());
        self
    }

    pub fn domain_label(&self) -> Option<&str> {
        self.domain.as_deref()
    }

    pub fn codomain_label(&self) -> Option<&str> {
        self.codomain.as_deref()
    }

    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn into_matrix(self) -> Mat {
        self.mat
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        if let (Some(expected), Some(found)) = (&self.domain, &rhs.codomain) {
            if expected != found {
                return Err(Error::LabelMismatch {
                    expected: expected.clone(),
                    found: found.clone(),
                });
            }
        }
        Ok(Operator {
            mat: &self.mat * &rhs.mat,
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    /// Hermitian adjoint. Only meaningful for orthogonal geometry; dual maps
    /// use [`Operator::transpose`].
    pub fn adjoint(&self) -> Operator {
        Operator {
            mat: self.mat.adjoint(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        }
    }

    /// Bilinear transpose, the dual map under the trace pairing.
    pub fn transpose(&self) -> Operator {
        Operator {
            mat: self.mat.transpose(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        }
    }

    pub fn trace(&self) -> Result<Complex64> {
        if self.rows() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "trace of non-square {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(self.mat.trace())
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.mat)
    }

    /// The leading `rows x cols` block, labels dropped.
    pub fn top_left(&self, rows: usize, cols: usize) -> Result<Operator> {
        if rows > self.rows() || cols > self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "block {rows}x{cols} exceeds {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(Operator::new(
            self.mat.view((0, 0), (rows, cols)).into_owned(),
        ))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        max_abs(&(&self.mat - &other.mat))
    }
}

/// Largest entry modulus; zero for empty matrices.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values, nonincreasing. Empty matrices have none.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value; `+inf` for an empty square matrix, zero when
/// `m` has fewer rows than columns.
pub fn sigma_min(m: &Mat) -> f64 {
    if m.ncols() == 0 {
        return f64::INFINITY;
    }
    if m.nrows() < m.ncols() {
        return 0.0;
    }
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Solves `lhs * X = rhs` through a partial-pivot LU factorization.
pub fn solve(lhs: &Mat, rhs: &Mat) -> Result<Mat> {
    if lhs.nrows() != lhs.ncols() || lhs.nrows() != rhs.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "solve with {}x{} system and {}x{} right-hand side",
            lhs.nrows(),
            lhs.ncols(),
            rhs.nrows(),
            rhs.ncols()
        )));
    }
    if lhs.nrows() == 0 {
        return Ok(Mat::zeros(0, rhs.ncols()));
    }
    let lu = lhs.clone().lu();
    let u = lu.u();
    let pivots: Vec<f64> = u.diagonal().iter().map(|z| z.norm()).collect();
    let max_pivot = pivots.iter().copied().fold(0.0, f64::max);
    let min_pivot = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    if max_pivot == 0.0 || min_pivot <= PIVOT_TOL * max_pivot {
        return Err(Error::Singular);
    }
    let x = lu.solve(rhs).ok_or(Error::Singular)?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(x)
}

/// Computes `lhs * d⁻¹` as the transpose of a left solve.
pub fn solve_right(lhs: &Mat, d: &Mat) -> Result<Mat> {
    Ok(solve(&d.transpose(), &lhs.transpose())?.transpose())
}

/// Thin QR orthonormalization with the Gram–Schmidt sign convention
/// (diagonal of R real and nonnegative), so the result is unique for
/// full-column-rank input.
pub fn orthonormalize(m: &Mat) -> Mat {
    if m.ncols() == 0 {
        return Mat::zeros(m.nrows(), 0);
    }
    let qr = m.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols().min(r.nrows()) {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d / n;
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Realifies `X + iY` into the real block matrix `[[X, -Y], [Y, X]]`.
pub fn realify(m: &Mat) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}
