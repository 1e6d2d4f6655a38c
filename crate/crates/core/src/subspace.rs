//! Points of the Grassmannian.
//!
//! A [`Subspace`] is stored through an orthonormal basis and its orthogonal
//! projector. Two subspaces are equal when their projectors are close in
//! operator norm; bases are never compared directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{orthonormalize, sigma_min, singular_values, solve, Mat, Operator};

/// Orthonormality tolerance for stored bases.
pub const TOL_ORTHO: f64 = 1e-12;
/// Default projector distance below which two subspaces are equal.
pub const TOL_EQ: f64 = 1e-10;
/// Default split threshold on the smallest singular value of `[B_F | B_G]`.
pub const TOL_SPLIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Operator,
    projector: Operator,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: Mat) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let defect = (gram - Mat::identity(k, k)).norm();
        if defect > TOL_ORTHO {
            return Err(Error::DimensionMismatch(format!(
                "basis columns are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Self::from_trusted(basis))
    }

    /// Orthonormalizes the columns of `spanning`, which must have full
    /// column rank.
    pub fn from_spanning(spanning: &Mat) -> Result<Self> {
        let sv = singular_values(spanning);
        let top = sv.first().copied().unwrap_or(0.0);
        if spanning.ncols() > spanning.nrows()
            || sv
                .last()
                .is_some_and(|&s| s <= 1e-12 * top.max(f64::MIN_POSITIVE))
        {
            return Err(Error::DimensionMismatch(format!(
                "{} spanning vectors are not linearly independent",
                spanning.ncols()
            )));
        }
        Ok(Self::from_trusted(orthonormalize(spanning)))
    }

    pub(crate) fn from_orthonormal_unchecked(basis: Mat) -> Self {
        Self::from_trusted(basis)
    }

    /// Operator norm of `p - q`.
    pub fn distance_of_projectors(p: &Mat, q: &Mat) -> f64 {
        singular_values(&(p - q)).first().copied().unwrap_or(0.0)
    }

    fn from_trusted(basis: Mat) -> Self {
        let projector = &basis * basis.adjoint();
        Self {
            basis: Operator::new(basis),
            projector: Operator::new(projector),
        }
    }

    /// Span of the standard basis vectors with the given indices, in order.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i >= ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "coordinate index outside ambient dimension {ambient_dim}"
            )));
        }
        let mut basis = Mat::zeros(ambient_dim, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            basis[(i, j)] = Complex64::new(1.0, 0.0);
        }
        Self::from_orthonormal(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat {
        self.basis.matrix()
    }

    pub fn projector(&self) -> &Mat {
        self.projector.matrix()
    }

    /// Operator-norm distance between orthogonal projectors.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch("different ambient spaces".into()));
        }
        Ok(Self::distance_of_projectors(
            self.projector(),
            other.projector(),
        ))
    }

    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.distance(other).is_ok_and(|d| d <= tol)
    }

    /// Orthogonal complement. Each basis column is rotated so that its
    /// largest-modulus entry is real and positive.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let k = self.dim();
        let mut stacked = Mat::zeros(n, k + n);
        stacked.view_mut((0, 0), (n, k)).copy_from(self.basis());
        stacked.view_mut((0, k), (n, n)).fill_with_identity();
        let q = stacked.qr().q();
        let mut comp = q.columns(k, n - k).into_owned();
        for mut col in comp.column_iter_mut() {
            let pivot = col
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(Complex64::new(1.0, 0.0));
            if pivot.norm() > 0.0 {
                let phase = pivot.conj() / pivot.norm();
                col.iter_mut().for_each(|z| *z *= phase);
            }
        }
        Self::from_trusted(comp)
    }

    /// Applies an ambient unitary `u`: returns `u(self)`.
    pub fn transform(&self, u: &Mat) -> Result<Subspace> {
        if u.nrows() != self.ambient_dim() || u.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch("unitary size".into()));
        }
        Self::from_spanning(&(u * self.basis()))
    }
}

/// `[B_F | B_G]`, checked to be invertible with margin `tol_split`.
pub(crate) fn joint_frame(f: &Subspace, g: &Subspace, tol_split: f64) -> Result<Mat> {
    let n = f.ambient_dim();
    if g.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {} differ",
            n,
            g.ambient_dim()
        )));
    }
    let k = f.dim();
    if k + g.dim() != n {
        return Err(Error::SplitFailure {
            sigma_min: 0.0,
            tol: tol_split,
        });
    }
    let mut frame = Mat::zeros(n, n);
    frame.view_mut((0, 0), (n, k)).copy_from(f.basis());
    frame.view_mut((0, k), (n, n - k)).copy_from(g.basis());
    let s = sigma_min(&frame);
    if s <= tol_split {
        return Err(Error::SplitFailure {
            sigma_min: s,
            tol: tol_split,
        });
    }
    Ok(frame)
}

/// The projections `(π_G(F), π_F(G))` of the ambient space onto `F` along
/// `G` and onto `G` along `F`, as ambient operators.
pub fn oblique_projections(f: &Subspace, g: &Subspace) -> Result<(Operator, Operator)> {
    oblique_projections_with_tol(f, g, TOL_SPLIT)
}

pub fn oblique_projections_with_tol(
    f: &Subspace,
    g: &Subspace,
    tol_split: f64,
) -> Result<(Operator, Operator)> {
    let frame = joint_frame(f, g, tol_split)?;
    let n = f.ambient_dim();
    let k = f.dim();
    let coords = solve(&frame, &Mat::identity(n, n))?;
    let onto_f = f.basis() * coords.rows(0, k);
    let onto_g = g.basis() * coords.rows(k, n - k);
    Ok((Operator::new(onto_f), Operator::new(onto_g)))
}
