//! Schatten norms, the operator norm, and singular-tail diagnostics for the
//! compact ideal.
//!
//! Singular values always come from an SVD, never from eigenvalues of `TᴴT`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{singular_values, Mat, Operator};

/// Schatten index `p = 0` stands for the compact ideal.
pub const COMPACT: f64 = 0.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchattenReport {
    /// Index in `{0} ∪ [1, ∞)`.
    pub p: f64,
    /// `(Σ σ_k^p)^{1/p}` for `p ≥ 1`. For `p = 0` this is the largest
    /// singular value, the norm the compact ideal inherits; membership in the
    /// ideal itself is judged from a [`SingularTail`].
    pub value: f64,
    /// Nonincreasing.
    pub singular_values: Vec<f64>,
}

/// `‖σ‖_p` of an already computed singular value vector.
pub fn schatten_from_singular_values(sv: &[f64], p: f64) -> Result<f64> {
    check_index(p)?;
    if p == COMPACT {
        return Ok(sv.iter().copied().fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(sv.iter().sum());
    }
    let scale = sv.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = sv.iter().map(|s| (s / scale).powf(p)).sum();
    Ok(scale * sum.powf(1.0 / p))
}

fn check_index(p: f64) -> Result<()> {
    if p == COMPACT || (p.is_finite() && p >= 1.0) {
        Ok(())
    } else {
        Err(Error::InvalidIndex(p))
    }
}

/// The Schatten `p`-norm of `t`, `p ≥ 1` finite.
pub fn schatten_norm(t: &Operator, p: f64) -> Result<SchattenReport> {
    if p == COMPACT {
        return Err(Error::InvalidIndex(p));
    }
    schatten_report(t.matrix(), p)
}

/// Like [`schatten_norm`] but also accepts `p = 0`.
pub fn schatten_report(m: &Mat, p: f64) -> Result<SchattenReport> {
    check_index(p)?;
    let singular_values = singular_values(m);
    let value = schatten_from_singular_values(&singular_values, p)?;
    Ok(SchattenReport {
        p,
        value,
        singular_values,
    })
}

pub(crate) fn schatten_value(m: &Mat, p: f64) -> Result<f64> {
    schatten_from_singular_values(&singular_values(m), p)
}

/// Largest singular value.
pub fn operator_norm(t: &Operator) -> f64 {
    t.singular_values().first().copied().unwrap_or(0.0)
}

/// Tail statistics of a family of truncations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularTail {
    /// Strictly increasing truncation sizes (row counts).
    pub dims: Vec<usize>,
    pub cutoff: usize,
    /// `Σ_{k > cutoff} σ_k` for each truncation (1-based `k`).
    pub tail_norms: Vec<f64>,
}

impl SingularTail {
    /// Largest pairwise difference between recorded tails.
    pub fn spread(&self) -> f64 {
        let max = self
            .tail_norms
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let min = self
            .tail_norms
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if self.tail_norms.is_empty() {
            0.0
        } else {
            max - min
        }
    }
}

/// Records `Σ_{k>cutoff} σ_k` along a truncation ladder.
///
/// Each operator must be the leading block of the next one, exactly.
pub fn compactness_tail(family: &[Operator], cutoff: usize) -> Result<SingularTail> {
    for pair in family.windows(2) {
        let (small, large) = (&pair[0], &pair[1]);
        if small.rows() >= large.rows() || small.cols() > large.cols() {
            return Err(Error::LadderMismatch(format!(
                "{}x{} does not precede {}x{}",
                small.rows(),
                small.cols(),
                large.rows(),
                large.cols()
            )));
        }
        let block = large.top_left(small.rows(), small.cols())?;
        if block.matrix() != small.matrix() {
            return Err(Error::LadderMismatch(format!(
                "{}x{} truncation is not the leading block of the {}x{} one",
                small.rows(),
                small.cols(),
                large.rows(),
                large.cols()
            )));
        }
    }
    let tail_norms = family
        .iter()
        .map(|t| t.singular_values().iter().skip(cutoff).sum())
        .collect();
    Ok(SingularTail {
        dims: family.iter().map(Operator::rows).collect(),
        cutoff,
        tail_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> Operator {
        Operator::from_real_diagonal(d.len(), d.len(), d)
    }

    #[test]
    fn diagonal_schatten_norms() {
        let t = diag(&[1.0, 0.5, 0.25]);
        assert!((schatten_norm(&t, 1.0).unwrap().value - 1.75).abs() < 1e-15);
        let two = schatten_norm(&t, 2.0).unwrap().value;
        assert!((two - 21f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn zero_operator_has_zero_norm() {
        let z = Operator::zeros(3, 2);
        for p in [1.0, 2.0, 3.5] {
            assert_eq!(schatten_norm(&z, p).unwrap().value, 0.0);
        }
        assert_eq!(operator_norm(&z), 0.0);
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&Operator::identity(5)) - 1.0).abs() < 1e-15);
        assert!((operator_norm(&diag(&[3.0, 1.0])) - 3.0).abs() < 1e-15);
        let col = Operator::from_real_rows(&[vec![3.0], vec![4.0]]).unwrap();
        assert!((operator_norm(&col) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_indices_below_one() {
        let t = diag(&[1.0]);
        assert_eq!(schatten_norm(&t, 0.5), Err(Error::InvalidIndex(0.5)));
        assert_eq!(schatten_norm(&t, 0.0), Err(Error::InvalidIndex(0.0)));
        assert!(schatten_norm(&t, f64::INFINITY).is_err());
        assert_eq!(schatten_report(t.matrix(), 0.0).unwrap().value, 1.0);
    }

    #[test]
    fn report_is_sorted() {
        let r = schatten_norm(&diag(&[0.1, 2.0, 0.5]), 2.0).unwrap();
        assert_eq!(r.singular_values.len(), 3);
        assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let recomputed: f64 = r.singular_values.iter().map(|s| s * s).sum::<f64>().sqrt();
        assert!((recomputed - r.value).abs() <= 1e-12 * r.value);
    }

    #[test]
    fn geometric_tails_are_cauchy() {
        let r: f64 = 0.5;
        let family: Vec<Operator> = [16usize, 32, 64]
            .iter()
            .map(|&n| diag(&(0..n).map(|k| r.powi(k as i32)).collect::<Vec<_>>()))
            .collect();
        let tail = compactness_tail(&family, 8).unwrap();
        assert_eq!(tail.dims, vec![16, 32, 64]);
        assert!(tail.spread() <= 2.0 * r.powi(8));
    }

    #[test]
    fn identity_tails_grow_linearly() {
        let family: Vec<Operator> = [16usize, 32, 64]
            .iter()
            .map(|&n| Operator::identity(n))
            .collect();
        let tail = compactness_tail(&family, 8).unwrap();
        for (d, t) in tail.dims.iter().zip(&tail.tail_norms) {
            assert!((t - (*d as f64 - 8.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_tails() {
        let family: Vec<Operator> = [4usize, 8].iter().map(|&n| Operator::zeros(n, n)).collect();
        let tail = compactness_tail(&family, 2).unwrap();
        assert_eq!(tail.tail_norms, vec![0.0, 0.0]);
    }

    #[test]
    fn inconsistent_ladder_is_rejected() {
        let family = vec![diag(&[1.0, 0.5]), diag(&[1.0, 0.25, 0.1])];
        assert!(matches!(
            compactness_tail(&family, 1),
            Err(Error::LadderMismatch(_))
        ));
        let shrinking = vec![diag(&[1.0, 0.5]), diag(&[1.0])];
        assert!(matches!(
            compactness_tail(&shrinking, 1),
            Err(Error::LadderMismatch(_))
        ));
    }
}
