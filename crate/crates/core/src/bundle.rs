//! Tangent, cotangent and precotangent fibers over chart points.
//!
//! In a chart `(F, G)` at the point `A`, tangent vectors are operators
//! `X : F → G` and covectors are operators `μ : G → F`, paired by the
//! bilinear trace `⟨μ, X⟩ = Tr(μ X)`. A covector can equally be held as a
//! finite sum of rank-one tensors `Σ x_i ⊗ y_i` with `x_i` in `F`
//! coordinates and `y_i` in `G` coordinates (the dual of `G` is identified
//! with `G` through the chart basis), paired with `X` by `Σ ⟨X x_i, y_i⟩`.
//!
//! The tangent fiber map of a chart change is the derivative of the
//! linear-fractional transition,
//!
//! ```text
//! X ↦ (L22 X − A' L12 X) D⁻¹,   D = L11 + L12 A,   A' = ψ(A)
//! ```
//!
//! so it is a sum of two left/right multiplications. The cotangent map is
//! the trace-transpose of the fiber map running the other way, which in
//! closed form reads `μ ↦ D μ (L̃22 − A L̃12)` with `L̃` the inverse frame
//! change.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::atlas::{moebius, transition_base, ChartId, ChartPoint, FrameChange};
use crate::error::{Error, Result};
use crate::operator::{max_abs, solve, solve_right, Mat, Operator};
use crate::random::DecayProfile;
use crate::restricted::{precotangent_fiber, FiberClass, GrassmannModel};

pub type Vector = DVector<Complex64>;

/// Relative residual allowed when checking caller-supplied multiplier
/// factors against the tangent fiber map.
pub const FACTOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    at: ChartPoint,
    x: Operator,
}

impl TangentVector {
    pub fn new(at: ChartPoint, x: Operator) -> Result<Self> {
        let a = at.coords();
        if x.rows() != a.rows() || x.cols() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "tangent vector must be {}x{}, got {}x{}",
                a.rows(),
                a.cols(),
                x.rows(),
                x.cols()
            )));
        }
        Ok(Self { at, x })
    }

    pub fn at(&self) -> &ChartPoint {
        &self.at
    }

    pub fn fiber(&self) -> &Operator {
        &self.x
    }
}

/// What a covector's coordinate operator is meant to emulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovectorClass {
    /// Plain element of the cotangent fiber.
    Unrestricted,
    /// Element of a precotangent fiber, generated with a decay profile that
    /// emulates membership in `fiber`.
    Precotangent {
        model: GrassmannModel,
        fiber: FiberClass,
        profile: DecayProfile,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Covector {
    at: ChartPoint,
    mu: Operator,
    class: CovectorClass,
}

fn check_covector_shape(at: &ChartPoint, mu: &Operator) -> Result<()> {
    let a = at.coords();
    if mu.rows() != a.cols() || mu.cols() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "covector must be {}x{}, got {}x{}",
            a.cols(),
            a.rows(),
            mu.rows(),
            mu.cols()
        )));
    }
    Ok(())
}

impl Covector {
    pub fn new(at: ChartPoint, mu: Operator) -> Result<Self> {
        check_covector_shape(&at, &mu)?;
        Ok(Self {
            at,
            mu,
            class: CovectorClass::Unrestricted,
        })
    }

    /// A covector in the precotangent fiber of `model`. Fails with
    /// [`Error::PredualUnavailable`] for the compact-operator model.
    pub fn precotangent(
        at: ChartPoint,
        mu: Operator,
        model: GrassmannModel,
        profile: DecayProfile,
    ) -> Result<Self> {
        let fiber = precotangent_fiber(model)?;
        profile.validate()?;
        check_covector_shape(&at, &mu)?;
        Ok(Self {
            at,
            mu,
            class: CovectorClass::Precotangent {
                model,
                fiber,
                profile,
            },
        })
    }

    pub fn at(&self) -> &ChartPoint {
        &self.at
    }

    pub fn fiber(&self) -> &Operator {
        &self.mu
    }

    pub fn class(&self) -> CovectorClass {
        self.class
    }
}

/// A covector as a finite sum `Σ x_i ⊗ y_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorCovector {
    at: ChartPoint,
    terms: Vec<(Vector, Vector)>,
}

impl TensorCovector {
    pub fn new(at: ChartPoint, terms: Vec<(Vector, Vector)>) -> Result<Self> {
        let k = at.chart().rank();
        let m = at.chart().ambient_dim() - k;
        if let Some((x, y)) = terms.iter().find(|(x, y)| x.len() != k || y.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "tensor term ({}, {}) does not match chart dimensions ({k}, {m})",
                x.len(),
                y.len()
            )));
        }
        Ok(Self { at, terms })
    }

    pub fn at(&self) -> &ChartPoint {
        &self.at
    }

    pub fn terms(&self) -> &[(Vector, Vector)] {
        &self.terms
    }
}

/// The tangent fiber map of one chart change at one point, with the
/// denominator kept unfactored so every application is a linear solve.
#[derive(Debug, Clone)]
struct FiberMap {
    target_point: ChartPoint,
    l12: Mat,
    l22: Mat,
    d: Mat,
}

impl FiberMap {
    fn new(pt: &ChartPoint, target: &ChartId) -> Result<Self> {
        let m = moebius(pt, target)?;
        let target_point = ChartPoint::new(target.clone(), Operator::new(m.a_new))?;
        Ok(Self {
            target_point,
            l12: m.change.l12,
            l22: m.change.l22,
            d: m.d,
        })
    }

    fn apply(&self, x: &Mat) -> Result<Mat> {
        let a_new = self.target_point.coords().matrix();
        let numerator = &self.l22 * x - a_new * (&self.l12 * x);
        solve_right(&numerator, &self.d)
    }
}

/// `(ψ(A), Dψ_A[X])`.
pub fn transition_tangent(v: &TangentVector, target: &ChartId) -> Result<TangentVector> {
    if v.at.chart() == target {
        return Ok(v.clone());
    }
    let map = FiberMap::new(&v.at, target)?;
    let x = map.apply(v.x.matrix())?;
    TangentVector::new(map.target_point, Operator::new(x))
}

/// `(ψ(A), μ')` with `μ'` the trace-transpose of the inverse-direction
/// tangent fiber map applied to `μ`. The class tag is carried over.
pub fn transition_cotangent(c: &Covector, target: &ChartId) -> Result<Covector> {
    if c.at.chart() == target {
        return Ok(c.clone());
    }
    let source = c.at.chart();
    let m = moebius(&c.at, target)?;
    let reverse = FrameChange::new(target, source)?;
    let a = c.at.coords().matrix();
    let right = &reverse.l22 - a * &reverse.l12;
    let mu = &m.d * c.mu.matrix() * right;
    Ok(Covector {
        at: ChartPoint::new(target.clone(), Operator::new(m.a_new))?,
        mu: Operator::new(mu),
        class: c.class,
    })
}

fn same_point(a: &ChartPoint, b: &ChartPoint) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

/// `Tr(μ X)`.
pub fn pair_trace(c: &Covector, v: &TangentVector) -> Result<Complex64> {
    same_point(&c.at, &v.at)?;
    let over_f = (c.mu.matrix() * v.x.matrix()).trace();
    let over_g = (v.x.matrix() * c.mu.matrix()).trace();
    debug_assert!(
        (over_f - over_g).norm() <= 1e-10 * (1.0 + over_f.norm()),
        "Tr(μX) = {over_f} but Tr(Xμ) = {over_g}"
    );
    Ok(over_f)
}

/// `Σ_i ⟨X x_i, y_i⟩` with the bilinear coordinate pairing.
pub fn pair_tensor(v: &TangentVector, tc: &TensorCovector) -> Result<Complex64> {
    same_point(&v.at, &tc.at)?;
    Ok(tc
        .terms
        .iter()
        .map(|(x, y)| (v.x.matrix() * x).dot(y))
        .sum())
}

/// `μ = Σ x_i y_iᵀ`.
pub fn tensor_to_operator(tc: &TensorCovector) -> Covector {
    let k = tc.at.chart().rank();
    let m = tc.at.chart().ambient_dim() - k;
    let mu = tc
        .terms
        .iter()
        .fold(Mat::zeros(k, m), |acc, (x, y)| acc + x * y.transpose());
    Covector {
        at: tc.at.clone(),
        mu: Operator::new(mu),
        class: CovectorClass::Unrestricted,
    }
}

/// SVD-minimal rank-one decomposition, `x_i = σ_i u_i`, `y_i = conj(v_i)`.
/// The zero covector maps to the empty sum.
pub fn operator_to_tensor(c: &Covector) -> TensorCovector {
    let mu = c.mu.matrix();
    let mut terms = Vec::new();
    if mu.nrows() > 0 && mu.ncols() > 0 {
        let svd = mu.clone().svd(true, true);
        let (u, v_t) = (svd.u.expect("requested U"), svd.v_t.expect("requested Vᵀ"));
        let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let cutoff = top * f64::EPSILON * mu.nrows().max(mu.ncols()) as f64;
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s > cutoff && s > 0.0 {
                let x: Vector = u.column(i) * Complex64::new(s, 0.0);
                let y: Vector = v_t.row(i).transpose();
                terms.push((x, y));
            }
        }
    }
    TensorCovector {
        at: c.at.clone(),
        terms,
    }
}

/// A pair `(S, T)` of right and left multipliers: the fiber map contains
/// the term `X ↦ T X S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers {
    pub s: Operator,
    pub t: Operator,
}

/// The two product-rule multipliers of the fiber map from `target` back to
/// the chart of `pt`, evaluated at `ψ(A)`:
/// `X' ↦ L̃22 X' D̃⁻¹ + (−Ã L̃12) X' D̃⁻¹`.
pub fn cotangent_factors(pt: &ChartPoint, target: &ChartId) -> Result<Vec<Multipliers>> {
    let there = transition_base(pt, target)?;
    let back = moebius(&there, pt.chart())?;
    let k = pt.chart().rank();
    let s = solve(&back.d, &Mat::identity(k, k))?;
    let t2 = -(&back.a_new * &back.change.l12);
    Ok(vec![
        Multipliers {
            s: Operator::new(s.clone()),
            t: Operator::new(back.change.l22),
        },
        Multipliers {
            s: Operator::new(s),
            t: Operator::new(t2),
        },
    ])
}

/// Pushes a tensor covector through a chart change term by term:
/// `(x_i, y_i) ↦ (S_j x_i, T_jᵀ y_i)`.
///
/// The multipliers must realize the fiber map from `target` back to the
/// chart of `tc`; this is checked on the elementary basis of the target
/// fiber before anything is pushed.
pub fn pushforward_tensor(
    tc: &TensorCovector,
    factors: &[Multipliers],
    target: &ChartId,
) -> Result<TensorCovector> {
    let there = transition_base(&tc.at, target)?;
    let back = FiberMap::new(&there, tc.at.chart())?;
    let k = target.rank();
    let m = target.ambient_dim() - k;
    for f in factors {
        if f.s.rows() != k || f.s.cols() != k || f.t.rows() != m || f.t.cols() != m {
            return Err(Error::FactorMismatch {
                residual: f64::INFINITY,
            });
        }
    }
    let mut residual: f64 = 0.0;
    for a in 0..m {
        for b in 0..k {
            let mut probe = Mat::zeros(m, k);
            probe[(a, b)] = Complex64::new(1.0, 0.0);
            let expected = back.apply(&probe)?;
            let got = factors.iter().fold(Mat::zeros(m, k), |acc, f| {
                acc + f.t.matrix() * &probe * f.s.matrix()
            });
            residual = residual.max(max_abs(&(&got - &expected)) / (1.0 + max_abs(&expected)));
        }
    }
    if residual > FACTOR_TOL {
        return Err(Error::FactorMismatch { residual });
    }
    let terms = tc
        .terms
        .iter()
        .flat_map(|(x, y)| {
            factors
                .iter()
                .map(move |f| (f.s.matrix() * x, f.t.matrix().transpose() * y))
        })
        .collect();
    Ok(TensorCovector { at: there, terms })
}
