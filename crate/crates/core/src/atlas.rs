//! Chart atlas of the Grassmannian.
//!
//! A chart is indexed by an ordered pair `(F, G)` of complementary subspaces
//! of the ambient space. Its domain `Ω_G` consists of the subspaces `H` with
//! `H ⊕ G` equal to the whole space, and the chart sends such an `H` to the
//! operator `A : F → G` whose graph `{f + A f}` is `H`.
//!
//! Coordinates: `A` is stored as the `dim G × dim F` matrix taking
//! coefficients in the basis of `F` to coefficients in the basis of `G`.
//!
//! Chart changes are linear-fractional in these coordinates. Writing the
//! source frame `[B_F | B_G]` in the target frame `[B_F' | B_G']` as the
//! block matrix `L = [[L11, L12], [L21, L22]]`, the transition is
//!
//! ```text
//! ψ(A) = (L21 + L22 A)(L11 + L12 A)⁻¹
//! ```
//!
//! which is the coordinate form of `π_F'(G')(1 + A) (π_G'(F')(1 + A))⁻¹`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{orthonormalize, sigma_min, solve, solve_right, Mat, Operator};
use crate::subspace::{joint_frame, Subspace, TOL_EQ, TOL_SPLIT};

/// Default chart-domain margin on the smallest singular value of the
/// restricted projection.
pub const TOL_DOMAIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartFlavor {
    /// Arbitrary complementary pair.
    General,
    /// `G = F^⊥`.
    Hilbert,
}

#[derive(Debug)]
struct ChartData {
    f: Subspace,
    g: Subspace,
    flavor: ChartFlavor,
    frame: Mat,
    tol_domain: f64,
}

/// Index of a chart: the split pair `(F, G)`.
#[derive(Debug, Clone)]
pub struct ChartId(Arc<ChartData>);

impl PartialEq for ChartId {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.flavor == other.0.flavor
                && self.0.f.basis() == other.0.f.basis()
                && self.0.g.basis() == other.0.g.basis())
    }
}

impl ChartId {
    pub fn new(f: Subspace, g: Subspace, flavor: ChartFlavor) -> Result<Self> {
        Self::with_tol_split(f, g, flavor, TOL_SPLIT)
    }

    pub fn with_tol_split(
        f: Subspace,
        g: Subspace,
        flavor: ChartFlavor,
        tol_split: f64,
    ) -> Result<Self> {
        let frame = joint_frame(&f, &g, tol_split)?;
        if flavor == ChartFlavor::Hilbert {
            let n = f.ambient_dim();
            let defect = Subspace::distance_of_projectors(
                g.projector(),
                &(Mat::identity(n, n) - f.projector()),
            );
            if defect > TOL_EQ {
                return Err(Error::SplitFailure {
                    sigma_min: defect,
                    tol: TOL_EQ,
                });
            }
        }
        Ok(Self(Arc::new(ChartData {
            f,
            g,
            flavor,
            frame,
            tol_domain: TOL_DOMAIN,
        })))
    }

    /// The orthogonal chart `(V, V^⊥)`.
    pub fn hilbert(v: Subspace) -> Result<Self> {
        let perp = v.orthogonal_complement();
        Self::new(v, perp, ChartFlavor::Hilbert)
    }

    /// Same chart with a different domain margin.
    pub fn with_tol_domain(&self, tol_domain: f64) -> Self {
        Self(Arc::new(ChartData {
            f: self.0.f.clone(),
            g: self.0.g.clone(),
            flavor: self.0.flavor,
            frame: self.0.frame.clone(),
            tol_domain,
        }))
    }

    pub fn f(&self) -> &Subspace {
        &self.0.f
    }

    pub fn g(&self) -> &Subspace {
        &self.0.g
    }

    pub fn flavor(&self) -> ChartFlavor {
        self.0.flavor
    }

    pub fn tol_domain(&self) -> f64 {
        self.0.tol_domain
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.f.ambient_dim()
    }

    /// `dim F`, the dimension of every subspace in the chart domain.
    pub fn rank(&self) -> usize {
        self.0.f.dim()
    }

    /// `[B_F | B_G]`.
    pub fn frame(&self) -> &Mat {
        &self.0.frame
    }

    fn coordinates_of(&self, vectors: &Mat) -> Result<(Mat, Mat)> {
        let k = self.rank();
        let n = self.ambient_dim();
        let coords = solve(self.frame(), vectors)?;
        Ok((
            coords.rows(0, k).into_owned(),
            coords.rows(k, n - k).into_owned(),
        ))
    }
}

/// A point expressed in a chart: `A ∈ L(F, G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    chart: ChartId,
    a: Operator,
}

impl ChartPoint {
    pub fn new(chart: ChartId, a: Operator) -> Result<Self> {
        let (rows, cols) = (chart.ambient_dim() - chart.rank(), chart.rank());
        if a.rows() != rows || a.cols() != cols {
            return Err(Error::DimensionMismatch(format!(
                "chart coordinates must be {rows}x{cols}, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        Ok(Self { chart, a })
    }

    /// The chart origin, `A = 0`, which is `F` itself.
    pub fn origin(chart: ChartId) -> Self {
        let a = Operator::zeros(chart.ambient_dim() - chart.rank(), chart.rank());
        Self { chart, a }
    }

    pub fn chart(&self) -> &ChartId {
        &self.chart
    }

    pub fn coords(&self) -> &Operator {
        &self.a
    }

    /// `B_F + B_G A`, a (non-orthonormal) basis of the graph.
    pub fn graph_basis(&self) -> Mat {
        self.chart.f().basis() + self.chart.g().basis() * self.a.matrix()
    }
}

/// Outcome of a chart-domain test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCheck {
    pub inside: bool,
    /// Smallest singular value of `π_G(F)|_H` in orthonormal bases of `H`
    /// and the chart basis of `F`.
    pub conditioning: f64,
}

fn check_point_dims(h: &Subspace, chart: &ChartId) -> Result<()> {
    if h.ambient_dim() != chart.ambient_dim() || h.dim() != chart.rank() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of dimension {} in C^{} cannot lie in a chart for dimension {} in C^{}",
            h.dim(),
            h.ambient_dim(),
            chart.rank(),
            chart.ambient_dim()
        )));
    }
    Ok(())
}

/// Decides `H ∈ Ω_G` by the conditioning of `π_G(F)|_H`.
pub fn in_chart_domain(h: &Subspace, chart: &ChartId) -> Result<DomainCheck> {
    check_point_dims(h, chart)?;
    let (on_f, _) = chart.coordinates_of(h.basis())?;
    let conditioning = sigma_min(&on_f);
    Ok(DomainCheck {
        inside: conditioning > chart.tol_domain(),
        conditioning,
    })
}

/// `φ_{F,G}(H) = π_F(G)|_H (π_G(F)|_H)⁻¹`, computed by solving the joint
/// frame against a basis of `H`.
pub fn chart_forward(h: &Subspace, chart: &ChartId) -> Result<ChartPoint> {
    check_point_dims(h, chart)?;
    let (on_f, on_g) = chart.coordinates_of(h.basis())?;
    let conditioning = sigma_min(&on_f);
    if conditioning <= chart.tol_domain() {
        return Err(Error::ChartDomainViolation {
            conditioning,
            tol: chart.tol_domain(),
        });
    }
    let a = solve_right(&on_g, &on_f)?;
    ChartPoint::new(chart.clone(), Operator::new(a))
}

/// The orthogonal-projector form of the chart,
/// `P_V^⊥ P_W P_V (P_V P_W P_V)⁻¹`, restricted to `V`. Only defined for
/// Hilbert charts.
pub fn chart_forward_projector(w: &Subspace, chart: &ChartId) -> Result<ChartPoint> {
    if chart.flavor() != ChartFlavor::Hilbert {
        return Err(Error::NotOrthogonal);
    }
    check_point_dims(w, chart)?;
    let bv = chart.f().basis();
    let bperp = chart.g().basis();
    let pw = w.projector();
    let compressed = bv.adjoint() * pw * bv;
    let conditioning = sigma_min(&compressed).sqrt();
    if conditioning <= chart.tol_domain() {
        return Err(Error::ChartDomainViolation {
            conditioning,
            tol: chart.tol_domain(),
        });
    }
    let off_diagonal = bperp.adjoint() * pw * bv;
    let a = solve_right(&off_diagonal, &compressed)?;
    ChartPoint::new(chart.clone(), Operator::new(a))
}

/// The graph of `A`, orthonormalized.
pub fn chart_inverse(pt: &ChartPoint) -> Subspace {
    Subspace::from_orthonormal_unchecked(orthonormalize(&pt.graph_basis()))
}

/// The source frame written in the target frame, split into blocks.
#[derive(Debug, Clone)]
pub(crate) struct FrameChange {
    pub l11: Mat,
    pub l12: Mat,
    pub l21: Mat,
    pub l22: Mat,
}

impl FrameChange {
    pub fn new(source: &ChartId, target: &ChartId) -> Result<Self> {
        if source.ambient_dim() != target.ambient_dim() || source.rank() != target.rank() {
            return Err(Error::DimensionMismatch(
                "charts belong to different Grassmannian components".into(),
            ));
        }
        let n = source.ambient_dim();
        let k = source.rank();
        let m = n - k;
        let l = solve(target.frame(), source.frame())?;
        Ok(Self {
            l11: l.view((0, 0), (k, k)).into_owned(),
            l12: l.view((0, k), (k, m)).into_owned(),
            l21: l.view((k, 0), (m, k)).into_owned(),
            l22: l.view((k, k), (m, m)).into_owned(),
        })
    }

    /// `D = L11 + L12 A`, the target-`F'` coordinates of the graph basis.
    pub fn denominator(&self, a: &Mat) -> Mat {
        &self.l11 + &self.l12 * a
    }

    /// `N = L21 + L22 A`.
    pub fn numerator(&self, a: &Mat) -> Mat {
        &self.l21 + &self.l22 * a
    }
}

/// Domain test for the graph of `pt` in `target`, in the same normalization
/// as [`in_chart_domain`]: the graph basis `M = Q R` is orthonormalized
/// implicitly, so the conditioning is `σ_min(D R⁻¹)`.
pub(crate) fn transition_conditioning(pt: &ChartPoint, d: &Mat) -> Result<f64> {
    let r = pt.graph_basis().qr().r();
    Ok(sigma_min(&solve_right(d, &r)?))
}

/// The pieces of a chart change evaluated at a point: the frame change, the
/// denominator `D = L11 + L12 A` and the new coordinates `A' = N D⁻¹`.
#[derive(Debug, Clone)]
pub(crate) struct Moebius {
    pub change: FrameChange,
    pub d: Mat,
    pub a_new: Mat,
}

pub(crate) fn moebius(pt: &ChartPoint, target: &ChartId) -> Result<Moebius> {
    let change = FrameChange::new(pt.chart(), target)?;
    let a = pt.coords().matrix();
    let d = change.denominator(a);
    let conditioning = transition_conditioning(pt, &d)?;
    let violation = Error::ChartDomainViolation {
        conditioning,
        tol: target.tol_domain(),
    };
    if conditioning <= target.tol_domain() {
        return Err(violation);
    }
    let a_new = solve_right(&change.numerator(a), &d).map_err(|_| violation)?;
    Ok(Moebius { change, d, a_new })
}

/// `ψ_{target, source}(A)`: the coordinates in `target` of the point `pt`.
pub fn transition_base(pt: &ChartPoint, target: &ChartId) -> Result<ChartPoint> {
    if pt.chart() == target {
        return Ok(ChartPoint {
            chart: target.clone(),
            a: pt.a.clone(),
        });
    }
    let m = moebius(pt, target)?;
    ChartPoint::new(target.clone(), Operator::new(m.a_new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::max_abs;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line(v: &[Complex64]) -> Subspace {
        Subspace::from_spanning(&Mat::from_column_slice(v.len(), 1, v)).unwrap()
    }

    fn e1_e2_chart() -> ChartId {
        ChartId::new(
            line(&[c(1.0, 0.0), c(0.0, 0.0)]),
            line(&[c(0.0, 0.0), c(1.0, 0.0)]),
            ChartFlavor::General,
        )
        .unwrap()
    }

    fn swapped_chart() -> ChartId {
        ChartId::new(
            line(&[c(0.0, 0.0), c(1.0, 0.0)]),
            line(&[c(1.0, 0.0), c(0.0, 0.0)]),
            ChartFlavor::General,
        )
        .unwrap()
    }

    fn scalar_point(chart: ChartId, t: Complex64) -> ChartPoint {
        ChartPoint::new(chart, Operator::new(Mat::from_element(1, 1, t))).unwrap()
    }

    #[test]
    fn origin_and_complement() {
        let chart = e1_e2_chart();
        let f = chart.f().clone();
        let check = in_chart_domain(&f, &chart).unwrap();
        assert!(check.inside);
        assert!((check.conditioning - 1.0).abs() < 1e-15);
        assert!(max_abs(chart_forward(&f, &chart).unwrap().coords().matrix()) < 1e-15);
        assert!(!in_chart_domain(chart.g(), &chart).unwrap().inside);
        assert!(matches!(
            chart_forward(chart.g(), &chart),
            Err(Error::ChartDomainViolation { .. })
        ));
    }

    #[test]
    fn slope_three_line() {
        let chart = e1_e2_chart();
        let h = line(&[c(1.0, 0.0), c(3.0, 0.0)]);
        let check = in_chart_domain(&h, &chart).unwrap();
        assert!((check.conditioning - 1.0 / 10f64.sqrt()).abs() < 1e-15);
        let a = chart_forward(&h, &chart).unwrap();
        assert!((a.coords().matrix()[(0, 0)] - c(3.0, 0.0)).norm() < 1e-14);
        let back = chart_inverse(&scalar_point(chart, c(3.0, 0.0)));
        assert!(back.approx_eq(&h, 1e-14));
    }

    #[test]
    fn hilbert_chart_of_complex_slope() {
        let t = c(2.0, 1.0);
        let chart = ChartId::hilbert(line(&[c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        let w = line(&[c(1.0, 0.0), t]);
        let general = chart_forward(&w, &chart).unwrap();
        let projector = chart_forward_projector(&w, &chart).unwrap();
        assert!((general.coords().matrix()[(0, 0)] - t).norm() < 1e-14);
        assert!((projector.coords().matrix()[(0, 0)] - t).norm() < 1e-14);
    }

    #[test]
    fn projector_form_needs_orthogonal_chart() {
        let chart = ChartId::new(
            line(&[c(1.0, 0.0), c(0.0, 0.0)]),
            line(&[c(1.0, 0.0), c(1.0, 0.0)]),
            ChartFlavor::General,
        )
        .unwrap();
        assert_eq!(
            chart_forward_projector(chart.f(), &chart),
            Err(Error::NotOrthogonal)
        );
    }

    #[test]
    fn hilbert_flavor_requires_orthogonal_complement() {
        let f = line(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let g = line(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(ChartId::new(f, g, ChartFlavor::Hilbert).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let chart = ChartId::hilbert(Subspace::coordinate(4, &[0, 1]).unwrap()).unwrap();
        let h = Subspace::coordinate(4, &[0]).unwrap();
        assert!(matches!(
            in_chart_domain(&h, &chart),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn swapping_the_pair_inverts_the_slope() {
        let t = c(0.7, -1.3);
        let moved = transition_base(&scalar_point(e1_e2_chart(), t), &swapped_chart()).unwrap();
        assert!((moved.coords().matrix()[(0, 0)] - t.inv()).norm() < 1e-14);
    }

    #[test]
    fn same_chart_transition_is_identity() {
        let pt = scalar_point(e1_e2_chart(), c(0.3, 0.2));
        assert_eq!(transition_base(&pt, &e1_e2_chart()).unwrap(), pt);
    }

    #[test]
    fn transition_out_of_domain_fails() {
        let pt = ChartPoint::origin(e1_e2_chart());
        assert!(matches!(
            transition_base(&pt, &swapped_chart()),
            Err(Error::ChartDomainViolation { .. })
        ));
    }

    #[test]
    fn tolerance_override_moves_the_boundary() {
        let chart = e1_e2_chart();
        let h = line(&[c(1e-6, 0.0), c(1.0, 0.0)]);
        assert!(in_chart_domain(&h, &chart).unwrap().inside);
        assert!(
            !in_chart_domain(&h, &chart.with_tol_domain(1e-4))
                .unwrap()
                .inside
        );
    }
}
