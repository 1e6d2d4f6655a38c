//! Truncated polarized Hilbert spaces and the `p`-restricted Grassmannian.
//!
//! The ambient space of a [`PolarizedModel`] is `ℋ₋ ⊕ ℋ₊` truncated to
//! `n_minus + n_plus` coordinates, laid out as
//! `e₋₁, …, e₋ₙ₋, e₁, …, eₙ₊`. Membership of a subspace `W` in the
//! restricted Grassmannian is reported quantitatively, through both the
//! two-condition form (Fredholm data of `p₊|_W` and the Schatten norm of
//! `p₋|_W`) and the single condition `‖P_W − P₊‖_p`. At a single truncation
//! every subspace is "in `L^p`"; only trends along a [`TruncationLadder`]
//! carry information.
//!
//! Virtual dimension is the index of `p₊|_W`, which at finite truncation is
//! `dim W − n_plus`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas::{ChartFlavor, ChartId, ChartPoint};
use crate::bundle::{transition_cotangent, Covector};
use crate::error::{Error, Result};
use crate::operator::{orthonormalize, singular_values, Mat, Operator};
use crate::random::{coherent_decay_block, derive_seed, DecayProfile};
use crate::schatten::{schatten_from_singular_values, schatten_value, COMPACT};
use crate::subspace::Subspace;

/// Rank threshold for the Fredholm data of `p₊|_W`.
pub const RANK_TOL: f64 = 1e-10;
/// Relative spread of the transition constant tolerated over the top three
/// rungs of a preservation experiment.
pub const STABILIZATION_SPREAD: f64 = 0.05;
/// Index past which singular tails of compact-class covectors are recorded.
pub const TAIL_CUTOFF: usize = 8;

/// Which Grassmannian a fiber belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrassmannModel {
    /// All closed subspaces of the Hilbert space; tangent fibers are
    /// bounded operators.
    Full,
    /// `Gr_res^p`; tangent fibers are `L^p` operators, `p = 0` meaning
    /// compact operators.
    Restricted { p: f64 },
}

/// Operator ideal housing a precotangent fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberClass {
    TraceClass,
    Compact,
    /// Reflexive case: the precotangent fiber is the cotangent fiber `L^q`
    /// with `1/p + 1/q = 1`.
    Schatten {
        q: f64,
    },
}

impl FiberClass {
    /// Schatten index whose norm measures this class (`0` for compact,
    /// measured in operator norm).
    pub fn norm_index(&self) -> f64 {
        match *self {
            FiberClass::TraceClass => 1.0,
            FiberClass::Compact => COMPACT,
            FiberClass::Schatten { q } => q,
        }
    }
}

/// The predual of the tangent model space of `model`, if it exists.
pub fn precotangent_fiber(model: GrassmannModel) -> Result<FiberClass> {
    match model {
        GrassmannModel::Full => Ok(FiberClass::TraceClass),
        GrassmannModel::Restricted { p } if p == COMPACT => Err(Error::PredualUnavailable),
        GrassmannModel::Restricted { p: 1.0 } => Ok(FiberClass::Compact),
        GrassmannModel::Restricted { p } if p > 1.0 && p.is_finite() => {
            Ok(FiberClass::Schatten { q: p / (p - 1.0) })
        }
        GrassmannModel::Restricted { p } => Err(Error::InvalidIndex(p)),
    }
}

/// The model whose precotangent fiber is measured by the Schatten index
/// `p` (`p = 0` for compact fibers).
pub fn model_for_fiber_index(p: f64) -> Result<GrassmannModel> {
    if p == COMPACT {
        Ok(GrassmannModel::Restricted { p: 1.0 })
    } else if p == 1.0 {
        Ok(GrassmannModel::Full)
    } else if p > 1.0 && p.is_finite() {
        Ok(GrassmannModel::Restricted { p: p / (p - 1.0) })
    } else {
        Err(Error::InvalidIndex(p))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizedModel {
    n_minus: usize,
    n_plus: usize,
    p_plus: Operator,
    p_minus: Operator,
}

impl PolarizedModel {
    pub fn new(n_minus: usize, n_plus: usize) -> Self {
        let n = n_minus + n_plus;
        let diag_plus: Vec<f64> = (0..n)
            .map(|i| if i >= n_minus { 1.0 } else { 0.0 })
            .collect();
        let diag_minus: Vec<f64> = diag_plus.iter().map(|d| 1.0 - d).collect();
        Self {
            n_minus,
            n_plus,
            p_plus: Operator::from_real_diagonal(n, n, &diag_plus),
            p_minus: Operator::from_real_diagonal(n, n, &diag_minus),
        }
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn ambient_dim(&self) -> usize {
        self.n_minus + self.n_plus
    }

    pub fn p_plus(&self) -> &Operator {
        &self.p_plus
    }

    pub fn p_minus(&self) -> &Operator {
        &self.p_minus
    }

    /// Ambient index of `e₋ₐ`, `a ≥ 1`.
    pub fn minus_index(&self, a: usize) -> usize {
        a - 1
    }

    /// Ambient index of `e_b`, `b ≥ 1`.
    pub fn plus_index(&self, b: usize) -> usize {
        self.n_minus + b - 1
    }

    pub fn plus_space(&self) -> Subspace {
        let idx: Vec<usize> = (1..=self.n_plus).map(|b| self.plus_index(b)).collect();
        Subspace::coordinate(self.ambient_dim(), &idx).expect("indices in range")
    }

    pub fn minus_space(&self) -> Subspace {
        let idx: Vec<usize> = (1..=self.n_minus).map(|a| self.minus_index(a)).collect();
        Subspace::coordinate(self.ambient_dim(), &idx).expect("indices in range")
    }

    /// The orthogonal chart `(ℋ₊, ℋ₋)` with standard bases.
    pub fn plus_chart(&self) -> ChartId {
        ChartId::new(self.plus_space(), self.minus_space(), ChartFlavor::Hilbert)
            .expect("polarization is an orthogonal split")
    }

    /// Orthonormal bases of the graph of `k : ℋ₊ → ℋ₋` and of its
    /// orthogonal complement, the graph of `−kᴴ : ℋ₋ → ℋ₊`.
    pub fn graph_chart(&self, k: &Operator) -> Result<ChartId> {
        self.check_block(k)?;
        let n = self.ambient_dim();
        let mut graph = Mat::zeros(n, self.n_plus);
        let mut perp = Mat::zeros(n, self.n_minus);
        for b in 1..=self.n_plus {
            graph[(self.plus_index(b), b - 1)] = Complex64::new(1.0, 0.0);
            for a in 1..=self.n_minus {
                let kab = k.matrix()[(a - 1, b - 1)];
                graph[(self.minus_index(a), b - 1)] = kab;
                perp[(self.plus_index(b), a - 1)] = -kab.conj();
            }
        }
        for a in 1..=self.n_minus {
            perp[(self.minus_index(a), a - 1)] = Complex64::new(1.0, 0.0);
        }
        let v = Subspace::from_orthonormal_unchecked(orthonormalize(&graph));
        let v_perp = Subspace::from_orthonormal_unchecked(orthonormalize(&perp));
        ChartId::new(v, v_perp, ChartFlavor::Hilbert)
    }

    fn check_block(&self, k: &Operator) -> Result<()> {
        if k.rows() != self.n_minus || k.cols() != self.n_plus {
            return Err(Error::DimensionMismatch(format!(
                "expected a {}x{} block from H+ to H-, got {}x{}",
                self.n_minus,
                self.n_plus,
                k.rows(),
                k.cols()
            )));
        }
        Ok(())
    }

    fn check_ambient(&self, w: &Subspace) -> Result<()> {
        if w.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of C^{} in a model of dimension {}",
                w.ambient_dim(),
                self.ambient_dim()
            )));
        }
        Ok(())
    }

    /// `B₊ᴴ B_W`, the matrix of `p₊|_W`.
    fn plus_part(&self, w: &Subspace) -> Mat {
        w.basis().rows(self.n_minus, self.n_plus).into_owned()
    }

    /// `B₋ᴴ B_W`, the matrix of `p₋|_W`.
    fn minus_part(&self, w: &Subspace) -> Mat {
        w.basis().rows(0, self.n_minus).into_owned()
    }
}

/// Fredholm data of `p₊|_W : W → ℋ₊` and the size of `p₋|_W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipCriteria {
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    /// Smallest singular value of `p₊|_W` above [`RANK_TOL`]; `None` when
    /// `p₊|_W` vanishes.
    pub fredholm_gap: Option<f64>,
    /// `‖p₋|_W‖_p`.
    pub minus_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedPoint {
    pub w: Subspace,
    pub p: f64,
    /// `‖P_W − P₊‖_p`.
    pub diff_norm: f64,
    pub virtual_dim: i64,
    pub criteria: MembershipCriteria,
}

/// `dim W − n_plus`.
pub fn virtual_dimension(w: &Subspace, model: &PolarizedModel) -> Result<i64> {
    model.check_ambient(w)?;
    Ok(w.dim() as i64 - model.n_plus() as i64)
}

/// `dim ker − dim coker` of `p₊|_W`, from a numerical rank count.
pub fn fredholm_index(w: &Subspace, model: &PolarizedModel) -> Result<i64> {
    model.check_ambient(w)?;
    let (kernel, cokernel, _) = fredholm_data(w, model);
    Ok(kernel as i64 - cokernel as i64)
}

fn fredholm_data(w: &Subspace, model: &PolarizedModel) -> (usize, usize, Option<f64>) {
    let sv = singular_values(&model.plus_part(w));
    let rank = sv.iter().filter(|&&s| s > RANK_TOL).count();
    let gap = sv.iter().copied().rev().find(|&s| s > RANK_TOL);
    (w.dim() - rank, model.n_plus() - rank, gap)
}

/// Reports both membership criteria of `W` for `Gr_res^p`.
pub fn is_restricted_point(
    w: &Subspace,
    model: &PolarizedModel,
    p: f64,
) -> Result<RestrictedPoint> {
    model.check_ambient(w)?;
    let (kernel_dim, cokernel_dim, fredholm_gap) = fredholm_data(w, model);
    let minus_norm = schatten_value(&model.minus_part(w), p)?;
    let diff_norm = schatten_value(&(w.projector() - model.p_plus().matrix()), p)?;
    Ok(RestrictedPoint {
        w: w.clone(),
        p,
        diff_norm,
        virtual_dim: virtual_dimension(w, model)?,
        criteria: MembershipCriteria {
            kernel_dim,
            cokernel_dim,
            fredholm_gap,
            minus_norm,
        },
    })
}

/// The generating block `K : ℋ₊ → ℋ₋` of [`gen_restricted_point`], with
/// singular values `profile.sigma(1), profile.sigma(2), …`.
pub fn restricted_generator(
    model: &PolarizedModel,
    profile: DecayProfile,
    seed: u64,
) -> Result<Operator> {
    coherent_decay_block(model.n_minus(), model.n_plus(), profile, 1, seed)
}

/// `W = graph(K) ⊕ span(e₋₁, …, e₋_d)` for a target virtual dimension
/// `d ≥ 0`, or the graph of `K` over `span(e_{|d|+1}, …)` for `d < 0`.
pub fn gen_restricted_point(
    model: &PolarizedModel,
    p: f64,
    profile: DecayProfile,
    target_virtual_dim: i64,
    seed: u64,
) -> Result<RestrictedPoint> {
    let k = restricted_generator(model, profile, seed)?;
    let w = shifted_graph(model, &k, target_virtual_dim)?;
    is_restricted_point(&w, model, p)
}

/// The subspace spanned by `e_b + K e_b` for the kept `b`, plus the added
/// `e₋ₐ`.
pub fn shifted_graph(model: &PolarizedModel, k: &Operator, virtual_dim: i64) -> Result<Subspace> {
    model.check_block(k)?;
    let added = virtual_dim.max(0) as usize;
    let dropped = (-virtual_dim).max(0) as usize;
    if added > model.n_minus() || dropped > model.n_plus() {
        return Err(Error::DimensionMismatch(format!(
            "virtual dimension {virtual_dim} not reachable in a ({}, {}) truncation",
            model.n_minus(),
            model.n_plus()
        )));
    }
    let n = model.ambient_dim();
    let kept = model.n_plus() - dropped;
    let mut basis = Mat::zeros(n, kept + added);
    for (col, b) in (dropped + 1..=model.n_plus()).enumerate() {
        basis[(model.plus_index(b), col)] = Complex64::new(1.0, 0.0);
        for a in 1..=model.n_minus() {
            basis[(model.minus_index(a), col)] = k.matrix()[(a - 1, b - 1)];
        }
    }
    for a in 1..=added {
        basis[(model.minus_index(a), kept + a - 1)] = Complex64::new(1.0, 0.0);
    }
    Subspace::from_spanning(&basis)
}

/// A family of coherently embedded truncations generated from one profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationLadder {
    /// `(n_minus, n_plus)` per rung, increasing.
    pub dims: Vec<(usize, usize)>,
    pub profile: DecayProfile,
    pub virtual_dim: i64,
    pub seed: u64,
}

impl TruncationLadder {
    pub fn new(
        dims: Vec<(usize, usize)>,
        profile: DecayProfile,
        virtual_dim: i64,
        seed: u64,
    ) -> Result<Self> {
        profile.validate()?;
        if dims.is_empty() {
            return Err(Error::LadderMismatch("no rungs".into()));
        }
        for w in dims.windows(2) {
            let ((m0, p0), (m1, p1)) = (w[0], w[1]);
            if m1 < m0 || p1 < p0 || (m0, p0) == (m1, p1) {
                return Err(Error::LadderMismatch(format!(
                    "rung ({m1}, {p1}) does not enlarge ({m0}, {p0})"
                )));
            }
        }
        Ok(Self {
            dims,
            profile,
            virtual_dim,
            seed,
        })
    }

    /// Rungs `(d, d)` for each listed `d`.
    pub fn symmetric(dims: &[usize], profile: DecayProfile, seed: u64) -> Result<Self> {
        Self::new(dims.iter().map(|&d| (d, d)).collect(), profile, 0, seed)
    }

    pub fn models(&self) -> Vec<PolarizedModel> {
        self.dims
            .iter()
            .map(|&(m, p)| PolarizedModel::new(m, p))
            .collect()
    }

    /// Generating blocks `K`, one per rung.
    pub fn generators(&self) -> Result<Vec<Operator>> {
        self.models()
            .iter()
            .map(|m| restricted_generator(m, self.profile, self.seed))
            .collect()
    }

    pub fn instances(&self, p: f64) -> Result<Vec<RestrictedPoint>> {
        self.models()
            .iter()
            .zip(self.generators()?)
            .map(|(m, k)| is_restricted_point(&shifted_graph(m, &k, self.virtual_dim)?, m, p))
            .collect()
    }

    /// Each generating block must be, bit for bit, the leading block of the
    /// next one.
    pub fn check_embedding(&self) -> Result<()> {
        let gens = self.generators()?;
        for w in gens.windows(2) {
            let block = w[1].top_left(w[0].rows(), w[0].cols())?;
            if block.matrix() != w[0].matrix() {
                return Err(Error::LadderMismatch(format!(
                    "{}x{} generator is not the leading block of the {}x{} one",
                    w[0].rows(),
                    w[0].cols(),
                    w[1].rows(),
                    w[1].cols()
                )));
            }
        }
        Ok(())
    }
}

/// How the pair of charts of a preservation experiment is built at each
/// rung. The source chart is always `(ℋ₊, ℋ₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartScenario {
    /// Target equals source.
    Identity,
    /// Target `(ℋ₋, ℋ₊)` with the point `A = t·I`; needs `n_minus = n_plus`.
    Swap { t: Complex64 },
    /// Target is the orthogonal chart at the graph of a seeded decay block.
    Seeded { profile: DecayProfile, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RungReport {
    /// `n_plus` of the rung.
    pub dim: usize,
    pub mu_norm: f64,
    pub mu_prime_norm: f64,
    pub constant: f64,
    /// `σ_{TAIL_CUTOFF+1}(μ')` for compact-class runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub p: f64,
    pub dims: Vec<usize>,
    pub per_rung: Vec<RungReport>,
    /// `(max − min) / max` of the constant over the top three rungs.
    pub spread: f64,
    /// Largest measured `‖μ'‖_p / ‖μ‖_p`.
    pub transition_constant: f64,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

fn run_rung(
    model: &PolarizedModel,
    ladder: &TruncationLadder,
    fiber_index: f64,
    scenario: &ChartScenario,
) -> Result<RungReport> {
    let source = model.plus_chart();
    let generator = restricted_generator(model, ladder.profile, ladder.seed)?;
    let (point, target) = match *scenario {
        ChartScenario::Identity => (ChartPoint::new(source.clone(), generator)?, source.clone()),
        ChartScenario::Swap { t } => {
            if model.n_minus() != model.n_plus() {
                return Err(Error::DimensionMismatch(
                    "swap scenario needs n_minus = n_plus".into(),
                ));
            }
            let n = model.n_plus();
            let a = Operator::new(Mat::identity(n, n) * t);
            let swapped = ChartId::new(
                model.minus_space(),
                model.plus_space(),
                ChartFlavor::Hilbert,
            )?;
            (ChartPoint::new(source, a)?, swapped)
        }
        ChartScenario::Seeded { profile, seed } => {
            let k_target = restricted_generator(model, profile, seed)?;
            (
                ChartPoint::new(source, generator)?,
                model.graph_chart(&k_target)?,
            )
        }
    };
    let mu = coherent_decay_block(
        model.n_plus(),
        model.n_minus(),
        ladder.profile,
        0,
        derive_seed(ladder.seed, "experiment/mu", 0),
    )?;
    let covector = Covector::precotangent(
        point,
        mu,
        model_for_fiber_index(fiber_index)?,
        ladder.profile,
    )?;
    let mu_sv = covector.fiber().singular_values();
    let mu_norm = schatten_from_singular_values(&mu_sv, fiber_index)?;
    let dim = model.n_plus();
    let moved = match transition_cotangent(&covector, &target) {
        Ok(m) => m,
        Err(e @ Error::ChartDomainViolation { .. }) => {
            return Ok(RungReport {
                dim,
                mu_norm,
                mu_prime_norm: f64::NAN,
                constant: f64::NAN,
                tail: None,
                skipped: Some(e.to_string()),
            })
        }
        Err(e) => return Err(e),
    };
    let sv = moved.fiber().singular_values();
    let mu_prime_norm = schatten_from_singular_values(&sv, fiber_index)?;
    Ok(RungReport {
        dim,
        mu_norm,
        mu_prime_norm,
        constant: mu_prime_norm / mu_norm,
        tail: (fiber_index == COMPACT).then(|| sv.get(TAIL_CUTOFF).copied().unwrap_or(0.0)),
        skipped: None,
    })
}

/// Pushes a decaying covector through a chart change at every rung and
/// checks that the transition constant `‖μ'‖_p / ‖μ‖_p` stabilizes.
///
/// `fiber_index` selects the covector class: `1` for trace-class fibers,
/// `0` for compact fibers (measured in operator norm, with singular tails
/// recorded), `q > 1` for the reflexive Schatten fibers.
pub fn preservation_experiment(
    ladder: &TruncationLadder,
    fiber_index: f64,
    scenario: &ChartScenario,
) -> Result<ExperimentReport> {
    model_for_fiber_index(fiber_index)?;
    let per_rung = ladder
        .models()
        .par_iter()
        .map(|m| run_rung(m, ladder, fiber_index, scenario))
        .collect::<Result<Vec<_>>>()?;

    let top = &per_rung[per_rung.len().saturating_sub(3)..];
    let complete = top.iter().all(|r| r.skipped.is_none());
    let spread = if complete {
        let max = top
            .iter()
            .map(|r| r.constant)
            .fold(f64::NEG_INFINITY, f64::max);
        let min = top.iter().map(|r| r.constant).fold(f64::INFINITY, f64::min);
        if max > 0.0 {
            (max - min) / max
        } else {
            0.0
        }
    } else {
        f64::INFINITY
    };
    let transition_constant = per_rung
        .iter()
        .filter(|r| r.skipped.is_none())
        .map(|r| r.constant)
        .fold(0.0, f64::max);
    Ok(ExperimentReport {
        p: fiber_index,
        dims: per_rung.iter().map(|r| r.dim).collect(),
        pass: complete && spread <= STABILIZATION_SPREAD,
        spread,
        transition_constant,
        per_rung,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::chart_forward;

    fn geometric() -> DecayProfile {
        DecayProfile::Geometric { ratio: 0.5 }
    }

    #[test]
    fn plus_space_is_a_zero_point() {
        let model = PolarizedModel::new(4, 5);
        let rp = is_restricted_point(&model.plus_space(), &model, 1.0).unwrap();
        assert_eq!(rp.diff_norm, 0.0);
        assert_eq!(rp.virtual_dim, 0);
        assert_eq!(rp.criteria.kernel_dim, 0);
        assert_eq!(rp.criteria.cokernel_dim, 0);
    }

    #[test]
    fn swapping_one_direction_costs_two() {
        let model = PolarizedModel::new(3, 4);
        let mut idx: Vec<usize> = (2..=4).map(|b| model.plus_index(b)).collect();
        idx.push(model.minus_index(1));
        let w = Subspace::coordinate(model.ambient_dim(), &idx).unwrap();
        let rp = is_restricted_point(&w, &model, 1.0).unwrap();
        assert!((rp.diff_norm - 2.0).abs() < 1e-14);
        assert_eq!(rp.virtual_dim, 0);
        assert_eq!(fredholm_index(&w, &model).unwrap(), 0);
    }

    #[test]
    fn adding_a_negative_direction_raises_virtual_dimension() {
        let model = PolarizedModel::new(3, 4);
        let mut idx: Vec<usize> = (1..=4).map(|b| model.plus_index(b)).collect();
        idx.push(model.minus_index(1));
        let w = Subspace::coordinate(model.ambient_dim(), &idx).unwrap();
        let rp = is_restricted_point(&w, &model, 1.0).unwrap();
        assert!((rp.diff_norm - 1.0).abs() < 1e-14);
        assert_eq!(rp.virtual_dim, 1);
        assert_eq!(virtual_dimension(&w, &model).unwrap(), 1);
        assert_eq!(fredholm_index(&w, &model).unwrap(), 1);
        assert_eq!(rp.criteria.kernel_dim, 1);
    }

    #[test]
    fn rotated_codimension_one_space_keeps_index() {
        let model = PolarizedModel::new(3, 4);
        let n = model.ambient_dim();
        let eps: f64 = 1e-3;
        let mut basis = Mat::zeros(n, 3);
        for (col, b) in (2..=4).enumerate() {
            basis[(model.plus_index(b), col)] = Complex64::new(eps.cos(), 0.0);
            basis[(model.minus_index(col + 1), col)] = Complex64::new(eps.sin(), 0.0);
        }
        let w = Subspace::from_spanning(&basis).unwrap();
        assert_eq!(fredholm_index(&w, &model).unwrap(), -1);
        assert_eq!(virtual_dimension(&w, &model).unwrap(), -1);
    }

    #[test]
    fn zero_profile_gives_plus_space() {
        let model = PolarizedModel::new(5, 5);
        let rp = gen_restricted_point(&model, 1.0, DecayProfile::Zero, 0, 3).unwrap();
        assert!(rp.w.approx_eq(&model.plus_space(), 1e-15));
    }

    #[test]
    fn generation_is_bit_exact() {
        let model = PolarizedModel::new(6, 6);
        let a = gen_restricted_point(&model, 1.0, geometric(), 0, 3).unwrap();
        let b = gen_restricted_point(&model, 1.0, geometric(), 0, 3).unwrap();
        assert_eq!(a.w.basis(), b.w.basis());
    }

    #[test]
    fn targets_hit_the_requested_virtual_dimension() {
        let model = PolarizedModel::new(10, 10);
        for d in -3..=3 {
            let rp = gen_restricted_point(&model, 2.0, geometric(), d, 11).unwrap();
            assert_eq!(rp.virtual_dim, d);
            assert_eq!(fredholm_index(&rp.w, &model).unwrap(), d);
        }
        assert!(gen_restricted_point(&model, 1.0, geometric(), 11, 0).is_err());
    }

    #[test]
    fn ladder_diff_norms_are_cauchy() {
        let r = 0.5;
        let ladder =
            TruncationLadder::symmetric(&[8, 16, 32], DecayProfile::Geometric { ratio: r }, 4)
                .unwrap();
        ladder.check_embedding().unwrap();
        let norms: Vec<f64> = ladder
            .instances(1.0)
            .unwrap()
            .iter()
            .map(|rp| rp.diff_norm)
            .collect();
        for i in 0..norms.len() {
            for j in 0..norms.len() {
                assert!((norms[i] - norms[j]).abs() <= 2.0 * r.powi(8), "{norms:?}");
            }
        }
    }

    #[test]
    fn ladder_rejects_shrinking_rungs() {
        assert!(TruncationLadder::symmetric(&[16, 8], geometric(), 0).is_err());
        assert!(TruncationLadder::symmetric(&[8, 8], geometric(), 0).is_err());
    }

    #[test]
    fn generator_is_the_chart_coordinate() {
        let model = PolarizedModel::new(9, 9);
        let k = restricted_generator(&model, geometric(), 2).unwrap();
        let w = shifted_graph(&model, &k, 0).unwrap();
        let a = chart_forward(&w, &model.plus_chart()).unwrap();
        assert!(a.coords().max_abs_diff(&k) < 1e-14);
    }

    #[test]
    fn graph_chart_is_orthogonal() {
        let model = PolarizedModel::new(9, 12);
        let k = restricted_generator(&model, geometric(), 2).unwrap();
        let chart = model.graph_chart(&k).unwrap();
        assert_eq!(chart.rank(), 12);
    }

    #[test]
    fn predual_table() {
        assert_eq!(
            precotangent_fiber(GrassmannModel::Full),
            Ok(FiberClass::TraceClass)
        );
        assert_eq!(
            precotangent_fiber(GrassmannModel::Restricted { p: 1.0 }),
            Ok(FiberClass::Compact)
        );
        assert_eq!(
            precotangent_fiber(GrassmannModel::Restricted { p: 2.0 }),
            Ok(FiberClass::Schatten { q: 2.0 })
        );
        assert_eq!(
            precotangent_fiber(GrassmannModel::Restricted { p: 0.0 }),
            Err(Error::PredualUnavailable)
        );
        assert!(precotangent_fiber(GrassmannModel::Restricted { p: 0.5 }).is_err());
    }

    #[test]
    fn identity_scenario_has_unit_constant() {
        let ladder = TruncationLadder::symmetric(&[8, 16, 32], geometric(), 1).unwrap();
        let report = preservation_experiment(&ladder, 1.0, &ChartScenario::Identity).unwrap();
        assert!(report.per_rung.iter().all(|r| r.constant == 1.0));
        assert!(report.pass);
    }

    #[test]
    fn swap_scenario_scales_by_modulus_squared() {
        let t = Complex64::new(1.5, 0.5);
        let ladder = TruncationLadder::symmetric(&[8, 16, 32], geometric(), 1).unwrap();
        for p in [1.0, 0.0, 2.0] {
            let report = preservation_experiment(&ladder, p, &ChartScenario::Swap { t }).unwrap();
            for r in &report.per_rung {
                assert!(
                    (r.constant - t.norm_sqr()).abs() < 1e-8 * t.norm_sqr(),
                    "{r:?}"
                );
            }
        }
    }

    #[test]
    fn invalid_fiber_index_is_rejected() {
        let ladder = TruncationLadder::symmetric(&[8, 16], geometric(), 1).unwrap();
        assert!(matches!(
            preservation_experiment(&ladder, 0.5, &ChartScenario::Identity),
            Err(Error::InvalidIndex(_))
        ));
    }
}
