//! Seeded instance generators.
//!
//! Every generator is a pure function of its arguments and a `u64` seed.
//! Independent streams (trials, ladder rungs, left/right factors) get their
//! own seeds through [`derive_seed`], so running them in any order or in
//! parallel never changes the values produced.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{orthonormalize, Mat, Operator};

/// Size of the leading block mixed by the unitary factors of
/// [`coherent_decay_block`].
pub const MIXING_BLOCK: usize = 8;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// FNV-1a; stable across platforms and compiler versions.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Counter-mode seed splitting: `(master, stream, index)` to a child seed.
pub fn derive_seed(master: u64, stream: &str, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(fnv1a(stream))).wrapping_add(index))
}

/// Complex Gaussian matrix with independent standard normal real and
/// imaginary parts.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phase of
/// `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    orthonormalize(&gaussian_matrix(rng, n, n))
}

/// Singular-value profile of generated test operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayProfile {
    /// `σ_k = r^k`, `0 < r < 1`.
    Geometric { ratio: f64 },
    /// `σ_k = (k + 1)^{-α}`, `α > 1`.
    Power { exponent: f64 },
    /// All singular values vanish.
    Zero,
}

impl DecayProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DecayProfile::Geometric { ratio } if !(ratio > 0.0 && ratio < 1.0) => Err(
                Error::BadProfile(format!("geometric ratio {ratio} outside (0, 1)")),
            ),
            DecayProfile::Power { exponent } if !(exponent > 1.0 && exponent.is_finite()) => Err(
                Error::BadProfile(format!("power exponent {exponent} must exceed 1")),
            ),
            _ => Ok(()),
        }
    }

    /// The `k`-th singular value, `k` counted from zero.
    pub fn sigma(&self, k: usize) -> f64 {
        match *self {
            DecayProfile::Geometric { ratio } => ratio.powi(k as i32),
            DecayProfile::Power { exponent } => ((k + 1) as f64).powf(-exponent),
            DecayProfile::Zero => 0.0,
        }
    }
}

/// `U Σ Vᴴ` with `Σ` prescribed by `profile` and `U`, `V` Haar unitaries
/// drawn from `seed`.
pub fn gen_decay_operator(
    rows: usize,
    cols: usize,
    profile: DecayProfile,
    seed: u64,
) -> Result<Operator> {
    profile.validate()?;
    let u = haar_unitary(&mut seeded_rng(derive_seed(seed, "decay/left", 0)), rows);
    let v = haar_unitary(&mut seeded_rng(derive_seed(seed, "decay/right", 0)), cols);
    let sigma: Vec<f64> = (0..rows.min(cols)).map(|k| profile.sigma(k)).collect();
    let s = Operator::from_real_diagonal(rows, cols, &sigma).into_matrix();
    Ok(Operator::new(u * s * v.adjoint()))
}

/// A decay operator whose truncations are coherently embedded: the
/// `rows x cols` instance is, bit for bit, the leading block of every
/// larger instance with the same seed, provided both sides are at least
/// [`MIXING_BLOCK`].
///
/// The operator is `R₋ Σ R₊ᴴ` where `Σ` carries `profile.sigma(first + k)`
/// on its diagonal and `R₋`, `R₊` are Haar unitaries on the leading
/// `MIXING_BLOCK` coordinates and the identity elsewhere. Its singular
/// values are exactly the profile values.
pub fn coherent_decay_block(
    rows: usize,
    cols: usize,
    profile: DecayProfile,
    first: usize,
    seed: u64,
) -> Result<Operator> {
    profile.validate()?;
    let mr = rows.min(MIXING_BLOCK);
    let mc = cols.min(MIXING_BLOCK);
    let left = haar_unitary(&mut seeded_rng(derive_seed(seed, "coherent/left", 0)), mr);
    let right = haar_unitary(&mut seeded_rng(derive_seed(seed, "coherent/right", 0)), mc);
    let rank = rows.min(cols);

    let left_at = |a: usize, c: usize| -> Option<Complex64> {
        if a < mr && c < mr {
            Some(left[(a, c)])
        } else if a == c && a >= mr {
            Some(Complex64::new(1.0, 0.0))
        } else {
            None
        }
    };
    let right_at = |b: usize, c: usize| -> Option<Complex64> {
        if b < mc && c < mc {
            Some(right[(b, c)])
        } else if b == c && b >= mc {
            Some(Complex64::new(1.0, 0.0))
        } else {
            None
        }
    };

    let mut mat = Mat::zeros(rows, cols);
    for a in 0..rows {
        for b in 0..cols {
            let mut candidates: Vec<usize> = (0..mr.min(mc)).collect();
            candidates.extend([a, b]);
            candidates.sort_unstable();
            candidates.dedup();
            let mut acc = Complex64::new(0.0, 0.0);
            for c in candidates.into_iter().filter(|&c| c < rank) {
                if let (Some(l), Some(r)) = (left_at(a, c), right_at(b, c)) {
                    acc += l * profile.sigma(first + c) * r.conj();
                }
            }
            mat[(a, b)] = acc;
        }
    }
    Ok(Operator::new(mat))
}
