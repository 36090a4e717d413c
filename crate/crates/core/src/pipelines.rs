//! Applied workflows: Gaussian reference values, jitter-averaged estimation
//! for discrete or heavily tied data, and dependence-based feature ranking.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::entropy::{copent, EstimatorConfig};
use crate::error::{Error, Result};
use crate::matrix::SampleMatrix;

/// Analytic mutual information of a bivariate Gaussian: −½·log(1−ρ²).
pub fn gaussian_reference_mi(rho: f64) -> Result<f64> {
    if rho.is_nan() || rho.abs() >= 1.0 {
        return Err(Error::InvalidRho { rho });
    }
    Ok(-0.5 * (-rho * rho).ln_1p())
}

/// n×2 sample with standard-normal margins and correlation `rho`, from a
/// seeded ChaCha stream (Cholesky of the 2×2 correlation matrix applied to
/// independent normals). Identical (rho, n, seed) → bit-identical output.
pub fn simulate_bivariate_gaussian(rho: f64, n: usize, seed: u64) -> Result<SampleMatrix> {
    if rho.is_nan() || rho.abs() >= 1.0 {
        return Err(Error::InvalidRho { rho });
    }
    if n < 2 {
        return Err(Error::TooFewRows { got: n, need: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cross = (1.0 - rho * rho).sqrt();
    let mut values = Array2::zeros((n, 2));
    for i in 0..n {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        values[[i, 0]] = z1;
        values[[i, 1]] = rho * z1 + cross * z2;
    }
    SampleMatrix::new(values)
}

/// Noise protocol for tied data: `repeats` rounds of per-column Gaussian
/// noise at `scale` times the column's max absolute value, averaged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterPolicy {
    pub repeats: usize,
    pub scale: f64,
    pub seed: u64,
}

impl Default for JitterPolicy {
    fn default() -> Self {
        JitterPolicy { repeats: 50, scale: 1e-6, seed: 42 }
    }
}

impl JitterPolicy {
    pub fn new(repeats: usize, scale: f64, seed: u64) -> Self {
        JitterPolicy { repeats, scale, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.repeats < 1 {
            return Err(Error::InvalidJitter { reason: "repeats must be >= 1" });
        }
        if self.scale <= 0.0 || !self.scale.is_finite() {
            return Err(Error::InvalidJitter { reason: "scale must be a positive finite real" });
        }
        Ok(())
    }
}

/// Runs `f` on `repeats` independently jittered copies of `x` and returns the
/// arithmetic mean (fixed summation order over repeats).
///
/// Noise for repeat r, column c comes from ChaCha stream r·ncols + c of the
/// policy seed, so every (repeat, column) cell is reproducible regardless of
/// evaluation order, and a two-column extraction jittered directly sees
/// exactly the same noise as the same extraction inside a larger loop.
/// Column noise amplitude is max(|column|)·scale; an all-zero column has no
/// amplitude to scale, so it falls back to absolute `scale` with a warning.
pub fn jitter_average<F>(
    x: &SampleMatrix,
    policy: &JitterPolicy,
    config: &EstimatorConfig,
    f: F,
) -> Result<f64>
where
    F: Fn(&SampleMatrix, &EstimatorConfig) -> Result<f64>,
{
    policy.validate()?;
    let (t, n) = (x.nrows(), x.ncols());

    let mut amplitudes = Vec::with_capacity(n);
    for j in 0..n {
        let max_abs = x.column(j).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max_abs == 0.0 {
            log::warn!(
                "jitter: column {j} is all zeros; falling back to absolute noise scale {}",
                policy.scale
            );
            amplitudes.push(policy.scale);
        } else {
            amplitudes.push(max_abs * policy.scale);
        }
    }

    let base = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut sum = 0.0;
    for r in 0..policy.repeats {
        let mut perturbed = x.values().clone();
        for j in 0..n {
            let mut rng = base.clone();
            rng.set_stream((r * n + j) as u64);
            let amp = amplitudes[j];
            for i in 0..t {
                perturbed[[i, j]] += amp * rng.sample::<f64, _>(StandardNormal);
            }
        }
        sum += f(&SampleMatrix::new(perturbed)?, config)?;
    }
    Ok(sum / policy.repeats as f64)
}

/// Jitter-averaged copula entropy (negated, like `copent`).
pub fn jittered_copent(
    x: &SampleMatrix,
    policy: &JitterPolicy,
    config: &EstimatorConfig,
) -> Result<f64> {
    jitter_average(x, policy, config, copent)
}

/// Dependence scores of every non-target column against the target, sorted
/// descending (ties broken by ascending column id). Ids are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub feature_ids: Vec<usize>,
    pub scores: Vec<f64>,
    pub target_id: usize,
}

impl FeatureRanking {
    /// Features scoring at or above the score of `anchor` (a column id).
    pub fn select_at_least(&self, anchor: usize) -> Result<Vec<usize>> {
        let pos = self
            .feature_ids
            .iter()
            .position(|&id| id == anchor)
            .ok_or(Error::ColumnNotFound { name: format!("feature {anchor}") })?;
        let cut = self.scores[pos];
        Ok(self
            .feature_ids
            .iter()
            .zip(&self.scores)
            .filter(|(_, &s)| s >= cut)
            .map(|(&id, _)| id)
            .collect())
    }

    /// The q best-scoring feature ids.
    pub fn top(&self, q: usize) -> &[usize] {
        &self.feature_ids[..q.min(self.feature_ids.len())]
    }
}

/// Scores every non-target column by the jittered copula entropy of the
/// two-column matrix [feature, target]. Each score equals a direct
/// `jittered_copent` call on that extraction, bit for bit.
pub fn rank_features(
    x: &SampleMatrix,
    target: usize,
    policy: &JitterPolicy,
    config: &EstimatorConfig,
) -> Result<FeatureRanking> {
    let n = x.ncols();
    if target >= n {
        return Err(Error::ColumnIndexOutOfRange { index: target + 1, ncols: n });
    }
    let target_col = x.column(target).to_vec();
    let mut scored: Vec<(usize, f64)> = Vec::with_capacity(n - 1);
    for j in 0..n {
        if j == target {
            continue;
        }
        let pair = SampleMatrix::from_columns(&[&x.column(j).to_vec(), &target_col])?;
        scored.push((j, jittered_copent(&pair, policy, config)?));
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(FeatureRanking {
        feature_ids: scored.iter().map(|&(id, _)| id).collect(),
        scores: scored.iter().map(|&(_, s)| s).collect(),
        target_id: target,
    })
}
