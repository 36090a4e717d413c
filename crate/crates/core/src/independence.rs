//! Conditional independence and transfer entropy, built from copula entropy.
//!
//! I(x;y|z) decomposes into three copula-entropy terms, and transfer entropy
//! from y to x at a lag is that decomposition applied to time-shifted slices
//! of the two series. Nothing here estimates anything new — both quantities
//! are sums of `copent` calls on assembled matrices.

use ndarray::{Array2, ArrayView2};

use crate::entropy::{copent, EstimatorConfig};
use crate::error::{Error, Result};
use crate::matrix::SampleMatrix;

/// Direction label attached to every lag scan: the `y` series is the
/// candidate cause, `x` the candidate effect.
pub const DIRECTION_Y_TO_X: &str = "y\u{2192}x";

/// An aligned pair of equally long time series. `x` is the candidate effect,
/// `y` the candidate cause.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPair {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl SeriesPair {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
        }
        if x.len() < 2 {
            return Err(Error::TooFewRows { got: x.len(), need: 2 });
        }
        for (i, v) in x.iter().chain(y.iter()).enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i % x.len(), col: i / x.len() });
            }
        }
        Ok(SeriesPair { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Per-lag transfer-entropy estimates for one directed pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LagScanResult {
    pub lags: Vec<usize>,
    pub te_values: Vec<f64>,
    pub direction: &'static str,
}

/// Stacks column slices into a T×n matrix (columns in the given order).
fn assemble(cols: &[&[f64]]) -> Result<SampleMatrix> {
    SampleMatrix::from_columns(cols)
}

/// Conditional mutual information I(x;y|z) estimated as
/// copent([x,z,y]) − copent([x,z]) − copent([y,z]).
///
/// `z` may have any number of conditioning columns (one row per sample).
/// The column order inside each joint matrix is fixed so results are
/// bit-reproducible; copent itself is column-permutation invariant up to
/// float summation order.
pub fn ci(x: &[f64], y: &[f64], z: ArrayView2<'_, f64>, config: &EstimatorConfig) -> Result<f64> {
    let t = x.len();
    if y.len() != t {
        return Err(Error::LengthMismatch { left: t, right: y.len() });
    }
    if z.nrows() != t {
        return Err(Error::LengthMismatch { left: t, right: z.nrows() });
    }
    if z.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }

    let z_cols: Vec<Vec<f64>> = (0..z.ncols()).map(|j| z.column(j).to_vec()).collect();

    let mut xzy: Vec<&[f64]> = vec![x];
    xzy.extend(z_cols.iter().map(|c| c.as_slice()));
    xzy.push(y);

    let mut xz: Vec<&[f64]> = vec![x];
    xz.extend(z_cols.iter().map(|c| c.as_slice()));

    let mut yz: Vec<&[f64]> = vec![y];
    yz.extend(z_cols.iter().map(|c| c.as_slice()));

    let h_xzy = copent(&assemble(&xzy)?, config)?;
    let h_xz = copent(&assemble(&xz)?, config)?;
    let h_yz = copent(&assemble(&yz)?, config)?;
    Ok(h_xzy - h_xz - h_yz)
}

/// `ci` with a single conditioning series.
pub fn ci_vec(x: &[f64], y: &[f64], z: &[f64], config: &EstimatorConfig) -> Result<f64> {
    let zm = Array2::from_shape_vec((z.len(), 1), z.to_vec())
        .expect("column vector shape is always valid");
    ci(x, y, zm.view(), config)
}

/// Transfer entropy from `y` to `x` at the given positive lag:
/// I(x_{t+lag} ; y_t | x_t), i.e. `ci` on the future of x, the present of y,
/// conditioned on the present of x.
pub fn transent(x: &[f64], y: &[f64], lag: usize, config: &EstimatorConfig) -> Result<f64> {
    let t = x.len();
    if y.len() != t {
        return Err(Error::LengthMismatch { left: t, right: y.len() });
    }
    if lag == 0 || lag >= t || t - lag < config.k + 1 {
        return Err(Error::LagTooLarge { lag, t, k: config.k });
    }
    let x_future = &x[lag..];
    let x_now = &x[..t - lag];
    let y_now = &y[..t - lag];
    ci_vec(x_future, y_now, x_now, config)
}

/// Transfer entropy at every lag 1..=max_lag, direction y→x.
pub fn lag_scan(
    pair: &SeriesPair,
    max_lag: usize,
    config: &EstimatorConfig,
) -> Result<LagScanResult> {
    let t = pair.len();
    if max_lag == 0 || max_lag >= t || t - max_lag < config.k + 1 {
        return Err(Error::LagTooLarge { lag: max_lag, t, k: config.k });
    }
    let lags: Vec<usize> = (1..=max_lag).collect();
    let mut te_values = Vec::with_capacity(max_lag);
    for &lag in &lags {
        te_values.push(transent(pair.x(), pair.y(), lag, config)?);
    }
    Ok(LagScanResult { lags, te_values, direction: DIRECTION_Y_TO_X })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knn::Norm;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    }

    #[test]
    fn ci_equals_three_copent_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let (x, y, z) = (noise(&mut rng, 60), noise(&mut rng, 60), noise(&mut rng, 60));
        let cfg = EstimatorConfig::default();
        let got = ci_vec(&x, &y, &z, &cfg).unwrap();
        let xzy = SampleMatrix::from_columns(&[&x, &z, &y]).unwrap();
        let xz = SampleMatrix::from_columns(&[&x, &z]).unwrap();
        let yz = SampleMatrix::from_columns(&[&y, &z]).unwrap();
        let want =
            copent(&xzy, &cfg).unwrap() - copent(&xz, &cfg).unwrap() - copent(&yz, &cfg).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn ci_symmetric_in_first_two_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let (x, y, z) = (noise(&mut rng, 80), noise(&mut rng, 80), noise(&mut rng, 80));
        for &norm in &[Norm::MaxNorm, Norm::Euclidean] {
            let cfg = EstimatorConfig::new(3, norm);
            let a = ci_vec(&x, &y, &z, &cfg).unwrap();
            let b = ci_vec(&y, &x, &z, &cfg).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn near_copy_gives_large_ci() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let x = noise(&mut rng, 1000);
        let y: Vec<f64> =
            x.iter().map(|v| v + 0.01 * rng.sample::<f64, _>(StandardNormal)).collect();
        let z = noise(&mut rng, 1000);
        let v = ci_vec(&x, &y, &z, &EstimatorConfig::default()).unwrap();
        assert!(v > 0.5, "ci of a near-copy should be large, got {v}");
    }

    #[test]
    fn transent_is_ci_on_slices() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let (x, y) = (noise(&mut rng, 120), noise(&mut rng, 120));
        let cfg = EstimatorConfig::default();
        for lag in [1usize, 5, 11] {
            let got = transent(&x, &y, lag, &cfg).unwrap();
            let t = x.len();
            let want = ci_vec(&x[lag..], &y[..t - lag], &x[..t - lag], &cfg).unwrap();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn lag_scan_equals_individual_calls() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let pair = SeriesPair::new(noise(&mut rng, 90), noise(&mut rng, 90)).unwrap();
        let cfg = EstimatorConfig::default();
        let scan = lag_scan(&pair, 3, &cfg).unwrap();
        assert_eq!(scan.lags, vec![1, 2, 3]);
        assert_eq!(scan.direction, DIRECTION_Y_TO_X);
        for (i, &lag) in scan.lags.iter().enumerate() {
            assert_eq!(scan.te_values[i], transent(pair.x(), pair.y(), lag, &cfg).unwrap());
        }
    }

    #[test]
    fn lag_bounds_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let (x, y) = (noise(&mut rng, 10), noise(&mut rng, 10));
        let cfg = EstimatorConfig::default();
        assert!(matches!(transent(&x, &y, 0, &cfg), Err(Error::LagTooLarge { .. })));
        assert!(matches!(transent(&x, &y, 7, &cfg), Err(Error::LagTooLarge { .. })));
        assert!(transent(&x, &y, 6, &cfg).is_ok());
        let pair = SeriesPair::new(x, y).unwrap();
        assert!(matches!(lag_scan(&pair, 7, &cfg), Err(Error::LagTooLarge { .. })));
    }

    #[test]
    fn series_pair_validation() {
        assert!(SeriesPair::new(vec![1.0], vec![1.0]).is_err());
        assert!(SeriesPair::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(SeriesPair::new(vec![1.0, f64::INFINITY], vec![0.0, 1.0]).is_err());
        assert!(SeriesPair::new(vec![1.0, 2.0], vec![3.0, 4.0]).is_ok());
    }
}
