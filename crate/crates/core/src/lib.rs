//! Nonparametric dependence estimation from raw multivariate samples.
//!
//! The core quantity is the negated copula entropy of a sample matrix, which
//! equals the mutual information of its columns. It is estimated in two
//! steps: a rank transform to empirical-copula pseudo-observations, then a
//! kNN differential-entropy estimate on those. Conditional independence and
//! transfer entropy are sums of copula-entropy terms on assembled matrices,
//! so the whole toolkit reduces to `copent` plus plumbing:
//!
//! ```
//! use cet_core::{copent, simulate_bivariate_gaussian, EstimatorConfig};
//!
//! let sample = simulate_bivariate_gaussian(0.75, 500, 1).unwrap();
//! let mi = copent(&sample, &EstimatorConfig::default()).unwrap();
//! assert!(mi > 0.1); // correlated columns carry information
//! ```
//!
//! Everything is deterministic: estimates are pure functions of their inputs,
//! simulation and jitter take explicit seeds, and ties in ranks or distances
//! break by fixed rules.

mod copula;
mod entropy;
mod error;
mod independence;
mod io;
mod matrix;
mod pipelines;
mod report;
mod special;

pub mod knn;

pub use copula::{empirical_copula, CopulaMatrix};
pub use entropy::{copent, entropy_knn, EntropyEstimate, EstimatorConfig};
pub use error::{Error, Result};
pub use independence::{
    ci, ci_vec, lag_scan, transent, LagScanResult, SeriesPair, DIRECTION_Y_TO_X,
};
pub use io::{load_csv, select_columns, ColumnSelector, IngestOptions, LoadedCsv, NaPolicy};
pub use knn::{kth_neighbor_distances, Norm};
pub use matrix::SampleMatrix;
pub use pipelines::{
    gaussian_reference_mi, jitter_average, jittered_copent, rank_features,
    simulate_bivariate_gaussian, FeatureRanking, JitterPolicy,
};
pub use report::{
    write_report, ConfigEcho, InputEcho, JitterEcho, Payload, Report, ReportFormat,
};
pub use special::{digamma, unit_ball_log_volume};
