//! Numerical tolerances and resource limits shared by every module.
//!
//! Defaults are the values the test and acceptance suites are written
//! against. Runs may override individual fields.

use serde::{Deserialize, Serialize};

/// Largest black-hole occupation accepted by the subspace builders.
pub const DEFAULT_N_MAX: usize = 200;

/// Largest number of monotone histories the path oracle will materialize.
pub const DEFAULT_PATH_BUDGET: u128 = 5_000_000;

/// Largest radiation dimension for which a dense density matrix is built.
pub const DEFAULT_DENSE_LIMIT: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `max |MᵀM − I|` allowed for a slice propagator.
    pub orthogonality: f64,
    /// `|Σ u_j² − 1|` allowed for one amplitude vector.
    pub amplitude_norm: f64,
    /// Row-sum error allowed in the transition matrix.
    pub row_sum: f64,
    /// Normalization slack for user supplied coefficient vectors.
    pub input_norm: f64,
    /// Cumulative renormalization drift at which a propagation aborts.
    pub max_drift: f64,
    /// Agreement between the Markov chain and the path oracle.
    pub oracle_agreement: f64,
    /// Norm slack for oracle path states.
    pub path_norm: f64,
    /// Agreement between the production exponential and the Taylor series.
    pub taylor_agreement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthogonality: 1e-12,
            amplitude_norm: 1e-12,
            row_sum: 1e-12,
            input_norm: 1e-9,
            max_drift: 1e-6,
            oracle_agreement: 1e-10,
            path_norm: 1e-10,
            taylor_agreement: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub n_max: usize,
    pub path_budget: u128,
    pub dense_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            path_budget: DEFAULT_PATH_BUDGET,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }
}
