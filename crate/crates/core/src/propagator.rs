//! One-slice propagators `exp(θ (A − Aᵀ))` on an invariant Fock subspace.
//!
//! The generator `G = θ (A − Aᵀ)` is conjugated by `D = diag(i^m)` into
//! `−i S`, where `S` is the real symmetric tridiagonal matrix with
//! off-diagonal `θ c_m`. With `S = V Λ Vᵀ`,
//!
//! ```text
//! exp(G)[j, l] = Re( i^(j − l) · Σ_q V[j, q] V[l, q] e^(−i λ_q) )
//! ```
//!
//! which is `±Σ V V cos λ` when `j − l` is even and `±Σ V V sin λ` when it is
//! odd. No series truncation is involved.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::config::{Limits, Tolerances};
use crate::error::{Error, Result};
use crate::fock::{slice_generator, OccupationCount, SliceGenerator};

/// Real orthogonal matrix; entry `[m', m]` is the amplitude from emitted
/// quanta `m` to `m'`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicePropagator {
    matrix: DMatrix<f64>,
}

impl SlicePropagator {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// `max |MᵀM − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.matrix)
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &SlicePropagator) -> SlicePropagator {
        SlicePropagator {
            matrix: &self.matrix * &first.matrix,
        }
    }

    /// Largest entrywise difference to another propagator of equal size.
    pub fn max_abs_diff(&self, other: &SlicePropagator) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }
}

pub(crate) fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let d = m.nrows();
    (m.transpose() * m - DMatrix::<f64>::identity(d, d)).amax()
}

/// Exact slice propagator with default tolerances and cap.
pub fn slice_propagator(gen: &SliceGenerator) -> Result<SlicePropagator> {
    slice_propagator_with(gen, &Tolerances::default(), &Limits::default())
}

pub fn slice_propagator_with(
    gen: &SliceGenerator,
    tol: &Tolerances,
    limits: &Limits,
) -> Result<SlicePropagator> {
    let k = gen.occupation();
    if k > limits.n_max {
        return Err(Error::DimensionCap {
            requested: k,
            cap: limits.n_max,
        });
    }
    let d = gen.dimension();
    let theta = gen.theta();
    if theta == 0.0 || d == 1 {
        return Ok(SlicePropagator {
            matrix: DMatrix::identity(d, d),
        });
    }

    let mut sym = DMatrix::<f64>::zeros(d, d);
    for (m, &c) in gen.couplings().iter().enumerate() {
        sym[(m + 1, m)] = theta * c;
        sym[(m, m + 1)] = theta * c;
    }
    let eigen = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::EigenFailure(d))?;
    let vecs = &eigen.eigenvectors;
    let cos: Vec<f64> = eigen.eigenvalues.iter().map(|l| l.cos()).collect();
    let sin: Vec<f64> = eigen.eigenvalues.iter().map(|l| l.sin()).collect();

    let mut out = DMatrix::<f64>::zeros(d, d);
    for j in 0..d {
        for l in 0..=j {
            let diff = j - l;
            let weights = if diff % 2 == 0 { &cos } else { &sin };
            let mut acc = 0.0;
            for q in 0..d {
                acc += vecs[(j, q)] * vecs[(l, q)] * weights[q];
            }
            // i^(j-l) and i^(l-j) pick opposite signs on odd offsets.
            let (lower, upper) = match diff % 4 {
                0 => (acc, acc),
                1 => (acc, -acc),
                2 => (-acc, -acc),
                _ => (-acc, acc),
            };
            out[(j, l)] = lower;
            out[(l, j)] = upper;
        }
    }

    let defect = orthogonality_defect(&out);
    if defect > tol.orthogonality {
        return Err(Error::NotOrthogonal {
            defect,
            tolerance: tol.orthogonality,
        });
    }
    Ok(SlicePropagator { matrix: out })
}

/// Amplitudes `u_j` that the black-hole mode holds `j` quanta after one slice
/// started from `|k⟩_a |0⟩_bc`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    start: OccupationCount,
    amplitudes: Vec<f64>,
}

impl AmplitudeVector {
    pub fn start_occupation(&self) -> OccupationCount {
        self.start
    }

    /// Indexed by the final occupation `j = 0..=k`.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|u| u * u)
    }

    pub fn norm_error(&self) -> f64 {
        (self.probabilities().sum::<f64>() - 1.0).abs()
    }
}

pub fn slice_amplitudes(k: OccupationCount, gen: &SliceGenerator) -> Result<AmplitudeVector> {
    slice_amplitudes_with(k, gen, &Tolerances::default(), &Limits::default())
}

pub fn slice_amplitudes_with(
    k: OccupationCount,
    gen: &SliceGenerator,
    tol: &Tolerances,
    limits: &Limits,
) -> Result<AmplitudeVector> {
    if gen.occupation() != k.get() {
        return Err(Error::DimensionMismatch {
            occupation: k.get(),
            generator: gen.dimension(),
        });
    }
    let prop = slice_propagator_with(gen, tol, limits)?;
    let kk = k.get();
    let amplitudes: Vec<f64> = (0..=kk).map(|j| prop.matrix[(kk - j, 0)]).collect();
    let v = AmplitudeVector {
        start: k,
        amplitudes,
    };
    let err = v.norm_error();
    if err > tol.amplitude_norm {
        return Err(Error::NotNormalized {
            norm: 1.0 + err,
            tolerance: tol.amplitude_norm,
        });
    }
    Ok(v)
}

/// Slice amplitudes for every start occupation `0..=n`, index = start.
pub fn amplitude_table(
    n: OccupationCount,
    r0: f64,
    dt: f64,
    tol: &Tolerances,
    limits: &Limits,
) -> Result<Vec<AmplitudeVector>> {
    (0..=n.get())
        .into_par_iter()
        .map(|k| {
            let k = OccupationCount::with_cap(k, limits.n_max)?;
            let gen = slice_generator(k, r0, dt)?;
            slice_amplitudes_with(k, &gen, tol, limits)
        })
        .collect()
}

/// Truncated power series of a slice generator.
#[derive(Debug, Clone)]
pub struct TaylorExpansion {
    pub propagator: SlicePropagator,
    pub order: usize,
    /// Bound on the max-entry error of the truncation, from the geometric
    /// tail `‖G‖^(p+1)/(p+1)! · 1/(1 − ‖G‖/(p+2))` in the max-row-sum norm.
    /// Infinite when that tail does not converge.
    pub remainder_bound: f64,
}

/// `Σ_{p ≤ order} G^p / p!`.
pub fn taylor_oracle(gen: &SliceGenerator, order: usize) -> Result<TaylorExpansion> {
    if order == 0 {
        return Err(Error::InvalidParameter {
            name: "order",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    let g = gen.matrix();
    let d = g.nrows();
    let norm = g
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);

    let mut sum = DMatrix::<f64>::identity(d, d);
    let mut term = DMatrix::<f64>::identity(d, d);
    let mut warned = false;
    for p in 1..=order {
        term = &term * &g / p as f64;
        if !warned && norm > 0.0 && term.amax() == 0.0 {
            log::warn!("taylor term {p} underflowed to zero; higher orders add nothing");
            warned = true;
        }
        sum += &term;
    }

    let next = order as f64 + 1.0;
    let ratio = norm / (next + 1.0);
    let remainder_bound = if ratio < 1.0 {
        // ln(‖G‖^(p+1) / (p+1)!) to stay finite for large orders
        let log_term = next * norm.ln() - ln_factorial(order + 1);
        log_term.exp() / (1.0 - ratio)
    } else {
        f64::INFINITY
    };

    Ok(TaylorExpansion {
        propagator: SlicePropagator { matrix: sum },
        order,
        remainder_bound: if norm == 0.0 { 0.0 } else { remainder_bound },
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}
