//! Invariant Fock subspaces of one slice Hamiltonian.
//!
//! Acting with `a b† c†` on `|k, 0, 0⟩` walks through `|k − m, m, m⟩` for
//! `m = 0..=k` and nothing else, so every slice evolution out of a Fock state
//! of the black-hole mode lives in a `(k + 1)`-dimensional space. In that basis
//! `−iΔt H` is `θ (A − Aᵀ)` with `A` strictly lower bidiagonal and
//! `A[m + 1, m] = sqrt(k − m) (m + 1)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_N_MAX;
use crate::error::{Error, Result};

/// Number of quanta held by the black-hole mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OccupationCount(usize);

impl OccupationCount {
    /// Accepts `value` when it does not exceed the default cap.
    pub fn new(value: usize) -> Result<Self> {
        Self::with_cap(value, DEFAULT_N_MAX)
    }

    pub fn with_cap(value: usize, cap: usize) -> Result<Self> {
        if value > cap {
            return Err(Error::DimensionCap {
                requested: value,
                cap,
            });
        }
        Ok(Self(value))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for OccupationCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// One basis vector `|a, b, c⟩` of an invariant subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubspaceBasisElement {
    pub a_quanta: usize,
    pub b_quanta: usize,
    pub c_quanta: usize,
}

/// Basis of the subspace reached from `|k, 0, 0⟩`, ordered by emitted quanta.
///
/// Index 0 is `|k, 0, 0⟩`, the state annihilated by `a† b c`.
pub fn subspace_basis(k: OccupationCount) -> Vec<SubspaceBasisElement> {
    let k = k.get();
    (0..=k)
        .map(|m| SubspaceBasisElement {
            a_quanta: k - m,
            b_quanta: m,
            c_quanta: m,
        })
        .collect()
}

/// Coupling `⟨m + 1| a b† c† |m⟩` inside the subspace of total `k`.
#[inline]
pub fn coupling(k: usize, m: usize) -> f64 {
    debug_assert!(m < k);
    ((k - m) as f64).sqrt() * (m + 1) as f64
}

/// Real antisymmetric tridiagonal generator of one slice unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceGenerator {
    couplings: Vec<f64>,
    theta: f64,
}

impl SliceGenerator {
    /// Builds a generator from explicit couplings, e.g. for a slice with its
    /// own rotation scale.
    pub fn from_parts(couplings: Vec<f64>, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                requirement: "finite",
                value: theta,
            });
        }
        Ok(Self { couplings, theta })
    }

    pub fn dimension(&self) -> usize {
        self.couplings.len() + 1
    }

    /// The occupation `k` this generator was built for.
    pub fn occupation(&self) -> usize {
        self.couplings.len()
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Rotation scale `r0 · dt`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same couplings, different rotation scale.
    pub fn with_theta(&self, theta: f64) -> Self {
        Self {
            couplings: self.couplings.clone(),
            theta,
        }
    }

    /// Dense `θ (A − Aᵀ)`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.dimension();
        let mut g = DMatrix::zeros(d, d);
        for (m, &c) in self.couplings.iter().enumerate() {
            g[(m + 1, m)] = self.theta * c;
            g[(m, m + 1)] = -self.theta * c;
        }
        g
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            requirement: "positive and finite",
            value,
        })
    }
}

/// Generator of `exp(−i dt H)` with `H = i r0 (a b† c† − a† b c)` on the
/// subspace of total `k`.
pub fn slice_generator(k: OccupationCount, r0: f64, dt: f64) -> Result<SliceGenerator> {
    require_positive("r0", r0)?;
    require_positive("dt", dt)?;
    let k = k.get();
    Ok(SliceGenerator {
        couplings: (0..k).map(|m| coupling(k, m)).collect(),
        theta: r0 * dt,
    })
}
