//! Occupation-distribution dynamics of the black-hole mode.
//!
//! Each slice couples the black hole to a fresh `bc` vacuum, so the
//! probability of going from `i` to `j` quanta is the same `|u_{i→j}|²` in
//! every slice. The marginal of the black hole is therefore an absorbing
//! Markov chain on `0..=n` with a lower-triangular transition matrix, the
//! vacuum being the absorbing state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Limits, Tolerances};
use crate::error::{Error, Result};
use crate::fock::OccupationCount;
use crate::propagator::amplitude_table;

/// Logarithm used for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    Natural,
    Base(u32),
}

impl LogBase {
    pub fn new(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidLogBase(base));
        }
        Ok(Self::Base(base))
    }

    /// `n + 1`, which normalizes the maximal entropy over `0..=n` to one.
    /// Falls back to base 2 for `n = 0`, where every entropy is zero anyway.
    pub fn for_occupation(n: OccupationCount) -> Self {
        Self::Base((n.get() as u32 + 1).max(2))
    }

    pub fn ln(self) -> f64 {
        match self {
            Self::Natural => 1.0,
            Self::Base(b) => (b as f64).ln(),
        }
    }
}

/// Row-stochastic, lower-triangular `T[i][j] = P(j quanta after | i before)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: OccupationCount,
    // row-major (n+1)×(n+1)
    entries: Vec<f64>,
}

impl TransitionMatrix {
    pub fn occupation(&self) -> OccupationCount {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.n.get() + 1
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.entries[from * self.dimension() + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        let d = self.dimension();
        &self.entries[from * d..(from + 1) * d]
    }

    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.dimension())
            .map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// One slice: `q_j = Σ_{i ≥ j} p_i T[i][j]`.
    fn apply(&self, p: &[f64], out: &mut [f64]) {
        let d = self.dimension();
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, &pi) in p.iter().enumerate().skip(j) {
                acc += pi * self.entries[i * d + j];
            }
            *slot = acc;
        }
    }
}

pub fn transition_matrix(n: OccupationCount, r0: f64, dt: f64) -> Result<TransitionMatrix> {
    transition_matrix_with(n, r0, dt, &Tolerances::default(), &Limits::default())
}

pub fn transition_matrix_with(
    n: OccupationCount,
    r0: f64,
    dt: f64,
    tol: &Tolerances,
    limits: &Limits,
) -> Result<TransitionMatrix> {
    let table = amplitude_table(n, r0, dt, tol, limits)?;
    let d = n.get() + 1;
    let mut entries = vec![0.0; d * d];
    for (i, amps) in table.iter().enumerate() {
        for (j, p) in amps.probabilities().enumerate() {
            entries[i * d + j] = p;
        }
    }
    let t = TransitionMatrix { n, entries };
    let err = t.max_row_sum_error();
    if err > tol.row_sum {
        return Err(Error::NotNormalized {
            norm: 1.0 + err,
            tolerance: tol.row_sum,
        });
    }
    Ok(t)
}

/// Probabilities `p_j` of finding `j` quanta in the black-hole mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupationDistribution {
    probabilities: Vec<f64>,
}

impl OccupationDistribution {
    /// Fock state `|k⟩` embedded in `0..=n`.
    pub fn delta(n: OccupationCount, k: usize) -> Result<Self> {
        if k > n.get() {
            return Err(Error::InvalidOccupation(k));
        }
        let mut p = vec![0.0; n.get() + 1];
        p[k] = 1.0;
        Ok(Self { probabilities: p })
    }

    /// Accepts any non-negative vector summing to one within `slack`.
    pub fn from_probabilities(probabilities: Vec<f64>, slack: f64) -> Result<Self> {
        if probabilities.is_empty() || probabilities.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::InvalidParameter {
                name: "probabilities",
                requirement: "non-empty and non-negative",
                value: f64::NAN,
            });
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > slack {
            return Err(Error::NotNormalized {
                norm: total,
                tolerance: slack,
            });
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn vacuum(&self) -> f64 {
        self.probabilities[0]
    }

    pub fn mean_occupation(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(j, p)| j as f64 * p)
            .sum()
    }

    /// Zero-pads to `0..=n`.
    pub fn padded(&self, n: OccupationCount) -> Result<Self> {
        let d = n.get() + 1;
        if self.len() > d {
            return Err(Error::DimensionMismatch {
                occupation: n.get(),
                generator: self.len(),
            });
        }
        let mut p = self.probabilities.clone();
        p.resize(d, 0.0);
        Ok(Self { probabilities: p })
    }

    /// Convex combination `Σ w_i d_i` of equally sized distributions.
    pub fn mixture(parts: &[(f64, &OccupationDistribution)]) -> Self {
        let d = parts.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
        let mut out = vec![0.0; d];
        for (w, p) in parts {
            for (o, x) in out.iter_mut().zip(&p.probabilities) {
                *o += w * x;
            }
        }
        Self { probabilities: out }
    }
}

/// `p_k = |β_k|²` for a pure input `Σ β_k |k⟩`.
pub fn init_distribution(coefficients: &[Complex64]) -> Result<OccupationDistribution> {
    init_distribution_with(coefficients, &Tolerances::default())
}

pub fn init_distribution_with(
    coefficients: &[Complex64],
    tol: &Tolerances,
) -> Result<OccupationDistribution> {
    let p: Vec<f64> = coefficients.iter().map(|b| b.norm_sqr()).collect();
    OccupationDistribution::from_probabilities(p, tol.input_norm)
}

/// Stepwise evolution of a distribution under a fixed transition matrix.
///
/// After each slice the distribution is divided by its sum; the absolute
/// deviations of those sums from one are accumulated as drift, and a run
/// whose drift exceeds `Tolerances::max_drift` is aborted.
#[derive(Debug, Clone)]
pub struct MarkovChain {
    matrix: TransitionMatrix,
    current: OccupationDistribution,
    scratch: Vec<f64>,
    slice: usize,
    drift: f64,
    max_drift: f64,
}

impl MarkovChain {
    pub fn new(matrix: TransitionMatrix, start: OccupationDistribution) -> Result<Self> {
        Self::resume(matrix, start, 0, &Tolerances::default())
    }

    /// Continues an evolution whose distribution at `slice` is `state`.
    pub fn resume(
        matrix: TransitionMatrix,
        state: OccupationDistribution,
        slice: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        if state.len() != matrix.dimension() {
            return Err(Error::DimensionMismatch {
                occupation: matrix.occupation().get(),
                generator: state.len(),
            });
        }
        let d = matrix.dimension();
        Ok(Self {
            matrix,
            current: state,
            scratch: vec![0.0; d],
            slice,
            drift: 0.0,
            max_drift: tol.max_drift,
        })
    }

    pub fn slice(&self) -> usize {
        self.slice
    }

    pub fn current(&self) -> &OccupationDistribution {
        &self.current
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn step(&mut self) -> Result<&OccupationDistribution> {
        self.matrix
            .apply(&self.current.probabilities, &mut self.scratch);
        let total: f64 = self.scratch.iter().sum();
        self.drift += (total - 1.0).abs();
        self.slice += 1;
        if self.drift > self.max_drift || !total.is_finite() {
            return Err(Error::NormalizationDrift {
                drift: self.drift,
                limit: self.max_drift,
                slice: self.slice,
            });
        }
        let previous_vacuum = self.current.probabilities[0];
        for (dst, &src) in self.current.probabilities.iter_mut().zip(&self.scratch) {
            *dst = src / total;
        }
        // The unnormalized vacuum entry never decreases, but dividing by a
        // sum just above one can push it one ulp below its previous value.
        let vacuum = &mut self.current.probabilities[0];
        *vacuum = vacuum.max(previous_vacuum);
        Ok(&self.current)
    }
}

#[derive(Debug, Clone)]
pub struct Propagation {
    /// `steps + 1` distributions, the first being the input.
    pub distributions: Vec<OccupationDistribution>,
    pub drift: f64,
}

pub fn propagate(
    t: &TransitionMatrix,
    start: &OccupationDistribution,
    steps: usize,
) -> Result<Propagation> {
    let mut chain = MarkovChain::new(t.clone(), start.clone())?;
    let mut distributions = Vec::with_capacity(steps + 1);
    distributions.push(start.clone());
    for _ in 0..steps {
        distributions.push(chain.step()?.clone());
    }
    Ok(Propagation {
        distributions,
        drift: chain.drift(),
    })
}

/// Shannon entropy `−Σ p log p`, with `0 log 0 = 0`.
pub fn entropy(p: &OccupationDistribution, base: LogBase) -> f64 {
    shannon(p.probabilities(), base)
}

pub(crate) fn shannon(p: &[f64], base: LogBase) -> f64 {
    let h: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
    // -0.0 for pure states
    (h / base.ln()).max(0.0)
}

/// Trace distance `‖diag(p) − |0⟩⟨0|‖₁ = 2 (1 − p₀)`.
pub fn decoupling_distance(p: &OccupationDistribution) -> f64 {
    2.0 * (1.0 - p.vacuum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub slice: usize,
    pub time: f64,
    pub entropy: f64,
    #[serde(rename = "p0")]
    pub vacuum_probability: f64,
    pub mean_occupation: f64,
    pub decoupling_distance: f64,
}

impl CurveRecord {
    pub fn observe(slice: usize, dt: f64, p: &OccupationDistribution, base: LogBase) -> Self {
        Self {
            slice,
            time: slice as f64 * dt,
            entropy: entropy(p, base),
            vacuum_probability: p.vacuum(),
            mean_occupation: p.mean_occupation(),
            decoupling_distance: decoupling_distance(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub peak_entropy: f64,
    pub peak_slice: usize,
    pub final_entropy: f64,
    pub final_p0: f64,
    pub final_decoupling_distance: f64,
    pub normalization_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCurve {
    pub records: Vec<CurveRecord>,
    pub drift: f64,
}

impl EntropyCurve {
    pub fn summary(&self) -> Option<CurveSummary> {
        let last = self.records.last()?;
        // first maximum wins on ties
        let peak = self.records.iter().fold(&self.records[0], |best, r| {
            if r.entropy > best.entropy {
                r
            } else {
                best
            }
        });
        Some(CurveSummary {
            peak_entropy: peak.entropy,
            peak_slice: peak.slice,
            final_entropy: last.entropy,
            final_p0: last.vacuum_probability,
            final_decoupling_distance: last.decoupling_distance,
            normalization_drift: self.drift,
        })
    }
}

/// Entropy curve of the black hole started in `|n⟩`.
pub fn page_curve(
    n: OccupationCount,
    r0: f64,
    dt: f64,
    steps: usize,
    base: LogBase,
) -> Result<EntropyCurve> {
    let t = transition_matrix(n, r0, dt)?;
    let start = OccupationDistribution::delta(n, n.get())?;
    page_curve_from(t, start, dt, steps, base)
}

/// Entropy curve from an arbitrary starting distribution.
pub fn page_curve_from(
    t: TransitionMatrix,
    start: OccupationDistribution,
    dt: f64,
    steps: usize,
    base: LogBase,
) -> Result<EntropyCurve> {
    let mut records = Vec::with_capacity(steps + 1);
    records.push(CurveRecord::observe(0, dt, &start, base));
    let mut chain = MarkovChain::new(t, start)?;
    for _ in 0..steps {
        chain.step()?;
        records.push(CurveRecord::observe(
            chain.slice(),
            dt,
            chain.current(),
            base,
        ));
    }
    Ok(EntropyCurve {
        records,
        drift: chain.drift(),
    })
}
