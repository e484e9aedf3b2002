//! Exact joint state of the black hole and all emitted `bc` pairs.
//!
//! After `N` slices the state is `Σ_paths amp(path) |j_N⟩_a ⊗ |record(path)⟩_bc`
//! where a path is a non-increasing history `n ≥ j_1 ≥ … ≥ j_N ≥ 0` and its
//! record is the list of pairs emitted in each slice. A record fixes the path,
//! so storing one amplitude per path is lossless. Paths are kept as the sparse
//! list of slices in which something was emitted.
//!
//! Every reduced state below is obtained by an explicit partial trace over the
//! path representation, never by assuming the structure it is meant to check.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::config::{Limits, Tolerances};
use crate::error::{Error, Result};
use crate::fock::{subspace_basis, OccupationCount};
use crate::markov::{shannon, LogBase, OccupationDistribution};
use crate::propagator::{amplitude_table, AmplitudeVector};

/// `quanta` pairs emitted into `b_i c_i` during slice `slice` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Emission {
    pub slice: u32,
    pub quanta: u32,
}

/// Monotone occupation history, stored as its emission events.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OccupationPath {
    emissions: SmallVec<[Emission; 4]>,
}

impl OccupationPath {
    /// Rejects histories that increase or start above `start`.
    pub fn from_history(start: usize, history: &[usize]) -> Option<Self> {
        let mut prev = start;
        let mut emissions = SmallVec::new();
        for (i, &j) in history.iter().enumerate() {
            if j > prev {
                return None;
            }
            if j < prev {
                emissions.push(Emission {
                    slice: i as u32 + 1,
                    quanta: (prev - j) as u32,
                });
            }
            prev = j;
        }
        Some(Self { emissions })
    }

    /// `(j_1, …, j_N)`.
    pub fn history(&self, start: usize, slices: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(slices);
        let mut j = start;
        let mut events = self.emissions.iter().peekable();
        for i in 1..=slices as u32 {
            if let Some(e) = events.next_if(|e| e.slice == i) {
                j -= e.quanta as usize;
            }
            out.push(j);
        }
        out
    }

    pub fn emissions(&self) -> &[Emission] {
        &self.emissions
    }

    pub fn emitted_at(&self, slice: usize) -> usize {
        self.emissions
            .iter()
            .find(|e| e.slice as usize == slice)
            .map_or(0, |e| e.quanta as usize)
    }

    pub fn total_emitted(&self) -> usize {
        self.emissions.iter().map(|e| e.quanta as usize).sum()
    }

    fn extended(&self, slice: u32, quanta: u32) -> Self {
        let mut emissions = self.emissions.clone();
        if quanta > 0 {
            emissions.push(Emission { slice, quanta });
        }
        Self { emissions }
    }

    fn without_slice(&self, slice: usize) -> SmallVec<[Emission; 4]> {
        self.emissions
            .iter()
            .filter(|e| e.slice as usize != slice)
            .copied()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathEntry {
    pub path: OccupationPath,
    /// `j_N`.
    pub occupation: usize,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    start: OccupationCount,
    slices: usize,
    entries: Vec<PathEntry>,
}

impl PathState {
    pub fn start(&self) -> OccupationCount {
        self.start
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    pub fn entries(&self) -> &[PathEntry] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|e| e.amplitude != 0.0).count()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|e| e.amplitude * e.amplitude).sum()
    }

    pub fn amplitude_of(&self, history: &[usize]) -> Option<f64> {
        if history.len() != self.slices {
            return None;
        }
        let path = OccupationPath::from_history(self.start.get(), history)?;
        self.entries
            .iter()
            .find(|e| e.path == path)
            .map(|e| e.amplitude)
    }
}

/// `C(slices + n, n)` monotone histories, saturating.
pub fn path_count(n: usize, slices: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 1..=n as u128 {
        c = match c.checked_mul(slices as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    c
}

pub fn evolve_full(n: OccupationCount, r0: f64, dt: f64, slices: usize) -> Result<PathState> {
    evolve_full_with(
        n,
        r0,
        dt,
        slices,
        &Tolerances::default(),
        &Limits::default(),
    )
}

pub fn evolve_full_with(
    n: OccupationCount,
    r0: f64,
    dt: f64,
    slices: usize,
    tol: &Tolerances,
    limits: &Limits,
) -> Result<PathState> {
    let table = amplitude_table(n, r0, dt, tol, limits)?;
    evolve_with_table(n, &table, slices, tol, limits)
}

/// Evolution of `|start⟩` with precomputed amplitudes for every occupation
/// up to at least `start`.
pub fn evolve_with_table(
    start: OccupationCount,
    table: &[AmplitudeVector],
    slices: usize,
    tol: &Tolerances,
    limits: &Limits,
) -> Result<PathState> {
    let required = path_count(start.get(), slices);
    if required > limits.path_budget {
        return Err(Error::PathBudget {
            required,
            budget: limits.path_budget,
        });
    }
    let mut evolution = PathEvolution::new(start, table, limits)?;
    for _ in 0..slices {
        evolution.step()?;
    }
    let state = evolution.into_state();
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > tol.path_norm {
        return Err(Error::NotNormalized {
            norm,
            tolerance: tol.path_norm,
        });
    }
    Ok(state)
}

/// Slice-by-slice construction of a [`PathState`].
#[derive(Debug)]
pub struct PathEvolution<'a> {
    table: &'a [AmplitudeVector],
    state: PathState,
    budget: u128,
}

impl<'a> PathEvolution<'a> {
    pub fn new(
        start: OccupationCount,
        table: &'a [AmplitudeVector],
        limits: &Limits,
    ) -> Result<Self> {
        if table.len() <= start.get() {
            return Err(Error::InvalidOccupation(start.get()));
        }
        Ok(Self {
            table,
            state: PathState {
                start,
                slices: 0,
                entries: vec![PathEntry {
                    path: OccupationPath::default(),
                    occupation: start.get(),
                    amplitude: 1.0,
                }],
            },
            budget: limits.path_budget,
        })
    }

    pub fn state(&self) -> &PathState {
        &self.state
    }

    pub fn into_state(self) -> PathState {
        self.state
    }

    /// Applies one more slice; each history spawns one child per outcome.
    pub fn step(&mut self) -> Result<&PathState> {
        let slice = self.state.slices + 1;
        let required = path_count(self.state.start.get(), slice);
        if required > self.budget {
            return Err(Error::PathBudget {
                required,
                budget: self.budget,
            });
        }
        let table = self.table;
        let tag = slice as u32;
        self.state.entries = self
            .state
            .entries
            .par_iter()
            .flat_map_iter(|e| {
                let amps = table[e.occupation].amplitudes();
                (0..=e.occupation).rev().map(move |j| PathEntry {
                    path: e.path.extended(tag, (e.occupation - j) as u32),
                    occupation: j,
                    amplitude: e.amplitude * amps[j],
                })
            })
            .collect();
        self.state.slices = slice;
        Ok(&self.state)
    }
}

/// Real symmetric unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<f64>,
}

impl DensityMatrix {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dimension();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.matrix[(i, j)].abs());
                }
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let d = self.dimension();
        let eig = SymmetricEigen::try_new(self.matrix.clone(), f64::EPSILON, 0)
            .ok_or(Error::EigenFailure(d))?;
        Ok(eig.eigenvalues.iter().copied().collect())
    }

    /// von Neumann entropy; eigenvalues at round-off level below zero are
    /// dropped.
    pub fn entropy(&self, base: LogBase) -> Result<f64> {
        Ok(shannon(&self.eigenvalues()?, base))
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|x| x * x).sum()
    }
}

fn occupation_range(ps: &PathState) -> usize {
    ps.start.get() + 1
}

/// `ϑ_a' = Tr_bc |Ψ⟩⟨Ψ|`.
pub fn reduced_blackhole(ps: &PathState) -> DensityMatrix {
    let d = occupation_range(ps);
    let mut groups: HashMap<&[Emission], Vec<(usize, f64)>> = HashMap::new();
    for e in &ps.entries {
        groups
            .entry(e.path.emissions())
            .or_default()
            .push((e.occupation, e.amplitude));
    }
    let mut m = DMatrix::zeros(d, d);
    for members in groups.values() {
        for &(j, x) in members {
            for &(l, y) in members {
                m[(j, l)] += x * y;
            }
        }
    }
    DensityMatrix { matrix: m }
}

/// Diagonal of `ϑ_a'` as a distribution.
pub fn blackhole_distribution(ps: &PathState) -> OccupationDistribution {
    let rho = reduced_blackhole(ps);
    OccupationDistribution::from_probabilities(rho.diagonal(), f64::INFINITY)
        .expect("diagonal of a density matrix is non-negative")
}

/// Dense `ϑ_bc = Tr_a' |Ψ⟩⟨Ψ|` over the distinct emission records.
pub fn reduced_radiation(ps: &PathState, limits: &Limits) -> Result<DensityMatrix> {
    let mut index: HashMap<&[Emission], usize> = HashMap::new();
    for e in &ps.entries {
        let next = index.len();
        index.entry(e.path.emissions()).or_insert(next);
    }
    let dim = index.len();
    if dim > limits.dense_limit {
        return Err(Error::DenseLimit {
            required: dim,
            limit: limits.dense_limit,
        });
    }
    // one column of ψ per black-hole occupation
    let mut by_occupation: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
    for e in &ps.entries {
        by_occupation
            .entry(e.occupation)
            .or_default()
            .push((index[e.path.emissions()], e.amplitude));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for column in by_occupation.values() {
        for &(r, x) in column {
            for &(s, y) in column {
                m[(r, s)] += x * y;
            }
        }
    }
    Ok(DensityMatrix { matrix: m })
}

/// Hilbert–Schmidt overlap `Tr[ϑ_bc(ψ) ϑ_bc(φ)]`, joined on emission records.
pub fn radiation_inner(psi: &PathState, phi: &PathState) -> f64 {
    let mut lookup: HashMap<&[Emission], Vec<(usize, f64)>> = HashMap::new();
    for e in &phi.entries {
        lookup
            .entry(e.path.emissions())
            .or_default()
            .push((e.occupation, e.amplitude));
    }
    // G[j][l] = Σ_r ψ(j, r) φ(l, r); Tr[ρσ] = Σ G²
    let mut gram: HashMap<(usize, usize), f64> = HashMap::new();
    for e in &psi.entries {
        if let Some(matches) = lookup.get(e.path.emissions()) {
            for &(l, y) in matches {
                *gram.entry((e.occupation, l)).or_default() += e.amplitude * y;
            }
        }
    }
    gram.values().map(|g| g * g).sum()
}

/// `Tr[ϑ_bc(|k⟩) ϑ_bc(|k'⟩)]` after `slices` slices; the purity when `k = k'`.
#[allow(clippy::too_many_arguments)]
pub fn radiation_overlap(
    n: OccupationCount,
    k: usize,
    k_prime: usize,
    r0: f64,
    dt: f64,
    slices: usize,
    tol: &Tolerances,
    limits: &Limits,
) -> Result<f64> {
    for &x in &[k, k_prime] {
        if x > n.get() {
            return Err(Error::InvalidOccupation(x));
        }
    }
    let table = amplitude_table(n, r0, dt, tol, limits)?;
    let psi = evolve_with_table(
        OccupationCount::with_cap(k, limits.n_max)?,
        &table,
        slices,
        tol,
        limits,
    )?;
    if k == k_prime {
        return Ok(radiation_inner(&psi, &psi));
    }
    let phi = evolve_with_table(
        OccupationCount::with_cap(k_prime, limits.n_max)?,
        &table,
        slices,
        tol,
        limits,
    )?;
    Ok(radiation_inner(&psi, &phi))
}

/// Marginal on `b_i c_i`, indexed by the number of pairs in that slice.
pub fn slice_radiation_state(ps: &PathState, slice: usize) -> Result<DensityMatrix> {
    if slice == 0 || slice > ps.slices {
        return Err(Error::InvalidSlice {
            index: slice,
            slices: ps.slices,
        });
    }
    let d = occupation_range(ps);
    type Rest = (usize, SmallVec<[Emission; 4]>);
    let mut groups: HashMap<Rest, Vec<(usize, f64)>> = HashMap::new();
    for e in &ps.entries {
        groups
            .entry((e.occupation, e.path.without_slice(slice)))
            .or_default()
            .push((e.path.emitted_at(slice), e.amplitude));
    }
    let mut m = DMatrix::zeros(d, d);
    for members in groups.values() {
        for &(a, x) in members {
            for &(b, y) in members {
                m[(a, b)] += x * y;
            }
        }
    }
    Ok(DensityMatrix { matrix: m })
}

pub fn per_slice_radiation_entropy(ps: &PathState, slice: usize, base: LogBase) -> Result<f64> {
    slice_radiation_state(ps, slice)?.entropy(base)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcSymmetry {
    pub symmetric: bool,
    pub max_deviation: f64,
}

type Record = Vec<usize>;

/// Compares the marginal of all `b` modes with the marginal of all `c` modes.
pub fn bc_symmetry_check(ps: &PathState) -> BcSymmetry {
    let start = ps.start.get();
    // per path: (a', b record, c record) from the subspace basis of each slice
    let tuples: Vec<(usize, Record, Record, f64)> = ps
        .entries
        .iter()
        .map(|e| {
            let mut before = start;
            let mut b = Vec::with_capacity(ps.slices);
            let mut c = Vec::with_capacity(ps.slices);
            for (i, j) in e.path.history(start, ps.slices).into_iter().enumerate() {
                let basis = subspace_basis(OccupationCount::with_cap(before, usize::MAX).unwrap());
                let el = basis[e.path.emitted_at(i + 1)];
                debug_assert_eq!(el.a_quanta, j);
                b.push(el.b_quanta);
                c.push(el.c_quanta);
                before = j;
            }
            (e.occupation, b, c, e.amplitude)
        })
        .collect();

    let marginal = |keep_b: bool| {
        let mut groups: HashMap<(usize, &Record), Vec<(&Record, f64)>> = HashMap::new();
        for (a, b, c, x) in &tuples {
            let (kept, traced) = if keep_b { (b, c) } else { (c, b) };
            groups.entry((*a, traced)).or_default().push((kept, *x));
        }
        let mut rho: HashMap<(Record, Record), f64> = HashMap::new();
        for members in groups.values() {
            for (r, x) in members {
                for (s, y) in members {
                    *rho.entry(((*r).clone(), (*s).clone())).or_default() += x * y;
                }
            }
        }
        rho
    };
    let rho_b = marginal(true);
    let rho_c = marginal(false);
    let mut worst = 0.0f64;
    for (key, x) in &rho_b {
        worst = worst.max((x - rho_c.get(key).copied().unwrap_or(0.0)).abs());
    }
    for (key, y) in &rho_c {
        if !rho_b.contains_key(key) {
            worst = worst.max(y.abs());
        }
    }
    BcSymmetry {
        symmetric: worst == 0.0,
        max_deviation: worst,
    }
}
