//! Discretized evolution of a single black-hole mode under the boson
//! trilinear Hamiltonian `H = i r (a b† c† − a† b c)`.
//!
//! Each time slice couples the black-hole mode `a` to a fresh vacuum pair
//! `b_i c_i`. The crate provides
//!
//! - [`fock`]: the invariant subspace reached from `|k⟩_a|0⟩_bc` and its generator,
//! - [`propagator`]: exact one-slice propagators and a Taylor-series oracle,
//! - [`markov`]: the occupation Markov chain, entropies and page curves,
//! - [`oracle`]: the exact joint state over occupation histories, used to
//!   certify every reduction made by [`markov`],
//! - [`semiclassical`]: squeezed-vacuum statistics and the temperature map.

pub mod config;
pub mod error;
pub mod fock;
pub mod markov;
pub mod oracle;
pub mod propagator;
pub mod semiclassical;

pub use config::{Limits, Tolerances};
pub use error::{Error, Result};
pub use fock::{
    slice_generator, subspace_basis, OccupationCount, SliceGenerator, SubspaceBasisElement,
};
pub use markov::{
    decoupling_distance, entropy, init_distribution, page_curve, page_curve_from, propagate,
    transition_matrix, CurveRecord, CurveSummary, EntropyCurve, LogBase, MarkovChain,
    OccupationDistribution, TransitionMatrix,
};
pub use num_complex::Complex64;
pub use oracle::{
    bc_symmetry_check, evolve_full, per_slice_radiation_entropy, radiation_overlap,
    reduced_blackhole, reduced_radiation, DensityMatrix, OccupationPath, PathEvolution, PathState,
};
pub use propagator::{
    slice_amplitudes, slice_propagator, taylor_oracle, AmplitudeVector, SlicePropagator,
};
