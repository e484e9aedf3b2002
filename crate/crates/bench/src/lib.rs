//! Fixed workloads shared by the benchmarks.

use evap_core::{OccupationCount, SliceGenerator};

/// Slice length used by every workload.
pub const DT: f64 = 1.0 / 15.0;

pub fn occupation(n: usize) -> OccupationCount {
    OccupationCount::new(n).expect("benchmark occupations stay below the cap")
}

pub fn generator(k: usize) -> SliceGenerator {
    evap_core::slice_generator(occupation(k), 1.0, DT).expect("valid parameters")
}
