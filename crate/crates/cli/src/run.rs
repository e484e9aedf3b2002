use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use evap_core::markov::transition_matrix_with;
use evap_core::oracle::{
    blackhole_distribution, path_count, radiation_inner, reduced_blackhole, reduced_radiation,
};
use evap_core::propagator::amplitude_table;
use evap_core::semiclassical::{
    hawking_temperature, mass_from_temperature, squeezed_distribution, SqueezingParameter,
};
use evap_core::{
    bc_symmetry_check, entropy, CurveRecord, EntropyCurve, Error, MarkovChain, OccupationCount,
    OccupationDistribution, PathEvolution,
};
use log::{info, warn};
use serde::Serialize;

use crate::checkpoint::{checkpoint_path, Checkpoint};
use crate::config::{Mode, OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::plot::render_svg;
use crate::report::{write_csv_rows, write_curve_csv, write_json, RunReport};

/// Runs the configured mode and writes its data to `--output` or stdout.
pub fn execute(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    let started = Instant::now();
    match cfg.mode {
        Mode::PageCurve => {
            let report = run(cfg)?;
            emit(cfg, |w| match cfg.format {
                OutputFormat::Csv => write_curve_csv(w, &report.records),
                OutputFormat::Json => {
                    write_json(w, &report.config, &report.records, &report.summary)
                }
            })?;
            let s = &report.summary;
            eprintln!(
                "peak entropy {:.6} at slice {}; final entropy {:.3e}, p0 {:.12}, drift {:.3e}",
                s.peak_entropy, s.peak_slice, s.final_entropy, s.final_p0, s.normalization_drift
            );
        }
        Mode::OracleCompare => {
            let report = oracle_compare(cfg)?;
            emit(cfg, |w| match cfg.format {
                OutputFormat::Csv => write_csv_rows(w, &report.slices),
                OutputFormat::Json => write_json(w, &cfg.echo(), &report.slices, &report.summary),
            })?;
            report.print_summary();
            report.check(cfg)?;
        }
        Mode::SliceDump => {
            let rows = slice_dump(cfg)?;
            emit(cfg, |w| match cfg.format {
                OutputFormat::Csv => write_csv_rows(w, &rows),
                OutputFormat::Json => write_json(w, &cfg.echo(), &rows, &serde_json::Value::Null),
            })?;
        }
        Mode::Semiclassical => {
            let (rows, summary) = semiclassical(cfg)?;
            emit(cfg, |w| match cfg.format {
                OutputFormat::Csv => write_csv_rows(w, &rows),
                OutputFormat::Json => write_json(w, &cfg.echo(), &rows, &summary),
            })?;
            eprintln!(
                "mean occupation {:.6e}, tail mass {:.3e}, temperature {}, mass {}",
                summary.mean_occupation,
                summary.tail_mass,
                fmt_opt(summary.temperature),
                fmt_opt(summary.mass)
            );
        }
    }
    eprintln!("elapsed {:.3} s", started.elapsed().as_secs_f64());
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".into(), |v| format!("{v:.6e}"))
}

fn emit(cfg: &RunConfig, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cfg.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush().map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Page-curve run, with optional resume, checkpoints and plot.
///
/// A resumed run starts its records at the checkpointed slice; its summary
/// and drift cover only the resumed part.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let started = Instant::now();
    let n = cfg.occupation()?;
    let base = cfg.effective_log_base()?;
    let t = transition_matrix_with(n, cfg.r0, cfg.dt, &cfg.tolerances, &cfg.limits)?;

    let (start, first) = match &cfg.resume {
        Some(path) => {
            let ck = Checkpoint::load(path)?;
            if ck.config_hash != cfg.hash() {
                return Err(CliError::Checkpoint {
                    path: path.clone(),
                    reason: "written by a different configuration".into(),
                });
            }
            if ck.slice > cfg.steps {
                return Err(CliError::Checkpoint {
                    path: path.clone(),
                    reason: format!("slice {} is past steps = {}", ck.slice, cfg.steps),
                });
            }
            let dist = OccupationDistribution::from_probabilities(
                ck.probabilities,
                cfg.tolerances.input_norm,
            )
            .map_err(|e| CliError::Checkpoint {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            info!("resuming from slice {}", ck.slice);
            (dist, ck.slice)
        }
        None => (OccupationDistribution::delta(n, n.get())?, 0),
    };

    let ckpt = match (cfg.checkpoint_every, &cfg.output) {
        (Some(every), Some(out)) => Some((every, checkpoint_path(out))),
        _ => None,
    };
    let hash = cfg.hash();
    let store = |chain: &MarkovChain| -> Result<()> {
        if let Some((every, path)) = &ckpt {
            if chain.slice().is_multiple_of(*every) {
                Checkpoint {
                    config_hash: hash.clone(),
                    slice: chain.slice(),
                    probabilities: chain.current().probabilities().to_vec(),
                }
                .store(path)?;
            }
        }
        Ok(())
    };

    let mut records = Vec::with_capacity(cfg.steps - first + 1);
    let mut chain = MarkovChain::resume(t, start, first, &cfg.tolerances)?;
    records.push(CurveRecord::observe(first, cfg.dt, chain.current(), base));
    while chain.slice() < cfg.steps {
        chain.step()?;
        records.push(CurveRecord::observe(
            chain.slice(),
            cfg.dt,
            chain.current(),
            base,
        ));
        store(&chain)?;
    }
    let curve = EntropyCurve {
        records,
        drift: chain.drift(),
    };
    let summary = curve.summary().expect("at least one record");
    if let Some(path) = &cfg.plot {
        write_file(path, &render_svg(&curve.records))?;
    }
    Ok(RunReport {
        config: cfg.echo(),
        records: curve.records,
        summary,
        timing: started.elapsed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceComparison {
    pub slice: usize,
    pub max_diagonal_deviation: f64,
    pub max_off_diagonal: f64,
    pub markov_entropy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Overlap {
    pub k: usize,
    pub k_prime: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareSummary {
    pub slices: usize,
    pub paths: usize,
    pub max_diagonal_deviation: f64,
    pub max_off_diagonal: f64,
    /// `|S(ϑ_a') − S(ϑ_bc)|` after the last slice; absent when the radiation
    /// state is too large to diagonalize.
    pub entropy_gap: Option<f64>,
    pub bc_max_deviation: f64,
    /// `Tr[ϑ_bc(k) ϑ_bc(k')]` after the last slice for all `k ≤ k' ≤ n`.
    pub overlaps: Vec<Overlap>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub slices: Vec<SliceComparison>,
    pub summary: CompareSummary,
}

impl CompareReport {
    pub fn print_summary(&self) {
        let s = &self.summary;
        eprintln!(
            "{} slices, {} paths: max diagonal deviation {:.3e}, max off-diagonal {:.3e}, b/c deviation {:.3e}",
            s.slices, s.paths, s.max_diagonal_deviation, s.max_off_diagonal, s.bc_max_deviation
        );
        if let Some(gap) = s.entropy_gap {
            eprintln!("entropy gap black hole vs radiation {gap:.3e}");
        }
        for o in &s.overlaps {
            eprintln!("Tr[rho({}) rho({})] = {:.12}", o.k, o.k_prime, o.value);
        }
    }

    /// Fails with a tolerance error if the two descriptions disagree.
    pub fn check(&self, cfg: &RunConfig) -> Result<()> {
        let tol = cfg.tolerances.oracle_agreement;
        let s = &self.summary;
        let worst = [
            ("diagonal deviation", s.max_diagonal_deviation),
            ("off-diagonal magnitude", s.max_off_diagonal),
            ("b/c asymmetry", s.bc_max_deviation),
            ("entropy gap", s.entropy_gap.unwrap_or(0.0)),
        ];
        for (what, v) in worst {
            if v.is_nan() || v > tol {
                return Err(CliError::Tolerance(format!(
                    "{what} {v:.3e} exceeds {tol:.1e}"
                )));
            }
        }
        Ok(())
    }
}

/// Runs the Markov chain and the full path-sum state side by side.
pub fn oracle_compare(cfg: &RunConfig) -> Result<CompareReport> {
    cfg.validate()?;
    let n = cfg.occupation()?;
    let slices = cfg.steps;
    let required = path_count(n.get(), slices);
    if required > cfg.limits.path_budget {
        return Err(Error::PathBudget {
            required,
            budget: cfg.limits.path_budget,
        }
        .into());
    }
    let base = cfg.effective_log_base()?;
    let tol = &cfg.tolerances;
    let table = amplitude_table(n, cfg.r0, cfg.dt, tol, &cfg.limits)?;
    let t = transition_matrix_with(n, cfg.r0, cfg.dt, tol, &cfg.limits)?;
    let mut chain = MarkovChain::resume(t, OccupationDistribution::delta(n, n.get())?, 0, tol)?;
    let mut evolution = PathEvolution::new(n, &table, &cfg.limits)?;

    let compare = |slice: usize, chain: &MarkovChain, state: &evap_core::PathState| {
        let rho = reduced_blackhole(state);
        let dev = rho
            .diagonal()
            .iter()
            .zip(chain.current().probabilities())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        SliceComparison {
            slice,
            max_diagonal_deviation: dev,
            max_off_diagonal: rho.max_off_diagonal(),
            markov_entropy: entropy(chain.current(), base),
        }
    };

    let mut rows = vec![compare(0, &chain, evolution.state())];
    for s in 1..=slices {
        chain.step()?;
        evolution.step()?;
        rows.push(compare(s, &chain, evolution.state()));
    }
    let state = evolution.into_state();
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > tol.path_norm {
        return Err(CliError::Tolerance(format!(
            "path-sum norm {norm} off by more than {:.1e}",
            tol.path_norm
        )));
    }

    let entropy_gap = match reduced_radiation(&state, &cfg.limits) {
        Ok(rho_bc) => {
            let s_bc = rho_bc.entropy(base)?;
            let s_a = entropy(&blackhole_distribution(&state), base);
            Some((s_a - s_bc).abs())
        }
        Err(Error::DenseLimit { required, limit }) => {
            warn!("radiation state has {required} records (limit {limit}); skipping entropy gap");
            None
        }
        Err(e) => return Err(e.into()),
    };

    let mut finals = Vec::with_capacity(n.get() + 1);
    for k in 0..=n.get() {
        if k == n.get() {
            finals.push(state.clone());
        } else {
            let k = OccupationCount::with_cap(k, cfg.limits.n_max)?;
            let mut ev = PathEvolution::new(k, &table, &cfg.limits)?;
            for _ in 0..slices {
                ev.step()?;
            }
            finals.push(ev.into_state());
        }
    }
    let mut overlaps = Vec::new();
    for k in 0..finals.len() {
        for kp in k..finals.len() {
            overlaps.push(Overlap {
                k,
                k_prime: kp,
                value: radiation_inner(&finals[k], &finals[kp]),
            });
        }
    }

    let summary = CompareSummary {
        slices,
        paths: state.support_size(),
        max_diagonal_deviation: rows
            .iter()
            .map(|r| r.max_diagonal_deviation)
            .fold(0.0, f64::max),
        max_off_diagonal: rows.iter().map(|r| r.max_off_diagonal).fold(0.0, f64::max),
        entropy_gap,
        bc_max_deviation: bc_symmetry_check(&state).max_deviation,
        overlaps,
    };
    Ok(CompareReport {
        slices: rows,
        summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceDumpRow {
    pub from: usize,
    pub to: usize,
    pub amplitude: f64,
    pub probability: f64,
}

/// One-slice amplitudes `⟨j|U|k⟩` for every `k ≤ n`.
pub fn slice_dump(cfg: &RunConfig) -> Result<Vec<SliceDumpRow>> {
    let n = cfg.occupation()?;
    let table = amplitude_table(n, cfg.r0, cfg.dt, &cfg.tolerances, &cfg.limits)?;
    Ok(table
        .iter()
        .enumerate()
        .flat_map(|(from, amps)| {
            amps.amplitudes()
                .iter()
                .enumerate()
                .map(move |(to, &a)| SliceDumpRow {
                    from,
                    to,
                    amplitude: a,
                    probability: a * a,
                })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub m: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiclassicalSummary {
    pub squeezing: f64,
    pub mean_occupation: f64,
    pub truncated_mean: f64,
    pub tail_mass: f64,
    pub temperature: Option<f64>,
    pub mass: Option<f64>,
}

/// Thermal spectrum and temperature for cumulative squeezing `squeezing`.
pub fn semiclassical(cfg: &RunConfig) -> Result<(Vec<SpectrumRow>, SemiclassicalSummary)> {
    let r = SqueezingParameter::new(cfg.squeezing)?;
    let spectrum = squeezed_distribution(r, cfg.m_max);
    let temperature = match hawking_temperature(r, 1.0, cfg.omega, cfg.reading) {
        Ok(t) => Some(t),
        Err(Error::OutOfDomain { value, domain }) => {
            warn!("temperature undefined at r t = {value} (needs {domain})");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mass = temperature.and_then(|t| mass_from_temperature(t).ok());
    let rows = spectrum
        .probabilities
        .iter()
        .enumerate()
        .map(|(m, &p)| SpectrumRow { m, probability: p })
        .collect();
    Ok((
        rows,
        SemiclassicalSummary {
            squeezing: cfg.squeezing,
            mean_occupation: spectrum.mean_occupation,
            truncated_mean: spectrum.truncated_mean(),
            tail_mass: spectrum.tail_mass,
            temperature,
            mass,
        },
    ))
}
