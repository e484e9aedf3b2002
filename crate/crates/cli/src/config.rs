//! Run configuration: defaults, flat `key = value` files and flag overrides.
//!
//! Every setting, whether it comes from a file or from the command line, goes
//! through [`RunConfig::set`], so both sources accept the same keys and
//! values. Files are applied first and flags afterwards.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use evap_core::semiclassical::{TemperatureReading, DEFAULT_M_MAX};
use evap_core::{Limits, LogBase, OccupationCount, Tolerances};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PageCurve,
    OracleCompare,
    SliceDump,
    Semiclassical,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "page-curve" => Ok(Self::PageCurve),
            "oracle-compare" => Ok(Self::OracleCompare),
            "slice-dump" => Ok(Self::SliceDump),
            "semiclassical" => Ok(Self::Semiclassical),
            other => Err(CliError::config(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PageCurve => "page-curve",
            Self::OracleCompare => "oracle-compare",
            Self::SliceDump => "slice-dump",
            Self::Semiclassical => "semiclassical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::config(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub r0: f64,
    pub dt: f64,
    pub steps: usize,
    /// `None` selects `n + 1`.
    pub log_base: Option<LogBase>,
    pub mode: Mode,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub checkpoint_every: Option<usize>,
    pub resume: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub limits: Limits,
    /// Semiclassical mode: cumulative squeezing `r t`.
    pub squeezing: f64,
    pub omega: f64,
    pub m_max: usize,
    pub reading: TemperatureReading,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 5,
            r0: 1.0,
            dt: 1.0 / 15.0,
            steps: 10_000,
            log_base: None,
            mode: Mode::PageCurve,
            format: OutputFormat::Csv,
            output: None,
            plot: None,
            checkpoint_every: None,
            resume: None,
            tolerances: Tolerances::default(),
            limits: Limits::default(),
            squeezing: 0.5,
            omega: 1.0,
            m_max: DEFAULT_M_MAX,
            reading: TemperatureReading::Reciprocal,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_log_base(value: &str) -> Result<Option<LogBase>> {
    match value {
        "auto" => Ok(None),
        "e" | "natural" => Ok(Some(LogBase::Natural)),
        other => {
            let b: u32 = parse("log_base", other)?;
            Ok(Some(
                LogBase::new(b).map_err(|e| CliError::config(e.to_string()))?,
            ))
        }
    }
}

fn parse_reading(value: &str) -> Result<TemperatureReading> {
    match value {
        "reciprocal" | "coth" => Ok(TemperatureReading::Reciprocal),
        "inverse" | "artanh" => Ok(TemperatureReading::InverseFunction),
        other => Err(CliError::config(format!(
            "unknown temperature reading `{other}`"
        ))),
    }
}

impl RunConfig {
    /// Applies one setting. Keys accept `-` and `_` interchangeably.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let tol = &mut self.tolerances;
        match key.as_str() {
            "n" => self.n = parse(&key, value)?,
            "r0" => self.r0 = parse(&key, value)?,
            "dt" => self.dt = parse_fraction(value)?,
            "steps" => self.steps = parse(&key, value)?,
            "log_base" => self.log_base = parse_log_base(value)?,
            "mode" => self.mode = value.parse()?,
            "format" | "output_format" => self.format = value.parse()?,
            "output" => self.output = Some(PathBuf::from(value)),
            "plot" => self.plot = Some(PathBuf::from(value)),
            "checkpoint_every" => self.checkpoint_every = Some(parse(&key, value)?),
            "resume" => self.resume = Some(PathBuf::from(value)),
            "squeezing" => self.squeezing = parse(&key, value)?,
            "omega" => self.omega = parse(&key, value)?,
            "m_max" => self.m_max = parse(&key, value)?,
            "reading" => self.reading = parse_reading(value)?,
            "n_max" => self.limits.n_max = parse(&key, value)?,
            "path_budget" => self.limits.path_budget = parse(&key, value)?,
            "dense_limit" => self.limits.dense_limit = parse(&key, value)?,
            "tol.orthogonality" => tol.orthogonality = parse(&key, value)?,
            "tol.amplitude_norm" => tol.amplitude_norm = parse(&key, value)?,
            "tol.row_sum" => tol.row_sum = parse(&key, value)?,
            "tol.input_norm" => tol.input_norm = parse(&key, value)?,
            "tol.max_drift" => tol.max_drift = parse(&key, value)?,
            "tol.oracle_agreement" => tol.oracle_agreement = parse(&key, value)?,
            "tol.path_norm" => tol.path_norm = parse(&key, value)?,
            "tol.taylor_agreement" => tol.taylor_agreement = parse(&key, value)?,
            other => return Err(CliError::config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.apply_text(&text)
    }

    pub fn occupation(&self) -> Result<OccupationCount> {
        OccupationCount::with_cap(self.n, self.limits.n_max)
            .map_err(|e| CliError::config(e.to_string()))
    }

    pub fn effective_log_base(&self) -> Result<LogBase> {
        Ok(self.log_base.unwrap_or_else(|| {
            LogBase::for_occupation(OccupationCount::with_cap(self.n, usize::MAX).unwrap())
        }))
    }

    pub fn validate(&self) -> Result<()> {
        self.occupation()?;
        for (name, v) in [("r0", self.r0), ("dt", self.dt)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::config(format!(
                    "`{name}` must be positive, got {v}"
                )));
            }
        }
        if self.checkpoint_every == Some(0) {
            return Err(CliError::config("`checkpoint_every` must be at least 1"));
        }
        if self.checkpoint_every.is_some() && self.output.is_none() {
            return Err(CliError::config("checkpointing needs an --output path"));
        }
        if self.mode == Mode::Semiclassical
            && !(self.squeezing >= 0.0 && self.squeezing.is_finite())
        {
            return Err(CliError::config("`squeezing` must be non-negative"));
        }
        Ok(())
    }

    /// Hash of the settings that determine the evolution, for checkpoints.
    pub fn hash(&self) -> String {
        let canonical = format!(
            "n={};r0={:016x};dt={:016x};log_base={:?};max_drift={:016x}",
            self.n,
            self.r0.to_bits(),
            self.dt.to_bits(),
            self.log_base,
            self.tolerances.max_drift.to_bits(),
        );
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            mode: self.mode,
            n: self.n,
            r0: self.r0,
            dt: self.dt,
            steps: self.steps,
            log_base: match self.effective_log_base() {
                Ok(LogBase::Base(b)) => b.to_string(),
                _ => "e".to_string(),
            },
        }
    }
}

/// `1/15` style fractions or plain decimals.
fn parse_fraction(value: &str) -> Result<f64> {
    if let Some((num, den)) = value.split_once('/') {
        let num: f64 = parse("dt", num.trim())?;
        let den: f64 = parse("dt", den.trim())?;
        return Ok(num / den);
    }
    parse("dt", value)
}

/// Configuration as written into data files. Paths are left out so that the
/// same run written to two places produces identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub mode: Mode,
    pub n: usize,
    pub r0: f64,
    pub dt: f64,
    pub steps: usize,
    pub log_base: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(c.r0, 1.0);
        assert_eq!(c.dt, 1.0 / 15.0);
        assert_eq!(c.effective_log_base().unwrap(), LogBase::Base(6));
    }

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        c.apply_text(
            "# comment\nn = 20\ndt = 1/25\nmode = oracle-compare # trailing\nlog-base=e\n",
        )
        .unwrap();
        assert_eq!(c.n, 20);
        assert_eq!(c.dt, 1.0 / 25.0);
        assert_eq!(c.mode, Mode::OracleCompare);
        assert_eq!(c.log_base, Some(LogBase::Natural));
        c.set("n", "3").unwrap();
        assert_eq!(c.n, 3);
        c.set("tol.oracle_agreement", "1e-9").unwrap();
        assert_eq!(c.tolerances.oracle_agreement, 1e-9);
    }

    #[test]
    fn bad_input_is_a_config_error() {
        let mut c = RunConfig::default();
        for (k, v) in [
            ("n", "-1"),
            ("mode", "nope"),
            ("bogus", "1"),
            ("log_base", "1"),
        ] {
            let err = c.set(k, v).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{k}={v}");
        }
        assert_eq!(c.apply_text("n 5").unwrap_err().exit_code(), 2);

        for (k, v) in [("n", "500"), ("dt", "0"), ("checkpoint_every", "10")] {
            let mut c = RunConfig::default();
            c.set(k, v).unwrap();
            assert_eq!(c.validate().unwrap_err().exit_code(), 2, "{k}={v}");
        }
    }

    #[test]
    fn hash_tracks_physics_only() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.steps = 7;
        b.output = Some("x.csv".into());
        assert_eq!(a.hash(), b.hash());
        b.n = 6;
        assert_ne!(a.hash(), b.hash());
    }
}
