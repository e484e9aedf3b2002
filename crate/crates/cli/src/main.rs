use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use evap_cli::{execute, CliError, RunConfig};

/// Page curves of a black hole modelled as a chain of squeezing slices.
#[derive(Debug, Parser)]
#[command(name = "evap", version)]
struct Args {
    /// key = value file applied before the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// initial black-hole occupation
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    r0: Option<String>,
    /// slice width, decimal or fraction such as 1/15
    #[arg(long)]
    dt: Option<String>,
    /// number of slices
    #[arg(long)]
    steps: Option<String>,
    /// integer >= 2, `e`, or `auto` for n + 1
    #[arg(long)]
    log_base: Option<String>,
    /// page-curve, oracle-compare, slice-dump or semiclassical
    #[arg(long)]
    mode: Option<String>,
    /// data file; stdout when omitted
    #[arg(long)]
    output: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// SVG of entropy, p0 and decoupling distance (page-curve mode)
    #[arg(long)]
    plot: Option<String>,
    /// write <output>.ckpt every this many slices
    #[arg(long)]
    checkpoint_every: Option<String>,
    /// continue from a checkpoint file
    #[arg(long)]
    resume: Option<String>,
    /// cumulative squeezing r t (semiclassical mode)
    #[arg(long)]
    squeezing: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    /// reciprocal or inverse reading of tanh^-1 in the temperature
    #[arg(long)]
    reading: Option<String>,
    #[arg(long)]
    path_budget: Option<String>,
    /// tolerance override, e.g. --tol max_drift=1e-8 (repeatable)
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
}

impl Args {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let flags = [
            ("n", &self.n),
            ("r0", &self.r0),
            ("dt", &self.dt),
            ("steps", &self.steps),
            ("log_base", &self.log_base),
            ("mode", &self.mode),
            ("output", &self.output),
            ("format", &self.format),
            ("plot", &self.plot),
            ("checkpoint_every", &self.checkpoint_every),
            ("resume", &self.resume),
            ("squeezing", &self.squeezing),
            ("omega", &self.omega),
            ("reading", &self.reading),
            ("path_budget", &self.path_budget),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        for t in &self.tolerances {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("--tol expects NAME=VALUE, got `{t}`")))?;
            cfg.set(&format!("tol.{}", k.trim()), v)?;
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match args.config().and_then(|cfg| execute(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
