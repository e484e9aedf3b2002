//! Textual checkpoints of a page-curve run.
//!
//! ```text
//! # evap checkpoint
//! config_hash = <sha256 of the physics settings>
//! slice = <index of the stored distribution>
//! probabilities = <p0> <p1> ... <pn>
//! ```
//!
//! Probabilities are written in shortest round-trip form, so a resumed run
//! continues from bit-identical state.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config_hash: String,
    pub slice: usize,
    pub probabilities: Vec<f64>,
}

impl Checkpoint {
    pub fn render(&self) -> String {
        let mut out = String::from("# evap checkpoint\n");
        let _ = writeln!(out, "config_hash = {}", self.config_hash);
        let _ = writeln!(out, "slice = {}", self.slice);
        out.push_str("probabilities =");
        for p in &self.probabilities {
            let _ = write!(out, " {p:?}");
        }
        out.push('\n');
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let bad = |reason: String| CliError::Checkpoint {
            path: path.to_path_buf(),
            reason,
        };
        let mut hash = None;
        let mut slice = None;
        let mut probabilities = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("malformed line `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "config_hash" => hash = Some(value.to_string()),
                "slice" => {
                    slice = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("bad slice `{value}`")))?,
                    )
                }
                "probabilities" => {
                    let parsed: std::result::Result<Vec<f64>, _> =
                        value.split_whitespace().map(str::parse).collect();
                    probabilities = Some(parsed.map_err(|_| bad("bad probability".into()))?);
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(Self {
            config_hash: hash.ok_or_else(|| bad("missing config_hash".into()))?,
            slice: slice.ok_or_else(|| bad("missing slice".into()))?,
            probabilities: probabilities.ok_or_else(|| bad("missing probabilities".into()))?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Writes through a sibling temporary file so a crash never leaves a
    /// truncated checkpoint behind.
    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("ckpt.tmp");
        std::fs::write(&tmp, self.render()).map_err(|e| CliError::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
    }
}

/// `<output>.ckpt`.
pub fn checkpoint_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".ckpt");
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_exact() {
        let c = Checkpoint {
            config_hash: "abc".into(),
            slice: 42,
            probabilities: vec![0.1 + 0.2, 1e-300, 5.741371655127744e-18, 0.0],
        };
        let back = Checkpoint::parse(&c.render(), Path::new("x")).unwrap();
        assert_eq!(back, c);
        for (a, b) in back.probabilities.iter().zip(&c.probabilities) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_incomplete() {
        let err = Checkpoint::parse("slice = 3\n", Path::new("x")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(Checkpoint::parse(
            "config_hash = a\nslice = x\nprobabilities = 1\n",
            Path::new("x")
        )
        .is_err());
    }

    #[test]
    fn path_appends_suffix() {
        assert_eq!(
            checkpoint_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.csv.ckpt")
        );
    }
}
