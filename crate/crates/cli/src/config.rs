//! Run configuration: a flat key=value format with sections, JSON as an
//! alternative, strict validation and a content hash stamped into every
//! output file.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub quad: f64,
    pub ode: f64,
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { quad: 1e-11, ode: 1e-12, root: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: u32,
    pub epsilon: Vec<f64>,
    pub alpha: f64,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
    /// Placeholder: the pipeline is deterministic and consumes no randomness.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 4,
            epsilon: vec![0.1],
            alpha: 0.5,
            tolerances: Tolerances::default(),
            output_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("n must be >= 2 (got {})", self.n);
        }
        if self.epsilon.is_empty() {
            bail!("at least one epsilon value is required");
        }
        for &e in &self.epsilon {
            if !(0.0..=vortex_modes::EPSILON_MAX).contains(&e) {
                bail!("epsilon must lie in [0, {}] (got {e})", vortex_modes::EPSILON_MAX);
            }
        }
        if !(0.0 < self.alpha && self.alpha < 1.0) {
            bail!("alpha must lie in (0, 1) (got {})", self.alpha);
        }
        for (name, v) in [
            ("tolerances.quad", self.tolerances.quad),
            ("tolerances.ode", self.tolerances.ode),
            ("tolerances.root", self.tolerances.root),
        ] {
            if !(v > 0.0 && v < 1e-2) {
                bail!("{name} must lie in (0, 1e-2) (got {v})");
            }
        }
        Ok(())
    }

    pub fn solver_settings(&self) -> vortex_modes::eigensolver::Settings {
        vortex_modes::eigensolver::Settings {
            root_tol: self.tolerances.root,
            ode_rel_tol: self.tolerances.ode,
            quad_rel_tol: self.tolerances.quad,
        }
    }

    /// Canonical key=value rendering; also the hash input.
    pub fn to_key_value(&self) -> String {
        let eps = self
            .epsilon
            .iter()
            .map(|e| format!("{e}"))
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "n = {}\nepsilon = {}\nalpha = {}\noutput_dir = {}\nseed = {}\n\n[tolerances]\nquad = {:e}\node = {:e}\nroot = {:e}\n",
            self.n,
            eps,
            self.alpha,
            self.output_dir.display(),
            self.seed,
            self.tolerances.quad,
            self.tolerances.ode,
            self.tolerances.root,
        )
    }

    /// Short content hash carried by every output file. Only computational
    /// inputs contribute; the output location does not change results.
    pub fn hash(&self) -> String {
        let eps = self
            .epsilon
            .iter()
            .map(|e| format!("{e}"))
            .collect::<Vec<_>>()
            .join(",");
        let canonical = format!(
            "n={}\nepsilon={}\nalpha={}\nseed={}\nquad={:e}\node={:e}\nroot={:e}\n",
            self.n, eps, self.alpha, self.seed, self.tolerances.quad, self.tolerances.ode, self.tolerances.root,
        );
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let digest = hasher.finalize();
        let mut out = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Parse the key=value format (sections in brackets). Unknown keys are
    /// rejected.
    pub fn from_key_value(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                section = line[1..line.len() - 1].trim().to_string();
                if section != "tolerances" {
                    bail!("unknown section [{section}] at line {}", lineno + 1);
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key = value at line {}", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let qualified = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
            match qualified.as_str() {
                "n" => cfg.n = value.parse().context("parsing n")?,
                "epsilon" => {
                    cfg.epsilon = value
                        .split(',')
                        .map(|v| v.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .context("parsing epsilon list")?;
                }
                "alpha" => cfg.alpha = value.parse().context("parsing alpha")?,
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "seed" => cfg.seed = value.parse().context("parsing seed")?,
                "tolerances.quad" => cfg.tolerances.quad = value.parse().context("parsing quad tolerance")?,
                "tolerances.ode" => cfg.tolerances.ode = value.parse().context("parsing ode tolerance")?,
                "tolerances.root" => cfg.tolerances.root = value.parse().context("parsing root tolerance")?,
                other => bail!("unknown configuration key `{other}`"),
            }
        }
        Ok(cfg)
    }

    /// Load from a file: JSON when the content starts with `{`, key=value
    /// otherwise.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg = if text.trim_start().starts_with('{') {
            serde_json::from_str(&text).context("parsing JSON config")?
        } else {
            Self::from_key_value(&text)?
        };
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_round_trip_is_lossless() {
        let cfg = RunConfig {
            n: 6,
            epsilon: vec![0.1, 0.07, 0.035],
            alpha: 0.25,
            tolerances: Tolerances { quad: 1e-10, ode: 1e-11, root: 1e-13 },
            output_dir: PathBuf::from("results/run1"),
            seed: 7,
        };
        let text = cfg.to_key_value();
        let back = RunConfig::from_key_value(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.hash(), back.hash());
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let cfg = RunConfig::default();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_key_value("n = 4\nwavespeed = 2\n").is_err());
        let json = r#"{"n":4,"epsilon":[0.1],"alpha":0.5,"tolerances":{"quad":1e-10,"ode":1e-11,"root":1e-12},"output_dir":"out","seed":0,"extra":1}"#;
        assert!(serde_json::from_str::<RunConfig>(json).is_err());
    }

    #[test]
    fn validation_catches_bad_ranges() {
        let mut cfg = RunConfig::default();
        cfg.n = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.epsilon = vec![0.2];
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.alpha = 1.0;
        assert!(cfg.validate().is_err());
        assert!(RunConfig::default().validate().is_ok());
    }
}
