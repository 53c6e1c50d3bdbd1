//! CSV and JSON emission with full-precision floats and config stamping.
//!
//! Every file carries the schema version and the config hash; repeated runs
//! with the same configuration must be byte-identical, so floats are
//! serialized with 17 significant decimal digits and field order is fixed.

use anyhow::{Context, Result};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use vortex_modes::eigensolver::EigenResult;
use vortex_modes::mode_assembly::{ModeField, ResidualReport, ScalingTable};

/// 17 significant digits: enough to reproduce any f64 exactly on parse.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn eps_tag(eps: f64) -> String {
    format!("{eps}")
}

pub struct OutputWriter {
    pub dir: PathBuf,
    pub config_hash: String,
}

impl OutputWriter {
    pub fn new(dir: &Path, config_hash: &str) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutputWriter { dir: dir.to_path_buf(), config_hash: config_hash.to_string() })
    }

    fn write(&self, name: &str, content: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, payload: &T) -> Result<PathBuf> {
        #[derive(Serialize)]
        struct Envelope<'a, T> {
            schema_version: u32,
            config_hash: &'a str,
            #[serde(flatten)]
            payload: &'a T,
        }
        let body = serde_json::to_string_pretty(&Envelope {
            schema_version: crate::config::SCHEMA_VERSION,
            config_hash: &self.config_hash,
            payload,
        })?;
        self.write(name, &(body + "\n"))
    }

    pub fn write_eigen(&self, eigen: &EigenResult) -> Result<PathBuf> {
        self.write_json(&format!("eigen_{}.json", eps_tag(eigen.epsilon)), eigen)
    }

    pub fn write_residuals(&self, eps: f64, report: &ResidualReport) -> Result<PathBuf> {
        #[derive(Serialize)]
        struct Payload {
            epsilon: f64,
            left_max: f64,
            right_max: f64,
            physical_max: f64,
            n_l_at_1: f64,
            n_r_at_1: f64,
            layer_width: f64,
            scale: f64,
        }
        self.write_json(
            &format!("residuals_{}.json", eps_tag(eps)),
            &Payload {
                epsilon: eps,
                left_max: report.left_max,
                right_max: report.right_max,
                physical_max: report.physical_max,
                n_l_at_1: report.n_l_at_1,
                n_r_at_1: report.n_r_at_1,
                layer_width: report.layer_width,
                scale: report.scale,
            },
        )
    }

    fn csv_header(&self, comments: &[(&str, String)]) -> String {
        let mut head = String::new();
        head.push_str(&format!("# schema_version={}\n", crate::config::SCHEMA_VERSION));
        head.push_str(&format!("# config_hash={}\n", self.config_hash));
        for (k, v) in comments {
            head.push_str(&format!("# {k}={v}\n"));
        }
        head
    }

    pub fn write_mode_csv(&self, eigen: &EigenResult, mode: &ModeField) -> Result<PathBuf> {
        let mut body = self.csv_header(&[
            ("epsilon", fmt(eigen.epsilon)),
            ("n", eigen.n.to_string()),
            ("lambda", fmt(eigen.lambda.total)),
        ]);
        body.push_str("side,x,r,h,h_prime,f_star,w_n\n");
        let a_scale = 1.0 - 0.5 * eigen.epsilon;
        let b_scale = 1.0 + 0.5 * eigen.epsilon;
        for &x in &mode.h_left.grid {
            let r = x * a_scale;
            body.push_str(&format!(
                "left,{},{},{},{},{},{}\n",
                fmt(x),
                fmt(r),
                fmt(mode.h_left.eval(x)),
                fmt(mode.h_left.eval_derivative(x)),
                fmt(mode.f_star_left(x)),
                fmt(mode.w_n(r)),
            ));
        }
        for &x in &mode.h_right.grid {
            let r = x * b_scale;
            body.push_str(&format!(
                "right,{},{},{},{},{},{}\n",
                fmt(x),
                fmt(r),
                fmt(mode.h_right.eval(x)),
                fmt(mode.h_right.eval_derivative(x)),
                fmt(mode.f_star_right(x)),
                fmt(mode.w_n(r)),
            ));
        }
        self.write(&format!("mode_{}.csv", eps_tag(eigen.epsilon)), &body)
    }

    pub fn write_profile_csv(&self, eps: f64, rows: &[(f64, f64, f64, f64)]) -> Result<PathBuf> {
        let mut body = self.csv_header(&[("epsilon", fmt(eps))]);
        body.push_str("r,varpi0,varpi_eps,c\n");
        for (r, v0, ve, c) in rows {
            body.push_str(&format!("{},{},{},{}\n", fmt(*r), fmt(*v0), fmt(*ve), fmt(*c)));
        }
        self.write(&format!("profile_{}.csv", eps_tag(eps)), &body)
    }

    pub fn write_heatmap_csv(&self, eps: f64, rows: &[(f64, f64, f64)]) -> Result<PathBuf> {
        let mut body = self.csv_header(&[("epsilon", fmt(eps))]);
        body.push_str("r,theta,w\n");
        for (r, theta, w) in rows {
            body.push_str(&format!("{},{},{}\n", fmt(*r), fmt(*theta), fmt(*w)));
        }
        self.write(&format!("mode_heatmap_{}.csv", eps_tag(eps)), &body)
    }

    pub fn write_sweep_summary(&self, summary: &SweepSummary) -> Result<PathBuf> {
        self.write_json("sweep_summary.json", summary)
    }

    pub fn write_svg(&self, name: &str, svg: &str) -> Result<PathBuf> {
        self.write(name, svg)
    }
}

#[derive(Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub lambda: f64,
    pub lambda1_fit: f64,
    pub lambda2_fit: f64,
    pub det_at_root: f64,
    pub residual_max: f64,
}

#[derive(Serialize)]
pub struct Lambda2Summary {
    pub lambda1_ref: f64,
    pub max_abs: f64,
    pub min_abs: f64,
    pub spread: f64,
    pub bound: f64,
    pub bounded: bool,
}

#[derive(Serialize)]
pub struct SweepSummary {
    pub n: u32,
    pub rows: Vec<SweepRow>,
    pub lambda2: Lambda2Summary,
    pub scaling: ScalingTable,
}
