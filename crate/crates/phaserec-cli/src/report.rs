//! Run reports and the plot-ready CSV outputs.

use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use phaserec_core::recovery::{RaySampleSet, RAY_SAMPLES_CSV_HEADER};
use phaserec_core::Complex64;

use crate::config::RawConfig;
use crate::CliError;

#[derive(Serialize, Clone, Copy, Debug, PartialEq)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        ComplexOut { re: z.re, im: z.im }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct PerNRow {
    pub n: u32,
    pub f_hat_re: f64,
    pub f_hat_im: f64,
    /// |f̂ₙ − f_direct| when a simulated reference exists, otherwise the
    /// distance to the final estimate.
    pub abs_error: f64,
}

#[derive(Serialize, Clone, Debug)]
pub struct ConvergenceRow {
    pub cells_per_side: u32,
    pub f_re: f64,
    pub f_im: f64,
    /// |f − f_previous_grid|; absent on the first row.
    pub diff_prev: Option<f64>,
    pub condition_estimate: f64,
}

#[derive(Serialize, Clone, Debug)]
pub struct ReductionRow {
    pub s: f64,
    pub scaled_rsq: f64,
    pub psi_sq_reference: f64,
    pub rel_defect: f64,
}

/// Full record of one experiment run. Serialized as `report.json`; byte
/// identical across repeated runs of the same config and seed (wall time is
/// reported on stdout only, not in the file).
#[derive(Serialize, Clone, Debug)]
pub struct RunReport {
    pub config: RawConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_direct: Option<ComplexOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_estimate: Option<ComplexOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_n: Option<Vec<PerNRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Vec<ConvergenceRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Vec<ReductionRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_sq_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_sq_defect: Option<f64>,
    /// Condition estimate of the (largest) solved system; absent when the
    /// run performed no solve (CSV-ingested recovery).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_estimate: Option<f64>,
    /// Largest relative backsubstitution residual across solves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunReport {
    pub fn new(config: RawConfig) -> Self {
        RunReport {
            config,
            f_direct: None,
            final_estimate: None,
            per_n: None,
            fitted_slope: None,
            convergence: None,
            reduction: None,
            psi_sq_estimate: None,
            psi_sq_defect: None,
            condition_estimate: None,
            max_residual: None,
            warnings: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    /// Every numeric field must be finite before the report is written.
    pub fn check_finite(&self) -> Result<(), CliError> {
        let bad = |name: &str| {
            Err(CliError::Numerical(format!(
                "non-finite value in report field `{name}`"
            )))
        };
        let finite_c = |z: &ComplexOut| z.re.is_finite() && z.im.is_finite();
        if let Some(f) = &self.f_direct {
            if !finite_c(f) {
                return bad("f_direct");
            }
        }
        if let Some(f) = &self.final_estimate {
            if !finite_c(f) {
                return bad("final_estimate");
            }
        }
        if let Some(rows) = &self.per_n {
            for row in rows {
                if !(row.f_hat_re.is_finite()
                    && row.f_hat_im.is_finite()
                    && row.abs_error.is_finite())
                {
                    return bad("per_n");
                }
            }
        }
        if let Some(slope) = self.fitted_slope {
            if !slope.is_finite() {
                return bad("fitted_slope");
            }
        }
        if let Some(rows) = &self.convergence {
            for row in rows {
                if !(row.f_re.is_finite()
                    && row.f_im.is_finite()
                    && row.condition_estimate.is_finite()
                    && row.diff_prev.is_none_or(f64::is_finite))
                {
                    return bad("convergence");
                }
            }
        }
        if let Some(rows) = &self.reduction {
            for row in rows {
                if !(row.s.is_finite()
                    && row.scaled_rsq.is_finite()
                    && row.psi_sq_reference.is_finite()
                    && row.rel_defect.is_finite())
                {
                    return bad("reduction");
                }
            }
        }
        for (value, name) in [
            (self.psi_sq_estimate, "psi_sq_estimate"),
            (self.psi_sq_defect, "psi_sq_defect"),
            (self.condition_estimate, "condition_estimate"),
            (self.max_residual, "max_residual"),
        ] {
            if let Some(v) = value {
                if !v.is_finite() {
                    return bad(name);
                }
            }
        }
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        self.check_finite()?;
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
    }
}

fn write_lines(path: &Path, lines: Vec<String>) -> Result<(), CliError> {
    let mut text = lines.join("\n");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// `per_n.csv`: header `n,f_hat_re,f_hat_im,abs_error`.
pub fn write_per_n_csv(path: &Path, rows: &[PerNRow]) -> Result<(), CliError> {
    let mut lines = vec![String::from("n,f_hat_re,f_hat_im,abs_error")];
    for row in rows {
        lines.push(format!(
            "{},{},{},{}",
            row.n, row.f_hat_re, row.f_hat_im, row.abs_error
        ));
    }
    write_lines(path, lines)
}

/// `ray_samples.csv`: header `s,a_value,offset_index`, rows ordered by n
/// then offset index.
pub fn write_ray_samples_csv(path: &Path, samples: &RaySampleSet) -> Result<(), CliError> {
    let mut lines = vec![String::from(RAY_SAMPLES_CSV_HEADER)];
    for (&n, &(a1, a2)) in samples.n_list().iter().zip(samples.a_values()) {
        let (r1, r2) = samples.radii(n);
        lines.push(format!("{r1},{a1},1"));
        lines.push(format!("{r2},{a2},2"));
    }
    write_lines(path, lines)
}

/// `reduction.csv`: header `s,scaled_Rsq,psi_sq_reference,rel_defect`.
pub fn write_reduction_csv(path: &Path, rows: &[ReductionRow]) -> Result<(), CliError> {
    let mut lines = vec![String::from("s,scaled_Rsq,psi_sq_reference,rel_defect")];
    for row in rows {
        lines.push(format!(
            "{},{},{},{}",
            row.s, row.scaled_rsq, row.psi_sq_reference, row.rel_defect
        ));
    }
    write_lines(path, lines)
}

/// `convergence.csv`: header `cells_per_side,f_re,f_im,diff_prev` with an
/// empty diff on the first row.
pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> Result<(), CliError> {
    let mut lines = vec![String::from("cells_per_side,f_re,f_im,diff_prev")];
    for row in rows {
        let diff = row.diff_prev.map(|d| d.to_string()).unwrap_or_default();
        lines.push(format!("{},{},{},{diff}", row.cells_per_side, row.f_re, row.f_im));
    }
    write_lines(path, lines)
}
