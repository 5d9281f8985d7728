//! Experiment reports: per-row predicted-vs-oracle tables, aggregate error
//! metrics, and CSV/JSON/markdown emission.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::circuit::CircuitClass;
use crate::error::{Error, Result};
use crate::mlp::TrainReport;
use crate::solver::BranchResponse;

/// One held-out row: the network's prediction next to the oracle's ground
/// truth, in normalized units and in physical units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowRecord {
    pub predicted_norm: Vec<f64>,
    pub target_norm: Vec<f64>,
    pub predicted: BranchResponse,
    pub oracle: BranchResponse,
}

/// Aggregate error metrics over the held-out rows. All `rmse_*` fields are
/// recomputable from the per-row table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetrics {
    /// RMSE pooled over every normalized output.
    pub rmse_norm: f64,
    /// Largest absolute normalized error over rows and outputs.
    pub max_abs_error_norm: f64,
    pub rmse_norm_current: f64,
    pub rmse_norm_phase: Option<f64>,
    /// Mean absolute current error in amperes.
    pub mean_abs_error_current: f64,
    /// Mean absolute phase error in degrees (two-output classes only).
    pub mean_abs_error_phase_deg: Option<f64>,
    pub rmse_phase_deg: Option<f64>,
}

impl ReportMetrics {
    pub fn from_rows(rows: &[RowRecord]) -> Self {
        let mut sq_sum = 0.0;
        let mut sq_count = 0usize;
        let mut max_abs: f64 = 0.0;
        let mut current_sq = 0.0;
        let mut phase_sq = 0.0;
        let mut phase_count = 0usize;
        let mut current_abs_phys = 0.0;
        let mut phase_abs_phys = 0.0;
        let mut phase_sq_phys = 0.0;

        for row in rows {
            for (p, t) in row.predicted_norm.iter().zip(&row.target_norm) {
                let err = p - t;
                sq_sum += err * err;
                sq_count += 1;
                max_abs = max_abs.max(err.abs());
            }
            let current_err = row.predicted_norm[0] - row.target_norm[0];
            current_sq += current_err * current_err;
            if row.predicted_norm.len() > 1 {
                let phase_err = row.predicted_norm[1] - row.target_norm[1];
                phase_sq += phase_err * phase_err;
                phase_count += 1;
                let deg_err = row.predicted.phase_deg - row.oracle.phase_deg;
                phase_abs_phys += deg_err.abs();
                phase_sq_phys += deg_err * deg_err;
            }
            current_abs_phys += (row.predicted.current_mag - row.oracle.current_mag).abs();
        }

        let n = rows.len();
        let mean = |sum: f64, count: usize| if count == 0 { 0.0 } else { sum / count as f64 };
        ReportMetrics {
            rmse_norm: mean(sq_sum, sq_count).sqrt(),
            max_abs_error_norm: max_abs,
            rmse_norm_current: mean(current_sq, n).sqrt(),
            rmse_norm_phase: (phase_count > 0).then(|| mean(phase_sq, phase_count).sqrt()),
            mean_abs_error_current: mean(current_abs_phys, n),
            mean_abs_error_phase_deg: (phase_count > 0)
                .then(|| mean(phase_abs_phys, phase_count)),
            rmse_phase_deg: (phase_count > 0).then(|| mean(phase_sq_phys, phase_count).sqrt()),
        }
    }
}

/// Full outcome of one train/evaluate experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub class: CircuitClass,
    pub train_count: usize,
    pub test_count: usize,
    /// Rows whose normalized current target sits in the sigmoid's saturated
    /// tail; nonzero values flag a data-range problem.
    pub saturated_targets: usize,
    pub train_report: TrainReport,
    pub rows: Vec<RowRecord>,
    pub metrics: ReportMetrics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "md",
        }
    }
}

fn has_phase(report: &ExperimentReport) -> bool {
    report.class.output_count() == 2
}

/// Writes the report in the requested format. Numeric CSV fields carry 17
/// significant digits so a re-parse reproduces the metrics exactly.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serialization cannot fail") + "\n"
        }
        ReportFormat::Markdown => render_markdown(report),
    };
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    if has_phase(report) {
        out.push_str(
            "row,i_pred_norm,i_target_norm,phi_pred_norm,phi_target_norm,\
             i_pred_amp,i_oracle_amp,phi_pred_deg,phi_oracle_deg\n",
        );
    } else {
        out.push_str("row,i_pred_norm,i_target_norm,i_pred_amp,i_oracle_amp\n");
    }
    for (index, row) in report.rows.iter().enumerate() {
        let mut cells = vec![index.to_string()];
        cells.push(format!("{:.16e}", row.predicted_norm[0]));
        cells.push(format!("{:.16e}", row.target_norm[0]));
        if has_phase(report) {
            cells.push(format!("{:.16e}", row.predicted_norm[1]));
            cells.push(format!("{:.16e}", row.target_norm[1]));
        }
        cells.push(format!("{:.16e}", row.predicted.current_mag));
        cells.push(format!("{:.16e}", row.oracle.current_mag));
        if has_phase(report) {
            cells.push(format!("{:.16e}", row.predicted.phase_deg));
            cells.push(format!("{:.16e}", row.oracle.phase_deg));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn render_markdown(report: &ExperimentReport) -> String {
    let m = &report.metrics;
    let mut out = String::new();
    out.push_str(&format!("# Class {} experiment\n\n", report.class));
    out.push_str(&format!("- train rows: {}\n", report.train_count));
    out.push_str(&format!("- test rows: {}\n", report.test_count));
    out.push_str(&format!(
        "- saturated current targets: {}\n",
        report.saturated_targets
    ));
    out.push_str(&format!(
        "- final training MSE: {:.6}\n",
        report.train_report.final_loss
    ));
    out.push_str(&format!("- normalized RMSE: {:.6}\n", m.rmse_norm));
    out.push_str(&format!(
        "- max normalized |error|: {:.6}\n",
        m.max_abs_error_norm
    ));
    out.push_str(&format!(
        "- mean |current error|: {:.6} A\n",
        m.mean_abs_error_current
    ));
    if let (Some(phase_mean), Some(phase_rmse)) = (m.mean_abs_error_phase_deg, m.rmse_phase_deg) {
        out.push_str(&format!(
            "- mean |phase error|: {:.3} deg (RMSE {:.3} deg)\n",
            phase_mean, phase_rmse
        ));
    }
    out.push('\n');

    if has_phase(report) {
        out.push_str("| row | i pred (A) | i oracle (A) | phi pred (deg) | phi oracle (deg) |\n");
        out.push_str("|----:|-----------:|-------------:|---------------:|-----------------:|\n");
        for (index, row) in report.rows.iter().enumerate() {
            out.push_str(&format!(
                "| {} | {:.6} | {:.6} | {:.3} | {:.3} |\n",
                index,
                row.predicted.current_mag,
                row.oracle.current_mag,
                row.predicted.phase_deg,
                row.oracle.phase_deg
            ));
        }
    } else {
        out.push_str("| row | i pred (A) | i oracle (A) |\n");
        out.push_str("|----:|-----------:|-------------:|\n");
        for (index, row) in report.rows.iter().enumerate() {
            out.push_str(&format!(
                "| {} | {:.6} | {:.6} |\n",
                index, row.predicted.current_mag, row.oracle.current_mag
            ));
        }
    }
    out
}

/// Re-parses an emitted CSV table back into normalized prediction/target
/// pairs, for consumers that recompute metrics independently.
pub fn parse_report_csv(path: &Path) -> Result<Vec<RowRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse {
        path: path.into(),
        line: 1,
        column: 1,
        message: "missing header".into(),
    })?;
    let with_phase = header.contains("phi_pred_norm");

    let mut rows = Vec::new();
    for (index, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let expected = if with_phase { 9 } else { 5 };
        if cells.len() != expected {
            return Err(Error::Parse {
                path: path.into(),
                line: index + 2,
                column: cells.len(),
                message: format!("expected {expected} columns"),
            });
        }
        let num = |cell: &str, col: usize| -> Result<f64> {
            cell.parse().map_err(|_| Error::Parse {
                path: path.into(),
                line: index + 2,
                column: col + 1,
                message: format!("`{cell}` is not a number"),
            })
        };
        let mut col = 1;
        let mut next = || {
            let v = num(cells[col], col);
            col += 1;
            v
        };
        let (predicted_norm, target_norm) = if with_phase {
            let ip = next()?;
            let it = next()?;
            let pp = next()?;
            let pt = next()?;
            (vec![ip, pp], vec![it, pt])
        } else {
            let ip = next()?;
            let it = next()?;
            (vec![ip], vec![it])
        };
        let predicted = BranchResponse {
            current_mag: next()?,
            phase_deg: 0.0,
        };
        let oracle = BranchResponse {
            current_mag: next()?,
            phase_deg: 0.0,
        };
        let (predicted, oracle) = if with_phase {
            (
                BranchResponse {
                    phase_deg: next()?,
                    ..predicted
                },
                BranchResponse {
                    phase_deg: next()?,
                    ..oracle
                },
            )
        } else {
            (predicted, oracle)
        };
        rows.push(RowRecord {
            predicted_norm,
            target_norm,
            predicted,
            oracle,
        });
    }
    Ok(rows)
}
