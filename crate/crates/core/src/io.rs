//! CSV and JSON artifact writers.
//!
//! CSV files are RFC-4180 style: comma separators, LF line endings, one
//! header row. Floating-point columns carry 17 significant digits, which
//! round-trips any f64 exactly through text. Every write is atomic: the
//! payload lands in a sibling temporary file that is renamed over the target.

use crate::experiments::VerificationReport;
use crate::field::Signal;
use crate::geometry::CoverageReport;
use crate::point_process::Realization;
use crate::regularity::{ExponentField, SpectrumEstimate};
use crate::wavelet::{CwtGrid, PULSE_QUADRATURE_PANELS};
use crate::{Error, ModelParams, Real, Result};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Version tag stamped into every JSON sidecar.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17-significant-digit decimal rendering; round-trips f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write `contents` to `path` atomically (temp file + rename).
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp: PathBuf = {
        let mut name = path.file_name().unwrap_or_default().to_os_string();
        name.push(".tmp");
        path.with_file_name(name)
    };
    std::fs::write(&tmp, contents).map_err(|e| io_err(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

/// Sidecar path convention: the data file with its extension set to `json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Write a header plus formatted rows as one CSV file.
pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = String>,
{
    let mut buf = String::with_capacity(1 << 16);
    buf.push_str(header);
    buf.push('\n');
    for row in rows {
        buf.push_str(&row);
        buf.push('\n');
    }
    atomic_write(path, buf.as_bytes())
}

fn write_sidecar<T: Serialize>(path: &Path, meta: &T) -> Result<()> {
    let json = serde_json::to_vec_pretty(meta)?;
    atomic_write(&sidecar_path(path), &json)
}

#[derive(Serialize)]
struct RealizationMeta<'a> {
    artifact_version: &'static str,
    params: &'a ModelParams,
    n_total: usize,
}

/// `n,c,b,x` rows (1-based `n`) plus a parameter sidecar.
pub fn write_realization_csv<R: Real>(real: &Realization<R>, path: &Path) -> Result<()> {
    write_csv(
        path,
        "n,c,b,x",
        (0..real.n_total()).map(|n| {
            format!(
                "{},{},{},{}",
                n + 1,
                fmt_f64(real.c[n].as_f64()),
                fmt_f64(real.b[n].as_f64()),
                fmt_f64(real.x[n].as_f64())
            )
        }),
    )?;
    write_sidecar(
        path,
        &RealizationMeta {
            artifact_version: ARTIFACT_VERSION,
            params: &real.params,
            n_total: real.n_total(),
        },
    )
}

#[derive(Serialize)]
struct SignalMeta<'a> {
    artifact_version: &'static str,
    params: &'a Option<ModelParams>,
    grid_bits: u32,
    j_range: Option<(u32, u32)>,
    tail_estimate: f64,
}

/// `x,F` rows plus a sidecar with parameters and the tail estimate.
pub fn write_signal_csv<R: Real>(signal: &Signal<R>, path: &Path) -> Result<()> {
    write_csv(
        path,
        "x,F",
        (0..signal.len()).map(|i| {
            format!(
                "{},{}",
                fmt_f64(signal.position(i)),
                fmt_f64(signal.values[i].as_f64())
            )
        }),
    )?;
    write_sidecar(
        path,
        &SignalMeta {
            artifact_version: ARTIFACT_VERSION,
            params: &signal.params,
            grid_bits: signal.grid_bits,
            j_range: signal.j_range,
            tail_estimate: signal.tail_estimate,
        },
    )
}

#[derive(Serialize)]
struct CwtMeta {
    artifact_version: &'static str,
    wavelet: crate::wavelet::AnalyzingWavelet,
    method: crate::wavelet::CwtMethod,
    quadrature_panels: usize,
}

/// `m,t,W` rows (scale `s = 2^{-m}`) plus a method sidecar.
pub fn write_cwt_csv<R: Real>(grid: &CwtGrid<R>, path: &Path) -> Result<()> {
    let mut rows = Vec::new();
    for (row, &m) in grid.scale_bits.iter().enumerate() {
        for (i, &t) in grid.positions[row].iter().enumerate() {
            rows.push(format!(
                "{m},{},{}",
                fmt_f64(t.as_f64()),
                fmt_f64(grid.coeffs[row][i].as_f64())
            ));
        }
    }
    write_csv(path, "m,t,W", rows)?;
    write_sidecar(
        path,
        &CwtMeta {
            artifact_version: ARTIFACT_VERSION,
            wavelet: grid.wavelet,
            method: grid.method,
            quadrature_panels: PULSE_QUADRATURE_PANELS,
        },
    )
}

/// `x,h,r2` rows.
pub fn write_exponent_field_csv(field: &ExponentField, path: &Path) -> Result<()> {
    write_csv(
        path,
        "x,h,r2",
        (0..field.positions.len()).map(|i| {
            format!(
                "{},{},{}",
                fmt_f64(field.positions[i]),
                fmt_f64(field.h_est[i]),
                fmt_f64(field.r_squared[i])
            )
        }),
    )
}

/// `H,dim_est,dim_theory,count` rows.
pub fn write_spectrum_csv(est: &SpectrumEstimate, path: &Path) -> Result<()> {
    write_csv(
        path,
        "H,dim_est,dim_theory,count",
        (0..est.bin_centers.len()).map(|i| {
            format!(
                "{},{},{},{}",
                fmt_f64(est.bin_centers[i]),
                fmt_f64(est.dims[i]),
                fmt_f64(est.theory[i]),
                est.counts[i]
            )
        }),
    )
}

/// `j,ball_count,covered_fraction` rows plus the full report as sidecar.
pub fn write_coverage_csv(report: &CoverageReport, path: &Path) -> Result<()> {
    write_csv(
        path,
        "j,ball_count,covered_fraction",
        report
            .per_level
            .iter()
            .map(|&(j, frac, count)| format!("{j},{count},{}", fmt_f64(frac))),
    )?;
    write_sidecar(path, report)
}

/// Machine-readable report battery.
pub fn write_reports_json(reports: &[VerificationReport], path: &Path) -> Result<()> {
    let json = serde_json::to_vec_pretty(reports)?;
    atomic_write(path, &json)
}

/// Human-readable report battery (aligned text).
pub fn render_reports_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for rep in reports {
        let _ = write!(out, "{rep}");
    }
    out
}
