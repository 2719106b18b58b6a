//! Pointwise and uniform regularity estimators and the multifractal spectrum.
//!
//! All estimators reduce to log-log regressions against dyadic scales. For
//! exponents below 1 the local Taylor polynomial is the constant `f(x0)`, so
//! raw oscillations `sup |f(x) - f(x0)|` are the right local quantity; no
//! polynomial fitting happens anywhere. Exponent estimates are clamped to
//! `[0, EXPONENT_CAP]`: with `alpha < 1` nothing above 1 is identifiable from
//! first differences, and estimates at the cap carry an explicit flag.

use crate::field::Signal;
use crate::wavelet::CwtGrid;
use crate::{Error, Real, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;

/// Upper reporting bound for pointwise exponent estimates.
pub const EXPONENT_CAP: f64 = 1.0;

/// Quality report of one log-log regression.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitDiagnostics {
    pub r_squared: f64,
    pub n_points: usize,
    /// `(min, max)` of `log2 scale` over the fitted pairs.
    pub log2_scale_range: (f64, f64),
}

/// Least-squares slope of `log2(value / |log2 scale|^p)` against `log2 scale`.
///
/// `log_power = None` fits the raw power law. Requires at least four pairs
/// with distinct positive scales and strictly positive values.
pub fn fit_power_log(
    pairs: &[(f64, f64)],
    log_power: Option<f64>,
) -> Result<(f64, FitDiagnostics)> {
    if pairs.len() < 4 {
        return Err(Error::InsufficientData {
            need: 4,
            got: pairs.len(),
        });
    }
    let mut xs = Vec::with_capacity(pairs.len());
    let mut ys = Vec::with_capacity(pairs.len());
    for &(scale, value) in pairs {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain(format!("scale must be positive, got {scale}")));
        }
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::Domain(format!("value must be positive, got {value}")));
        }
        let lx = scale.log2();
        let mut ly = value.log2();
        if let Some(p) = log_power {
            let l = lx.abs();
            if l == 0.0 {
                return Err(Error::Domain(
                    "log correction undefined at scale = 1".into(),
                ));
            }
            ly -= p * l.log2();
        }
        xs.push(lx);
        ys.push(ly);
    }
    let mut sorted = xs.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("scales must be distinct".into()));
    }

    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;

    let y_mean = sy / n;
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let r_squared = if ss_tot > 1e-300 {
        1.0 - ss_res / ss_tot
    } else if ss_res < 1e-300 {
        1.0
    } else {
        0.0
    };
    Ok((
        slope,
        FitDiagnostics {
            r_squared,
            n_points: pairs.len(),
            log2_scale_range: (sorted[0], sorted[sorted.len() - 1]),
        },
    ))
}

/// Local oscillation `max |f(x) - f(x0)|` over grid points within `r` of `x0`.
///
/// `x0` snaps to the nearest grid point (ties round half away from zero);
/// the snapped center is used both as the window center and the reference
/// value, so off-grid inputs are handled deterministically, never silently
/// truncated.
pub fn oscillation<R: Real>(signal: &Signal<R>, x0: f64, r: f64) -> Result<R> {
    let step = 0.5f64.powi(signal.grid_bits as i32);
    if !(r >= step) {
        return Err(Error::Domain(format!(
            "oscillation radius {r} below grid step {step}"
        )));
    }
    let i0 = signal.nearest_index(x0);
    let mut cells = (r / step).floor() as i64;
    // Boundary tie: include one more cell when it lands exactly at distance r.
    while (cells + 1) as f64 * step <= r {
        cells += 1;
    }
    let lo = (i0 as i64 - cells).max(0) as usize;
    let hi = ((i0 as i64 + cells) as usize).min(signal.len() - 1);
    let center = signal.values[i0];
    let mut best = R::zero();
    for &v in &signal.values[lo..=hi] {
        best = best.max((v - center).abs());
    }
    Ok(best)
}

/// Exact grid modulus of continuity per dyadic scale.
///
/// For each `k` in `k_lo..=k_hi`, the sup of `|values_i - values_j|` over
/// `|i - j| <= 2^{grid_bits - k}`, computed with sliding min/max windows in
/// O(N) per scale. Returns `(h = 2^{-k}, w(h))` pairs.
pub fn uniform_modulus<R: Real>(
    signal: &Signal<R>,
    k_lo: u32,
    k_hi: u32,
) -> Result<Vec<(f64, R)>> {
    if k_lo > k_hi || k_hi > signal.grid_bits {
        return Err(Error::Domain(format!(
            "need k_lo <= k_hi <= grid_bits, got {k_lo}..{k_hi} at grid_bits {}",
            signal.grid_bits
        )));
    }
    let values = &signal.values;
    let mut out = Vec::with_capacity((k_hi - k_lo + 1) as usize);
    for k in k_lo..=k_hi {
        let d = 1usize << (signal.grid_bits - k);
        let width = d + 1;
        let mut max_dq: VecDeque<usize> = VecDeque::new();
        let mut min_dq: VecDeque<usize> = VecDeque::new();
        let mut sup = R::zero();
        for i in 0..values.len() {
            while max_dq.back().is_some_and(|&b| values[b] <= values[i]) {
                max_dq.pop_back();
            }
            max_dq.push_back(i);
            while min_dq.back().is_some_and(|&b| values[b] >= values[i]) {
                min_dq.pop_back();
            }
            min_dq.push_back(i);
            if i + 1 >= width {
                let start = i + 1 - width;
                while *max_dq.front().unwrap() < start {
                    max_dq.pop_front();
                }
                while *min_dq.front().unwrap() < start {
                    min_dq.pop_front();
                }
                sup = sup.max(values[*max_dq.front().unwrap()] - values[*min_dq.front().unwrap()]);
            }
        }
        out.push((0.5f64.powi(k as i32), sup));
    }
    Ok(out)
}

/// Which local-regularity estimator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorMethod {
    Oscillation,
    WaveletCone,
}

/// One pointwise exponent estimate.
#[derive(Debug, Clone, Copy)]
pub struct PointwiseFit {
    /// Estimate clamped to `[0, EXPONENT_CAP]`.
    pub h: f64,
    /// True when the raw fit exceeded the cap or was unidentifiable
    /// (degenerate oscillations).
    pub capped: bool,
    pub diagnostics: FitDiagnostics,
}

fn capped_fit(n_points: usize) -> PointwiseFit {
    PointwiseFit {
        h: EXPONENT_CAP,
        capped: true,
        diagnostics: FitDiagnostics {
            r_squared: 0.0,
            n_points,
            log2_scale_range: (0.0, 0.0),
        },
    }
}

fn clamp_fit(slope: f64, diagnostics: FitDiagnostics) -> PointwiseFit {
    if slope > EXPONENT_CAP {
        PointwiseFit {
            h: EXPONENT_CAP,
            capped: true,
            diagnostics,
        }
    } else {
        PointwiseFit {
            h: slope.max(0.0),
            capped: false,
            diagnostics,
        }
    }
}

/// Pointwise Hölder exponent estimate at `x0`.
///
/// Oscillation method: slope of `log2 osc(x0, 2^{-k})` against `-k` over the
/// scale window. Wavelet-cone method: slope of the cone supremum
/// `sup_{|t-x0|<=s} |W(s,t)| s^{-1/2}` against `log2 s`, over grid rows whose
/// scale lies in the window (requires `cwt`). `log_power` divides a
/// `|log2 scale|^p` factor out of the fitted quantity first.
///
/// Degenerate inputs (flat signal, fewer than four usable scales) yield a
/// capped estimate rather than an error.
pub fn pointwise_exponent<R: Real>(
    signal: &Signal<R>,
    x0: f64,
    k_lo: u32,
    k_hi: u32,
    method: EstimatorMethod,
    cwt: Option<&CwtGrid<R>>,
    log_power: Option<f64>,
) -> Result<PointwiseFit> {
    if k_lo > k_hi || k_hi > signal.grid_bits {
        return Err(Error::Domain(format!(
            "scale window {k_lo}..{k_hi} outside grid resolution {}",
            signal.grid_bits
        )));
    }
    let pairs: Vec<(f64, f64)> = match method {
        EstimatorMethod::Oscillation => (k_lo..=k_hi)
            .map(|k| {
                let h = 0.5f64.powi(k as i32);
                oscillation(signal, x0, h).map(|o| (h, o.as_f64()))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|&(_, o)| o > 0.0)
            .collect(),
        EstimatorMethod::WaveletCone => {
            let grid = cwt.ok_or_else(|| {
                Error::Domain("wavelet_cone estimator requires a coefficient grid".into())
            })?;
            let mut pairs = Vec::new();
            for (row, &m) in grid.scale_bits.iter().enumerate() {
                if m < k_lo || m > k_hi {
                    continue;
                }
                let s = grid.scale(row);
                let inv_sqrt_s = (0.5f64 * f64::from(m)).exp2();
                let mut sup = 0.0f64;
                for (i, &t) in grid.positions[row].iter().enumerate() {
                    if (t.as_f64() - x0).abs() <= s {
                        sup = sup.max(grid.coeffs[row][i].abs().as_f64() * inv_sqrt_s);
                    }
                }
                if sup > 0.0 {
                    pairs.push((s, sup));
                }
            }
            pairs
        }
    };
    if pairs.len() < 4 {
        return Ok(capped_fit(pairs.len()));
    }
    let (slope, diagnostics) = fit_power_log(&pairs, log_power)?;
    Ok(clamp_fit(slope, diagnostics))
}

/// Pointwise exponents over the lattice `x_i = i 2^{-stride_bits}`.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentField {
    pub positions: Vec<f64>,
    pub h_est: Vec<f64>,
    pub capped: Vec<bool>,
    pub method: EstimatorMethod,
    pub scale_window: (u32, u32),
    pub r_squared: Vec<f64>,
}

/// Default regression window: excludes truncation-contaminated coarse scales
/// and grid-discreteness at the fine end.
pub fn default_scale_window(grid_bits: u32) -> (u32, u32) {
    (5, grid_bits.saturating_sub(4))
}

/// Run [`pointwise_exponent`] over the dyadic lattice (in parallel).
pub fn exponent_field<R: Real>(
    signal: &Signal<R>,
    stride_bits: u32,
    k_lo: u32,
    k_hi: u32,
    method: EstimatorMethod,
    cwt: Option<&CwtGrid<R>>,
    log_power: Option<f64>,
) -> Result<ExponentField> {
    if stride_bits > signal.grid_bits {
        return Err(Error::Resolution {
            required: stride_bits,
            got: signal.grid_bits,
        });
    }
    let n = (1usize << stride_bits) + 1;
    let step = 0.5f64.powi(stride_bits as i32);
    let fits: Vec<(f64, PointwiseFit)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x0 = i as f64 * step;
            pointwise_exponent(signal, x0, k_lo, k_hi, method, cwt, log_power)
                .map(|fit| (x0, fit))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentField {
        positions: fits.iter().map(|&(x, _)| x).collect(),
        h_est: fits.iter().map(|&(_, f)| f.h).collect(),
        capped: fits.iter().map(|&(_, f)| f.capped).collect(),
        method,
        scale_window: (k_lo, k_hi),
        r_squared: fits.iter().map(|&(_, f)| f.diagnostics.r_squared).collect(),
    })
}

/// The almost-sure multifractal spectrum: `H/alpha` on `[alpha eta, alpha]`,
/// `-inf` outside.
pub fn theoretical_spectrum(alpha: f64, eta: f64, h: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0 && eta > 0.0 && eta < 1.0);
    if h >= alpha * eta && h <= alpha {
        h / alpha
    } else {
        f64::NEG_INFINITY
    }
}

/// Binned exponent level sets with box-dimension estimates.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEstimate {
    pub bin_centers: Vec<f64>,
    pub bin_width: f64,
    /// Box-counting dimension per bin; `-inf` for empty or degenerate bins.
    pub dims: Vec<f64>,
    pub counts: Vec<usize>,
    /// `H/alpha` on the admissible interval, `-inf` outside (same bins).
    pub theory: Vec<f64>,
    pub alpha: f64,
    pub eta: f64,
    /// Bins whose regression was degenerate (flagged, dims left at `-inf`).
    pub degenerate: Vec<bool>,
}

/// Level-set box counting over the exponent field.
///
/// Positions whose estimate falls into each `H`-bin form a level set; its
/// box dimension is the least-squares slope of `log2(#occupied dyadic
/// intervals at scale 2^{-k})` against `k`, over `box_k_lo..=box_k_hi`.
pub fn spectrum_estimate(
    field: &ExponentField,
    alpha: f64,
    eta: f64,
    bin_width: f64,
    box_k_lo: u32,
    box_k_hi: u32,
) -> Result<SpectrumEstimate> {
    if !(bin_width > 0.0) {
        return Err(Error::Domain(format!("bin_width must be positive, got {bin_width}")));
    }
    if box_k_lo > box_k_hi {
        return Err(Error::Domain(format!(
            "need box_k_lo <= box_k_hi, got {box_k_lo}..{box_k_hi}"
        )));
    }
    let need = 1usize << (box_k_hi + 2);
    if field.positions.len() < need {
        return Err(Error::InsufficientData {
            need,
            got: field.positions.len(),
        });
    }

    let bin_of = |h: f64| (h / bin_width).floor() as i64;
    let lo_bin = field.h_est.iter().copied().map(bin_of).min().unwrap_or(0);
    let hi_bin = field.h_est.iter().copied().map(bin_of).max().unwrap_or(0);
    let n_bins = (hi_bin - lo_bin + 1) as usize;

    let mut members: Vec<Vec<f64>> = vec![Vec::new(); n_bins];
    for (&x, &h) in field.positions.iter().zip(&field.h_est) {
        members[(bin_of(h) - lo_bin) as usize].push(x);
    }

    let mut bin_centers = Vec::with_capacity(n_bins);
    let mut dims = Vec::with_capacity(n_bins);
    let mut counts = Vec::with_capacity(n_bins);
    let mut theory = Vec::with_capacity(n_bins);
    let mut degenerate = Vec::with_capacity(n_bins);
    for (bi, xs) in members.iter().enumerate() {
        let center = (lo_bin + bi as i64) as f64 * bin_width + 0.5 * bin_width;
        bin_centers.push(center);
        counts.push(xs.len());
        theory.push(theoretical_spectrum(alpha, eta, center));
        if xs.is_empty() {
            dims.push(f64::NEG_INFINITY);
            degenerate.push(false);
            continue;
        }
        let ks: Vec<u32> = (box_k_lo..=box_k_hi).collect();
        if ks.len() < 2 {
            dims.push(f64::NEG_INFINITY);
            degenerate.push(true);
            continue;
        }
        let mut pts = Vec::with_capacity(ks.len());
        for &k in &ks {
            let cells = 1usize << k;
            let mut occupied = vec![false; cells];
            for &x in xs {
                let idx = ((x * cells as f64).floor() as usize).min(cells - 1);
                occupied[idx] = true;
            }
            let n_occ = occupied.iter().filter(|&&o| o).count();
            pts.push((f64::from(k), (n_occ as f64).log2()));
        }
        dims.push(ols_slope(&pts));
        degenerate.push(false);
    }
    Ok(SpectrumEstimate {
        bin_centers,
        bin_width,
        dims,
        counts,
        theory,
        alpha,
        eta,
        degenerate,
    })
}

fn ols_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
