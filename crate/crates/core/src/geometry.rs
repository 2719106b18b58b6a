//! Covering combinatorics of the pulse supports.
//!
//! Everything here treats balls as closed intervals; boundary ties count as
//! covered (a measure-zero convention, fixed once). Coverage of a set is
//! approximated on the dyadic grid `x_i = i 2^{-grid_bits}`: a point is
//! covered when it lies in the ball union, which miscounts by at most one
//! grid cell per ball edge.

use crate::point_process::{eps_j, eps_tilde_j, level_slice, Realization};
use crate::{Error, ModelParams, Real, Result};
use serde::Serialize;

/// Does the support of pulse `n`, inflated by `r`, reach `x`?
///
/// True iff `|x - X_n| <= r + B_n^{-1/eta}` (closed balls).
pub fn covers<R: Real>(real: &Realization<R>, n: usize, x: R, r: R) -> bool {
    debug_assert!(n < real.n_total());
    (x - real.x[n]).abs() <= r + real.radius(n)
}

/// Number of level-`j` pulses whose `r`-inflated support contains `x`.
pub fn overlap_count<R: Real>(real: &Realization<R>, j: u32, x: R, r: R) -> Result<usize> {
    level_slice(real, j)?;
    let idx = &real.level_index[j as usize];
    if idx.by_x.is_empty() {
        return Ok(0);
    }
    let reach = r + idx.r_max;
    let lo = idx.x_sorted.partition_point(|&xn| xn < x - reach);
    let hi = idx.x_sorted.partition_point(|&xn| xn <= x + reach);
    Ok(idx.by_x[lo..hi]
        .iter()
        .filter(|&&n| covers(real, n, x, r))
        .count())
}

/// Number of level-`j` pulses whose center falls in the `k`-th dyadic cell of
/// side `2^{-floor(eta j)}`, widened by two cells on each side.
pub fn local_count_l_jk<R: Real>(real: &Realization<R>, j: u32, k: u64) -> Result<usize> {
    level_slice(real, j)?;
    let j_eta = (real.params.eta * f64::from(j)).floor() as u32;
    let cells = 1u64 << j_eta;
    if k >= cells {
        return Err(Error::IndexOutOfRange {
            index: k as usize,
            len: cells as usize,
        });
    }
    let cell = 0.5f64.powi(j_eta as i32);
    let lo = R::of(k as f64 * cell - 2.0 * cell);
    let hi = R::of((k + 1) as f64 * cell + 2.0 * cell);
    let idx = &real.level_index[j as usize];
    let a = idx.x_sorted.partition_point(|&xn| xn < lo);
    let b = idx.x_sorted.partition_point(|&xn| xn <= hi);
    Ok(b - a)
}

/// Level window `A~_j` over which isolation is checked, as an inclusive range.
///
/// The nominal lower edge is `floor((1 - p0 eta eps_j) j)` = `j - p0 log2 j`,
/// which is negative until `j` is in the tens; taken literally, the window
/// would then swallow the coarsest levels, whose supports are wider than any
/// separation the construction can certify, and no pulse would ever be
/// isolated at practical truncations. The window is therefore floored at
/// `ceil(eta (1 + gamma) j) + 1`, the first level whose supports are smaller
/// than the separation radius `B_n^{-(1+gamma)}`; the nominal edge takes over
/// for large `j`.
pub fn a_tilde_window(params: &ModelParams, j: u32) -> Result<(u32, u32)> {
    if j < 2 {
        return Err(Error::Domain(format!(
            "isolation window needs j >= 2, got {j}"
        )));
    }
    let j_hi = (params.gamma * f64::from(j)).floor() as u32;
    if j_hi > params.j_max {
        return Err(Error::OutOfWindow {
            j: j_hi,
            j_max: params.j_max,
        });
    }
    let jf = f64::from(j);
    let nominal = ((1.0 - f64::from(params.p0) * params.eta * eps_j(params.eta, j)) * jf).floor();
    let guard = (params.eta * (1.0 + params.gamma) * jf).ceil() + 1.0;
    let j_lo = nominal.max(guard).max(0.0).min(jf) as u32;
    Ok((j_lo, j_hi))
}

/// The isolated pulses of one level.
#[derive(Debug, Clone)]
pub struct IsolatedSet {
    pub j: u32,
    /// Indices (ascending) of level-`j` pulses whose support meets no other
    /// support across the window levels.
    pub indices: Vec<usize>,
    /// Inclusive level range forming the window `A~_j`.
    pub a_tilde_range: (u32, u32),
}

/// Level-`j` pulses whose support is disjoint from every other support at
/// window levels (closed balls: tangency already breaks isolation).
pub fn isolated_indices<R: Real>(real: &Realization<R>, j: u32) -> Result<IsolatedSet> {
    let slice = level_slice(real, j)?;
    let (w_lo, w_hi) = a_tilde_window(&real.params, j)?;

    let mut indices = Vec::new();
    'pulse: for n in slice {
        let xn = real.x[n];
        let rn = real.radius(n);
        for jp in w_lo..=w_hi {
            let idx = &real.level_index[jp as usize];
            if idx.by_x.is_empty() {
                continue;
            }
            let reach = rn + idx.r_max;
            let a = idx.x_sorted.partition_point(|&xm| xm < xn - reach);
            let b = idx.x_sorted.partition_point(|&xm| xm <= xn + reach);
            for &m in &idx.by_x[a..b] {
                if m != n && (xn - real.x[m]).abs() <= rn + real.radius(m) {
                    continue 'pulse;
                }
            }
        }
        indices.push(n);
    }
    Ok(IsolatedSet {
        j,
        indices,
        a_tilde_range: (w_lo, w_hi),
    })
}

/// Ball-family selector for the limsup-set experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageVariant {
    /// All pulses, radius `B_n^{-delta}`.
    GDelta,
    /// Isolated pulses only, radius `B_n^{-delta (1 - eps~_j)}`.
    GPrimeDelta,
    /// All pulses, radius `B_n^{-(1 - eps~_j)}`.
    CoveringEq51,
    /// All pulses, radius `B_n^{-(1 + 3 eps_j)}`.
    GTildeOne,
}

impl CoverageVariant {
    fn uses_delta(self) -> bool {
        matches!(self, CoverageVariant::GDelta | CoverageVariant::GPrimeDelta)
    }

    /// Radius exponent applied to `B_n` at level `j`.
    fn exponent(self, eta: f64, delta: f64, j: u32) -> f64 {
        match self {
            CoverageVariant::GDelta => -delta,
            CoverageVariant::GPrimeDelta => -delta * (1.0 - eps_tilde_j(eta, j)),
            CoverageVariant::CoveringEq51 => -(1.0 - eps_tilde_j(eta, j)),
            CoverageVariant::GTildeOne => -(1.0 + 3.0 * eps_j(eta, j)),
        }
    }

    /// Smallest level at which the radius formula is defined.
    fn min_level(self) -> u32 {
        if self == CoverageVariant::GDelta {
            0
        } else {
            2
        }
    }
}

/// Per-level and cumulative grid coverage by one ball family.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub variant: CoverageVariant,
    pub delta: f64,
    /// Per level: `(j, covered fraction of grid points, ball count)`.
    pub per_level: Vec<(u32, f64, usize)>,
    /// Fraction covered by the union over all reported levels.
    pub cumulative_fraction: f64,
    pub grid_bits: u32,
}

fn validate_delta(params: &ModelParams, variant: CoverageVariant, delta: f64) -> Result<()> {
    if variant.uses_delta() && !(delta >= 1.0 && delta <= 1.0 / params.eta) {
        return Err(Error::Domain(format!(
            "delta must lie in [1, 1/eta] = [1, {}], got {delta}",
            1.0 / params.eta
        )));
    }
    Ok(())
}

/// Balls of one level under a variant: `(pulse index, radius)` pairs.
fn level_balls<R: Real>(
    real: &Realization<R>,
    variant: CoverageVariant,
    delta: f64,
    j: u32,
) -> Result<Vec<(usize, R)>> {
    let exponent = R::of(variant.exponent(real.params.eta, delta, j));
    let members: Vec<usize> = match variant {
        CoverageVariant::GPrimeDelta => isolated_indices(real, j)?.indices,
        _ => level_slice(real, j)?.collect(),
    };
    Ok(members
        .into_iter()
        .map(|n| (n, real.b[n].powf(exponent)))
        .collect())
}

/// Mark grid points covered by one ball; returns how many were newly marked.
fn mark_ball<R: Real>(mask: &mut [bool], grid_bits: u32, center: R, radius: R) -> usize {
    let scale = (1u64 << grid_bits) as f64;
    let c = center.as_f64();
    let r = radius.as_f64();
    // Pad the index range by one cell and re-test exactly, so rounding in the
    // f64 index arithmetic never drops a boundary tie.
    let lo = (((c - r) * scale).floor() - 1.0).max(0.0) as usize;
    let hi = ((((c + r) * scale).ceil() + 1.0) as usize).min(mask.len() - 1);
    let step = 0.5f64.powi(grid_bits as i32);
    let mut newly = 0usize;
    for (i, m) in mask.iter_mut().enumerate().take(hi + 1).skip(lo) {
        if !*m && (R::of(i as f64 * step) - center).abs() <= radius {
            *m = true;
            newly += 1;
        }
    }
    newly
}

/// Grid-proxy coverage of the variant's ball union, per level and cumulative.
pub fn union_coverage<R: Real>(
    real: &Realization<R>,
    variant: CoverageVariant,
    delta: f64,
    j_lo: u32,
    j_hi: u32,
    grid_bits: u32,
) -> Result<CoverageReport> {
    validate_delta(&real.params, variant, delta)?;
    if j_lo < 2 {
        return Err(Error::Domain(format!("j_lo must be >= 2, got {j_lo}")));
    }
    if j_hi > real.params.j_max || j_lo > j_hi {
        return Err(Error::OutOfWindow {
            j: j_hi.max(j_lo),
            j_max: real.params.j_max,
        });
    }

    let n_points = (1usize << grid_bits) + 1;
    let mut cumulative = vec![false; n_points];
    let mut per_level = Vec::with_capacity((j_hi - j_lo + 1) as usize);
    let mut level_mask = vec![false; n_points];

    for j in j_lo..=j_hi {
        let balls = level_balls(real, variant, delta, j)?;
        level_mask.iter_mut().for_each(|m| *m = false);
        let mut marked = 0usize;
        for &(n, radius) in &balls {
            marked += mark_ball(&mut level_mask, grid_bits, real.x[n], radius);
            if marked == n_points {
                break;
            }
        }
        for (c, l) in cumulative.iter_mut().zip(level_mask.iter()) {
            *c |= *l;
        }
        per_level.push((j, marked as f64 / n_points as f64, balls.len()));
    }

    let covered = cumulative.iter().filter(|&&m| m).count();
    Ok(CoverageReport {
        variant,
        delta,
        per_level,
        cumulative_fraction: covered as f64 / n_points as f64,
        grid_bits,
    })
}

/// Levels whose variant ball family covers the point `x` (sorted ascending).
pub fn limsup_hits<R: Real>(
    real: &Realization<R>,
    x: R,
    variant: CoverageVariant,
    delta: f64,
) -> Result<Vec<u32>> {
    validate_delta(&real.params, variant, delta)?;
    let mut levels = Vec::new();
    for j in variant.min_level()..=real.params.j_max {
        let hit = level_balls(real, variant, delta, j)?
            .iter()
            .any(|&(n, radius)| (x - real.x[n]).abs() <= radius);
        if hit {
            levels.push(j);
        }
    }
    Ok(levels)
}
