//! Sampling of the driving point processes and their dyadic level structure.
//!
//! A realization materializes three sequences: amplitudes come from `(C_n)`,
//! the arrival times of a unit-rate Poisson process on the positive axis;
//! dilations `(B_n)` are the sorted points of an independent unit-rate Poisson
//! process on `(0, 2^{eta j_max}]`; positions `(X_n)` are uniform on `[0, 1]`,
//! paired with `(B_n)` by index. Level `j` collects the pulses with inverse
//! width `B_n^{1/eta}` in `(2^{j-1}, 2^j]` (level 0 takes everything up to 1),
//! i.e. `B_n` itself in `(2^{eta(j-1)}, 2^{eta j}]`.
//!
//! Sampling draws each level window separately from fixed substreams ("B",
//! "X", "C"), in ascending level order. Restricting a Poisson process to
//! disjoint windows gives independent Poisson processes, so this is equal in
//! law to sampling one global count and sorting, while keeping draws for
//! existing levels untouched when `j_max` grows.
//!
//! The index pairing of `(C_n)` against `(B_n, X_n)` is not dictated by the
//! model (only mutual independence is): we pair the n-th smallest `B` with the
//! n-th Poisson arrival `C` and the n-th uniform `X`, which is documented here
//! for reproducibility.

use crate::rng::SubStream;
use crate::{Error, ModelParams, Real, Result};
use std::ops::Range;

/// Per-level directory: indices of one level sorted by pulse position.
#[derive(Debug, Clone)]
pub(crate) struct LevelIndex<R> {
    /// Pulse indices of this level, ordered by increasing `x`.
    pub by_x: Vec<usize>,
    /// `x[i]` for `i` in `by_x` (same order).
    pub x_sorted: Vec<R>,
    /// Largest support radius `b^{-1/eta}` within the level.
    pub r_max: R,
}

/// One sampled truncated realization of the pulse process.
///
/// Arrays are index-aligned; `level_bounds[j]` is the contiguous index range
/// of level `j` (pulses are stored in ascending `b`, hence ascending level).
/// Regenerating with the same [`ModelParams`] yields bit-identical arrays.
#[derive(Debug, Clone)]
pub struct Realization<R> {
    pub params: ModelParams,
    /// Arrival times of the amplitude process, strictly increasing.
    pub c: Vec<R>,
    /// Dilation points, strictly increasing.
    pub b: Vec<R>,
    /// Pulse centers in `[0, 1]`.
    pub x: Vec<R>,
    /// Contiguous index range of each level `j in 0..=j_max`.
    pub level_bounds: Vec<Range<usize>>,
    pub(crate) level_index: Vec<LevelIndex<R>>,
}

impl<R: Real> Realization<R> {
    /// Number of materialized pulses.
    #[inline]
    pub fn n_total(&self) -> usize {
        self.b.len()
    }

    /// Support radius `b_n^{-1/eta}` of pulse `n` (0-based).
    #[inline]
    pub fn radius(&self, n: usize) -> R {
        self.b[n].powf(R::of(-1.0 / self.params.eta))
    }

    /// Inverse width `b_n^{1/eta}` of pulse `n` (0-based).
    #[inline]
    pub fn inv_width(&self, n: usize) -> R {
        self.b[n].powf(R::of(1.0 / self.params.eta))
    }

    /// Assemble a realization from raw arrays (primarily for tests and I/O).
    ///
    /// Validates monotonicity and classifies each `b` into its level by the
    /// same window edges the sampler uses.
    pub fn from_parts(params: ModelParams, c: Vec<R>, b: Vec<R>, x: Vec<R>) -> Result<Self> {
        params.validate()?;
        if c.len() != b.len() || x.len() != b.len() {
            return Err(Error::Domain(format!(
                "array lengths differ: |c|={}, |b|={}, |x|={}",
                c.len(),
                b.len(),
                x.len()
            )));
        }
        for w in b.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain("b must be strictly increasing".into()));
            }
        }
        for w in c.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain("c must be strictly increasing".into()));
            }
        }
        let top = R::of(params.level_edge(params.j_max));
        if b.last().map_or(false, |&last| last > top) {
            return Err(Error::Domain(
                "b exceeds the materialization window 2^(eta j_max)".into(),
            ));
        }

        // Window edges in R-space so classification matches the sampler.
        let edges: Vec<R> = (0..=params.j_max).map(|j| R::of(params.level_edge(j))).collect();
        let mut level_bounds = Vec::with_capacity(params.j_max as usize + 1);
        let mut start = 0usize;
        for j in 0..=params.j_max {
            let mut end = start;
            while end < b.len() && b[end] <= edges[j as usize] {
                end += 1;
            }
            level_bounds.push(start..end);
            start = end;
        }
        let level_index = build_level_index(params, &level_bounds, &b, &x);
        Ok(Realization {
            params,
            c,
            b,
            x,
            level_bounds,
            level_index,
        })
    }
}

fn build_level_index<R: Real>(
    params: ModelParams,
    bounds: &[Range<usize>],
    b: &[R],
    x: &[R],
) -> Vec<LevelIndex<R>> {
    let neg_inv_eta = R::of(-1.0 / params.eta);
    bounds
        .iter()
        .map(|range| {
            let mut by_x: Vec<usize> = range.clone().collect();
            by_x.sort_by(|&i, &j| x[i].partial_cmp(&x[j]).expect("positions are finite"));
            let x_sorted = by_x.iter().map(|&i| x[i]).collect();
            let r_max = range
                .clone()
                .map(|i| b[i].powf(neg_inv_eta))
                .fold(R::zero(), R::max);
            LevelIndex { by_x, x_sorted, r_max }
        })
        .collect()
}

/// Sample one realization from the seed in `params`.
///
/// Level windows are drawn in ascending order: a Poisson count for the window
/// measure, then that many uniforms in the window, sorted. Draws for `X` and
/// `C` follow index order, so the construction is fully reproducible.
pub fn sample_realization<R: Real>(params: &ModelParams) -> Result<Realization<R>> {
    params.validate()?;

    let mut stream_b = SubStream::new(params.seed, "B");
    let mut stream_x = SubStream::new(params.seed, "X");
    let mut stream_c = SubStream::new(params.seed, "C");

    let mut b: Vec<R> = Vec::new();
    let mut x: Vec<R> = Vec::new();
    let mut level_bounds = Vec::with_capacity(params.j_max as usize + 1);

    let mut lo_edge = 0.0f64;
    for j in 0..=params.j_max {
        let hi_edge = params.level_edge(j);
        let lambda = hi_edge - lo_edge;
        let count = stream_b.poisson(lambda) as usize;

        let start = b.len();
        let lo = R::of(lo_edge);
        let hi = R::of(hi_edge);
        let width = hi - lo;
        let mut window: Vec<R> = (0..count)
            .map(|_| {
                let mut v = lo + R::of(stream_b.uniform_oc()) * width;
                // Keep the draw inside (lo, hi] after rounding.
                if v <= lo {
                    v = lo.bump_up();
                }
                if v > hi {
                    v = hi;
                }
                v
            })
            .collect();
        window.sort_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
        // Rounding collisions are possible for narrow scalar types; restore
        // strict monotonicity without leaving the window.
        for i in 1..window.len() {
            if window[i] <= window[i - 1] {
                window[i] = window[i - 1].bump_up();
            }
        }
        b.extend_from_slice(&window);
        x.extend((0..count).map(|_| R::of(stream_x.uniform_co())));
        level_bounds.push(start..b.len());
        lo_edge = hi_edge;
    }

    let mut c: Vec<R> = Vec::with_capacity(b.len());
    let mut acc = R::zero();
    for _ in 0..b.len() {
        let gap = R::of(stream_c.exponential());
        acc = acc + gap;
        if let Some(&prev) = c.last() {
            if acc <= prev {
                acc = prev.bump_up();
            }
        }
        c.push(acc);
    }

    let level_index = build_level_index(*params, &level_bounds, &b, &x);
    Ok(Realization {
        params: *params,
        c,
        b,
        x,
        level_bounds,
        level_index,
    })
}

/// Contiguous index range of level `j` (the set `A_j`).
pub fn level_slice<R: Real>(real: &Realization<R>, j: u32) -> Result<Range<usize>> {
    if j > real.params.j_max {
        return Err(Error::OutOfWindow {
            j,
            j_max: real.params.j_max,
        });
    }
    Ok(real.level_bounds[j as usize].clone())
}

/// `log2(j) / (eta j)`: width of the almost-sure level-count window.
///
/// Returns infinity for `j < 2`, where the expression is non-positive or
/// undefined; those levels are excluded from every regression window.
pub fn eps_j(eta: f64, j: u32) -> f64 {
    if j < 2 {
        return f64::INFINITY;
    }
    let j = f64::from(j);
    j.log2() / (eta * j)
}

/// `log2(16 j log2 j) / (eta j)`: radius correction of the isolated covering.
///
/// Infinity sentinel for `j < 2`, as for [`eps_j`].
pub fn eps_tilde_j(eta: f64, j: u32) -> f64 {
    if j < 2 {
        return f64::INFINITY;
    }
    let j = f64::from(j);
    (16.0 * j * j.log2()).log2() / (eta * j)
}

/// Summary statistics of one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelStats {
    pub j: u32,
    /// Observed pulse count `N_j`.
    pub n_j: usize,
    /// Exact Poisson parameter of `N_j`: the window measure.
    pub poisson_parameter: f64,
    pub eps_j: f64,
    pub eps_tilde_j: f64,
}

/// Level count and the epsilon sequences for level `j`.
pub fn level_stats<R: Real>(real: &Realization<R>, j: u32) -> Result<LevelStats> {
    let slice = level_slice(real, j)?;
    let eta = real.params.eta;
    let poisson_parameter = if j == 0 {
        1.0 // window (0, 1], Lebesgue measure 1
    } else {
        real.params.level_edge(j) - real.params.level_edge(j - 1)
    };
    Ok(LevelStats {
        j,
        n_j: slice.len(),
        poisson_parameter,
        eps_j: eps_j(eta, j),
        eps_tilde_j: eps_tilde_j(eta, j),
    })
}
