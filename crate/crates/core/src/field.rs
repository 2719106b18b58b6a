//! Evaluation of the truncated pulse sum on dyadic grids.
//!
//! Two routes compute the same finite sum. [`evaluate_field`] walks levels in
//! ascending order and, inside each level, visits only the pulses whose
//! support reaches the grid point (binary search on the per-level position
//! index), accumulating in ascending pulse order. [`evaluate_field_direct`]
//! is the oracle: one plain loop over every pulse in ascending order with no
//! culling. Skipped pulses contribute an exact floating-point zero, and the
//! visit orders coincide, so the two routes agree bitwise.

use crate::point_process::Realization;
use crate::pulse::eval_raw;
use crate::{Error, ModelParams, Real, Result};
use rayon::prelude::*;

/// The field sampled on the dyadic grid `x_i = i * 2^{-grid_bits}`.
#[derive(Debug, Clone)]
pub struct Signal<R> {
    /// Provenance: parameters that regenerate the source realization.
    /// `None` for synthetic signals fed to the estimators.
    pub params: Option<ModelParams>,
    pub grid_bits: u32,
    /// `2^grid_bits + 1` samples, endpoints included.
    pub values: Vec<R>,
    /// Levels included in the sum, `None` for synthetic signals.
    pub j_range: Option<(u32, u32)>,
    /// Heuristic uniform bound on the discarded tail (metadata only; never
    /// added to `values`). For `j_hi < 2` the sentinel levels {j_hi+1, 1} are
    /// excluded from the bound.
    pub tail_estimate: f64,
}

impl<R: Real> Signal<R> {
    /// Wrap precomputed samples (synthetic signals for estimator tests).
    pub fn synthetic(grid_bits: u32, values: Vec<R>) -> Result<Self> {
        let expect = (1usize << grid_bits) + 1;
        if values.len() != expect {
            return Err(Error::Domain(format!(
                "synthetic signal needs {expect} samples for grid_bits {grid_bits}, got {}",
                values.len()
            )));
        }
        Ok(Signal {
            params: None,
            grid_bits,
            values,
            j_range: None,
            tail_estimate: 0.0,
        })
    }

    /// Sample a scalar function of position on the grid.
    pub fn from_fn(grid_bits: u32, f: impl Fn(f64) -> R) -> Self {
        let n = (1usize << grid_bits) + 1;
        let step = 0.5f64.powi(grid_bits as i32);
        Signal {
            params: None,
            grid_bits,
            values: (0..n).map(|i| f(i as f64 * step)).collect(),
            j_range: None,
            tail_estimate: 0.0,
        }
    }

    /// Grid abscissa of sample `i`.
    #[inline]
    pub fn position(&self, i: usize) -> f64 {
        i as f64 * 0.5f64.powi(self.grid_bits as i32)
    }

    /// Number of samples (`2^grid_bits + 1`).
    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the grid point nearest to `x` (ties round half up).
    #[inline]
    pub fn nearest_index(&self, x: f64) -> usize {
        let scaled = x * (1u64 << self.grid_bits) as f64;
        (scaled.round().max(0.0) as usize).min(self.values.len() - 1)
    }
}

/// Per-pulse constants shared by one evaluation pass.
struct PulseTable<R> {
    weight: Vec<R>,
    inv_width: Vec<R>,
}

fn pulse_table<R: Real>(real: &Realization<R>) -> PulseTable<R> {
    let neg_alpha = R::of(-real.params.alpha);
    let inv_eta = R::of(1.0 / real.params.eta);
    PulseTable {
        weight: real.c.iter().map(|&c| c.powf(neg_alpha)).collect(),
        inv_width: real.b.iter().map(|&b| b.powf(inv_eta)).collect(),
    }
}

/// One grid point of the culled path. Visits levels in ascending order and,
/// within a level, hits in ascending pulse order.
fn eval_point<R: Real>(
    real: &Realization<R>,
    table: &PulseTable<R>,
    j_lo: u32,
    j_hi: u32,
    x: R,
    hits: &mut Vec<usize>,
) -> R {
    let kind = real.params.pulse_kind;
    let one = R::one();
    // Search window padding absorbs rounding between b^{1/eta} and b^{-1/eta}.
    let pad = one + R::of(16.0) * R::epsilon();
    let mut acc = R::zero();
    for j in j_lo..=j_hi {
        let idx = &real.level_index[j as usize];
        if idx.by_x.is_empty() {
            continue;
        }
        let reach = idx.r_max * pad;
        let lo = idx.x_sorted.partition_point(|&xn| xn < x - reach);
        let hi = idx.x_sorted.partition_point(|&xn| xn <= x + reach);
        if lo >= hi {
            continue;
        }
        hits.clear();
        hits.extend_from_slice(&idx.by_x[lo..hi]);
        hits.sort_unstable();
        for &n in hits.iter() {
            let u = (x - real.x[n]) * table.inv_width[n];
            if u.abs() < one {
                acc += table.weight[n] * eval_raw(kind, u);
            }
        }
    }
    acc
}

/// Evaluate the truncated field on the grid, levels `j_lo..=j_hi` only.
///
/// Grid points are processed independently (in parallel); each point's sum
/// runs in a fixed order, so the result is identical for any thread count.
pub fn evaluate_field<R: Real>(
    real: &Realization<R>,
    grid_bits: u32,
    j_lo: u32,
    j_hi: u32,
) -> Result<Signal<R>> {
    let j_max = real.params.j_max;
    if j_hi > j_max || j_lo > j_hi {
        return Err(Error::OutOfWindow {
            j: j_hi.max(j_lo),
            j_max,
        });
    }
    if grid_bits < j_hi + 2 {
        return Err(Error::Resolution {
            required: j_hi + 2,
            got: grid_bits,
        });
    }
    if grid_bits > 30 {
        return Err(Error::Domain(format!(
            "grid_bits {grid_bits} exceeds the supported maximum of 30"
        )));
    }

    let table = pulse_table(real);
    let n = (1usize << grid_bits) + 1;
    let step = 0.5f64.powi(grid_bits as i32);
    let values: Vec<R> = (0..n)
        .into_par_iter()
        .map_init(Vec::new, |hits, i| {
            eval_point(real, &table, j_lo, j_hi, R::of(i as f64 * step), hits)
        })
        .collect();

    let tail = tail_sum(&real.params, j_hi.max(2));
    Ok(Signal {
        params: Some(real.params),
        grid_bits,
        values,
        j_range: Some((j_lo, j_hi)),
        tail_estimate: tail,
    })
}

/// Oracle route: the full sum at one point, no culling, no level grouping.
pub fn evaluate_field_direct<R: Real>(real: &Realization<R>, x: R) -> R {
    let kind = real.params.pulse_kind;
    let neg_alpha = R::of(-real.params.alpha);
    let inv_eta = R::of(1.0 / real.params.eta);
    let mut acc = R::zero();
    for n in 0..real.n_total() {
        let weight = real.c[n].powf(neg_alpha);
        let u = (x - real.x[n]) * real.b[n].powf(inv_eta);
        acc += weight * eval_raw(kind, u);
    }
    acc
}

fn tail_sum(params: &ModelParams, j_trunc: u32) -> f64 {
    // sum_{j > j_trunc} j^2 * 2^{-alpha eta j (1 - eps_j)}  =  sum j^{2+alpha} 2^{-alpha eta j}
    // (for j >= 2 the eps_j correction folds into the j^alpha factor).
    let sup_norm = crate::pulse::Pulse::new(params.pulse_kind).sup_norm;
    let power = 2.0 + params.alpha;
    let rate = params.alpha * params.eta;
    let mut acc = 0.0f64;
    let mut j = u64::from(j_trunc) + 1;
    loop {
        let jf = j as f64;
        let term = jf.powf(power) * (-rate * jf).exp2();
        acc += term;
        if term < acc * 1e-17 || j - u64::from(j_trunc) > 10_000_000 {
            break;
        }
        j += 1;
    }
    sup_norm * acc
}

/// Heuristic uniform bound on the tail discarded beyond level `j_trunc`.
///
/// Sums the per-level envelope `j^2 * 2^{-alpha eta j (1 - eps_j)}` (overlap
/// count times amplitude bound) to numerical convergence, scaled by the pulse
/// peak. The constant prefactor of the underlying estimate is not computable,
/// so this is a shape estimate with unit constant, reported as metadata only.
pub fn tail_estimate(params: &ModelParams, j_trunc: u32) -> Result<f64> {
    params.validate()?;
    if j_trunc < 2 {
        return Err(Error::Domain(format!(
            "tail_estimate needs j_trunc >= 2, got {j_trunc}"
        )));
    }
    Ok(tail_sum(params, j_trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_process::sample_realization;
    use crate::PulseKind;

    fn params(alpha: f64, eta: f64, seed: u64, j_max: u32) -> ModelParams {
        ModelParams::new(alpha, eta, PulseKind::Hat, seed, j_max).unwrap()
    }

    #[test]
    fn empty_realization_evaluates_to_zero() {
        let p = params(0.5, 0.5, 1, 6);
        let real: Realization<f64> = Realization::from_parts(p, vec![], vec![], vec![]).unwrap();
        let sig = evaluate_field(&real, 8, 0, 6).unwrap();
        assert_eq!(sig.len(), 257);
        assert!(sig.values.iter().all(|&v| v == 0.0));
        assert_eq!(evaluate_field_direct(&real, 0.3), 0.0);
    }

    #[test]
    fn single_pulse_center_value() {
        // One pulse centered on a grid point: F(X_1) = C_1^{-alpha} psi(0).
        let p = params(0.5, 0.5, 1, 6);
        let real = Realization::from_parts(p, vec![2.0], vec![3.0], vec![0.5]).unwrap();
        let sig = evaluate_field(&real, 8, 0, 6).unwrap();
        let at_center = sig.values[sig.nearest_index(0.5)];
        assert!((at_center - 2.0f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn two_disjoint_pulses_direct() {
        let p = params(0.5, 0.5, 1, 6);
        // radii: b^{-2} = 1/4 and 1/16; centers far apart
        let real =
            Realization::from_parts(p, vec![1.5, 3.0], vec![2.0, 4.0], vec![0.2, 0.8]).unwrap();
        let x = 0.25f64; // inside first support only
        let expect = 1.5f64.powf(-0.5) * (1.0 - ((x - 0.2) * 4.0f64).abs());
        assert!((evaluate_field_direct(&real, x) - expect).abs() < 1e-15);
        // outside every support
        assert_eq!(evaluate_field_direct(&real, 0.55), 0.0);
    }

    #[test]
    fn culled_path_matches_direct_bitwise() {
        for seed in [1u64, 2, 3] {
            for kind in [PulseKind::Hat, PulseKind::SmoothBump] {
                let mut p = params(0.6, 0.45, seed, 10);
                p.pulse_kind = kind;
                let real: Realization<f64> = sample_realization(&p).unwrap();
                let sig = evaluate_field(&real, 12, 0, 10).unwrap();
                for i in (0..sig.len()).step_by(17) {
                    let direct = evaluate_field_direct(&real, sig.position(i));
                    assert_eq!(sig.values[i], direct, "seed {seed} {kind} i={i}");
                }
            }
        }
    }

    #[test]
    fn support_exactness() {
        // Direct evaluation vanishes wherever no support reaches.
        let p = params(0.5, 0.5, 4, 8);
        let real: Realization<f64> = sample_realization(&p).unwrap();
        let mut s = crate::rng::SubStream::new(9, "probe");
        for _ in 0..200 {
            let x = s.uniform_co();
            let covered = (0..real.n_total())
                .any(|n| (x - real.x[n]).abs() * real.inv_width(n) < 1.0);
            if !covered {
                assert_eq!(evaluate_field_direct(&real, x), 0.0);
            }
        }
    }

    #[test]
    fn level_additivity() {
        let p = params(0.5, 0.5, 5, 10);
        let real: Realization<f64> = sample_realization(&p).unwrap();
        let full = evaluate_field(&real, 12, 0, 10).unwrap();
        let low = evaluate_field(&real, 12, 0, 4).unwrap();
        let high = evaluate_field(&real, 12, 5, 10).unwrap();
        for i in 0..full.len() {
            let sum = low.values[i] + high.values[i];
            assert!((full.values[i] - sum).abs() <= 1e-12, "i={i}");
        }
    }

    #[test]
    fn lipschitz_sanity_on_adjacent_grid_points() {
        let p = params(0.5, 0.5, 6, 8);
        let real: Realization<f64> = sample_realization(&p).unwrap();
        let sig = evaluate_field(&real, 10, 0, 8).unwrap();
        let lip = crate::pulse::Pulse::new(p.pulse_kind).lipschitz_constant;
        let budget: f64 = (0..real.n_total())
            .map(|n| real.c[n].powf(-p.alpha) * real.inv_width(n))
            .sum::<f64>()
            * lip;
        let h = 0.5f64.powi(10);
        for w in sig.values.windows(2) {
            assert!((w[1] - w[0]).abs() <= budget * h * (1.0 + 1e-12));
        }
    }

    #[test]
    fn resolution_error_names_requirement() {
        let p = params(0.5, 0.5, 1, 10);
        let real: Realization<f64> = sample_realization(&p).unwrap();
        match evaluate_field(&real, 10, 0, 10) {
            Err(Error::Resolution { required, got }) => {
                assert_eq!(required, 12);
                assert_eq!(got, 10);
            }
            other => panic!("expected resolution error, got {other:?}"),
        }
    }

    #[test]
    fn tail_estimate_decreases_to_zero() {
        let p = params(0.9, 0.4, 1, 8);
        let mut prev = f64::INFINITY;
        for j_trunc in 2..40 {
            let t = tail_estimate(&p, j_trunc).unwrap();
            assert!(t > 0.0 && t < prev, "j_trunc={j_trunc}");
            prev = t;
        }
        assert!(tail_estimate(&p, 200).unwrap() < 1e-18);
        assert!(tail_estimate(&p, 1).is_err());
    }

    #[test]
    fn tail_estimate_matches_compensated_resummation() {
        // Oracle: 200 explicit terms, summed smallest-first with Kahan
        // compensation. Agreement to 1e-10 relative.
        let p = params(0.9, 0.4, 1, 8);
        let j_trunc = 16u32;
        let mut terms: Vec<f64> = (j_trunc + 1..=j_trunc + 200)
            .map(|j| {
                let jf = f64::from(j);
                jf.powf(2.0 + p.alpha) * (-p.alpha * p.eta * jf).exp2()
            })
            .collect();
        terms.reverse();
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for t in terms {
            let y = t - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        let got = tail_estimate(&p, j_trunc).unwrap();
        assert!(
            (got - sum).abs() <= 1e-10 * sum,
            "tail {got} vs oracle {sum}"
        );
    }

    #[test]
    fn f32_field_close_to_f64() {
        let p = params(0.5, 0.5, 11, 8);
        let wide: Realization<f64> = sample_realization(&p).unwrap();
        let narrow: Realization<f32> = sample_realization(&p).unwrap();
        let sw = evaluate_field(&wide, 10, 0, 8).unwrap();
        let sn = evaluate_field(&narrow, 10, 0, 8).unwrap();
        // Separate Poisson draws may differ; only compare when counts agree.
        if wide.n_total() == narrow.n_total() {
            for i in (0..sw.len()).step_by(31) {
                assert!((sw.values[i] - f64::from(sn.values[i])).abs() < 1e-3);
            }
        }
    }
}
