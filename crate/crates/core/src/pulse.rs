//! Pulse profiles: Lipschitz functions supported exactly on `[-1, 1]`.

use crate::{Error, PulseKind, Real, Result};

/// A pulse profile together with its analytic constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub kind: PulseKind,
    /// Valid Lipschitz constant: 1 for the hat; for the smooth bump a
    /// numerical bound on `sup |psi'|`, attained near `u = 0.7598`.
    pub lipschitz_constant: f64,
    /// Peak value; both profiles are normalized with `psi(0) = 1`.
    pub sup_norm: f64,
}

impl Pulse {
    pub fn new(kind: PulseKind) -> Self {
        let lipschitz_constant = match kind {
            PulseKind::Hat => 1.0,
            PulseKind::SmoothBump => 2.1704,
        };
        Pulse {
            kind,
            lipschitz_constant,
            sup_norm: 1.0,
        }
    }
}

/// Profile value, no input checking. Exactly zero outside `(-1, 1)`.
#[inline]
pub(crate) fn eval_raw<R: Real>(kind: PulseKind, u: R) -> R {
    match kind {
        PulseKind::Hat => (R::one() - u.abs()).max(R::zero()),
        PulseKind::SmoothBump => {
            let one = R::one();
            if u.abs() < one {
                (one - one / (one - u * u)).exp()
            } else {
                R::zero()
            }
        }
    }
}

/// Profile value at `u`; rejects NaN.
pub fn pulse_eval<R: Real>(kind: PulseKind, u: R) -> Result<R> {
    if u.is_nan() {
        return Err(Error::NanInput("pulse_eval argument"));
    }
    Ok(eval_raw(kind, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_values() {
        assert_eq!(pulse_eval(PulseKind::Hat, 0.0f64).unwrap(), 1.0);
        assert_eq!(pulse_eval(PulseKind::Hat, 0.5f64).unwrap(), 0.5);
        assert_eq!(pulse_eval(PulseKind::Hat, 1.5f64).unwrap(), 0.0);
        assert_eq!(pulse_eval(PulseKind::Hat, -0.25f64).unwrap(), 0.75);
    }

    #[test]
    fn bump_normalization_and_support() {
        assert_eq!(pulse_eval(PulseKind::SmoothBump, 0.0f64).unwrap(), 1.0);
        assert_eq!(pulse_eval(PulseKind::SmoothBump, 1.0f64).unwrap(), 0.0);
        assert_eq!(pulse_eval(PulseKind::SmoothBump, -1.0f64).unwrap(), 0.0);
        assert_eq!(pulse_eval(PulseKind::SmoothBump, 7.0f64).unwrap(), 0.0);
        assert!(pulse_eval(PulseKind::SmoothBump, 0.9f64).unwrap() > 0.0);
    }

    #[test]
    fn nan_is_rejected() {
        assert!(pulse_eval(PulseKind::Hat, f64::NAN).is_err());
        assert!(pulse_eval(PulseKind::SmoothBump, f64::NAN).is_err());
    }

    #[test]
    fn support_is_exactly_unit_interval() {
        // Zero at and beyond the boundary, nonzero strictly inside.
        for kind in [PulseKind::Hat, PulseKind::SmoothBump] {
            assert_eq!(eval_raw(kind, 1.0f64), 0.0);
            assert_eq!(eval_raw(kind, -1.0f64), 0.0);
            assert!(eval_raw(kind, 0.999f64) > 0.0 || kind == PulseKind::SmoothBump);
            assert!(eval_raw(kind, 0.5f64) > 0.0);
        }
    }

    #[test]
    fn lipschitz_bound_on_fine_mesh() {
        // Secant slopes over a 10^6-point mesh stay below the stored constant.
        let n = 1_000_000usize;
        for kind in [PulseKind::Hat, PulseKind::SmoothBump] {
            let pulse = Pulse::new(kind);
            let mut max_slope = 0.0f64;
            let mut prev_u = -1.2f64;
            let mut prev_v = eval_raw(kind, prev_u);
            for i in 1..=n {
                let u = -1.2 + 2.4 * (i as f64) / (n as f64);
                let v = eval_raw(kind, u);
                max_slope = max_slope.max(((v - prev_v) / (u - prev_u)).abs());
                prev_u = u;
                prev_v = v;
            }
            assert!(
                max_slope <= pulse.lipschitz_constant,
                "{kind}: mesh slope {max_slope} exceeds {}",
                pulse.lipschitz_constant
            );
            // The constant is tight, not a lazy overestimate.
            assert!(max_slope > 0.95 * pulse.lipschitz_constant, "{kind}");
        }
    }

    #[test]
    fn f32_agrees_with_f64_to_single_precision() {
        for kind in [PulseKind::Hat, PulseKind::SmoothBump] {
            for i in 0..200 {
                let u = -1.1 + 2.2 * (i as f64) / 199.0;
                let wide = eval_raw(kind, u);
                let narrow = eval_raw(kind, u as f32) as f64;
                assert!((wide - narrow).abs() < 1e-6, "{kind} at {u}");
            }
        }
    }
}
