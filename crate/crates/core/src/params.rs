//! Model parameters and their validation.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Pulse profile selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    /// Tent profile `max(0, 1 - |u|)`: Lipschitz, kink at the origin.
    Hat,
    /// `exp(1 - 1/(1 - u^2))` inside `(-1, 1)`: smooth, peak value 1.
    SmoothBump,
}

impl std::fmt::Display for PulseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PulseKind::Hat => write!(f, "hat"),
            PulseKind::SmoothBump => write!(f, "smooth_bump"),
        }
    }
}

/// All model constants for one simulation.
///
/// `alpha` is the regularity exponent, `eta` the lacunarity exponent, both in
/// `(0, 1)`. Only pulses with `B_n^{1/eta} <= 2^{j_max}` are materialized;
/// the dyadic evaluation grid has step `2^{-grid_bits}`. `p0` and `gamma`
/// steer the isolation window used by the covering analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub eta: f64,
    pub pulse_kind: PulseKind,
    pub gamma: f64,
    pub p0: u32,
    pub seed: u64,
    pub j_max: u32,
    pub grid_bits: u32,
}

impl ModelParams {
    /// Parameters with `p0`, `gamma` filled from [`default_p0_gamma`] and a
    /// grid two bits finer than the narrowest materialized pulse.
    pub fn new(alpha: f64, eta: f64, pulse_kind: PulseKind, seed: u64, j_max: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                constraint: "0 < alpha < 1",
                value: alpha.to_string(),
            });
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "eta",
                constraint: "0 < eta < 1",
                value: eta.to_string(),
            });
        }
        let (p0, gamma) = default_p0_gamma(alpha, eta)?;
        let params = ModelParams {
            alpha,
            eta,
            pulse_kind,
            gamma,
            p0,
            seed,
            j_max,
            grid_bits: j_max + 2,
        };
        params.validate()?;
        Ok(params)
    }

    /// Check every documented constraint, naming the first violated one.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                constraint: "0 < alpha < 1",
                value: self.alpha.to_string(),
            });
        }
        if !(self.eta > 0.0 && self.eta < 1.0) || !self.eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                constraint: "0 < eta < 1",
                value: self.eta.to_string(),
            });
        }
        if !(self.gamma >= 1.0 && self.gamma <= 1.0 / self.eta) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                constraint: "1 <= gamma <= 1/eta",
                value: self.gamma.to_string(),
            });
        }
        let p0_min = (3.0 + 3.0 * self.alpha) / (1.0 - self.alpha * self.eta);
        if !(f64::from(self.p0) > p0_min) {
            return Err(Error::InvalidParameter {
                name: "p0",
                constraint: "p0 > (3 + 3*alpha) / (1 - alpha*eta), strictly",
                value: self.p0.to_string(),
            });
        }
        if self.j_max == 0 {
            return Err(Error::InvalidParameter {
                name: "j_max",
                constraint: "j_max >= 1",
                value: self.j_max.to_string(),
            });
        }
        if self.grid_bits < self.j_max + 2 {
            return Err(Error::InvalidParameter {
                name: "grid_bits",
                constraint: "grid_bits >= j_max + 2",
                value: self.grid_bits.to_string(),
            });
        }
        Ok(())
    }

    /// `2^{eta * j}`: right edge of the dilation window of level `j`.
    #[inline]
    pub fn level_edge(&self, j: u32) -> f64 {
        (self.eta * f64::from(j)).exp2()
    }
}

/// Smallest admissible `p0` and the canonical `gamma = 1`.
///
/// `p0 = floor((3 + 3 alpha) / (1 - alpha eta)) + 1`, which strictly exceeds
/// the bound even when the quotient is an integer.
pub fn default_p0_gamma(alpha: f64, eta: f64) -> Result<(u32, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            constraint: "0 < alpha < 1",
            value: alpha.to_string(),
        });
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            constraint: "0 < eta < 1",
            value: eta.to_string(),
        });
    }
    let bound = (3.0 + 3.0 * alpha) / (1.0 - alpha * eta);
    Ok((bound.floor() as u32 + 1, 1.0))
}
