//! Simulation and regularity analysis of random pulse sums.
//!
//! The process under study is a sum of dilated, translated copies of a fixed
//! Lipschitz profile `psi` supported on `[-1, 1]`:
//!
//! ```text
//! F(x) = sum_n  C_n^{-alpha} * psi( B_n^{1/eta} * (x - X_n) )
//! ```
//!
//! where `(C_n)` are the arrival times of a unit-rate Poisson process,
//! `(B_n, X_n)` an independent Poisson point process on `R+ x [0,1]` with
//! `(B_n)` increasing, `alpha` a regularity parameter and `eta` a lacunarity
//! parameter, both in `(0, 1)`.
//!
//! The crate simulates truncated realizations of `F` on dyadic grids and
//! provides the machinery to study its regularity numerically:
//!
//! * [`point_process`] — seeded, reproducible sampling of the point processes
//!   and the dyadic level decomposition of the dilation sequence;
//! * [`pulse`] / [`field`] — pulse profiles and evaluation of `F`, with a
//!   level-indexed fast path and a direct-summation oracle;
//! * [`geometry`] — overlap counts, isolated pulses and ball-union coverage;
//! * [`wavelet`] — continuous wavelet transform along two independent routes
//!   (grid quadrature and exact per-pulse coefficients) plus decay fits;
//! * [`regularity`] — oscillation and wavelet-cone Hölder estimators, exponent
//!   fields and the multifractal spectrum via level-set box counting;
//! * [`experiments`] — a reproducible verification battery with pass/fail
//!   reports;
//! * [`io`] — CSV/JSON artifact writers.
//!
//! Numerical kernels are generic over the scalar type through the [`Real`]
//! trait (`f32` or `f64`); statistical estimates, fits and reports are plain
//! `f64`. The aliases below fix the scalar for the common cases.

pub mod error;
pub mod experiments;
pub mod field;
pub mod geometry;
pub mod io;
pub mod params;
pub mod point_process;
pub mod pulse;
pub mod real;
pub mod regularity;
pub mod rng;
pub mod wavelet;

pub use error::Error;
pub use params::{default_p0_gamma, ModelParams, PulseKind};
pub use real::Real;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Double-precision realization (the default working type).
pub type Realization64 = point_process::Realization<f64>;
/// Single-precision realization.
pub type Realization32 = point_process::Realization<f32>;
/// Double-precision sampled field.
pub type Signal64 = field::Signal<f64>;
/// Single-precision sampled field.
pub type Signal32 = field::Signal<f32>;
/// Double-precision wavelet coefficient grid.
pub type CwtGrid64 = wavelet::CwtGrid<f64>;
