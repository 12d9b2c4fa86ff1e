//! Special functions used by the closed forms.
//!
//! All routines work in `f64`. Where the closed forms combine very large and
//! very small factors, log-space variants (`ln_*`) are provided alongside the
//! direct ones.

mod bessel;
mod expint;
mod gamma;
mod incgamma;
mod series;

pub use bessel::{bessel_k, ln_bessel_k};
pub use expint::{expint, expint_scaled, ln_expint};
pub use gamma::{binomial, factorial, gamma_fn, ln_factorial, ln_gamma};
pub use incgamma::{gamma_p, gamma_q, lower_inc_gamma, upper_inc_gamma};
pub use series::{sum_alternating, SeriesControl, SeriesSum};

pub(crate) const EPS: f64 = f64::EPSILON;
