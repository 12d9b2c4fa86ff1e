#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use swipt_core::analytic::{self, Method};
use swipt_core::{Component, SystemParams};

/// A random parameter set in a physically sensible region around the
/// reference point.
pub fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams {
        na: rng.random_range(1..=4),
        nb: rng.random_range(1..=3),
        m_k: rng.random_range(1..=3),
        d1: rng.random_range(6.0..14.0),
        d2: rng.random_range(6.0..14.0),
        d3: rng.random_range(6.0..14.0),
        d4: rng.random_range(6.0..14.0),
        d5: rng.random_range(6.0..14.0),
        m: rng.random_range(2.2..3.2),
        eta: rng.random_range(0.5..1.0),
        rho: rng.random_range(0.3..0.95),
        alpha: rng.random_range(0.55..0.95),
        r_pu: rng.random_range(0.1..0.4),
        r_su: rng.random_range(0.3..1.2),
        ..SystemParams::reference_point()
    }
    .with_pu_power_dbm(rng.random_range(-30.0..-18.0))
}

/// True when every closed form is usable without the quadrature fallback.
pub fn non_degenerate(p: &SystemParams) -> bool {
    Component::ALL
        .iter()
        .all(|&c| matches!(analytic::component(p, c), Ok(v) if v.method == Method::ClosedForm))
}

pub fn reference_at(alpha: f64) -> SystemParams {
    SystemParams {
        alpha,
        ..SystemParams::reference_point()
    }
}
