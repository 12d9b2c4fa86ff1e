//! Brute-force reference values: every success probability evaluated as a
//! nested integral of the joint Gamma densities over its defining region.
//!
//! Nothing here touches the closed forms or the incomplete-gamma routines,
//! so agreement between the two is a genuine cross-check.

pub mod quad;

use std::collections::BTreeMap;

pub use quad::{integrate, integrate_to_inf, QuadResult, QuadratureControl};

use crate::specfun::ln_gamma;
use crate::{Component, Execution, Result, SystemParams};
use quad::InnerError;

/// Gamma density with the given shape and scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDensity {
    shape: f64,
    scale: f64,
    ln_norm: f64,
}

impl GammaDensity {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        let ln_norm = -ln_gamma(shape)? - shape * scale.ln();
        Ok(GammaDensity {
            shape,
            scale,
            ln_norm,
        })
    }

    /// Unit-mean Gamma with integer shape `n`, the law of a normalized
    /// sum of `n` unit exponential powers.
    pub fn unit_mean(n: u32) -> Result<Self> {
        Self::new(f64::from(n), 1.0 / f64::from(n))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return if self.shape == 1.0 {
                (self.ln_norm).exp()
            } else if self.shape < 1.0 {
                f64::INFINITY
            } else {
                0.0
            };
        }
        if x.is_infinite() {
            return 0.0;
        }
        (self.ln_norm + (self.shape - 1.0) * x.ln() - x / self.scale).exp()
    }
}

/// One integration piece `[lo, hi]`; `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn to_inf(lo: f64) -> Self {
        Interval {
            lo,
            hi: f64::INFINITY,
        }
    }
}

/// Integrates the product of `densities` over a region described by
/// iterated bounds. `bounds(prefix)` returns the pieces over which variable
/// `prefix.len()` ranges, given the values already fixed for the outer
/// variables; an empty list means the slice is empty.
pub fn integrate_region<B>(
    densities: &[GammaDensity],
    bounds: &B,
    ctrl: &QuadratureControl,
) -> QuadResult
where
    B: Fn(&[f64]) -> Vec<Interval>,
{
    assert!(
        (1..=3).contains(&densities.len()),
        "integrate_region supports one to three variables"
    );
    level(densities, bounds, ctrl, &[])
}

fn level<B>(
    densities: &[GammaDensity],
    bounds: &B,
    ctrl: &QuadratureControl,
    prefix: &[f64],
) -> QuadResult
where
    B: Fn(&[f64]) -> Vec<Interval>,
{
    let depth = prefix.len();
    let density = densities[depth];
    let inner = InnerError::default();
    let mut total = QuadResult {
        value: 0.0,
        abs_err: 0.0,
        converged: true,
        evaluations: 0,
    };
    let mut point = [0.0; 3];
    point[..depth].copy_from_slice(prefix);
    let integrand = |x: f64| {
        let w = density.pdf(x);
        if w == 0.0 {
            return 0.0;
        }
        if depth + 1 == densities.len() {
            return w;
        }
        let mut p = point;
        p[depth] = x;
        w * inner.record(&level(densities, bounds, ctrl, &p[..=depth]))
    };
    for piece in bounds(prefix) {
        let lo = piece.lo.max(0.0);
        if !(piece.hi > lo) || lo.is_infinite() {
            continue;
        }
        let r = if piece.hi.is_infinite() {
            integrate_to_inf(&integrand, lo, ctrl)
        } else {
            integrate(&integrand, lo, piece.hi, ctrl)
        };
        total.value += r.value;
        total.abs_err += r.abs_err;
        total.converged &= r.converged;
        total.evaluations += r.evaluations;
    }
    inner.combine(total)
}

fn split_at(lo: f64, breaks: &[f64]) -> Vec<Interval> {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lo && b.is_finite())
        .collect();
    pts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(pts.len() + 1);
    let mut a = lo;
    for b in pts {
        out.push(Interval::new(a, b));
        a = b;
    }
    out.push(Interval::to_inf(a));
    out
}

/// P{g₁X ≥ u₁, g₂Y ≥ u₂, g₁X + g₂Y ≥ u₃} for unit-mean Gamma X, Y.
fn mac_region(p: &SystemParams, g1: f64, g2: f64, ctrl: &QuadratureControl) -> Result<QuadResult> {
    let t = p.thresholds();
    let dens = [
        GammaDensity::unit_mean(p.na)?,
        GammaDensity::unit_mean(p.nb)?,
    ];
    let x0 = t.u1 / g1;
    let y0 = t.u2 / g2;
    let x1 = (t.u3 - t.u2) / g1;
    let bounds = |pre: &[f64]| match pre {
        [] => split_at(x0, &[x1]),
        [x] => vec![Interval::to_inf(y0.max((t.u3 - g1 * x) / g2))],
        _ => unreachable!(),
    };
    Ok(integrate_region(&dens, &bounds, ctrl))
}

/// P{(aX + bY)·X ≥ k} with X of shape `n_self`, Y of shape `n_other`.
fn df_bc_region(
    n_self: u32,
    n_other: u32,
    a: f64,
    b: f64,
    k: f64,
    ctrl: &QuadratureControl,
) -> Result<QuadResult> {
    let dens = [
        GammaDensity::unit_mean(n_self)?,
        GammaDensity::unit_mean(n_other)?,
    ];
    let s = (k / a).sqrt();
    let bounds = |pre: &[f64]| match pre {
        [] => split_at(0.0, &[s]),
        [x] => vec![Interval::to_inf(((k / x - a * x) / b).max(0.0))],
        _ => unreachable!(),
    };
    Ok(integrate_region(&dens, &bounds, ctrl))
}

/// P{Z(aX + bY) ≥ c₀Z + c₁} for unit-mean Gamma X (shape na), Y (nb), Z (m_k).
fn interference_region(
    p: &SystemParams,
    a: f64,
    b: f64,
    c0: f64,
    c1: f64,
    ctrl: &QuadratureControl,
) -> Result<QuadResult> {
    let dens = [
        GammaDensity::unit_mean(p.na)?,
        GammaDensity::unit_mean(p.nb)?,
        GammaDensity::unit_mean(p.m_k)?,
    ];
    let bounds = |pre: &[f64]| match pre {
        [] => split_at(0.0, &[c0 / a]),
        [x] => vec![Interval::to_inf(((c0 - a * x) / b).max(0.0))],
        [x, y] => {
            let margin = a * x + b * y - c0;
            if margin > 0.0 {
                vec![Interval::to_inf(c1 / margin)]
            } else {
                vec![]
            }
        }
        _ => unreachable!(),
    };
    Ok(integrate_region(&dens, &bounds, ctrl))
}

/// P{Y ≥ (F u₁ + H u₁ X + u₁/X)/(C - E u₁)} with X of shape `n_self`.
fn af_bc_region(
    n_self: u32,
    n_other: u32,
    c: f64,
    h: f64,
    e: f64,
    f: f64,
    u1: f64,
    ctrl: &QuadratureControl,
) -> Result<QuadResult> {
    let d = c - e * u1;
    if d <= 0.0 {
        return Ok(exact(0.0));
    }
    let dens = [
        GammaDensity::unit_mean(n_self)?,
        GammaDensity::unit_mean(n_other)?,
    ];
    let x_min = if h > 0.0 {
        (1.0 / h).sqrt()
    } else {
        f64::INFINITY
    };
    let bounds = |pre: &[f64]| match pre {
        [] => split_at(0.0, &[x_min]),
        [x] => vec![Interval::to_inf((f * u1 + h * u1 * x + u1 / x) / d)],
        _ => unreachable!(),
    };
    Ok(integrate_region(&dens, &bounds, ctrl))
}

fn exact(value: f64) -> QuadResult {
    QuadResult {
        value,
        abs_err: 0.0,
        converged: true,
        evaluations: 0,
    }
}

/// Quadrature value of one success probability.
pub fn oracle_component(
    p: &SystemParams,
    c: Component,
    ctrl: &QuadratureControl,
) -> Result<QuadResult> {
    p.check_evaluable()?;
    let t = p.thresholds();
    let df = p.df_coefficients();
    let af = p.af_coefficients();
    let ctrl2 = ctrl.with_dims(2);
    let ctrl3 = ctrl.with_dims(3);
    match c {
        Component::Q1 => mac_region(p, df.a1_cap, df.a2_cap, &ctrl2),
        Component::Q2 => mac_region(p, df.b1_cap, df.b2_cap, &ctrl2),
        Component::DfBcPu1 => match t.kp {
            Some(k) => df_bc_region(p.na, p.nb, df.a1, df.b1, k, &ctrl2),
            None => Ok(exact(0.0)),
        },
        Component::DfBcPu2 => match t.kpp {
            Some(k) => df_bc_region(p.nb, p.na, df.b1, df.a1, k, &ctrl2),
            None => Ok(exact(0.0)),
        },
        Component::DfBcSu2 => interference_region(p, df.c * df.a1, df.c * df.b1, 0.0, t.u4, &ctrl3),
        Component::AfBcPu1 => af_bc_region(p.na, p.nb, af.c1, af.h1, af.e1, af.f1, t.u1, &ctrl2),
        Component::AfBcPu2 => af_bc_region(p.nb, p.na, af.c2, af.h2, af.e2, af.f2, t.u1, &ctrl2),
        Component::AfSu2 => interference_region(p, af.u1c, af.v1c, t.u4 * af.u2c, t.u4, &ctrl3),
        Component::AfSpu => match t.us {
            Some(us) => interference_region(p, af.s1, af.s2, us * af.u2c, us, &ctrl3),
            None => Ok(exact(0.0)),
        },
    }
}

/// Quadrature value of P{SU₂ decodes both the PU signal and its own}
/// under AF, the joint event behind the conditional SU success.
pub fn oracle_af_joint(p: &SystemParams, ctrl: &QuadratureControl) -> Result<QuadResult> {
    p.check_evaluable()?;
    let t = p.thresholds();
    let af = p.af_coefficients();
    match t.us {
        None => Ok(exact(0.0)),
        Some(us) => {
            let th = t.u4.max((1.0 - p.alpha) * us);
            interference_region(p, af.u1c, af.v1c, th * af.u2c, th, &ctrl.with_dims(3))
        }
    }
}

/// All component oracles for one parameter set, evaluated in parallel.
pub fn oracle_suite(
    p: &SystemParams,
    ctrl: &QuadratureControl,
    exec: Execution,
) -> Result<BTreeMap<Component, QuadResult>> {
    p.check_evaluable()?;
    let results = exec.map_indexed(Component::ALL.len(), |i| {
        oracle_component(p, Component::ALL[i], ctrl)
    });
    Component::ALL
        .iter()
        .zip(results)
        .map(|(&c, r)| r.map(|v| (c, v)))
        .collect()
}
