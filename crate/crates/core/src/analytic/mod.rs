//! Closed-form success and outage probabilities.
//!
//! Channel power sums are unit-mean Gamma variables: X (shape `na`) and Y
//! (shape `nb`) for the PU→SU₁ links, X₂ and Y₂ for PU→SU₂, and Z (shape
//! `m_k`) for SU₁→SU₂. Each success probability reduces to finite sums of
//! incomplete-gamma, exponential-integral and Bessel-K terms.

mod af;
mod df;

pub use af::{af_outage, af_pu_outage, prob_bc_pu_af, prob_spu_af, prob_su2_af, AfOutageBreakdown};
pub use df::{
    df_outage, df_pu_outage, prob_bc_pu, prob_bc_su2_df, prob_q1, prob_q2, DfOutageBreakdown,
};

use crate::oracle::{self, QuadratureControl};
use crate::specfun::{binomial, gamma_p, gamma_q, ln_bessel_k, ln_factorial, ln_gamma};
use crate::{Component, Error, Relaying, Result, SystemParams};

/// How a component value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    /// The closed form was numerically unusable here (degenerate
    /// denominator or heavy cancellation) and quadrature was used instead.
    OracleFallback,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::OracleFallback => "oracle-fallback",
        }
    }
}

/// A success probability together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentProb {
    pub value: f64,
    pub method: Method,
    /// Set when a Bessel argument was so large that the term was taken as 0.
    pub underflow: bool,
}

impl ComponentProb {
    pub(crate) fn closed(value: f64) -> Self {
        ComponentProb {
            value,
            method: Method::ClosedForm,
            underflow: false,
        }
    }

    pub fn is_fallback(&self) -> bool {
        self.method == Method::OracleFallback
    }
}

/// Which broadcast receiver a BC-phase component refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Pu1,
    Pu2,
}

const CLAMP_SLACK: f64 = 1e-9;
const DEGENERATE_REL: f64 = 1e-9;
const CANCELLATION_LIMIT: f64 = 1e-9;
const BESSEL_ARG_MAX: f64 = 700.0;

pub(crate) fn clamp_probability(component: Component, v: f64) -> Result<f64> {
    if !v.is_finite() || !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&v) {
        return Err(Error::ProbabilityOutOfRange {
            component,
            value: v,
        });
    }
    Ok(v.clamp(0.0, 1.0))
}

pub(crate) fn fallback(p: &SystemParams, component: Component) -> Result<ComponentProb> {
    let r = oracle::oracle_component(p, component, &QuadratureControl::default())?;
    if !r.converged && r.abs_err > 1e-7 {
        return Err(Error::QuadratureNotConverged {
            component,
            value: r.value,
            abs_err: r.abs_err,
        });
    }
    Ok(ComponentProb {
        value: clamp_probability(component, r.value)?,
        method: Method::OracleFallback,
        underflow: false,
    })
}

pub(crate) fn is_degenerate(lambda: f64, shape: f64) -> bool {
    lambda.abs() < DEGENERATE_REL * shape
}

/// Sum of signed terms given as (sign, ln|term|), with a flag telling
/// whether cancellation has eaten into the result beyond the allowed limit.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct SignedSum {
    pub value: f64,
    pub abs_sum: f64,
}

impl SignedSum {
    pub fn add_ln(&mut self, sign: f64, ln_abs: f64) {
        let t = ln_abs.exp();
        self.value += sign * t;
        self.abs_sum += t;
    }

    pub fn add(&mut self, v: f64) {
        self.value += v;
        self.abs_sum += v.abs();
    }

    pub fn cancellation_exceeded(&self) -> bool {
        self.abs_sum * 64.0 * f64::EPSILON > CANCELLATION_LIMIT
    }
}

/// Unit-mean Gamma tail P{X ≥ x} for shape `n`.
pub(crate) fn tail(n: u32, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(1.0);
    }
    gamma_q(f64::from(n), f64::from(n) * x)
}

/// ∫_{x0}^{x1} x^{n-1} e^{-λx} dx as (mantissa, ln_scale), value = mantissa·e^{ln_scale}.
pub(crate) fn partial_gamma_integral(n: u32, lambda: f64, x0: f64, x1: f64) -> Result<(f64, f64)> {
    if x1 <= x0 {
        return Ok((0.0, 0.0));
    }
    let nf = f64::from(n);
    if lambda > 0.0 && lambda * x1 >= 1.0 {
        let (lo, hi) = (lambda * x0, lambda * x1);
        let diff = if lo > nf {
            gamma_q(nf, lo)? - gamma_q(nf, hi)?
        } else {
            gamma_p(nf, hi)? - gamma_p(nf, lo)?
        };
        return Ok((diff, ln_gamma(nf)? - nf * lambda.ln()));
    }
    if lambda.abs() * x1 <= 50.0 {
        // power series of e^{-λx}, exact term-by-term integration
        let mut sum = 0.0;
        let mut coef = 1.0;
        for k in 0..2000u32 {
            let e = f64::from(n + k);
            let piece = (x1.powf(e) - x0.powf(e)) / e;
            let term = coef * piece;
            sum += term;
            if k > 2 && term.abs() <= 1e-17 * sum.abs() {
                return Ok((sum, 0.0));
            }
            coef *= -lambda / f64::from(k + 1);
        }
        return Err(Error::domain(
            "partial_gamma_integral",
            format!("series failed: n={n}, λ={lambda}"),
        ));
    }
    // λ < 0 with large |λ|x₁: antiderivative e^{μx} Σ_j (-1)^j (n-1)!/(n-1-j)! x^{n-1-j} / μ^{j+1}
    let mu = -lambda;
    let antideriv = |x: f64| -> f64 {
        let mut s = 0.0;
        let mut falling = 1.0;
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * falling * x.powi((n - 1 - j) as i32) / mu.powi(j as i32 + 1);
            falling *= f64::from(n - 1 - j);
        }
        s
    };
    let upper = antideriv(x1);
    let lower = antideriv(x0) * (mu * (x0 - x1)).exp();
    Ok((upper - lower, mu * x1))
}

/// E[Z^{-t} e^{-θ c₁/Z}] for unit-mean Gamma Z of shape `mk`, in log space.
fn ln_inverse_moment(mk: u32, t: u32, theta_c1: f64) -> Result<f64> {
    let m = f64::from(mk);
    let v = m - f64::from(t);
    let arg = 2.0 * (theta_c1 * m).sqrt();
    Ok(m * m.ln() - ln_gamma(m)?
        + std::f64::consts::LN_2
        + 0.5 * v * (theta_c1 / m).ln()
        + ln_bessel_k(v, arg)?)
}

/// Result of the Gamma-mixture evaluation.
pub(crate) enum Mixture {
    Value(f64),
    /// Closed form unusable; use quadrature.
    Fallback,
}

/// P{aX + bY ≥ c₀ + c₁/Z} with X, Y, Z unit-mean Gamma of shapes
/// `na`, `nb`, `mk`, valid for a, b > 0 and c₀, c₁ ≥ 0.
pub(crate) fn gamma_mixture_tail(
    na: u32,
    nb: u32,
    mk: u32,
    a: f64,
    b: f64,
    c0: f64,
    c1: f64,
) -> Result<Mixture> {
    let naf = f64::from(na);
    let nbf = f64::from(nb);
    let lambda = naf - a * nbf / b;
    if is_degenerate(lambda, naf) {
        return Ok(Mixture::Fallback);
    }
    // P{aX + bY ≥ τ} = Σ coef · τ^n · e^{-θτ}, terms as (sign, ln|coef|, n, θ)
    let mut terms: Vec<(f64, f64, u32, f64)> = Vec::new();
    let theta_x = naf / a;
    for p in 0..na {
        terms.push((
            1.0,
            f64::from(p) * theta_x.ln() - ln_factorial(p),
            p,
            theta_x,
        ));
    }
    let theta_y = nbf / b;
    let ln_fx_norm = naf * naf.ln() - ln_gamma(naf)?;
    let lambda_sign = lambda.signum();
    for p in 0..nb {
        for r in 0..=p {
            let n = na + r;
            let sign = (if r % 2 == 0 { 1.0 } else { -1.0 }) * lambda_sign.powi(n as i32);
            let ln_base = f64::from(p) * theta_y.ln() - ln_factorial(p)
                + ln_fx_norm
                + binomial(p, r).ln()
                + f64::from(r) * a.ln()
                + ln_gamma(f64::from(n))?
                - f64::from(n) * lambda.abs().ln();
            terms.push((sign, ln_base, p - r, theta_y));
            let ln_ratio = (lambda / a).abs().ln();
            for j in 0..n {
                let sj = -sign * lambda_sign.powi(j as i32);
                terms.push((
                    sj,
                    ln_base + f64::from(j) * ln_ratio - ln_factorial(j),
                    p - r + j,
                    theta_x,
                ));
            }
        }
    }

    let mut sum = SignedSum::default();
    if c1 == 0.0 {
        // τ = c₀ is deterministic
        if c0 == 0.0 {
            return Ok(Mixture::Value(1.0));
        }
        for (sign, ln_coef, n, theta) in terms {
            sum.add_ln(sign, ln_coef + f64::from(n) * c0.ln() - theta * c0);
        }
        return Ok(if sum.cancellation_exceeded() {
            Mixture::Fallback
        } else {
            Mixture::Value(sum.value)
        });
    }
    for (sign, ln_coef, n, theta) in terms {
        // E[(c₀ + c₁/Z)^n e^{-θ(c₀ + c₁/Z)}]
        let t_range = if c0 > 0.0 { 0..=n } else { n..=n };
        for t in t_range {
            let mut ln = ln_coef + binomial(n, t).ln() + f64::from(t) * c1.ln() - theta * c0;
            if n > t {
                ln += f64::from(n - t) * c0.ln();
            }
            ln += ln_inverse_moment(mk, t, theta * c1)?;
            sum.add_ln(sign, ln);
        }
    }
    if sum.cancellation_exceeded() {
        return Ok(Mixture::Fallback);
    }
    Ok(Mixture::Value(sum.value))
}

pub(crate) fn bessel_arg_too_large(arg: f64) -> bool {
    arg > BESSEL_ARG_MAX
}

/// Closed-form value of a single component.
pub fn component(p: &SystemParams, c: Component) -> Result<ComponentProb> {
    match c {
        Component::Q1 => prob_q1(p),
        Component::Q2 => prob_q2(p),
        Component::DfBcPu1 => prob_bc_pu(p, Side::Pu1),
        Component::DfBcPu2 => prob_bc_pu(p, Side::Pu2),
        Component::DfBcSu2 => prob_bc_su2_df(p),
        Component::AfBcPu1 => prob_bc_pu_af(p, Side::Pu1),
        Component::AfBcPu2 => prob_bc_pu_af(p, Side::Pu2),
        Component::AfSu2 => prob_su2_af(p),
        Component::AfSpu => prob_spu_af(p),
    }
}

/// Composed outages for one relaying mode.
#[derive(Debug, Clone, PartialEq)]
pub struct OutagePair {
    pub pu_outage: f64,
    pub su_outage: f64,
    /// Components that needed the quadrature fallback.
    pub fallbacks: Vec<Component>,
    pub underflow: bool,
}

pub fn outage(p: &SystemParams, mode: Relaying) -> Result<OutagePair> {
    match mode {
        Relaying::Df => {
            let b = df_outage(p)?;
            Ok(OutagePair {
                pu_outage: b.pu_outage,
                su_outage: b.su_outage,
                fallbacks: b.fallbacks,
                underflow: false,
            })
        }
        Relaying::Af => {
            let b = af_outage(p)?;
            Ok(OutagePair {
                pu_outage: b.pu_outage,
                su_outage: b.su_outage,
                fallbacks: b.fallbacks,
                underflow: b.underflow,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{integrate, QuadratureControl};
    use approx::assert_relative_eq;

    #[test]
    fn partial_gamma_integral_regimes() {
        let ctrl = QuadratureControl {
            abs_tol: 1e-300,
            rel_tol: 1e-13,
            ..QuadratureControl::default()
        };
        for &(n, lambda, x0, x1) in &[
            (2u32, 1.5, 0.1, 3.0),
            (3, 1.5, 2.0, 9.0),
            (1, 0.2, 0.0, 1.0),
            (4, -0.3, 0.5, 2.0),
            (2, -40.0, 1.0, 3.0),
            (3, 1e-4, 1e-3, 2e-3),
            (5, 30.0, 0.5, 0.6),
        ] {
            let (m, s) = partial_gamma_integral(n, lambda, x0, x1).unwrap();
            let direct = integrate(
                |x: f64| x.powi(n as i32 - 1) * (-lambda * x).exp(),
                x0,
                x1,
                &ctrl,
            );
            assert_relative_eq!(m * s.exp(), direct.value, max_relative = 1e-11);
        }
    }

    #[test]
    fn clamp_rules() {
        assert_eq!(clamp_probability(Component::Q1, 1.0 + 1e-12).unwrap(), 1.0);
        assert_eq!(clamp_probability(Component::Q1, -1e-12).unwrap(), 0.0);
        assert!(clamp_probability(Component::Q1, 1.001).is_err());
        assert!(clamp_probability(Component::Q1, f64::NAN).is_err());
    }

    #[test]
    fn mixture_matches_quadrature_at_simple_point() {
        // na = nb = mk = 1: P{aX + bY ≥ c0 + c1/Z} by direct 3-D quadrature
        let (a, b, c0, c1) = (2.0, 0.7, 0.3, 0.5);
        let v = match gamma_mixture_tail(1, 1, 1, a, b, c0, c1).unwrap() {
            Mixture::Value(v) => v,
            Mixture::Fallback => panic!("unexpected fallback"),
        };
        // P{aX+bY ≥ τ} = (a e^{-τ/a} - b e^{-τ/b})/(a - b) for exponentials
        let ctrl = QuadratureControl::default();
        let r = crate::oracle::integrate_to_inf(
            |z: f64| {
                let tau = c0 + c1 / z;
                (-z).exp() * (a * (-tau / a).exp() - b * (-tau / b).exp()) / (a - b)
            },
            0.0,
            &ctrl,
        );
        assert_relative_eq!(v, r.value, max_relative = 1e-9);
    }
}
