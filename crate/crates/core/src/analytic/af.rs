use super::{
    bessel_arg_too_large, clamp_probability, fallback, gamma_mixture_tail, ComponentProb, Method,
    Mixture, Side,
};
use crate::specfun::{binomial, ln_bessel_k, ln_factorial, ln_gamma};
use crate::{Component, Result, SystemParams};

/// Per-component success probabilities and composed outages under AF.
#[derive(Debug, Clone, PartialEq)]
pub struct AfOutageBreakdown {
    pub p_bc_pu1: f64,
    pub p_bc_pu2: f64,
    /// SU₂ decodes the relayed PU signal.
    pub p_spu: f64,
    /// SU₂ decodes its own message given the PU signal was decoded.
    pub p_su_given: f64,
    /// SU₂ own-message success without conditioning.
    pub p_su2: f64,
    pub pu_outage: f64,
    pub su_outage: f64,
    pub fallbacks: Vec<Component>,
    pub underflow: bool,
}

/// P{C·XY / (H·X² + E·XY + F·X + 1) ≥ u₁}, X of shape `n_self`, Y of shape `n_other`.
fn af_bc_success(
    n_self: u32,
    n_other: u32,
    c: f64,
    h: f64,
    e: f64,
    f: f64,
    u1: f64,
) -> Result<(f64, bool)> {
    if u1 == 0.0 {
        return Ok((1.0, false));
    }
    let d = c - e * u1;
    if d <= 0.0 {
        return Ok((0.0, false));
    }
    let ns = f64::from(n_self);
    let no = f64::from(n_other);
    let beta = no * u1 / d;
    let gamma = ns + no * h * u1 / d;
    let arg = 2.0 * (beta * gamma).sqrt();
    if bessel_arg_too_large(arg) {
        return Ok((0.0, true));
    }
    let ln_common = ns * ns.ln() - ln_gamma(ns)? + std::f64::consts::LN_2 - no * f * u1 / d;
    let mut total = 0.0;
    for qa in 0..n_other {
        let ln_qa = f64::from(qa) * beta.ln() - ln_factorial(qa);
        for q in 0..=qa {
            let ln_q = binomial(qa, q).ln() + f64::from(qa - q) * f.ln();
            for l in 0..=q {
                let v = f64::from(n_self + q) - 2.0 * f64::from(l);
                let ln = ln_common
                    + ln_qa
                    + ln_q
                    + binomial(q, l).ln()
                    + f64::from(q - l) * h.ln()
                    + 0.5 * v * (beta / gamma).ln()
                    + ln_bessel_k(v, arg)?;
                total += ln.exp();
            }
        }
    }
    Ok((total, false))
}

/// Probability that PU₁ (or PU₂) decodes the amplified broadcast.
///
/// Exactly 0 when C - E·u₁ ≤ 0.
pub fn prob_bc_pu_af(p: &SystemParams, side: Side) -> Result<ComponentProb> {
    p.check_evaluable()?;
    let t = p.thresholds();
    let af = p.af_coefficients();
    let (component, n_self, n_other, c, h, e, f) = match side {
        Side::Pu1 => (Component::AfBcPu1, p.na, p.nb, af.c1, af.h1, af.e1, af.f1),
        Side::Pu2 => (Component::AfBcPu2, p.nb, p.na, af.c2, af.h2, af.e2, af.f2),
    };
    let (v, underflow) = af_bc_success(n_self, n_other, c, h, e, f, t.u1)?;
    Ok(ComponentProb {
        value: clamp_probability(component, v)?,
        method: Method::ClosedForm,
        underflow,
    })
}

/// P{Z(aX + bY) ≥ c₀Z + c₁}, or the quadrature fallback.
fn interference_success(
    p: &SystemParams,
    component: Component,
    a: f64,
    b: f64,
    c0: f64,
    c1: f64,
) -> Result<ComponentProb> {
    if a == 0.0 && b == 0.0 {
        return Ok(ComponentProb::closed(0.0));
    }
    match gamma_mixture_tail(p.na, p.nb, p.m_k, a, b, c0, c1)? {
        Mixture::Value(v) => Ok(ComponentProb::closed(clamp_probability(component, v)?)),
        Mixture::Fallback => fallback(p, component),
    }
}

/// Probability that SU₂ decodes its own message after removing the PU signal.
pub fn prob_su2_af(p: &SystemParams) -> Result<ComponentProb> {
    p.check_evaluable()?;
    let t = p.thresholds();
    let af = p.af_coefficients();
    interference_success(p, Component::AfSu2, af.u1c, af.v1c, t.u4 * af.u2c, t.u4)
}

/// Probability that SU₂ decodes the relayed PU signal with the SU signal
/// as interference. Exactly 0 when u₁ ≥ α/(1-α).
pub fn prob_spu_af(p: &SystemParams) -> Result<ComponentProb> {
    p.check_evaluable()?;
    let t = p.thresholds();
    let af = p.af_coefficients();
    match t.us {
        None => Ok(ComponentProb::closed(0.0)),
        Some(us) => interference_success(p, Component::AfSpu, af.s1, af.s2, us * af.u2c, us),
    }
}

/// Composed PU and SU outage under AF.
///
/// Both SU₂ decoding steps are threshold events on the same quantity
/// W = Z(U₁X + V₁Y)/(U₂Z + 1): own-message success is W ≥ u₄, PU-signal
/// success is W ≥ (1-α)u_s. Their intersection is the stricter of the two,
/// so the conditional success is the ratio of the two tails.
pub fn af_outage(p: &SystemParams) -> Result<AfOutageBreakdown> {
    let pu1 = prob_bc_pu_af(p, Side::Pu1)?;
    let pu2 = prob_bc_pu_af(p, Side::Pu2)?;
    let spu = prob_spu_af(p)?;
    let su2 = prob_su2_af(p)?;
    let t = p.thresholds();

    let joint = match t.us {
        None => 0.0,
        Some(us) => {
            if t.u4 >= (1.0 - p.alpha) * us {
                su2.value
            } else {
                spu.value
            }
        }
    };
    let p_su_given = if spu.value > 0.0 {
        (joint / spu.value).min(1.0)
    } else {
        0.0
    };

    let mut fallbacks = Vec::new();
    for (c, v) in [
        (Component::AfBcPu1, &pu1),
        (Component::AfBcPu2, &pu2),
        (Component::AfSu2, &su2),
        (Component::AfSpu, &spu),
    ] {
        if v.is_fallback() {
            fallbacks.push(c);
        }
    }
    Ok(AfOutageBreakdown {
        p_bc_pu1: pu1.value,
        p_bc_pu2: pu2.value,
        p_spu: spu.value,
        p_su_given,
        p_su2: su2.value,
        pu_outage: 1.0 - pu1.value * pu2.value,
        su_outage: 1.0 - p_su_given * spu.value,
        fallbacks,
        underflow: pu1.underflow || pu2.underflow,
    })
}

/// PU outage alone, skipping the SU components.
pub fn af_pu_outage(p: &SystemParams) -> Result<f64> {
    let pu1 = prob_bc_pu_af(p, Side::Pu1)?;
    let pu2 = prob_bc_pu_af(p, Side::Pu2)?;
    Ok(1.0 - pu1.value * pu2.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gates() {
        let p = SystemParams {
            alpha: 0.2,
            ..SystemParams::reference_point()
        };
        assert_eq!(prob_bc_pu_af(&p, Side::Pu1).unwrap().value, 0.0);
        assert_eq!(prob_spu_af(&p).unwrap().value, 0.0);
        let b = af_outage(&p).unwrap();
        assert_eq!(b.pu_outage, 1.0);
        assert_eq!(b.su_outage, 1.0);

        let half = SystemParams {
            alpha: 0.5,
            ..SystemParams::reference_point()
        };
        assert!(prob_spu_af(&half).unwrap().value > 0.0);
    }

    #[test]
    fn zero_rates() {
        let p = SystemParams {
            r_pu: 0.0,
            r_su: 0.0,
            ..SystemParams::reference_point()
        };
        assert_eq!(prob_bc_pu_af(&p, Side::Pu1).unwrap().value, 1.0);
        assert_eq!(prob_su2_af(&p).unwrap().value, 1.0);
    }

    #[test]
    fn no_harvesting() {
        let p = SystemParams {
            rho: 0.0,
            ..SystemParams::reference_point()
        };
        assert_eq!(prob_su2_af(&p).unwrap().value, 0.0);
        assert_eq!(prob_bc_pu_af(&p, Side::Pu2).unwrap().value, 0.0);
    }

    #[test]
    fn conditional_composition_is_consistent() {
        let b = af_outage(&SystemParams::reference_point()).unwrap();
        assert!((b.su_outage - (1.0 - b.p_su_given * b.p_spu)).abs() < 1e-15);
        assert!(b.p_su_given <= 1.0 && b.p_su_given >= 0.0);
        assert!(1.0 - b.su_outage <= b.p_su2.min(b.p_spu) + 1e-15);
    }
}
