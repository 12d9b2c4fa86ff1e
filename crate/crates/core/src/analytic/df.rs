use super::{
    clamp_probability, fallback, gamma_mixture_tail, is_degenerate, partial_gamma_integral, tail,
    ComponentProb, Mixture, Side, SignedSum,
};
use crate::specfun::{
    binomial, gamma_q, ln_expint, ln_factorial, ln_gamma, sum_alternating, SeriesControl,
};
use crate::{Component, Error, Result, SystemParams};

/// Per-component success probabilities and composed outages under DF.
#[derive(Debug, Clone, PartialEq)]
pub struct DfOutageBreakdown {
    pub p_q1: f64,
    pub p_q2: f64,
    pub p_bc_pu1: f64,
    pub p_bc_pu2: f64,
    pub p_bc_su2: f64,
    pub pu_outage: f64,
    pub su_outage: f64,
    pub fallbacks: Vec<Component>,
}

/// P{g₁X ≥ u₁, g₂Y ≥ u₂, g₁X + g₂Y ≥ u₃}.
fn mac_success(p: &SystemParams, component: Component, g1: f64, g2: f64) -> Result<ComponentProb> {
    p.check_evaluable()?;
    let t = p.thresholds();
    if t.u1 == 0.0 {
        return Ok(ComponentProb::closed(1.0));
    }
    let na = f64::from(p.na);
    let nb = f64::from(p.nb);
    let lambda = na - g1 * nb / g2;
    if is_degenerate(lambda, na) {
        return fallback(p, component);
    }
    let x0 = t.u1 / g1;
    let y0 = t.u2 / g2;
    let x1 = (t.u3 - t.u2) / g1;

    // region where the sum constraint is inactive
    let mut total = SignedSum::default();
    total.add(tail(p.na, x1)? * tail(p.nb, y0)?);

    // x0 ≤ X < x1, Y above the sum line
    let ln_fx_norm = na * na.ln() - ln_gamma(na)?;
    for qa in 0..p.nb {
        let ln_outer =
            f64::from(qa) * (nb / g2).ln() - ln_factorial(qa) - nb * t.u3 / g2 + ln_fx_norm;
        for q in 0..=qa {
            let (m, s) = partial_gamma_integral(p.na + q, lambda, x0, x1)?;
            if m == 0.0 {
                continue;
            }
            let sign = (if q % 2 == 0 { 1.0 } else { -1.0 }) * m.signum();
            let ln = ln_outer
                + binomial(qa, q).ln()
                + f64::from(qa - q) * t.u3.ln()
                + f64::from(q) * g1.ln()
                + m.abs().ln()
                + s;
            total.add_ln(sign, ln);
        }
    }
    if total.cancellation_exceeded() {
        return fallback(p, component);
    }
    Ok(ComponentProb::closed(clamp_probability(
        component,
        total.value,
    )?))
}

/// Probability that SU₁ decodes both PU signals in the MAC phase.
pub fn prob_q1(p: &SystemParams) -> Result<ComponentProb> {
    let c = p.df_coefficients();
    mac_success(p, Component::Q1, c.a1_cap, c.a2_cap)
}

/// Probability that SU₂ decodes both PU signals in the MAC phase.
pub fn prob_q2(p: &SystemParams) -> Result<ComponentProb> {
    let c = p.df_coefficients();
    mac_success(p, Component::Q2, c.b1_cap, c.b2_cap)
}

/// P{(aX + bY)·X ≥ k} where X has shape `n_self` and Y shape `n_other`.
///
/// The failure region is bounded by X < s = √(k/a); inside it, the tail
/// of Y is expanded into powers of X times e^{-β/X - μX}, and e^{-μX} is
/// expanded in its Taylor series, each term integrating to an exponential
/// integral.
fn df_bc_success(
    component: Component,
    n_self: u32,
    n_other: u32,
    a: f64,
    b: f64,
    k: f64,
    ctrl: SeriesControl,
) -> Result<Option<f64>> {
    if k == 0.0 {
        return Ok(Some(1.0));
    }
    let ns = f64::from(n_self);
    let no = f64::from(n_other);
    let s = (k / a).sqrt();
    let beta = no * k / b;
    let mu = ns - a * no / b;
    let ln_fx_norm = ns * ns.ln() - ln_gamma(ns)?;

    let mut total = SignedSum::default();
    total.add(gamma_q(ns, ns * s)?);
    for pp in 0..n_other {
        for r in 0..=pp {
            let ln_pref = f64::from(pp) * no.ln() - ln_factorial(pp)
                + ln_fx_norm
                + binomial(pp, r).ln()
                + f64::from(pp - r) * (k / b).ln()
                + f64::from(r) * (a / b).ln();
            let sign_r = if r % 2 == 0 { 1.0 } else { -1.0 };
            let q0 = i64::from(n_self) - 1 - i64::from(pp) + 2 * i64::from(r);
            let mut err = None;
            let mut abs_part = 0.0;
            let series = sum_alternating(
                |l| {
                    let q = q0 + l as i64;
                    let order = (q + 2) as i32;
                    let ln_j = match ln_expint(order, beta / s) {
                        Ok(v) => (q + 1) as f64 * s.ln() + v,
                        Err(e) => {
                            err.get_or_insert(e);
                            return 0.0;
                        }
                    };
                    let ln_mu = if l == 0 {
                        0.0
                    } else {
                        l as f64 * mu.abs().ln()
                    };
                    let sign_mu = if mu < 0.0 || l % 2 == 0 { 1.0 } else { -1.0 };
                    let ln_term = ln_pref + ln_mu - ln_factorial(l as u32) + ln_j;
                    let v = ln_term.exp();
                    abs_part += v;
                    sign_r * sign_mu * v
                },
                ctrl,
            );
            if let Some(e) = err {
                return Err(e);
            }
            if !series.converged {
                return Err(Error::SeriesNotConverged {
                    component,
                    terms: series.terms,
                    partial: total.value + series.value,
                });
            }
            total.value += series.value;
            total.abs_sum += abs_part;
        }
    }
    if total.cancellation_exceeded() {
        return Ok(None);
    }
    Ok(Some(total.value))
}

/// Probability that the broadcast from SU₁ is decoded at PU₁ or PU₂.
///
/// Exactly 0 when u₁ ≥ α/(1-α): the SINR can never reach the threshold.
pub fn prob_bc_pu(p: &SystemParams, side: Side) -> Result<ComponentProb> {
    bc_pu_with(p, side, SeriesControl::default())
}

pub(crate) fn bc_pu_with(
    p: &SystemParams,
    side: Side,
    ctrl: SeriesControl,
) -> Result<ComponentProb> {
    p.check_evaluable()?;
    let t = p.thresholds();
    let c = p.df_coefficients();
    let (component, k, n_self, n_other, a, b) = match side {
        Side::Pu1 => (Component::DfBcPu1, t.kp, p.na, p.nb, c.a1, c.b1),
        Side::Pu2 => (Component::DfBcPu2, t.kpp, p.nb, p.na, c.b1, c.a1),
    };
    let Some(k) = k else {
        return Ok(ComponentProb::closed(0.0));
    };
    if a == 0.0 && b == 0.0 {
        return Ok(ComponentProb::closed(if k == 0.0 { 1.0 } else { 0.0 }));
    }
    match df_bc_success(component, n_self, n_other, a, b, k, ctrl)? {
        Some(v) => Ok(ComponentProb::closed(clamp_probability(component, v)?)),
        None => fallback(p, component),
    }
}

/// Probability that SU₂ decodes SU₁'s own message in the broadcast phase.
pub fn prob_bc_su2_df(p: &SystemParams) -> Result<ComponentProb> {
    p.check_evaluable()?;
    let t = p.thresholds();
    let c = p.df_coefficients();
    let (a, b) = (c.c * c.a1, c.c * c.b1);
    if a == 0.0 && b == 0.0 {
        return Ok(ComponentProb::closed(0.0));
    }
    match gamma_mixture_tail(p.na, p.nb, p.m_k, a, b, 0.0, t.u4)? {
        Mixture::Value(v) => Ok(ComponentProb::closed(clamp_probability(
            Component::DfBcSu2,
            v,
        )?)),
        Mixture::Fallback => fallback(p, Component::DfBcSu2),
    }
}

fn note(fallbacks: &mut Vec<Component>, c: Component, v: &ComponentProb) {
    if v.is_fallback() {
        fallbacks.push(c);
    }
}

/// Composed PU and SU outage under DF.
pub fn df_outage(p: &SystemParams) -> Result<DfOutageBreakdown> {
    let q1 = prob_q1(p)?;
    let q2 = prob_q2(p)?;
    let pu1 = prob_bc_pu(p, Side::Pu1)?;
    let pu2 = prob_bc_pu(p, Side::Pu2)?;
    let su2 = prob_bc_su2_df(p)?;
    let mut fallbacks = Vec::new();
    for (c, v) in [
        (Component::Q1, &q1),
        (Component::Q2, &q2),
        (Component::DfBcPu1, &pu1),
        (Component::DfBcPu2, &pu2),
        (Component::DfBcSu2, &su2),
    ] {
        note(&mut fallbacks, c, v);
    }
    Ok(DfOutageBreakdown {
        p_q1: q1.value,
        p_q2: q2.value,
        p_bc_pu1: pu1.value,
        p_bc_pu2: pu2.value,
        p_bc_su2: su2.value,
        pu_outage: 1.0 - q1.value * pu1.value * pu2.value,
        su_outage: 1.0 - q1.value * q2.value * su2.value,
        fallbacks,
    })
}

/// PU outage alone, skipping the SU components.
pub fn df_pu_outage(p: &SystemParams) -> Result<f64> {
    let q1 = prob_q1(p)?;
    let pu1 = prob_bc_pu(p, Side::Pu1)?;
    let pu2 = prob_bc_pu(p, Side::Pu2)?;
    Ok(1.0 - q1.value * pu1.value * pu2.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Method;

    #[test]
    fn zero_rate_is_certain_success() {
        let p = SystemParams {
            r_pu: 0.0,
            ..SystemParams::reference_point()
        };
        assert_eq!(prob_q1(&p).unwrap().value, 1.0);
        assert_eq!(prob_q2(&p).unwrap().value, 1.0);
        assert_eq!(prob_bc_pu(&p, Side::Pu1).unwrap().value, 1.0);
    }

    #[test]
    fn gate_gives_literal_zero() {
        let p = SystemParams {
            alpha: 0.2,
            ..SystemParams::reference_point()
        };
        assert_eq!(prob_bc_pu(&p, Side::Pu1).unwrap().value, 0.0);
        assert_eq!(prob_bc_pu(&p, Side::Pu2).unwrap().value, 0.0);
        let b = df_outage(&p).unwrap();
        assert_eq!(b.pu_outage, 1.0);
    }

    #[test]
    fn su2_vanishes_as_alpha_approaches_one() {
        let p = SystemParams {
            alpha: 1.0 - 1e-12,
            ..SystemParams::reference_point()
        };
        assert!(prob_bc_su2_df(&p).unwrap().value < 1e-6);
    }

    #[test]
    fn zero_su_rate() {
        let p = SystemParams {
            r_su: 1e-300,
            ..SystemParams::reference_point()
        };
        assert!((prob_bc_su2_df(&p).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q2_dominates_q1_at_matched_geometry() {
        let p = SystemParams::reference_point();
        assert!(prob_q2(&p).unwrap().value >= prob_q1(&p).unwrap().value);
    }

    #[test]
    fn nearly_full_splitting_kills_mac() {
        let p = SystemParams {
            rho: 1.0 - 1e-12,
            ..SystemParams::reference_point()
        };
        assert!(prob_q1(&p).unwrap().value < 1e-12);
    }

    #[test]
    fn degenerate_denominator_falls_back() {
        let p = SystemParams {
            na: 1,
            nb: 1,
            ..SystemParams::reference_point()
        };
        let q1 = prob_q1(&p).unwrap();
        assert_eq!(q1.method, Method::OracleFallback);
        assert!(q1.value > 0.0 && q1.value <= 1.0);
    }

    #[test]
    fn truncation_cap_is_reported() {
        let p = SystemParams::reference_point();
        let tight = SeriesControl {
            rel_tol: 1e-12,
            max_terms: 1,
        };
        assert!(matches!(
            bc_pu_with(&p, Side::Pu1, tight),
            Err(Error::SeriesNotConverged { .. })
        ));
    }
}
