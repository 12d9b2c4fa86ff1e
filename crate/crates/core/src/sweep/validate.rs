//! Side-by-side check of the three evaluation methods at one parameter set.

use std::fmt;

use crate::analytic::{self, Method};
use crate::oracle::{oracle_suite, QuadratureControl};
use crate::simulate::{estimate_components, estimate_outage, McConfig, McEstimate};
use crate::{Component, Relaying, Result, SystemParams};

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    pub mc: McConfig,
    pub quad: QuadratureControl,
    /// Allowed |analytic − oracle|.
    pub oracle_tol: f64,
    /// Allowed |analytic − MC| in standard errors.
    pub sigmas: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            mc: McConfig::new(1_000_000, 1),
            quad: QuadratureControl::default(),
            oracle_tol: 1e-5,
            sigmas: 4.0,
        }
    }
}

/// One success probability computed three ways.
#[derive(Debug, Clone)]
pub struct ComponentCheck {
    pub component: Component,
    pub analytic: f64,
    pub method: Method,
    pub oracle: f64,
    pub oracle_err: f64,
    pub mc: McEstimate,
    pub oracle_ok: bool,
    pub mc_ok: bool,
}

impl ComponentCheck {
    pub fn passed(&self) -> bool {
        self.oracle_ok && self.mc_ok
    }

    /// |analytic − MC| in standard errors of a binomial with the analytic
    /// mean. Zero when both are exactly equal.
    pub fn mc_z(&self) -> f64 {
        z_score(self.analytic, &self.mc)
    }
}

fn z_score(p: f64, mc: &McEstimate) -> f64 {
    let diff = (p - mc.p_hat).abs();
    if diff == 0.0 {
        return 0.0;
    }
    let se = (p * (1.0 - p) / mc.n as f64).sqrt().max(mc.stderr);
    if se == 0.0 {
        f64::INFINITY
    } else {
        diff / se
    }
}

/// Composed outage, analytic vs. Monte Carlo under the configured event
/// model.
#[derive(Debug, Clone)]
pub struct ComposedCheck {
    pub mode: Relaying,
    pub pu_analytic: f64,
    pub su_analytic: f64,
    pub pu_mc: McEstimate,
    pub su_mc: McEstimate,
}

impl ComposedCheck {
    pub fn pu_z(&self) -> f64 {
        z_score(self.pu_analytic, &self.pu_mc)
    }

    pub fn su_z(&self) -> f64 {
        z_score(self.su_analytic, &self.su_mc)
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub components: Vec<ComponentCheck>,
    pub composed: Vec<ComposedCheck>,
    pub options: ValidationOptions,
}

impl ValidationReport {
    /// True when every component agrees with both the oracle and MC.
    pub fn passed(&self) -> bool {
        self.components.iter().all(ComponentCheck::passed)
    }

    pub fn composed_within(&self, sigmas: f64) -> bool {
        self.composed
            .iter()
            .all(|c| c.pu_z() <= sigmas && c.su_z() <= sigmas)
    }
}

/// Evaluates every component analytically, by quadrature and by simulation,
/// plus the composed outages of both modes.
pub fn validate(p: &SystemParams, opts: &ValidationOptions) -> Result<ValidationReport> {
    p.check_evaluable()?;
    let oracle = oracle_suite(p, &opts.quad, opts.mc.exec)?;
    let mc = estimate_components(p, &opts.mc)?;
    let mut components = Vec::new();
    for (c, est) in mc {
        let a = analytic::component(p, c)?;
        let o = &oracle[&c];
        let oracle_ok = (a.value - o.value).abs() <= opts.oracle_tol;
        let mut check = ComponentCheck {
            component: c,
            analytic: a.value,
            method: a.method,
            oracle: o.value,
            oracle_err: o.abs_err,
            mc: est,
            oracle_ok,
            mc_ok: false,
        };
        check.mc_ok = check.mc_z() <= opts.sigmas;
        components.push(check);
    }
    let mut composed = Vec::new();
    for mode in [Relaying::Df, Relaying::Af] {
        let a = analytic::outage(p, mode)?;
        let (pu, su) = estimate_outage(p, mode, &opts.mc)?;
        composed.push(ComposedCheck {
            mode,
            pu_analytic: a.pu_outage,
            su_analytic: a.su_outage,
            pu_mc: pu,
            su_mc: su,
        });
    }
    Ok(ValidationReport {
        components,
        composed,
        options: *opts,
    })
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.options;
        writeln!(
            f,
            "components (success probabilities): oracle tol {:.0e}, MC {} sigma, n = {}, seed = {}",
            o.oracle_tol, o.sigmas, o.mc.n, o.mc.seed
        )?;
        writeln!(
            f,
            "{:<10} {:>15} {:>15} {:>10} {:>15} {:>6}  {:<15} result",
            "component", "analytic", "oracle", "|diff|", "mc", "z", "method"
        )?;
        for c in &self.components {
            writeln!(
                f,
                "{:<10} {:>15.9e} {:>15.9e} {:>10.2e} {:>15.9e} {:>6.2}  {:<15} {}",
                c.component.as_str(),
                c.analytic,
                c.oracle,
                (c.analytic - c.oracle).abs(),
                c.mc.p_hat,
                c.mc_z(),
                c.method.as_str(),
                match (c.oracle_ok, c.mc_ok) {
                    (true, true) => "PASS",
                    (false, true) => "FAIL (oracle)",
                    (true, false) => "FAIL (mc)",
                    (false, false) => "FAIL (oracle, mc)",
                }
            )?;
        }
        writeln!(
            f,
            "composed outages (analytic vs MC, {:?} events)",
            o.mc.events
        )?;
        for c in &self.composed {
            writeln!(
                f,
                "{}  PU {:.6e} vs {:.6e} (z {:.2})   SU {:.6e} vs {:.6e} (z {:.2})",
                c.mode.as_str(),
                c.pu_analytic,
                c.pu_mc.p_hat,
                c.pu_z(),
                c.su_analytic,
                c.su_mc.p_hat,
                c.su_z()
            )?;
        }
        write!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point_components_pass() {
        let opts = ValidationOptions {
            mc: McConfig::new(200_000, 11),
            ..ValidationOptions::default()
        };
        let r = validate(&SystemParams::reference_point(), &opts).unwrap();
        assert_eq!(r.components.len(), 9);
        for c in &r.components {
            assert!(c.passed(), "{c:?}");
        }
        let text = r.to_string();
        assert!(text.contains("overall: PASS"));
        assert_eq!(text.matches("PASS").count(), 10);
    }

    #[test]
    fn z_score_edges() {
        let exact = McEstimate::from_count(0, 100, 1);
        assert_eq!(z_score(0.0, &exact), 0.0);
        assert!(z_score(0.5, &exact) > 4.0);
        let z = z_score(1.0, &McEstimate::from_count(99, 100, 1));
        assert!((z - 1.005).abs() < 1e-3, "{z}");
    }
}
