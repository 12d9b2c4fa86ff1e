//! Parameter sweeps, figure presets, CSV/SVG output and the three-way
//! validation report.

mod config;
mod output;
mod validate;

pub use config::{apply_setting, parse_config, parse_grid, parse_power, ConfigFile};
pub use output::{read_csv, render_svg, write_csv, CSV_HEADER};
pub use validate::{validate, ComponentCheck, ComposedCheck, ValidationOptions, ValidationReport};

use std::fmt;
use std::str::FromStr;

use crate::analytic;
use crate::metrics::efficiency;
use crate::oracle::{self, QuadratureControl};
use crate::params::dbm_to_watts;
use crate::simulate::{estimate_outage, McConfig};
use crate::{Component, Error, Execution, Relaying, Result, SystemParams};

/// The quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Alpha,
    Rho,
    /// Both PU transmit powers, in dBm.
    PowerDb,
    /// Antenna count at PU₁.
    Na,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::Alpha => "alpha",
            SweepVariable::Rho => "rho",
            SweepVariable::PowerDb => "power_db",
            SweepVariable::Na => "na",
        }
    }

    /// `base` with this variable set to `value`.
    pub fn apply(self, base: &SystemParams, value: f64) -> Result<SystemParams> {
        let mut p = base.clone();
        match self {
            SweepVariable::Alpha => p.alpha = value,
            SweepVariable::Rho => p.rho = value,
            SweepVariable::PowerDb => {
                p.pp1 = dbm_to_watts(value);
                p.pp2 = p.pp1;
            }
            SweepVariable::Na => {
                if value.fract() != 0.0 || value < 1.0 || value > f64::from(u32::MAX) {
                    return Err(Error::Config(format!(
                        "na = {value} is not a positive integer"
                    )));
                }
                p.na = value as u32;
            }
        }
        p.check_evaluable()?;
        Ok(p)
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "alpha" => Ok(SweepVariable::Alpha),
            "rho" => Ok(SweepVariable::Rho),
            "power_db" | "power" => Ok(SweepVariable::PowerDb),
            "na" => Ok(SweepVariable::Na),
            other => Err(Error::Config(format!("unknown sweep variable `{other}`"))),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepMethod {
    Analytic,
    Mc,
    Oracle,
}

impl SweepMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepMethod::Analytic => "analytic",
            SweepMethod::Mc => "mc",
            SweepMethod::Oracle => "oracle",
        }
    }
}

impl FromStr for SweepMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "analytic" => Ok(SweepMethod::Analytic),
            "mc" | "simulate" => Ok(SweepMethod::Mc),
            "oracle" => Ok(SweepMethod::Oracle),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

/// Which column the SVG plot shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlotMetric {
    /// PU and SU outage, log scale.
    #[default]
    Outage,
    PuOutage,
    SuOutage,
    Se,
    Ee,
}

impl FromStr for PlotMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "outage" => Ok(PlotMetric::Outage),
            "pu" | "pu_outage" => Ok(PlotMetric::PuOutage),
            "su" | "su_outage" => Ok(PlotMetric::SuOutage),
            "se" => Ok(PlotMetric::Se),
            "ee" => Ok(PlotMetric::Ee),
            other => Err(Error::Config(format!("unknown plot metric `{other}`"))),
        }
    }
}

/// Default Monte Carlo sample count per sweep point.
pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub modes: Vec<Relaying>,
    pub methods: Vec<SweepMethod>,
    pub mc_samples: u64,
    pub seed: u64,
    pub plot: PlotMetric,
}

fn range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| round12(start + i as f64 * step)).collect()
}

pub(crate) fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, grid: Vec<f64>) -> Self {
        SweepSpec {
            variable,
            grid,
            modes: vec![Relaying::Df, Relaying::Af],
            methods: vec![SweepMethod::Analytic],
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: 1,
            plot: PlotMetric::Outage,
        }
    }

    pub const PRESETS: [&'static str; 5] = ["fig3a", "fig3b", "fig4", "fig5", "fig6"];

    /// Built-in sweeps.
    pub fn preset(name: &str) -> Result<Self> {
        let both = vec![SweepMethod::Analytic, SweepMethod::Mc];
        let spec = match name {
            "fig3a" => SweepSpec {
                modes: vec![Relaying::Df],
                methods: both,
                ..Self::new(SweepVariable::Alpha, range(0.05, 0.95, 0.02))
            },
            "fig3b" => SweepSpec {
                modes: vec![Relaying::Af],
                methods: both,
                ..Self::new(SweepVariable::Alpha, range(0.05, 0.95, 0.02))
            },
            "fig4" => SweepSpec {
                methods: both,
                plot: PlotMetric::PuOutage,
                ..Self::new(SweepVariable::Rho, range(0.05, 0.95, 0.05))
            },
            "fig5" => SweepSpec {
                methods: both,
                plot: PlotMetric::SuOutage,
                ..Self::new(SweepVariable::Rho, range(0.05, 0.95, 0.05))
            },
            "fig6" => SweepSpec {
                plot: PlotMetric::Se,
                ..Self::new(SweepVariable::PowerDb, range(-50.0, -15.0, 2.5))
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown preset `{other}` (expected one of {})",
                    Self::PRESETS.join(", ")
                )))
            }
        };
        Ok(spec)
    }

    pub fn validate(&self, base: &SystemParams) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        if self.modes.is_empty() || self.methods.is_empty() {
            return Err(Error::Config(
                "at least one mode and one method are required".into(),
            ));
        }
        if self.methods.contains(&SweepMethod::Mc) && self.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be positive".into()));
        }
        for &v in &self.grid {
            self.variable.apply(base, v)?;
        }
        Ok(())
    }

    pub fn methods_label(&self) -> String {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m.iter().map(|m| m.as_str()).collect::<Vec<_>>().join("+")
    }
}

/// One grid point for one relaying mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: String,
    pub value: f64,
    pub mode: Relaying,
    pub pu_analytic: Option<f64>,
    pub su_analytic: Option<f64>,
    pub pu_oracle: Option<f64>,
    pub su_oracle: Option<f64>,
    pub pu_mc: Option<f64>,
    pub pu_mc_se: Option<f64>,
    pub su_mc: Option<f64>,
    pub su_mc_se: Option<f64>,
    pub se: Option<f64>,
    pub ee: Option<f64>,
    pub methods: String,
    /// Components that fell back to quadrature, `;`-separated.
    pub fallback: String,
    pub error: String,
}

impl SweepRow {
    fn empty(variable: SweepVariable, value: f64, mode: Relaying, methods: String) -> Self {
        SweepRow {
            variable: variable.as_str().to_string(),
            value,
            mode,
            pu_analytic: None,
            su_analytic: None,
            pu_oracle: None,
            su_oracle: None,
            pu_mc: None,
            pu_mc_se: None,
            su_mc: None,
            su_mc_se: None,
            se: None,
            ee: None,
            methods,
            fallback: String::new(),
            error: String::new(),
        }
    }

    /// Best available (pu, su) pair: analytic, then oracle, then MC.
    pub fn best_outage(&self) -> Option<(f64, f64)> {
        self.pu_analytic
            .zip(self.su_analytic)
            .or(self.pu_oracle.zip(self.su_oracle))
            .or(self.pu_mc.zip(self.su_mc))
    }
}

/// Seed for row `index`, decorrelated from neighbouring rows.
pub fn row_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index as u64 + 1))
}

/// Composed outages from quadrature values of every component.
pub fn oracle_outage(
    p: &SystemParams,
    mode: Relaying,
    ctrl: &QuadratureControl,
) -> Result<(f64, f64)> {
    let get = |c: Component| -> Result<f64> {
        let r = oracle::oracle_component(p, c, ctrl)?;
        if !r.converged && r.abs_err > 1e-7 {
            return Err(Error::QuadratureNotConverged {
                component: c,
                value: r.value,
                abs_err: r.abs_err,
            });
        }
        Ok(r.value)
    };
    match mode {
        Relaying::Df => {
            let q1 = get(Component::Q1)?;
            let pu = 1.0 - q1 * get(Component::DfBcPu1)? * get(Component::DfBcPu2)?;
            let su = 1.0 - q1 * get(Component::Q2)? * get(Component::DfBcSu2)?;
            Ok((pu, su))
        }
        Relaying::Af => {
            let pu = 1.0 - get(Component::AfBcPu1)? * get(Component::AfBcPu2)?;
            let joint = oracle::oracle_af_joint(p, ctrl)?;
            Ok((pu, 1.0 - joint.value))
        }
    }
}

fn evaluate_row(
    spec: &SweepSpec,
    base: &SystemParams,
    index: usize,
    value: f64,
    mode: Relaying,
    exec: Execution,
) -> SweepRow {
    let mut row = SweepRow::empty(spec.variable, value, mode, spec.methods_label());
    let p = match spec.variable.apply(base, value) {
        Ok(p) => p,
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    };
    let mut errors = Vec::new();
    if spec.methods.contains(&SweepMethod::Analytic) {
        match analytic::outage(&p, mode) {
            Ok(o) => {
                row.pu_analytic = Some(o.pu_outage);
                row.su_analytic = Some(o.su_outage);
                row.fallback = o
                    .fallbacks
                    .iter()
                    .map(|c| c.as_str())
                    .collect::<Vec<_>>()
                    .join(";");
            }
            Err(e) => errors.push(format!("analytic: {e}")),
        }
    }
    if spec.methods.contains(&SweepMethod::Oracle) {
        match oracle_outage(&p, mode, &QuadratureControl::default()) {
            Ok((pu, su)) => {
                row.pu_oracle = Some(pu);
                row.su_oracle = Some(su);
            }
            Err(e) => errors.push(format!("oracle: {e}")),
        }
    }
    if spec.methods.contains(&SweepMethod::Mc) {
        let mut cfg = McConfig::new(spec.mc_samples, row_seed(spec.seed, index));
        cfg.exec = exec;
        match estimate_outage(&p, mode, &cfg) {
            Ok((pu, su)) => {
                row.pu_mc = Some(pu.p_hat);
                row.pu_mc_se = Some(pu.stderr);
                row.su_mc = Some(su.p_hat);
                row.su_mc_se = Some(su.stderr);
            }
            Err(e) => errors.push(format!("mc: {e}")),
        }
    }
    if let Some((pu, su)) = row.best_outage() {
        let e = efficiency(&p, pu, su);
        row.se = Some(e.se);
        row.ee = Some(e.ee);
    }
    row.error = errors.join("; ");
    row
}

/// Evaluates every (grid value, mode) pair. Rows come back in grid order,
/// modes in the order given; a failing component is reported in the row's
/// `error` column and the sweep continues.
pub fn run_sweep(spec: &SweepSpec, base: &SystemParams, exec: Execution) -> Result<Vec<SweepRow>> {
    spec.validate(base)?;
    let jobs: Vec<(f64, Relaying)> = spec
        .grid
        .iter()
        .flat_map(|&v| spec.modes.iter().map(move |&m| (v, m)))
        .collect();
    Ok(exec.map_indexed(jobs.len(), |i| {
        let (v, m) = jobs[i];
        evaluate_row(spec, base, i, v, m, exec)
    }))
}

/// True when any analytic component of `row` came from the fallback path.
pub fn has_fallback(row: &SweepRow) -> bool {
    !row.fallback.is_empty()
}
