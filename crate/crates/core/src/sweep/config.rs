//! `key = value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Keys are the [`SystemParams`]
//! field names plus the sweep keys `variable`, `grid`, `modes`, `methods`,
//! `mc_samples`, `seed` and `plot`. Powers (`pp1`, `pp2`, `pp`, `sigma2`)
//! take a unit suffix: `dBm`, `dB` (relative to the noise power) or `W`.
//! A bare number is watts.

use super::{PlotMetric, SweepMethod, SweepSpec, SweepVariable};
use crate::params::dbm_to_watts;
use crate::{Error, Relaying, Result, SystemParams};

/// A power value as written, before the noise floor is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerValue {
    Watts(f64),
    /// Decibels above the noise power.
    OverNoiseDb(f64),
}

impl PowerValue {
    pub fn resolve(self, sigma2: f64) -> f64 {
        match self {
            PowerValue::Watts(w) => w,
            PowerValue::OverNoiseDb(db) => sigma2 * 10f64.powf(db / 10.0),
        }
    }
}

pub fn parse_power(s: &str) -> Result<PowerValue> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let (num, unit) = if let Some(n) = lower.strip_suffix("dbm") {
        (n, "dbm")
    } else if let Some(n) = lower.strip_suffix("db") {
        (n, "db")
    } else if let Some(n) = lower.strip_suffix('w') {
        (n, "w")
    } else {
        (lower.as_str(), "w")
    };
    let x: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse power `{t}`")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("power `{t}` is not finite")));
    }
    Ok(match unit {
        "dbm" => PowerValue::Watts(dbm_to_watts(x)),
        "db" => PowerValue::OverNoiseDb(x),
        _ => PowerValue::Watts(x),
    })
}

/// `a,b,c` or `start:stop:step` (inclusive of `stop`).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let t = s.trim();
    let num = |x: &str| -> Result<f64> {
        x.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Config(format!("cannot parse grid value `{}`", x.trim())))
    };
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "range `{t}` must be start:stop:step"
            )));
        }
        let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(h > 0.0) || b < a {
            return Err(Error::Config(format!(
                "range `{t}` needs step > 0 and stop >= start"
            )));
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        if n > 1_000_000 {
            return Err(Error::Config(format!("range `{t}` has too many points")));
        }
        Ok((0..=n).map(|i| super::round12(a + i as f64 * h)).collect())
    } else {
        t.split(',')
            .filter(|x| !x.trim().is_empty())
            .map(num)
            .collect()
    }
}

fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse())
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{key}` value `{}`", v.trim())))
}

/// Parsed configuration: parameters plus optional sweep settings.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub params: SystemParams,
    pub variable: Option<SweepVariable>,
    pub grid: Option<Vec<f64>>,
    pub modes: Option<Vec<Relaying>>,
    pub methods: Option<Vec<SweepMethod>>,
    pub mc_samples: Option<u64>,
    pub seed: Option<u64>,
    pub plot: Option<PlotMetric>,
    pending_pp1: Option<PowerValue>,
    pending_pp2: Option<PowerValue>,
}

impl ConfigFile {
    pub fn new(params: SystemParams) -> Self {
        ConfigFile {
            params,
            variable: None,
            grid: None,
            modes: None,
            methods: None,
            mc_samples: None,
            seed: None,
            plot: None,
            pending_pp1: None,
            pending_pp2: None,
        }
    }

    /// Resolves powers given relative to the noise floor. Call after the
    /// last [`apply_setting`].
    pub fn finish(mut self) -> Result<Self> {
        if let Some(v) = self.pending_pp1.take() {
            self.params.pp1 = v.resolve(self.params.sigma2);
        }
        if let Some(v) = self.pending_pp2.take() {
            self.params.pp2 = v.resolve(self.params.sigma2);
        }
        self.params.check_evaluable()?;
        Ok(self)
    }

    /// A sweep spec from the file, or `None` if no `variable` was given.
    /// Missing keys take the defaults of [`SweepSpec::new`].
    pub fn sweep_spec(&self) -> Result<Option<SweepSpec>> {
        let Some(variable) = self.variable else {
            return Ok(None);
        };
        let grid = self
            .grid
            .clone()
            .ok_or_else(|| Error::Config("`variable` given without `grid`".into()))?;
        let mut spec = SweepSpec::new(variable, grid);
        self.overlay(&mut spec);
        Ok(Some(spec))
    }

    /// Overwrites the fields of `spec` that this file sets.
    pub fn overlay(&self, spec: &mut SweepSpec) {
        if let Some(v) = self.variable {
            spec.variable = v;
        }
        if let Some(g) = &self.grid {
            spec.grid = g.clone();
        }
        if let Some(m) = &self.modes {
            spec.modes = m.clone();
        }
        if let Some(m) = &self.methods {
            spec.methods = m.clone();
        }
        if let Some(n) = self.mc_samples {
            spec.mc_samples = n;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(p) = self.plot {
            spec.plot = p;
        }
    }
}

/// Applies one `key = value` setting.
pub fn apply_setting(cfg: &mut ConfigFile, key: &str, value: &str) -> Result<()> {
    let p = &mut cfg.params;
    let key = key.trim();
    match key {
        "pp1" => cfg.pending_pp1 = Some(parse_power(value)?),
        "pp2" => cfg.pending_pp2 = Some(parse_power(value)?),
        "pp" => {
            let v = parse_power(value)?;
            cfg.pending_pp1 = Some(v);
            cfg.pending_pp2 = Some(v);
        }
        "sigma2" => match parse_power(value)? {
            PowerValue::Watts(w) => p.sigma2 = w,
            PowerValue::OverNoiseDb(_) => {
                return Err(Error::Config(
                    "sigma2 cannot be given relative to itself".into(),
                ))
            }
        },
        "na" => p.na = parse_num(key, value)?,
        "nb" => p.nb = parse_num(key, value)?,
        "m_k" => p.m_k = parse_num(key, value)?,
        "d1" => p.d1 = parse_num(key, value)?,
        "d2" => p.d2 = parse_num(key, value)?,
        "d3" => p.d3 = parse_num(key, value)?,
        "d4" => p.d4 = parse_num(key, value)?,
        "d5" => p.d5 = parse_num(key, value)?,
        "l" => p.l = parse_num(key, value)?,
        "midpoint" => {
            let l: f64 = parse_num(key, value)?;
            *p = p.clone().with_midpoint_geometry(l);
        }
        "m" => p.m = parse_num(key, value)?,
        "eta" => p.eta = parse_num(key, value)?,
        "rho" => p.rho = parse_num(key, value)?,
        "alpha" => p.alpha = parse_num(key, value)?,
        "r_pu" => p.r_pu = parse_num(key, value)?,
        "r_su" => p.r_su = parse_num(key, value)?,
        "t" => p.t = parse_num(key, value)?,
        "variable" => cfg.variable = Some(value.parse()?),
        "grid" => cfg.grid = Some(parse_grid(value)?),
        "modes" => cfg.modes = Some(parse_list(value)?),
        "methods" => cfg.methods = Some(parse_list(value)?),
        "mc_samples" => cfg.mc_samples = Some(parse_num::<f64>(key, value).and_then(count)?),
        "seed" => cfg.seed = Some(parse_num(key, value)?),
        "plot" => cfg.plot = Some(value.parse()?),
        other => return Err(Error::Config(format!("unknown key `{other}`"))),
    }
    Ok(())
}

// Accepts `1e6` as well as `1000000`.
fn count(x: f64) -> Result<u64> {
    if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(63) {
        Ok(x as u64)
    } else {
        Err(Error::Config(format!("`{x}` is not a sample count")))
    }
}

/// Parses a whole file on top of `base`.
pub fn parse_config(text: &str, base: SystemParams) -> Result<ConfigFile> {
    let mut cfg = ConfigFile::new(base);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        apply_setting(&mut cfg, k, v)
            .map_err(|e| Error::Config(format!("line {}: {}", lineno + 1, strip_prefix(e))))?;
    }
    cfg.finish()
}

fn strip_prefix(e: Error) -> String {
    match e {
        Error::Config(s) => s,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_units() {
        assert_eq!(parse_power("5W").unwrap(), PowerValue::Watts(5.0));
        assert_eq!(parse_power("0.25").unwrap(), PowerValue::Watts(0.25));
        match parse_power("-23 dBm").unwrap() {
            PowerValue::Watts(w) => assert!((w - 5.011872336272725e-6).abs() < 1e-18),
            v => panic!("{v:?}"),
        }
        let v = parse_power("77dB").unwrap();
        assert!((v.resolve(1e-13) - 5.011872336272725e-6).abs() < 1e-18);
        assert!(parse_power("abc").is_err());
        assert!(parse_power("inf W").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1, 0.2,0.5").unwrap(), vec![0.1, 0.2, 0.5]);
        let g = parse_grid("0.05:0.95:0.05").unwrap();
        assert_eq!(g.len(), 19);
        assert_eq!(g[2], 0.15);
        assert_eq!(parse_grid("-50:-15:5").unwrap().len(), 8);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn full_file() {
        let text = "\
# operating point
pp = 77 dB
sigma2 = -100 dBm   # noise
alpha = 0.6
na = 3
variable = rho
grid = 0.1:0.3:0.1
modes = df
methods = analytic, mc
mc_samples = 1e5
seed = 7
";
        let cfg = parse_config(text, SystemParams::reference_point()).unwrap();
        assert!((cfg.params.pp1 - 5.011872336272725e-6).abs() < 1e-18);
        assert_eq!(cfg.params.pp1, cfg.params.pp2);
        assert_eq!(cfg.params.alpha, 0.6);
        assert_eq!(cfg.params.na, 3);
        let spec = cfg.sweep_spec().unwrap().unwrap();
        assert_eq!(spec.variable, SweepVariable::Rho);
        assert_eq!(spec.grid, vec![0.1, 0.2, 0.3]);
        assert_eq!(spec.modes, vec![Relaying::Df]);
        assert_eq!(spec.methods, vec![SweepMethod::Analytic, SweepMethod::Mc]);
        assert_eq!(spec.mc_samples, 100_000);
        assert_eq!(spec.seed, 7);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("alpha = 0.5\nbogus = 1\n", SystemParams::reference_point()).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_config("alpha 0.5", SystemParams::reference_point()).is_err());
        assert!(parse_config("alpha = 1.5", SystemParams::reference_point()).is_err());
        assert!(parse_config("variable = alpha", SystemParams::reference_point())
            .unwrap()
            .sweep_spec()
            .is_err());
    }
}
