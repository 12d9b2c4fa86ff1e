//! System constants and the thresholds/coefficients derived from them.
//!
//! Everything in here is in linear units (watts, meters, ratios). Use
//! [`dbm_to_watts`] and friends at the boundary.

use crate::{Error, Result};

/// Convert an absolute power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Convert a ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Physical and system constants.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Transmit power of PU₁ (W).
    pub pp1: f64,
    /// Transmit power of PU₂ (W).
    pub pp2: f64,
    /// Antennas at PU₁.
    pub na: u32,
    /// Antennas at PU₂.
    pub nb: u32,
    /// PU₁–SU₁ distance (m).
    pub d1: f64,
    /// PU₂–SU₁ distance (m).
    pub d2: f64,
    /// SU₁–SU₂ distance (m).
    pub d3: f64,
    /// PU₁–SU₂ distance (m).
    pub d4: f64,
    /// PU₂–SU₂ distance (m).
    pub d5: f64,
    /// PU₁–PU₂ distance (m).
    pub l: f64,
    /// Path-loss exponent.
    pub m: f64,
    /// Energy-conversion efficiency.
    pub eta: f64,
    /// Power-splitting factor (fraction of received power harvested).
    pub rho: f64,
    /// Power-sharing factor (fraction of relay power spent on PU traffic).
    pub alpha: f64,
    /// Noise power (W).
    pub sigma2: f64,
    /// PU target rate (bps/Hz).
    pub r_pu: f64,
    /// SU target rate (bps/Hz).
    pub r_su: f64,
    /// Nakagami shape of the SU₁→SU₂ link.
    pub m_k: u32,
    /// Block duration (s). Cancels out of every rate expression.
    pub t: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::reference_point()
    }
}

impl SystemParams {
    /// Reference operating point: −23 dBm per PU, −100 dBm noise, L = 20 m,
    /// D₃ = 10 m, m = 2.7, η = ρ = 0.9, α = 0.81, R_PU = 0.2, R_SU = 1,
    /// two antennas at PU₁, one at PU₂, Rayleigh SU link.
    pub fn reference_point() -> Self {
        let pp = dbm_to_watts(-23.0);
        SystemParams {
            pp1: pp,
            pp2: pp,
            na: 2,
            nb: 1,
            d1: 10.0,
            d2: 10.0,
            d3: 10.0,
            d4: 10.0,
            d5: 10.0,
            l: 20.0,
            m: 2.7,
            eta: 0.9,
            rho: 0.9,
            alpha: 0.81,
            sigma2: dbm_to_watts(-100.0),
            r_pu: 0.2,
            r_su: 1.0,
            m_k: 1,
            t: 1.0,
        }
    }

    /// Place SU₁ and SU₂ at the midpoint of the PU₁–PU₂ segment:
    /// D₁ = D₂ = D₄ = D₅ = L/2.
    pub fn with_midpoint_geometry(mut self, l: f64) -> Self {
        self.l = l;
        self.d1 = l / 2.0;
        self.d2 = l / 2.0;
        self.d4 = l / 2.0;
        self.d5 = l / 2.0;
        self
    }

    /// Set both PU transmit powers from a dBm value.
    pub fn with_pu_power_dbm(mut self, dbm: f64) -> Self {
        self.pp1 = dbm_to_watts(dbm);
        self.pp2 = self.pp1;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidParams(format!(
                "rho = {} must lie in (0, 1)",
                self.rho
            )));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "eta = {} must lie in (0, 1]",
                self.eta
            )));
        }
        if !(self.r_pu > 0.0 && self.r_su > 0.0) {
            return Err(Error::InvalidParams("target rates must be positive".into()));
        }
        self.check_evaluable()
    }

    /// Like [`validate`](Self::validate) but also admits the boundary cases
    /// `rho = 0`, `eta = 0` (no harvesting) and zero target rates.
    pub fn check_evaluable(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return fail(format!("rho = {} must lie in [0, 1)", self.rho));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha = {} must lie in (0, 1)", self.alpha));
        }
        if !(self.eta >= 0.0 && self.eta <= 1.0) {
            return fail(format!("eta = {} must lie in [0, 1]", self.eta));
        }
        if self.na == 0 || self.nb == 0 || self.m_k == 0 {
            return fail("na, nb and m_k must be at least 1".into());
        }
        for (name, d) in [
            ("d1", self.d1),
            ("d2", self.d2),
            ("d3", self.d3),
            ("d4", self.d4),
            ("d5", self.d5),
            ("l", self.l),
        ] {
            if !(d > 0.0 && d.is_finite()) {
                return fail(format!("{name} = {d} must be a positive distance"));
            }
        }
        if !(self.m >= 2.0 && self.m.is_finite()) {
            return fail(format!("path-loss exponent m = {} must be >= 2", self.m));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return fail(format!("sigma2 = {} must be positive", self.sigma2));
        }
        if !(self.pp1 > 0.0 && self.pp2 > 0.0 && self.pp1.is_finite() && self.pp2.is_finite()) {
            return fail("transmit powers must be positive and finite".into());
        }
        if !(self.r_pu >= 0.0 && self.r_su >= 0.0 && self.r_pu.is_finite() && self.r_su.is_finite())
        {
            return fail("target rates must be nonnegative".into());
        }
        if !(self.t > 0.0) {
            return fail(format!("block duration t = {} must be positive", self.t));
        }
        Ok(())
    }

    /// Harvested energy over the MAC half-block, given the received-power sum.
    pub fn harvested_energy(&self, received_power: f64) -> f64 {
        self.eta * self.rho * received_power * self.t / 2.0
    }

    pub fn thresholds(&self) -> Thresholds {
        derive_thresholds(self)
    }

    pub fn df_coefficients(&self) -> DfCoefficients {
        derive_df_coeffs(self)
    }

    pub fn af_coefficients(&self) -> AfCoefficients {
        derive_af_coeffs(self)
    }

    fn path_loss(&self, d: f64) -> f64 {
        d.powf(self.m)
    }
}

/// SNR thresholds and the gated composite thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
    /// AF composite threshold; `None` when `u1 >= alpha / (1 - alpha)`.
    pub us: Option<f64>,
    /// DF broadcast threshold towards PU₁; `None` when `a1' - u1 b1' <= 0`.
    pub kp: Option<f64>,
    /// DF broadcast threshold towards PU₂; `None` when `a2' - u1 b2' <= 0`.
    pub kpp: Option<f64>,
}

pub fn derive_thresholds(p: &SystemParams) -> Thresholds {
    let u1 = 2f64.powf(2.0 * p.r_pu) - 1.0;
    let u3 = 2f64.powf(4.0 * p.r_pu) - 1.0;
    let u4 = 2f64.powf(2.0 * p.r_su) - 1.0;

    let us_den = p.alpha - u1 * (1.0 - p.alpha);
    let us = (us_den > 0.0).then(|| u1 / us_den);

    let df = derive_df_coeffs(p);
    let gate = |ap: f64, bp: f64| {
        let den = ap - u1 * bp;
        (den > 0.0).then(|| u1 / den)
    };

    Thresholds {
        u1,
        u2: u1,
        u3,
        u4,
        us,
        kp: gate(df.a1p, df.b1p),
        kpp: gate(df.a2p, df.b2p),
    }
}

/// Scales appearing in the DF rate expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfCoefficients {
    /// A₁: MAC-phase SNR scale of PU₁ at SU₁ (information branch).
    pub a1_cap: f64,
    /// A₂: MAC-phase SNR scale of PU₂ at SU₁.
    pub a2_cap: f64,
    /// B₁: MAC-phase SNR scale of PU₁ at SU₂.
    pub b1_cap: f64,
    /// B₂: MAC-phase SNR scale of PU₂ at SU₂.
    pub b2_cap: f64,
    /// a₁: harvested-power scale from PU₁ (normalized by noise).
    pub a1: f64,
    /// b₁: harvested-power scale from PU₂.
    pub b1: f64,
    pub a1p: f64,
    pub a2p: f64,
    pub b1p: f64,
    pub b2p: f64,
    /// SU₁→SU₂ link scale.
    pub c: f64,
}

pub fn derive_df_coeffs(p: &SystemParams) -> DfCoefficients {
    let l1 = p.path_loss(p.d1);
    let l2 = p.path_loss(p.d2);
    let l3 = p.path_loss(p.d3);
    let l4 = p.path_loss(p.d4);
    let l5 = p.path_loss(p.d5);
    let na = f64::from(p.na);
    let nb = f64::from(p.nb);
    let harvest = p.eta * p.rho;

    DfCoefficients {
        a1_cap: (1.0 - p.rho) * p.pp1 / (na * l1 * p.sigma2),
        a2_cap: (1.0 - p.rho) * p.pp2 / (nb * l2 * p.sigma2),
        b1_cap: p.pp1 / (na * l4 * p.sigma2),
        b2_cap: p.pp2 / (nb * l5 * p.sigma2),
        a1: harvest * p.pp1 / (na * l1 * p.sigma2),
        b1: harvest * p.pp2 / (nb * l2 * p.sigma2),
        a1p: p.alpha / l1,
        a2p: p.alpha / l2,
        b1p: (1.0 - p.alpha) / l1,
        b2p: (1.0 - p.alpha) / l2,
        c: (1.0 - p.alpha) / l3,
    }
}

/// Scales appearing in the AF SINR expressions (noise-neglected gain).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub h1: f64,
    pub h2: f64,
    pub e1: f64,
    pub e2: f64,
    pub f1: f64,
    pub f2: f64,
    /// U₁
    pub u1c: f64,
    /// V₁
    pub v1c: f64,
    /// U₂
    pub u2c: f64,
    /// U₃
    pub u3c: f64,
    /// V₃
    pub v3c: f64,
    pub s1: f64,
    pub s2: f64,
}

pub fn derive_af_coeffs(p: &SystemParams) -> AfCoefficients {
    let l1 = p.path_loss(p.d1);
    let l2 = p.path_loss(p.d2);
    let l3 = p.path_loss(p.d3);
    let na = f64::from(p.na);
    let nb = f64::from(p.nb);
    let harvest = p.eta * p.rho;
    let s2n = p.sigma2;

    // received power per unit channel gain, before splitting
    let g1 = p.pp1 / (na * l1);
    let g2 = p.pp2 / (nb * l2);

    AfCoefficients {
        c1: harvest * g2 * p.alpha / (s2n * l1),
        c2: harvest * g1 * p.alpha / (s2n * l2),
        h1: (1.0 - p.alpha) * harvest * g1 / (s2n * l1),
        h2: (1.0 - p.alpha) * harvest * g2 / (s2n * l2),
        e1: (1.0 - p.alpha) * harvest * g2 / (s2n * l1),
        e2: (1.0 - p.alpha) * harvest * g1 / (s2n * l2),
        f1: p.rho * p.alpha * p.eta / ((1.0 - p.rho) * l1),
        f2: p.rho * p.alpha * p.eta / ((1.0 - p.rho) * l2),
        u1c: (1.0 - p.alpha) * harvest * g1 / (l3 * s2n),
        v1c: (1.0 - p.alpha) * harvest * g2 / (l3 * s2n),
        u2c: p.alpha * harvest / (l3 * (1.0 - p.rho)),
        u3c: p.alpha * harvest * g1 / (l3 * s2n),
        v3c: p.alpha * harvest * g2 / (l3 * s2n),
        s1: harvest * g1 / (l3 * s2n),
        // normalized by PU₂'s own antenna count, like V₁ and V₃
        s2: harvest * g2 / (l3 * s2n),
    }
}
