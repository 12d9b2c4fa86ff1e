use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::SystemParams;

/// Per-antenna channel variance convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelNorm {
    /// Sums of `N` antenna powers are Gamma(N, 1/N): unit mean in total.
    #[default]
    UnitTotalPower,
    /// Every antenna has unit variance, so the sum is Gamma(N, 1).
    PerAntennaUnit,
}

/// AF amplification normalizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XiMode {
    /// ξ² = 1/((1-ρ)P + σ²)
    #[default]
    Exact,
    /// ξ² = 1/((1-ρ)P), noise neglected
    Approx,
}

/// One joint realization of every fading link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample {
    /// Σ|h₁,n|², PU₁ → SU₁
    pub x1: f64,
    /// Σ|h₂,p|², PU₂ → SU₁
    pub y1: f64,
    /// Σ|g₁,n|², PU₁ → SU₂
    pub x2: f64,
    /// Σ|g₂,p|², PU₂ → SU₂
    pub y2: f64,
    /// |h₃|², SU₁ → SU₂
    pub z: f64,
    pub xi2: f64,
    pub xi2_approx: f64,
}

/// Pre-built distributions for drawing [`ChannelSample`]s.
#[derive(Debug, Clone, Copy)]
pub struct ChannelSampler {
    x: Gamma<f64>,
    y: Gamma<f64>,
    z: Gamma<f64>,
    g1: f64,
    g2: f64,
    rho: f64,
    sigma2: f64,
}

impl ChannelSampler {
    pub fn new(p: &SystemParams, norm: ChannelNorm) -> Self {
        let sum_law = |n: u32| {
            let k = f64::from(n);
            let scale = match norm {
                ChannelNorm::UnitTotalPower => 1.0 / k,
                ChannelNorm::PerAntennaUnit => 1.0,
            };
            Gamma::new(k, scale).expect("antenna counts are positive")
        };
        let mk = f64::from(p.m_k);
        let (g1, g2) = gains(p);
        ChannelSampler {
            x: sum_law(p.na),
            y: sum_law(p.nb),
            z: Gamma::new(mk, 1.0 / mk).expect("m_k is positive"),
            g1,
            g2,
            rho: p.rho,
            sigma2: p.sigma2,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelSample {
        let x1 = self.x.sample(rng);
        let y1 = self.y.sample(rng);
        let x2 = self.x.sample(rng);
        let y2 = self.y.sample(rng);
        let z = self.z.sample(rng);
        let info = (1.0 - self.rho) * (self.g1 * x1 + self.g2 * y1);
        ChannelSample {
            x1,
            y1,
            x2,
            y2,
            z,
            xi2: 1.0 / (info + self.sigma2),
            xi2_approx: 1.0 / info,
        }
    }
}

/// Received power at SU₁ per unit of the channel sums.
fn gains(p: &SystemParams) -> (f64, f64) {
    (
        p.pp1 / (f64::from(p.na) * p.d1.powf(p.m)),
        p.pp2 / (f64::from(p.nb) * p.d2.powf(p.m)),
    )
}

/// Draws one realization. Prefer [`ChannelSampler`] in loops.
pub fn sample_channels<R: Rng + ?Sized>(
    p: &SystemParams,
    norm: ChannelNorm,
    rng: &mut R,
) -> ChannelSample {
    ChannelSampler::new(p, norm).sample(rng)
}

fn rate(sinr: f64) -> f64 {
    0.5 * (1.0 + sinr).log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub pu_fail: bool,
    pub su_fail: bool,
}

/// Individual DF success events for one realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DfEvents {
    pub q1: bool,
    pub q2: bool,
    pub bc_pu1: bool,
    pub bc_pu2: bool,
    pub bc_su2: bool,
}

fn mac_ok(r_pu: f64, s1: f64, s2: f64) -> bool {
    rate(s1) >= r_pu && rate(s2) >= r_pu && rate(s1 + s2) >= 2.0 * r_pu
}

pub fn df_events(p: &SystemParams, s: &ChannelSample) -> DfEvents {
    let (g1, g2) = gains(p);
    let n2 = p.sigma2;
    let l1 = p.d1.powf(p.m);
    let l2 = p.d2.powf(p.m);
    let l3 = p.d3.powf(p.m);

    let q1 = mac_ok(
        p.r_pu,
        (1.0 - p.rho) * g1 * s.x1 / n2,
        (1.0 - p.rho) * g2 * s.y1 / n2,
    );
    let h1 = p.pp1 / (f64::from(p.na) * p.d4.powf(p.m));
    let h2 = p.pp2 / (f64::from(p.nb) * p.d5.powf(p.m));
    let q2 = mac_ok(p.r_pu, h1 * s.x2 / n2, h2 * s.y2 / n2);

    let ps = p.eta * p.rho * (g1 * s.x1 + g2 * s.y1);
    let bc = |gain: f64, l: f64| {
        let sig = p.alpha * ps * gain / l;
        let int = (1.0 - p.alpha) * ps * gain / l;
        rate(sig / (int + n2)) >= p.r_pu
    };
    DfEvents {
        q1,
        q2,
        bc_pu1: bc(s.x1, l1),
        bc_pu2: bc(s.y1, l2),
        bc_su2: rate((1.0 - p.alpha) * ps * s.z / (l3 * n2)) >= p.r_su,
    }
}

/// DF failure flags: the PU exchange needs the MAC phase at SU₁ and both
/// broadcasts; SU₂ needs both MAC phases and its own broadcast.
pub fn df_sample_outcome(p: &SystemParams, s: &ChannelSample) -> Outcome {
    let e = df_events(p, s);
    Outcome {
        pu_fail: !(e.q1 && e.bc_pu1 && e.bc_pu2),
        su_fail: !(e.q1 && e.q2 && e.bc_su2),
    }
}

/// Individual AF success events for one realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AfEvents {
    pub bc_pu1: bool,
    pub bc_pu2: bool,
    /// SU₂ decodes the PU signal under SU interference.
    pub spu: bool,
    /// SU₂ decodes its own message after removing the PU signal.
    pub su2: bool,
}

pub fn af_events(p: &SystemParams, s: &ChannelSample, xi: XiMode) -> AfEvents {
    let (g1, g2) = gains(p);
    let n2 = p.sigma2;
    let l1 = p.d1.powf(p.m);
    let l2 = p.d2.powf(p.m);
    let l3 = p.d3.powf(p.m);
    let xi2 = match xi {
        XiMode::Exact => s.xi2,
        XiMode::Approx => s.xi2_approx,
    };
    let received = g1 * s.x1 + g2 * s.y1;
    let ps = p.eta * p.rho * received;
    let relay = xi2 * p.alpha * ps;

    // PU_i hears the other PU's signal relayed, after cancelling its own
    let pu = |own: f64, l_own: f64, other_power: f64| {
        let sig = relay * (1.0 - p.rho) * other_power * own / l_own;
        let int = (1.0 - p.alpha) * ps * own / l_own + relay * own * n2 / l_own;
        rate(sig / (int + n2)) >= p.r_pu
    };
    let pu_sig = relay * (1.0 - p.rho) * received * s.z / l3;
    let su_sig = (1.0 - p.alpha) * ps * s.z / l3;
    let relay_noise = relay * n2 * s.z / l3;
    AfEvents {
        bc_pu1: pu(s.x1, l1, g2 * s.y1),
        bc_pu2: pu(s.y1, l2, g1 * s.x1),
        spu: rate(pu_sig / (su_sig + relay_noise + n2)) >= p.r_pu,
        su2: rate(su_sig / (relay_noise + n2)) >= p.r_su,
    }
}

/// AF failure flags: the PU exchange needs both relayed links; SU₂ must
/// decode the PU signal and then its own message.
pub fn af_sample_outcome(p: &SystemParams, s: &ChannelSample, xi: XiMode) -> Outcome {
    let e = af_events(p, s, xi);
    Outcome {
        pu_fail: !(e.bc_pu1 && e.bc_pu2),
        su_fail: !(e.spu && e.su2),
    }
}
