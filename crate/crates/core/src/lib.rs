//! Outage analysis for a SWIPT-powered two-way relay in an overlay
//! spectrum-sharing network.
//!
//! Two primary users (PU₁ with `na` antennas, PU₂ with `nb` antennas)
//! exchange data through an energy-harvesting secondary transmitter SU₁,
//! which also serves its own receiver SU₂. Both decode-and-forward (DF)
//! and amplify-and-forward (AF) relaying are covered, each computed
//! three independent ways:
//!
//! * [`analytic`]: closed-form success/outage probabilities,
//! * [`oracle`]: nested adaptive quadrature over the defining regions,
//! * [`simulate`]: Monte Carlo over channel realizations.
//!
//! [`metrics`] turns outages into spectrum and energy efficiency and
//! [`sweep`] drives parameter sweeps, validation reports and CSV/SVG
//! output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
mod error;
pub mod exec;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod simulate;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{AfCoefficients, DfCoefficients, SystemParams, Thresholds};

/// Relaying strategy at SU₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relaying {
    Df,
    Af,
}

impl Relaying {
    pub fn as_str(self) -> &'static str {
        match self {
            Relaying::Df => "DF",
            Relaying::Af => "AF",
        }
    }
}

impl std::str::FromStr for Relaying {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "df" => Ok(Relaying::Df),
            "af" => Ok(Relaying::Af),
            other => Err(Error::Config(format!("unknown relaying mode `{other}`"))),
        }
    }
}

/// The individual success events that the outage expressions are built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// MAC-phase decoding of both PU signals at SU₁.
    Q1,
    /// MAC-phase decoding of both PU signals at SU₂.
    Q2,
    /// DF broadcast phase, SU₁ → PU₁.
    DfBcPu1,
    /// DF broadcast phase, SU₁ → PU₂.
    DfBcPu2,
    /// DF broadcast phase, SU₁ → SU₂.
    DfBcSu2,
    /// AF end-to-end, PU₂ → SU₁ → PU₁.
    AfBcPu1,
    /// AF end-to-end, PU₁ → SU₁ → PU₂.
    AfBcPu2,
    /// AF, SU₂ decodes its own message after removing the PU signal.
    AfSu2,
    /// AF, SU₂ decodes the relayed PU signal under SU interference.
    AfSpu,
}

impl Component {
    pub const ALL: [Component; 9] = [
        Component::Q1,
        Component::Q2,
        Component::DfBcPu1,
        Component::DfBcPu2,
        Component::DfBcSu2,
        Component::AfBcPu1,
        Component::AfBcPu2,
        Component::AfSu2,
        Component::AfSpu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Component::Q1 => "q1",
            Component::Q2 => "q2",
            Component::DfBcPu1 => "df_bc_pu1",
            Component::DfBcPu2 => "df_bc_pu2",
            Component::DfBcSu2 => "df_bc_su2",
            Component::AfBcPu1 => "af_bc_pu1",
            Component::AfBcPu2 => "af_bc_pu2",
            Component::AfSu2 => "af_su2",
            Component::AfSpu => "af_spu",
        }
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
