//! Spectrum and energy efficiency.

use crate::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyPoint {
    /// Spectrum efficiency (bps/Hz).
    pub se: f64,
    /// Energy efficiency (bps/Hz per watt of PU transmit power).
    pub ee: f64,
    pub pu_outage: f64,
    pub su_outage: f64,
    /// pp1 + pp2 (W).
    pub total_power: f64,
}

/// SE counts both PU directions at R_PU and the SU link at R_SU, each over
/// the half-block it occupies; EE divides by the total PU transmit power.
pub fn efficiency(p: &SystemParams, pu_outage: f64, su_outage: f64) -> EfficiencyPoint {
    let se = 2.0 * (1.0 - pu_outage) * p.r_pu * 0.5 + (1.0 - su_outage) * p.r_su * 0.5;
    let total_power = p.pp1 + p.pp2;
    EfficiencyPoint {
        se,
        ee: se / total_power,
        pu_outage,
        su_outage,
        total_power,
    }
}
