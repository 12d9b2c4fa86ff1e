//! Monte Carlo estimation of the outage probabilities from the physical
//! rate expressions.
//!
//! Samples are drawn in fixed-size chunks. Chunk `i` owns ChaCha stream `i`
//! under the master seed, and per-chunk failure counts are integers, so the
//! estimate is bit-identical for any number of workers.

mod channel;

pub use channel::{
    af_events, af_sample_outcome, df_events, df_sample_outcome, sample_channels, AfEvents,
    ChannelNorm, ChannelSample, ChannelSampler, DfEvents, Outcome, XiMode,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Component, Execution, Relaying, Result, SystemParams};

/// Samples per RNG stream.
pub const CHUNK: u64 = 8192;

/// How the events in a composed outage share channel realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EventModel {
    /// One realization drives every event of a sample, as in the physical
    /// system.
    #[default]
    Joint,
    /// Each factor of a composed outage is evaluated on its own independent
    /// realization, which makes the outage exactly the product of the
    /// component probabilities. SU₂'s two AF decoding steps stay joint.
    Factored,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n: u64,
    pub seed: u64,
    pub norm: ChannelNorm,
    pub xi: XiMode,
    pub events: EventModel,
    pub exec: Execution,
}

impl McConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        McConfig {
            n,
            seed,
            norm: ChannelNorm::default(),
            xi: XiMode::default(),
            events: EventModel::default(),
            exec: Execution::default(),
        }
    }
}

/// A Monte Carlo probability estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    /// √(p̂(1-p̂)/n)
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_count(count: u64, n: u64, seed: u64) -> Self {
        let p_hat = count as f64 / n as f64;
        McEstimate {
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
            n,
            seed,
        }
    }
}

/// Runs `per_chunk(rng, samples)` over every chunk and sums the count vectors.
fn run_chunks<const K: usize, F>(cfg: &McConfig, per_chunk: F) -> [u64; K]
where
    F: Fn(&mut ChaCha8Rng, u64) -> [u64; K] + Sync + Send,
{
    let chunks = cfg.n.div_ceil(CHUNK);
    let counts = cfg.exec.map_indexed(chunks as usize, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let len = CHUNK.min(cfg.n - i as u64 * CHUNK);
        per_chunk(&mut rng, len)
    });
    let mut total = [0u64; K];
    for c in counts {
        for (t, v) in total.iter_mut().zip(c) {
            *t += v;
        }
    }
    total
}

/// PU and SU outage estimates for one relaying mode.
pub fn estimate_outage(
    p: &SystemParams,
    mode: Relaying,
    cfg: &McConfig,
) -> Result<(McEstimate, McEstimate)> {
    p.check_evaluable()?;
    if cfg.n == 0 {
        return Err(crate::Error::InvalidParams(
            "Monte Carlo needs at least one sample".into(),
        ));
    }
    let sampler = ChannelSampler::new(p, cfg.norm);
    let counts = run_chunks::<2, _>(cfg, |rng, len| {
        let mut fails = [0u64; 2];
        for _ in 0..len {
            let o = match (mode, cfg.events) {
                (Relaying::Df, EventModel::Joint) => df_sample_outcome(p, &sampler.sample(rng)),
                (Relaying::Af, EventModel::Joint) => {
                    af_sample_outcome(p, &sampler.sample(rng), cfg.xi)
                }
                (Relaying::Df, EventModel::Factored) => {
                    let e: [DfEvents; 3] =
                        std::array::from_fn(|_| df_events(p, &sampler.sample(rng)));
                    Outcome {
                        pu_fail: !(e[0].q1 && e[1].bc_pu1 && e[2].bc_pu2),
                        su_fail: !(e[0].q1 && e[1].q2 && e[2].bc_su2),
                    }
                }
                (Relaying::Af, EventModel::Factored) => {
                    let a = af_events(p, &sampler.sample(rng), cfg.xi);
                    let b = af_events(p, &sampler.sample(rng), cfg.xi);
                    Outcome {
                        pu_fail: !(a.bc_pu1 && b.bc_pu2),
                        su_fail: !(a.spu && a.su2),
                    }
                }
            };
            fails[0] += u64::from(o.pu_fail);
            fails[1] += u64::from(o.su_fail);
        }
        fails
    });
    Ok((
        McEstimate::from_count(counts[0], cfg.n, cfg.seed),
        McEstimate::from_count(counts[1], cfg.n, cfg.seed),
    ))
}

/// Success-probability estimates of every individual component, each from
/// the same stream of realizations.
pub fn estimate_components(
    p: &SystemParams,
    cfg: &McConfig,
) -> Result<Vec<(Component, McEstimate)>> {
    p.check_evaluable()?;
    if cfg.n == 0 {
        return Err(crate::Error::InvalidParams(
            "Monte Carlo needs at least one sample".into(),
        ));
    }
    let sampler = ChannelSampler::new(p, cfg.norm);
    let counts = run_chunks::<9, _>(cfg, |rng, len| {
        let mut hits = [0u64; 9];
        for _ in 0..len {
            let s = sampler.sample(rng);
            let d = df_events(p, &s);
            let a = af_events(p, &s, cfg.xi);
            let flags = [
                d.q1, d.q2, d.bc_pu1, d.bc_pu2, d.bc_su2, a.bc_pu1, a.bc_pu2, a.su2, a.spu,
            ];
            for (h, f) in hits.iter_mut().zip(flags) {
                *h += u64::from(f);
            }
        }
        hits
    });
    Ok(Component::ALL
        .iter()
        .zip(counts)
        .map(|(&c, k)| (c, McEstimate::from_count(k, cfg.n, cfg.seed)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_harvesting_is_certain_outage() {
        let p = SystemParams {
            rho: 0.0,
            ..SystemParams::reference_point()
        };
        for mode in [Relaying::Df, Relaying::Af] {
            let (pu, su) = estimate_outage(&p, mode, &McConfig::new(20_000, 1)).unwrap();
            assert_eq!((pu.p_hat, pu.stderr), (1.0, 0.0));
            assert_eq!(su.p_hat, 1.0);
        }
    }

    #[test]
    fn gate_is_certain_pu_outage() {
        let p = SystemParams {
            alpha: 0.2,
            ..SystemParams::reference_point()
        };
        for mode in [Relaying::Df, Relaying::Af] {
            let (pu, _) = estimate_outage(&p, mode, &McConfig::new(20_000, 2)).unwrap();
            assert_eq!((pu.p_hat, pu.stderr), (1.0, 0.0));
        }
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let p = SystemParams::reference_point();
        let mut cfg = McConfig::new(50_001, 9);
        cfg.exec = Execution::Sequential;
        let seq = estimate_outage(&p, Relaying::Af, &cfg).unwrap();
        cfg.exec = Execution::workers(5);
        assert_eq!(estimate_outage(&p, Relaying::Af, &cfg).unwrap(), seq);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(estimate_outage(
            &SystemParams::reference_point(),
            Relaying::Df,
            &McConfig::new(0, 1)
        )
        .is_err());
    }
}
