//! Acceptance criteria for `swipt-core`, each returning a pass/fail
//! verdict with the measurements behind it. The `acceptance` test target
//! runs them all.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swipt_core::analytic::{self, af_pu_outage, df_pu_outage, Method};
use swipt_core::metrics::efficiency;
use swipt_core::oracle::{integrate_to_inf, oracle_component, QuadratureControl};
use swipt_core::simulate::{estimate_outage, ChannelNorm, EventModel, McConfig, McEstimate};
use swipt_core::specfun::{
    bessel_k, factorial, gamma_p, ln_bessel_k, lower_inc_gamma, upper_inc_gamma,
};
use swipt_core::sweep::oracle_outage;
use swipt_core::{Component, Execution, Relaying, SystemParams};

pub struct Outcome {
    pub pass: bool,
    /// Supporting measurements, one per line.
    pub details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn info(&mut self, line: String) {
        self.details.push(format!("info {line}"));
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

// ---------------------------------------------------------------------------
// 1. special-function identities

pub fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let xs = [0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 20.0, 35.0];

    // Upper: Γ(n+1, x) = n!·e⁻ˣ·Σ_{r≤n} xʳ/r!
    let mut worst_upper = 0.0f64;
    // Lower: γ(n+1, x) = n!·[1 − e⁻ˣ·Σ_{r≤n} xʳ/r!]
    let mut worst_lower = 0.0f64;
    let mut lower_points = 0;
    for s in 1..=20u32 {
        let n = s - 1;
        for &x in &xs {
            let mut term = 1.0;
            let mut sum = 1.0;
            for r in 1..=n {
                term *= x / f64::from(r);
                sum += term;
            }
            let upper = factorial(n) * (-x).exp() * sum;
            worst_upper =
                worst_upper.max(rel_err(upper_inc_gamma(f64::from(s), x).unwrap(), upper));
            // The bracketed difference cancels catastrophically in f64 when
            // γ(s, x)/Γ(s) is tiny; compare only where it carries digits.
            if gamma_p(f64::from(s), x).unwrap() >= 1e-2 {
                let lower = factorial(n) * (1.0 - (-x).exp() * sum);
                worst_lower =
                    worst_lower.max(rel_err(lower_inc_gamma(f64::from(s), x).unwrap(), lower));
                lower_points += 1;
            }
        }
    }
    o.check(
        worst_upper <= 1e-12,
        format!(
            "upper incomplete gamma finite sum, s=1..20: max rel err {worst_upper:.2e} (tol 1e-12)"
        ),
    );
    o.check(
        worst_lower <= 1e-12,
        format!("lower incomplete gamma finite sum, {lower_points} points with P(s,x) >= 0.01: max rel err {worst_lower:.2e} (tol 1e-12)"),
    );

    // ∫₀^∞ x^{v−1} exp(−β/x − γx) dx = 2(β/γ)^{v/2} K_v(2√(βγ))
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let ctrl = QuadratureControl {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
        max_subdivisions: 4000,
        dims: 1,
    };
    let mut worst_bessel = 0.0f64;
    for _ in 0..10 {
        let v = rng.random_range(-3.0..3.0);
        let beta = rng.random_range(0.1..5.0);
        let gamma = rng.random_range(0.1..5.0);
        let f = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                ((v - 1.0) * x.ln() - beta / x - gamma * x).exp()
            }
        };
        let peak = {
            let b = v - 1.0;
            (b + (b * b + 4.0 * gamma * beta).sqrt()) / (2.0 * gamma)
        };
        let left = swipt_core::oracle::integrate(f, 0.0, peak, &ctrl);
        let right = integrate_to_inf(f, peak, &ctrl);
        let quad = left.value + right.value;
        let closed =
            2.0 * (beta / gamma).powf(v / 2.0) * bessel_k(v, 2.0 * (beta * gamma).sqrt()).unwrap();
        let e = rel_err(quad, closed);
        worst_bessel = worst_bessel.max(e);
        o.info(format!("v={v:+.4} beta={beta:.4} gamma={gamma:.4}: quad {quad:.12e} closed {closed:.12e} rel {e:.1e}"));
    }
    o.check(worst_bessel <= 1e-8, format!("Bessel integral identity, 10 random triples: max rel err {worst_bessel:.2e} (tol 1e-8)"));

    let mut worst_half = 0.0f64;
    for &x in &[
        1e-3, 0.01, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 5.0, 10.0, 50.0, 300.0,
    ] {
        let exact = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
        let direct = bessel_k(0.5, x).unwrap();
        let viaf = ln_bessel_k(-0.5, x).unwrap().exp();
        worst_half = worst_half
            .max(rel_err(direct, exact))
            .max(rel_err(viaf, exact));
    }
    o.check(
        worst_half <= 1e-12,
        format!(
            "K_1/2(x) = sqrt(pi/2x) e^-x on 12 points: max rel err {worst_half:.2e} (tol 1e-12)"
        ),
    );
    o
}

// ---------------------------------------------------------------------------
// 2. closed form vs. quadrature

fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    let base = SystemParams::reference_point();
    SystemParams {
        na: rng.random_range(1..=4),
        nb: rng.random_range(1..=3),
        m_k: rng.random_range(1..=3),
        d1: rng.random_range(6.0..14.0),
        d2: rng.random_range(6.0..14.0),
        d3: rng.random_range(6.0..14.0),
        d4: rng.random_range(6.0..14.0),
        d5: rng.random_range(6.0..14.0),
        m: rng.random_range(2.2..3.2),
        eta: rng.random_range(0.5..1.0),
        rho: rng.random_range(0.3..0.95),
        alpha: rng.random_range(0.55..0.95),
        r_pu: rng.random_range(0.1..0.4),
        r_su: rng.random_range(0.3..1.2),
        ..base
    }
    .with_pu_power_dbm(rng.random_range(-30.0..-18.0))
}

pub fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut sets = Vec::new();
    let mut rejected = 0;
    while sets.len() < 20 {
        let p = random_params(&mut rng);
        let usable = p.validate().is_ok()
            && Component::ALL.iter().all(
                |&c| matches!(analytic::component(&p, c), Ok(v) if v.method == Method::ClosedForm),
            );
        if usable {
            sets.push(p);
        } else {
            rejected += 1;
        }
    }
    o.info(format!(
        "20 parameter sets drawn ({rejected} degenerate draws skipped)"
    ));
    let ctrl = QuadratureControl::default();
    let rows = Execution::default().map_indexed(sets.len(), |i| {
        let p = &sets[i];
        Component::ALL
            .iter()
            .map(|&c| {
                let a = analytic::component(p, c).map(|v| v.value);
                let q = oracle_component(p, c, &ctrl);
                (c, a, q)
            })
            .collect::<Vec<_>>()
    });
    let mut worst = 0.0f64;
    let mut failures = 0;
    for (i, row) in rows.iter().enumerate() {
        for (c, a, q) in row {
            match (a, q) {
                (Ok(a), Ok(q)) => {
                    let d = (a - q.value).abs();
                    worst = worst.max(d);
                    if d > 1e-5 || !q.converged {
                        failures += 1;
                        o.info(format!(
                            "set {i} {c}: analytic {a:.9e} oracle {:.9e} (conv {})",
                            q.value, q.converged
                        ));
                    }
                }
                (a, q) => {
                    failures += 1;
                    o.info(format!("set {i} {c}: analytic {a:?} oracle {q:?}"));
                }
            }
        }
    }
    o.check(
        failures == 0,
        format!("20 sets x {} components: max |analytic - oracle| = {worst:.2e} (tol 1e-5), {failures} failures", Component::ALL.len()),
    );
    o
}

// ---------------------------------------------------------------------------
// 3. closed form vs. Monte Carlo

fn within(analytic: f64, mc: &McEstimate, sigmas: f64) -> (bool, f64) {
    let d = (analytic - mc.p_hat).abs();
    if mc.stderr == 0.0 {
        return (d == 0.0, if d == 0.0 { 0.0 } else { f64::INFINITY });
    }
    let z = d / mc.stderr;
    (z <= sigmas, z)
}

fn mc_sweep(o: &mut Outcome, events: EventModel, record: bool) -> usize {
    let mut misses = 0;
    for alpha in [0.3, 0.5, 0.7, 0.81, 0.9] {
        let p = SystemParams {
            alpha,
            ..SystemParams::reference_point()
        };
        for mode in [Relaying::Df, Relaying::Af] {
            let a = analytic::outage(&p, mode).unwrap();
            let mut cfg = McConfig::new(1_000_000, 2024);
            cfg.events = events;
            let (pu, su) = estimate_outage(&p, mode, &cfg).unwrap();
            for (name, an, mc) in [("pu", a.pu_outage, pu), ("su", a.su_outage, su)] {
                let (ok, z) = within(an, &mc, 4.0);
                if !ok {
                    misses += 1;
                }
                let line = format!(
                    "alpha={alpha:<4} {} {name}: analytic {an:.6e} mc {:.6e} +- {:.1e} (|z| {z:.2})",
                    mode.as_str(),
                    mc.p_hat,
                    mc.stderr
                );
                if record {
                    o.check(ok, line);
                } else {
                    o.info(format!(
                        "[{events:?}] {line}{}",
                        if ok { "" } else { "  <- outside 4 se" }
                    ));
                }
            }
        }
    }
    misses
}

pub fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    mc_sweep(&mut o, EventModel::Joint, true);
    let misses = mc_sweep(&mut o, EventModel::Factored, false);
    o.info(format!(
        "companion run with independent realizations per outage factor: {misses} of 20 outside 4 se"
    ));
    o
}

// ---------------------------------------------------------------------------
// 4. operating points

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let single = SystemParams {
        na: 1,
        nb: 1,
        ..SystemParams::reference_point()
    };
    let at = |alpha: f64, na: u32| SystemParams {
        alpha,
        na,
        ..single.clone()
    };
    let df_cross = bisect(|a| df_pu_outage(&at(a, 1)).unwrap() - 0.1, 0.25, 0.99);
    let af_cross = bisect(|a| af_pu_outage(&at(a, 1)).unwrap() - 0.1, 0.5, 0.999);
    let show = |x: Option<f64>| x.map_or("none".to_string(), |v| format!("{v:.4}"));
    let ok_a = df_cross.is_some_and(|a| (a - 0.29).abs() <= 0.03);
    let ok_b = af_cross.is_some_and(|a| (a - 0.89).abs() <= 0.03);
    o.check(
        ok_a,
        format!(
            "(a) DF na=nb=1 PU outage crosses 0.10 at alpha = {} (target 0.29 +- 0.03)",
            show(df_cross)
        ),
    );
    o.check(
        ok_b,
        format!(
            "(b) AF na=nb=1 PU outage crosses 0.10 at alpha = {} (target 0.89 +- 0.03)",
            show(af_cross)
        ),
    );

    // Reduction measured at the reference operating point alpha = 0.81.
    let red = |f: fn(&SystemParams) -> swipt_core::Result<f64>, alpha: f64| {
        let one = f(&at(alpha, 1)).unwrap();
        let two = f(&at(alpha, 2)).unwrap();
        (one, two, 1.0 - two / one)
    };
    let (d1, d2, df_red) = red(df_pu_outage, 0.81);
    let (a1, a2, af_red) = red(af_pu_outage, 0.81);
    let ok_c1 = (df_red - 0.46).abs() <= 0.10;
    let ok_c2 = (af_red - 0.39).abs() <= 0.10;
    o.check(
        ok_c1,
        format!("(c) DF PU outage na 1->2 at alpha=0.81: {d1:.5e} -> {d2:.5e}, reduction {:.1}% (target 46% +- 10%)", 100.0 * df_red),
    );
    o.check(
        ok_c2,
        format!("(c) AF PU outage na 1->2 at alpha=0.81: {a1:.5e} -> {a2:.5e}, reduction {:.1}% (target 39% +- 10%)", 100.0 * af_red),
    );
    for (label, f, alpha) in [
        ("DF", df_pu_outage as fn(&SystemParams) -> _, df_cross),
        ("AF", af_pu_outage, af_cross),
    ] {
        if let Some(alpha) = alpha {
            let (_, _, r) = red(f, alpha);
            o.info(format!(
                "{label} reduction evaluated at its own crossing alpha={alpha:.3}: {:.1}%",
                100.0 * r
            ));
        }
    }

    if !(ok_a && ok_b && ok_c1 && ok_c2) {
        // Per-antenna unit-variance channels, via simulation. With
        // na = nb = 1 both normalizations coincide, so only the reduction
        // differs.
        for mode in [Relaying::Df, Relaying::Af] {
            let mut cfg = McConfig::new(1_000_000, 4);
            cfg.norm = ChannelNorm::PerAntennaUnit;
            cfg.events = EventModel::Factored;
            let one = estimate_outage(&at(0.81, 1), mode, &cfg).unwrap().0.p_hat;
            let two = estimate_outage(&at(0.81, 2), mode, &cfg).unwrap().0.p_hat;
            o.info(format!(
                "per-antenna-unit channels, {} at alpha=0.81: {one:.4e} -> {two:.4e}, reduction {:.1}%",
                mode.as_str(),
                100.0 * (1.0 - two / one)
            ));
        }
    }
    o
}

// ---------------------------------------------------------------------------
// 5. interior minimum over rho

pub fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let grid: Vec<f64> = (1..=19).map(|i| f64::from(i) * 0.05).collect();
    for mode in [Relaying::Df, Relaying::Af] {
        let vals: Vec<(f64, f64)> = grid
            .iter()
            .map(|&rho| {
                let p = SystemParams {
                    rho,
                    ..SystemParams::reference_point()
                };
                let r = analytic::outage(&p, mode).unwrap();
                (r.pu_outage, r.su_outage)
            })
            .collect();
        for (name, pick) in [("pu", 0usize), ("su", 1usize)] {
            let series: Vec<f64> = vals
                .iter()
                .map(|v| if pick == 0 { v.0 } else { v.1 })
                .collect();
            let (imin, vmin) =
                series
                    .iter()
                    .copied()
                    .enumerate()
                    .fold(
                        (0, f64::INFINITY),
                        |b, (i, v)| if v < b.1 { (i, v) } else { b },
                    );
            let interior = imin != 0 && imin != grid.len() - 1;
            o.check(
                interior,
                format!(
                    "{} {name} outage minimum {vmin:.5e} at rho = {:.2} (endpoints {:.5e} / {:.5e})",
                    mode.as_str(),
                    grid[imin],
                    series[0],
                    series[grid.len() - 1]
                ),
            );
        }
    }
    o
}

// ---------------------------------------------------------------------------
// 6. power trend

pub fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let grid: Vec<f64> = (0..=35).map(|i| -50.0 + f64::from(i)).collect();
    let mut se_by_mode = Vec::new();
    for mode in [Relaying::Df, Relaying::Af] {
        let pts: Vec<_> = grid
            .iter()
            .map(|&dbm| {
                let p = SystemParams::reference_point().with_pu_power_dbm(dbm);
                let r = analytic::outage(&p, mode).unwrap();
                efficiency(&p, r.pu_outage, r.su_outage)
            })
            .collect();
        let se: Vec<f64> = pts.iter().map(|e| e.se).collect();
        let ee: Vec<f64> = pts.iter().map(|e| e.ee).collect();
        let se_ok = se.windows(2).all(|w| w[1] >= w[0]);
        let imax = ee
            .iter()
            .enumerate()
            .fold(0, |b, (i, &v)| if v > ee[b] { i } else { b });
        let ee_ok = ee[imax..].windows(2).all(|w| w[1] <= w[0]);
        o.check(
            se_ok,
            format!(
                "{} se nondecreasing over -50..-15 dBm: {:.5} -> {:.5}",
                mode.as_str(),
                se[0],
                se[se.len() - 1]
            ),
        );
        o.check(
            ee_ok,
            format!(
                "{} ee nonincreasing after its maximum {:.4e} at {} dBm",
                mode.as_str(),
                ee[imax],
                grid[imax]
            ),
        );
        se_by_mode.push(se);
    }
    let worst = se_by_mode[0]
        .iter()
        .zip(&se_by_mode[1])
        .map(|(d, a)| d - a)
        .fold(f64::INFINITY, f64::min);
    o.check(
        worst >= 0.0,
        format!("DF se >= AF se at every point: min(DF - AF) = {worst:.4e}"),
    );
    o
}

// ---------------------------------------------------------------------------
// 7. exact gating

pub fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let p = SystemParams {
        alpha: 0.2,
        ..SystemParams::reference_point()
    };
    let u1 = 2f64.powf(2.0 * p.r_pu) - 1.0;
    o.info(format!("gate alpha < u1/(1+u1) = {:.6}", u1 / (1.0 + u1)));
    for mode in [Relaying::Df, Relaying::Af] {
        let a = analytic::outage(&p, mode).unwrap().pu_outage;
        let (q, _) = oracle_outage(&p, mode, &QuadratureControl::default()).unwrap();
        let mc = estimate_outage(&p, mode, &McConfig::new(200_000, 9))
            .unwrap()
            .0;
        o.check(
            a == 1.0 && q == 1.0 && mc.p_hat == 1.0 && mc.stderr == 0.0,
            format!(
                "{} pu outage: analytic {a} oracle {q} mc {} (se {})",
                mode.as_str(),
                mc.p_hat,
                mc.stderr
            ),
        );
    }
    o
}

// ---------------------------------------------------------------------------
// 8. determinism across worker counts

pub fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let p = SystemParams {
        alpha: 0.6,
        ..SystemParams::reference_point()
    };
    for mode in [Relaying::Df, Relaying::Af] {
        let run = |exec: Execution| {
            let mut cfg = McConfig::new(500_001, 31_337);
            cfg.exec = exec;
            let (pu, su) = estimate_outage(&p, mode, &cfg).unwrap();
            (
                pu.p_hat.to_bits(),
                su.p_hat.to_bits(),
                pu.stderr.to_bits(),
                su.stderr.to_bits(),
            )
        };
        let reference = run(Execution::workers(1));
        let same = [4, 8]
            .iter()
            .all(|&k| run(Execution::workers(k)) == reference)
            && run(Execution::Parallel { threads: Some(1) }) == reference
            && run(Execution::Sequential) == reference;
        o.check(
            same,
            format!(
                "{} estimate_outage bit-identical for 1, 4, 8 pool workers and sequential (pu {:.9e})",
                mode.as_str(),
                f64::from_bits(reference.0)
            ),
        );
    }
    o
}

/// A criterion's name, outcome and wall time in seconds.
pub struct Verdict {
    pub name: &'static str,
    pub outcome: Outcome,
    pub seconds: f64,
}

pub const CRITERIA: [(&str, fn() -> Outcome); 8] = [
    ("1 special-function identities", criterion_1),
    ("2 closed form vs. quadrature, 20 random sets", criterion_2),
    ("3 closed form vs. Monte Carlo at reference point", criterion_3),
    ("4 operating points", criterion_4),
    ("5 interior minimum over rho", criterion_5),
    ("6 power trend of se/ee", criterion_6),
    ("7 exact gating", criterion_7),
    ("8 determinism across worker counts", criterion_8),
];

/// Runs one criterion, timing it.
pub fn run(name: &'static str, f: fn() -> Outcome) -> Verdict {
    let t0 = Instant::now();
    let outcome = f();
    Verdict {
        name,
        outcome,
        seconds: t0.elapsed().as_secs_f64(),
    }
}
