//! Adaptive Gauss–Kronrod (10/21-point) integration on finite and
//! semi-infinite intervals.

#![allow(clippy::excessive_precision)]

use std::cell::Cell;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances for one level of adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Nesting depth of the integral this control is used for (1..=3).
    pub dims: usize,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        QuadratureControl {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            dims: 1,
        }
    }
}

impl QuadratureControl {
    pub fn with_dims(self, dims: usize) -> Self {
        QuadratureControl { dims, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over the finite interval [a, b], bisecting the worst
/// segment until the summed error estimate meets the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    ctrl: &QuadratureControl,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_err: 0.0,
            converged: true,
            evaluations: 0,
        };
    }
    let (v, e) = gk21(&mut f, a, b);
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        err: e,
    }];
    let mut evaluations = 21;
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        let target = ctrl.abs_tol.max(ctrl.rel_tol * total.abs());
        if err <= target || !err.is_finite() || segs.len() >= ctrl.max_subdivisions {
            return QuadResult {
                value: total,
                abs_err: err,
                converged: err <= target,
                evaluations,
            };
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one segment");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // interval exhausted at machine resolution
            segs.push(Segment { err: 0.0, ..s });
            continue;
        }
        let (v1, e1) = gk21(&mut f, s.a, mid);
        let (v2, e2) = gk21(&mut f, mid, s.b);
        evaluations += 42;
        segs.push(Segment {
            a: s.a,
            b: mid,
            value: v1,
            err: e1,
        });
        segs.push(Segment {
            a: mid,
            b: s.b,
            value: v2,
            err: e2,
        });
    }
}

/// Integrates `f` over [a, ∞) through the substitution x = a + (1 - t)/t.
pub fn integrate_to_inf<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    ctrl: &QuadratureControl,
) -> QuadResult {
    integrate(
        |t| {
            let x = a + (1.0 - t) / t;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (t * t)
            }
        },
        0.0,
        1.0,
        ctrl,
    )
}

/// Sums integrals over consecutive finite pieces `[p0, p1], [p1, p2], ...`
/// and, if `tail` is set, over `[p_last, ∞)`.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    tail: bool,
    ctrl: &QuadratureControl,
) -> QuadResult {
    let mut acc = QuadResult {
        value: 0.0,
        abs_err: 0.0,
        converged: true,
        evaluations: 0,
    };
    let mut add = |r: QuadResult| {
        acc.value += r.value;
        acc.abs_err += r.abs_err;
        acc.converged &= r.converged;
        acc.evaluations += r.evaluations;
    };
    for w in points.windows(2) {
        if w[1] > w[0] {
            add(integrate(&mut f, w[0], w[1], ctrl));
        }
    }
    if tail {
        if let Some(&last) = points.last() {
            add(integrate_to_inf(&mut f, last, ctrl));
        }
    }
    acc
}

/// Tracks the worst inner-integral error seen while an outer integral runs.
#[derive(Debug, Default)]
pub struct InnerError {
    worst: Cell<f64>,
    failed: Cell<bool>,
}

impl InnerError {
    pub fn record(&self, r: &QuadResult) -> f64 {
        if r.abs_err > self.worst.get() {
            self.worst.set(r.abs_err);
        }
        if !r.converged {
            self.failed.set(true);
        }
        r.value
    }

    /// Folds the tracked inner error into an outer result.
    pub fn combine(&self, outer: QuadResult) -> QuadResult {
        QuadResult {
            abs_err: outer.abs_err + self.worst.get(),
            converged: outer.converged && !self.failed.get(),
            ..outer
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_are_normalized() {
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert_relative_eq!(k, 2.0, max_relative = 1e-15);
        assert_relative_eq!(g, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn exponential_density_normalizes() {
        let r = integrate_to_inf(|x| (-x).exp(), 0.0, &QuadratureControl::default());
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x * x * x, 0.0, 2.0, &QuadratureControl::default());
        assert_relative_eq!(r.value, 4.0, max_relative = 1e-14);
    }

    #[test]
    fn kink_needs_subdivision() {
        let r = integrate(
            |x: f64| (x - 0.3).abs(),
            0.0,
            1.0,
            &QuadratureControl::default(),
        );
        assert!(r.converged);
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-10);
    }

    #[test]
    fn gamma_moment() {
        // ∫ x^4 e^{-2x} dx = 4!/2^5
        let r = integrate_to_inf(
            |x: f64| x.powi(4) * (-2.0 * x).exp(),
            0.0,
            &QuadratureControl::default(),
        );
        assert_relative_eq!(r.value, 24.0 / 32.0, max_relative = 1e-10);
    }

    #[test]
    fn subdivision_cap_reports_failure() {
        let ctrl = QuadratureControl {
            abs_tol: 1e-300,
            rel_tol: 0.0,
            max_subdivisions: 3,
            dims: 1,
        };
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &ctrl);
        assert!(!r.converged);
    }
}
