use approx::assert_relative_eq;
use proptest::prelude::*;
use swipt_core::oracle::{integrate, integrate_to_inf, QuadratureControl};
use swipt_core::specfun::{
    bessel_k, factorial, gamma_fn, ln_bessel_k, lower_inc_gamma, upper_inc_gamma,
};

fn tight() -> QuadratureControl {
    QuadratureControl {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
        dims: 1,
    }
}

#[test]
fn gamma_moment_identity() {
    // ∫₀^∞ x^N e^{−μx} dx = N!·μ^{−N−1}
    for n in 0..=12u32 {
        for mu in [0.3, 1.0, 2.7, 9.0] {
            let q = integrate_to_inf(|x| x.powi(n as i32) * (-mu * x).exp(), 0.0, &tight());
            let exact = factorial(n) * mu.powi(-(n as i32) - 1);
            assert_relative_eq!(q.value, exact, max_relative = 1e-10);
        }
    }
}

#[test]
fn bessel_integral_representation() {
    // K_v(x) = ∫₀^∞ e^{−x cosh t} cosh(vt) dt
    let q = integrate(
        |t| (-1.5 * t.cosh()).exp() * (2.0 * t).cosh(),
        0.0,
        40.0,
        &tight(),
    );
    assert_relative_eq!(bessel_k(2.0, 1.5).unwrap(), q.value, max_relative = 1e-12);
    for (v, x) in [(0.3, 0.7), (1.7, 3.0), (4.2, 0.4), (0.0, 12.0)] {
        let q = integrate(
            |t| (-x * t.cosh()).exp() * (v * t).cosh(),
            0.0,
            40.0,
            &tight(),
        );
        assert_relative_eq!(bessel_k(v, x).unwrap(), q.value, max_relative = 1e-11);
    }
}

#[test]
fn bessel_log_convex_in_order() {
    for x in [0.05, 0.5, 1.0, 2.0, 7.5, 40.0, 400.0] {
        let h = 0.25;
        for i in 0..30 {
            let v = -3.5 + 0.25 * f64::from(i);
            let (a, b, c) = (
                ln_bessel_k(v - h, x).unwrap(),
                ln_bessel_k(v, x).unwrap(),
                ln_bessel_k(v + h, x).unwrap(),
            );
            assert!(a + c - 2.0 * b >= -1e-10, "v={v} x={x}");
            if x < 300.0 {
                assert!(bessel_k(v, x).unwrap() > 0.0);
            }
        }
    }
}

proptest! {
    #[test]
    fn incomplete_gammas_sum_to_gamma(s in 1e-3f64..50.0, x in 0.0f64..100.0) {
        let total = lower_inc_gamma(s, x).unwrap() + upper_inc_gamma(s, x).unwrap();
        let g = gamma_fn(s).unwrap();
        prop_assert!(((total - g) / g).abs() <= 1e-12, "s={} x={} {} vs {}", s, x, total, g);
    }
}
