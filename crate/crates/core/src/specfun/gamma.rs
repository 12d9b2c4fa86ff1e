#![allow(clippy::excessive_precision)]

use crate::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// n! for n <= 170 fits in f64; the table is built once.
fn factorial_table() -> &'static [f64; 171] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; 171];
        for i in 1..171 {
            t[i] = t[i - 1] * i as f64;
        }
        t
    })
}

/// n! as a float. Overflows to infinity past 170.
pub fn factorial(n: u32) -> f64 {
    factorial_table()
        .get(n as usize)
        .copied()
        .unwrap_or(f64::INFINITY)
}

pub fn ln_factorial(n: u32) -> f64 {
    if n < 171 {
        factorial(n).ln()
    } else {
        lanczos_ln_gamma(f64::from(n) + 1.0)
    }
}

/// Binomial coefficient C(n, k) as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * f64::from(n - i) / f64::from(i + 1);
    }
    c.round()
}

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument (s - 1)
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    a
}

fn lanczos_ln_gamma(s: f64) -> f64 {
    let z = s - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

fn as_small_integer(s: f64) -> Option<u32> {
    (s.fract() == 0.0 && (1.0..=171.0).contains(&s)).then_some(s as u32)
}

/// Γ(s) for s > 0.
pub fn gamma_fn(s: f64) -> Result<f64> {
    if !(s > 0.0) || s.is_nan() {
        return Err(Error::domain(
            "gamma_fn",
            format!("s = {s} must be positive"),
        ));
    }
    if let Some(n) = as_small_integer(s) {
        return Ok(factorial(n - 1));
    }
    if s < 0.5 {
        // reflection: Γ(s) Γ(1 - s) = π / sin(πs)
        return Ok(PI / ((PI * s).sin() * gamma_fn(1.0 - s)?));
    }
    if s > 171.7 {
        return Ok(f64::INFINITY);
    }
    let z = s - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// ln Γ(s) for s > 0.
pub fn ln_gamma(s: f64) -> Result<f64> {
    if !(s > 0.0) || s.is_nan() {
        return Err(Error::domain(
            "ln_gamma",
            format!("s = {s} must be positive"),
        ));
    }
    if let Some(n) = as_small_integer(s) {
        return Ok(ln_factorial(n - 1));
    }
    if s < 0.5 {
        return Ok((PI / (PI * s).sin()).ln() - ln_gamma(1.0 - s)?);
    }
    Ok(lanczos_ln_gamma(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integer_and_half_values() {
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            gamma_fn(1.5).unwrap(),
            0.5 * PI.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gamma_fn(0.1).unwrap(),
            9.513_507_698_668_732,
            max_relative = 1e-13
        );
    }

    // Stirling series with Bernoulli corrections, shifted up so the
    // asymptotic tail is negligible, then recurred back down.
    fn stirling_ln_gamma(s: f64) -> f64 {
        let shift = 40usize;
        let z = s + shift as f64;
        let bernoulli_terms = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360_360.0,
            1.0 / 156.0,
            -3617.0 / 122_400.0,
        ];
        let mut ln = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
        for (k, c) in bernoulli_terms.iter().enumerate() {
            ln += c / z.powi(2 * k as i32 + 1);
        }
        for i in 0..shift {
            ln -= (s + i as f64).ln();
        }
        ln
    }

    #[test]
    fn lanczos_against_stirling() {
        for s in [3.7, 0.7, 1.3, 12.25, 33.3] {
            let oracle = stirling_ln_gamma(s).exp();
            assert_relative_eq!(gamma_fn(s).unwrap(), oracle, max_relative = 1e-13);
        }
        assert_relative_eq!(
            ln_gamma(3.7).unwrap(),
            stirling_ln_gamma(3.7),
            max_relative = 1e-13
        );
    }

    #[test]
    fn domain_errors() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn ln_gamma_large() {
        // ln Γ(201) = ln 200!
        assert_relative_eq!(
            ln_gamma(201.0).unwrap(),
            863.231_987_192_405_4,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            ln_factorial(200),
            863.231_987_192_405_4,
            max_relative = 1e-13
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(40, 20), 137_846_528_820.0);
    }
}
