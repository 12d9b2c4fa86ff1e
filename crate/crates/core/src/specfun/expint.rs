use super::EPS;
use crate::{Error, Result};

const EULER: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 10_000;

/// e^x E_n(x), the scaled generalized exponential integral, for integer n.
///
/// Negative and zero orders are reached by the downward recurrence
/// E_n = (e^{-x} - n E_{n+1}) / x, which is stable in that direction.
pub fn expint_scaled(n: i32, x: f64) -> Result<f64> {
    if x == 0.0 && n >= 2 {
        return Ok(1.0 / f64::from(n - 1));
    }
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain(
            "expint",
            format!("need finite x > 0 for n = {n}; got {x}"),
        ));
    }
    if n <= 0 {
        let mut s = 1.0 / x;
        for k in (n..0).rev() {
            s = (1.0 - f64::from(k) * s) / x;
        }
        return Ok(s);
    }
    let nm1 = n - 1;
    if x > 1.0 {
        let mut b = x + f64::from(n);
        let mut c = 1.0 / f64::MIN_POSITIVE;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            let a = -fi * (f64::from(nm1) + fi);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                return Ok(h);
            }
        }
        return Err(Error::domain(
            "expint",
            format!("continued fraction failed at n = {n}, x = {x}"),
        ));
    }
    let mut ans = if nm1 != 0 {
        1.0 / f64::from(nm1)
    } else {
        -x.ln() - EULER
    };
    let mut fact = 1.0;
    for i in 1..MAX_ITER as i32 {
        fact *= -x / f64::from(i);
        let del = if i != nm1 {
            -fact / f64::from(i - nm1)
        } else {
            let psi = -EULER + (1..=nm1).map(|k| 1.0 / f64::from(k)).sum::<f64>();
            fact * (-x.ln() + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * EPS {
            return Ok(ans * x.exp());
        }
    }
    Err(Error::domain(
        "expint",
        format!("series failed at n = {n}, x = {x}"),
    ))
}

/// E_n(x) = ∫_1^∞ e^{-xt} t^{-n} dt for integer n.
pub fn expint(n: i32, x: f64) -> Result<f64> {
    if x == 0.0 {
        return expint_scaled(n, x);
    }
    Ok(expint_scaled(n, x)? * (-x).exp())
}

/// ln E_n(x), finite even where E_n underflows.
pub fn ln_expint(n: i32, x: f64) -> Result<f64> {
    Ok(expint_scaled(n, x)?.ln() - x)
}
