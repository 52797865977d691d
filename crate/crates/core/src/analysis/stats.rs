//! Statistical utilities: paired t-tests with p-values from the
//! regularized incomplete beta function, normal quantiles via erf, and
//! Cochran's sample-size formula with finite-population correction.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Natural log of the gamma function (Lanczos approximation, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection keeps the approximation in its accurate range.
        (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let mut acc = COEFFS[0];
        for (i, &c) in COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Continued-fraction kernel of the incomplete beta function
/// (modified Lentz iteration).
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    const EPS: f64 = 1e-14;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=300 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b).
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front =
        (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln()).exp();
    // The continued fraction converges fast only on one side of the mean.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(a, b, x) / a
    } else {
        1.0 - front * betacf(b, a, 1.0 - x) / b
    }
}

/// Two-tailed p-value of a t statistic: P(|T_df| ≥ |t|).
pub fn t_two_tailed_p(t: f64, df: usize) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let df = df as f64;
    reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// Result of a paired t-test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    pub p: f64,
}

/// Paired t-test on the differences x − y, with the sample standard
/// deviation (n − 1 denominator).
pub fn paired_t_test(xs: &[f64], ys: &[f64]) -> Result<TTest> {
    if xs.len() != ys.len() {
        return Err(Error::input(format!(
            "paired samples differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::input("paired t-test needs at least two pairs"));
    }
    let d: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return Err(Error::input("zero variance in paired differences"));
    }
    let t = mean / (var / n as f64).sqrt();
    let df = n - 1;
    Ok(TTest { t, df, p: t_two_tailed_p(t, df) })
}

/// Error function; series expansion near zero, continued fraction in the
/// tail.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 3.0 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= -x * x / n;
            let add = term / (2.0 * n + 1.0);
            sum += add;
            if add.abs() < 1e-17 || n > 300.0 {
                break;
            }
        }
        2.0 / PI.sqrt() * sum
    } else {
        1.0 - erfc_tail(x)
    }
}

/// erfc for large positive x via the classic continued fraction,
/// evaluated by backward recurrence.
fn erfc_tail(x: f64) -> f64 {
    let mut f = 0.0;
    for i in (1..=80).rev() {
        f = (i as f64 / 2.0) / (x + f);
    }
    (-(x * x)).exp() / PI.sqrt() / (x + f)
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Inverse of [`normal_cdf`] by bisection.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::input(format!("quantile probability {p} outside (0, 1)")));
    }
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Cochran's sample size: n₀ = z²p(1−p)/e² with the finite-population
/// correction n₀ / (1 + (n₀−1)/N), rounded up, never below 1.
pub fn cochran_sample_size(
    population: u64,
    confidence: f64,
    margin: f64,
    proportion: f64,
) -> Result<u64> {
    if population < 1 {
        return Err(Error::input("population must be at least 1"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::input(format!("confidence {confidence} outside (0, 1)")));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::input(format!("margin {margin} outside (0, 1)")));
    }
    if !(0.0..=1.0).contains(&proportion) {
        return Err(Error::input(format!("proportion {proportion} outside [0, 1]")));
    }
    let z = normal_quantile((1.0 + confidence) / 2.0)?;
    let n0 = z * z * proportion * (1.0 - proportion) / (margin * margin);
    if n0 == 0.0 {
        return Ok(1);
    }
    let n = n0 / (1.0 + (n0 - 1.0) / population as f64);
    Ok((n.ceil() as u64).max(1))
}
