//! Bessel functions of integer order 0 and 1.
//!
//! Small arguments use the ascending power series, large arguments the
//! Hankel asymptotic expansion truncated at its smallest term. The crossover
//! sits at |x| = 12, where the series loses about four digits to cancellation
//! and the optimally truncated asymptotic series is already below 1e-10.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 12.0;
/// Beyond this the modified functions switch to their asymptotic form.
const MODIFIED_SERIES_LIMIT: f64 = 30.0;
/// Overflow guard for I0/I1.
pub const MODIFIED_MAX_ARG: f64 = 300.0;

fn check_finite(x: f64, name: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name}: non-finite argument {x}")))
    }
}

/// Sum of the ascending series for J0 and the harmonic-weighted series that
/// appears in Y0. Returns (J0, S) with Y0 = 2/pi * ((ln(x/2) + gamma) J0 + S).
fn series_order0(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut j0 = 1.0;
    let mut s = 0.0;
    let mut harmonic = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        s -= harmonic * term;
        if term.abs() < 1e-18 * j0.abs().max(1e-300) && term.abs() < 1e-18 {
            break;
        }
    }
    (j0, s)
}

/// Returns (J1, S) with
/// Y1 = -2/(pi x) + 2/pi ln(x/2) J1 - 1/pi * S.
fn series_order1(x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = half * half;
    // k = 0 term
    let mut term = half;
    let mut j1 = term;
    let mut hk = 0.0;
    let mut hk1 = 1.0;
    let mut s = (hk + hk1 - 2.0 * EULER_GAMMA) * term;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        hk += 1.0 / kf;
        hk1 += 1.0 / (kf + 1.0);
        j1 += term;
        s += (hk + hk1 - 2.0 * EULER_GAMMA) * term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    (j1, s)
}

/// Hankel expansion: returns (P, Q) for order `nu` at x >= SERIES_LIMIT.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..100 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() >= prev {
            break;
        }
        prev = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn asymptotic_jy(nu: f64, x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu, x);
    let w = x - nu * FRAC_PI_2 - FRAC_PI_4;
    let amp = (2.0 / (PI * x)).sqrt();
    let (s, c) = w.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_finite(x, "J0")?;
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        Ok(series_order0(ax).0)
    } else {
        Ok(asymptotic_jy(0.0, ax).0)
    }
}

/// Bessel function of the first kind, order one.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_finite(x, "J1")?;
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        series_order1(ax).0
    } else {
        asymptotic_jy(1.0, ax).0
    };
    Ok(if x < 0.0 { -v } else { v })
}

/// Bessel function of the second kind, order zero. Requires x > 0.
pub fn bessel_y0(x: f64) -> Result<f64> {
    check_finite(x, "Y0")?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("Y0: argument must be positive, got {x}")));
    }
    if x < SERIES_LIMIT {
        let (j0, s) = series_order0(x);
        Ok(2.0 / PI * (((0.5 * x).ln() + EULER_GAMMA) * j0 + s))
    } else {
        Ok(asymptotic_jy(0.0, x).1)
    }
}

/// Bessel function of the second kind, order one. Requires x > 0.
pub fn bessel_y1(x: f64) -> Result<f64> {
    check_finite(x, "Y1")?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("Y1: argument must be positive, got {x}")));
    }
    if x < SERIES_LIMIT {
        let (j1, s) = series_order1(x);
        Ok(-2.0 / (PI * x) + 2.0 / PI * (0.5 * x).ln() * j1 - s / PI)
    } else {
        Ok(asymptotic_jy(1.0, x).1)
    }
}

fn check_modified(x: f64, name: &str) -> Result<()> {
    check_finite(x, name)?;
    if x.abs() > MODIFIED_MAX_ARG {
        return Err(Error::Range(format!(
            "{name}: |x| = {} exceeds {MODIFIED_MAX_ARG}",
            x.abs()
        )));
    }
    Ok(())
}

fn modified_series(nu: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if nu == 0 { 1.0 } else { half };
    let mut sum = term;
    let nuf = nu as f64;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + nuf));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn modified_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..100 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= -(mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() >= prev {
            break;
        }
        prev = a.abs();
        sum += a;
        if a.abs() < 1e-17 {
            break;
        }
    }
    x.exp() / (2.0 * PI * x).sqrt() * sum
}

/// Modified Bessel function of the first kind, order zero (|x| <= 300).
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_modified(x, "I0")?;
    let ax = x.abs();
    Ok(if ax < MODIFIED_SERIES_LIMIT {
        modified_series(0, ax)
    } else {
        modified_asymptotic(0.0, ax)
    })
}

/// Modified Bessel function of the first kind, order one (|x| <= 300).
pub fn bessel_i1(x: f64) -> Result<f64> {
    check_modified(x, "I1")?;
    let ax = x.abs();
    let v = if ax < MODIFIED_SERIES_LIMIT {
        modified_series(1, ax)
    } else {
        modified_asymptotic(1.0, ax)
    };
    Ok(if x < 0.0 { -v } else { v })
}
