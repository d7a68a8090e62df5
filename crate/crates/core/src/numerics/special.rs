use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 20.0;

/// Bessel function of the first kind, order zero.
///
/// Power series below 8, Miller backward recurrence on [8, 20), Hankel
/// asymptotic expansion from 20 on. Absolute error stays below 1e-12.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("bessel_j0 of non-finite {x}")));
    }
    let ax = x.abs();
    Ok(if ax < SERIES_LIMIT {
        j0_series(ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        j0_miller(ax)
    } else {
        j0_asymptotic(ax)
    })
}

fn j0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

// Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalized with
// J_0 + 2 Σ J_{2k} = 1.
fn j0_miller(x: f64) -> f64 {
    let start = 2 * (((x + 40.0) / 2.0) as usize);
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds J_{k-1}
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
    }
    norm += cur;
    cur / norm
}

fn j0_asymptotic(x: f64) -> f64 {
    // |a_k| = Π_{m=1..k} (2m-1)^2 / (k! 8^k); a_k itself carries (-1)^k
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut xpow = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            let kf = k as f64;
            a *= (2.0 * kf - 1.0).powi(2) / (8.0 * kf);
            xpow *= x;
        }
        let term = a / xpow;
        if term > last || term < 1e-18 {
            break;
        }
        last = term;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q -= sign * term;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbDirection {
    ToLinear,
    ToDb,
}

pub fn db_convert(value: f64, direction: DbDirection) -> Result<f64> {
    match direction {
        DbDirection::ToLinear => Ok(db_to_linear(value)),
        DbDirection::ToDb => linear_to_db(value),
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(value: f64) -> Result<f64> {
    if value.is_nan() || value <= 0.0 {
        return Err(Error::Domain(format!("dB of non-positive value {value}")));
    }
    Ok(10.0 * value.log10())
}
