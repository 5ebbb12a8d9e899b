//! Modified Bessel functions I_ν and Bessel functions J_ν of real order.

use super::gamma::{gamma, ln_gamma, rgamma};
use crate::error::{invalid, Result};
use crate::quadrature::{gauss_legendre, QuadratureRule};
use std::f64::consts::PI;
use std::sync::OnceLock;

const RESCALE: f64 = 1e250;

fn check(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return invalid(format!("Bessel order must be finite and nonnegative, got {nu}"));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return invalid(format!("Bessel argument must be finite and nonnegative, got {x}"));
    }
    Ok(())
}

fn use_hankel(nu: f64, x: f64) -> bool {
    x > 50.0_f64.max(2.0 * nu * nu)
}

/// e^{−x} I_ν(x) from the Hankel expansion (large x).
fn hankel_scaled(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        let next = -term * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// Ascending series as (mantissa, log scale) so that I = mantissa · e^{scale}.
fn series(nu: f64, x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut log_scale = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            log_scale += RESCALE.ln();
        }
        if term < 1e-17 * sum && k > q.sqrt() {
            break;
        }
    }
    let direct = if nu <= 100.0 {
        (0.5 * x).powf(nu) / gamma(nu + 1.0)
    } else {
        f64::NAN
    };
    if direct.is_finite() && direct > 1e-290 {
        (sum * direct, log_scale)
    } else {
        (sum, log_scale + nu * (0.5 * x).ln() - ln_gamma(nu + 1.0))
    }
}

/// I_ν(x) for ν ≥ 0, x ≥ 0.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if use_hankel(nu, x) {
        return Ok(hankel_scaled(nu, x) * x.exp());
    }
    let (m, s) = series(nu, x);
    Ok(m * s.exp())
}

/// e^{−x} I_ν(x).
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if use_hankel(nu, x) {
        return Ok(hankel_scaled(nu, x));
    }
    let (m, s) = series(nu, x);
    Ok(m * (s - x).exp())
}

/// e^{−x} I_k(x) for k = 0..=n_max by downward (Miller) recurrence,
/// normalised with 1 = e^{−x}(I₀ + 2 Σ I_k).
pub fn bessel_i_scaled_batch(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check(0.0, x)?;
    if x == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    let start = n_max + 30 + (x + 10.0 * x.sqrt()).ceil() as usize;
    let mut out = vec![0.0; n_max + 1];
    let mut next = 0.0;
    let mut cur = 1e-280;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = next + 2.0 * k as f64 / x * cur;
        next = cur;
        cur = prev;
        if k - 1 <= n_max {
            out[k - 1] = cur;
        }
        if k > 1 {
            norm += 2.0 * cur;
        } else {
            norm += cur;
        }
        if cur.abs() > 1e200 {
            let f = 1e-200;
            cur *= f;
            next *= f;
            norm *= f;
            for v in out.iter_mut() {
                *v *= f;
            }
        }
    }
    Ok(out.into_iter().map(|v| v / norm).collect())
}

fn schlafli_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(48).expect("fixed order"))
}

/// J_ν(x) for real ν and x > 0 (or x = 0).
///
/// Uses the ascending series while it is free of cancellation and the
/// Schläfli integral otherwise; accuracy is ~1e−15 absolute.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite() && nu.is_finite()) {
        return invalid(format!("bessel_j needs finite nu and x >= 0, got ({nu}, {x})"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else if nu > 0.0 { 0.0 } else { f64::NAN });
    }
    if x <= 4.0 || 0.25 * x * x <= nu.max(0.0) + 1.0 {
        return Ok(j_series(nu, x));
    }
    Ok(j_schlafli(nu, x))
}

fn j_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut sum = 0.0;
    let mut term_pow = 1.0;
    let mut fact = 1.0;
    for k in 0..200 {
        let kf = k as f64;
        if k > 0 {
            term_pow *= q;
            fact *= kf;
        }
        let term = term_pow / fact * rgamma(kf + nu + 1.0);
        sum += term;
        if k > 4 && term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    (0.5 * x).powf(nu) * sum
}

fn j_schlafli(nu: f64, x: f64) -> f64 {
    let rule = schlafli_rule();
    let panels = (((nu.abs() + x) / 12.0).ceil() as usize).max(1);
    let width = PI / panels as f64;
    let mut first = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        let r = rule.on_interval(a, a + width);
        first += r.integrate(|t| (nu * t - x * t.sin()).cos());
    }
    first /= PI;
    let s = (nu * PI).sin();
    if s.abs() < 1e-300 || nu == nu.round() {
        return first;
    }
    // e^{−x sinh t − ν t} is negligible once x sinh t exceeds ~40 + |ν| t.
    let mut upper: f64 = 1.0;
    while x * upper.sinh() + nu * upper < 45.0 {
        upper *= 1.5;
    }
    let panels = ((upper * (1.0 + nu.abs() / 10.0)).ceil() as usize).max(2);
    let width = upper / panels as f64;
    let mut second = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        let r = rule.on_interval(a, a + width);
        second += r.integrate(|t| (-x * t.sinh() - nu * t).exp());
    }
    first - s / PI * second
}

/// J′_ν(x) = (ν/x) J_ν(x) − J_{ν+1}(x).
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    Ok(nu / x * bessel_j(nu, x)? - bessel_j(nu + 1.0, x)?)
}
