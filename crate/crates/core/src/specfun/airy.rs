//! Airy functions of real argument.
//!
//! Asymptotic expansions are used for |x| ≥ 9. Inside that window values come
//! from Taylor continuation of y'' = x y off a table of anchors spaced 0.25
//! apart; Ai on the positive axis is propagated leftwards from x = 9 so that
//! the recessive solution is never swamped by Bi.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;
const BI0: f64 = 0.614_926_627_446_000_7;
const BIP0: f64 = 0.448_288_357_353_826_4;

const EDGE: f64 = 9.0;
const SPACING: f64 = 0.25;
const ANCHORS: usize = 73;

/// Beyond this argument Bi overflows an f64.
pub const BI_OVERFLOW: f64 = 104.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValues {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

impl AiryValues {
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

#[derive(Clone, Copy)]
struct Anchor {
    ai: f64,
    aip: f64,
    bi: f64,
    bip: f64,
}

fn anchor_x(j: usize) -> f64 {
    -EDGE + SPACING * j as f64
}

/// Taylor step of y'' = x y from x0 by h, for two solutions at once.
fn taylor_step(x0: f64, h: f64, y: [f64; 2], yp: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    let mut out = [0.0; 2];
    let mut outp = [0.0; 2];
    for c in 0..2 {
        let mut a = [0.0f64; 64];
        a[0] = y[c];
        a[1] = yp[c];
        a[2] = x0 * a[0] / 2.0;
        let mut value = a[0] + h * (a[1] + h * a[2]);
        let mut deriv = a[1] + 2.0 * h * a[2];
        let mut hp = h * h;
        for k in 3..64 {
            a[k] = (x0 * a[k - 2] + a[k - 3]) / (k * (k - 1)) as f64;
            deriv += k as f64 * a[k] * hp;
            hp *= h;
            let term = a[k] * hp;
            value += term;
            if k > 8 && term.abs() <= 1e-19 * value.abs() && (a[k - 1] * hp).abs() <= 1e-18 * value.abs().max(deriv.abs()) {
                break;
            }
        }
        out[c] = value;
        outp[c] = deriv;
    }
    (out, outp)
}

fn table() -> &'static [Anchor; ANCHORS] {
    static TABLE: OnceLock<[Anchor; ANCHORS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [Anchor {
            ai: 0.0,
            aip: 0.0,
            bi: 0.0,
            bip: 0.0,
        }; ANCHORS];
        let zero = 36;
        t[zero] = Anchor {
            ai: AI0,
            aip: AIP0,
            bi: BI0,
            bip: BIP0,
        };
        for j in (0..zero).rev() {
            let a = t[j + 1];
            let (y, yp) = taylor_step(anchor_x(j + 1), -SPACING, [a.ai, a.bi], [a.aip, a.bip]);
            t[j] = Anchor {
                ai: y[0],
                aip: yp[0],
                bi: y[1],
                bip: yp[1],
            };
        }
        for j in zero + 1..ANCHORS {
            let a = t[j - 1];
            let (y, yp) = taylor_step(anchor_x(j - 1), SPACING, [a.bi, 0.0], [a.bip, 0.0]);
            t[j].bi = y[0];
            t[j].bip = yp[0];
        }
        let edge = asymptotic_positive(EDGE);
        let z = zeta(EDGE);
        t[ANCHORS - 1].ai = edge.ai * (-z).exp();
        t[ANCHORS - 1].aip = edge.ai_prime * (-z).exp();
        for j in (zero + 1..ANCHORS - 1).rev() {
            let a = t[j + 1];
            let (y, yp) = taylor_step(anchor_x(j + 1), -SPACING, [a.ai, 0.0], [a.aip, 0.0]);
            t[j].ai = y[0];
            t[j].aip = yp[0];
        }
        t
    })
}

fn zeta(x: f64) -> f64 {
    2.0 / 3.0 * x.abs() * x.abs().sqrt()
}

/// Asymptotic coefficients u_k and v_k, truncated where the series for ζ stops decreasing.
fn asymptotic_sums(zeta: f64, alternate: bool) -> (f64, f64) {
    let mut u = 1.0;
    let mut su = 1.0;
    let mut sv = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let zk = zeta.powi(k);
        let sign = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        let tu = sign * u / zk;
        let tv = sign * v / zk;
        let mag = tu.abs().max(tv.abs());
        if mag > last || !mag.is_finite() {
            break;
        }
        su += tu;
        sv += tv;
        last = mag;
        if mag < 1e-17 {
            break;
        }
    }
    (su, sv)
}

/// Scaled values for large positive x: Ai·e^ζ and Bi·e^{−ζ}.
fn asymptotic_positive(x: f64) -> AiryValues {
    let z = zeta(x);
    let q = x.powf(0.25);
    let rp = PI.sqrt();
    let (au, av) = asymptotic_sums(z, true);
    let (bu, bv) = asymptotic_sums(z, false);
    AiryValues {
        ai: au / (2.0 * rp * q),
        ai_prime: -q * av / (2.0 * rp),
        bi: bu / (rp * q),
        bi_prime: q * bv / rp,
    }
}

fn asymptotic_negative(x: f64) -> AiryValues {
    let zabs = -x;
    let z = zeta(zabs);
    let q = zabs.powf(0.25);
    let rp = PI.sqrt();
    let (mut ue, mut uo, mut ve, mut vo) = (1.0, 0.0, 1.0, 0.0);
    let mut u = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let zk = z.powi(k);
        let mag = (u / zk).abs().max((v / zk).abs());
        if mag > last || !mag.is_finite() {
            break;
        }
        last = mag;
        let sign = if (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
        if k % 2 == 0 {
            ue += sign * u / zk;
            ve += sign * v / zk;
        } else {
            uo += sign * u / zk;
            vo += sign * v / zk;
        }
        if mag < 1e-17 {
            break;
        }
    }
    let (s, c) = (z - FRAC_PI_4).sin_cos();
    AiryValues {
        ai: (c * ue + s * uo) / (rp * q),
        ai_prime: q * (s * ve - c * vo) / rp,
        bi: (-s * ue + c * uo) / (rp * q),
        bi_prime: q * (c * ve + s * vo) / rp,
    }
}

fn from_table(x: f64) -> AiryValues {
    let t = table();
    let j = (((x + EDGE) / SPACING).round() as usize).min(ANCHORS - 1);
    let a = t[j];
    let (y, yp) = taylor_step(anchor_x(j), x - anchor_x(j), [a.ai, a.bi], [a.aip, a.bip]);
    AiryValues {
        ai: y[0],
        ai_prime: yp[0],
        bi: y[1],
        bi_prime: yp[1],
    }
}

/// Ai, Ai′, Bi, Bi′ at x. Fails only where Bi overflows.
pub fn airy(x: f64) -> Result<AiryValues> {
    if !x.is_finite() {
        return Err(Error::NonFinite("airy"));
    }
    if x > BI_OVERFLOW {
        return Err(Error::Overflow { function: "Bi", x });
    }
    Ok(airy_unchecked(x))
}

fn airy_unchecked(x: f64) -> AiryValues {
    if x >= EDGE {
        let s = asymptotic_positive(x);
        let z = zeta(x);
        let (d, g) = ((-z).exp(), z.exp());
        AiryValues {
            ai: s.ai * d,
            ai_prime: s.ai_prime * d,
            bi: s.bi * g,
            bi_prime: s.bi_prime * g,
        }
    } else if x <= -EDGE {
        asymptotic_negative(x)
    } else {
        from_table(x)
    }
}

/// Exponentially scaled values: for x > 0, Ai and Ai′ carry e^{ζ} and Bi, Bi′ carry
/// e^{−ζ} with ζ = (2/3)x^{3/2}; for x ≤ 0 the values are unscaled.
pub fn airy_scaled(x: f64) -> AiryValues {
    if x >= EDGE {
        return asymptotic_positive(x);
    }
    let v = airy_unchecked(x);
    if x <= 0.0 {
        return v;
    }
    let z = zeta(x);
    let (g, d) = (z.exp(), (-z).exp());
    AiryValues {
        ai: v.ai * g,
        ai_prime: v.ai_prime * g,
        bi: v.bi * d,
        bi_prime: v.bi_prime * d,
    }
}

/// (Ai(x), Ai′(x)); underflows gracefully to zero for large x.
pub fn airy_ai(x: f64) -> (f64, f64) {
    if x >= EDGE {
        let s = asymptotic_positive(x);
        let d = (-zeta(x)).exp();
        return (s.ai * d, s.ai_prime * d);
    }
    let v = airy_unchecked(x);
    (v.ai, v.ai_prime)
}

/// Logarithmic derivative Ai′(x)/Ai(x) for x ≥ 0, free of underflow.
pub fn airy_ai_log_derivative(x: f64) -> f64 {
    let s = airy_scaled(x);
    s.ai_prime / s.ai
}
