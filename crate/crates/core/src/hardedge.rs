//! Hard-edge Painlevé III′ theory: Okamoto variables and their recurrences
//! in a, the isomonodromic components, integer-a Bessel closed forms,
//! hard-edge distributions and the degeneration to the soft edge.

use crate::error::{invalid, Error, Result};
use crate::fredholm::{KernelSpec, OperatorDiscretization};
use crate::linalg::symmetric_eigenvalues;
use crate::painleve2::{alpha1_2_state, sigma_ii};
use crate::quadrature::{gauss_legendre, gauss_legendre_on, QuadratureRule};
use crate::specfun::{bessel_i_scaled_batch, gamma, ln_gamma};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

/// Nyström order used by the Fredholm routes on (0, s).
pub const HARD_ORDER: usize = 64;
const CBRT2: f64 = 1.259_921_049_894_873_2;

/// Primary variables ν, μ, C, ξ at (s, a) with the canonical pair (q, p) at s/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardEdgeState {
    pub s: f64,
    pub a: f64,
    pub nu: f64,
    pub mu: f64,
    pub c: f64,
    pub xi: f64,
    pub q: f64,
    pub p: f64,
}

impl HardEdgeState {
    pub fn from_canonical(q: f64, p: f64, s: f64, a: f64) -> Self {
        let (nu, mu, c, xi) = primary_from_canonical(q, p, s, a);
        HardEdgeState {
            s,
            a,
            nu,
            mu,
            c,
            xi,
            q,
            p,
        }
    }

    /// ρ = (C + a)/ξ entering the isomonodromic recurrence.
    pub fn rho(&self) -> Result<f64> {
        if self.xi == 0.0 {
            return Err(Error::Pole {
                what: "ξ".into(),
                t: self.s,
            });
        }
        Ok((self.c + self.a) / self.xi)
    }
}

/// (ν, μ, C, ξ) from (q, p) evaluated at σ = s/4, with v₁ = a + 2, v₂ = a − 2.
pub fn primary_from_canonical(q: f64, p: f64, s: f64, a: f64) -> (f64, f64, f64, f64) {
    let sigma = 0.25 * s;
    let nu = q * q * p * p - (q * q + (a + 2.0) * q - sigma) * p + a * q;
    (nu, s * (p - 1.0), -q * p, q * (a - q * p))
}

/// e^{−x} I_k(x), k = 0..=4.
fn bessel_scaled(x: f64) -> Result<[f64; 5]> {
    let v = bessel_i_scaled_batch(4, x)?;
    Ok([v[0], v[1], v[2], v[3], v[4]])
}

fn bessel(x: f64) -> Result<[f64; 5]> {
    let e = x.exp();
    Ok(bessel_scaled(x)?.map(|v| v * e))
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return invalid(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

/// Canonical seeds at a = 0: p₀(s/4) = 0, q₀(s/4) = (√s/2) I₃(√s)/I₂(√s).
pub fn seeds_a0(s: f64) -> Result<(f64, f64)> {
    check_positive("s", s)?;
    let x = s.sqrt();
    let i = bessel_scaled(x)?;
    Ok((0.5 * x * i[3] / i[2], 0.0))
}

pub fn closed_forms_a0(s: f64) -> Result<HardEdgeState> {
    let (q, p) = seeds_a0(s)?;
    Ok(HardEdgeState {
        s,
        a: 0.0,
        nu: 0.0,
        mu: -s,
        c: 0.0,
        xi: 0.0,
        q,
        p,
    })
}

/// (u₀, v₀)(z) = (8 I₂(√z)/z, 4 I₃(√z)/√z); independent of s.
pub fn iso_a0(z: f64) -> Result<(f64, f64)> {
    check_positive("z", z)?;
    let y = z.sqrt();
    let i = bessel(y)?;
    Ok((8.0 * i[2] / z, 4.0 * i[3] / y))
}

/// ∂_z of (u₀, v₀).
pub fn iso_a0_dz(z: f64) -> Result<(f64, f64)> {
    check_positive("z", z)?;
    let y = z.sqrt();
    let i = bessel(y)?;
    let y3 = y * z;
    Ok((4.0 * i[3] / y3, 4.0 * i[3] / y3 + 2.0 * i[4] / z))
}

/// A₀(z) = ¼ e^{−z/4} [I₂(√z)² − I₁(√z) I₃(√z)].
pub fn spacing_density_a0(z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    check_positive("z", z)?;
    let x = z.sqrt();
    let i = bessel_scaled(x)?;
    Ok(0.25 * (2.0 * x - 0.25 * z).exp() * (i[2] * i[2] - i[1] * i[3]))
}

/// Closed-form moments m_k of A₀ for k = 0..=6.
pub fn a0_moment_closed(k: usize) -> Result<f64> {
    let i = bessel(2.0)?;
    let (i0, i1) = (i[0], i[1]);
    let e2 = E * E;
    Ok(match k {
        0 => 1.0,
        1 => 4.0 * e2 * (i0 - i1),
        2 => 32.0 * e2 * i0,
        3 => 384.0 * e2 * (2.0 * i0 + i1),
        4 => 2048.0 * e2 * (13.0 * i0 + 9.0 * i1),
        5 => 20480.0 * e2 * (55.0 * i0 + 42.0 * i1),
        6 => 98304.0 * e2 * (557.0 * i0 + 441.0 * i1),
        _ => return invalid(format!("A₀ moments are tabulated for k ≤ 6, got {k}")),
    })
}

fn panels(a: f64, b: f64, width: f64, points: usize) -> Result<QuadratureRule> {
    let n = (((b - a) / width).ceil() as usize).max(1);
    let base = gauss_legendre(points)?;
    let h = (b - a) / n as f64;
    let mut rule = QuadratureRule {
        nodes: Vec::with_capacity(n * points),
        weights: Vec::with_capacity(n * points),
    };
    for k in 0..n {
        let r = base.on_interval(a + h * k as f64, a + h * (k + 1) as f64);
        rule.nodes.extend(r.nodes);
        rule.weights.extend(r.weights);
    }
    Ok(rule)
}

/// ∫₀^∞ z^k A₀(z) dz by composite Gauss–Legendre.
pub fn a0_moment_quadrature(k: usize) -> Result<f64> {
    if k > 12 {
        return invalid(format!("moment order {k} too large"));
    }
    let rule = panels(0.0, 1200.0, 10.0, 24)?;
    let mut acc = 0.0;
    for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * z.powi(k as i32) * spacing_density_a0(z)?;
    }
    Ok(acc)
}

/// Closed forms at a = 1.
pub fn closed_forms_a1(s: f64) -> Result<HardEdgeState> {
    check_positive("s", s)?;
    let x = s.sqrt();
    let i = bessel_scaled(x)?;
    let (i1, i2, i3) = (i[1], i[2], i[3]);
    let r = i3 / i2;
    let nu = 0.5 * x * r;
    let mu = -4.0 * x * r - s * r * r;
    let c = -3.0 + 0.5 * x / r - 0.5 * x * r;
    let xi = 0.25 * s - 0.25 * s / (r * r) + 1.5 * x / r;
    let p = 1.0 - i3 * i1 / (i2 * i2);
    let q = i2 / (2.0 * i3) * (x * i2 * i2 - 6.0 * i2 * i3 - x * i3 * i3) / (i1 * i3 - i2 * i2);
    Ok(HardEdgeState {
        s,
        a: 1.0,
        nu,
        mu,
        c,
        xi,
        q,
        p,
    })
}

/// (u₁, v₁)(z; s) for s > z > 0.
pub fn iso_a1(z: f64, s: f64) -> Result<(f64, f64)> {
    check_positive("z", z)?;
    if !(s > z) {
        return invalid(format!("iso_a1 needs s > z, got s = {s}, z = {z}"));
    }
    let (x, y) = (s.sqrt(), z.sqrt());
    let is = bessel(x)?;
    let iz = bessel(y)?;
    let u = 8.0 * x / (z * is[3]) * (x * is[1] * iz[2] - y * iz[1] * is[2]) / (s - z);
    let v = 4.0 * x * is[2] / (y * is[3] * is[3]) * (x * is[2] * iz[3] - y * iz[2] * is[3]) / (s - z);
    Ok((u, v))
}

/// (u₁, v₁)(s; s).
pub fn iso_a1_diagonal(s: f64) -> Result<(f64, f64)> {
    check_positive("s", s)?;
    let x = s.sqrt();
    let i = bessel(x)?;
    let (i1, i2, i3) = (i[1], i[2], i[3]);
    let u = -4.0 * i1 / x + 4.0 * i2 * i2 / (x * i3);
    let d = x * i1 - 4.0 * i2;
    let v = -2.0 * i2 * (-s * i1 * i1 + 2.0 * x * i1 * i2 + (8.0 + s) * i2 * i2) / (d * d);
    Ok((u, v))
}

/// A₁(z) from its two integrals over s ∈ (z, ∞).
pub fn spacing_density_a1(z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    check_positive("z", z)?;
    let y = z.sqrt();
    let iz = bessel(y)?;
    let rule = panels(z, z + 400.0 + 4.0 * z, 8.0, 20)?;
    let (mut first, mut second) = (0.0, 0.0);
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let x = s.sqrt();
        let is = bessel_scaled(x)?;
        let damp = (x - 0.25 * s).exp();
        first += w * damp * is[2];
        second += w * x * damp * (x * iz[1] * is[2] - y * is[1] * iz[2]) / (s - z);
    }
    Ok((iz[0] * iz[2] - iz[1] * iz[1]) * first / 16.0 + iz[2] * second / (8.0 * y))
}

/// A_a(z) for a ∈ {0, 1}.
pub fn spacing_density_a(a: u32, z: f64) -> Result<f64> {
    match a {
        0 => spacing_density_a0(z),
        1 => spacing_density_a1(z),
        _ => invalid(format!("closed-form spacing densities exist for a ∈ {{0, 1}}, got {a}")),
    }
}

/// One step a ↦ a + 1 of the canonical recurrence, in the variable σ where
/// the a = 0 seeds read q₀(σ) = √σ I₃(2√σ)/I₂(2√σ).
pub fn okamoto_recurrence_step(q: f64, p: f64, sigma: f64, a: f64) -> Result<(f64, f64)> {
    if q == 0.0 {
        return Err(Error::Pole {
            what: "q[a]".into(),
            t: sigma,
        });
    }
    let w = q * (q * (p - 1.0) - 2.0);
    let d = w + sigma;
    if d == 0.0 {
        return Err(Error::Pole {
            what: "q(q(p−1)−2)+s".into(),
            t: sigma,
        });
    }
    Ok((-sigma / q + (a + 1.0) * sigma / d, w / sigma + 1.0))
}

/// ρ₀ = u₀(s;s)/v₀(s;s) = 2I₂(√s)/(√s I₃(√s)), replacing the 0/0 ratio (C₀ + 0)/ξ₀.
pub fn iso_rho_a0(s: f64) -> Result<f64> {
    check_positive("s", s)?;
    let x = s.sqrt();
    let i = bessel_scaled(x)?;
    Ok(2.0 * i[2] / (x * i[3]))
}

pub fn iso_recurrence_step(u: f64, v: f64, rho: f64, s: f64, z: f64) -> Result<(f64, f64)> {
    if !(s > z) {
        return invalid(format!("the isomonodromic recurrence needs s > z, got s = {s}, z = {z}"));
    }
    if !rho.is_finite() {
        return Err(Error::NonFinite("isomonodromic ρ"));
    }
    let f = s / (s - z);
    Ok((f * (u - rho * v), -f * 0.25 * rho * (z * u - s * rho * v)))
}

/// Fixed-point reals scaled by 2^bits.
struct Fixed {
    bits: u32,
}

impl Fixed {
    fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    fn encode(&self, x: f64) -> BigInt {
        if x == 0.0 {
            return BigInt::zero();
        }
        let raw = x.abs().to_bits();
        let exp = ((raw >> 52) & 0x7ff) as i64;
        let (mant, e) = if exp == 0 {
            (raw & ((1 << 52) - 1), -1074)
        } else {
            ((raw & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
        };
        let m = BigInt::from(mant);
        let shift = self.bits as i64 + e;
        let v = if shift >= 0 { m << shift as u32 } else { m >> (-shift) as u32 };
        if x < 0.0 {
            -v
        } else {
            v
        }
    }

    fn integer(&self, k: i64) -> BigInt {
        BigInt::from(k) << self.bits
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        if b.is_zero() {
            return Err(Error::PrecisionLoss("fixed-point division by zero".into()));
        }
        Ok((a << self.bits) / b)
    }

    fn to_f64(&self, a: &BigInt) -> f64 {
        let shift = self.bits.saturating_sub(64);
        let top = (a >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(-((self.bits - shift) as i32))
    }

    /// Σ_k σ^k / (k!(k+ν)!).
    fn bessel_sum(&self, sigma: &BigInt, sigma_f: f64, nu: u32) -> BigInt {
        let mut fact = BigInt::one();
        for k in 2..=nu as i64 {
            fact *= k;
        }
        let mut term = self.one() / fact;
        let mut tot = term.clone();
        let mut k: i64 = 0;
        loop {
            k += 1;
            term = self.mul(&term, sigma) / (k * (k + nu as i64));
            tot += &term;
            let past_peak = (k * k) as f64 > sigma_f;
            if term.is_zero() || (past_peak && term.bits() + (self.bits as u64) + 8 < tot.bits()) {
                return tot;
            }
        }
    }
}

/// Canonical pair and primary variables at integer a from the seed
/// recurrence run in fixed point; `bits` is the precision that settled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceResult {
    pub state: HardEdgeState,
    pub bits: u32,
}

fn recurrence_fixed(a: u32, s: f64, bits: u32) -> Result<[f64; 6]> {
    let fx = Fixed { bits };
    let sigma_f = 0.25 * s;
    let sigma = fx.encode(sigma_f);
    let one = fx.one();
    let s3 = fx.bessel_sum(&sigma, sigma_f, 3);
    let s2 = fx.bessel_sum(&sigma, sigma_f, 2);
    let mut q = fx.mul(&sigma, &fx.div(&s3, &s2)?);
    let mut p = BigInt::zero();
    for b in 0..a as i64 {
        let w = fx.mul(&q, &(fx.mul(&q, &(&p - &one)) - fx.integer(2)));
        let d = &w + &sigma;
        let qn = -fx.div(&sigma, &q)? + fx.div(&(&sigma * (b + 1)), &d)?;
        p = fx.div(&w, &sigma)? + &one;
        q = qn;
        if q.is_zero() {
            return Err(Error::Pole {
                what: format!("q[{}]", b + 1),
                t: s,
            });
        }
    }
    let af = fx.integer(a as i64);
    let qp = fx.mul(&q, &p);
    let q2 = fx.mul(&q, &q);
    let nu = fx.mul(&qp, &qp) - fx.mul(&(&q2 + fx.mul(&(&af + fx.integer(2)), &q) - &sigma), &p) + fx.mul(&af, &q);
    let xi = fx.mul(&q, &(&af - &qp));
    Ok([
        fx.to_f64(&q),
        fx.to_f64(&p),
        fx.to_f64(&nu),
        s * (fx.to_f64(&(&p - &one))),
        -fx.to_f64(&qp),
        fx.to_f64(&xi),
    ])
}

/// The hard-edge state at integer a ≥ 0, by a steps of the canonical recurrence
/// from the a = 0 seeds. Precision doubles until two runs 128 bits apart agree.
pub fn hard_edge_state(a: u32, s: f64) -> Result<RecurrenceResult> {
    check_positive("s", s)?;
    let mut bits = 256u32;
    loop {
        let lo = recurrence_fixed(a, s, bits)?;
        let hi = recurrence_fixed(a, s, bits + 128)?;
        let agree = lo.iter().zip(&hi).all(|(x, y)| (x - y).abs() <= 1e-14 * y.abs().max(1.0));
        if agree {
            let [q, p, nu, mu, c, xi] = hi;
            return Ok(RecurrenceResult {
                state: HardEdgeState {
                    s,
                    a: a as f64,
                    nu,
                    mu,
                    c,
                    xi,
                    q,
                    p,
                },
                bits: bits + 128,
            });
        }
        if bits >= 1 << 16 {
            return Err(Error::PrecisionLoss(format!(
                "recurrence to a = {a} at s = {s} did not settle by {bits} bits"
            )));
        }
        bits *= 2;
    }
}

/// (u, v)(z; s) at integer a by the isomonodromic recurrence from (u₀, v₀).
pub fn iso_components(a: u32, z: f64, s: f64) -> Result<(f64, f64)> {
    let (mut u, mut v) = iso_a0(z)?;
    for b in 0..a {
        let rho = if b == 0 {
            iso_rho_a0(s)?
        } else {
            hard_edge_state(b, s)?.state.rho()?
        };
        (u, v) = iso_recurrence_step(u, v, rho, s, z)?;
    }
    Ok((u, v))
}

/// Multiplies (u, v) by z s^{−a/2}(s − z)^{a/2}, the inverse of the gauge map,
/// which normalises the expansion about r = z/s to u ~ s r.
pub fn gauge_to_series(u: f64, v: f64, z: f64, s: f64, a: f64) -> (f64, f64) {
    let g = z * ((s - z) / s).powf(0.5 * a);
    (g * u, g * v)
}

/// Coefficients u_m, v_m, m < m_max, of the expansion about r = 0.
pub fn series_uv(mu: f64, c: f64, xi: f64, s: f64, a: f64, m_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m_max == 0 || m_max > 60 {
        return invalid(format!("series_uv needs 1 ≤ m_max ≤ 60, got {m_max}"));
    }
    let k = 2.0 * c + a;
    let mut u = vec![s];
    let mut v = vec![0.0];
    for m in 1..m_max {
        let mf = m as f64;
        let um2 = if m >= 2 { u[m - 2] } else { 0.0 };
        let un = (-(-4.0 * (mf * mf + mf - 2.0) * s + 2.0 * (mf + 2.0) * s * k + mu * (s - 4.0 * xi)) * u[m - 1]
            + s * mu * um2
            - 2.0 * (2.0 * (mf + 2.0) * s + k * mu + 2.0 * (mf + 1.0) * mu) * v[m - 1])
            / (4.0 * mf * (mf + 2.0) * s);
        let vn = ((s - 4.0 * xi) * u[m - 1] - s * um2 + 2.0 * (k + 2.0 * (mf + 1.0)) * v[m - 1]) / (4.0 * (mf + 2.0));
        u.push(un);
        v.push(vn);
    }
    Ok((u, v))
}

/// Σ c_m r^{m+1}.
pub fn series_sum(c: &[f64], r: f64) -> f64 {
    r * c.iter().rev().fold(0.0, |acc, &cm| acc * r + cm)
}

fn hard_discretization(a: f64, s: f64, n: usize) -> Result<OperatorDiscretization<KernelSpec>> {
    check_positive("s", s)?;
    let kernel = KernelSpec::hard(a)?;
    let rule = crate::fredholm::domain_rule(&kernel, crate::quadrature::Domain::Finite { a: 0.0, b: s }, n)?;
    OperatorDiscretization::new(kernel, rule)
}

/// E(0; (0, s)) = det(I − K^hard_a) on (0, s).
pub fn hard_gap_fredholm(a: f64, s: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(1.0);
    }
    hard_discretization(a, s, HARD_ORDER)?.det()
}

/// Density of the smallest eigenvalue, −dE/ds = det(I − K) R(s, s).
pub fn p1_hard(a: f64, s: f64) -> Result<f64> {
    let disc = hard_discretization(a, s, HARD_ORDER)?;
    let res = disc.resolvent()?;
    Ok(res.det() * res.kernel(s, s)?)
}

/// (E(0; (0,s)), E(1; (0,s))) from the Nyström eigenvalues.
pub fn hard_gap_counts(a: f64, s: f64, n: usize) -> Result<(f64, f64)> {
    let disc = hard_discretization(a, s, n)?;
    let lambda = symmetric_eigenvalues(&disc.matrix)?;
    let none: f64 = lambda.iter().map(|l| 1.0 - l).product();
    let one: f64 = (0..lambda.len())
        .map(|j| {
            lambda[j]
                * lambda
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, l)| 1.0 - l)
                    .product::<f64>()
        })
        .sum();
    Ok((none, one))
}

/// s^a / (2^{2a+2} Γ(a+1) Γ(a+2)) exp(∫₀ˢ (ν(t) − t/4) dt/t) with ν from the recurrence.
pub fn p1_hard_sigma(a: u32, s: f64) -> Result<f64> {
    check_positive("s", s)?;
    let rule = gauss_legendre_on(40, 0.0, s)?;
    let mut acc = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let nu = hard_edge_state(a, t)?.state.nu;
        acc += w * (nu - 0.25 * t) / t;
    }
    let af = a as f64;
    let log_pref = af * s.ln() - (2.0 * af + 2.0) * 2f64.ln() - ln_gamma(af + 1.0) - ln_gamma(af + 2.0);
    Ok((log_pref + acc).exp())
}

/// Joint density of the two smallest eigenvalues at (s − z, s) for a = 0,
/// where ν₀ = C₀ = 0 and (u₀, v₀) are Bessel functions.
pub fn p2_hard_a0(s: f64, z: f64) -> Result<f64> {
    check_positive("z", z)?;
    if !(s > z) {
        return invalid(format!("p2_hard_a0 needs s > z, got s = {s}, z = {z}"));
    }
    let (u, v) = iso_a0(z)?;
    let (du, dv) = iso_a0_dz(z)?;
    let pref = z * z * (-0.25 * s).exp() / (4f64.powi(3) * gamma(3.0).powi(2));
    Ok(pref * (u * dv - v * du))
}

/// s = a²[1 − 2^{2/3} a^{−2/3} τ].
pub fn h2s_s(a: f64, tau: f64) -> f64 {
    a * a * (1.0 - CBRT2 * CBRT2 * a.powf(-2.0 / 3.0) * tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2sRow {
    pub a: u32,
    pub s: f64,
    pub delta_nu: f64,
    pub delta_mu: f64,
    pub delta_c: f64,
    pub delta_xi: f64,
    pub bits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H2sReport {
    pub tau: f64,
    pub sigma_ii: f64,
    pub rows: Vec<H2sRow>,
}

impl H2sReport {
    pub fn nu_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].delta_nu < w[0].delta_nu)
    }

    pub fn c_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].delta_c < w[0].delta_c)
    }
}

/// Scaled discrepancies between hard-edge quantities at s = a²[1 − 2^{2/3}a^{−2/3}τ]
/// and their Painlevé II limits at t = −2^{1/3}τ.
pub fn hard_to_soft_check(a_list: &[u32], tau: f64) -> Result<H2sReport> {
    if a_list.is_empty() || a_list.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("hard_to_soft_check needs a nonempty increasing list of a");
    }
    let sig = sigma_ii(tau)?;
    let st = alpha1_2_state(-CBRT2 * tau)?;
    let g = st.q + 2.0 / st.p;
    let mut rows = Vec::with_capacity(a_list.len());
    for &a in a_list {
        let af = a as f64;
        let s = h2s_s(af, tau);
        check_positive("s", s)?;
        let r = hard_edge_state(a, s)?;
        let h = r.state;
        let a23 = af.powf(2.0 / 3.0);
        let a43 = a23 * a23;
        rows.push(H2sRow {
            a,
            s,
            delta_nu: ((h.nu - 0.25 * s + af) / (-(0.5 * af).powf(2.0 / 3.0)) - sig).abs(),
            delta_mu: (h.mu / (-CBRT2 * a43) - st.p).abs(),
            delta_c: ((2.0 * h.c + af) / (CBRT2 * CBRT2 * a23) - g).abs(),
            delta_xi: ((h.xi - 0.25 * af * af) / (-a43 / (CBRT2 * CBRT2)) - (g * g - 0.5 * st.p)).abs(),
            bits: r.bits,
        });
    }
    Ok(H2sReport {
        tau,
        sigma_ii: sig,
        rows,
    })
}
