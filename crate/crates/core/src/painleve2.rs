//! Painlevé II: the Hastings–McLeod transcendent, its Hamiltonian form, the
//! folding and Schlesinger maps up to α₁ = 2, the scaled Lax pair, and the
//! Painlevé form of the joint density of the two largest eigenvalues.

use crate::error::{invalid, Error, Result};
use crate::fredholm::{KernelSpec, OperatorDiscretization, DEFAULT_MAP_SCALE};
use crate::ode::{dopri5, OdeOptions};
use crate::quadrature::{gauss_legendre, map_semi_infinite, ChebGrid, QuadratureRule};
use crate::specfun::{airy_ai, airy_ai_log_derivative, airy_scaled};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

const CBRT2: f64 = 1.259_921_049_894_873_2;
/// Beyond this argument the Hastings–McLeod function equals Ai to working precision.
const HM_AIRY_SWITCH: f64 = 10.0;
/// Nyström order for the resolvent evaluation of Hastings–McLeod.
const HM_ORDER: usize = 64;
/// Normalisation of the Painlevé joint density.
pub const C0: f64 = 1.0 / (256.0 * PI);
/// Lax series seed point and truncation.
pub const LAX_SEED: f64 = 0.05;
pub const LAX_TERMS: usize = 24;
/// Upper limit of the numerical y-integral in the joint density; beyond it
/// the three-term expansion is integrated in closed form.
pub const TAIL_START: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PainleveState {
    pub t: f64,
    pub q: f64,
    pub p: f64,
    pub h: f64,
    pub alpha1: f64,
}

impl PainleveState {
    pub fn new(t: f64, q: f64, p: f64, alpha1: f64) -> Self {
        PainleveState {
            t,
            q,
            p,
            h: hamiltonian(t, q, p, alpha1),
            alpha1,
        }
    }

    pub fn q_dot(&self) -> f64 {
        self.p - self.q * self.q - 0.5 * self.t
    }

    pub fn p_dot(&self) -> f64 {
        2.0 * self.q * self.p + self.alpha1
    }

    /// |H − H(q, p, t)|.
    pub fn hamiltonian_defect(&self) -> f64 {
        (self.h - hamiltonian(self.t, self.q, self.p, self.alpha1)).abs()
    }
}

/// H = −½(2q² − p + t)p − α₁q.
pub fn hamiltonian(t: f64, q: f64, p: f64, alpha1: f64) -> f64 {
    -0.5 * (2.0 * q * q - p + t) * p - alpha1 * q
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaxState {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
}

/// Hastings–McLeod data at s: q(s), q′(s) and q′/q, the last one free of underflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HmPoint {
    pub s: f64,
    pub q: f64,
    pub dq: f64,
    pub log_derivative: f64,
}

/// q = ((I − K)^{-1}Ai)(s) and q′ = ((I − K)^{-1}Ai′)(s) − q⟨Ai, (I − K)^{-1}Ai⟩ on (s, ∞).
pub fn hastings_mcleod(s: f64) -> Result<HmPoint> {
    if !s.is_finite() {
        return Err(Error::NonFinite("hastings_mcleod"));
    }
    if s >= HM_AIRY_SWITCH {
        let (ai, aip) = airy_ai(s);
        return Ok(HmPoint {
            s,
            q: ai,
            dq: aip,
            log_derivative: airy_ai_log_derivative(s),
        });
    }
    let rule = map_semi_infinite(HM_ORDER, s, DEFAULT_MAP_SCALE)?;
    let (ai_n, aip_n): (Vec<f64>, Vec<f64>) = rule.nodes.iter().map(|&x| airy_ai(x)).unzip();
    let disc = OperatorDiscretization::new(KernelSpec::Soft, rule)?;
    let res = disc.resolvent()?;
    let (ai, aip) = airy_ai(s);
    let q = res.apply_inverse_at(s, ai, &ai_n)?;
    let pr = res.apply_inverse_at(s, aip, &aip_n)?;
    let u = res.inner(&ai_n, &ai_n)?;
    let dq = pr - q * u;
    if !(q > 0.0) {
        return Err(Error::PrecisionLoss(format!("Hastings–McLeod value {q:e} at s = {s} is not positive")));
    }
    Ok(HmPoint {
        s,
        q,
        dq,
        log_derivative: dq / q,
    })
}

/// Hastings–McLeod as a Hamiltonian trajectory at α₁ = ½ on a grid.
pub fn hm_solution(grid: &ChebGrid) -> Result<Vec<PainleveState>> {
    grid.nodes
        .iter()
        .map(|&t| {
            let hm = hastings_mcleod(t)?;
            let p = hm.dq + hm.q * hm.q + 0.5 * t;
            Ok(PainleveState::new(t, hm.q, p, 0.5))
        })
        .collect()
}

fn composite_rule(a: f64, b: f64, width: f64, points: usize) -> Result<QuadratureRule> {
    let panels = (((b - a) / width).ceil() as usize).max(1);
    let base = gauss_legendre(points)?;
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * points);
    let mut weights = Vec::with_capacity(panels * points);
    for k in 0..panels {
        let r = base.on_interval(a + h * k as f64, a + h * (k + 1) as f64);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// F₂(s) = exp(−∫ₛ^∞ (t − s) q(t)² dt).
pub fn tw2_painleve(s: f64) -> Result<f64> {
    if !(-10.0..=12.0).contains(&s) {
        return invalid(format!("tw2_painleve needs s in [-10, 12], got {s}"));
    }
    let mut acc = 0.0;
    if s < HM_AIRY_SWITCH {
        let rule = composite_rule(s, HM_AIRY_SWITCH, 2.0, 16)?;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let q = hastings_mcleod(t)?.q;
            acc += w * (t - s) * q * q;
        }
    }
    let start = s.max(HM_AIRY_SWITCH);
    let tail = composite_rule(start, start + 12.0, 3.0, 16)?;
    acc += tail.integrate(|t| {
        let (ai, _) = airy_ai(t);
        (t - s) * ai * ai
    });
    Ok((-acc).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoldBranch {
    /// ε = −1, landing on α₁ = 0.
    Minus,
    /// ε = +1, landing on α₁ = 1.
    Plus,
}

impl FoldBranch {
    fn eps(self) -> f64 {
        match self {
            FoldBranch::Minus => -1.0,
            FoldBranch::Plus => 1.0,
        }
    }
}

/// Folds Hastings–McLeod data at s onto α₁ = ½(1 + ε) at t = −2^{1/3}s.
pub fn gambier_inverse(hm: &HmPoint, branch: FoldBranch) -> Result<PainleveState> {
    if !hm.log_derivative.is_finite() {
        return Err(Error::Singular {
            column: 0,
            pivot: hm.q,
        });
    }
    let eps = branch.eps();
    let t = -CBRT2 * hm.s;
    let q = eps * hm.log_derivative / CBRT2;
    let q2 = CBRT2 * hm.q * hm.q;
    let p = match branch {
        FoldBranch::Minus => q2,
        FoldBranch::Plus => -q2 + 2.0 * q * q + t,
    };
    Ok(PainleveState::new(t, q, p, 0.5 * (1.0 + eps)))
}

/// Inverse of [`gambier_inverse`]: recovers q(s), q′(s) from a state at α₁ ∈ {0, 1}.
pub fn gambier_forward(state: &PainleveState) -> Result<HmPoint> {
    let eps = if state.alpha1 == 0.0 {
        -1.0
    } else if state.alpha1 == 1.0 {
        1.0
    } else {
        return invalid(format!("folding needs α₁ ∈ {{0, 1}}, got {}", state.alpha1));
    };
    let s = -state.t / CBRT2;
    let qd = state.q_dot();
    let q2 = -eps * (qd - eps * state.q * state.q - 0.5 * eps * state.t) / CBRT2;
    if q2 < -1e-12 {
        return Err(Error::PrecisionLoss(format!("folded square {q2:e} is negative at t = {}", state.t)));
    }
    let q = q2.max(0.0).sqrt();
    let w = eps * CBRT2 * state.q;
    Ok(HmPoint {
        s,
        q,
        dq: w * q,
        log_derivative: w,
    })
}

fn pole(what: &str, t: f64) -> Error {
    Error::Pole {
        what: what.to_string(),
        t,
    }
}

/// T₂: α₁ ↦ α₁ + 1.
pub fn backlund_t2(state: &PainleveState) -> Result<PainleveState> {
    let PainleveState { t, q, p, h, alpha1 } = *state;
    if p.abs() < 1e-300 || !p.is_finite() {
        return Err(pole("p", t));
    }
    let r = q + alpha1 / p;
    let qn = -r;
    let pn = t - p + 2.0 * r * r;
    Ok(PainleveState {
        t,
        q: qn,
        p: pn,
        h: h - qn,
        alpha1: alpha1 + 1.0,
    })
}

/// T₂⁻¹: α₁ ↦ α₁ − 1.
pub fn backlund_t2_inverse(state: &PainleveState) -> Result<PainleveState> {
    let PainleveState { t, q, p, h, alpha1 } = *state;
    let d = p - 2.0 * q * q - t;
    if d.abs() < 1e-300 || !d.is_finite() {
        return Err(pole("p − 2q² − t", t));
    }
    Ok(PainleveState {
        t,
        q: -q + (alpha1 - 1.0) / d,
        p: -p + 2.0 * q * q + t,
        h: h + q,
        alpha1: alpha1 - 1.0,
    })
}

/// States at α₁ = 0, 1, 2 built from Hastings–McLeod at s = −2^{−1/3}t.
pub fn alpha_chain(t: f64) -> Result<[PainleveState; 3]> {
    let hm = hastings_mcleod(-t / CBRT2)?;
    let s0 = gambier_inverse(&hm, FoldBranch::Minus)?;
    let s1 = backlund_t2(&s0)?;
    let s2 = backlund_t2(&s1)?;
    Ok([s0, s1, s2])
}

pub fn alpha1_2_state(t: f64) -> Result<PainleveState> {
    Ok(alpha_chain(t)?[2])
}

/// The α₁ = 2 trajectory on a grid; a sign change of any intermediate p
/// between neighbouring points is reported as a pole.
pub fn alpha1_2_solution(grid: &ChebGrid) -> Result<Vec<PainleveState>> {
    let chains: Vec<[PainleveState; 3]> = grid.nodes.iter().map(|&t| alpha_chain(t)).collect::<Result<_>>()?;
    for w in chains.windows(2) {
        for level in 0..2 {
            let (a, b) = (w[0][level], w[1][level]);
            if a.p.signum() != b.p.signum() && a.p != 0.0 {
                return Err(pole(&format!("p at α₁ = {level}"), 0.5 * (a.t + b.t)));
            }
        }
    }
    Ok(chains.into_iter().map(|c| c[2]).collect())
}

/// σ_II(τ) = −2^{1/3} H(t; α₁ = 2) at t = −2^{1/3}τ.
pub fn sigma_ii(tau: f64) -> Result<f64> {
    Ok(-CBRT2 * alpha1_2_state(-CBRT2 * tau)?.h)
}

/// (d/dτ) log K^soft(τ, τ) = −Ai²/(Ai′² − τAi²).
pub fn log_density_derivative(tau: f64) -> f64 {
    let a = airy_scaled(tau);
    -a.ai * a.ai / (a.ai_prime * a.ai_prime - tau * a.ai * a.ai)
}

/// Density of the largest eigenvalue from σ_II:
/// ρ(s) exp(−∫ₛ^∞ (σ_II − (log ρ)′)).
pub fn p1_soft(s: f64) -> Result<f64> {
    if !(-8.0..=12.0).contains(&s) {
        return invalid(format!("p1_soft needs s in [-8, 12], got {s}"));
    }
    let end = 14.0;
    let rule = composite_rule(s, end, 1.5, 16)?;
    let mut acc = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * (sigma_ii(t)? - log_density_derivative(t));
    }
    Ok(KernelSpec::Soft.diagonal(s) * (-acc).exp())
}

/// Coefficients (U_m, V_m), m < m_max, of U = Σ U_m x^{m+1}, V = Σ V_m x^{m+1}.
pub fn lax_expansion(q: f64, p: f64, t: f64, m_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if p.abs() <= 1e-8 {
        return invalid(format!("Lax expansion needs |p| > 1e-8, got {p:e}"));
    }
    if m_max == 0 {
        return invalid("Lax expansion needs at least one term");
    }
    let e = 2.0 * q * q - p + t;
    let mut u = vec![2.0];
    let mut v = vec![0.0];
    for m in 1..m_max {
        let mf = m as f64;
        let um2 = if m >= 2 { u[m - 2] } else { 0.0 };
        let un = ((p * p * e + (4.0 - 2.0 * mf) * q * p - 4.0 * mf) * u[m - 1] + 2.0 * p * (p * q - mf) * v[m - 1]
            - p * p * um2)
            / (2.0 * mf * (mf + 2.0) * p);
        let vn = ((p * p * e + 8.0 * q * p + 8.0) * u[m - 1] + 2.0 * p * (p * q + 2.0) * v[m - 1] - p * p * um2)
            / (2.0 * (mf + 2.0) * p * p);
        u.push(un);
        v.push(vn);
    }
    Ok((u, v))
}

/// Σ c_m x^{m+1}.
fn eval_series(c: &[f64], x: f64) -> f64 {
    x * c.iter().rev().fold(0.0, |acc, &cm| acc * x + cm)
}

/// Right-hand side of the spectral equation at fixed t, with g = q + 2/p.
pub fn lax_spectral_rhs(state: &PainleveState, x: f64, u: f64, v: f64) -> (f64, f64) {
    let PainleveState { t, q, p, .. } = *state;
    let g = q + 2.0 / p;
    let du = (-g + 1.0 / x) * u + (-1.0 + p / x) * v;
    let dv = (-0.5 * x + 0.5 * (t - p) + g * g) * u + (g - 1.0 / x) * v;
    (du, dv)
}

/// Right-hand side of the deformation equation.
pub fn lax_deform_rhs(state: &PainleveState, x: f64, u: f64, v: f64) -> (f64, f64) {
    let g = state.q + 2.0 / state.p;
    (v, 0.5 * x * u - 2.0 * g * v)
}

/// (U, V) at x on the α₁ = 2 trajectory, from the series near 0 and
/// adaptive integration beyond the seed point.
pub fn integrate_lax_state(state: &PainleveState, x_target: f64) -> Result<LaxState> {
    if state.alpha1 != 2.0 {
        return invalid(format!("the scaled Lax pair needs α₁ = 2, got {}", state.alpha1));
    }
    if !(x_target.is_finite() && x_target != 0.0) {
        return invalid(format!("Lax target must be finite and nonzero, got {x_target}"));
    }
    let (cu, cv) = lax_expansion(state.q, state.p, state.t, LAX_TERMS)?;
    let x0 = if x_target.abs() <= LAX_SEED { x_target } else { LAX_SEED * x_target.signum() };
    let u0 = eval_series(&cu, x0);
    let v0 = eval_series(&cv, x0);
    let y = dopri5(
        |x, y: &[f64; 2]| {
            let (du, dv) = lax_spectral_rhs(state, x, y[0], y[1]);
            [du, dv]
        },
        x0,
        [u0, v0],
        x_target,
        &OdeOptions::default(),
    )?;
    Ok(LaxState {
        x: x_target,
        t: state.t,
        u: y[0],
        v: y[1],
    })
}

pub fn integrate_lax(t: f64, x_target: f64) -> Result<LaxState> {
    integrate_lax_state(&alpha1_2_state(t)?, x_target)
}

/// U ∂ₓV − V ∂ₓU at (x; t).
pub fn lax_wronskian(t: f64, x: f64) -> Result<f64> {
    let state = alpha1_2_state(t)?;
    let l = integrate_lax_state(&state, x)?;
    let (du, dv) = lax_spectral_rhs(&state, x, l.u, l.v);
    Ok(l.u * dv - l.v * du)
}

/// (2q + 4/p)(−y) − √(2y) − 5/(2y) on the α₁ = 2 trajectory.
pub fn ss_integrand(y: f64) -> Result<f64> {
    let st = alpha1_2_state(-y)?;
    Ok(2.0 * st.q + 4.0 / st.p - (2.0 * y).sqrt() - 2.5 / y)
}

/// ∫_Y^∞ of the three-term large-y expansion of [`ss_integrand`]:
/// −(77√2/16)y^{−5/2} + (555/16)y^{−4} − (83617√2/512)y^{−11/2}.
pub fn ss_tail(y: f64) -> f64 {
    -(77.0 * SQRT_2 / 16.0) * (2.0 / 3.0) * y.powf(-1.5) + (555.0 / 16.0) / 3.0 * y.powi(-3)
        - (83617.0 * SQRT_2 / 512.0) * (2.0 / 9.0) * y.powf(-4.5)
}

/// ∫_{2^{1/3}t}^∞ of [`ss_integrand`].
pub fn ss_exponent(t: f64) -> Result<f64> {
    let a = CBRT2 * t;
    if a >= TAIL_START {
        return Ok(ss_tail(a));
    }
    let rule = composite_rule(a, TAIL_START, 2.0, 16)?;
    let mut acc = 0.0;
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * ss_integrand(y)?;
    }
    Ok(acc + ss_tail(TAIL_START))
}

/// Joint density of the two largest eigenvalues at (t, t − x) by the
/// Painlevé route. Defined for t > 0.
pub fn p2_soft_painleve(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return invalid(format!("the Painlevé joint density needs t > 0, got {t}"));
    }
    if !(x > 0.0 && x.is_finite()) {
        return invalid(format!("the Painlevé joint density needs x > 0, got {x}"));
    }
    let w = lax_wronskian(-CBRT2 * t, -CBRT2 * x)?;
    let pref = t.powf(-2.5) * (-4.0 / 3.0 * t.powf(1.5)).exp();
    Ok(C0 * p1_soft(t)? * pref * ss_exponent(t)?.exp() * w)
}

/// The Airy representation U(x; t) ≈ −t Ai(2^{−1/3}(x − t)) / Ai(−2^{−1/3}t).
pub fn lax_airy_representation(t: f64, x: f64) -> f64 {
    -t * airy_ai((x - t) / CBRT2).0 / airy_ai(-t / CBRT2).0
}
