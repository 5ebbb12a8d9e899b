use proptest::prelude::*;
use rmt_edge::fredholm::{fredholm_minor_density, KernelSpec};
use rmt_edge::ode::{dopri5, OdeOptions};
use rmt_edge::painleve2::*;
use rmt_edge::quadrature::{cheb_differentiate, cheb_grid, ChebGrid};
use rmt_edge::softedge::tw2_gap;
use rmt_edge::specfun::{airy_ai, airy_ai_log_derivative};

const CBRT2: f64 = 1.259_921_049_894_873_2;

fn interior(n: usize) -> std::ops::Range<usize> {
    4..n - 4
}

/// Max residual of q̇ = p − q² − t/2 and ṗ = 2qp + α₁ along a trajectory.
fn hamilton_residual(grid: &ChebGrid, states: &[PainleveState]) -> f64 {
    let q: Vec<f64> = states.iter().map(|s| s.q).collect();
    let p: Vec<f64> = states.iter().map(|s| s.p).collect();
    let dq = cheb_differentiate(grid, &q).unwrap();
    let dp = cheb_differentiate(grid, &p).unwrap();
    interior(grid.len())
        .map(|i| {
            let s = &states[i];
            ((dq[i] - s.q_dot()).abs()).max((dp[i] - s.p_dot()).abs())
        })
        .fold(0.0, f64::max)
}

/// Max residual of Ḧ² + 4Ḣ³ + 2Ḣ(tḢ − H) − α₁²/4 along a trajectory.
fn sigma_form_residual(grid: &ChebGrid, states: &[PainleveState]) -> f64 {
    let h: Vec<f64> = states.iter().map(|s| s.h).collect();
    let dh = cheb_differentiate(grid, &h).unwrap();
    let ddh = cheb_differentiate(grid, &dh).unwrap();
    interior(grid.len())
        .map(|i| {
            let (t, a) = (states[i].t, states[i].alpha1);
            (ddh[i] * ddh[i] + 4.0 * dh[i].powi(3) + 2.0 * dh[i] * (t * dh[i] - h[i]) - 0.25 * a * a).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn hastings_mcleod_boundary_and_shooting() {
    let q6 = hastings_mcleod(6.0).unwrap().q;
    assert!((q6 / airy_ai(6.0).0 - 1.0).abs() < 1e-6);
    // q″ = sq + 2q³ integrated down from Airy data at s = 8.
    let (a8, ap8) = airy_ai(8.0);
    let opts = OdeOptions {
        rtol: 1e-13,
        atol: 1e-20,
        ..OdeOptions::default()
    };
    let y = dopri5(|s, y: &[f64; 2]| [y[1], s * y[0] + 2.0 * y[0].powi(3)], 8.0, [a8, ap8], 0.0, &opts).unwrap();
    let hm = hastings_mcleod(0.0).unwrap();
    assert!((hm.q - y[0]).abs() < 1e-8, "{} vs {}", hm.q, y[0]);
    assert!((hm.dq - y[1]).abs() < 1e-8);
}

#[test]
fn hastings_mcleod_square_is_log_determinant_curvature() {
    let h = 0.01;
    for &s in &[-3.0, -1.0, 0.5, 2.0] {
        let l = |x: f64| tw2_gap(x).unwrap().ln();
        let d2 = (-l(s + 2.0 * h) + 16.0 * l(s + h) - 30.0 * l(s) + 16.0 * l(s - h) - l(s - 2.0 * h)) / (12.0 * h * h);
        let q = hastings_mcleod(s).unwrap().q;
        assert!((q * q + d2).abs() < 1e-7, "s={s}");
    }
}

#[test]
fn hm_trajectory_satisfies_hamilton_and_sigma_form() {
    let grid = cheb_grid(40, -8.0, 4.0).unwrap();
    let states = hm_solution(&grid).unwrap();
    assert!(states.iter().all(|s| s.hamiltonian_defect() < 1e-10));
    assert!(hamilton_residual(&grid, &states) < 1e-6);
    assert!(sigma_form_residual(&grid, &states) < 1e-6);
    let h: Vec<f64> = states.iter().map(|s| s.h).collect();
    let dh = cheb_differentiate(&grid, &h).unwrap();
    let ddh = cheb_differentiate(&grid, &dh).unwrap();
    for i in interior(grid.len()) {
        let s = &states[i];
        assert!((dh[i] + 0.5 * s.p).abs() < 1e-6);
        assert!((ddh[i] + s.q * s.p + 0.5 * s.alpha1).abs() < 1e-6);
    }
}

#[test]
fn two_routes_to_tracy_widom() {
    for &s in &[-4.0, -2.0, 0.0, 1.0, 2.0, 3.0] {
        assert!((tw2_painleve(s).unwrap() - tw2_gap(s).unwrap()).abs() < 1e-7, "s={s}");
    }
    assert!((tw2_painleve(8.0).unwrap() - 1.0).abs() < 1e-10);
    assert!(tw2_painleve(-11.0).is_err());
}

#[test]
fn folding_round_trip_and_airy_limit() {
    for &s in &[-3.0, 0.0, 2.5, 7.0] {
        let hm = hastings_mcleod(s).unwrap();
        for branch in [FoldBranch::Minus, FoldBranch::Plus] {
            let state = gambier_inverse(&hm, branch).unwrap();
            let back = gambier_forward(&state).unwrap();
            assert!((back.q * back.q - hm.q * hm.q).abs() < 1e-12, "s={s}");
            assert!((back.dq - hm.dq).abs() < 1e-8);
            let again = gambier_inverse(&back, branch).unwrap();
            assert!((again.q - state.q).abs() < 1e-8 && (again.p - state.p).abs() < 1e-8, "s={s}");
        }
    }
    let t = -6.0;
    let z = -t / CBRT2;
    let folded = gambier_inverse(&hastings_mcleod(z).unwrap(), FoldBranch::Minus).unwrap();
    let want = -airy_ai_log_derivative(z) / CBRT2;
    assert!((folded.q / want - 1.0).abs() < 1e-3);
    assert_eq!(folded.alpha1, 0.0);
}

#[test]
fn folded_branches_satisfy_their_equations() {
    let grid = cheb_grid(36, -5.0, 5.0).unwrap();
    for branch in [FoldBranch::Minus, FoldBranch::Plus] {
        let states: Vec<PainleveState> = grid
            .nodes
            .iter()
            .map(|&t| gambier_inverse(&hastings_mcleod(-t / CBRT2).unwrap(), branch).unwrap())
            .collect();
        assert!(hamilton_residual(&grid, &states) < 1e-6, "{branch:?}");
    }
}

#[test]
fn schlesinger_steps() {
    let grid = cheb_grid(36, -5.0, 5.0).unwrap();
    let chains: Vec<[PainleveState; 3]> = grid.nodes.iter().map(|&t| alpha_chain(t).unwrap()).collect();
    for c in &chains {
        let back = backlund_t2_inverse(&c[1]).unwrap();
        for (a, b) in [(back.q, c[0].q), (back.p, c[0].p), (back.h, c[0].h)] {
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        }
        assert_eq!(back.alpha1, c[0].alpha1);
        for k in 1..3 {
            assert!((c[k].h - (c[k - 1].h - c[k].q)).abs() < 1e-10);
            assert!(c[k].hamiltonian_defect() < 1e-10);
        }
        let via_p = c[0].h + 1.0 / (2.0 * c[0].q * c[0].q - c[0].p + c[0].t);
        assert!((c[2].h - via_p).abs() < 1e-10 * via_p.abs().max(1.0));
        // a-dPI centred at α₁ = 2.
        let c3 = backlund_t2(&c[2]).unwrap();
        let t = c[2].t;
        let lhs = 2.0 / (c[2].q + c3.q) + 1.0 / (c[1].q + c[2].q);
        assert!((lhs + 2.0 * c[2].q * c[2].q + t).abs() < 1e-8, "t={t}");
    }
    for level in 1..3 {
        let states: Vec<PainleveState> = chains.iter().map(|c| c[level]).collect();
        assert!(hamilton_residual(&grid, &states) < 1e-6, "α₁ = {level}");
    }
}

#[test]
fn alpha_two_trajectory() {
    let grid = cheb_grid(40, -8.0, 4.0).unwrap();
    let states = alpha1_2_solution(&grid).unwrap();
    assert!(states.iter().all(|s| s.alpha1 == 2.0));
    assert!(sigma_form_residual(&grid, &states) < 1e-6);
    let y = 8.0f64;
    let s = alpha1_2_state(-y).unwrap();
    let rel = |a: f64, b: f64| (a / b - 1.0).abs();
    assert!(rel(s.h, (2.0 * y).sqrt() + 1.0 / y) < 1e-2);
    assert!(rel(s.p, (2.0 / y).sqrt() - 2.0 / (y * y)) < 1e-2);
    assert!(rel(s.q, -(y / 2.0).sqrt() - 0.75 / y) < 1e-2);
}

#[test]
fn backlund_reports_poles() {
    let s = PainleveState::new(1.0, 0.3, 0.0, 1.0);
    assert!(matches!(backlund_t2(&s), Err(rmt_edge::Error::Pole { .. })));
    let d = PainleveState::new(1.0, 0.0, 1.0, 1.0);
    assert!(matches!(backlund_t2_inverse(&d), Err(rmt_edge::Error::Pole { .. })));
}

#[test]
fn sigma_ii_boundary_and_largest_density() {
    let ratio = sigma_ii(5.0).unwrap() / log_density_derivative(5.0);
    assert!((ratio - 1.0).abs() < 1e-3);
    let h = 1e-4;
    for k in 0..=10 {
        let s = -2.0 + 0.5 * k as f64;
        let d = (tw2_gap(s + h).unwrap() - tw2_gap(s - h).unwrap()) / (2.0 * h);
        assert!((p1_soft(s).unwrap() - d).abs() < 1e-5, "s={s}");
    }
}

#[test]
fn lax_series_first_coefficients() {
    let (q, p, t) = (-0.4, 0.7, 1.3);
    let (u, v) = lax_expansion(q, p, t, 6).unwrap();
    let e = 2.0 * q * q - p + t;
    assert_eq!((u[0], v[0]), (2.0, 0.0));
    assert!((u[1] - (p * p * e + 2.0 * q * p - 4.0) / (3.0 * p)).abs() < 1e-14);
    assert!((v[1] - (p * p * e + 8.0 * q * p + 8.0) / (3.0 * p * p)).abs() < 1e-14);
    assert!(lax_expansion(q, 1e-9, t, 6).is_err());
}

#[test]
fn lax_series_converges() {
    let x: f64 = 0.1;
    let st = alpha1_2_state(0.0).unwrap();
    let (u, v) = lax_expansion(st.q, st.p, st.t, 24).unwrap();
    for c in [&u, &v] {
        for m in 10..23 {
            let r = (c[m + 1] / c[m]).abs() * x;
            assert!(r < 0.5, "m={m}: {r}");
        }
    }
    // Elsewhere single coefficients can nearly vanish; blocks of three still shrink.
    for t in [-3.0, -1.0, 1.0, 2.0] {
        let st = alpha1_2_state(t).unwrap();
        let (u, v) = lax_expansion(st.q, st.p, st.t, 24).unwrap();
        for c in [&u, &v] {
            let block = |m: usize| (m..m + 3).map(|k| c[k].abs() * x.powi(k as i32)).fold(0.0, f64::max);
            for m in (10..19).step_by(3) {
                assert!(block(m + 3) < 0.5 * block(m), "t={t} m={m}");
            }
        }
    }
}

#[test]
fn lax_solution_near_origin_and_deformation() {
    let t = -1.5;
    for &x in &[1e-4, -1e-4] {
        let l = integrate_lax(t, x).unwrap();
        assert!((l.u / x - 2.0).abs() < 1e-3 && (l.v / x).abs() < 1e-3);
    }
    let h = 1e-3;
    for &x in &[-2.0, 0.7, 3.0] {
        let st = alpha1_2_state(t).unwrap();
        let mid = integrate_lax_state(&st, x).unwrap();
        let plus = integrate_lax(t + h, x).unwrap();
        let minus = integrate_lax(t - h, x).unwrap();
        let (du, dv) = lax_deform_rhs(&st, x, mid.u, mid.v);
        assert!(((plus.u - minus.u) / (2.0 * h) - du).abs() < 1e-5, "x={x}");
        assert!(((plus.v - minus.v) / (2.0 * h) - dv).abs() < 1e-5, "x={x}");
    }
}

#[test]
fn lax_matches_airy_representation() {
    let u = integrate_lax(-6.0, 4.0).unwrap().u;
    let rep = lax_airy_representation(-6.0, 4.0);
    assert!((u / rep - 1.0).abs() < 5e-2, "{u} vs {rep}");
}

#[test]
fn y_integrand_tail_matches_expansion() {
    // The remainder after three terms decays like y^{-7} with a stable coefficient.
    let scaled: Vec<f64> = [20.0f64, 25.0, 30.0]
        .iter()
        .map(|&y| {
            let g = ss_integrand(y).unwrap();
            let three = -(77.0 * 2f64.sqrt() / 16.0) * y.powf(-2.5) + (555.0 / 16.0) * y.powi(-4)
                - (83617.0 * 2f64.sqrt() / 512.0) * y.powf(-5.5);
            (g - three) * y.powi(7)
        })
        .collect();
    for w in scaled.windows(2) {
        assert!((w[1] / w[0] - 1.0).abs() < 0.1, "{scaled:?}");
    }
    assert!(scaled[2] > 0.0 && scaled[2] < 3000.0);
    // So the neglected part of the closed-form tail is below 1e-6.
    assert!(scaled[2] / (6.0 * TAIL_START.powi(6)) < 1e-6);
}

#[test]
fn painleve_density_matches_fredholm_minor() {
    for &(t, x) in &[(1.0, 1.0), (1.5, 0.8), (2.0, 1.5)] {
        let painleve = p2_soft_painleve(t, x).unwrap();
        let minor = fredholm_minor_density(KernelSpec::Soft, t, t - x, 64, 10.0).unwrap();
        assert!((painleve / minor - 1.0).abs() < 1e-3, "({t},{x}): {painleve} vs {minor}");
    }
    assert!(p2_soft_painleve(0.0, 1.0).is_err() && p2_soft_painleve(1.0, 0.0).is_err());
}

#[test]
fn painleve_density_limits() {
    let near = p2_soft_painleve(1.0, 1e-3).unwrap();
    let apart = p2_soft_painleve(1.0, 1.0).unwrap();
    assert!(near >= 0.0 && near < 1e-6 * apart);
    let k = |s: f64| KernelSpec::Soft.diagonal(s);
    let ratio = p2_soft_painleve(4.0, 8.0).unwrap() / (k(4.0) * k(-4.0));
    assert!((ratio - 1.0).abs() < 0.3, "{ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lax_series_solves_spectral_equation(q in -2.0f64..2.0, p in 0.2f64..3.0, t in -3.0f64..3.0, x in 0.01f64..0.04) {
        let (u, v) = lax_expansion(q, p, t, 24).unwrap();
        let sum = |c: &[f64]| c.iter().enumerate().fold(0.0, |a, (m, &cm)| a + cm * x.powi(m as i32 + 1));
        let der = |c: &[f64]| c.iter().enumerate().fold(0.0, |a, (m, &cm)| a + (m as f64 + 1.0) * cm * x.powi(m as i32));
        let st = PainleveState::new(t, q, p, 2.0);
        let (du, dv) = lax_spectral_rhs(&st, x, sum(&u), sum(&v));
        let scale = 1.0 + du.abs() + dv.abs();
        prop_assert!((der(&u) - du).abs() < 1e-12 * scale);
        prop_assert!((der(&v) - dv).abs() < 1e-12 * scale);
    }

    #[test]
    fn backlund_steps_invert(q in -2.0f64..2.0, p in 0.3f64..3.0, t in -4.0f64..4.0, a in 0.0f64..3.0) {
        let s = PainleveState::new(t, q, p, a);
        let back = backlund_t2_inverse(&backlund_t2(&s).unwrap()).unwrap();
        prop_assert!((back.q - q).abs() < 1e-9 * (1.0 + q.abs() + 1.0 / p));
        prop_assert!((back.p - p).abs() < 1e-9 * (1.0 + p.abs() + (q + a / p).powi(2)));
        prop_assert!(back.hamiltonian_defect() < 1e-8);
    }
}
