//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! with the measured error, its bound and the wall time.

use rmt_edge::fredholm::{fredholm_minor_density, KernelSpec};
use rmt_edge::hardedge::*;
use rmt_edge::painleve2::{alpha1_2_solution, alpha1_2_state, p2_soft_painleve, tw2_painleve};
use rmt_edge::quadrature::{cheb_differentiate, cheb_grid};
use rmt_edge::sampler::{empirical_vs_theory, mean, SampleBatch, SamplingMethod};
use rmt_edge::softedge::*;
use rmt_edge::Parallelism;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn law() -> &'static SpacingLaw {
    static LAW: OnceLock<SpacingLaw> = OnceLock::new();
    LAW.get_or_init(|| SpacingLaw::new(&SoftEdgeConfig::with_order(64), 10.0, &SpacingOptions::default()).unwrap())
}

fn verdict(id: u32, what: &str, error: f64, bound: f64, elapsed: Duration, budget: Duration) {
    let pass = error <= bound && elapsed <= budget;
    println!(
        "criterion {id:>2} {}: {what}; error {error:.3e} (bound {bound:.1e}); {:.1} s (budget {} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(pass, "criterion {id} failed");
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

#[test]
fn criterion_01_spacing_table() {
    let start = Instant::now();
    let rows = [
        (0.50, 0.113_346_13, 0.019_650_02),
        (1.00, 0.339_681_57, 0.132_706_86),
        (1.90, 0.466_289_29, 0.536_136_99),
        (2.95, 0.189_221_58, 0.888_182_69),
        (4.00, 0.031_411_05, 0.986_353_72),
        (5.50, 0.000_737_92, 0.999_758_87),
    ];
    let table = law().table(0.05).unwrap();
    let mut err: f64 = 0.0;
    for (s, a, g) in rows {
        let k = table.index_of(s).unwrap();
        err = err.max((table.density[k] - a).abs()).max((table.cdf[k] - g).abs());
    }
    verdict(1, "A(s), G(s) at six tabulated s, order 64", err, 1e-6, start.elapsed(), minutes(30));
}

#[test]
fn criterion_02_moments() {
    let start = Instant::now();
    let m = MomentSummary::from_raw(&law().raw_moments(4).unwrap()).unwrap();
    let scaled = [
        (m.mean - 1.904_350_49).abs() / 5e-6,
        (m.variance - 0.683_252_06).abs() / 5e-6,
        (m.skewness - 0.562_292).abs() / 5e-4,
        (m.excess_kurtosis - 0.270_09).abs() / 5e-3,
    ];
    let worst = scaled.iter().cloned().fold(0.0, f64::max);
    verdict(2, "spacing moments, error as a fraction of each tolerance", worst, 1.0, start.elapsed(), minutes(30));
}

#[test]
fn criterion_03_correlation() {
    let start = Instant::now();
    let fast = largest_two_correlation_with(CorrelationMode::Fast, Parallelism::default()).unwrap();
    verdict(3, "rho, fast mode", (fast.rho - 0.505_647_231_5).abs(), 1e-4, start.elapsed(), minutes(10));
    let start = Instant::now();
    let full = largest_two_correlation_with(CorrelationMode::Full, Parallelism::default()).unwrap();
    verdict(3, "rho, full mode", (full.rho - 0.505_647_231_59).abs(), 5e-7, start.elapsed(), minutes(180));
}

#[test]
fn criterion_04_two_routes() {
    let start = Instant::now();
    let err = [-4.0, -2.0, 0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&s| (tw2_gap(s).unwrap() - tw2_painleve(s).unwrap()).abs())
        .fold(0.0, f64::max);
    verdict(4, "Fredholm against Painlevé F2", err, 1e-7, start.elapsed(), minutes(2));
}

#[test]
fn criterion_05_recurrence_exactness() {
    let start = Instant::now();
    let mut err: f64 = 0.0;
    for k in 0..=58 {
        let s = 1.0 + 0.5 * k as f64;
        let (q0, p0) = seeds_a0(s).unwrap();
        let (q1, p1) = okamoto_recurrence_step(q0, p0, 0.25 * s, 0.0).unwrap();
        let c = closed_forms_a1(s).unwrap();
        err = err.max((q1 / c.q - 1.0).abs()).max((p1 / c.p - 1.0).abs());
    }
    verdict(5, "Okamoto step against a = 1 closed forms on [1, 30]", err, 1e-10, start.elapsed(), Duration::from_secs(10));
    let start = Instant::now();
    let (u0, v0) = iso_a0(1.0).unwrap();
    let (u1, v1) = iso_recurrence_step(u0, v0, iso_rho_a0(4.0).unwrap(), 4.0, 1.0).unwrap();
    let (uc, vc) = iso_a1(1.0, 4.0).unwrap();
    let err = (u1 / uc - 1.0).abs().max((v1 / vc - 1.0).abs());
    verdict(5, "isomonodromic step at (z, s) = (1, 4)", err, 1e-9, start.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_06_a0_moments() {
    let start = Instant::now();
    let err = (1..=6)
        .map(|k| (a0_moment_quadrature(k).unwrap() / a0_moment_closed(k).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(6, "A0 moments 1..6, relative", err, 1e-8, start.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_07_sigma_forms() {
    let start = Instant::now();
    let grid = cheb_grid(40, 0.5, 30.0).unwrap();
    let nu = grid.sample(|s| closed_forms_a1(s).unwrap().nu);
    let d1 = cheb_differentiate(&grid, &nu).unwrap();
    let d2 = cheb_differentiate(&grid, &d1).unwrap();
    let hard = (3..grid.len() - 3)
        .map(|i| {
            let (s, a) = (grid.nodes[i], 1.0);
            (s * s * d2[i] * d2[i] - (a + 2.0f64).powi(2) * d1[i] * d1[i]
                + d1[i] * (4.0 * d1[i] - 1.0) * (s * d1[i] - nu[i])
                + 0.5 * a * (a + 2.0) * d1[i]
                - a * a / 16.0)
                .abs()
        })
        .fold(0.0, f64::max);
    verdict(7, "nu_1 in the Painlevé III sigma form", hard, 1e-6, start.elapsed(), minutes(1));
    let start = Instant::now();
    let grid = cheb_grid(40, -8.0, 4.0).unwrap();
    let states = alpha1_2_solution(&grid).unwrap();
    let h: Vec<f64> = states.iter().map(|s| s.h).collect();
    let dh = cheb_differentiate(&grid, &h).unwrap();
    let ddh = cheb_differentiate(&grid, &dh).unwrap();
    let soft = (3..grid.len() - 3)
        .map(|i| {
            let t = grid.nodes[i];
            (ddh[i] * ddh[i] + 4.0 * dh[i].powi(3) + 2.0 * dh[i] * (t * dh[i] - h[i]) - 0.25 * 4.0).abs()
        })
        .fold(0.0, f64::max);
    verdict(7, "alpha_1 = 2 Hamiltonian in the Painlevé II sigma form", soft, 1e-6, start.elapsed(), minutes(1));
}

#[test]
fn criterion_08_hard_to_soft() {
    let start = Instant::now();
    let mut worst_ratio: f64 = 0.0;
    let mut monotone = true;
    for tau in [0.5, 1.0, 2.0] {
        let r = hard_to_soft_check(&[64, 128, 256], tau).unwrap();
        monotone &= r.nu_monotone() && r.c_monotone();
        worst_ratio = worst_ratio
            .max(r.rows[2].delta_nu / r.rows[0].delta_nu)
            .max(r.rows[2].delta_c / r.rows[0].delta_c);
    }
    let measured = if monotone { worst_ratio } else { f64::INFINITY };
    verdict(8, "delta(a=256)/delta(a=64), monotone in a", measured, 0.5, start.elapsed(), minutes(5));
}

#[test]
fn criterion_09_painleve_joint_density() {
    let start = Instant::now();
    let err = [(1.0, 1.0), (1.5, 0.8), (2.0, 1.5)]
        .iter()
        .map(|&(t, x)| {
            let p = p2_soft_painleve(t, x).unwrap();
            let m = fredholm_minor_density(KernelSpec::Soft, t, t - x, 64, 10.0).unwrap();
            (p / m - 1.0).abs()
        })
        .fold(0.0, f64::max);
    verdict(9, "Painlevé joint density against the Fredholm minor", err, 1e-3, start.elapsed(), minutes(10));
}

#[test]
fn criterion_10_monte_carlo() {
    let table = law().table(0.05).unwrap();
    let start = Instant::now();
    let batch = SampleBatch::generate(1000, 10_000, 2024, SamplingMethod::Tridiagonal, Parallelism::default()).unwrap();
    let report = empirical_vs_theory(&batch, &table).unwrap();
    verdict(10, "KS distance, N = 1000, 10^4 draws", report.ks_distance, 0.03, start.elapsed(), minutes(60));
    let z = (report.spacing_mean - 1.904_35).abs() / report.spacing_std_error;
    println!("              spacing mean {:.4} ({z:.2} standard errors); mean X1 {:.4}", report.spacing_mean, mean(&batch.largest));
    assert!(z < 3.0);
    assert!((mean(&batch.largest) - TW2_MEAN).abs() < 0.05);
}

#[test]
fn criterion_11_large_y_asymptotics() {
    let start = Instant::now();
    let y = 8.0f64;
    let s = alpha1_2_state(-y).unwrap();
    let rel = |a: f64, b: f64| (a / b - 1.0).abs();
    let err = rel(s.h, (2.0 * y).sqrt() + 1.0 / y)
        .max(rel(s.p, (2.0 / y).sqrt() - 2.0 / (y * y)))
        .max(rel(s.q, -(y / 2.0).sqrt() - 3.0 / (4.0 * y)));
    verdict(11, "H, p, q two-term forms at y = 8", err, 1e-2, start.elapsed(), minutes(1));
}
