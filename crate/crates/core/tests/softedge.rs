use proptest::prelude::*;
use rmt_edge::fredholm::{KernelSpec, OperatorDiscretization};
use rmt_edge::quadrature::{gauss_legendre, map_semi_infinite};
use rmt_edge::softedge::*;
use rmt_edge::Parallelism;
use std::sync::OnceLock;

fn cfg() -> SoftEdgeConfig {
    SoftEdgeConfig::default()
}

fn law() -> &'static SpacingLaw {
    static LAW: OnceLock<SpacingLaw> = OnceLock::new();
    LAW.get_or_init(|| SpacingLaw::new(&cfg(), 10.0, &SpacingOptions::default()).unwrap())
}

fn table() -> &'static DistributionTable {
    static TABLE: OnceLock<DistributionTable> = OnceLock::new();
    TABLE.get_or_init(|| law().table(0.05).unwrap())
}

/// F(x, y) = F₂(y) + F₂(y) ∫_y^x R(ξ, ξ) dξ with R the resolvent kernel on
/// (y, ∞): the one-point Janossy density integrated, no contour involved.
fn janossy_joint_cdf(x: f64, y: f64) -> f64 {
    let disc = OperatorDiscretization::new(KernelSpec::Soft, map_semi_infinite(64, y, 10.0).unwrap()).unwrap();
    let res = disc.resolvent().unwrap();
    let rule = gauss_legendre(48).unwrap().on_interval(y, x);
    res.det() * (1.0 + rule.integrate(|t| res.kernel(t, t).unwrap()))
}

#[test]
fn gap_examples() {
    assert!((tw2_gap(8.0).unwrap() - 1.0).abs() < 1e-9);
    let left = tw2_gap(-8.0).unwrap();
    assert!(left > 0.0 && left < 1e-4, "{left}");
    // Independent tan-mapped Nyström values.
    for &(s, want) in &[(-3.0, 0.080_319_552_939_331_06), (0.0, 0.969_372_828_355_26), (2.0, 0.999_887_553_698_309_1)] {
        assert!((tw2_gap(s).unwrap() - want).abs() < 1e-11);
    }
}

#[test]
fn marginal_moments_match_tracy_widom() {
    let m = marginal_moments(&cfg()).unwrap();
    assert!((m.mean_first - TW2_MEAN).abs() < 1e-9, "{m:?}");
    assert!((m.var_first - TW2_VARIANCE).abs() < 1e-9, "{m:?}");
    assert!(m.mean_second < m.mean_first && m.var_second < m.var_first);
}

#[test]
fn joint_cdf_case_split_and_limits() {
    let c = cfg();
    for &(x, y) in &[(-2.0, -1.0), (0.5, 0.5), (1.0, 4.0)] {
        assert_eq!(c.joint_cdf(x, y).unwrap(), c.gap(x).unwrap());
    }
    for &x in &[-2.0, 0.0, 1.5] {
        let near = c.joint_cdf(x, x - 1e-7).unwrap();
        assert!((near - c.gap(x).unwrap()).abs() < 1e-6, "x={x}");
        assert!(c.joint_cdf(x, -8.0).unwrap().abs() < 1e-6);
    }
}

#[test]
fn joint_cdf_matches_janossy_integration() {
    for &(x, y) in &[(0.0, -2.0), (3.0, -4.0), (-1.0, -1.5), (1.0, 0.0)] {
        let got = joint_cdf(x, y).unwrap();
        let want = janossy_joint_cdf(x, y);
        assert!((got - want).abs() < 1e-10, "({x},{y}): {got} vs {want}");
    }
}

#[test]
fn joint_cdf_monotone_on_probe_grid() {
    let c = cfg();
    let pts = [-4.0, -2.5, -1.0, 0.5, 2.0];
    let f: Vec<Vec<f64>> = pts.iter().map(|&x| pts.iter().map(|&y| c.joint_cdf(x, y).unwrap()).collect()).collect();
    for i in 0..5 {
        for j in 0..5 {
            if i + 1 < 5 {
                assert!(f[i + 1][j] >= f[i][j] - 1e-12);
            }
            if j + 1 < 5 {
                assert!(f[i][j + 1] >= f[i][j] - 1e-12);
            }
        }
    }
}

#[test]
fn density_is_mixed_partial_of_cdf() {
    let c = cfg();
    let (x, y, h) = (1.0, 0.0, 1e-3);
    let f = |a: f64, b: f64| c.joint_cdf(a, b).unwrap();
    let mixed = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
    let p = c.joint_density(x, y).unwrap();
    assert!((mixed - p).abs() < 1e-5, "{mixed} vs {p}");
}

#[test]
fn table_rows_match_published_values() {
    let t = table();
    for &(s, a, g) in &[(0.50, 0.113_346_13, 0.019_650_02), (1.90, 0.466_289_29, 0.536_136_99)] {
        let k = t.index_of(s).unwrap();
        assert!((t.s[k] - s).abs() < 1e-12);
        assert!((t.density[k] - a).abs() < 1e-6 && (t.cdf[k] - g).abs() < 1e-6, "s={s}");
    }
    assert_eq!((t.density[0], t.cdf[0]), (0.0, 0.0));
    assert_eq!(t.len(), 201);
    let lines: Vec<String> = t.to_paper_format().lines().map(String::from).collect();
    assert_eq!(lines[10], "0.50  0.11334613  0.01965002");
    assert!(t.to_csv().starts_with("s,A,G\n0.00,"));
}

#[test]
fn table_invariants() {
    let t = table();
    for k in 1..t.len() {
        assert!(t.cdf[k] >= t.cdf[k - 1] - 1e-12, "G decreases at {}", t.s[k]);
        assert!(t.density[k] >= -1e-10);
    }
    let k = t.index_of(8.8).unwrap();
    assert!((t.cdf[k] - 1.0).abs() < 1e-6);
    let k_end = t.index_of(8.95).unwrap();
    let h = t.s_step;
    let mass: f64 = (1..=k_end).map(|i| 0.5 * h * (t.density[i - 1] + t.density[i])).sum();
    assert!((mass - 1.0).abs() < 1e-6, "{mass}");
}

#[test]
fn cdf_and_density_routes_agree() {
    let l = law();
    let h = 5e-4;
    let mut acc = 0.0;
    let mut s = 0.0;
    for step in 1..=16_000 {
        let next = step as f64 * h;
        acc += 0.5 * h * (l.a(s) + l.a(next));
        s = next;
        if step % 1000 == 0 {
            assert!((acc - l.g(s)).abs() < 1e-7, "s={s}: {acc} vs {}", l.g(s));
        }
    }
    assert!(l.metadata.route_discrepancy < 1e-7);
}

#[test]
fn first_moment_routes_agree() {
    let l = law();
    let raw = l.raw_moments(2).unwrap();
    assert_eq!(raw[0], 1.0);
    let rule = gauss_legendre(64).unwrap();
    let direct: f64 = (0..10).map(|p| rule.on_interval(p as f64, p as f64 + 1.0).integrate(|s| s * l.a(s))).sum();
    assert!((raw[1] - direct).abs() < 1e-6);
}

#[test]
fn table_is_self_convergent() {
    let fine = SoftEdgeConfig {
        order: 64,
        inner_order: 32,
        ..cfg()
    };
    let opts = SpacingOptions {
        degree: 48,
        y_order: 128,
        ..SpacingOptions::default()
    };
    let other = SpacingLaw::new(&fine, 10.0, &opts).unwrap();
    for k in 1..=40 {
        let s = 0.2 * k as f64;
        assert!((other.g(s) - law().g(s)).abs() < 1e-7, "G at {s}");
        assert!((other.a(s) - law().a(s)).abs() < 1e-7, "A at {s}");
    }
}

#[test]
fn spacing_argument_checks() {
    assert!(spacing_cdf_table(4.0, 64).is_err());
    assert!(spacing_cdf_table(10.0, 16).is_err());
    assert!(spacing_moments(7).is_err());
}

#[test]
fn fast_correlation_and_independence_null() {
    let r = largest_two_correlation_with(CorrelationMode::Fast, Parallelism::default()).unwrap();
    assert!((r.rho - 0.505_647_231_59).abs() < 1e-4, "{r:?}");
    let null = covariance_report(&SoftEdgeConfig::with_order(32), 24, true).unwrap();
    assert!(null.covariance.abs() < 1e-14, "{null:?}");
}

#[test]
fn covariance_integrand_is_nonnegative() {
    let c = cfg();
    for i in 0..7 {
        for j in 0..7 {
            let x = -6.0 + 1.5 * i as f64;
            let y = -6.0 + 1.5 * j as f64;
            let (f1, _) = c.gap_and_second(x).unwrap();
            let (_, f2) = c.gap_and_second(y).unwrap();
            let v = c.joint_cdf(x, y).unwrap() - f1 * f2;
            assert!(v >= -1e-8, "({x},{y}): {v}");
        }
    }
}

#[test]
fn moment_summary_of_known_raw_moments() {
    // Exponential(1): raw moments n!, skewness 2, excess kurtosis 6.
    let m = MomentSummary::from_raw(&[1.0, 1.0, 2.0, 6.0, 24.0]).unwrap();
    assert!((m.mean - 1.0).abs() < 1e-15 && (m.variance - 1.0).abs() < 1e-15);
    assert!((m.skewness - 2.0).abs() < 1e-14 && (m.excess_kurtosis - 6.0).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn joint_cdf_bounded_by_marginals(x in -5.0f64..3.0, y in -5.0f64..3.0) {
        let c = cfg();
        let f = c.joint_cdf(x, y).unwrap();
        prop_assert!(f <= c.gap(x).unwrap() + 1e-9);
        prop_assert!(f <= c.second_cdf(y).unwrap() + 1e-9);
        prop_assert!(f >= -1e-12);
    }

    #[test]
    fn second_cdf_dominates_first(y in -7.0f64..4.0) {
        let (f1, f2) = cfg().gap_and_second(y).unwrap();
        prop_assert!(f2 >= f1 - 1e-14 && f2 <= 1.0 + 1e-12);
    }
}
