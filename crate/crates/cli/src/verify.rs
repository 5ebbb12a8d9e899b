use crate::output::Table;
use anyhow::Result;
use rmt_edge::fredholm::{fredholm_minor_density, KernelSpec};
use rmt_edge::hardedge::{a0_moment_closed, a0_moment_quadrature, closed_forms_a1, hard_to_soft_check, okamoto_recurrence_step, seeds_a0};
use rmt_edge::painleve2::{p2_soft_painleve, tw2_painleve};
use rmt_edge::quadrature::gauss_legendre;
use rmt_edge::sampler::{SampleBatch, SamplingMethod};
use rmt_edge::softedge::{marginal_moments, SoftEdgeConfig, TW2_MEAN, TW2_VARIANCE};
use rmt_edge::Parallelism;
use serde_json::json;

struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v.abs()) })
}

fn checks(cfg: &SoftEdgeConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let rule = gauss_legendre(10)?;
    out.push(Check {
        name: "quadrature: Gauss-Legendre exact on x^18",
        value: rule.integrate(|x| x.powi(18)) - 2.0 / 19.0,
        tolerance: 1e-14,
    });

    let routes = [-2.0, 0.0, 2.0].iter().map(|&s| Ok(tw2_painleve(s)? - cfg.gap(s)?)).collect::<Result<Vec<_>>>()?;
    out.push(Check {
        name: "softedge/painleve2: two routes to F2",
        value: max_abs(routes),
        tolerance: 1e-7,
    });

    let diag = [-1.0, 0.5].iter().map(|&x| Ok(cfg.joint_cdf(x, x + 1.0)? - cfg.gap(x)?)).collect::<Result<Vec<_>>>()?;
    out.push(Check {
        name: "softedge: F(x, y) = F2(x) for y >= x",
        value: max_abs(diag),
        tolerance: 1e-14,
    });

    let m = marginal_moments(cfg)?;
    out.push(Check {
        name: "softedge: marginal mean and variance of the largest",
        value: max_abs([m.mean_first - TW2_MEAN, m.var_first - TW2_VARIANCE]),
        tolerance: 1e-7,
    });

    let painleve = p2_soft_painleve(1.0, 1.0)?;
    let minor = fredholm_minor_density(KernelSpec::Soft, 1.0, 0.0, 64, 10.0)?;
    out.push(Check {
        name: "painleve2: joint density against the Fredholm minor",
        value: painleve / minor - 1.0,
        tolerance: 1e-3,
    });

    let mut step = Vec::new();
    for &s in &[1.0, 4.0, 10.0, 30.0] {
        let (q0, p0) = seeds_a0(s)?;
        let (q1, p1) = okamoto_recurrence_step(q0, p0, 0.25 * s, 0.0)?;
        let c = closed_forms_a1(s)?;
        step.push(q1 / c.q - 1.0);
        step.push(p1 / c.p - 1.0);
    }
    out.push(Check {
        name: "hardedge: one recurrence step reproduces a = 1",
        value: max_abs(step),
        tolerance: 1e-10,
    });

    let moments = (1..=6).map(|k| Ok(a0_moment_quadrature(k)? / a0_moment_closed(k)? - 1.0)).collect::<Result<Vec<_>>>()?;
    out.push(Check {
        name: "hardedge: A0 moment identities",
        value: max_abs(moments),
        tolerance: 1e-8,
    });

    let h2s = hard_to_soft_check(&[64, 128, 256], 1.0)?;
    let ok = h2s.nu_monotone() && h2s.c_monotone() && h2s.rows[2].delta_nu < 0.5 * h2s.rows[0].delta_nu;
    out.push(Check {
        name: "hardedge: hard-to-soft discrepancies shrink",
        value: if ok { 0.0 } else { 1.0 },
        tolerance: 0.5,
    });

    let a = SampleBatch::generate(50, 32, 7, SamplingMethod::Tridiagonal, Parallelism::Parallel)?;
    let b = SampleBatch::generate(50, 32, 7, SamplingMethod::Tridiagonal, Parallelism::Sequential)?;
    let same = a == b && a.spacings.iter().all(|&s| s >= 0.0);
    out.push(Check {
        name: "sampler: seeded batches are reproducible",
        value: if same { 0.0 } else { 1.0 },
        tolerance: 0.5,
    });
    Ok(out)
}

/// Returns the table and whether every check passed.
pub fn run(cfg: &SoftEdgeConfig) -> Result<(Table, bool)> {
    let mut table = Table::new(vec!["check", "value", "tolerance", "pass"]);
    let mut all = true;
    for c in checks(cfg)? {
        let pass = c.value.abs() <= c.tolerance;
        all &= pass;
        table.push(vec![json!(c.name), json!(c.value), json!(c.tolerance), json!(pass)]);
    }
    Ok((table, all))
}
