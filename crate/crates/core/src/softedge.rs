//! Soft-edge statistics of the two largest GUE eigenvalues: the Tracy–Widom
//! gap probability, the joint distribution function, the spacing law and the
//! correlation coefficient.

use crate::error::{invalid, Error, Result};
use crate::fredholm::{
    fredholm_minor_density, nystrom_det_checked, BlockOperator, BlockRules, KernelSpec, OperatorDiscretization,
    DEFAULT_CONVERGENCE_TOL, DEFAULT_MAP_SCALE,
};
use crate::linalg::symmetric_eigenvalues;
use crate::parallel::{try_map_range, Parallelism};
use crate::quadrature::{cheb_differentiate, cheb_grid, gauss_legendre, map_semi_infinite, Domain, QuadratureRule};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Window for the outer y-integral of the spacing law.
pub const Y_WINDOW: (f64, f64) = (-8.0, 6.0);
/// Box for the covariance integral.
pub const COV_WINDOW: (f64, f64) = (-9.0, 6.0);
/// Mean and variance of the largest eigenvalue, used as cross-checks.
pub const TW2_MEAN: f64 = -1.771_086_807_4;
pub const TW2_VARIANCE: f64 = 0.813_194_792_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoftEdgeConfig {
    /// Nyström order on semi-infinite pieces.
    pub order: usize,
    /// Nyström order on the finite block (y, x) when it is at most 6 long.
    pub inner_order: usize,
    pub scale: f64,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl Default for SoftEdgeConfig {
    fn default() -> Self {
        SoftEdgeConfig {
            order: 48,
            inner_order: 24,
            scale: DEFAULT_MAP_SCALE,
            parallelism: Parallelism::default(),
        }
    }
}

impl SoftEdgeConfig {
    pub fn with_order(order: usize) -> Self {
        SoftEdgeConfig {
            order,
            inner_order: (order / 2).max(8),
            ..Self::default()
        }
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.order < 4 || self.inner_order < 2 {
            return invalid(format!("Nyström orders too small: {} / {}", self.order, self.inner_order));
        }
        if !(self.scale > 0.0) {
            return invalid(format!("map scale must be positive, got {}", self.scale));
        }
        Ok(())
    }

    fn rule(&self, s: f64) -> Result<QuadratureRule> {
        map_semi_infinite(self.order, s, self.scale)
    }

    /// E(0; (s, ∞)) at the configured order.
    pub fn gap(&self, s: f64) -> Result<f64> {
        self.validate()?;
        OperatorDiscretization::new(KernelSpec::Soft, self.rule(s)?)?.det()
    }

    /// (F₂(y), F⁽²⁾(y)): probabilities of no eigenvalue and of at most one
    /// eigenvalue in (y, ∞), from the spectrum of the Nyström matrix.
    pub fn gap_and_second(&self, y: f64) -> Result<(f64, f64)> {
        self.validate()?;
        let disc = OperatorDiscretization::new(KernelSpec::Soft, self.rule(y)?)?;
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
        Ok((none, none + one))
    }

    /// Distribution function of the second largest eigenvalue.
    pub fn second_cdf(&self, y: f64) -> Result<f64> {
        Ok(self.gap_and_second(y)?.1)
    }

    /// F(x, y) = P(λ₁ ≤ x, λ₂ ≤ y).
    pub fn joint_cdf(&self, x: f64, y: f64) -> Result<f64> {
        self.validate()?;
        check_finite(x, y)?;
        if x <= y {
            return self.gap(x);
        }
        let rules = BlockRules::new(y, x, self.inner_nodes(x - y), self.order, self.scale)?;
        let op = BlockOperator::new(&KernelSpec::Soft, &rules);
        Ok(op.det_real(1.0)? - op.d_det_dz_at_1()?)
    }

    /// Nodes on (y, x): `inner_order` up to length 6, then proportional.
    pub fn inner_nodes(&self, length: f64) -> usize {
        let scaled = (self.inner_order as f64 * length / 6.0).ceil() as usize;
        self.inner_order.max(scaled)
    }

    /// Joint density of (λ₁, λ₂) at x > y.
    pub fn joint_density(&self, x: f64, y: f64) -> Result<f64> {
        self.validate()?;
        check_finite(x, y)?;
        fredholm_minor_density(KernelSpec::Soft, x, y, self.order, self.scale)
    }
}

fn check_finite(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::NonFinite("soft-edge argument"));
    }
    Ok(())
}

/// E₂(0; (s, ∞)) = F₂(s) at n = 64, checked against n = 128.
pub fn tw2_gap(s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::NonFinite("tw2_gap"));
    }
    nystrom_det_checked(
        KernelSpec::Soft,
        Domain::SemiInfinite {
            s,
            scale: DEFAULT_MAP_SCALE,
        },
        64,
        DEFAULT_CONVERGENCE_TOL,
    )
}

pub fn joint_cdf(x: f64, y: f64) -> Result<f64> {
    SoftEdgeConfig::default().joint_cdf(x, y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub order: usize,
    pub inner_order: usize,
    pub degree: usize,
    pub y_order: usize,
    pub y_window: (f64, f64),
    pub s_max: f64,
    /// max |G − ∫A| over the Chebyshev points.
    pub route_discrepancy: f64,
    /// Largest y-integrand magnitude at the window ends.
    pub tail_contribution: f64,
}

/// Density A(s) and distribution G(s) of the spacing λ₁ − λ₂ on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub s_start: f64,
    pub s_step: f64,
    pub s: Vec<f64>,
    pub density: Vec<f64>,
    pub cdf: Vec<f64>,
    pub metadata: TableMetadata,
}

impl DistributionTable {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,A,G\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "{:.2},{:.17e},{:.17e}", self.s[i], self.density[i], self.cdf[i]);
        }
        out
    }

    /// Three columns: s to 2 decimals, A and G to 8.
    pub fn to_paper_format(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            let _ = writeln!(out, "{:.2}  {:.8}  {:.8}", self.s[i], self.density[i].max(0.0), self.cdf[i]);
        }
        out
    }

    /// Index of the grid point closest to s.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let k = ((s - self.s_start) / self.s_step).round();
        (k >= 0.0 && (k as usize) < self.len()).then_some(k as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacingOptions {
    pub degree: usize,
    pub y_order: usize,
    pub step: f64,
    pub tail_tol: f64,
}

impl Default for SpacingOptions {
    fn default() -> Self {
        SpacingOptions {
            degree: 64,
            y_order: 64,
            step: 0.05,
            tail_tol: 1e-8,
        }
    }
}

/// Chebyshev representations of G and A on [0, s_max].
pub struct SpacingLaw {
    pub cdf: crate::quadrature::ChebSeries,
    pub density: crate::quadrature::ChebSeries,
    pub metadata: TableMetadata,
}

impl SpacingLaw {
    pub fn new(cfg: &SoftEdgeConfig, s_max: f64, opts: &SpacingOptions) -> Result<Self> {
        cfg.validate()?;
        if !(5.0..=12.0).contains(&s_max) {
            return invalid(format!("s_max must lie in [5, 12], got {s_max}"));
        }
        if opts.degree < 32 {
            return invalid(format!("Chebyshev degree must be at least 32, got {}", opts.degree));
        }
        let grid = cheb_grid(opts.degree, 0.0, s_max)?;
        let (y0, y1) = Y_WINDOW;
        let yrule = gauss_legendre(opts.y_order)?.on_interval(y0, y1);
        let ny = yrule.len();
        let m = grid.len();
        // Row k: Ψ(s_k), boundary term F(y1+s, y1) − F(y0+s, y0), and ∫ p₂(y+s, y) dy.
        let rows = try_map_range(cfg.parallelism, m, |k| -> Result<[f64; 3]> {
            let s = grid.nodes[k];
            let mut psi = 0.0;
            let mut dens = 0.0;
            for j in 0..ny {
                let y = yrule.nodes[j];
                psi += yrule.weights[j] * cfg.joint_cdf(y + s, y)?;
                dens += yrule.weights[j] * cfg.joint_density(y + s, y)?;
            }
            let edge = cfg.joint_cdf(y1 + s, y1)? - cfg.joint_cdf(y0 + s, y0)?;
            Ok([psi, edge, dens])
        })?;
        let psi: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let dpsi = cheb_differentiate(&grid, &psi)?;
        let g: Vec<f64> = rows.iter().zip(&dpsi).map(|(r, d)| r[1] - d).collect();
        let a: Vec<f64> = rows.iter().map(|r| r[2]).collect();
        let cdf = grid.series(&g)?;
        let density = grid.series(&a)?;
        let g_int = density.antiderivative();
        let route_discrepancy = grid
            .nodes
            .iter()
            .zip(&g)
            .map(|(&s, gv)| (gv - g_int.eval(s)).abs())
            .fold(0.0, f64::max);
        let tail_contribution = [y0, y1]
            .iter()
            .map(|&y| cfg.joint_density(y + 0.5 * s_max, y).map(f64::abs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if tail_contribution > opts.tail_tol {
            return Err(Error::PrecisionLoss(format!(
                "spacing integrand at the y-window ends is {tail_contribution:e}, above {}",
                opts.tail_tol
            )));
        }
        Ok(SpacingLaw {
            cdf,
            density,
            metadata: TableMetadata {
                order: cfg.order,
                inner_order: cfg.inner_order,
                degree: opts.degree,
                y_order: opts.y_order,
                y_window: Y_WINDOW,
                s_max,
                route_discrepancy,
                tail_contribution,
            },
        })
    }

    pub fn g(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            self.cdf.eval(s.min(self.cdf.b))
        }
    }

    pub fn a(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            self.density.eval(s.min(self.density.b))
        }
    }

    /// Uniform resampling 0, step, 2·step, … ≤ s_max.
    pub fn table(&self, step: f64) -> Result<DistributionTable> {
        if !(step > 0.0) {
            return invalid(format!("table step must be positive, got {step}"));
        }
        let s_max = self.cdf.b;
        let count = ((s_max / step) + 1e-9).floor() as usize + 1;
        let s: Vec<f64> = (0..count).map(|k| k as f64 * step).collect();
        Ok(DistributionTable {
            s_start: 0.0,
            s_step: step,
            density: s.iter().map(|&v| self.a(v)).collect(),
            cdf: s.iter().map(|&v| self.g(v)).collect(),
            s,
            metadata: self.metadata.clone(),
        })
    }

    /// Raw moments E(Sⁿ) = n ∫ s^{n−1}(1 − G) for n = 0..=n_max.
    pub fn raw_moments(&self, n_max: usize) -> Result<Vec<f64>> {
        let s_max = self.cdf.b;
        let panels = 16;
        let rule = gauss_legendre(24)?;
        let mut out = vec![1.0];
        for n in 1..=n_max {
            let mut acc = 0.0;
            for p in 0..panels {
                let a = s_max * p as f64 / panels as f64;
                let b = s_max * (p + 1) as f64 / panels as f64;
                acc += rule.on_interval(a, b).integrate(|s| s.powi(n as i32 - 1) * (1.0 - self.g(s)));
            }
            out.push(n as f64 * acc);
        }
        Ok(out)
    }
}

pub fn spacing_cdf_table(s_max: f64, degree: usize) -> Result<DistributionTable> {
    let opts = SpacingOptions {
        degree,
        ..SpacingOptions::default()
    };
    SpacingLaw::new(&SoftEdgeConfig::default(), s_max, &opts)?.table(opts.step)
}

/// Mean, variance, skewness and excess kurtosis from raw moments 0..=4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl MomentSummary {
    pub fn from_raw(m: &[f64]) -> Result<Self> {
        if m.len() < 5 {
            return invalid("moment summary needs raw moments through order 4");
        }
        let mu = m[1] / m[0];
        let e2 = m[2] / m[0];
        let e3 = m[3] / m[0];
        let e4 = m[4] / m[0];
        let var = e2 - mu * mu;
        let c3 = e3 - 3.0 * mu * e2 + 2.0 * mu.powi(3);
        let c4 = e4 - 4.0 * mu * e3 + 6.0 * mu * mu * e2 - 3.0 * mu.powi(4);
        Ok(MomentSummary {
            mean: mu,
            variance: var,
            skewness: c3 / var.powf(1.5),
            excess_kurtosis: c4 / (var * var) - 3.0,
        })
    }
}

/// Raw spacing moments E(Sⁿ), n = 0..=n_max ≤ 6.
pub fn spacing_moments(n_max: usize) -> Result<Vec<f64>> {
    if n_max > 6 {
        return invalid(format!("moment order at most 6, got {n_max}"));
    }
    SpacingLaw::new(&SoftEdgeConfig::default(), 10.0, &SpacingOptions::default())?.raw_moments(n_max)
}

/// Mean and variance of a distribution function supported on the line by
/// E X = ∫₀^∞ (1 − F) − ∫_{−∞}^0 F and E X² = 2∫₀^∞ x(1 − F) − 2∫_{−∞}^0 xF.
fn mean_variance_from_cdf(values: &[(f64, f64, f64)]) -> (f64, f64) {
    let (mut m1, mut m2) = (0.0, 0.0);
    for &(x, w, f) in values {
        let g = if x >= 0.0 { 1.0 - f } else { -f };
        m1 += w * g;
        m2 += 2.0 * w * x * g;
    }
    (m1, m2 - m1 * m1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalMoments {
    pub mean_first: f64,
    pub var_first: f64,
    pub mean_second: f64,
    pub var_second: f64,
}

/// Means and variances of λ₁ and λ₂.
pub fn marginal_moments(cfg: &SoftEdgeConfig) -> Result<MarginalMoments> {
    let rule = gauss_legendre(32)?;
    let mut nodes = Vec::new();
    let edges: Vec<f64> = (0..=12).map(|k| -14.0 + 2.0 * k as f64).collect();
    for w in edges.windows(2) {
        let r = rule.on_interval(w[0], w[1]);
        nodes.extend(r.nodes.iter().copied().zip(r.weights.iter().copied()));
    }
    let vals = try_map_range(cfg.parallelism, nodes.len(), |k| cfg.gap_and_second(nodes[k].0))?;
    let first: Vec<_> = nodes.iter().zip(&vals).map(|(&(x, w), v)| (x, w, v.0)).collect();
    let second: Vec<_> = nodes.iter().zip(&vals).map(|(&(x, w), v)| (x, w, v.1)).collect();
    let (m1, v1) = mean_variance_from_cdf(&first);
    let (m2, v2) = mean_variance_from_cdf(&second);
    Ok(MarginalMoments {
        mean_first: m1,
        var_first: v1,
        mean_second: m2,
        var_second: v2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrelationMode {
    /// Nyström order 32 and a 32-point tensor rule per triangle.
    Fast,
    /// Nyström order 48 and a 48-point tensor rule per triangle.
    Full,
}

impl CorrelationMode {
    fn orders(self) -> (usize, usize) {
        match self {
            CorrelationMode::Fast => (32, 32),
            CorrelationMode::Full => (48, 48),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rho: f64,
    pub covariance: f64,
    pub marginals: MarginalMoments,
    /// Covariance contributions from the triangles x > y and x ≤ y.
    pub lower: f64,
    pub upper: f64,
    /// Largest integrand magnitude on the boundary of the box.
    pub boundary_max: f64,
    pub order: usize,
    pub tensor_order: usize,
}

/// Points and weights of a tensor Gauss rule on the triangle a < y < x < b
/// (lower = true) or a < x < y < b, via the collapsed map y = a + (x − a)v.
fn triangle_rule(m: usize, a: f64, b: f64, lower: bool) -> Result<Vec<(f64, f64, f64)>> {
    let r = gauss_legendre(m)?.on_interval(0.0, 1.0);
    let l = b - a;
    let mut pts = Vec::with_capacity(m * m);
    for (u, wu) in r.nodes.iter().zip(&r.weights) {
        for (v, wv) in r.nodes.iter().zip(&r.weights) {
            let outer = a + l * u;
            let inner = a + l * u * v;
            let w = wu * wv * l * l * u;
            pts.push(if lower { (outer, inner, w) } else { (inner, outer, w) });
        }
    }
    Ok(pts)
}

/// Correlation coefficient of the two largest eigenvalues.
pub fn largest_two_correlation_with(mode: CorrelationMode, parallelism: Parallelism) -> Result<CorrelationReport> {
    let (order, tensor) = mode.orders();
    let cfg = SoftEdgeConfig::with_order(order).with_parallelism(parallelism);
    covariance_report(&cfg, tensor, false)
}

pub fn largest_two_correlation() -> Result<f64> {
    Ok(largest_two_correlation_with(CorrelationMode::Full, Parallelism::default())?.rho)
}

/// Hoeffding covariance. With `independent` the joint law is replaced by the
/// product of its marginals, which must give zero.
pub fn covariance_report(cfg: &SoftEdgeConfig, tensor: usize, independent: bool) -> Result<CorrelationReport> {
    cfg.validate()?;
    let (a, b) = COV_WINDOW;
    let marginals = marginal_moments(cfg)?;
    let integrand = |x: f64, y: f64| -> Result<f64> {
        let f1 = cfg.gap(x)?;
        let f2 = cfg.second_cdf(y)?;
        let joint = if independent { f1 * f2 } else { cfg.joint_cdf(x, y)? };
        Ok(joint - f1 * f2)
    };
    let lower_pts = triangle_rule(tensor, a, b, true)?;
    let lower_vals = try_map_range(cfg.parallelism, lower_pts.len(), |k| {
        let (x, y, w) = lower_pts[k];
        Ok::<_, Error>(w * integrand(x, y)?)
    })?;
    let upper_pts = triangle_rule(tensor, a, b, false)?;
    let upper_vals = try_map_range(cfg.parallelism, upper_pts.len(), |k| {
        let (x, y, w) = upper_pts[k];
        let f1 = cfg.gap(x)?;
        let f2 = cfg.second_cdf(y)?;
        let v = if independent { 0.0 } else { f1 * (1.0 - f2) };
        Ok::<_, Error>(w * v)
    })?;
    let probes: Vec<(f64, f64)> = (0..=6)
        .flat_map(|k| {
            let t = a + (b - a) * k as f64 / 6.0;
            [(b, t), (t, a), (a, t), (t, b)]
        })
        .collect();
    let boundary = try_map_range(cfg.parallelism, probes.len(), |k| {
        let (x, y) = probes[k];
        integrand(x, y).map(f64::abs)
    })?;
    let boundary_max = boundary.into_iter().fold(0.0, f64::max);
    if boundary_max > 1e-8 {
        return Err(Error::PrecisionLoss(format!(
            "covariance integrand reaches {boundary_max:e} on the boundary of [{a}, {b}]²"
        )));
    }
    let lower: f64 = lower_vals.iter().sum();
    let upper: f64 = upper_vals.iter().sum();
    let covariance = lower + upper;
    Ok(CorrelationReport {
        rho: covariance / (marginals.var_first * marginals.var_second).sqrt(),
        covariance,
        marginals,
        lower,
        upper,
        boundary_max,
        order: cfg.order,
        tensor_order: tensor,
    })
}
