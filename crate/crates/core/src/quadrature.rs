//! Gauss–Legendre rules, interval maps and Chebyshev interpolation.

use crate::error::{invalid, Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine image of a rule on [-1, 1] onto [a, b].
    pub fn on_interval(&self, a: f64, b: f64) -> QuadratureRule {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&u| c + h * u).collect(),
            weights: self.weights.iter().map(|&w| h * w).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    /// (s, ∞) through x = s + scale (1 + u) / (1 - u).
    SemiInfinite { s: f64, scale: f64 },
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n-point Gauss–Legendre rule on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return invalid("Gauss-Legendre order must be positive");
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence(format!(
                "Legendre root {i} of order {n}"
            )));
        }
        let (_, d) = legendre(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

pub fn map_rule(rule: &QuadratureRule, domain: Domain) -> Result<QuadratureRule> {
    match domain {
        Domain::Finite { a, b } => {
            if !(a.is_finite() && b.is_finite() && a <= b) {
                return invalid(format!("bad interval [{a}, {b}]"));
            }
            Ok(rule.on_interval(a, b))
        }
        Domain::SemiInfinite { s, scale } => {
            if !(s.is_finite() && scale > 0.0) {
                return invalid(format!("bad semi-infinite map s = {s}, scale = {scale}"));
            }
            let (nodes, weights) = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&u, &w)| {
                    let d = 1.0 - u;
                    (s + scale * (1.0 + u) / d, w * 2.0 * scale / (d * d))
                })
                .unzip();
            Ok(QuadratureRule { nodes, weights })
        }
    }
}

pub fn map_semi_infinite(n: usize, s: f64, scale: f64) -> Result<QuadratureRule> {
    map_rule(&gauss_legendre(n)?, Domain::SemiInfinite { s, scale })
}

pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    map_rule(&gauss_legendre(n)?, Domain::Finite { a, b })
}

/// Chebyshev points of the first kind on [a, b], ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebGrid {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
}

/// `n` first-kind points on [a, b].
pub fn cheb_grid(n: usize, a: f64, b: f64) -> Result<ChebGrid> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return invalid(format!("bad Chebyshev interval [{a}, {b}]"));
    }
    if n < 2 {
        return invalid("a Chebyshev grid needs at least 2 points");
    }
    let mut t = vec![0.0; n];
    for k in 0..n / 2 {
        let v = ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos();
        t[k] = -v;
        t[n - 1 - k] = v;
    }
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let nodes = t.into_iter().map(|u| c + h * u).collect();
    Ok(ChebGrid { a, b, nodes })
}

impl ChebGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies `f` at every node.
    pub fn sample<F: FnMut(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes.iter().copied().map(f).collect()
    }

    fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / (self.b - self.a)
    }

    pub fn series(&self, values: &[f64]) -> Result<ChebSeries> {
        let m = self.nodes.len();
        if values.len() != m {
            return invalid(format!("expected {m} values, got {}", values.len()));
        }
        // Ascending node k corresponds to angle (2(m-1-k)+1)π/(2m) with t = cos(angle).
        let coeffs = (0..m)
            .map(|j| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let theta = (2 * (m - 1 - k) + 1) as f64 * PI / (2 * m) as f64;
                        v * (j as f64 * theta).cos()
                    })
                    .sum();
                let c = 2.0 * s / m as f64;
                if j == 0 {
                    0.5 * c
                } else {
                    c
                }
            })
            .collect();
        Ok(ChebSeries {
            a: self.a,
            b: self.b,
            coeffs,
        })
    }
}

/// Barycentric interpolation through values at the first-kind nodes.
pub fn barycentric_eval(grid: &ChebGrid, values: &[f64], x: f64) -> Result<f64> {
    let m = grid.nodes.len();
    if values.len() != m {
        return invalid(format!("expected {m} values, got {}", values.len()));
    }
    let slack = 1e-14 * (grid.b - grid.a);
    if !(x >= grid.a - slack && x <= grid.b + slack) {
        return invalid(format!("x = {x} outside [{}, {}]", grid.a, grid.b));
    }
    if let Some(k) = grid.nodes.iter().position(|&node| node == x) {
        return Ok(values[k]);
    }
    let t = grid.to_unit(x);
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..m {
        let j = m - 1 - k;
        let theta = (2 * j + 1) as f64 * PI / (2 * m) as f64;
        let tk = theta.cos();
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        let w = sign * theta.sin();
        let d = t - tk;
        if d == 0.0 {
            return Ok(values[k]);
        }
        num += w / d * values[k];
        den += w / d;
    }
    Ok(num / den)
}

/// Barycentric weights of the first-kind points, ascending order.
fn barycentric_weights(m: usize) -> Vec<f64> {
    (0..m)
        .map(|k| {
            let j = m - 1 - k;
            let theta = (2 * j + 1) as f64 * PI / (2 * m) as f64;
            let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * theta.sin()
        })
        .collect()
}

/// Spectral derivative of grid data, returned at the same nodes.
///
/// Rows of the differentiation matrix act on differences v_j − v_i, so
/// constants are annihilated exactly.
pub fn cheb_differentiate(grid: &ChebGrid, values: &[f64]) -> Result<Vec<f64>> {
    let m = grid.nodes.len();
    if m < 2 {
        return invalid("differentiation needs at least 2 points");
    }
    if values.len() != m {
        return invalid(format!("expected {m} values, got {}", values.len()));
    }
    let w = barycentric_weights(m);
    let x = &grid.nodes;
    Ok((0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| w[j] / w[i] / (x[i] - x[j]) * (values[j] - values[i]))
                .sum()
        })
        .collect())
}

/// Antiderivative of grid data vanishing at `grid.a`, returned at the nodes.
pub fn cheb_integrate(grid: &ChebGrid, values: &[f64]) -> Result<Vec<f64>> {
    let i = grid.series(values)?.antiderivative();
    Ok(grid.nodes.iter().map(|&x| i.eval(x)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs.first().copied().unwrap_or(0.0)
    }

    pub fn derivative(&self) -> ChebSeries {
        let n = self.coeffs.len();
        let mut d = vec![0.0; n.max(1)];
        if n >= 2 {
            let c = &self.coeffs;
            for k in (0..n - 1).rev() {
                let next = if k + 2 < n { d[k + 2] } else { 0.0 };
                d[k] = next + 2.0 * (k + 1) as f64 * c[k + 1];
            }
            d[0] *= 0.5;
            d[n - 1] = 0.0;
        }
        let scale = 2.0 / (self.b - self.a);
        ChebSeries {
            a: self.a,
            b: self.b,
            coeffs: d.into_iter().map(|v| v * scale).collect(),
        }
    }

    /// Antiderivative normalised to vanish at `a`.
    pub fn antiderivative(&self) -> ChebSeries {
        let c = &self.coeffs;
        let n = c.len();
        let mut out = vec![0.0; n + 1];
        let get = |k: usize| if k < n { c[k] } else { 0.0 };
        for k in 1..=n {
            let prev = if k == 1 { 2.0 * get(0) } else { get(k - 1) };
            out[k] = (prev - get(k + 1)) / (2.0 * k as f64);
        }
        let h = 0.5 * (self.b - self.a);
        for v in out.iter_mut() {
            *v *= h;
        }
        let mut s = ChebSeries {
            a: self.a,
            b: self.b,
            coeffs: out,
        };
        let at_a = s.eval(self.a);
        s.coeffs[0] -= at_a;
        s
    }

    pub fn integral(&self) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, c)| 2.0 * c / (1.0 - (k * k) as f64))
            .sum();
        0.5 * (self.b - self.a) * sum
    }
}
