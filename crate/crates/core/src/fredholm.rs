//! Nyström discretisation of integrable kernels and the determinant
//! functionals built on it.

use crate::error::{invalid, Error, Result};
use crate::linalg::{det_lu, lu_factor, DenseMatrix, LuFactors};
use crate::quadrature::{gauss_legendre, map_rule, Domain, QuadratureRule};
use crate::specfun::{airy_ai, bessel_j};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default scale of the algebraic map onto (s, ∞).
pub const DEFAULT_MAP_SCALE: f64 = 10.0;
/// Default Nyström order.
pub const DEFAULT_ORDER: usize = 64;
/// Default absolute tolerance for the n versus 2n convergence check.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-8;
/// Default contour radius and sample count for the z-derivative at z = 1.
pub const CONTOUR_RADIUS: f64 = 0.5;
pub const CONTOUR_POINTS: usize = 16;

pub trait Kernel: Sync {
    fn eval(&self, x: f64, y: f64) -> f64;

    /// K(x, y_j) for every y_j.
    fn row(&self, x: f64, ys: &[f64]) -> Vec<f64> {
        ys.iter().map(|&y| self.eval(x, y)).collect()
    }

    /// Full matrix K(x_i, x_j), row-major.
    fn matrix(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().flat_map(|&x| self.row(x, xs)).collect()
    }
}

/// Wraps a closure as a kernel.
#[derive(Clone, Copy)]
pub struct FnKernel<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> Kernel for FnKernel<F> {
    fn eval(&self, x: f64, y: f64) -> f64 {
        (self.0)(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelSpec {
    /// Airy kernel of the soft edge.
    Soft,
    /// Bessel kernel of the hard edge with parameter a > −1.
    Hard { a: f64 },
}

impl KernelSpec {
    pub fn hard(a: f64) -> Result<Self> {
        if !(a > -1.0 && a.is_finite()) {
            return invalid(format!("hard-edge parameter must exceed -1, got {a}"));
        }
        Ok(KernelSpec::Hard { a })
    }

    /// (φ, ψ) with K(x, y) = c (φ(x)ψ(y) − ψ(x)φ(y)) / (x − y).
    fn phi_psi(&self, x: f64) -> (f64, f64) {
        match *self {
            KernelSpec::Soft => airy_ai(x),
            KernelSpec::Hard { a } => {
                if x <= 0.0 {
                    return (0.0, 0.0);
                }
                let r = x.sqrt();
                let j = bessel_j(a, r).unwrap_or(f64::NAN);
                let j1 = bessel_j(a + 1.0, r).unwrap_or(f64::NAN);
                (j, a * j - r * j1)
            }
        }
    }

    fn prefactor(&self) -> f64 {
        match self {
            KernelSpec::Soft => 1.0,
            KernelSpec::Hard { .. } => 0.5,
        }
    }

    pub fn diagonal(&self, x: f64) -> f64 {
        match *self {
            KernelSpec::Soft => {
                let (ai, aip) = airy_ai(x);
                aip * aip - x * ai * ai
            }
            KernelSpec::Hard { a } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let r = x.sqrt();
                let j = bessel_j(a, r).unwrap_or(f64::NAN);
                let jp1 = bessel_j(a + 1.0, r).unwrap_or(f64::NAN);
                let jm1 = 2.0 * a / r * j - jp1;
                0.25 * (j * j - jp1 * jm1)
            }
        }
    }

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() <= 1e-8 * x.abs().max(y.abs()).max(1.0)
    }

    fn combine(&self, x: f64, y: f64, px: (f64, f64), py: (f64, f64)) -> f64 {
        if x == y {
            return self.diagonal(x);
        }
        if Self::close(x, y) {
            return self.diagonal(0.5 * (x + y));
        }
        self.prefactor() * (px.0 * py.1 - px.1 * py.0) / (x - y)
    }
}

impl Kernel for KernelSpec {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.combine(x, y, self.phi_psi(x), self.phi_psi(y))
    }

    fn row(&self, x: f64, ys: &[f64]) -> Vec<f64> {
        let px = self.phi_psi(x);
        ys.iter().map(|&y| self.combine(x, y, px, self.phi_psi(y))).collect()
    }

    fn matrix(&self, xs: &[f64]) -> Vec<f64> {
        let parts: Vec<(f64, f64)> = xs.iter().map(|&x| self.phi_psi(x)).collect();
        let diag: Vec<f64> = xs.iter().map(|&x| self.diagonal(x)).collect();
        let n = xs.len();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = diag[i];
            for j in 0..i {
                let v = if Self::close(xs[i], xs[j]) {
                    self.diagonal(0.5 * (xs[i] + xs[j]))
                } else {
                    self.prefactor() * (parts[i].0 * parts[j].1 - parts[i].1 * parts[j].0) / (xs[i] - xs[j])
                };
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        m
    }
}

/// K^soft(x, y).
pub fn kernel_soft(x: f64, y: f64) -> f64 {
    KernelSpec::Soft.eval(x, y)
}

/// K^hard_a(x, y) for x, y > 0.
pub fn kernel_hard(a: f64, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return invalid(format!("hard kernel needs positive arguments, got ({x}, {y})"));
    }
    Ok(KernelSpec::hard(a)?.eval(x, y))
}

/// Quadrature rule suited to a kernel on a domain. Finite domains starting
/// at 0 for the hard kernel use x = s t², which absorbs the x^{a/2} branch.
pub fn domain_rule(kernel: &KernelSpec, domain: Domain, n: usize) -> Result<QuadratureRule> {
    let base = gauss_legendre(n)?;
    match (kernel, domain) {
        (KernelSpec::Hard { .. }, Domain::Finite { a, b }) if a == 0.0 && b > 0.0 => {
            let t = base.on_interval(0.0, 1.0);
            Ok(QuadratureRule {
                nodes: t.nodes.iter().map(|&u| b * u * u).collect(),
                weights: t.nodes.iter().zip(&t.weights).map(|(&u, &w)| 2.0 * b * u * w).collect(),
            })
        }
        _ => map_rule(&base, domain),
    }
}

/// Symmetrised Nyström matrix A_ij = √w_i K(x_i, x_j) √w_j on a rule.
#[derive(Debug, Clone)]
pub struct OperatorDiscretization<K> {
    pub kernel: K,
    pub rule: QuadratureRule,
    pub sqrt_w: Vec<f64>,
    pub matrix: DenseMatrix<f64>,
}

impl<K: Kernel> OperatorDiscretization<K> {
    pub fn new(kernel: K, rule: QuadratureRule) -> Result<Self> {
        if rule.weights.iter().any(|&w| !(w >= 0.0)) {
            return invalid("quadrature weights must be nonnegative");
        }
        let sqrt_w: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
        let n = rule.len();
        let raw = kernel.matrix(&rule.nodes);
        let matrix = DenseMatrix::from_fn(n, |i, j| sqrt_w[i] * raw[i * n + j] * sqrt_w[j]);
        Ok(OperatorDiscretization {
            kernel,
            rule,
            sqrt_w,
            matrix,
        })
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    /// I − A.
    pub fn identity_minus(&self) -> DenseMatrix<f64> {
        let n = self.len();
        DenseMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 } - self.matrix[(i, j)])
    }

    /// det(I − K) on the discretised domain.
    pub fn det(&self) -> Result<f64> {
        det_lu(&self.identity_minus())
    }

    pub fn resolvent(&self) -> Result<Resolvent<'_, K>> {
        let lu = lu_factor(&self.identity_minus())?;
        Ok(Resolvent { disc: self, lu })
    }
}

/// Factorised I − A with helpers for resolvent kernels and inverse actions.
pub struct Resolvent<'a, K> {
    disc: &'a OperatorDiscretization<K>,
    lu: LuFactors<f64>,
}

impl<'a, K: Kernel> Resolvent<'a, K> {
    pub fn det(&self) -> f64 {
        self.lu.det()
    }

    /// √w_j K(x_j, ξ).
    fn weighted_column(&self, xi: f64) -> Vec<f64> {
        self.disc
            .kernel
            .row(xi, &self.disc.rule.nodes)
            .into_iter()
            .zip(&self.disc.sqrt_w)
            .map(|(k, w)| k * w)
            .collect()
    }

    /// R(ξ, η) for R = K(I − K)^{-1}.
    pub fn kernel(&self, xi: f64, eta: f64) -> Result<f64> {
        let ce = self.weighted_column(eta);
        let rho = self.lu.solve(&ce)?;
        let cx = if xi == eta { ce } else { self.weighted_column(xi) };
        Ok(self.disc.kernel.eval(xi, eta) + cx.iter().zip(&rho).map(|(a, b)| a * b).sum::<f64>())
    }

    /// 2×2 matrix [R(ξ_i, ξ_j)].
    pub fn kernel_matrix2(&self, x1: f64, x2: f64) -> Result<[[f64; 2]; 2]> {
        let c1 = self.weighted_column(x1);
        let c2 = self.weighted_column(x2);
        let r1 = self.lu.solve(&c1)?;
        let r2 = self.lu.solve(&c2)?;
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let k = &self.disc.kernel;
        let r11 = k.eval(x1, x1) + dot(&c1, &r1);
        let r22 = k.eval(x2, x2) + dot(&c2, &r2);
        let r12 = k.eval(x1, x2) + 0.5 * (dot(&c1, &r2) + dot(&c2, &r1));
        Ok([[r11, r12], [r12, r22]])
    }

    /// ((I − K)^{-1} f)(ξ) from f at ξ and at the nodes.
    pub fn apply_inverse_at(&self, xi: f64, f_xi: f64, f_nodes: &[f64]) -> Result<f64> {
        let g = self.solve_weighted(f_nodes)?;
        let c = self.weighted_column(xi);
        Ok(f_xi + c.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>())
    }

    /// √W (I − KW)^{-1} f at the nodes, i.e. (I − A)^{-1} √W f.
    pub fn solve_weighted(&self, f_nodes: &[f64]) -> Result<Vec<f64>> {
        let b: Vec<f64> = f_nodes.iter().zip(&self.disc.sqrt_w).map(|(f, w)| f * w).collect();
        self.lu.solve(&b)
    }

    /// ⟨f, (I − K)^{-1} g⟩ on the domain.
    pub fn inner(&self, f_nodes: &[f64], g_nodes: &[f64]) -> Result<f64> {
        let h = self.solve_weighted(g_nodes)?;
        Ok(f_nodes
            .iter()
            .zip(&self.disc.sqrt_w)
            .zip(&h)
            .map(|((f, w), h)| f * w * h)
            .sum())
    }

    pub fn discretization(&self) -> &OperatorDiscretization<K> {
        self.disc
    }
}

fn default_domain_rule(kernel: &KernelSpec, domain: Domain, n: usize) -> Result<QuadratureRule> {
    domain_rule(kernel, domain, n)
}

/// det(I − K) at order n without a convergence check.
pub fn nystrom_det_at<K: Kernel>(kernel: K, rule: QuadratureRule) -> Result<f64> {
    OperatorDiscretization::new(kernel, rule)?.det()
}

/// det(I − K) on a domain at order n, checked against order 2n.
pub fn nystrom_det(kernel: KernelSpec, domain: Domain, n: usize) -> Result<f64> {
    nystrom_det_checked(kernel, domain, n, DEFAULT_CONVERGENCE_TOL)
}

pub fn nystrom_det_checked(kernel: KernelSpec, domain: Domain, n: usize, tol: f64) -> Result<f64> {
    let d1 = nystrom_det_at(kernel, default_domain_rule(&kernel, domain, n)?)?;
    let d2 = nystrom_det_at(kernel, default_domain_rule(&kernel, domain, 2 * n)?)?;
    if (d1 - d2).abs() > tol {
        return Err(Error::NoConvergence(format!(
            "Nyström determinant: order {n} gives {d1:e}, order {} gives {d2:e}",
            2 * n
        )));
    }
    Ok(d1)
}

/// Rules for the two blocks (y, x) and (x, ∞) of the block determinant.
#[derive(Debug, Clone)]
pub struct BlockRules {
    pub inner: QuadratureRule,
    pub outer: QuadratureRule,
}

impl BlockRules {
    pub fn new(y: f64, x: f64, n_inner: usize, n_outer: usize, scale: f64) -> Result<Self> {
        if !(y < x) {
            return invalid(format!("block determinant needs y < x, got y = {y}, x = {x}"));
        }
        Ok(BlockRules {
            inner: map_rule(&gauss_legendre(n_inner)?, Domain::Finite { a: y, b: x })?,
            outer: map_rule(&gauss_legendre(n_outer)?, Domain::SemiInfinite { s: x, scale })?,
        })
    }
}

/// The real symmetric Nyström matrix of K on (y, x) ∪ (x, ∞), with the
/// number of nodes in the first block.
pub struct BlockOperator {
    pub matrix: DenseMatrix<f64>,
    pub inner_len: usize,
}

impl BlockOperator {
    pub fn new<K: Kernel>(kernel: &K, rules: &BlockRules) -> Self {
        let nodes: Vec<f64> = rules.inner.nodes.iter().chain(&rules.outer.nodes).copied().collect();
        let sw: Vec<f64> = rules
            .inner
            .weights
            .iter()
            .chain(&rules.outer.weights)
            .map(|w| w.sqrt())
            .collect();
        let n = nodes.len();
        let raw = kernel.matrix(&nodes);
        BlockOperator {
            matrix: DenseMatrix::from_fn(n, |i, j| sw[i] * raw[i * n + j] * sw[j]),
            inner_len: rules.inner.len(),
        }
    }

    /// det(I − [[zK, K], [zK, K]]).
    ///
    /// The similarity diag(√z, 1) turns the block pattern into a symmetric
    /// scaling, but the plain column scaling is used here so that z may be
    /// any complex number.
    pub fn det_z(&self, z: Complex64) -> Result<Complex64> {
        let n = self.matrix.dim();
        let m = DenseMatrix::from_fn(n, |i, j| {
            let k = self.matrix[(i, j)];
            let zk = if j < self.inner_len { z * k } else { Complex64::new(k, 0.0) };
            let id = if i == j { 1.0 } else { 0.0 };
            Complex64::new(id, 0.0) - zk
        });
        det_lu(&m)
    }

    /// det(I − [[zK, K], [zK, K]]) for real z.
    pub fn det_real(&self, z: f64) -> Result<f64> {
        let n = self.matrix.dim();
        let m = DenseMatrix::from_fn(n, |i, j| {
            let k = self.matrix[(i, j)];
            let zk = if j < self.inner_len { z * k } else { k };
            if i == j { 1.0 - zk } else { -zk }
        });
        det_lu(&m)
    }

    /// d/dz det at z = 1 by the Cauchy formula, using conjugate symmetry.
    pub fn d_det_dz_at_1(&self) -> Result<f64> {
        cauchy_dz_at_1_real(|z| self.det_z(z), |z| self.det_real(z), CONTOUR_RADIUS, CONTOUR_POINTS)
    }
}

/// det(I − [[zK, K], [zK, K]]) on L²(y, x) ⊕ L²(x, ∞) with order n per block.
pub fn block_det_z(z: Complex64, y: f64, x: f64, n: usize) -> Result<Complex64> {
    let rules = BlockRules::new(y, x, n, n, DEFAULT_MAP_SCALE)?;
    BlockOperator::new(&KernelSpec::Soft, &rules).det_z(z)
}

/// f′(1) by the trapezoidal rule on |z − 1| = r with `points` samples.
pub fn cauchy_dz_at_1<F>(f: F, r: f64, points: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(r > 0.0) {
        return invalid(format!("contour radius must be positive, got {r}"));
    }
    if points < 2 {
        return invalid("contour needs at least 2 points");
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..points {
        let theta = 2.0 * PI * k as f64 / points as f64;
        let e = Complex64::from_polar(1.0, theta);
        acc += f(Complex64::new(1.0, 0.0) + e * r)? / e;
    }
    Ok(acc / (r * points as f64))
}

/// As [`cauchy_dz_at_1`] for f real on the real axis: f(z̄) = conj f(z), so
/// only the upper half of the contour is sampled. `points` must be even.
pub fn cauchy_dz_at_1_real<F, G>(f: F, f_real: G, r: f64, points: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
    G: Fn(f64) -> Result<f64>,
{
    if !(r > 0.0) {
        return invalid(format!("contour radius must be positive, got {r}"));
    }
    if points < 2 || !points.is_multiple_of(2) {
        return invalid("conjugate-symmetric contour needs an even number of points");
    }
    let half = points / 2;
    let mut acc = f_real(1.0 + r)? - f_real(1.0 - r)?;
    for k in 1..half {
        let theta = 2.0 * PI * k as f64 / points as f64;
        let e = Complex64::from_polar(1.0, theta);
        acc += 2.0 * (f(Complex64::new(1.0, 0.0) + e * r)? / e).re;
    }
    Ok(acc / (r * points as f64))
}

/// Janossy density of the two largest points at (x1, x2), x1 > x2:
/// det(I − K)_{(x2,∞)} · det[R(x_i, x_j)] with R = K(I − K)^{-1}.
pub fn fredholm_minor_density<K: Kernel>(kernel: K, x1: f64, x2: f64, n: usize, scale: f64) -> Result<f64> {
    if !(x1 > x2) {
        return invalid(format!("minor density needs x1 > x2, got ({x1}, {x2})"));
    }
    let rule = map_rule(&gauss_legendre(n)?, Domain::SemiInfinite { s: x2, scale })?;
    let disc = OperatorDiscretization::new(kernel, rule)?;
    let res = disc.resolvent()?;
    let r = res.kernel_matrix2(x1, x2)?;
    Ok(res.det() * (r[0][0] * r[1][1] - r[0][1] * r[1][0]))
}
