//! Dense LU determinants over real and complex fields, and Hermitian
//! eigenvalues by Householder tridiagonalisation and implicit QL.

use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Send
    + Sync
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return invalid("matrix rows must all have length equal to the row count");
        }
        Ok(DenseMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("matrix entries"))
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Partially pivoted LU factors, PA = LU with unit-diagonal L.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
    odd_swaps: bool,
    zero_pivot: Option<(usize, f64)>,
}

fn factor_in_place<T: Scalar>(n: usize, a: &mut [T], perm: &mut [usize]) -> (bool, Option<(usize, f64)>) {
    let mut odd = false;
    let mut zero_pivot = None;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].modulus();
        for i in k + 1..n {
            let v = a[i * n + k].modulus();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            odd = !odd;
        }
        let pivot = a[k * n + k];
        if pivot.modulus() == 0.0 {
            zero_pivot.get_or_insert((k, 0.0));
            continue;
        }
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let row_k = &head[k * n..];
        for row in tail.chunks_exact_mut(n) {
            let f = row[k] / pivot;
            row[k] = f;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..n {
                row[j] = row[j] - f * row_k[j];
            }
        }
    }
    (odd, zero_pivot)
}

pub fn lu_factor<T: Scalar>(m: &DenseMatrix<T>) -> Result<LuFactors<T>> {
    m.check_finite()?;
    let n = m.n;
    let mut lu = m.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let (odd_swaps, zero_pivot) = factor_in_place(n, &mut lu, &mut perm);
    Ok(LuFactors {
        n,
        lu,
        perm,
        odd_swaps,
        zero_pivot,
    })
}

impl<T: Scalar> LuFactors<T> {
    pub fn det(&self) -> T {
        if self.zero_pivot.is_some() {
            return T::zero();
        }
        let mut d = (0..self.n).fold(T::one(), |acc, i| acc * self.lu[i * self.n + i]);
        if self.odd_swaps {
            d = -d;
        }
        d
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.n;
        if let Some((column, pivot)) = self.zero_pivot {
            return Err(Error::Singular { column, pivot });
        }
        if b.len() != n {
            return invalid(format!("right-hand side has length {}, expected {n}", b.len()));
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s = row.iter().zip(&x[..i]).fold(T::zero(), |acc, (&l, &v)| acc + l * v);
            x[i] = x[i] - s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s = row.iter().zip(&x[i + 1..]).fold(T::zero(), |acc, (&u, &v)| acc + u * v);
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }
}

/// Determinant by partially pivoted LU.
pub fn det_lu<T: Scalar>(m: &DenseMatrix<T>) -> Result<T> {
    m.check_finite()?;
    let n = m.n;
    let mut a = m.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let (odd, zero) = factor_in_place(n, &mut a, &mut perm);
    if zero.is_some() {
        return Ok(T::zero());
    }
    let d = (0..n).fold(T::one(), |acc, i| acc * a[i * n + i]);
    Ok(if odd { -d } else { d })
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit-shift QL, ascending.
/// `off[i]` couples rows i and i+1.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return invalid("off-diagonal must have one entry fewer than the diagonal");
    }
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.to_vec();
    e.push(0.0);
    let scale = d.iter().zip(&e).map(|(a, b)| a.abs() + b.abs()).fold(0.0, f64::max);
    let floor = 0.5 * f64::EPSILON * scale;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence(format!("QL iteration at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Number of eigenvalues strictly below x (Sturm sequence count).
/// `off_sq[i]` is the squared coupling between rows i and i+1.
pub fn sturm_count(diag: &[f64], off_sq: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let e2 = if i == 0 { 0.0 } else { off_sq[i - 1] };
        q = d - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The k largest eigenvalues of a symmetric tridiagonal matrix, descending,
/// by Sturm bisection.
pub fn tridiagonal_top_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if off.len() + 1 != n || k > n {
        return invalid("inconsistent tridiagonal dimensions");
    }
    let off_sq: Vec<f64> = off.iter().map(|e| e * e).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        // The (n-1-j)-th eigenvalue in ascending order: smallest x with count(x) ≥ n - j.
        let target = n - j;
        let (mut a, mut b) = (lo - 1e-12 * span, hi + 1e-12 * span);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, &off_sq, mid) >= target {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Reduces a Hermitian matrix to real symmetric tridiagonal form (diag, |off|).
pub fn hermitian_tridiagonalize(m: &DenseMatrix<Complex64>) -> Result<(Vec<f64>, Vec<f64>)> {
    m.check_finite()?;
    let n = m.n;
    let scale = m.data.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in 0..=i {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 * scale {
                return invalid(format!("matrix is not Hermitian at ({i}, {j})"));
            }
        }
    }
    let mut a = m.data.clone();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let len = n - k - 1;
        let norm = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            off.push(0.0);
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = a[i * n + k];
        }
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        off.push(norm);
        if vnorm == 0.0 {
            continue;
        }
        for z in v[..len].iter_mut() {
            *z /= vnorm;
        }
        // Trailing block A22 ← H A22 H with H = I − 2 v v*.
        for r in 0..len {
            let row = &a[(k + 1 + r) * n + k + 1..(k + 1 + r) * n + n];
            let s = row.iter().zip(&v[..len]).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x * y);
            p[r] = s * 2.0;
        }
        let kk = v[..len]
            .iter()
            .zip(&p[..len])
            .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
        for r in 0..len {
            p[r] -= v[r] * kk;
        }
        for r in 0..len {
            let (vr, pr) = (v[r], p[r]);
            let row = &mut a[(k + 1 + r) * n + k + 1..(k + 1 + r) * n + n];
            for (c, x) in row.iter_mut().enumerate() {
                *x -= vr * p[c].conj() + pr * v[c].conj();
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((diag, off))
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DenseMatrix<Complex64>) -> Result<Vec<f64>> {
    let (d, e) = hermitian_tridiagonalize(m)?;
    tridiagonal_eigenvalues(&d, &e)
}

/// All eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DenseMatrix<f64>) -> Result<Vec<f64>> {
    let c = DenseMatrix::from_fn(m.n, |i, j| Complex64::new(m[(i, j)], 0.0));
    hermitian_eigenvalues(&c)
}
