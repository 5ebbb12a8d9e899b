//! GUE Monte Carlo at the soft edge. Draw `k` of a batch uses ChaCha20
//! stream `k` under the batch seed, so batches are reproducible in any
//! execution order.

use crate::error::{invalid, Result};
use crate::linalg::{hermitian_eigenvalues, tridiagonal_top_eigenvalues, DenseMatrix};
use crate::parallel::{try_map_range, Parallelism};
use crate::softedge::DistributionTable;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

pub const MAX_N: usize = 2000;
pub const BIN_WIDTH: f64 = 0.2;
pub const HISTOGRAM_RANGE: (f64, f64) = (0.0, 6.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SamplingMethod {
    /// Dense Hermitian matrix and its full spectrum.
    FullHermitian,
    /// Householder-equivalent tridiagonal model, top two eigenvalues by bisection.
    #[default]
    Tridiagonal,
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return invalid(format!("matrix dimension must lie in [2, {MAX_N}], got {n}"));
    }
    Ok(())
}

pub fn draw_rng(seed: u64, draw: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    rng
}

/// Hermitian H with density ∝ exp(−Tr H²).
pub fn gue_matrix<R: Rng>(n: usize, rng: &mut R) -> DenseMatrix<Complex64> {
    let mut h = DenseMatrix::zeros(n);
    let diag_sd = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let x: f64 = rng.sample(StandardNormal);
        h[(i, i)] = Complex64::new(diag_sd * x, 0.0);
        for j in i + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(0.5 * re, 0.5 * im);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Ascending eigenvalues of one GUE draw (stream 0 of `seed`).
pub fn sample_gue(n: usize, seed: u64) -> Result<Vec<f64>> {
    sample_gue_draw(n, seed, 0)
}

pub fn sample_gue_draw(n: usize, seed: u64, draw: u64) -> Result<Vec<f64>> {
    check_n(n)?;
    hermitian_eigenvalues(&gue_matrix(n, &mut draw_rng(seed, draw)))
}

/// Two largest eigenvalues (descending) of the tridiagonal model with
/// diagonal N(0, 1/2) and couplings χ_{2k}/2, k = n−1, …, 1.
pub fn sample_top_two_tridiagonal(n: usize, seed: u64, draw: u64) -> Result<[f64; 2]> {
    check_n(n)?;
    let mut rng = draw_rng(seed, draw);
    let diag_sd = std::f64::consts::FRAC_1_SQRT_2;
    let diag: Vec<f64> = (0..n).map(|_| diag_sd * rng.sample::<f64, _>(StandardNormal)).collect();
    let mut off = Vec::with_capacity(n - 1);
    for k in (1..n).rev() {
        let chi2 = ChiSquared::new(2.0 * k as f64).expect("positive degrees of freedom");
        off.push(0.5 * chi2.sample(&mut rng).sqrt());
    }
    let top = tridiagonal_top_eigenvalues(&diag, &off, 2)?;
    Ok([top[0], top[1]])
}

/// X = √2 N^{1/6}(λ − √(2N)) for the two largest eigenvalues, largest first.
pub fn soft_edge_rescale(eigs: &[f64], n: usize) -> Result<(f64, f64)> {
    if n < 2 || eigs.len() < 2 {
        return invalid(format!("rescaling needs N ≥ 2 and two eigenvalues, got N = {n}, {} values", eigs.len()));
    }
    let (mut l1, mut l2) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &l in eigs {
        if l > l1 {
            l2 = l1;
            l1 = l;
        } else if l > l2 {
            l2 = l;
        }
    }
    let nf = n as f64;
    let scale = std::f64::consts::SQRT_2 * nf.powf(1.0 / 6.0);
    let edge = (2.0 * nf).sqrt();
    Ok((scale * (l1 - edge), scale * (l2 - edge)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub n: usize,
    pub draws: usize,
    pub seed: u64,
    pub method: SamplingMethod,
    /// Rescaled largest eigenvalue X₁ per draw.
    pub largest: Vec<f64>,
    /// X₁ − X₂ per draw.
    pub spacings: Vec<f64>,
}

impl SampleBatch {
    pub fn generate(n: usize, draws: usize, seed: u64, method: SamplingMethod, parallelism: Parallelism) -> Result<Self> {
        check_n(n)?;
        let pairs = try_map_range(parallelism, draws, |k| {
            let k = k as u64;
            match method {
                SamplingMethod::FullHermitian => soft_edge_rescale(&sample_gue_draw(n, seed, k)?, n),
                SamplingMethod::Tridiagonal => soft_edge_rescale(&sample_top_two_tridiagonal(n, seed, k)?, n),
            }
        })?;
        Ok(SampleBatch {
            n,
            draws,
            seed,
            method,
            largest: pairs.iter().map(|p| p.0).collect(),
            spacings: pairs.iter().map(|p| p.0 - p.1).collect(),
        })
    }

    pub fn spacing_mean(&self) -> f64 {
        mean(&self.spacings)
    }

    pub fn spacing_std_error(&self) -> f64 {
        std_error(&self.spacings)
    }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn std_error(v: &[f64]) -> f64 {
    let m = mean(v);
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0);
    (var / v.len() as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
    pub density: f64,
}

/// Counts on [lo, hi) in bins of `width`; densities are normalized by the full sample size.
pub fn histogram(values: &[f64], width: f64, lo: f64, hi: f64) -> Result<Vec<HistogramBin>> {
    if !(width > 0.0 && hi > lo) {
        return invalid(format!("bad histogram range [{lo}, {hi}) with width {width}"));
    }
    let bins = ((hi - lo) / width).round() as usize;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v >= lo && v < hi {
            counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    let total = values.len().max(1) as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, &count)| HistogramBin {
            left: lo + k as f64 * width,
            right: lo + (k + 1) as f64 * width,
            count,
            density: count as f64 / (total * width),
        })
        .collect())
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_left,bin_right,count,density\n");
    for b in bins {
        let _ = writeln!(out, "{:.2},{:.2},{},{:.17e}", b.left, b.right, b.count, b.density);
    }
    out
}

/// sup |F_emp − F| over the sample.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// G interpolated linearly on the table grid; 0 below it and the last value above.
pub fn table_cdf(table: &DistributionTable, s: f64) -> f64 {
    let Some(&last) = table.cdf.last() else { return 0.0 };
    if s <= table.s_start {
        return table.cdf[0].max(0.0);
    }
    let u = (s - table.s_start) / table.s_step;
    let k = u.floor() as usize;
    if k + 1 >= table.len() {
        return last;
    }
    let w = u - k as f64;
    (1.0 - w) * table.cdf[k] + w * table.cdf[k + 1]
}

/// Inverse-CDF draws from a tabulated distribution.
pub fn sample_from_table(table: &DistributionTable, draws: usize, seed: u64) -> Result<Vec<f64>> {
    if table.len() < 2 {
        return invalid("table needs at least two rows");
    }
    let mut rng = draw_rng(seed, 0);
    let top = *table.cdf.last().unwrap();
    Ok((0..draws)
        .map(|_| {
            let u: f64 = rng.gen::<f64>() * top;
            let k = table.cdf.partition_point(|&g| g < u).clamp(1, table.len() - 1);
            let (g0, g1) = (table.cdf[k - 1], table.cdf[k]);
            let w = if g1 > g0 { (u - g0) / (g1 - g0) } else { 0.0 };
            table.s[k - 1] + w * table.s_step
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalReport {
    pub n: usize,
    pub draws: usize,
    pub seed: u64,
    pub ks_distance: f64,
    pub spacing_mean: f64,
    pub spacing_std_error: f64,
    pub histogram: Vec<HistogramBin>,
}

pub fn empirical_vs_theory(batch: &SampleBatch, table: &DistributionTable) -> Result<EmpiricalReport> {
    if batch.spacings.is_empty() {
        return invalid("empty batch");
    }
    Ok(EmpiricalReport {
        n: batch.n,
        draws: batch.draws,
        seed: batch.seed,
        ks_distance: ks_distance(&batch.spacings, |s| table_cdf(table, s)),
        spacing_mean: batch.spacing_mean(),
        spacing_std_error: batch.spacing_std_error(),
        histogram: histogram(&batch.spacings, BIN_WIDTH, HISTOGRAM_RANGE.0, HISTOGRAM_RANGE.1)?,
    })
}

/// Semicircle CDF on (−√(2N), √(2N)).
pub fn semicircle_cdf(x: f64, n: usize) -> f64 {
    let r = (2.0 * n as f64).sqrt();
    let t = (x / r).clamp(-1.0, 1.0);
    0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / std::f64::consts::PI
}
