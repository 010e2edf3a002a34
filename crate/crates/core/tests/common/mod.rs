//! Shared helpers for the integration tests: Gauss-Legendre quadrature (the
//! independent oracle for the special functions) and random Hermitian
//! matrix generation.

#![allow(dead_code)]

use losmimo::CMat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1], by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p1, p0) = legendre_pair(n, z);
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (p1, p0) = legendre_pair(n, z);
        let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// (P_n(x), P_{n-1}(x)) by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Integral of f over [a, b] on one Gauss-Legendre panel.
pub fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(half * x + mid);
    }
    half * acc
}

/// Integral of f over [a, b] split into `panels` equal Gauss-Legendre panels.
pub fn gl_integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    nodes: &[f64],
    weights: &[f64],
) -> f64 {
    let step = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * step;
        acc += gl_panel(&f, lo, lo + step, nodes, weights);
    }
    acc
}

/// Random Hermitian matrix with entries of order 1.
pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut a = CMat::zeros(n, n);
    for i in 0..n {
        a.set(i, i, Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0));
        for j in (i + 1)..n {
            let v = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            a.set(i, j, v);
            a.set(j, i, v.conj());
        }
    }
    a
}

/// Random Hermitian PSD matrix G^H G / n; full rank with probability 1.
pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    });
    g.scaled_gram(1.0 / n as f64)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mean and unbiased variance of a slice.
pub fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Standard error of the sample mean.
pub fn std_error(values: &[f64]) -> f64 {
    let (_, var) = mean_var(values);
    (var / values.len() as f64).sqrt()
}
