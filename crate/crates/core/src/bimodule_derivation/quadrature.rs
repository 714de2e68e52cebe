//! Gaussian expectations: Gauss–Hermite quadrature (Golub–Welsch) and a
//! blocked, seeded Monte Carlo estimator.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::poly::{difference_quotient, PolyFunction};
use crate::error::{Error, Result};

/// Largest polynomial degree accepted by [`dirichlet_form`].
pub const MAX_DIRICHLET_DEGREE: usize = 12;

const MC_BLOCKS: usize = 16;

/// `m`-point rule for the standard Gaussian measure: nodes and weights
/// summing to 1, exact for polynomials of degree `≤ 2m − 1`.
pub fn gauss_hermite(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidInput("quadrature needs at least one node".into()));
    }
    // Jacobi matrix of the probabilists' Hermite recurrence
    let jac = DMatrix::from_fn(m, m, |r, c| if r + 1 == c || c + 1 == r { (r.max(c) as f64).sqrt() } else { 0.0 });
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pairs.iter().any(|&(x, w)| !x.is_finite() || !(w > 0.0)) {
        return Err(Error::Convergence(format!("Gauss–Hermite weights underflow at {m} nodes")));
    }
    Ok(pairs.into_iter().unzip())
}

/// `E[((f(x) − f(y))/(x − y))²]` for independent standard Gaussians `x, y`.
pub fn dirichlet_form(f: &PolyFunction) -> Result<f64> {
    if f.degree() > MAX_DIRICHLET_DEGREE {
        return Err(Error::Precondition(format!(
            "degree {} above the quadrature limit {MAX_DIRICHLET_DEGREE}",
            f.degree()
        )));
    }
    let dq = difference_quotient(f);
    let (nodes, weights) = gauss_hermite(f.degree() + 2)?;
    let mut acc = 0.0;
    for (x, wx) in nodes.iter().zip(&weights) {
        for (y, wy) in nodes.iter().zip(&weights) {
            acc += wx * wy * dq.eval(*x, *y).powi(2);
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

/// Monte Carlo estimate of [`dirichlet_form`]; block `k` draws from a
/// ChaCha stream seeded with `seed + k`, so results do not depend on thread
/// scheduling.
pub fn dirichlet_form_monte_carlo(f: &PolyFunction, samples: usize, seed: u64) -> MonteCarloEstimate {
    let dq = difference_quotient(f);
    let per_block = samples.div_ceil(MC_BLOCKS);
    let sums: Vec<(f64, f64, usize)> = (0..MC_BLOCKS)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let n = per_block.min(samples.saturating_sub(k * per_block));
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y: f64 = StandardNormal.sample(&mut rng);
                let v = dq.eval(x, y).powi(2);
                s += v;
                s2 += v * v;
            }
            (s, s2, n)
        })
        .collect();
    let (s, s2, n) = sums
        .into_iter()
        .fold((0.0, 0.0, 0), |acc, b| (acc.0 + b.0, acc.1 + b.1, acc.2 + b.2));
    let nf = n as f64;
    let mean = s / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
    MonteCarloEstimate {
        mean,
        std_err: (var / nf).sqrt(),
        samples: n,
    }
}

/// Mehler's formula `Φ^t f(x) = E[f(e^{−t}x + √(1 − e^{−2t}) Z)]`.
pub fn mehler(f: &PolyFunction, t: f64, x: f64) -> Result<f64> {
    let (nodes, weights) = gauss_hermite(f.degree() / 2 + 1)?;
    let a = (-t).exp();
    let b = (1.0 - (-2.0 * t).exp()).sqrt();
    Ok(nodes.iter().zip(&weights).map(|(z, w)| w * f.eval(a * x + b * z)).sum())
}
