//! Smoothing a one-parameter rotation group `e^{sG}` against a kernel,
//! `α_f = ∫ f(s) e^{sG} ds`, by trapezoidal quadrature.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Agreement required between the step-`h` and step-`2h` rules.
const QUADRATURE_TOL: f64 = 1e-9;

/// `f_t(s) = exp(−s²/4t) / √(4πt)`.
pub fn heat_kernel(t: f64, s: f64) -> f64 {
    (-s * s / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

struct Nodes {
    s: Vec<f64>,
    h: f64,
    exps: Vec<DMatrix<f64>>,
}

fn nodes(g: &DMatrix<f64>, window: f64, step: f64) -> Nodes {
    // even number of intervals so that every other node forms the coarse rule
    let mut n = (2.0 * window / step).ceil() as usize;
    n += n % 2;
    let n = n.max(2);
    let h = 2.0 * window / n as f64;
    let s: Vec<f64> = (0..=n).map(|k| -window + k as f64 * h).collect();
    let exps = s.iter().map(|&x| (g * x).exp()).collect();
    Nodes { s, h, exps }
}

fn trapezoid(nodes: &Nodes, f: &dyn Fn(f64) -> f64, stride: usize) -> DMatrix<f64> {
    let dim = nodes.exps[0].nrows();
    let last = nodes.s.len() - 1;
    let mut acc = DMatrix::zeros(dim, dim);
    for k in (0..=last).step_by(stride) {
        let w = if k == 0 || k == last { 0.5 } else { 1.0 };
        acc += &nodes.exps[k] * (w * f(nodes.s[k]));
    }
    acc * (nodes.h * stride as f64)
}

fn converged(nodes: &Nodes, f: &dyn Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let fine = trapezoid(nodes, f, 1);
    let coarse = trapezoid(nodes, f, 2);
    let gap = (&fine - &coarse).norm();
    if gap > QUADRATURE_TOL * fine.norm().max(1.0) {
        return Err(Error::Convergence(format!(
            "trapezoid rule changed by {gap:e} when halving the step"
        )));
    }
    Ok(fine)
}

fn check_skew(g: &DMatrix<f64>) -> Result<()> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch {
            expected: g.nrows(),
            got: g.ncols(),
        });
    }
    let r = (g + g.transpose()).norm();
    if r > 1e-12 * g.norm().max(1.0) {
        return Err(Error::Precondition(format!("generator is not skew-symmetric (‖G + Gᵀ‖ = {r:e})")));
    }
    Ok(())
}

/// `∫_{−window}^{window} f(s) e^{sG} ds` with step at most `step`.
pub fn kernel_average(g: &DMatrix<f64>, f: impl Fn(f64) -> f64, window: f64, step: f64) -> Result<DMatrix<f64>> {
    check_skew(g)?;
    if !(window > 0.0 && step > 0.0) {
        return Err(Error::Precondition("window and step must be positive".into()));
    }
    converged(&nodes(g, window, step), &f)
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingResult {
    /// `∫ f_t(s) e^{sG} ds`.
    #[serde(skip)]
    pub lhs: DMatrix<f64>,
    /// `e^{tG²}`.
    #[serde(skip)]
    pub rhs: DMatrix<f64>,
    pub kernel_residual: f64,
    /// `‖G·α_f + α_{f'}‖` with `f = f_t`.
    pub derivation_residual: f64,
}

/// Heat-kernel smoothing of `e^{sG}` against its closed form `e^{tG²}`, and
/// the derivation rule `G·α_f = −α_{f'}` under the same quadrature.
pub fn smooth_by_kernel(g: &DMatrix<f64>, t: f64) -> Result<SmoothingResult> {
    check_skew(g)?;
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("smoothing time must be > 0, got {t}")));
    }
    let window = 8.0 * (2.0 * t).sqrt();
    let step = 1e-2 * t.sqrt();
    let nodes = nodes(g, window, step);
    let f = |s: f64| heat_kernel(t, s);
    let df = |s: f64| -s / (2.0 * t) * heat_kernel(t, s);
    let lhs = converged(&nodes, &f)?;
    let alpha_df = converged(&nodes, &df)?;

    let g2 = g * g;
    let sym = (&g2 + g2.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (t * l).exp()));
    let rhs = &eig.eigenvectors * diag * eig.eigenvectors.transpose();

    let kernel_residual = (&lhs - &rhs).norm();
    let derivation_residual = (g * &lhs + alpha_df).norm();
    Ok(SmoothingResult {
        lhs,
        rhs,
        kernel_residual,
        derivation_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_generator() {
        let g = DMatrix::zeros(3, 3);
        let r = smooth_by_kernel(&g, 0.5).unwrap();
        assert!((r.lhs - DMatrix::identity(3, 3)).norm() < 1e-12);
        assert_eq!(r.rhs, DMatrix::identity(3, 3));
    }

    #[test]
    fn planar_rotation_gives_characteristic_function() {
        let g = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let r = smooth_by_kernel(&g, 1.0).unwrap();
        let expected = DMatrix::identity(2, 2) * (-1.0f64).exp();
        assert!((&r.lhs - &expected).norm() < 1e-10);
        assert!((&r.rhs - &expected).norm() < 1e-14);
    }

    #[test]
    fn random_skew_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let n = rng.random_range(2..=6);
            let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let g = &a - a.transpose();
            for t in [0.1, 1.0] {
                let r = smooth_by_kernel(&g, t).unwrap();
                assert!(r.kernel_residual <= 1e-6, "{}", r.kernel_residual);
                assert!(r.derivation_residual <= 1e-6, "{}", r.derivation_residual);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let g = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(smooth_by_kernel(&g, 1.0).is_err());
        assert!(smooth_by_kernel(&DMatrix::zeros(2, 2), 0.0).is_err());
        // a kernel too rough for the step
        let rough = kernel_average(&DMatrix::zeros(1, 1), |s| (400.0 * s).cos(), 1.0, 0.01);
        assert!(matches!(rough, Err(Error::Convergence(_))));
    }
}
