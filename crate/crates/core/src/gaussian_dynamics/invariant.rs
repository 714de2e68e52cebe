//! A non-trivial `σ`-invariant unitary built from a `(π ⊗ π)`-invariant vector.
//!
//! `ξ ∈ ℋ ⊗ ℋ` is read as a matrix `X`, `|X| = (XXᵀ)^{1/2}` is cut spectrally
//! at `λ`, and the resulting projection `η = Σ vᵢ vᵢᵀ` gives
//! `u = exp(πi Σ s(vᵢ)²)`. The factors `exp(πi s(vᵢ)²)` commute on the full
//! Fock space but not after truncation; the exponential of the sum keeps the
//! invariance exact at every cap.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::ModeVector;
use crate::group_rep::Word;
use crate::wick::{field, op_exp, FockOperator};

use super::{act_on_operator, GaussianActionCtx};

/// Invariance tolerance for the input tensor.
const TENSOR_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct InvariantUnitary {
    pub u: FockOperator,
    /// The spectral projection `E_λ(|X|)`.
    pub eta: DMatrix<f64>,
    /// Orthonormal range vectors of `eta`.
    pub vectors: Vec<Vec<f64>>,
    /// `max_s ‖σ_s(u) − u‖_HS` over generators.
    pub invariance_residual: f64,
    /// `τ(u) = ⟨uΩ, Ω⟩`.
    pub trace: Complex64,
}

pub fn invariant_unitary(ctx: &GaussianActionCtx, xi2: &DMatrix<f64>, lambda: f64) -> Result<InvariantUnitary> {
    let pi = ctx.rep();
    let d = pi.dim();
    if xi2.nrows() != d || xi2.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: xi2.nrows().max(xi2.ncols()),
        });
    }
    for g in pi.generator_matrices() {
        let r = (g * xi2 * g.transpose() - xi2).norm();
        if r > TENSOR_TOL * xi2.norm().max(1.0) {
            return Err(Error::Precondition(format!("tensor is not (π ⊗ π)-invariant (residual {r:e})")));
        }
    }
    let xx = xi2 * xi2.transpose();
    let eig = SymmetricEigen::new((&xx + xx.transpose()) * 0.5);
    let abs_vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let radius = abs_vals.iter().copied().fold(0.0, f64::max);
    let kept: Vec<usize> = (0..d).filter(|&i| abs_vals[i] >= lambda && abs_vals[i] > 0.0).collect();
    if kept.is_empty() {
        return Err(Error::EmptySpectralCut { lambda, radius });
    }
    let vectors: Vec<Vec<f64>> = kept
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    let mut eta = DMatrix::zeros(d, d);
    for v in &vectors {
        let col = nalgebra::DVector::from_column_slice(v);
        eta += &col * col.transpose();
    }

    let basis = ctx.basis();
    let mut q = FockOperator::zeros(basis);
    for v in &vectors {
        let s = field(basis, &ModeVector::real(v), ctx.convention())?;
        q = q.add(&s.mul(&s)?)?;
    }
    let u = op_exp(&q, Complex64::new(0.0, PI))?;
    let mut invariance_residual: f64 = 0.0;
    for s in 0..pi.generator_count() {
        let moved = act_on_operator(ctx, &Word::generator(s), &u)?;
        invariance_residual = invariance_residual.max(moved.sub(&u)?.hs_norm());
    }
    let trace = u.vacuum_expectation();
    Ok(InvariantUnitary {
        u,
        eta,
        vectors,
        invariance_residual,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_rep::{rotation, GroupPresentation, OrthogonalRep};
    use crate::wick::FieldConvention;
    use std::sync::Arc;

    fn ctx(pi: OrthogonalRep, cap: usize) -> GaussianActionCtx {
        GaussianActionCtx::new(Arc::new(pi), GroupPresentation::free(1), cap, FieldConvention::default()).unwrap()
    }

    #[test]
    fn rotation_invariant_unitary() {
        let c = ctx(OrthogonalRep::new(2, vec![rotation(1.0)]).unwrap(), 10);
        let r = invariant_unitary(&c, &DMatrix::identity(2, 2), 0.5).unwrap();
        assert!((&r.eta - DMatrix::<f64>::identity(2, 2)).norm() < 1e-12);
        assert!(r.invariance_residual <= 1e-6, "{}", r.invariance_residual);
        assert!(r.trace.norm() <= 1.0 - 1e-3, "{}", r.trace);
        assert!(r.u.unitarity_residual() < 1e-10);
    }

    #[test]
    fn product_of_factor_exponentials_is_not_invariant_after_truncation() {
        let c = ctx(OrthogonalRep::new(2, vec![rotation(1.0)]).unwrap(), 6);
        let basis = c.basis();
        let mut u = FockOperator::identity(basis);
        for i in 0..2 {
            let s = field(basis, &ModeVector::unit(2, i), c.convention()).unwrap();
            u = u.mul(&op_exp(&s.mul(&s).unwrap(), Complex64::new(0.0, PI)).unwrap()).unwrap();
        }
        let moved = act_on_operator(&c, &Word::generator(0), &u).unwrap();
        assert!(moved.sub(&u).unwrap().hs_norm() > 1e-6);
    }

    #[test]
    fn trivial_representation() {
        let c = ctx(OrthogonalRep::trivial(1, 2), 6);
        let mut x = DMatrix::zeros(2, 2);
        x[(0, 0)] = 1.0;
        let r = invariant_unitary(&c, &x, 1.0).unwrap();
        assert_eq!(r.invariance_residual, 0.0);
        assert_eq!(r.vectors.len(), 1);
    }

    #[test]
    fn errors() {
        let c = ctx(OrthogonalRep::new(2, vec![rotation(1.0)]).unwrap(), 4);
        assert!(matches!(
            invariant_unitary(&c, &DMatrix::identity(2, 2), 1.5),
            Err(Error::EmptySpectralCut { .. })
        ));
        let mut x = DMatrix::zeros(2, 2);
        x[(0, 0)] = 1.0;
        assert!(matches!(invariant_unitary(&c, &x, 0.5), Err(Error::Precondition(_))));
    }
}
