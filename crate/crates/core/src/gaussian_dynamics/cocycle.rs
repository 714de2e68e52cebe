//! The exponential (Parthasarathy–Schmidt) cocycle `ω_γ = exp(−i s(b(γ)))`.
//!
//! The cocycle on the Gaussian space is `c(γ, x) = exp(i b(γ⁻¹))(x)` and
//! `ω_γ(x) = c(γ, γ⁻¹x) = exp(i π_γ b(γ⁻¹))`. Since `b(e) = 0` gives
//! `π_γ b(γ⁻¹) = −b(γ)`, this is the operator `exp(−i s(b(γ)))`.
//!
//! `exp(i s(ξ))Ω` carries Poisson(`‖ξ‖²`) mass in degree `k`, so the cap `D` is
//! checked against the Poisson tail of mean `‖b(γ)‖²`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::cohomology::RepCocycle;
use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, FockBasis, ModeVector};
use crate::group_rep::Word;
use crate::wick::{field, op_exp, FieldConvention, FockOperator};

use super::{act_on_operator, GaussianActionCtx};

/// Mass allowed beyond the cap.
pub const POISSON_TAIL_TOL: f64 = 1e-8;

/// Smallest `D` with `P(N > D) ≤ tol` for `N ~ Poisson(mean)`.
pub fn poisson_budget(mean: f64, tol: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let kmax = (mean + 60.0 * mean.sqrt() + 60.0).ceil() as usize;
    let mut pmf = Vec::with_capacity(kmax + 1);
    let mut p = (-mean).exp();
    for k in 0..=kmax {
        pmf.push(p);
        p *= mean / (k + 1) as f64;
    }
    // tail[D] = Σ_{k > D} pmf[k], accumulated from the far end
    let mut tail = 0.0;
    let mut budget = kmax;
    for d in (0..kmax).rev() {
        tail += pmf[d + 1];
        if tail > tol {
            break;
        }
        budget = d;
    }
    budget
}

fn check_rep(ctx: &GaussianActionCtx, b: &RepCocycle) -> Result<()> {
    if !Arc::ptr_eq(ctx.rep(), b.rep()) && **ctx.rep() != **b.rep() {
        return Err(Error::InvalidInput("cocycle belongs to a different representation".into()));
    }
    Ok(())
}

fn omega(basis: &Arc<FockBasis>, bw: &[f64], conv: FieldConvention) -> Result<FockOperator> {
    let s = field(basis, &ModeVector::real(bw), conv)?;
    op_exp(&s, Complex64::new(0.0, -1.0))
}

/// `ω_w = exp(−i s(b(w)))`, refusing caps below the Poisson budget.
pub fn ps_cocycle(ctx: &GaussianActionCtx, b: &RepCocycle, w: &Word) -> Result<FockOperator> {
    check_rep(ctx, b)?;
    let bw = b.extend(w)?;
    let required = poisson_budget(bw.norm_squared(), POISSON_TAIL_TOL);
    if ctx.basis().cap() < required {
        return Err(Error::TruncationBudget {
            cap: ctx.basis().cap(),
            required,
        });
    }
    omega(ctx.basis(), bw.as_slice(), ctx.convention())
}

/// [`ps_cocycle`] at whatever cap the context has.
pub fn ps_cocycle_unchecked(ctx: &GaussianActionCtx, b: &RepCocycle, w: &Word) -> Result<FockOperator> {
    check_rep(ctx, b)?;
    let bw = b.extend(w)?;
    omega(ctx.basis(), bw.as_slice(), ctx.convention())
}

/// `⟨exp(−i s(ξ))Ω, Ω⟩` for `‖ξ‖ = norm`, on one mode spanned by `ξ`.
/// `cap = None` uses the Poisson budget; returns the value and the cap used.
pub fn ps_vacuum_expectation(norm: f64, cap: Option<usize>) -> Result<(Complex64, usize)> {
    let required = poisson_budget(norm * norm, POISSON_TAIL_TOL);
    let cap = match cap {
        Some(c) if c < required => return Err(Error::TruncationBudget { cap: c, required }),
        Some(c) => c,
        None => required.max(1),
    };
    let basis = enumerate_basis(1, cap)?;
    let w = omega(&basis, &[norm], FieldConvention::default())?;
    Ok((w.vacuum_expectation(), cap))
}

/// `‖P(ω_{w₁w₂} − ω_{w₁} σ_{w₁}(ω_{w₂}))P‖_HS` with `P` the projection onto
/// degrees `≤ D/2`.
///
/// Evaluated at the context's cap without a budget check so that the decay in
/// `D` can be observed. Away from the top degrees the truncated exponentials
/// agree with the untruncated ones to high order; near the cap they do not.
pub fn cocycle_identity_residual(ctx: &GaussianActionCtx, b: &RepCocycle, w1: &Word, w2: &Word) -> Result<f64> {
    let w12 = ps_cocycle_unchecked(ctx, b, &w1.mul(w2))?;
    let w1_op = ps_cocycle_unchecked(ctx, b, w1)?;
    let w2_op = ps_cocycle_unchecked(ctx, b, w2)?;
    let rhs = w1_op.mul(&act_on_operator(ctx, w1, &w2_op)?)?;
    Ok(w12.sub(&rhs)?.hs_norm_compressed(ctx.basis().cap() / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_rep::{GroupPresentation, OrthogonalRep};
    use nalgebra::{DMatrix, DVector};

    fn poisson_tail(mean: f64, d: usize) -> f64 {
        // 1 − cdf, summed upward
        let mut cdf = 0.0;
        let mut term = (-mean).exp();
        for k in 0..=d {
            cdf += term;
            term *= mean / (k + 1) as f64;
        }
        1.0 - cdf
    }

    #[test]
    fn budget_is_the_first_cap_below_tolerance() {
        for mean in [0.25, 1.0, 4.0, 9.0] {
            let d = poisson_budget(mean, 1e-8);
            assert!(poisson_tail(mean, d) <= 1e-8 + 1e-15, "mean {mean}");
            assert!(d == 0 || poisson_tail(mean, d - 1) > 1e-8);
        }
        assert_eq!(poisson_budget(0.0, 1e-8), 0);
    }

    #[test]
    fn vacuum_expectation_matches_gaussian_characteristic_function() {
        for norm in [0.5f64, 1.0, 2.0] {
            let (v, _) = ps_vacuum_expectation(norm, None).unwrap();
            assert!((v.re - (-norm * norm / 2.0).exp()).abs() <= 1e-6);
            assert!(v.im.abs() <= 1e-6);
        }
        let (v, _) = ps_vacuum_expectation(1.0, None).unwrap();
        assert!((v.re - 0.6065307).abs() < 1e-6);
        let (v, _) = ps_vacuum_expectation(2.0, None).unwrap();
        assert!((v.re - 0.1353353).abs() < 1e-6);
        assert!(matches!(ps_vacuum_expectation(2.0, Some(3)), Err(Error::TruncationBudget { .. })));
    }

    #[test]
    fn vacuum_error_shrinks_with_the_cap() {
        let mut last = f64::INFINITY;
        for cap in [4, 6, 8, 10, 12] {
            let basis = enumerate_basis(1, cap).unwrap();
            let w = omega(&basis, &[1.5], FieldConvention::default()).unwrap();
            let err = (w.vacuum_expectation() - Complex64::new((-1.125f64).exp(), 0.0)).norm();
            assert!(err < last);
            last = err;
        }
    }

    fn z_ctx(cap: usize) -> (GaussianActionCtx, RepCocycle) {
        let pi = Arc::new(OrthogonalRep::new(2, vec![DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])]).unwrap());
        let ctx = GaussianActionCtx::new(pi.clone(), GroupPresentation::free(1), cap, FieldConvention::default()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = RepCocycle::new(pi, vec![DVector::from_column_slice(&[h, h])]).unwrap();
        (ctx, b)
    }

    #[test]
    fn omega_of_identity_is_identity() {
        let (ctx, b) = z_ctx(4);
        let w = ps_cocycle(&ctx, &b, &Word::identity()).unwrap();
        assert!(w.sub(&FockOperator::identity(ctx.basis())).unwrap().hs_norm() < 1e-14);
    }

    #[test]
    fn budget_violations_report_the_required_cap() {
        let (ctx, b) = z_ctx(4);
        match ps_cocycle(&ctx, &b, &Word::new(vec![1]).unwrap()) {
            Err(Error::TruncationBudget { cap, required }) => {
                assert_eq!(cap, 4);
                assert_eq!(required, poisson_budget(1.0, POISSON_TAIL_TOL));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cocycle_identity_trivial_cases() {
        let (ctx, b) = z_ctx(8);
        let a = Word::new(vec![1]).unwrap();
        assert!(cocycle_identity_residual(&ctx, &b, &a, &Word::identity()).unwrap() < 1e-12);
        let zero = RepCocycle::zero(ctx.rep().clone());
        assert_eq!(cocycle_identity_residual(&ctx, &zero, &a, &a).unwrap(), 0.0);
    }

    #[test]
    fn cocycle_identity_on_the_integers() {
        // trivial representation, b(a) = 1: every ω is a function of one field
        let pi = Arc::new(OrthogonalRep::trivial(1, 1));
        let b = RepCocycle::new(pi.clone(), vec![DVector::from_column_slice(&[1.0])]).unwrap();
        let a = Word::new(vec![1]).unwrap();
        for cap in [12, 16] {
            let ctx = GaussianActionCtx::new(pi.clone(), GroupPresentation::free(1), cap, FieldConvention::default()).unwrap();
            assert!(cocycle_identity_residual(&ctx, &b, &a, &a).unwrap() <= 1e-12);
            let inv = Word::new(vec![-1, -1]).unwrap();
            assert!(cocycle_identity_residual(&ctx, &b, &a, &inv).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn cocycle_identity_converges_in_the_cap() {
        let a = Word::new(vec![1]).unwrap();
        let r: Vec<f64> = [12, 16, 20]
            .iter()
            .map(|&cap| {
                let (ctx, b) = z_ctx(cap);
                cocycle_identity_residual(&ctx, &b, &a, &a).unwrap()
            })
            .collect();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
        assert!(r[2] <= 1e-4, "{r:?}");
    }
}
