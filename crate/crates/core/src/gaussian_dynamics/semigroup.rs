//! The Ornstein–Uhlenbeck semigroup `Φ^t = e^{−tN}` and the resolvent
//! deformation `ζ_α = (α/(α + N))^{1/2}`, both diagonal in the degree.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockVector, ModeVector};
use crate::wick::{field, FieldConvention, FockOperator};

pub fn ou_semigroup(basis: &Arc<FockBasis>, t: f64) -> Result<FockOperator> {
    if !(t >= 0.0) {
        return Err(Error::Precondition(format!("semigroup time must be ≥ 0, got {t}")));
    }
    Ok(FockOperator::degree_multiplier(basis, |k| Complex64::new((-(k as f64) * t).exp(), 0.0)))
}

pub fn ou_resolvent(basis: &Arc<FockBasis>, alpha: f64) -> Result<FockOperator> {
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("resolvent parameter must be > 0, got {alpha}")));
    }
    Ok(FockOperator::degree_multiplier(basis, |k| {
        Complex64::new((alpha / (alpha + k as f64)).sqrt(), 0.0)
    }))
}

/// Norm of `Φ^t(x) − [(1 − e^{−kt}) τ(x) + e^{−kt} x]` for
/// `x = s(ξ_1)⋯s(ξ_k)`, evaluated on the vector `xΩ` (`τ(x) = ⟨xΩ, Ω⟩`).
///
/// Vanishes up to rounding when the `ξ_i` are pairwise orthogonal; with
/// repeated vectors `xΩ` has lower-degree components and the formula fails.
pub fn ou_closed_formula_residual(basis: &Arc<FockBasis>, xis: &[ModeVector], t: f64) -> Result<f64> {
    let k = xis.len();
    if basis.cap() < k {
        return Err(Error::Precondition(format!(
            "cap {} below the product length {k}",
            basis.cap()
        )));
    }
    let mut x = FockVector::vacuum(basis);
    for xi in xis.iter().rev() {
        x = field(basis, xi, FieldConvention::default())?.apply(&x)?;
    }
    let lhs = ou_semigroup(basis, t)?.apply(&x)?;
    let decay = (-(k as f64) * t).exp();
    let tau = x.coeffs()[0];
    let rhs = FockVector::vacuum(basis)
        .scale(tau * (1.0 - decay))
        .add(&x.scale(Complex64::new(decay, 0.0)))?;
    Ok(lhs.sub(&rhs)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{enumerate_basis, symmetric_tensor};
    use crate::wick::{second_quantize_real, FockOperator};
    use nalgebra::DMatrix;

    #[test]
    fn semigroup_law_and_limits() {
        let b = enumerate_basis(2, 5).unwrap();
        let id = FockOperator::identity(&b);
        assert_eq!(ou_semigroup(&b, 0.0).unwrap().sub(&id).unwrap().hs_norm(), 0.0);
        let (t, s) = (0.25, 0.5);
        let lhs = ou_semigroup(&b, t).unwrap().mul(&ou_semigroup(&b, s).unwrap()).unwrap();
        let rhs = ou_semigroup(&b, t + s).unwrap();
        assert!(lhs.sub(&rhs).unwrap().hs_norm() <= 1e-15);
        let near = ou_semigroup(&b, 1e-9).unwrap().sub(&id).unwrap().hs_norm();
        assert!(near < 1e-7);
        assert!(ou_semigroup(&b, -1.0).is_err());
    }

    #[test]
    fn resolvent_multipliers() {
        let b = enumerate_basis(1, 4).unwrap();
        let z = ou_resolvent(&b, 1.0).unwrap();
        assert_eq!(z.matrix()[(3, 3)].re, 0.5);
        let far = ou_resolvent(&b, 1e12).unwrap().sub(&FockOperator::identity(&b)).unwrap().hs_norm();
        assert!(far < 1e-11);
        assert!(ou_resolvent(&b, 0.0).is_err());
    }

    #[test]
    fn degree_multipliers_commute_with_second_quantization() {
        let b = enumerate_basis(2, 5).unwrap();
        let r = crate::group_rep::rotation(0.8);
        let u = second_quantize_real(&b, &r).unwrap();
        let phi = ou_semigroup(&b, 0.3).unwrap();
        let zeta = ou_resolvent(&b, 2.0).unwrap();
        assert_eq!(phi.commutator(&u).unwrap().hs_norm(), 0.0);
        assert_eq!(zeta.commutator(&u).unwrap().hs_norm(), 0.0);
        assert_eq!(zeta.commutator(&phi).unwrap().hs_norm(), 0.0);
    }

    #[test]
    fn degree_two_tensor_scales_by_exp_minus_two_t() {
        let b = enumerate_basis(2, 4).unwrap();
        let v = symmetric_tensor(&b, &[ModeVector::unit(2, 0), ModeVector::unit(2, 1)]).unwrap();
        let t = 0.7;
        let out = ou_semigroup(&b, t).unwrap().apply(&v).unwrap();
        assert!(out.sub(&v.scale(Complex64::new((-2.0 * t).exp(), 0.0))).unwrap().norm() < 1e-15);
    }

    #[test]
    fn closed_formula_on_orthonormal_and_repeated_vectors() {
        let b = enumerate_basis(4, 4).unwrap();
        let q = DMatrix::<f64>::from_fn(4, 4, |r, c| ((r * 7 + c * 3) as f64).sin()).qr().q();
        let cols: Vec<ModeVector> = (0..4).map(|c| ModeVector::real(q.column(c).as_slice())).collect();
        for k in 0..=4 {
            let r = ou_closed_formula_residual(&b, &cols[..k], 0.4).unwrap();
            assert!(r <= 1e-10, "k={k} residual {r}");
        }
        // s(ξ)⁴Ω = ξ^{⊙4} + 6 ξ^{⊙2} + 3Ω: the printed formula scales the
        // ξ^{⊙2} part by e^{−4t} instead of e^{−2t}
        let t = 0.4f64;
        let rep = vec![cols[0].clone(); 4];
        let r = ou_closed_formula_residual(&b, &rep, t).unwrap();
        let expected = 6.0 * ((-2.0 * t).exp() - (-4.0 * t).exp()) * 2f64.sqrt();
        assert!((r - expected).abs() < 1e-12, "{r} vs {expected}");
    }
}
