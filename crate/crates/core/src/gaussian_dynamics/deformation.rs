//! The rotation deformation on `𝔖(ℋ ⊕ ℋ)`: `θ_t = exp(πt/2 · J)` with
//! `J(ξ ⊕ η) = η ⊕ −ξ`, and the period-two symmetry `ρ = 1 ⊕ −1`.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::cohomology::RepCocycle;
use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, inner_product, FockBasis, FockVector, ModeVector};
use crate::group_rep::Word;
use crate::wick::{field, op_exp, second_quantize_real, FieldConvention};

use super::cocycle::{poisson_budget, POISSON_TAIL_TOL};
use super::GaussianActionCtx;

/// `(cos(πt/2), sin(πt/2))`, exact at integer `t`.
pub fn quarter_turn(t: f64) -> (f64, f64) {
    if t.fract() == 0.0 && t.abs() < 1e15 {
        match (t as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let (s, c) = (FRAC_PI_2 * t).sin_cos();
        (c, s)
    }
}

/// A Gaussian-action context together with the Fock space of `ℋ ⊕ ℋ`.
#[derive(Clone, Debug)]
pub struct DoubledCtx {
    base: GaussianActionCtx,
    basis: Arc<FockBasis>,
    j: DMatrix<f64>,
    rho: DMatrix<f64>,
}

impl DoubledCtx {
    /// Doubles `base` with degree cap `cap` on `ℋ ⊕ ℋ`.
    pub fn new(base: GaussianActionCtx, cap: usize) -> Result<Self> {
        let d = base.rep().dim();
        let basis = enumerate_basis(2 * d, cap)?;
        let mut j = DMatrix::zeros(2 * d, 2 * d);
        let mut rho = DMatrix::zeros(2 * d, 2 * d);
        for i in 0..d {
            j[(i, d + i)] = 1.0;
            j[(d + i, i)] = -1.0;
            rho[(i, i)] = 1.0;
            rho[(d + i, d + i)] = -1.0;
        }
        Ok(DoubledCtx { base, basis, j, rho })
    }

    pub fn base(&self) -> &GaussianActionCtx {
        &self.base
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn rho(&self) -> &DMatrix<f64> {
        &self.rho
    }

    /// `exp(angle · J) = cos(angle) I + sin(angle) J`.
    pub fn rotation_by(&self, cos: f64, sin: f64) -> DMatrix<f64> {
        let n = self.j.nrows();
        DMatrix::identity(n, n) * cos + &self.j * sin
    }

    /// `θ_t = exp(πt/2 · J)`.
    pub fn theta(&self, t: f64) -> DMatrix<f64> {
        let (c, s) = quarter_turn(t);
        self.rotation_by(c, s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MalleabilityReport {
    /// `max ‖θ_t θ_s − θ_{t+s}‖` over `s ∈ {t, 1, −t}`.
    pub group_law: f64,
    /// `‖ρ θ_{−t} − θ_t ρ‖`.
    pub rho_matrix: f64,
    /// `‖ρ^𝔖 θ_{−t}^𝔖 − θ_t^𝔖 ρ^𝔖‖_HS`.
    pub rho_lifted: f64,
    /// `max |⟨θ_1^𝔖 e_m, e_m'⟩|` over basis vectors of positive degree
    /// supported on `ℋ ⊕ 0`.
    pub orthogonality: f64,
}

pub fn malleability_axioms(dctx: &DoubledCtx, t: f64) -> Result<MalleabilityReport> {
    let group_law = [t, 1.0, -t]
        .iter()
        .map(|&s| (dctx.theta(t) * dctx.theta(s) - dctx.theta(t + s)).norm())
        .fold(0.0, f64::max);
    let rho = dctx.rho();
    let rho_matrix = (rho * dctx.theta(-t) - dctx.theta(t) * rho).norm();

    let basis = dctx.basis();
    let rho_s = second_quantize_real(basis, rho)?;
    let lhs = rho_s.mul(&second_quantize_real(basis, &dctx.theta(-t))?)?;
    let rhs = second_quantize_real(basis, &dctx.theta(t))?.mul(&rho_s)?;
    let rho_lifted = lhs.sub(&rhs)?.hs_norm();

    let d = dctx.base().rep().dim();
    let theta1 = second_quantize_real(basis, &dctx.theta(1.0))?;
    let first_leg: Vec<usize> = (1..basis.len())
        .filter(|&i| basis.occupation(i).counts()[d..].iter().all(|&k| k == 0))
        .collect();
    let on = theta1.to_orthonormal();
    let mut orthogonality: f64 = 0.0;
    for &c in &first_leg {
        for &r in &first_leg {
            orthogonality = orthogonality.max(on[(r, c)].norm());
        }
    }
    Ok(MalleabilityReport {
        group_law,
        rho_matrix,
        rho_lifted,
        orthogonality,
    })
}

/// `exp(−i s(ξ))Ω` on `basis` for a unit direction `u` and length `norm`.
///
/// The orbit of `Ω` under `s(norm·u)` stays in `span{u^{⊙k}}`, where the field
/// acts as the one-mode field; the exponential is taken there.
fn coherent_vector(basis: &Arc<FockBasis>, u: &ModeVector, norm: f64, conv: FieldConvention) -> Result<FockVector> {
    let one = enumerate_basis(1, basis.cap())?;
    let s = field(&one, &ModeVector::real(&[norm]), conv)?;
    let coeffs = op_exp(&s, Complex64::new(0.0, -1.0))?.matrix().column(0).into_owned();
    let mut out = FockVector::zeros(basis);
    let mut power = FockVector::vacuum(basis);
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = crate::fock::multiply_linear(&power, u);
        }
        out = out.add(&power.scale(*c))?;
    }
    Ok(out)
}

/// `⟨θ̃^𝔖(ω⊗1)Ω, (ω⊗1)Ω⟩` with `ω = exp(−i s(ξ))`, `‖ξ‖ = norm`, and `θ̃` the
/// rotation by angle `t`, computed on the two modes `ξ/‖ξ‖ ⊕ 0` and
/// `0 ⊕ ξ/‖ξ‖` (a `θ̃`-invariant plane). `cap = None` uses the Poisson budget.
pub fn deformation_correlation_reduced(norm: f64, t: f64, cap: Option<usize>) -> Result<(Complex64, usize)> {
    let required = poisson_budget(norm * norm, POISSON_TAIL_TOL);
    let cap = match cap {
        Some(c) if c < required => return Err(Error::TruncationBudget { cap: c, required }),
        Some(c) => c,
        None => required.max(1),
    };
    Ok((deformation_correlation_unchecked(norm, t, cap)?, cap))
}

/// [`deformation_correlation_reduced`] at a fixed cap, without the budget
/// check. Used to study convergence in the cap.
pub fn deformation_correlation_unchecked(norm: f64, t: f64, cap: usize) -> Result<Complex64> {
    let basis = enumerate_basis(2, cap)?;
    let v = coherent_vector(&basis, &ModeVector::real(&[1.0, 0.0]), norm, FieldConvention::default())?;
    let (s, c) = t.sin_cos();
    let rot = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
    let theta = second_quantize_real(&basis, &rot)?;
    inner_product(&theta.apply(&v)?, &v)
}

/// The deformation correlation for `b(w)`, rotation angle `t`, evaluated on
/// the invariant plane spanned by `b(w) ⊕ 0` and `0 ⊕ b(w)`.
pub fn deformation_correlation(dctx: &DoubledCtx, b: &RepCocycle, w: &Word, t: f64) -> Result<Complex64> {
    let bw = b.extend(w)?;
    let cap = dctx.basis().cap();
    deformation_correlation_reduced(bw.norm(), t, Some(cap)).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_rep::{rotation, GroupPresentation, OrthogonalRep};
    use std::f64::consts::PI;

    fn dctx(cap: usize) -> DoubledCtx {
        let pi = Arc::new(OrthogonalRep::new(2, vec![rotation(0.9)]).unwrap());
        let base = GaussianActionCtx::new(pi, GroupPresentation::free(1), 4, FieldConvention::default()).unwrap();
        DoubledCtx::new(base, cap).unwrap()
    }

    #[test]
    fn structure_matrices() {
        let c = dctx(3);
        let n = c.j().nrows();
        let id = DMatrix::<f64>::identity(n, n);
        assert_eq!(c.j().transpose(), -c.j());
        assert_eq!(c.j() * c.j(), -&id);
        assert_eq!(c.rho() * c.j(), -(c.j() * c.rho()));
        assert_eq!(c.theta(0.0), id);
        // θ_1 carries ℋ ⊕ 0 onto 0 ⊕ ℋ
        let t1 = c.theta(1.0);
        assert!(t1.view((0, 0), (2, 2)).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(quarter_turn(1.0), (0.0, 1.0));
        assert_eq!(quarter_turn(-1.0), (0.0, -1.0));
        assert_eq!(quarter_turn(6.0), (-1.0, 0.0));
        let (c, s) = quarter_turn(0.37);
        assert!((c - (PI * 0.37 / 2.0).cos()).abs() < 1e-16);
        assert!((s - (PI * 0.37 / 2.0).sin()).abs() < 1e-16);
    }

    #[test]
    fn malleability_residuals() {
        let c = dctx(4);
        let r = malleability_axioms(&c, 0.0).unwrap();
        assert_eq!((r.group_law, r.rho_matrix, r.rho_lifted, r.orthogonality), (0.0, 0.0, 0.0, 0.0));
        let r = malleability_axioms(&c, 0.37).unwrap();
        assert!(r.group_law <= 1e-12);
        assert!(r.rho_matrix <= 1e-12);
        assert!(r.rho_lifted <= 1e-12);
        assert_eq!(r.orthogonality, 0.0);
    }

    #[test]
    fn correlation_closed_form_values() {
        for norm in [0.5f64, 1.0, 2.0] {
            for t in [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
                let (m, _) = deformation_correlation_reduced(norm, t, None).unwrap();
                let p = (-(1.0 - t.cos()) * norm * norm).exp();
                assert!((m - Complex64::new(p, 0.0)).norm() <= 1e-5, "norm {norm} t {t}: {m}");
            }
        }
        let (m, _) = deformation_correlation_reduced(1.0, PI / 2.0, None).unwrap();
        assert!((m.re - 0.3678794).abs() < 1e-6);
        let (m, _) = deformation_correlation_reduced(1.0, PI, None).unwrap();
        assert!((m.re - 0.1353353).abs() < 1e-6);
    }

    #[test]
    fn reduced_plane_agrees_with_the_full_doubled_space() {
        // full computation on 𝔖(ℋ ⊕ ℋ) with ℋ = ℝ², ξ = b ⊕ 0 generic
        let cap = 8;
        let c = dctx(cap);
        let b = [0.3, -0.4];
        let xi = ModeVector::real(&[b[0], b[1], 0.0, 0.0]);
        let s = field(c.basis(), &xi, FieldConvention::default()).unwrap();
        let omega = op_exp(&s, Complex64::new(0.0, -1.0)).unwrap();
        let v = omega.apply(&FockVector::vacuum(c.basis())).unwrap();
        let t: f64 = 1.1;
        let (sn, cs) = t.sin_cos();
        let theta = second_quantize_real(c.basis(), &c.rotation_by(cs, sn)).unwrap();
        let full = inner_product(&theta.apply(&v).unwrap(), &v).unwrap();
        let norm = (b[0] * b[0] + b[1] * b[1]).sqrt();
        let (reduced, _) = deformation_correlation_reduced(norm, t, Some(cap)).unwrap();
        assert!((full - reduced).norm() < 1e-12, "{full} vs {reduced}");
    }

    #[test]
    fn coherent_vector_matches_operator_exponential() {
        let basis = enumerate_basis(2, 6).unwrap();
        let u = ModeVector::real(&[0.6, 0.8]);
        let v = coherent_vector(&basis, &u, 1.3, FieldConvention::default()).unwrap();
        let s = field(&basis, &u.scale(Complex64::new(1.3, 0.0)), FieldConvention::default()).unwrap();
        let direct = op_exp(&s, Complex64::new(0.0, -1.0))
            .unwrap()
            .apply(&FockVector::vacuum(&basis))
            .unwrap();
        assert!(v.sub(&direct).unwrap().norm() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            deformation_correlation_reduced(2.0, 1.0, Some(4)),
            Err(Error::TruncationBudget { .. })
        ));
    }
}
