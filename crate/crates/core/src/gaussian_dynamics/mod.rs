//! The Gaussian action `σ^π` of a group on the truncated Fock space of its
//! representation, and the structures built on top of it: the exponential
//! cocycle, the rotation deformation, the Ornstein–Uhlenbeck semigroup,
//! kernel smoothing, the invariant-unitary construction and the torus
//! deformation.
//!
//! `σ_γ` acts on vectors as `π_γ^𝔖` and on operators by conjugation with it.

mod cocycle;
mod deformation;
mod invariant;
mod report;
mod semigroup;
mod smoothing;
mod torus;

use std::sync::Arc;


use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, FockBasis};
use crate::group_rep::{evaluate, rep_check, GroupPresentation, OrthogonalRep, Word};
use crate::wick::{second_quantize_real, FieldConvention, FockOperator};

pub use cocycle::{
    cocycle_identity_residual, poisson_budget, ps_cocycle, ps_cocycle_unchecked, ps_vacuum_expectation,
    POISSON_TAIL_TOL,
};
pub use deformation::{
    deformation_correlation, deformation_correlation_reduced, deformation_correlation_unchecked, malleability_axioms, quarter_turn, DoubledCtx,
    MalleabilityReport,
};
pub use invariant::{invariant_unitary, InvariantUnitary};
pub use report::DeformationReport;
pub use semigroup::{ou_closed_formula_residual, ou_resolvent, ou_semigroup};
pub use smoothing::{heat_kernel, kernel_average, smooth_by_kernel, SmoothingResult};
pub use torus::{torus_deformation, TorusGrid, TorusReport};

/// Relator and orthogonality tolerance a representation must meet before a
/// Gaussian action is built from it.
pub const REP_TOL: f64 = 1e-10;

/// A representation together with the truncated Fock space of its carrier.
#[derive(Clone, Debug)]
pub struct GaussianActionCtx {
    pi: Arc<OrthogonalRep>,
    group: GroupPresentation,
    basis: Arc<FockBasis>,
    conv: FieldConvention,
}

impl GaussianActionCtx {
    pub fn new(pi: Arc<OrthogonalRep>, group: GroupPresentation, cap: usize, conv: FieldConvention) -> Result<Self> {
        let check = rep_check(&pi, &group, REP_TOL)?;
        if !check.pass {
            return Err(Error::Precondition(format!(
                "representation fails its checks: orthogonality {:?}, relators {:?}",
                check.orthogonality, check.relators
            )));
        }
        let basis = enumerate_basis(pi.dim(), cap)?;
        Ok(GaussianActionCtx { pi, group, basis, conv })
    }

    pub fn rep(&self) -> &Arc<OrthogonalRep> {
        &self.pi
    }

    pub fn group(&self) -> &GroupPresentation {
        &self.group
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn convention(&self) -> FieldConvention {
        self.conv
    }

    /// The same representation on a Fock space with a different cap.
    pub fn with_cap(&self, cap: usize) -> Result<Self> {
        Ok(GaussianActionCtx {
            pi: self.pi.clone(),
            group: self.group.clone(),
            basis: enumerate_basis(self.pi.dim(), cap)?,
            conv: self.conv,
        })
    }
}

/// `π_w^𝔖`.
pub fn gaussian_action(ctx: &GaussianActionCtx, w: &Word) -> Result<FockOperator> {
    second_quantize_real(&ctx.basis, &evaluate(&ctx.pi, w)?)
}

/// `σ_w(x) = π_w^𝔖 x (π_w^𝔖)⁻¹`.
pub fn act_on_operator(ctx: &GaussianActionCtx, w: &Word, x: &FockOperator) -> Result<FockOperator> {
    let m = evaluate(&ctx.pi, w)?;
    let u = second_quantize_real(&ctx.basis, &m)?;
    let u_inv = second_quantize_real(&ctx.basis, &m.transpose())?;
    u.mul(x)?.mul(&u_inv)
}
