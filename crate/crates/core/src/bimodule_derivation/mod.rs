//! The derivation `δ_β(s(ξ)) = ξ ⊗ Ω` valued in the bimodule
//! `ℋ̃ = ℋ ⊗ 𝔖(ℋ′)`, `ℋ′ = ℝΩ₀ ⊕ ℋ`, together with the difference-quotient
//! derivation on polynomials and tensor products of derivations.
//!
//! The left action is `ℓ(s(ξ)) = id ⊗ s(ξ)`. The right action, relative to an
//! orthonormal basis `β = (β_n)`, is
//! `r(s(ξ))(β_n ⊗ η) = ⟨ξ, β_n⟩ β_n ⊗ s(Ω₀)η + β_n ⊗ s(ξ − ⟨ξ, β_n⟩β_n)η`,
//! reading the symbol `S(Ω₀)` as the field of the distinguished mode.
//! Right actions compose in reverse: `v·(ab) = (v·a)·b`.

mod poly;
mod quadrature;
mod tensor;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, inner_product, FockBasis, FockVector, ModeVector};
use crate::wick::{field, second_quantize_real, FieldConvention};

pub use poly::{difference_quotient, hermite, leibniz_residual, ou_poly, Poly2, PolyFunction};
pub use quadrature::{
    dirichlet_form, dirichlet_form_monte_carlo, gauss_hermite, mehler, MonteCarloEstimate, MAX_DIRICHLET_DEGREE,
};
pub use tensor::{tensor_derivation, tensor_semigroup_at, TensorComponent};

/// `𝔖(ℋ′)` for `ℋ′ = ℝΩ₀ ⊕ ℝ^d`; mode 0 is `Ω₀`.
#[derive(Clone, Debug)]
pub struct PrimedFock {
    d: usize,
    basis: Arc<FockBasis>,
}

impl PrimedFock {
    pub fn new(d: usize, cap: usize) -> Result<Self> {
        Ok(PrimedFock {
            d,
            basis: enumerate_basis(d + 1, cap)?,
        })
    }

    pub fn base_modes(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn cap(&self) -> usize {
        self.basis.cap()
    }

    /// `0 ⊕ ξ`.
    pub fn embed(&self, xi: &ModeVector) -> Result<ModeVector> {
        if xi.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: xi.dim(),
            });
        }
        let mut e = vec![Complex64::new(0.0, 0.0)];
        e.extend_from_slice(xi.entries());
        Ok(ModeVector::new(e))
    }

    pub fn omega0(&self) -> ModeVector {
        ModeVector::unit(self.d + 1, 0)
    }

    /// `T ↦ 1 ⊕ T`.
    pub fn extend_map(&self, t: &DMatrix<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.d + 1, self.d + 1);
        m[(0, 0)] = 1.0;
        m.view_mut((1, 1), (self.d, self.d)).copy_from(t);
        m
    }
}

/// `Σ_n e_n ⊗ η_n` with `η_n ∈ 𝔖(ℋ′)`, in standard coordinates.
#[derive(Clone, Debug)]
pub struct BimoduleVector {
    components: Vec<FockVector>,
}

impl BimoduleVector {
    pub fn zeros(space: &PrimedFock) -> Self {
        BimoduleVector {
            components: vec![FockVector::zeros(&space.basis); space.d],
        }
    }

    /// `ξ ⊗ Ω`.
    pub fn xi_tensor_vacuum(space: &PrimedFock, xi: &ModeVector) -> Result<Self> {
        if xi.dim() != space.d {
            return Err(Error::DimensionMismatch {
                expected: space.d,
                got: xi.dim(),
            });
        }
        let vac = FockVector::vacuum(&space.basis);
        Ok(BimoduleVector {
            components: xi.entries().iter().map(|&c| vac.scale(c)).collect(),
        })
    }

    /// Assembles `Σ_n e_n ⊗ η_n` from the `d` components `η_n`.
    pub fn from_components(space: &PrimedFock, components: Vec<FockVector>) -> Result<Self> {
        if components.len() != space.d {
            return Err(Error::DimensionMismatch {
                expected: space.d,
                got: components.len(),
            });
        }
        for c in &components {
            space.basis.check_same(c.basis())?;
        }
        Ok(BimoduleVector { components })
    }

    pub fn components(&self) -> &[FockVector] {
        &self.components
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(FockVector::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inner(&self, other: &BimoduleVector) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.components.iter().zip(&other.components) {
            acc += inner_product(a, b)?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &BimoduleVector) -> Result<BimoduleVector> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(BimoduleVector { components })
    }

    pub fn sub(&self, other: &BimoduleVector) -> Result<BimoduleVector> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> BimoduleVector {
        BimoduleVector {
            components: self.components.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn conj(&self) -> BimoduleVector {
        BimoduleVector {
            components: self.components.iter().map(FockVector::conj).collect(),
        }
    }

    /// `Σ_n c_n ⊗ η_n ↦ Σ_m e_m ⊗ Σ_n M_{mn} η_n` for a real `d × d` matrix.
    fn mix(&self, m: &DMatrix<f64>) -> Result<BimoduleVector> {
        let d = self.components.len();
        let basis = self.components[0].basis().clone();
        let mut components = Vec::with_capacity(d);
        for r in 0..d {
            let mut acc = FockVector::zeros(&basis);
            for (n, v) in self.components.iter().enumerate() {
                if m[(r, n)] != 0.0 {
                    acc = acc.add(&v.scale(Complex64::new(m[(r, n)], 0.0)))?;
                }
            }
            components.push(acc);
        }
        Ok(BimoduleVector { components })
    }

    /// Largest absolute imaginary part among the coefficients.
    pub fn max_imag(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|v| v.coeffs().iter().map(|c| c.im.abs()))
            .fold(0.0, f64::max)
    }
}

/// The bimodule `ℋ ⊗ 𝔖(ℋ′)` with actions relative to an orthonormal basis `β`
/// (columns of `beta`).
#[derive(Clone, Debug)]
pub struct Bimodule {
    space: PrimedFock,
    beta: DMatrix<f64>,
    conv: FieldConvention,
}

/// Orthogonality tolerance for `β` and covariance maps.
const ORTHO_TOL: f64 = 1e-10;

fn check_orthogonal(m: &DMatrix<f64>, d: usize) -> Result<()> {
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: m.nrows().max(m.ncols()),
        });
    }
    let r = (m.transpose() * m - DMatrix::identity(d, d)).norm();
    if r > ORTHO_TOL {
        return Err(Error::Precondition(format!("matrix is not orthogonal (residual {r:e})")));
    }
    Ok(())
}

impl Bimodule {
    pub fn new(space: PrimedFock, beta: DMatrix<f64>, conv: FieldConvention) -> Result<Self> {
        check_orthogonal(&beta, space.d)?;
        Ok(Bimodule { space, beta, conv })
    }

    /// Standard basis `β = (e_n)`.
    pub fn standard(space: PrimedFock) -> Self {
        let d = space.d;
        Bimodule {
            space,
            beta: DMatrix::identity(d, d),
            conv: FieldConvention::default(),
        }
    }

    pub fn space(&self) -> &PrimedFock {
        &self.space
    }

    pub fn beta(&self) -> &DMatrix<f64> {
        &self.beta
    }

    /// `ℓ(s(ξ)) = id ⊗ s(0 ⊕ ξ)`.
    pub fn left(&self, xi: &ModeVector, v: &BimoduleVector) -> Result<BimoduleVector> {
        let s = field(&self.space.basis, &self.space.embed(xi)?, self.conv)?;
        let components = v.components.iter().map(|c| s.apply(c)).collect::<Result<_>>()?;
        Ok(BimoduleVector { components })
    }

    /// `r(s(ξ))` from the displayed formula, in `β` coordinates.
    pub fn right(&self, xi: &ModeVector, v: &BimoduleVector) -> Result<BimoduleVector> {
        let d = self.space.d;
        if xi.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: xi.dim(),
            });
        }
        let basis = &self.space.basis;
        let s0 = field(basis, &self.space.omega0(), self.conv)?;
        // standard → β coordinates: η^β_m = Σ_n β_{nm} η_n
        let in_beta = v.mix(&self.beta.transpose())?;
        let mut out = Vec::with_capacity(d);
        for (n, eta) in in_beta.components.iter().enumerate() {
            let beta_n = ModeVector::real(self.beta.column(n).as_slice());
            let p = beta_n.dot(xi).conj();
            // ξ − ⟨ξ, β_n⟩ β_n
            let rest: Vec<Complex64> = xi
                .entries()
                .iter()
                .zip(beta_n.entries())
                .map(|(x, b)| x - p * b)
                .collect();
            let s_rest = field(basis, &self.space.embed(&ModeVector::new(rest))?, self.conv)?;
            out.push(s0.apply(eta)?.scale(p).add(&s_rest.apply(eta)?)?);
        }
        BimoduleVector { components: out }.mix(&self.beta)
    }

    /// `ℓ(s(ξ_1)⋯s(ξ_k)) v`.
    pub fn left_word(&self, word: &[ModeVector], v: &BimoduleVector) -> Result<BimoduleVector> {
        let mut acc = v.clone();
        for xi in word.iter().rev() {
            acc = self.left(xi, &acc)?;
        }
        Ok(acc)
    }

    /// `v · s(ξ_1)⋯s(ξ_k)`.
    pub fn right_word(&self, word: &[ModeVector], v: &BimoduleVector) -> Result<BimoduleVector> {
        let mut acc = v.clone();
        for xi in word {
            acc = self.right(xi, &acc)?;
        }
        Ok(acc)
    }

    /// `δ_β(s(ξ_1)⋯s(ξ_k)) = Σ_i ℓ(s(ξ_1)⋯s(ξ_{i−1})) (ξ_i ⊗ Ω) · s(ξ_{i+1})⋯s(ξ_k)`.
    pub fn delta(&self, word: &[ModeVector]) -> Result<BimoduleVector> {
        if word.len() >= self.space.cap().max(1) && !word.is_empty() {
            return Err(Error::DegreeOverflow {
                degree: word.len(),
                cap: self.space.cap(),
            });
        }
        let mut acc = BimoduleVector::zeros(&self.space);
        for (i, xi) in word.iter().enumerate() {
            let seed = BimoduleVector::xi_tensor_vacuum(&self.space, xi)?;
            let term = self.left_word(&word[..i], &self.right_word(&word[i + 1..], &seed)?)?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `δ(ab) = a·δ(b) + δ(a)·b` with `a = word[..split]`, `b = word[split..]`.
    pub fn delta_split(&self, word: &[ModeVector], split: usize) -> Result<BimoduleVector> {
        let (a, b) = word.split_at(split.min(word.len()));
        self.left_word(a, &self.delta(b)?)?.add(&self.right_word(b, &self.delta(a)?)?)
    }

    /// `(T ⊗ (1 ⊕ T)^𝔖) v`.
    pub fn transport(&self, t: &DMatrix<f64>, v: &BimoduleVector) -> Result<BimoduleVector> {
        let u = second_quantize_real(&self.space.basis, &self.space.extend_map(t))?;
        let moved = BimoduleVector {
            components: v.components.iter().map(|c| u.apply(c)).collect::<Result<_>>()?,
        };
        moved.mix(t)
    }
}

/// `‖δ_{Tβ}(s(Tξ_1)⋯s(Tξ_k)) − T̃ δ_β(s(ξ_1)⋯s(ξ_k))‖` with `β` standard.
pub fn covariance_check(space: &PrimedFock, t: &DMatrix<f64>, word: &[ModeVector]) -> Result<f64> {
    check_orthogonal(t, space.d)?;
    let base = Bimodule::standard(space.clone());
    let moved = Bimodule::new(space.clone(), t.clone(), FieldConvention::default())?;
    let tc = t.map(|x| Complex64::new(x, 0.0));
    let t_word: Vec<ModeVector> = word
        .iter()
        .map(|xi| {
            let v = &tc * nalgebra::DVector::from_column_slice(xi.entries());
            ModeVector::new(v.iter().copied().collect())
        })
        .collect();
    let lhs = moved.delta(&t_word)?;
    let rhs = base.transport(t, &base.delta(word)?)?;
    Ok(lhs.sub(&rhs)?.norm())
}
