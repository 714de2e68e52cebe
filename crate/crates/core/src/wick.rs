//! Operators on the truncated Fock space: creation/annihilation, field
//! operators, second quantization and operator exponentials.
//!
//! Matrices are stored over the occupation basis of [`FockBasis`] (not the
//! orthonormalized one). Adjoints and norms are always taken with respect to
//! the renormalized inner product, i.e. `A† = W⁻¹ Aᴴ W` with
//! `W = diag(∏ m_i!)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockVector, ModeVector};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Prefactor convention for `s(ξ) = κ (x_ξ + ∂_ξ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldConvention {
    kappa: f64,
}

impl FieldConvention {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidInput(format!("field prefactor must be positive, got {kappa}")));
        }
        Ok(FieldConvention { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

impl Default for FieldConvention {
    fn default() -> Self {
        FieldConvention { kappa: 1.0 }
    }
}

/// A linear operator on a truncated Fock space.
#[derive(Clone, Debug)]
pub struct FockOperator {
    basis: Arc<FockBasis>,
    matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn from_matrix(basis: &Arc<FockBasis>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(FockOperator {
            basis: basis.clone(),
            matrix,
        })
    }

    pub fn zeros(basis: &Arc<FockBasis>) -> Self {
        FockOperator {
            basis: basis.clone(),
            matrix: DMatrix::zeros(basis.len(), basis.len()),
        }
    }

    pub fn identity(basis: &Arc<FockBasis>) -> Self {
        FockOperator {
            basis: basis.clone(),
            matrix: DMatrix::identity(basis.len(), basis.len()),
        }
    }

    /// Degree-diagonal operator acting as `f(k)` on degree `k`.
    pub fn degree_multiplier(basis: &Arc<FockBasis>, f: impl Fn(usize) -> Complex64) -> Self {
        let mut op = Self::zeros(basis);
        for i in 0..basis.len() {
            op.matrix[(i, i)] = f(basis.degree(i));
        }
        op
    }

    /// The number operator `N`.
    pub fn number(basis: &Arc<FockBasis>) -> Self {
        Self::degree_multiplier(basis, |k| Complex64::new(k as f64, 0.0))
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.basis.check_same(v.basis())?;
        let x = DVector::from_column_slice(v.coeffs());
        let y = &self.matrix * x;
        FockVector::from_coeffs(&self.basis, y.as_slice().to_vec())
    }

    pub fn mul(&self, other: &FockOperator) -> Result<FockOperator> {
        self.basis.check_same(&other.basis)?;
        Ok(FockOperator {
            basis: self.basis.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn add(&self, other: &FockOperator) -> Result<FockOperator> {
        self.basis.check_same(&other.basis)?;
        Ok(FockOperator {
            basis: self.basis.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &FockOperator) -> Result<FockOperator> {
        self.basis.check_same(&other.basis)?;
        Ok(FockOperator {
            basis: self.basis.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn scale(&self, z: Complex64) -> FockOperator {
        FockOperator {
            basis: self.basis.clone(),
            matrix: &self.matrix * z,
        }
    }

    pub fn commutator(&self, other: &FockOperator) -> Result<FockOperator> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Matrix in the orthonormalized basis `|m> / sqrt(∏ m_i!)`.
    pub fn to_orthonormal(&self) -> DMatrix<Complex64> {
        let s: Vec<f64> = self.basis.weights().iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(self.matrix.nrows(), self.matrix.ncols(), |r, c| {
            self.matrix[(r, c)] * (s[r] / s[c])
        })
    }

    pub fn from_orthonormal(basis: &Arc<FockBasis>, m: &DMatrix<Complex64>) -> Result<Self> {
        let s: Vec<f64> = basis.weights().iter().map(|w| w.sqrt()).collect();
        let matrix = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)] * (s[c] / s[r]));
        Self::from_matrix(basis, matrix)
    }

    /// Adjoint with respect to the renormalized inner product.
    pub fn adjoint(&self) -> FockOperator {
        let w = self.basis.weights();
        let n = self.matrix.nrows();
        let matrix = DMatrix::from_fn(n, n, |r, c| self.matrix[(c, r)].conj() * (w[c] / w[r]));
        FockOperator {
            basis: self.basis.clone(),
            matrix,
        }
    }

    /// Hilbert–Schmidt norm with respect to the renormalized inner product.
    /// Bounds the operator norm from above.
    pub fn hs_norm(&self) -> f64 {
        self.to_orthonormal().norm()
    }

    /// Hilbert–Schmidt norm of the restriction to inputs of degree ≤ `k`.
    pub fn hs_norm_on_degrees(&self, k: usize) -> f64 {
        let on = self.to_orthonormal();
        let mut acc = 0.0;
        for c in 0..on.ncols() {
            if self.basis.degree(c) <= k {
                acc += on.column(c).norm_squared();
            }
        }
        acc.sqrt()
    }

    /// Hilbert–Schmidt norm of `P A P`, `P` the projection onto degrees ≤ `k`.
    pub fn hs_norm_compressed(&self, k: usize) -> f64 {
        let on = self.to_orthonormal();
        let mut acc = 0.0;
        for c in 0..on.ncols() {
            if self.basis.degree(c) > k {
                continue;
            }
            for r in 0..on.nrows() {
                if self.basis.degree(r) <= k {
                    acc += on[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// `‖A − A†‖_HS`; zero for self-adjoint operators.
    pub fn self_adjointness_residual(&self) -> f64 {
        self.sub(&self.adjoint()).map(|d| d.hs_norm()).unwrap_or(f64::NAN)
    }

    /// `‖A†A − I‖_HS`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = FockOperator::identity(&self.basis);
        self.adjoint()
            .mul(self)
            .and_then(|p| p.sub(&id))
            .map(|d| d.hs_norm())
            .unwrap_or(f64::NAN)
    }

    /// `<A Ω, Ω>`.
    pub fn vacuum_expectation(&self) -> Complex64 {
        self.matrix[(0, 0)]
    }

    /// Whether every entry vanishes outside the diagonal degree blocks.
    pub fn is_degree_diagonal(&self, tol: f64) -> bool {
        for c in 0..self.matrix.ncols() {
            for r in 0..self.matrix.nrows() {
                if self.basis.degree(r) != self.basis.degree(c) && self.matrix[(r, c)].norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

fn check_modes(basis: &FockBasis, xi: &ModeVector) -> Result<()> {
    if xi.dim() != basis.modes() {
        return Err(Error::DimensionMismatch {
            expected: basis.modes(),
            got: xi.dim(),
        });
    }
    Ok(())
}

fn check_square(basis: &FockBasis, t: &DMatrix<Complex64>) -> Result<()> {
    if t.nrows() != basis.modes() || t.ncols() != basis.modes() {
        return Err(Error::DimensionMismatch {
            expected: basis.modes(),
            got: t.nrows().max(t.ncols()),
        });
    }
    Ok(())
}

/// Symmetric creation operator `x_ξ`; linear in `ξ`.
pub fn creation(basis: &Arc<FockBasis>, xi: &ModeVector) -> Result<FockOperator> {
    check_modes(basis, xi)?;
    let mut op = FockOperator::zeros(basis);
    for c in 0..basis.len() {
        for (mode, x) in xi.entries().iter().enumerate() {
            if let Some(r) = basis.raise_index(c, mode) {
                op.matrix[(r, c)] += x;
            }
        }
    }
    Ok(op)
}

/// Annihilation operator `∂/∂ξ`; conjugate-linear in `ξ`.
pub fn annihilation(basis: &Arc<FockBasis>, xi: &ModeVector) -> Result<FockOperator> {
    check_modes(basis, xi)?;
    let mut op = FockOperator::zeros(basis);
    for c in 0..basis.len() {
        let occ = basis.occupation(c);
        for (mode, x) in xi.entries().iter().enumerate() {
            let count = occ.counts()[mode];
            if count == 0 {
                continue;
            }
            let r = basis.lower_index(c, mode).expect("lowered occupation is in the basis");
            op.matrix[(r, c)] += x.conj() * count as f64;
        }
    }
    Ok(op)
}

/// Field operator `s(ξ) = κ (x_ξ + ∂_ξ)`.
pub fn field(basis: &Arc<FockBasis>, xi: &ModeVector, conv: FieldConvention) -> Result<FockOperator> {
    let op = creation(basis, xi)?.add(&annihilation(basis, xi)?)?;
    Ok(op.scale(Complex64::new(conv.kappa(), 0.0)))
}

fn double_factorial_odd(n: usize) -> f64 {
    // (n - 1)!! for even n
    (1..n).step_by(2).map(|k| k as f64).product()
}

/// Closed form of `<s(ξ)^n Ω, Ω>` for `κ = 1`: `‖ξ‖^n (n − 1)!!` for even `n`, else 0.
pub fn gaussian_moment(norm: f64, n: usize) -> f64 {
    if n % 2 == 1 {
        0.0
    } else {
        norm.powi(n as i32) * double_factorial_odd(n)
    }
}

fn field_power_on_vacuum(basis: &Arc<FockBasis>, seq: &[(&ModeVector, usize)]) -> Result<FockVector> {
    let mut v = FockVector::vacuum(basis);
    // rightmost factor acts first
    for (xi, n) in seq.iter().rev() {
        let s = field(basis, xi, FieldConvention::default())?;
        for _ in 0..*n {
            v = s.apply(&v)?;
        }
    }
    Ok(v)
}

/// `<s(ξ)^n Ω, Ω>` with `κ = 1`, computed on the truncated space.
pub fn moment(basis: &Arc<FockBasis>, xi: &ModeVector, n: usize) -> Result<f64> {
    if basis.cap() < n.div_ceil(2) {
        return Err(Error::Precondition(format!(
            "moment of order {n} needs degree cap >= {}, have {}",
            n.div_ceil(2),
            basis.cap()
        )));
    }
    let v = field_power_on_vacuum(basis, &[(xi, n)])?;
    Ok(v.coeffs()[0].re)
}

/// `<s(ξ)^m s(η)^n Ω, Ω>` for orthogonal `ξ, η`.
pub fn mixed_moment(basis: &Arc<FockBasis>, xi: &ModeVector, m: usize, eta: &ModeVector, n: usize) -> Result<f64> {
    let overlap = xi.dot(eta).norm();
    if overlap > 1e-12 * (1.0 + xi.norm() * eta.norm()) {
        return Err(Error::Precondition(format!("mixed moment needs ξ ⊥ η, overlap {overlap:e}")));
    }
    if basis.cap() < (m + n).div_ceil(2) {
        return Err(Error::Precondition(format!(
            "mixed moment of total order {} needs degree cap >= {}, have {}",
            m + n,
            (m + n).div_ceil(2),
            basis.cap()
        )));
    }
    let v = field_power_on_vacuum(basis, &[(xi, m), (eta, n)])?;
    Ok(v.coeffs()[0].re)
}

/// Second quantization `T ↦ T^𝔖`, acting as `T^{⊙n}` on degree `n`.
pub fn second_quantize(basis: &Arc<FockBasis>, t: &DMatrix<Complex64>) -> Result<FockOperator> {
    check_square(basis, t)?;
    let mut op = FockOperator::zeros(basis);
    op.matrix[(0, 0)] = ONE;
    for c in 1..basis.len() {
        let occ = basis.occupation(c);
        let mode = occ
            .counts()
            .iter()
            .position(|&k| k > 0)
            .expect("non-vacuum occupation");
        let parent = basis.lower_index(c, mode).expect("parent in basis");
        // T^𝔖 e^m = (T e_mode) ⊙ T^𝔖 e^{m - δ_mode}
        for r in basis.degree_range(basis.degree(parent)) {
            let coeff = op.matrix[(r, parent)];
            if coeff == ZERO {
                continue;
            }
            for j in 0..basis.modes() {
                let tj = t[(j, mode)];
                if tj == ZERO {
                    continue;
                }
                let row = basis.raise_index(r, j).expect("degree stays within the cap");
                op.matrix[(row, c)] += coeff * tj;
            }
        }
    }
    Ok(op)
}

pub fn second_quantize_real(basis: &Arc<FockBasis>, t: &DMatrix<f64>) -> Result<FockOperator> {
    second_quantize(basis, &complexify(t))
}

/// Differential second quantization `∂(T) = Σ_{j,i} T_{ji} x_{e_j} ∂_{e_i}`.
pub fn differential_second_quantize(basis: &Arc<FockBasis>, t: &DMatrix<Complex64>) -> Result<FockOperator> {
    check_square(basis, t)?;
    let mut op = FockOperator::zeros(basis);
    for c in 0..basis.len() {
        let occ = basis.occupation(c);
        for i in 0..basis.modes() {
            let count = occ.counts()[i];
            if count == 0 {
                continue;
            }
            let lowered = basis.lower_index(c, i).expect("lowered occupation in basis");
            for j in 0..basis.modes() {
                let tji = t[(j, i)];
                if tji == ZERO {
                    continue;
                }
                let r = basis.raise_index(lowered, j).expect("degree preserved");
                op.matrix[(r, c)] += tji * count as f64;
            }
        }
    }
    Ok(op)
}

pub fn complexify(t: &DMatrix<f64>) -> DMatrix<Complex64> {
    t.map(|x| Complex64::new(x, 0.0))
}

/// Self-adjointness threshold used to pick the eigendecomposition path.
const HERMITIAN_TOL: f64 = 1e-12;

/// `exp(zA)`. Self-adjoint operators go through an eigendecomposition,
/// everything else through scaling-and-squaring.
pub fn op_exp(a: &FockOperator, z: Complex64) -> Result<FockOperator> {
    let on = a.to_orthonormal();
    let scale = on.norm().max(1.0);
    let herm_residual = (&on - on.adjoint()).norm();
    if herm_residual <= HERMITIAN_TOL * scale {
        op_exp_hermitian(a, z)
    } else {
        let m = (on * z).exp();
        if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::Convergence("scaling-and-squaring produced non-finite entries".into()));
        }
        FockOperator::from_orthonormal(&a.basis, &m)
    }
}

/// `exp(zA)` for self-adjoint `A` via eigendecomposition.
pub fn op_exp_hermitian(a: &FockOperator, z: Complex64) -> Result<FockOperator> {
    let on = a.to_orthonormal();
    let herm = (&on + on.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(herm, 1e-15, 10_000)
        .ok_or_else(|| Error::Convergence("Hermitian eigendecomposition did not converge".into()))?;
    let v = &eig.eigenvectors;
    let n = v.nrows();
    let mut scaled = v.clone();
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        let f = (z * lambda).exp();
        for r in 0..n {
            scaled[(r, k)] *= f;
        }
    }
    let m = scaled * v.adjoint();
    FockOperator::from_orthonormal(&a.basis, &m)
}
