//! Truncated symmetric Fock space.
//!
//! The symmetric algebra over `d` modes is identified with polynomials in `d`
//! commuting variables: the occupation `m = (m_1, .., m_d)` stands for the
//! symmetric tensor `e_1^{⊙m_1} ⊙ .. ⊙ e_d^{⊙m_d}`. With the n!-renormalized
//! inner product these basis vectors are orthogonal and
//! `<e^m, e^m> = m_1! .. m_d!`.
//!
//! Everything above the degree cap is compressed away.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the number of basis elements.
pub const DEFAULT_BASIS_CAP: usize = 2_000_000;

/// Occupation numbers of one symmetric monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: Vec<u32>) -> Self {
        Occupation(counts)
    }

    pub fn vacuum(modes: usize) -> Self {
        Occupation(vec![0; modes])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// `∏ m_i!`, the squared renormalized norm of the basis vector.
    pub fn weight(&self) -> f64 {
        self.0.iter().map(|&c| factorial(c as usize)).product()
    }

    pub fn raised(&self, mode: usize) -> Occupation {
        let mut counts = self.0.clone();
        counts[mode] += 1;
        Occupation(counts)
    }

    pub fn lowered(&self, mode: usize) -> Option<Occupation> {
        if self.0[mode] == 0 {
            return None;
        }
        let mut counts = self.0.clone();
        counts[mode] -= 1;
        Some(Occupation(counts))
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Number of multisets of size `k` drawn from `d` kinds.
pub fn multichoose(d: usize, k: usize) -> u128 {
    if d == 0 {
        return u128::from(k == 0);
    }
    // C(d + k - 1, k)
    let n = (d + k - 1) as u128;
    let k = k.min(d - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Enumerated basis of the truncated symmetric Fock space.
///
/// Ordered by degree, then lexicographically descending on the count list, so
/// the vacuum sits at index 0 and `e_i` at index `i + 1`.
#[derive(Debug)]
pub struct FockBasis {
    modes: usize,
    cap: usize,
    occupations: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
    degree_start: Vec<usize>,
    degrees: Vec<usize>,
    weights: Vec<f64>,
    /// raise[i][mode] = index of occupations[i] + δ_mode, if still in the basis
    raise: Vec<Vec<Option<usize>>>,
}

impl FockBasis {
    pub fn modes(&self) -> usize {
        self.modes
    }

    /// The degree cap `D`.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.occupations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupations.is_empty()
    }

    pub fn occupations(&self) -> &[Occupation] {
        &self.occupations
    }

    pub fn occupation(&self, idx: usize) -> &Occupation {
        &self.occupations[idx]
    }

    pub fn index_of(&self, occ: &Occupation) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.degrees[idx]
    }

    /// Index range of the degree-`k` block.
    pub fn degree_range(&self, k: usize) -> std::ops::Range<usize> {
        if k > self.cap {
            return self.len()..self.len();
        }
        self.degree_start[k]..self.degree_start[k + 1]
    }

    pub(crate) fn raise_index(&self, idx: usize, mode: usize) -> Option<usize> {
        self.raise[idx][mode]
    }

    pub(crate) fn lower_index(&self, idx: usize, mode: usize) -> Option<usize> {
        self.occupations[idx]
            .lowered(mode)
            .and_then(|o| self.index_of(&o))
    }

    pub fn same_space(&self, other: &FockBasis) -> bool {
        self.modes == other.modes && self.cap == other.cap
    }

    pub(crate) fn describe(&self) -> String {
        format!("d={}, D={}", self.modes, self.cap)
    }

    pub(crate) fn check_same(&self, other: &FockBasis) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                left: self.describe(),
                right: other.describe(),
            })
        }
    }
}

fn push_degree(modes: usize, degree: usize, prefix: &mut Vec<u32>, out: &mut Vec<Occupation>) {
    if prefix.len() + 1 == modes {
        prefix.push(degree as u32);
        out.push(Occupation(prefix.clone()));
        prefix.pop();
        return;
    }
    for c in (0..=degree).rev() {
        prefix.push(c as u32);
        push_degree(modes, degree - c, prefix, out);
        prefix.pop();
    }
}

/// Enumerates the basis of the degree-≤`cap` symmetric Fock space over `modes` modes.
pub fn enumerate_basis(modes: usize, cap: usize) -> Result<Arc<FockBasis>> {
    enumerate_basis_capped(modes, cap, DEFAULT_BASIS_CAP)
}

pub fn enumerate_basis_capped(modes: usize, cap: usize, size_cap: usize) -> Result<Arc<FockBasis>> {
    if modes == 0 {
        return Err(Error::Precondition("mode count must be at least 1".into()));
    }
    let size: u128 = (0..=cap).map(|k| multichoose(modes, k)).sum();
    if size > size_cap as u128 {
        return Err(Error::ResourceCap { size, cap: size_cap });
    }

    let mut occupations = Vec::with_capacity(size as usize);
    let mut degree_start = Vec::with_capacity(cap + 2);
    let mut prefix = Vec::with_capacity(modes);
    for k in 0..=cap {
        degree_start.push(occupations.len());
        push_degree(modes, k, &mut prefix, &mut occupations);
    }
    degree_start.push(occupations.len());

    let index: HashMap<Occupation, usize> = occupations
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, o)| (o, i))
        .collect();
    let weights = occupations.iter().map(Occupation::weight).collect();
    let degrees = occupations.iter().map(Occupation::degree).collect();
    let raise = occupations
        .iter()
        .map(|o| {
            (0..modes)
                .map(|m| index.get(&o.raised(m)).copied())
                .collect()
        })
        .collect();

    Ok(Arc::new(FockBasis {
        modes,
        cap,
        occupations,
        index,
        degree_start,
        degrees,
        weights,
        raise,
    }))
}

/// A vector `ξ ∈ H ⊗ C` given by its coordinates on the mode basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeVector(Vec<Complex64>);

impl ModeVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        ModeVector(entries)
    }

    pub fn real(entries: &[f64]) -> Self {
        ModeVector(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(d: usize) -> Self {
        ModeVector(vec![Complex64::new(0.0, 0.0); d])
    }

    /// The unit vector `e_i`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self, other>`, linear in the first slot.
    pub fn dot(&self, other: &ModeVector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn scale(&self, c: Complex64) -> ModeVector {
        ModeVector(self.0.iter().map(|z| z * c).collect())
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    /// Real parts, for vectors known to be real.
    pub fn re(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.re).collect()
    }
}

/// An element of the truncated Fock space, in coordinates on [`FockBasis`].
#[derive(Clone, Debug)]
pub struct FockVector {
    basis: Arc<FockBasis>,
    coeffs: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(basis: &Arc<FockBasis>) -> Self {
        FockVector {
            basis: basis.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); basis.len()],
        }
    }

    pub fn from_coeffs(basis: &Arc<FockBasis>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: coeffs.len(),
            });
        }
        Ok(FockVector {
            basis: basis.clone(),
            coeffs,
        })
    }

    pub fn vacuum(basis: &Arc<FockBasis>) -> Self {
        Self::basis_vector(basis, 0)
    }

    pub fn basis_vector(basis: &Arc<FockBasis>, idx: usize) -> Self {
        let mut v = Self::zeros(basis);
        v.coeffs[idx] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, occ: &Occupation) -> Complex64 {
        self.basis
            .index_of(occ)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.basis.weights())
            .map(|(c, w)| c.norm_sqr() * w)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> FockVector {
        FockVector {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        self.basis.check_same(&other.basis)?;
        Ok(FockVector {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &FockVector) -> Result<FockVector> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn conj(&self) -> FockVector {
        FockVector {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Keeps only the components of degree ≤ `k`.
    pub fn truncated(&self, k: usize) -> FockVector {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if self.basis.degree(i) > k {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Largest degree carrying a coefficient of modulus above `tol`.
    pub fn max_degree(&self, tol: f64) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(i, _)| self.basis.degree(i))
            .max()
    }
}

/// The renormalized inner product, linear in `v` and conjugate-linear in `w`.
pub fn inner_product(v: &FockVector, w: &FockVector) -> Result<Complex64> {
    v.basis.check_same(&w.basis)?;
    Ok(v.coeffs
        .iter()
        .zip(&w.coeffs)
        .zip(v.basis.weights())
        .map(|((a, b), wt)| a * b.conj() * wt)
        .sum())
}

/// Multiplies `v` (as a polynomial) by the linear form of `xi`; the degree-`D+1`
/// part is dropped.
pub(crate) fn multiply_linear(v: &FockVector, xi: &ModeVector) -> FockVector {
    let basis = &v.basis;
    let mut out = FockVector::zeros(basis);
    for (i, c) in v.coeffs.iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (mode, x) in xi.entries().iter().enumerate() {
            if let Some(j) = basis.raise_index(i, mode) {
                out.coeffs[j] += c * x;
            }
        }
    }
    out
}

/// `ξ_1 ⊙ .. ⊙ ξ_n` in occupation coordinates.
pub fn symmetric_tensor(basis: &Arc<FockBasis>, xs: &[ModeVector]) -> Result<FockVector> {
    if xs.len() > basis.cap() {
        return Err(Error::DegreeOverflow {
            degree: xs.len(),
            cap: basis.cap(),
        });
    }
    let mut v = FockVector::vacuum(basis);
    for xi in xs {
        if xi.dim() != basis.modes() {
            return Err(Error::DimensionMismatch {
                expected: basis.modes(),
                got: xi.dim(),
            });
        }
        v = multiply_linear(&v, xi);
    }
    Ok(v)
}
