//! Finitely presented groups, words, and orthogonal representations given on
//! generators.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalue threshold on `Σ_s (I − π_s)ᵀ(I − π_s)` below which a direction
/// counts as invariant.
pub const INVARIANCE_EIG_TOL: f64 = 1e-8;

/// Default cap on the number of words enumerated in a ball.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// A word in the generators: letter `k > 0` is generator `k − 1`, `−k` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::InvalidInput("word letters must be non-zero".into()));
        }
        Ok(Word(letters))
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The one-letter word of generator `index` (0-based).
    pub fn generator(index: usize) -> Self {
        Word(vec![index as i32 + 1])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        reduce(&Word(letters))
    }

    /// Plain concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * n).collect())
    }

    fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Free reduction: cancels adjacent `x x⁻¹` pairs.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<i32> = Vec::with_capacity(w.0.len());
    for &l in &w.0 {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// `⟨ s_1, .., s_n | r_1, .., r_k ⟩`; no relators means the free group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPresentation {
    generators: usize,
    relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if r.max_generator() > generators {
                return Err(Error::GeneratorOutOfRange {
                    index: r.max_generator() - 1,
                    count: generators,
                });
            }
        }
        let relators = relators
            .iter()
            .map(reduce)
            .filter(|r| !r.is_empty())
            .collect();
        Ok(GroupPresentation { generators, relators })
    }

    pub fn free(generators: usize) -> Self {
        GroupPresentation {
            generators,
            relators: Vec::new(),
        }
    }

    /// `⟨ a | a^n ⟩`.
    pub fn cyclic(n: usize) -> Self {
        GroupPresentation {
            generators: 1,
            relators: vec![Word(vec![1; n])],
        }
    }

    /// `S_3 = ⟨ a, b | a², b², (ab)³ ⟩`.
    pub fn symmetric3() -> Self {
        GroupPresentation {
            generators: 2,
            relators: vec![Word(vec![1, 1]), Word(vec![2, 2]), Word(vec![1, 2, 1, 2, 1, 2])],
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }
}

/// A representation given by one `d × d` real matrix per generator.
///
/// Generator matrices are expected to be orthogonal (see [`rep_check`]); the
/// truncated regular representations built by [`regular_rep_ball`] are partial
/// isometries instead. Inverse letters act by the transpose in both cases.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalRep {
    dim: usize,
    generators: Vec<DMatrix<f64>>,
}

impl OrthogonalRep {
    pub fn new(dim: usize, generators: Vec<DMatrix<f64>>) -> Result<Self> {
        for g in &generators {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.nrows().max(g.ncols()),
                });
            }
        }
        Ok(OrthogonalRep { dim, generators })
    }

    pub fn trivial(generator_count: usize, dim: usize) -> Self {
        OrthogonalRep {
            dim,
            generators: vec![DMatrix::identity(dim, dim); generator_count],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, i: usize) -> &DMatrix<f64> {
        &self.generators[i]
    }

    pub fn generator_matrices(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    /// Matrix of a single letter.
    pub fn letter(&self, letter: i32) -> Result<DMatrix<f64>> {
        let idx = letter.unsigned_abs() as usize;
        if letter == 0 || idx > self.generators.len() {
            return Err(Error::GeneratorOutOfRange {
                index: idx.saturating_sub(1),
                count: self.generators.len(),
            });
        }
        let g = &self.generators[idx - 1];
        Ok(if letter > 0 { g.clone() } else { g.transpose() })
    }
}

/// Planar rotation by `theta`.
pub fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// A Haar-random orthogonal matrix: QR of a Gaussian matrix with the signs
/// of `R`'s diagonal moved into `Q`.
pub fn random_orthogonal<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rand_distr::StandardNormal.sample(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..d {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    q
}

/// `π_w`, the ordered product of generator matrices (transposes for inverses).
pub fn evaluate(pi: &OrthogonalRep, w: &Word) -> Result<DMatrix<f64>> {
    let mut acc = DMatrix::identity(pi.dim, pi.dim);
    for &l in w.letters() {
        acc *= pi.letter(l)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct RepCheckReport {
    /// `‖TᵀT − I‖_F` per generator.
    pub orthogonality: Vec<f64>,
    /// `‖π(r) − I‖_F` per relator.
    pub relators: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

pub fn rep_check(pi: &OrthogonalRep, g: &GroupPresentation, tol: f64) -> Result<RepCheckReport> {
    if pi.generator_count() != g.generators() {
        return Err(Error::DimensionMismatch {
            expected: g.generators(),
            got: pi.generator_count(),
        });
    }
    let id = DMatrix::<f64>::identity(pi.dim, pi.dim);
    let orthogonality: Vec<f64> = pi
        .generators
        .iter()
        .map(|t| (t.transpose() * t - &id).norm())
        .collect();
    let relators = g
        .relators()
        .iter()
        .map(|r| evaluate(pi, r).map(|m| (m - &id).norm()))
        .collect::<Result<Vec<f64>>>()?;
    let pass = orthogonality.iter().chain(&relators).all(|&r| r <= tol);
    Ok(RepCheckReport {
        orthogonality,
        relators,
        tol,
        pass,
    })
}

fn same_generators(p: &OrthogonalRep, q: &OrthogonalRep) -> Result<()> {
    if p.generator_count() != q.generator_count() {
        return Err(Error::DimensionMismatch {
            expected: p.generator_count(),
            got: q.generator_count(),
        });
    }
    Ok(())
}

/// Block-diagonal sum `p ⊕ q`.
pub fn direct_sum(p: &OrthogonalRep, q: &OrthogonalRep) -> Result<OrthogonalRep> {
    same_generators(p, q)?;
    let dim = p.dim + q.dim;
    let generators = p
        .generators
        .iter()
        .zip(&q.generators)
        .map(|(a, b)| {
            let mut m = DMatrix::zeros(dim, dim);
            m.view_mut((0, 0), (p.dim, p.dim)).copy_from(a);
            m.view_mut((p.dim, p.dim), (q.dim, q.dim)).copy_from(b);
            m
        })
        .collect();
    Ok(OrthogonalRep { dim, generators })
}

/// Kronecker product `p ⊗ q`.
pub fn tensor(p: &OrthogonalRep, q: &OrthogonalRep) -> Result<OrthogonalRep> {
    same_generators(p, q)?;
    let generators = p
        .generators
        .iter()
        .zip(&q.generators)
        .map(|(a, b)| a.kronecker(b))
        .collect();
    Ok(OrthogonalRep {
        dim: p.dim * q.dim,
        generators,
    })
}

/// `Σ_s (I − π_s)ᵀ (I − π_s)`; its kernel is the space of invariant vectors.
pub fn gram_operator(pi: &OrthogonalRep) -> DMatrix<f64> {
    let id = DMatrix::<f64>::identity(pi.dim, pi.dim);
    let mut m = DMatrix::zeros(pi.dim, pi.dim);
    for g in &pi.generators {
        let d = &id - g;
        m += d.transpose() * d;
    }
    m
}

fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Orthonormal basis (as columns) of `∩_s ker(π_s − I)`.
pub fn invariant_vectors(pi: &OrthogonalRep) -> DMatrix<f64> {
    if pi.dim == 0 {
        return DMatrix::zeros(0, 0);
    }
    let (values, vectors) = sorted_eigen(gram_operator(pi));
    let k = values.iter().take_while(|&&v| v <= INVARIANCE_EIG_TOL).count();
    vectors.columns(0, k).into_owned()
}

/// Whether `π ⊗ π` has no invariant vector.
///
/// Decided without diagonalizing: `π ⊗ π` has an invariant direction exactly
/// when `M − εI` fails to be positive definite, `M` being the Gram operator of
/// the tensor square and `ε` = [`INVARIANCE_EIG_TOL`]. `M` is assembled from
/// Kronecker factors so the tensor square is never multiplied out.
pub fn weak_mixing_check(pi: &OrthogonalRep) -> bool {
    let n = pi.dim * pi.dim;
    if n == 0 {
        return true;
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for g in &pi.generators {
        let gg = g.kronecker(g);
        let gtg = g.transpose() * g;
        // (I − P)ᵀ(I − P) = I − P − Pᵀ + PᵀP with P = g ⊗ g, PᵀP = gᵀg ⊗ gᵀg
        m += gtg.kronecker(&gtg);
        m -= &gg;
        m -= gg.transpose();
        for i in 0..n {
            m[(i, i)] += 1.0;
        }
    }
    for i in 0..n {
        m[(i, i)] -= INVARIANCE_EIG_TOL;
    }
    Cholesky::new(m).is_some()
}

/// Smallest eigenvalue of `Σ_s (I − π_s)ᵀ(I − π_s)` on the orthogonal
/// complement of the invariant vectors; `None` when that complement is `{0}`.
///
/// A value `g > 0` gives `‖ξ − P ξ‖² ≤ g⁻¹ Σ_s ‖π_s ξ − ξ‖²`.
pub fn spectral_gap_estimate(pi: &OrthogonalRep) -> Option<f64> {
    if pi.dim == 0 {
        return None;
    }
    let (values, _) = sorted_eigen(gram_operator(pi));
    values.into_iter().find(|&v| v > INVARIANCE_EIG_TOL)
}

/// Reduced words of length ≤ `radius` in the free group on `generators`
/// letters, ordered by length and then by letter sequence (`1, −1, 2, −2, ..`).
pub fn free_ball(generators: usize, radius: usize, cap: usize) -> Result<Vec<Word>> {
    let mut size: u128 = 1;
    let mut sphere: u128 = 1;
    for r in 1..=radius {
        sphere *= if r == 1 { 2 * generators as u128 } else { (2 * generators as u128).saturating_sub(1) };
        size += sphere;
        if size > cap as u128 {
            return Err(Error::ResourceCap { size, cap });
        }
    }
    let alphabet: Vec<i32> = (1..=generators as i32).flat_map(|g| [g, -g]).collect();
    let mut out = vec![Word::identity()];
    let mut start = 0;
    for _ in 0..radius {
        let end = out.len();
        for i in start..end {
            for &l in &alphabet {
                if out[i].0.last() == Some(&-l) {
                    continue;
                }
                let mut letters = out[i].0.clone();
                letters.push(l);
                out.push(Word(letters));
            }
        }
        start = end;
    }
    Ok(out)
}

/// The left-regular representation of a free group restricted to the ball of
/// radius `radius`: basis `δ_g`, `|g| ≤ radius`, with `s δ_g = δ_{sg}` and
/// images leaving the ball truncated to zero.
pub fn regular_rep_ball(g: &GroupPresentation, radius: usize) -> Result<(OrthogonalRep, Vec<Word>)> {
    if !g.is_free() {
        return Err(Error::InvalidInput(
            "truncated regular representation needs a free presentation; use FiniteGroup::regular_rep for finite groups".into(),
        ));
    }
    let words = free_ball(g.generators(), radius, DEFAULT_BALL_CAP)?;
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let n = words.len();
    let generators = (0..g.generators())
        .map(|s| {
            let sw = Word::generator(s);
            let mut m = DMatrix::zeros(n, n);
            for (col, w) in words.iter().enumerate() {
                if let Some(&row) = index.get(&sw.mul(w)) {
                    m[(row, col)] = 1.0;
                }
            }
            m
        })
        .collect();
    Ok((OrthogonalRep { dim: n, generators }, words))
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidInput("multiplication table must be square with entries in range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidInput("multiplication table has no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == identity) {
                return Err(Error::InvalidInput(format!("element {a} has no inverse")));
            }
        }
        Ok(FiniteGroup { table, identity })
    }

    /// Closure of the given permutations (of `0..degree`) under composition.
    /// Element 0 is the identity; the generators follow in order when distinct.
    /// `(p q)(x) = p(q(x))`.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<(Self, Vec<usize>)> {
        let degree = gens.first().map(Vec::len).unwrap_or(0);
        for p in gens {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidInput("generators must be permutations of one set".into()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let mut gen_idx = Vec::new();
        for p in gens {
            let i = *index.entry(p.clone()).or_insert_with(|| {
                elements.push(p.clone());
                elements.len() - 1
            });
            gen_idx.push(i);
        }
        let mut frontier = 0;
        while frontier < elements.len() {
            let e = elements[frontier].clone();
            for p in gens {
                let c = compose(p, &e);
                if !index.contains_key(&c) {
                    index.insert(c.clone(), elements.len());
                    elements.push(c);
                }
            }
            frontier += 1;
        }
        let n = elements.len();
        let table = (0..n)
            .map(|a| (0..n).map(|b| index[&compose(&elements[a], &elements[b])]).collect())
            .collect();
        Ok((FiniteGroup { table, identity: 0 }, gen_idx))
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup { table, identity: 0 }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.identity)
            .expect("validated group")
    }

    /// Matrices of every element, extending `gen_matrices` (images of the
    /// elements `gen_elems`) multiplicatively. Errors if the generators do
    /// not generate the group.
    pub fn element_matrices(&self, gen_elems: &[usize], gen_matrices: &[DMatrix<f64>]) -> Result<Vec<DMatrix<f64>>> {
        if gen_elems.len() != gen_matrices.len() || gen_matrices.is_empty() {
            return Err(Error::InvalidInput("need one matrix per generator".into()));
        }
        let d = gen_matrices[0].nrows();
        let mut mats: Vec<Option<DMatrix<f64>>> = vec![None; self.order()];
        mats[self.identity] = Some(DMatrix::identity(d, d));
        let mut queue = vec![self.identity];
        while let Some(a) = queue.pop() {
            let ma = mats[a].clone().expect("visited");
            for (&g, mg) in gen_elems.iter().zip(gen_matrices) {
                let b = self.mul(g, a);
                if mats[b].is_none() {
                    mats[b] = Some(mg * &ma);
                    queue.push(b);
                }
            }
        }
        mats.into_iter()
            .map(|m| m.ok_or_else(|| Error::InvalidInput("generators do not generate the group".into())))
            .collect()
    }

    /// The left-regular representation on generators `gen_elems`.
    pub fn regular_rep(&self, gen_elems: &[usize]) -> OrthogonalRep {
        let n = self.order();
        let generators = gen_elems
            .iter()
            .map(|&g| {
                let mut m = DMatrix::zeros(n, n);
                for x in 0..n {
                    m[(self.mul(g, x), x)] = 1.0;
                }
                m
            })
            .collect();
        OrthogonalRep { dim: n, generators }
    }

    /// `(1/|G|) Σ_g π_g`.
    pub fn averaging_projector(&self, element_matrices: &[DMatrix<f64>]) -> DMatrix<f64> {
        let d = element_matrices[0].nrows();
        let mut p = DMatrix::zeros(d, d);
        for m in element_matrices {
            p += m;
        }
        p / self.order() as f64
    }
}

/// JSON document `{generators, relators, matrices}` describing a presentation
/// together with a representation of it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationDoc {
    pub generators: usize,
    #[serde(default)]
    pub relators: Vec<Vec<i32>>,
    pub matrices: Vec<Vec<Vec<f64>>>,
}

impl RepresentationDoc {
    pub fn into_parts(self) -> Result<(GroupPresentation, OrthogonalRep)> {
        let relators = self.relators.into_iter().map(Word::new).collect::<Result<Vec<_>>>()?;
        let g = GroupPresentation::new(self.generators, relators)?;
        if self.matrices.len() != self.generators {
            return Err(Error::DimensionMismatch {
                expected: self.generators,
                got: self.matrices.len(),
            });
        }
        let dim = self.matrices.first().map(Vec::len).unwrap_or(0);
        let mats = self
            .matrices
            .iter()
            .map(|rows| {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::InvalidInput("representation matrices must be square and equal-sized".into()));
                }
                Ok(DMatrix::from_fn(dim, dim, |r, c| rows[r][c]))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((g, OrthogonalRep::new(dim, mats)?))
    }

    pub fn from_parts(g: &GroupPresentation, pi: &OrthogonalRep) -> Self {
        RepresentationDoc {
            generators: g.generators(),
            relators: g.relators().iter().map(|w| w.letters().to_vec()).collect(),
            matrices: pi
                .generators
                .iter()
                .map(|m| (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect())
                .collect(),
        }
    }
}

pub fn parse_representation(json: &str) -> Result<(GroupPresentation, OrthogonalRep)> {
    let doc: RepresentationDoc = serde_json::from_str(json)?;
    doc.into_parts()
}

pub fn load_representation(path: &Path) -> Result<(GroupPresentation, OrthogonalRep)> {
    parse_representation(&std::fs::read_to_string(path)?)
}
