//! First cohomology `H¹(Γ, π) = Z¹/B¹` of an orthogonal representation.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_rep::{free_ball, FiniteGroup, GroupPresentation, OrthogonalRep, Word, DEFAULT_BALL_CAP};

/// Singular-value threshold for rank decisions, relative to
/// `max(σ_max, 1)`. The floor keeps a constraint matrix that vanishes up to
/// rounding (e.g. `I + R + R² + R³` for a quarter turn) from counting as full rank.
pub const RANK_TOL: f64 = 1e-9;

fn rank_threshold(top: f64) -> f64 {
    RANK_TOL * top.max(1.0)
}

/// Ball radius sampled by [`coboundary_fit_default`].
pub const DEFAULT_FIT_RADIUS: usize = 4;

/// A 1-cocycle given by its values on generators.
#[derive(Clone, Debug)]
pub struct RepCocycle {
    pi: Arc<OrthogonalRep>,
    gen_values: Vec<DVector<f64>>,
}

impl RepCocycle {
    pub fn new(pi: Arc<OrthogonalRep>, gen_values: Vec<DVector<f64>>) -> Result<Self> {
        if gen_values.len() != pi.generator_count() {
            return Err(Error::DimensionMismatch {
                expected: pi.generator_count(),
                got: gen_values.len(),
            });
        }
        if let Some(v) = gen_values.iter().find(|v| v.len() != pi.dim()) {
            return Err(Error::DimensionMismatch {
                expected: pi.dim(),
                got: v.len(),
            });
        }
        Ok(RepCocycle { pi, gen_values })
    }

    pub fn zero(pi: Arc<OrthogonalRep>) -> Self {
        let gen_values = vec![DVector::zeros(pi.dim()); pi.generator_count()];
        RepCocycle { pi, gen_values }
    }

    /// `b(γ) = π_γ η − η`.
    pub fn coboundary(pi: Arc<OrthogonalRep>, eta: &DVector<f64>) -> Result<Self> {
        if eta.len() != pi.dim() {
            return Err(Error::DimensionMismatch {
                expected: pi.dim(),
                got: eta.len(),
            });
        }
        let gen_values = pi.generator_matrices().iter().map(|g| g * eta - eta).collect();
        Ok(RepCocycle { pi, gen_values })
    }

    /// Builds a cocycle from the stacked vector `(b_1, .., b_n)`.
    pub fn from_stacked(pi: Arc<OrthogonalRep>, stacked: &[f64]) -> Result<Self> {
        let d = pi.dim();
        if stacked.len() != d * pi.generator_count() {
            return Err(Error::DimensionMismatch {
                expected: d * pi.generator_count(),
                got: stacked.len(),
            });
        }
        let gen_values = stacked.chunks(d.max(1)).take(pi.generator_count()).map(DVector::from_column_slice).collect();
        RepCocycle::new(pi, gen_values)
    }

    pub fn rep(&self) -> &Arc<OrthogonalRep> {
        &self.pi
    }

    pub fn gen_values(&self) -> &[DVector<f64>] {
        &self.gen_values
    }

    pub fn stacked(&self) -> Vec<f64> {
        self.gen_values.iter().flat_map(|v| v.iter().copied()).collect()
    }

    pub fn add(&self, other: &RepCocycle) -> Result<RepCocycle> {
        if !Arc::ptr_eq(&self.pi, &other.pi) && *self.pi != *other.pi {
            return Err(Error::InvalidInput("cocycles of different representations".into()));
        }
        let gen_values = self.gen_values.iter().zip(&other.gen_values).map(|(a, b)| a + b).collect();
        Ok(RepCocycle {
            pi: self.pi.clone(),
            gen_values,
        })
    }

    /// Value on a single letter; `b(s⁻¹) = −π_sᵀ b(s)`.
    pub fn letter_value(&self, letter: i32) -> Result<DVector<f64>> {
        let idx = letter.unsigned_abs() as usize;
        if letter == 0 || idx > self.gen_values.len() {
            return Err(Error::GeneratorOutOfRange {
                index: idx.saturating_sub(1),
                count: self.gen_values.len(),
            });
        }
        let b = &self.gen_values[idx - 1];
        Ok(if letter > 0 {
            b.clone()
        } else {
            -(self.pi.generator(idx - 1).tr_mul(b))
        })
    }

    /// `b(w)` by folding `b(γ₁γ₂) = b(γ₁) + π_{γ₁} b(γ₂)` over the letters.
    pub fn extend(&self, w: &Word) -> Result<DVector<f64>> {
        let d = self.pi.dim();
        let mut acc = DVector::zeros(d);
        let mut prefix = DMatrix::<f64>::identity(d, d);
        for &l in w.letters() {
            acc += &prefix * self.letter_value(l)?;
            prefix *= self.pi.letter(l)?;
        }
        Ok(acc)
    }

    /// `‖b(r)‖` per relator.
    pub fn relator_residuals(&self, g: &GroupPresentation) -> Result<Vec<f64>> {
        g.relators().iter().map(|r| self.extend(r).map(|v| v.norm())).collect()
    }
}

/// `Z¹`, `B¹` and `H¹` dimensions with the singular spectra behind them.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    #[serde(rename = "dimZ1")]
    pub dim_z1: usize,
    #[serde(rename = "dimB1")]
    pub dim_b1: usize,
    #[serde(rename = "dimH1")]
    pub dim_h1: usize,
    /// Singular values of the relator constraint matrix (`Z¹`) and of the
    /// coboundary map (`B¹`), descending.
    pub singular_values: SingularSpectra,
    /// Stacked generator values `(b_1, .., b_n)` of an orthonormal `Z¹` basis.
    pub basis: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularSpectra {
    pub cocycle_constraints: Vec<f64>,
    pub coboundary_map: Vec<f64>,
}

impl CohomologyReport {
    pub fn basis_z1(&self, pi: &Arc<OrthogonalRep>) -> Result<Vec<RepCocycle>> {
        self.basis.iter().map(|b| RepCocycle::from_stacked(pi.clone(), b)).collect()
    }
}

/// Linear map `(b_1, .., b_n) ↦ b(w)` as a `d × nd` matrix.
pub fn extension_matrix(pi: &OrthogonalRep, w: &Word) -> Result<DMatrix<f64>> {
    let d = pi.dim();
    let n = pi.generator_count();
    let mut lin = DMatrix::<f64>::zeros(d, n * d);
    let mut prefix = DMatrix::<f64>::identity(d, d);
    for &l in w.letters() {
        let s = l.unsigned_abs() as usize - 1;
        let step = pi.letter(l)?;
        let block = if l > 0 { prefix.clone() } else { -(&prefix * &step) };
        let mut view = lin.view_mut((0, s * d), (d, d));
        view += block;
        prefix *= step;
    }
    Ok(lin)
}

/// SVD of `m` padded with zero rows to at least square shape.
/// Returns descending singular values and `Vᵀ` (rows = right singular vectors).
fn padded_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let cols = m.ncols();
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v_t = DMatrix::from_fn(order.len(), cols, |r, c| v_t[(order[r], c)]);
    (values, v_t)
}

fn rank_of(values: &[f64]) -> usize {
    let eps = rank_threshold(values.first().copied().unwrap_or(0.0));
    values.iter().filter(|&&s| s > eps).count()
}

fn check_shapes(pi: &OrthogonalRep, g: &GroupPresentation) -> Result<()> {
    if pi.generator_count() != g.generators() {
        return Err(Error::DimensionMismatch {
            expected: g.generators(),
            got: pi.generator_count(),
        });
    }
    Ok(())
}

/// Stacked relator constraints: `Z¹` is its null space.
pub fn cocycle_constraints(pi: &OrthogonalRep, g: &GroupPresentation) -> Result<DMatrix<f64>> {
    check_shapes(pi, g)?;
    let d = pi.dim();
    let n = pi.generator_count();
    let mut c = DMatrix::zeros(g.relators().len() * d, n * d);
    for (i, r) in g.relators().iter().enumerate() {
        c.view_mut((i * d, 0), (d, n * d)).copy_from(&extension_matrix(pi, r)?);
    }
    Ok(c)
}

/// Orthonormal basis of `Z¹` (stacked generator values as columns) and the
/// singular values of the constraint matrix.
pub fn cocycle_space(pi: &OrthogonalRep, g: &GroupPresentation) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let c = cocycle_constraints(pi, g)?;
    let unknowns = c.ncols();
    if unknowns == 0 {
        return Ok((DMatrix::zeros(0, 0), Vec::new()));
    }
    let (values, v_t) = padded_svd(&c);
    let rank = rank_of(&values);
    let basis = v_t.rows(rank, unknowns - rank).transpose();
    Ok((basis, values))
}

/// The coboundary map `η ↦ (π_s η − η)_s` as an `nd × d` matrix.
pub fn coboundary_map(pi: &OrthogonalRep) -> DMatrix<f64> {
    let d = pi.dim();
    let n = pi.generator_count();
    let id = DMatrix::<f64>::identity(d, d);
    let mut m = DMatrix::zeros(n * d, d);
    for (s, g) in pi.generator_matrices().iter().enumerate() {
        m.view_mut((s * d, 0), (d, d)).copy_from(&(g - &id));
    }
    m
}

/// Orthonormal basis of `B¹` as columns, with the singular values of the
/// coboundary map.
pub fn coboundary_space(pi: &OrthogonalRep, g: &GroupPresentation) -> Result<(DMatrix<f64>, Vec<f64>)> {
    check_shapes(pi, g)?;
    let m = coboundary_map(pi);
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok((DMatrix::zeros(m.nrows(), 0), Vec::new()));
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let values: Vec<f64> = {
        let mut v: Vec<f64> = svd.singular_values.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let rank = rank_of(&values);
    let top = values.first().copied().unwrap_or(0.0);
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rank_threshold(top))
        .collect();
    debug_assert_eq!(cols.len(), rank);
    let basis = DMatrix::from_fn(m.nrows(), rank, |r, c| u[(r, cols[c])]);
    Ok((basis, values))
}

pub fn h1(pi: &OrthogonalRep, g: &GroupPresentation) -> Result<CohomologyReport> {
    let (z, z_values) = cocycle_space(pi, g)?;
    let (_, b_values) = coboundary_space(pi, g)?;
    let dim_z1 = z.ncols();
    let dim_b1 = rank_of(&b_values);
    if dim_b1 > dim_z1 {
        return Err(Error::Convergence(format!(
            "coboundary rank {dim_b1} exceeds cocycle dimension {dim_z1}; representation fails its relators"
        )));
    }
    let basis = (0..dim_z1).map(|c| z.column(c).iter().copied().collect()).collect();
    Ok(CohomologyReport {
        dim_z1,
        dim_b1,
        dim_h1: dim_z1 - dim_b1,
        singular_values: SingularSpectra {
            cocycle_constraints: z_values,
            coboundary_map: b_values,
        },
        basis,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoboundaryFit {
    pub eta: Vec<f64>,
    /// `‖b(w) − (π_w η − η)‖` per sampled word.
    pub residuals: Vec<f64>,
    /// Set when the stacked system has a non-trivial kernel; `eta` is then
    /// the minimum-norm solution.
    pub rank_deficient: bool,
}

impl CoboundaryFit {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Least-squares `η` minimizing `Σ_w ‖b(w) − (π_w η − η)‖²`.
pub fn coboundary_fit(b: &RepCocycle, words: &[Word]) -> Result<CoboundaryFit> {
    if words.is_empty() {
        return Err(Error::InvalidInput("coboundary fit needs at least one word".into()));
    }
    let pi = b.rep();
    let d = pi.dim();
    let mut a = DMatrix::<f64>::zeros(words.len() * d, d);
    let mut rhs = DVector::<f64>::zeros(words.len() * d);
    let id = DMatrix::<f64>::identity(d, d);
    let mut targets = Vec::with_capacity(words.len());
    let mut maps = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let pw = crate::group_rep::evaluate(pi, w)? - &id;
        let bw = b.extend(w)?;
        a.view_mut((i * d, 0), (d, d)).copy_from(&pw);
        rhs.rows_mut(i * d, d).copy_from(&bw);
        targets.push(bw);
        maps.push(pw);
    }
    let svd = a.svd(true, true);
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let top = values.iter().copied().fold(0.0, f64::max);
    let eps = rank_threshold(top);
    let rank = values.iter().filter(|&&s| s > eps).count();
    let eta = svd
        .solve(&rhs, eps)
        .map_err(|e| Error::Convergence(format!("least squares: {e}")))?;
    let residuals = maps
        .iter()
        .zip(&targets)
        .map(|(m, t)| (t - m * &eta).norm())
        .collect();
    Ok(CoboundaryFit {
        eta: eta.iter().copied().collect(),
        residuals,
        rank_deficient: rank < d,
    })
}

/// [`coboundary_fit`] over the free ball of radius [`DEFAULT_FIT_RADIUS`].
pub fn coboundary_fit_default(b: &RepCocycle) -> Result<CoboundaryFit> {
    let words = free_ball(b.rep().generator_count(), DEFAULT_FIT_RADIUS, DEFAULT_BALL_CAP)?;
    coboundary_fit(b, &words)
}

/// `(n, max_{|w| = n} ‖b(w)‖)` for `n = 0..=radius`, over reduced words.
///
/// Shells are built by prepending letters, `b(s w) = b(s) + π_s b(w)`, so each
/// word costs one generator application.
pub fn growth_probe(b: &RepCocycle, radius: usize) -> Result<Vec<(usize, f64)>> {
    growth_probe_capped(b, radius, DEFAULT_BALL_CAP)
}

pub fn growth_probe_capped(b: &RepCocycle, radius: usize, cap: usize) -> Result<Vec<(usize, f64)>> {
    let pi = b.rep();
    let n = pi.generator_count();
    // fails fast on the ball size without materializing it
    let mut size: u128 = 1;
    let mut sphere: u128 = 1;
    for r in 1..=radius {
        sphere *= if r == 1 { 2 * n as u128 } else { (2 * n as u128).saturating_sub(1) };
        size += sphere;
        if size > cap as u128 {
            return Err(Error::ResourceCap { size, cap });
        }
    }
    let alphabet: Vec<i32> = (1..=n as i32).flat_map(|g| [g, -g]).collect();
    let letter_vals = alphabet.iter().map(|&l| b.letter_value(l)).collect::<Result<Vec<_>>>()?;
    let letter_mats = alphabet.iter().map(|&l| pi.letter(l)).collect::<Result<Vec<_>>>()?;
    // shell entries: (first letter, value)
    let mut shell: Vec<(i32, DVector<f64>)> = vec![(0, DVector::zeros(pi.dim()))];
    let mut out = vec![(0, 0.0)];
    for r in 1..=radius {
        let mut next = Vec::with_capacity(shell.len() * alphabet.len());
        for (first, value) in &shell {
            for (k, &l) in alphabet.iter().enumerate() {
                if *first == -l {
                    continue;
                }
                next.push((l, &letter_vals[k] + &letter_mats[k] * value));
            }
        }
        let max = next.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        out.push((r, max));
        shell = next;
    }
    Ok(out)
}

/// `dim Z¹` of a finite group from its full multiplication table: a function
/// on all elements is a cocycle iff `b(gh) = b(g) + π_g b(h)` for every pair.
/// `element_matrices[g]` is `π_g`.
pub fn finite_group_z1_dimension(grp: &FiniteGroup, element_matrices: &[DMatrix<f64>]) -> Result<usize> {
    let n = grp.order();
    if element_matrices.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: element_matrices.len(),
        });
    }
    let d = element_matrices[0].nrows();
    let mut m = DMatrix::<f64>::zeros(n * n * d, n * d);
    for g in 0..n {
        for h in 0..n {
            let gh = grp.mul(g, h);
            let row0 = (g * n + h) * d;
            for i in 0..d {
                m[(row0 + i, gh * d + i)] += 1.0;
                m[(row0 + i, g * d + i)] -= 1.0;
                for j in 0..d {
                    m[(row0 + i, h * d + j)] -= element_matrices[g][(i, j)];
                }
            }
        }
    }
    let (values, _) = padded_svd(&m);
    Ok(n * d - rank_of(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_rep::{direct_sum, invariant_vectors, regular_rep_ball, rotation};
    use std::f64::consts::PI;

    fn arc(dim: usize, gens: Vec<DMatrix<f64>>) -> Arc<OrthogonalRep> {
        Arc::new(OrthogonalRep::new(dim, gens).unwrap())
    }

    fn w(l: &[i32]) -> Word {
        Word::new(l.to_vec()).unwrap()
    }

    fn dv(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn extension_on_the_integers() {
        let pi = arc(1, vec![DMatrix::identity(1, 1)]);
        let b = RepCocycle::new(pi, vec![dv(&[1.0])]).unwrap();
        assert_eq!(b.extend(&Word::identity()).unwrap()[0], 0.0);
        for n in 1..8 {
            assert_eq!(b.extend(&w(&vec![1; n])).unwrap()[0], n as f64);
            assert_eq!(b.extend(&w(&vec![-1; n])).unwrap()[0], -(n as f64));
        }
    }

    #[test]
    fn extension_vanishes_on_w_winv() {
        let pi = arc(2, vec![rotation(0.3), rotation(1.7)]);
        let b = RepCocycle::new(pi, vec![dv(&[0.4, -1.0]), dv(&[2.0, 0.5])]).unwrap();
        let x = w(&[1, 2, 2, -1, -2, 1]);
        assert!(b.extend(&x.concat(&x.inverse())).unwrap().norm() < 1e-12);
        // unreduced and reduced forms agree
        let y = w(&[1, 2, -2, 2, 1]);
        assert!((b.extend(&y).unwrap() - b.extend(&crate::group_rep::reduce(&y)).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn extension_matrix_matches_extend() {
        let pi = arc(2, vec![rotation(0.3), rotation(1.7)]);
        let b = RepCocycle::new(pi.clone(), vec![dv(&[0.4, -1.0]), dv(&[2.0, 0.5])]).unwrap();
        let x = w(&[1, -2, -2, 1, 2]);
        let lin = extension_matrix(&pi, &x).unwrap();
        let direct = b.extend(&x).unwrap();
        assert!((lin * dv(&b.stacked()) - direct).norm() < 1e-12);
    }

    #[test]
    fn dimensions_for_small_groups() {
        let f2 = GroupPresentation::free(2);
        let r = OrthogonalRep::new(2, vec![rotation(0.4), rotation(2.2)]).unwrap();
        let rep = h1(&r, &f2).unwrap();
        assert_eq!((rep.dim_z1, rep.dim_b1, rep.dim_h1), (4, 2, 2));

        let z = GroupPresentation::free(1);
        let rep = h1(&OrthogonalRep::trivial(1, 1), &z).unwrap();
        assert_eq!((rep.dim_z1, rep.dim_b1, rep.dim_h1), (1, 0, 1));

        let rot = OrthogonalRep::new(2, vec![rotation(1.0)]).unwrap();
        let rep = h1(&rot, &z).unwrap();
        assert_eq!((rep.dim_z1, rep.dim_b1, rep.dim_h1), (2, 2, 0));

        let z4 = GroupPresentation::cyclic(4);
        let quarter = OrthogonalRep::new(2, vec![rotation(PI / 2.0)]).unwrap();
        let rep = h1(&quarter, &z4).unwrap();
        assert_eq!((rep.dim_z1, rep.dim_b1, rep.dim_h1), (2, 2, 0));
    }

    #[test]
    fn free_group_h1_formula() {
        let f2 = GroupPresentation::free(2);
        let tr = direct_sum(
            &OrthogonalRep::trivial(2, 1),
            &OrthogonalRep::new(2, vec![rotation(0.4), rotation(2.2)]).unwrap(),
        )
        .unwrap();
        let fix = invariant_vectors(&tr).ncols();
        assert_eq!(fix, 1);
        let rep = h1(&tr, &f2).unwrap();
        assert_eq!(rep.dim_h1, tr.dim() + fix);
        let (b, _) = coboundary_space(&tr, &f2).unwrap();
        assert_eq!(b.ncols(), tr.dim() - fix);
    }

    #[test]
    fn finite_groups_have_trivial_h1() {
        let perm = |p: &[usize]| DMatrix::from_fn(3, 3, |r, c| if p[c] == r { 1.0 } else { 0.0 });
        let (s3, s3_gens) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        let cases = vec![
            (
                GroupPresentation::cyclic(2),
                FiniteGroup::cyclic(2),
                vec![1],
                vec![DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])],
            ),
            (GroupPresentation::cyclic(4), FiniteGroup::cyclic(4), vec![1], vec![rotation(PI / 2.0)]),
            (
                GroupPresentation::symmetric3(),
                s3,
                s3_gens,
                vec![perm(&[1, 0, 2]), perm(&[0, 2, 1])],
            ),
        ];
        for (pres, grp, gens, gm) in cases {
            let all = grp.element_matrices(&gens, &gm).unwrap();
            let expected_z1 = finite_group_z1_dimension(&grp, &all).unwrap();
            let pi = OrthogonalRep::new(gm[0].nrows(), gm).unwrap();
            let rep = h1(&pi, &pres).unwrap();
            assert_eq!(rep.dim_z1, expected_z1);
            assert_eq!(rep.dim_h1, 0);
        }
    }

    #[test]
    fn basis_is_consistent_and_contains_coboundaries() {
        let s3 = GroupPresentation::symmetric3();
        let perm = |p: &[usize]| DMatrix::from_fn(3, 3, |r, c| if p[c] == r { 1.0 } else { 0.0 });
        let pi = arc(3, vec![perm(&[1, 0, 2]), perm(&[0, 2, 1])]);
        let rep = h1(&pi, &s3).unwrap();
        for b in rep.basis_z1(&pi).unwrap() {
            assert!(b.relator_residuals(&s3).unwrap().iter().all(|&r| r <= 1e-9));
        }
        let (z, _) = cocycle_space(&pi, &s3).unwrap();
        let (bb, _) = coboundary_space(&pi, &s3).unwrap();
        // each coboundary direction lies in span(Z¹)
        let proj = &z * z.transpose();
        assert!((&proj * &bb - &bb).norm() <= 1e-10);
    }

    #[test]
    fn report_serializes_with_expected_keys() {
        let rep = h1(&OrthogonalRep::trivial(1, 1), &GroupPresentation::free(1)).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        for key in ["dimZ1", "dimB1", "dimH1", "singular_values", "basis"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn fitting_coboundaries() {
        let pi = arc(2, vec![rotation(0.4), rotation(2.2)]);
        let eta0 = dv(&[0.3, -1.2]);
        let b = RepCocycle::coboundary(pi.clone(), &eta0).unwrap();
        let fit = coboundary_fit_default(&b).unwrap();
        assert!(fit.max_residual() <= 1e-9);
        assert!(!fit.rank_deficient);

        let zero = RepCocycle::zero(pi);
        let fit = coboundary_fit_default(&zero).unwrap();
        assert!(fit.eta.iter().all(|&x| x == 0.0));
        assert!(fit.residuals.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn fitting_a_non_coboundary_on_the_integers() {
        // trivial rep: π_w − I = 0, so η is free (minimum norm 0) and the
        // residual at aⁿ is |b(aⁿ)| = n
        let pi = arc(1, vec![DMatrix::identity(1, 1)]);
        let b = RepCocycle::new(pi, vec![dv(&[1.0])]).unwrap();
        let words: Vec<Word> = (1..=10).map(|n| w(&vec![1; n])).collect();
        let fit = coboundary_fit(&b, &words).unwrap();
        assert!(fit.rank_deficient);
        assert_eq!(fit.eta, vec![0.0]);
        for (n, r) in fit.residuals.iter().enumerate() {
            assert!((r - (n + 1) as f64).abs() < 1e-12);
        }
        assert!(coboundary_fit(&b, &[]).is_err());
    }

    #[test]
    fn growth_of_integer_cocycle() {
        let pi = arc(1, vec![DMatrix::identity(1, 1)]);
        let b = RepCocycle::new(pi, vec![dv(&[1.0])]).unwrap();
        let g = growth_probe(&b, 6).unwrap();
        for (r, m) in g {
            assert!((m - r as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn growth_of_coboundaries_is_bounded() {
        let pi = arc(2, vec![rotation(0.4), rotation(2.2)]);
        let eta = dv(&[0.3, -1.2]);
        let b = RepCocycle::coboundary(pi, &eta).unwrap();
        for (_, m) in growth_probe(&b, 6).unwrap() {
            assert!(m <= 2.0 * eta.norm() + 1e-12);
        }
    }

    #[test]
    fn growth_probe_matches_extend() {
        let pi = arc(2, vec![rotation(0.4), rotation(2.2)]);
        let b = RepCocycle::new(pi, vec![dv(&[1.0, 0.5]), dv(&[-0.3, 0.8])]).unwrap();
        let g = growth_probe(&b, 3).unwrap();
        let words = free_ball(2, 3, 1000).unwrap();
        for r in 0..=3 {
            let m = words
                .iter()
                .filter(|x| x.len() == r)
                .map(|x| b.extend(x).unwrap().norm())
                .fold(0.0, f64::max);
            assert!((g[r].1 - m).abs() < 1e-12);
        }
        assert!(matches!(growth_probe_capped(&b, 10, 1000), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn free_group_regular_cocycle_grows_like_a_square_root() {
        // b(a) = δ_e, b(b) = 0: ‖b(γ)‖² counts the a-letters of γ
        let radius = 6;
        let (rep, words) = regular_rep_ball(&GroupPresentation::free(2), radius).unwrap();
        let e = words.iter().position(|x| x.is_empty()).unwrap();
        let mut delta = DVector::zeros(rep.dim());
        delta[e] = 1.0;
        let pi = Arc::new(rep);
        let b = RepCocycle::new(pi.clone(), vec![delta, DVector::zeros(pi.dim())]).unwrap();
        for (r, m) in growth_probe(&b, radius).unwrap() {
            assert!((m - (r as f64).sqrt()).abs() < 1e-12, "r={r} m={m}");
        }
    }
}
