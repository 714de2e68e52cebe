//! One function per suite. Each returns its checks and residual tables.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::*;
use super::{fmt, grid_map, Check, SuiteOutput, Table};
use crate::bimodule_derivation::{
    covariance_check, dirichlet_form, dirichlet_form_monte_carlo, leibniz_residual, Bimodule, BimoduleVector,
    PolyFunction, PrimedFock,
};
use crate::cohomology::{coboundary_fit_default, finite_group_z1_dimension, growth_probe, h1, RepCocycle};
use crate::error::Result;
use crate::fock::{enumerate_basis, FockVector, ModeVector};
use crate::gaussian_dynamics::{
    cocycle_identity_residual, deformation_correlation_reduced, deformation_correlation_unchecked,
    invariant_unitary, malleability_axioms, ou_closed_formula_residual, ou_resolvent, ou_semigroup,
    ps_vacuum_expectation, smooth_by_kernel, torus_deformation, DeformationReport, DoubledCtx, GaussianActionCtx,
    TorusGrid,
};
use crate::group_rep::{
    invariant_vectors, load_representation, random_orthogonal, regular_rep_ball, rep_check, rotation, FiniteGroup,
    GroupPresentation, OrthogonalRep, Word,
};
use crate::wick::{gaussian_moment, mixed_moment, moment, second_quantize_real, FieldConvention};

pub(super) fn run_suite(cfg: &ExperimentConfig, parallel: bool) -> Result<SuiteOutput> {
    let seed = cfg.seed;
    match &cfg.suite {
        SuiteConfig::Moments(c) => moments(c, seed, parallel),
        SuiteConfig::Cohomology(c) => cohomology(c, seed),
        SuiteConfig::PsTrace(c) => ps_trace(c, parallel),
        SuiteConfig::DeformationDecay(c) => deformation_decay(c, parallel),
        SuiteConfig::Semigroup(c) => semigroup(c, seed),
        SuiteConfig::SmoothIdentity(c) => smooth_identity(c, seed, parallel),
        SuiteConfig::MalleableTorus(c) => malleable_torus(c, seed, parallel),
        SuiteConfig::Bimodule(c) => bimodule(c, seed),
        SuiteConfig::InvariantUnitary(c) => invariant(c),
    }
}

/// Differences below this are treated as rounding noise.
const ROUNDING_FLOOR: f64 = 1e-14;

fn column(m: &DMatrix<f64>, j: usize) -> ModeVector {
    ModeVector::real(m.column(j).as_slice())
}

fn max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |a, b| if b.is_nan() { b } else { a.max(b) })
}

fn moments(c: &MomentsConfig, seed: u64, parallel: bool) -> Result<SuiteOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // a random orthonormal pair per dimension; the second is unused for d = 1
    let frames: Vec<(usize, DMatrix<f64>)> = c.modes.iter().map(|&d| (d, random_orthogonal(d, &mut rng))).collect();
    let per_dim = grid_map(parallel, &frames, |(d, frame)| {
        let d = *d;
        let basis = enumerate_basis(d, c.cap)?;
        let xi = column(frame, 0);
        let mut single = Vec::new();
        for n in 0..=c.max_order {
            single.push((n, moment(&basis, &xi, n)?, gaussian_moment(1.0, n)));
        }
        let mut mixed = Vec::new();
        if d >= 2 {
            let eta = column(frame, 1);
            for m in 0..=c.max_order {
                for n in 0..=c.max_order - m {
                    let predicted = gaussian_moment(1.0, m) * gaussian_moment(1.0, n);
                    mixed.push((m, n, mixed_moment(&basis, &xi, m, &eta, n)?, predicted));
                }
            }
        }
        Ok((d, single, mixed))
    })?;

    let mut out = SuiteOutput::default();
    let mut single_rows = Vec::new();
    let mut mixed_rows = Vec::new();
    for (d, single, mixed) in &per_dim {
        let r = max(single.iter().map(|(_, m, p)| (m - p).abs()));
        out.checks.push(Check::at_most(format!("moments_d{d}"), r, c.tol));
        for (n, m, p) in single {
            single_rows.push(vec![d.to_string(), n.to_string(), fmt(*m), fmt(*p), fmt((m - p).abs())]);
        }
        if !mixed.is_empty() {
            let r = max(mixed.iter().map(|(_, _, m, p)| (m - p).abs()));
            out.checks.push(Check::at_most(format!("factorization_d{d}"), r, c.tol));
        }
        for (m, n, v, p) in mixed {
            mixed_rows.push(vec![
                d.to_string(),
                m.to_string(),
                n.to_string(),
                fmt(*v),
                fmt(*p),
                fmt((v - p).abs()),
            ]);
        }
    }
    out.tables.push(Table::from_rows(
        "moments",
        &["d", "n", "measured", "predicted", "abs_residual"],
        &single_rows,
    )?);
    out.tables.push(Table::from_rows(
        "mixed_moments",
        &["d", "m", "n", "measured", "predicted", "abs_residual"],
        &mixed_rows,
    )?);
    Ok(out)
}

fn cohomology(c: &CohomologyConfig, seed: u64) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut record = |name: &str, dim: usize, z: usize, b: usize, h: usize| {
        rows.push(vec![name.into(), dim.to_string(), z.to_string(), b.to_string(), h.to_string()]);
    };

    let z = h1(&OrthogonalRep::trivial(1, 1), &GroupPresentation::free(1))?;
    record("Z_trivial", 1, z.dim_z1, z.dim_b1, z.dim_h1);
    out.checks.push(Check::equal("h1_integers_trivial", z.dim_h1, 1));

    let perm = |p: &[usize]| DMatrix::from_fn(3, 3, |r, col| if p[col] == r { 1.0 } else { 0.0 });
    let quarter = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let (s3, s3_gens) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![0, 2, 1]])?;
    let finite = [
        ("Z2_sign", GroupPresentation::cyclic(2), FiniteGroup::cyclic(2), vec![1], vec![DMatrix::from_element(1, 1, -1.0)]),
        ("Z4_rotation", GroupPresentation::cyclic(4), FiniteGroup::cyclic(4), vec![1], vec![quarter]),
        ("S3_permutation", GroupPresentation::symmetric3(), s3, s3_gens, vec![perm(&[1, 0, 2]), perm(&[0, 2, 1])]),
    ];
    for (name, pres, grp, gens, mats) in finite {
        let all = grp.element_matrices(&gens, &mats)?;
        let brute_z1 = finite_group_z1_dimension(&grp, &all)?;
        let dim = mats[0].nrows();
        let pi = OrthogonalRep::new(dim, mats)?;
        // B¹ ≅ ℋ / ℋ^π
        let brute_b1 = dim - invariant_vectors(&pi).ncols();
        let r = h1(&pi, &pres)?;
        record(name, dim, r.dim_z1, r.dim_b1, r.dim_h1);
        out.checks.push(Check::equal(format!("h1_{name}"), r.dim_h1, 0));
        out.checks.push(Check::equal(format!("brute_force_h1_{name}"), brute_z1 - brute_b1.min(brute_z1), 0));
        out.checks.push(Check::equal(format!("z1_matches_brute_force_{name}"), r.dim_z1, brute_z1));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free2 = GroupPresentation::free(2);
    for &d in &c.free_dims {
        let pi = OrthogonalRep::new(d, vec![random_orthogonal(d, &mut rng), random_orthogonal(d, &mut rng)])?;
        let r = h1(&pi, &free2)?;
        let name = format!("F2_random_d{d}");
        record(&name, d, r.dim_z1, r.dim_b1, r.dim_h1);
        out.checks.push(Check::equal(format!("z1_{name}"), r.dim_z1, 2 * d));
    }

    // planted coboundary on a random representation without invariant vectors
    let d = 3;
    let pi = Arc::new(OrthogonalRep::new(d, vec![random_orthogonal(d, &mut rng), random_orthogonal(d, &mut rng)])?);
    let eta = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
    let b = RepCocycle::coboundary(pi.clone(), &eta)?;
    let fit = coboundary_fit_default(&b)?;
    let recovered = (DVector::from_column_slice(&fit.eta) - &eta).norm();
    out.checks.push(Check::at_most("coboundary_fit_residual", fit.max_residual(), c.fit_tol));
    out.checks.push(Check::at_most("coboundary_fit_recovers_eta", recovered, c.fit_tol));

    let mut growth_rows = Vec::new();
    let bounded = growth_probe(&b, c.growth_radius)?;
    let bound = 2.0 * eta.norm();
    let excess = max(bounded.iter().map(|&(_, m)| (m - bound).max(0.0)));
    out.checks.push(Check::at_most("coboundary_growth_bounded", excess, 1e-12));
    for (r, m) in &bounded {
        growth_rows.push(vec!["coboundary".into(), r.to_string(), fmt(*m)]);
    }
    // b(a) = δ_e, b(b) = 0 on the regular representation of F₂
    let (reg, words) = regular_rep_ball(&free2, c.growth_radius)?;
    let mut delta = DVector::zeros(reg.dim());
    delta[words.iter().position(Word::is_empty).expect("ball contains e")] = 1.0;
    let reg = Arc::new(reg);
    let b = RepCocycle::new(reg.clone(), vec![delta, DVector::zeros(reg.dim())])?;
    for (r, m) in growth_probe(&b, c.growth_radius)? {
        growth_rows.push(vec!["regular_delta".into(), r.to_string(), fmt(m)]);
    }

    if let Some(path) = &c.representation {
        let (pres, pi) = load_representation(path)?;
        let check = rep_check(&pi, &pres, 1e-10)?;
        out.checks.push(Check::at_most(
            "file_representation_relators",
            max(check.orthogonality.iter().chain(&check.relators).copied()),
            check.tol,
        ));
        let r = h1(&pi, &pres)?;
        record("file", pi.dim(), r.dim_z1, r.dim_b1, r.dim_h1);
    }

    out.tables.push(Table::from_rows("dimensions", &["case", "dim", "dimZ1", "dimB1", "dimH1"], &rows)?);
    out.tables.push(Table::from_rows("growth", &["cocycle", "radius", "max_norm"], &growth_rows)?);
    Ok(out)
}

fn ps_trace(c: &PsTraceConfig, parallel: bool) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let values = grid_map(parallel, &c.norms, |&norm| ps_vacuum_expectation(norm, c.cap))?;
    let mut report = DeformationReport::new();
    for (&norm, (v, cap)) in c.norms.iter().zip(&values) {
        report.push(format!("norm={norm};cap={cap}"), *v, Complex64::new((-norm * norm / 2.0).exp(), 0.0));
    }
    out.checks.push(Check::at_most("ps_trace", report.max_abs_residual, c.tol));
    out.tables.push(Table::from_report("ps_trace", &report)?);

    // ℤ acting trivially on ℝ with b(a) = 1
    let pi = Arc::new(OrthogonalRep::trivial(1, 1));
    let b = RepCocycle::new(pi.clone(), vec![DVector::from_element(1, 1.0)])?;
    let a = Word::generator(0);
    let pairs = [(a.clone(), a.clone()), (a.clone(), a.inverse().pow(2)), (a.pow(2), a.inverse())];
    let caps: Vec<(usize, f64)> = c.identity_caps.iter().copied().zip(c.identity_tols.iter().copied()).collect();
    let residuals = grid_map(parallel, &caps, |&(cap, _)| {
        let ctx = GaussianActionCtx::new(pi.clone(), GroupPresentation::free(1), cap, FieldConvention::default())?;
        pairs
            .iter()
            .map(|(w1, w2)| cocycle_identity_residual(&ctx, &b, w1, w2))
            .collect::<Result<Vec<f64>>>()
    })?;
    let mut rows = Vec::new();
    for (&(cap, tol), rs) in caps.iter().zip(&residuals) {
        out.checks.push(Check::at_most(format!("cocycle_identity_D{cap}"), max(rs.iter().copied()), tol));
        for ((w1, w2), r) in pairs.iter().zip(rs) {
            rows.push(vec![cap.to_string(), w1.to_string(), w2.to_string(), fmt(*r)]);
        }
    }
    out.tables.push(Table::from_rows("cocycle_identity", &["cap", "w1", "w2", "residual"], &rows)?);
    Ok(out)
}

fn deformation_decay(c: &DeformationConfig, parallel: bool) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let grid: Vec<(f64, f64)> = c.norms.iter().flat_map(|&n| c.t_grid.iter().map(move |&t| (n, t))).collect();
    let values = grid_map(parallel, &grid, |&(norm, t)| deformation_correlation_reduced(norm, t, c.cap))?;
    let predicted = |norm: f64, t: f64| Complex64::new((-(1.0 - t.cos()) * norm * norm).exp(), 0.0);
    let mut report = DeformationReport::new();
    for (&(norm, t), (v, _)) in grid.iter().zip(&values) {
        report.push(format!("norm={norm};t={t}"), *v, predicted(norm, t));
    }
    out.checks.push(Check::at_most("decay", report.max_abs_residual, c.tol));
    out.tables.push(Table::from_report("decay", &report)?);

    let (lo, hi) = (c.compare_caps[0], c.compare_caps[1]);
    let pairs = grid_map(parallel, &grid, |&(norm, t)| {
        let p = predicted(norm, t);
        let r_lo = (deformation_correlation_unchecked(norm, t, lo)? - p).norm();
        let r_hi = (deformation_correlation_unchecked(norm, t, hi)? - p).norm();
        Ok((r_lo, r_hi))
    })?;
    // points already converged at the lower cap may swap by an ulp or two
    let worst = max(pairs.iter().map(|&(a, b)| (b - a).max(0.0)));
    out.checks.push(Check::at_most(format!("monotone_D{lo}_D{hi}"), worst, ROUNDING_FLOOR));
    let rows: Vec<Vec<String>> = grid
        .iter()
        .zip(&pairs)
        .map(|(&(n, t), &(a, b))| vec![fmt(n), fmt(t), fmt(a), fmt(b)])
        .collect();
    let (h_lo, h_hi) = (format!("residual_D{lo}"), format!("residual_D{hi}"));
    out.tables.push(Table::from_rows("truncation", &["norm", "t", &h_lo, &h_hi], &rows)?);
    Ok(out)
}

fn semigroup(c: &SemigroupConfig, seed: u64) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let basis = enumerate_basis(c.modes, c.cap)?;

    let mut law: f64 = 0.0;
    for &t in &c.t_grid {
        let pt = ou_semigroup(&basis, t)?;
        for &s in &c.t_grid {
            let lhs = pt.mul(&ou_semigroup(&basis, s)?)?;
            law = law.max(lhs.sub(&ou_semigroup(&basis, t + s)?)?.hs_norm());
        }
    }
    out.checks.push(Check::at_most("semigroup_law", law, c.law_tol));

    let mut multiplier: f64 = 0.0;
    for &alpha in &c.alpha_grid {
        let z = ou_resolvent(&basis, alpha)?;
        for i in 0..basis.len() {
            let k = basis.degree(i) as f64;
            multiplier = multiplier.max((z.matrix()[(i, i)].re - (alpha / (alpha + k)).sqrt()).abs());
        }
        let off = z.sub(&crate::wick::FockOperator::degree_multiplier(&basis, |k| {
            Complex64::new((alpha / (alpha + k as f64)).sqrt(), 0.0)
        }))?;
        multiplier = multiplier.max(off.hs_norm());
    }
    out.checks.push(Check::at_most("resolvent_multiplier", multiplier, c.law_tol));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = random_orthogonal(c.modes, &mut rng);
    let u = second_quantize_real(&basis, &random_orthogonal(c.modes, &mut rng))?;
    let mut commutation: f64 = 0.0;
    for &t in &c.t_grid {
        commutation = commutation.max(ou_semigroup(&basis, t)?.commutator(&u)?.hs_norm());
    }
    for &alpha in &c.alpha_grid {
        commutation = commutation.max(ou_resolvent(&basis, alpha)?.commutator(&u)?.hs_norm());
    }
    out.checks.push(Check::at_most("commutes_with_second_quantization", commutation, c.law_tol));

    let mut rows = Vec::new();
    let mut formula: f64 = 0.0;
    for k in 1..=c.modes.min(4).min(c.cap) {
        let xis: Vec<ModeVector> = (0..k).map(|j| column(&frame, j)).collect();
        for &t in &c.t_grid {
            let r = ou_closed_formula_residual(&basis, &xis, t)?;
            formula = formula.max(r);
            rows.push(vec![k.to_string(), fmt(t), fmt(r)]);
        }
    }
    out.checks.push(Check::at_most("closed_formula", formula, c.formula_tol));
    out.tables.push(Table::from_rows("closed_formula", &["k", "t", "residual"], &rows)?);
    Ok(out)
}

fn smooth_identity(c: &SmoothingConfig, seed: u64, parallel: bool) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for i in 0..c.count {
        let n = 2 + i % (c.max_dim - 1);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let g = &a - a.transpose();
        for &t in &c.t_grid {
            cases.push((i, g.clone(), t));
        }
    }
    let results = grid_map(parallel, &cases, |(_, g, t)| smooth_by_kernel(g, *t))?;
    let kernel = max(results.iter().map(|r| r.kernel_residual));
    let derivation = max(results.iter().map(|r| r.derivation_residual));
    out.checks.push(Check::at_most("kernel_identity", kernel, c.tol));
    out.checks.push(Check::at_most("derivation_identity", derivation, c.tol));
    let rows: Vec<Vec<String>> = cases
        .iter()
        .zip(&results)
        .map(|((i, g, t), r)| {
            vec![
                i.to_string(),
                g.nrows().to_string(),
                fmt(*t),
                fmt(r.kernel_residual),
                fmt(r.derivation_residual),
            ]
        })
        .collect();
    out.tables.push(Table::from_rows(
        "smoothing",
        &["case", "n", "t", "kernel_residual", "derivation_residual"],
        &rows,
    )?);
    Ok(out)
}

fn malleable_torus(c: &MalleabilityConfig, seed: u64, parallel: bool) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = Arc::new(OrthogonalRep::new(c.modes, vec![random_orthogonal(c.modes, &mut rng)])?);
    let base = GaussianActionCtx::new(pi, GroupPresentation::free(1), 1, FieldConvention::default())?;
    let dctx = DoubledCtx::new(base, c.cap)?;
    let reports = grid_map(parallel, &c.t_grid, |&t| malleability_axioms(&dctx, t))?;
    out.checks.push(Check::at_most("rotation_group_law", max(reports.iter().map(|r| r.group_law)), c.tol));
    out.checks.push(Check::at_most("rotation_symmetry", max(reports.iter().map(|r| r.rho_matrix)), c.tol));
    out.checks.push(Check::at_most(
        "rotation_symmetry_lifted",
        max(reports.iter().map(|r| r.rho_lifted)),
        c.tol,
    ));
    out.checks.push(Check::at_most(
        "rotation_orthogonality",
        max(reports.iter().map(|r| r.orthogonality)),
        0.0,
    ));
    let mut rows: Vec<Vec<String>> = c
        .t_grid
        .iter()
        .zip(&reports)
        .map(|(&t, r)| {
            vec![
                "rotation".into(),
                fmt(t),
                fmt(r.group_law.max(r.rho_matrix).max(r.rho_lifted)),
                fmt(r.orthogonality),
            ]
        })
        .collect();

    let grid = TorusGrid::new(c.grid)?;
    let torus = grid_map(parallel, &c.t_grid, |&t| Ok(torus_deformation(grid, t)))?;
    let pointwise = max(torus.iter().map(|r| r.beta_involution.max(r.alpha_beta).max(r.alpha_one_u_is_v)));
    let means = max(torus.iter().map(|r| r.alpha_one_orthogonality.max(r.haar_mean)));
    out.checks.push(Check::at_most("torus_pointwise", pointwise, c.tol));
    out.checks.push(Check::at_most("torus_fourier_means", means, c.tol));
    for r in &torus {
        rows.push(vec![
            "torus".into(),
            fmt(r.t),
            fmt(r.beta_involution.max(r.alpha_beta).max(r.alpha_one_u_is_v)),
            fmt(r.alpha_one_orthogonality.max(r.haar_mean)),
        ]);
    }
    out.tables.push(Table::from_rows("axioms", &["model", "t", "pointwise_residual", "orthogonality_residual"], &rows)?);
    Ok(out)
}

fn random_mode_vector(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> ModeVector {
    let v: Vec<f64> = (0..d).map(|_| rng.random_range(-scale..scale)).collect();
    ModeVector::real(&v)
}

fn bimodule(c: &BimoduleConfig, seed: u64) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = c.modes;
    let space = PrimedFock::new(d, c.cap)?;
    let beta = random_orthogonal(d, &mut rng);
    let m = Bimodule::new(space.clone(), beta, FieldConvention::default())?;

    // random vector supported on degrees ≤ D′ − 2
    let basis = space.basis().clone();
    let components: Vec<FockVector> = (0..d)
        .map(|_| {
            let coeffs = (0..basis.len())
                .map(|i| {
                    let x = rng.random_range(-1.0..1.0);
                    Complex64::new(if basis.degree(i) + 2 <= c.cap { x } else { 0.0 }, 0.0)
                })
                .collect();
            FockVector::from_coeffs(&basis, coeffs)
        })
        .collect::<Result<_>>()?;
    let v = BimoduleVector::from_components(&space, components)?;
    let mut commutation: f64 = 0.0;
    for _ in 0..8 {
        let xi = random_mode_vector(&mut rng, d, 1.0);
        let eta = random_mode_vector(&mut rng, d, 1.0);
        let lr = m.left(&xi, &m.right(&eta, &v)?)?;
        let rl = m.right(&eta, &m.left(&xi, &v)?)?;
        commutation = commutation.max(lr.sub(&rl)?.norm());
    }
    out.checks.push(Check::at_most("left_right_commute", commutation, c.commutation_tol));

    let mut isometry: f64 = 0.0;
    for _ in 0..c.isometry_samples {
        let xi = random_mode_vector(&mut rng, d, 2.0);
        isometry = isometry.max((m.delta(std::slice::from_ref(&xi))?.norm() - xi.norm()).abs());
    }
    out.checks.push(Check::at_most("delta_isometry", isometry, c.isometry_tol));

    let units: Vec<ModeVector> = (0..d).map(|i| ModeVector::unit(d, i)).collect();
    let unit_words: Vec<Vec<ModeVector>> = vec![
        vec![units[0].clone()],
        vec![units[0].clone(), units[d - 1].clone()],
        vec![units[d - 1].clone(), units[0].clone(), units[d - 1].clone()],
    ];
    let mut perm: Vec<usize> = (0..d).collect();
    let mut permutation: f64 = 0.0;
    for _ in 0..4 {
        perm.shuffle(&mut rng);
        let t = DMatrix::from_fn(d, d, |r, col| if perm[col] == r { 1.0 } else { 0.0 });
        for w in &unit_words {
            permutation = permutation.max(covariance_check(&space, &t, w)?);
        }
    }
    out.checks.push(Check::at_most("covariance_permutation", permutation, 0.0));
    let mut rot: f64 = 0.0;
    for len in 1..=3.min(c.cap - 1) {
        let t = random_orthogonal(d, &mut rng);
        let w: Vec<ModeVector> = (0..len).map(|_| random_mode_vector(&mut rng, d, 1.0)).collect();
        rot = rot.max(covariance_check(&space, &t, &w)?);
    }
    out.checks.push(Check::at_most("covariance_rotation", rot, c.covariance_tol));

    let mut leibniz: f64 = 0.0;
    for i in 0..=c.leibniz_degree {
        for j in 0..=c.leibniz_degree {
            leibniz = leibniz.max(leibniz_residual(&PolyFunction::monomial(i), &PolyFunction::monomial(j)));
        }
    }
    out.checks.push(Check::at_most("difference_quotient_leibniz", leibniz, 0.0));

    let mut rows = Vec::new();
    let mut worst_z: f64 = 0.0;
    for (k, coeffs) in c.polynomials.iter().enumerate() {
        let f = PolyFunction::new(coeffs.clone());
        let quad = dirichlet_form(&f)?;
        let mc = dirichlet_form_monte_carlo(&f, c.mc_samples, seed.wrapping_add(k as u64));
        let diff = (mc.mean - quad).abs();
        // a zero standard error means the integrand is constant
        let z = if mc.std_err > 0.0 {
            diff / mc.std_err
        } else if diff <= ROUNDING_FLOOR * quad.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        };
        worst_z = worst_z.max(z);
        rows.push(vec![k.to_string(), fmt(quad), fmt(mc.mean), fmt(mc.std_err), fmt(z)]);
    }
    out.checks.push(Check::at_most("dirichlet_quadrature_vs_monte_carlo_sigma", worst_z, 3.0));
    out.tables.push(Table::from_rows(
        "dirichlet",
        &["polynomial", "quadrature", "mc_mean", "mc_std_err", "sigmas"],
        &rows,
    )?);
    Ok(out)
}

fn invariant(c: &InvariantConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let pi = Arc::new(OrthogonalRep::new(2, vec![rotation(c.angle)])?);
    let ctx = GaussianActionCtx::new(pi, GroupPresentation::free(1), c.cap, FieldConvention::default())?;
    // the identity tensor Σ eᵢ ⊗ eᵢ is invariant under every π ⊗ π
    let r = invariant_unitary(&ctx, &DMatrix::identity(2, 2), c.lambda)?;
    out.checks.push(Check::at_most("invariance", r.invariance_residual, c.tol));
    out.checks.push(Check::at_most("nontrivial_trace", r.trace.norm(), 1.0 - c.nontriviality));
    out.checks.push(Check::at_most("unitarity", r.u.unitarity_residual(), c.tol));
    out.tables.push(Table::from_rows(
        "invariant_unitary",
        &["angle", "cap", "lambda", "trace_re", "trace_im", "invariance_residual"],
        &[vec![
            fmt(c.angle),
            c.cap.to_string(),
            fmt(c.lambda),
            fmt(r.trace.re),
            fmt(r.trace.im),
            fmt(r.invariance_residual),
        ]],
    )?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn run(json: &str) -> SuiteOutput {
        let cfg = ExperimentConfig::from_json(json).unwrap();
        run_suite(&cfg, false).unwrap()
    }

    #[test]
    fn small_moments_run() {
        let out = run(r#"{"suite": "moments", "modes": [1, 2], "cap": 3, "max_order": 4}"#);
        assert!(out.passed(), "{:?}", out.checks);
        assert_eq!(out.checks.len(), 3);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let cfg = ExperimentConfig::from_json(r#"{"suite": "deformation-decay", "norms": [0.5, 1.0]}"#).unwrap();
        let a = run_suite(&cfg, false).unwrap();
        let b = run_suite(&cfg, true).unwrap();
        assert_eq!(a.checks, b.checks);
        for (x, y) in a.tables.iter().zip(&b.tables) {
            assert_eq!(x.csv, y.csv);
        }
    }

    #[test]
    fn invariant_suite_passes() {
        let out = run(r#"{"suite": "invariant-unitary", "cap": 6}"#);
        assert!(out.passed(), "{:?}", out.checks);
    }

    #[test]
    fn low_budget_is_an_error() {
        let cfg = ExperimentConfig::from_json(r#"{"suite": "ps-trace", "cap": 3}"#).unwrap();
        assert!(matches!(run_suite(&cfg, false), Err(Error::TruncationBudget { .. })));
    }
}
