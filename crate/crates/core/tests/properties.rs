use std::sync::Arc;

use fockcycle::bimodule_derivation::{difference_quotient, leibniz_residual, ou_poly, hermite, PolyFunction};
use fockcycle::cohomology::{growth_probe, RepCocycle};
use fockcycle::fock::{enumerate_basis, ModeVector};
use fockcycle::gaussian_dynamics::ou_semigroup;
use fockcycle::group_rep::{evaluate, random_orthogonal, reduce, rotation, GroupPresentation, OrthogonalRep, Word};
use fockcycle::wick::{field, gaussian_moment, moment, second_quantize_real, FieldConvention};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letters(gens: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=gens, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }), 0..max_len)
}

fn word(gens: i32, max_len: usize) -> impl Strategy<Value = Word> {
    letters(gens, max_len).prop_map(|l| Word::new(l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn words_form_a_group(a in word(3, 8), b in word(3, 8), c in word(3, 8)) {
        prop_assert!(a.mul(&a.inverse()).is_empty());
        prop_assert_eq!(&a.inverse().inverse(), &a);
        prop_assert_eq!(reduce(&a.inverse()), reduce(&a).inverse());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(reduce(&a.concat(&b)), a.mul(&b));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in word(2, 6), b in word(2, 6), s in 0.0f64..6.0, t in 0.0f64..6.0) {
        let pi = OrthogonalRep::new(2, vec![rotation(s), rotation(t)]).unwrap();
        let lhs = evaluate(&pi, &a.mul(&b)).unwrap();
        let rhs = evaluate(&pi, &a).unwrap() * evaluate(&pi, &b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn fields_are_self_adjoint(x in prop::collection::vec(-2.0f64..2.0, 2)) {
        let basis = enumerate_basis(2, 4).unwrap();
        let s = field(&basis, &ModeVector::real(&x), FieldConvention::default()).unwrap();
        prop_assert!(s.self_adjointness_residual() <= 1e-12);
    }

    #[test]
    fn moments_scale_with_the_norm(x in prop::collection::vec(-1.5f64..1.5, 2), n in 0usize..=6) {
        let basis = enumerate_basis(2, 4).unwrap();
        let xi = ModeVector::real(&x);
        let m = moment(&basis, &xi, n).unwrap();
        let expected = gaussian_moment(xi.norm(), n);
        prop_assert!((m - expected).abs() <= 1e-10 * expected.abs().max(1.0));
    }

    #[test]
    fn second_quantization_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = enumerate_basis(3, 3).unwrap();
        let (a, b) = (random_orthogonal(3, &mut rng), random_orthogonal(3, &mut rng));
        let lhs = second_quantize_real(&basis, &(&a * &b)).unwrap();
        let rhs = second_quantize_real(&basis, &a).unwrap().mul(&second_quantize_real(&basis, &b).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().hs_norm() <= 1e-12);
        prop_assert!(lhs.unitarity_residual() <= 1e-12);
    }

    #[test]
    fn ou_semigroup_law(t in 0.0f64..3.0, s in 0.0f64..3.0) {
        let basis = enumerate_basis(2, 4).unwrap();
        let lhs = ou_semigroup(&basis, t).unwrap().mul(&ou_semigroup(&basis, s).unwrap()).unwrap();
        prop_assert!(lhs.sub(&ou_semigroup(&basis, t + s).unwrap()).unwrap().hs_norm() <= 1e-14);
    }

    #[test]
    fn difference_quotient_satisfies_leibniz(
        f in prop::collection::vec(-3i32..=3, 1..=9),
        g in prop::collection::vec(-3i32..=3, 1..=9),
    ) {
        // small integer coefficients keep every product exact
        let f = PolyFunction::new(f.into_iter().map(f64::from).collect());
        let g = PolyFunction::new(g.into_iter().map(f64::from).collect());
        prop_assert_eq!(leibniz_residual(&f, &g), 0.0);
    }

    #[test]
    fn difference_quotient_recovers_the_difference(c in prop::collection::vec(-2.0f64..2.0, 1..=7), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        prop_assume!((x - y).abs() > 1e-3);
        let f = PolyFunction::new(c);
        let q = difference_quotient(&f).eval(x, y);
        let expected = (f.eval(x) - f.eval(y)) / (x - y);
        prop_assert!((q - expected).abs() <= 1e-8 * expected.abs().max(1.0));
    }

    #[test]
    fn ou_acts_diagonally_on_hermite_polynomials(k in 0usize..=8, t in 0.0f64..2.0) {
        let h = hermite(k);
        let lhs = ou_poly(&h, t);
        let rhs = h.scale((-(k as f64) * t).exp());
        let diff = lhs.add(&rhs.scale(-1.0));
        prop_assert!(diff.coeffs().iter().all(|c| c.abs() <= 1e-10));
    }

    #[test]
    fn coboundaries_are_cocycles(x in prop::collection::vec(-2.0f64..2.0, 3)) {
        let perm = |p: [usize; 3]| nalgebra::DMatrix::from_fn(3, 3, |r, c| if p[c] == r { 1.0 } else { 0.0 });
        let pi = Arc::new(OrthogonalRep::new(3, vec![perm([1, 0, 2]), perm([0, 2, 1])]).unwrap());
        let b = RepCocycle::coboundary(pi, &DVector::from_vec(x)).unwrap();
        let residuals = b.relator_residuals(&GroupPresentation::symmetric3()).unwrap();
        prop_assert!(residuals.iter().all(|&r| r <= 1e-12));
    }

    #[test]
    fn cohomologous_cocycles_grow_alike(
        b0 in prop::collection::vec(-1.0f64..1.0, 4),
        eta in prop::collection::vec(-1.0f64..1.0, 2),
        s in 0.1f64..6.0,
        t in 0.1f64..6.0,
    ) {
        let pi = Arc::new(OrthogonalRep::new(2, vec![rotation(s), rotation(t)]).unwrap());
        let eta = DVector::from_vec(eta);
        let b = RepCocycle::from_stacked(pi.clone(), &b0).unwrap();
        let shifted = b.add(&RepCocycle::coboundary(pi, &eta).unwrap()).unwrap();
        let g1 = growth_probe(&b, 4).unwrap();
        let g2 = growth_probe(&shifted, 4).unwrap();
        for ((_, m1), (_, m2)) in g1.iter().zip(&g2) {
            prop_assert!((m1 - m2).abs() <= 2.0 * eta.norm() + 1e-12);
        }
    }
}
