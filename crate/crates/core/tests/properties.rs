mod common;

use latglue::discriminant::{discr, isotropic_elements, support, GluingKernel};
use latglue::exact::{hermite_normal_form, integer_kernel, smith_normal_form, IntegerMatrix};
use latglue::extensions::{
    eigenlattices, eigenlattices_split_mod_p, is_quasi_primitive, overlattice, random_involution, roots,
};
use latglue::lattice::{parse_lattice_expr, Lattice};
use latglue::totality::{
    birational_bound_holds, case_analysis, critical_point_count, cusp_count_general, degree4_case_analysis,
    sqrt_bound_holds, Verdict,
};
use latglue::wronskian::{
    critical_polynomial, mobius_realifiable, real_root_count, wronskian, GaussianRational, MobiusTransform, Poly,
    RationalMap,
};
use latglue::Limits;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntegerMatrix {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k = rng.gen_range(-1..=1);
        for row in m.iter_mut() {
            row[i] += k * row[j];
        }
    }
    IntegerMatrix::from_i64(&m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn discriminant_order_is_determinant(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = common::random_even_lattice(&mut rng, n);
        let d = discr(&l).unwrap();
        prop_assert_eq!(d.form.order(), l.determinant().abs());
        let product: BigInt = d.form.invariant_factors().iter().product();
        prop_assert_eq!(product, l.determinant().abs());
    }

    #[test]
    fn smith_form_identities(seed in any::<u64>(), r in 1usize..=5, c in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_int_matrix(&mut rng, r, c, 8);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal.clone());
        prop_assert!(s.left.determinant().unwrap().abs().is_one());
        prop_assert!(s.right.determinant().unwrap().abs().is_one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn kernel_and_hermite(seed in any::<u64>(), r in 1usize..=4, c in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_int_matrix(&mut rng, r, c, 5);
        let k = integer_kernel(&m);
        prop_assert_eq!(k.rows() + smith_normal_form(&m).rank(), c);
        prop_assert!(m.mul(&k.transpose()).is_zero());
        let h = hermite_normal_form(&m);
        prop_assert_eq!(hermite_normal_form(&h), h.clone());
        // same row lattice after a unimodular change of generators
        let u = random_unimodular(&mut rng, r);
        prop_assert_eq!(hermite_normal_form(&u.mul(&m)), h);
    }

    #[test]
    fn roots_invariant_under_change_of_basis(seed in any::<u64>(), which in 0usize..4) {
        let name = ["A2", "A3", "D4", "E6"][which];
        let l = parse_lattice_expr(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_unimodular(&mut rng, l.rank());
        let moved = Lattice::new(p.transpose().mul(l.gram()).mul(&p), name).unwrap();
        let limits = Limits::default();
        prop_assert_eq!(roots(&moved, &limits).unwrap().len(), roots(&l, &limits).unwrap().len());
    }

    #[test]
    fn involution_eigenlattices_split(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inv = random_involution(&mut rng, 8);
        let (plus, minus) = eigenlattices(&inv).unwrap();
        prop_assert_eq!(plus.rank() + minus.rank(), inv.lattice().rank());
        prop_assert!(plus.is_primitive() && minus.is_primitive());
        prop_assert!(eigenlattices_split_mod_p(&inv, 3).unwrap());
    }

    #[test]
    fn sturm_count_has_conjugate_pair_parity(seed in any::<u64>(), d in 1usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_real_poly(&mut rng, d);
        let n = real_root_count(&p).unwrap();
        let sf = p.square_free_part().degree().unwrap();
        prop_assert!(n <= sf && (sf - n) % 2 == 0);
    }

    #[test]
    fn critical_points_ignore_target_mobius(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_gaussian_map(&mut rng, 4);
        let phi = MobiusTransform::new(
            GaussianRational::from_ints(rng.gen_range(-3..=3), 1),
            GaussianRational::from_ints(1, rng.gen_range(-2..=2)),
            GaussianRational::from_ints(rng.gen_range(-2..=2), 0),
            GaussianRational::from_ints(2, 1),
        );
        if let Ok(phi) = phi {
            let g = phi.apply(&f).unwrap();
            prop_assert_eq!(critical_polynomial(&g).unwrap(), critical_polynomial(&f).unwrap());
        }
    }

    #[test]
    fn realifying_transformation_conjugates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_gaussian_map(&mut rng, 3);
        if let Some(phi) = mobius_realifiable(&f).unwrap() {
            prop_assert_eq!(phi.apply(&f).unwrap(), f.conj());
            prop_assert!(phi.conj().compose(&phi).is_identity());
        }
    }

    #[test]
    fn wronskian_is_multilinear(a in proptest::collection::vec(-3i64..=3, 1..4),
                                b in proptest::collection::vec(-3i64..=3, 1..4),
                                c in proptest::collection::vec(-3i64..=3, 1..4),
                                k in -3i64..=3) {
        let (a, b, c) = (Poly::from_i64(&a), Poly::from_i64(&b), Poly::from_i64(&c));
        let kb = b.scale(&num_rational::BigRational::from_integer(k.into()));
        let lhs = wronskian(&[a.clone(), c.add(&kb)]).unwrap();
        let rhs = wronskian(&[a.clone(), c]).unwrap().add(&wronskian(&[a, kb]).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn overlattice_law_sampled_over_8a2() {
    let limits = Limits::default();
    let base = parse_lattice_expr("8A2").unwrap();
    let form = discr(&base).unwrap().form;
    let iso: Vec<_> = isotropic_elements(&form, &limits).unwrap().into_iter().filter(|x| !x.is_zero()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tested = 0;
    while tested < 40 {
        let n = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..n).map(|_| iso[rng.gen_range(0..iso.len())].clone()).collect();
        let Ok(k) = GluingKernel::new(form.clone(), gens) else { continue };
        let ext = overlattice(&base, &k, &limits).unwrap();
        assert!(ext.determinant_law);
        assert_eq!(ext.result.determinant().abs() * BigInt::from(k.order() * k.order()), base.determinant().abs());
        assert!(ext.result.is_even());
        assert_ne!(ext.discriminant_matches, Some(false));
        tested += 1;
    }
}

#[test]
fn quasi_primitive_iff_no_support_three() {
    let limits = Limits::default();
    let base = parse_lattice_expr("8A2").unwrap();
    let form = discr(&base).unwrap().form;
    let by_support = |s: usize| {
        let mut c = vec![0i64; 8];
        for (i, x) in c.iter_mut().enumerate().take(s) {
            *x = if i % 2 == 0 { 1 } else { 2 };
        }
        form.element(&c).unwrap()
    };
    for s in [3usize, 6] {
        let k = GluingKernel::new(form.clone(), vec![by_support(s)]).unwrap();
        let ext = overlattice(&base, &k, &limits).unwrap();
        let qp = is_quasi_primitive(&base, &ext, &limits).unwrap();
        let has_support_three = k.elements().iter().any(|e| support(e).len() == 3);
        assert_eq!(qp.quasi_primitive, !has_support_three, "support {s}");
    }
}

#[test]
fn critical_point_count_matches_cusp_count() {
    for g in 0..=50 {
        for d in 1..=50 {
            assert_eq!(critical_point_count(g, d), cusp_count_general(g, d));
        }
    }
}

#[test]
fn bidegree_two_is_always_excluded() {
    for g in 0..1000 {
        let v = degree4_case_analysis(g);
        let b2 = v.iter().find(|c| c.bidegree == (2, 2)).unwrap();
        assert_eq!(b2.verdict, Verdict::ExcludedByCount, "g = {g}");
    }
}

#[test]
fn sqrt_bound_excludes_birational_case() {
    for d in 1..=20 {
        for g in 0..=100 {
            if sqrt_bound_holds(g, d) {
                assert!(!birational_bound_holds(g, critical_point_count(g, d), d), "g = {g}, d = {d}");
            }
        }
    }
}

#[test]
fn case_analysis_covers_every_divisor() {
    for d in 1..=12u64 {
        for g in 0..=5 {
            let v = case_analysis(d, g).unwrap();
            let mut bidegrees: Vec<u64> = v.iter().map(|c| c.bidegree.0).collect();
            bidegrees.dedup();
            let divisors: Vec<u64> = (1..=d).filter(|x| d % x == 0).collect();
            assert_eq!(bidegrees, divisors);
        }
    }
}

#[test]
fn realifiable_iff_diagonal_image() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let f = common::random_gaussian_map(&mut rng, 4);
        let phi = mobius_realifiable(&f).unwrap();
        let delta = latglue::wronskian::diagonal_image_bidegree(&f).unwrap().delta;
        assert_eq!(phi.is_some(), delta == 1, "{f}");
        assert_eq!(f.degree() % delta, 0);
    }
}

#[test]
fn real_maps_have_full_critical_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 1..=6usize {
        for _ in 0..30 {
            let p = Poly::from_real(&common::random_real_poly(&mut rng, d));
            let q = Poly::from_real(&common::random_real_poly(&mut rng, d - 1));
            let f = RationalMap::new(p, q).unwrap();
            if f.is_constant() {
                continue;
            }
            let crit = critical_polynomial(&f).unwrap();
            assert_eq!(crit.degree(), Some(critical_point_count(0, f.degree() as u64) as usize), "{f}");
        }
    }
}
