//! Property tests for the structural invariants, driven by seeded random modules.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rhdim::algebra::{AlgebraPresentation, LocalAlgebra};
use rhdim::corpus::{random_module, standard_bounds};
use rhdim::exactlin::Matrix;
use rhdim::homalg::{biduality_map, dual, ext, ext_dims, horseshoe_syzygy, pushforward, Ext1Space};
use rhdim::invariants::{check_prop27, is_totally_reflexive, TrVerdict};
use rhdim::module::{free_plus_residue_shape, is_isomorphic, split_free_summands, syzygy, IsoBudget, Module};
use rhdim::reducing::{search, transform_cosyzygy, transform_syzygy, verify, Target};
use rhdim::resolution::{betti_numbers, minimal_free_cover, resolve};
use rhdim::{Scalar, F2, F3, Q};

fn plane() -> Arc<LocalAlgebra<F2>> {
    LocalAlgebra::square_zero(2).unwrap()
}

fn cubic() -> Arc<LocalAlgebra<F2>> {
    LocalAlgebra::truncated_polynomial(3).unwrap()
}

/// A handful of small rings over F2, chosen by index.
fn ring(i: usize) -> Arc<LocalAlgebra<F2>> {
    match i % 4 {
        0 => plane(),
        1 => cubic(),
        2 => LocalAlgebra::truncated_polynomial(2).unwrap(),
        _ => LocalAlgebra::build(&AlgebraPresentation::new(&["x", "y"], 3, &["x^2", "y^2"]).unwrap()).unwrap(),
    }
}

fn random_matrix<S: Scalar>(rows: usize, cols: usize, seed: u64) -> Matrix<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| S::random(&mut rng)).collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

fn linear_laws<S: Scalar>(m: &Matrix<S>) {
    let k = m.kernel_basis();
    assert_eq!(m.rank() + k.cols(), m.cols());
    assert!(m.mul(&k).unwrap().is_zero());
    let (r, piv) = m.rref();
    let (rr, piv2) = r.rref();
    assert_eq!(rr, r);
    assert_eq!(piv, piv2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity_and_rref(rows in 0usize..7, cols in 0usize..7, seed in any::<u64>()) {
        linear_laws(&random_matrix::<F3>(rows, cols, seed));
        linear_laws(&random_matrix::<F2>(rows, cols, seed));
        linear_laws(&random_matrix::<Q>(rows, cols, seed));
    }

    #[test]
    fn algebra_axioms(n in 1usize..4, nil in 2u32..4, rel in prop::sample::select(vec!["", "x^2", "x*y", "x^2 - y^2"])) {
        let names = ["x", "y", "z"];
        let rels: Vec<&str> = if rel.is_empty() || (n < 2 && rel.contains('y')) { vec![] } else { vec![rel] };
        let a = LocalAlgebra::<F3>::build(&AlgebraPresentation::new(&names[..n], nil, &rels).unwrap()).unwrap();
        prop_assert!(a.check_axioms());
        prop_assert!(a.max_ideal_power_vanishes(nil));
        if nil == 2 {
            prop_assert_eq!(a.embedding_dim(), n);
        }
    }

    #[test]
    fn modules_are_modules(r in 0usize..4, seed in any::<u64>()) {
        let a = ring(r);
        let m = random_module(&a, 3, 3, seed);
        prop_assert!(m.check_homomorphism().is_ok());
        prop_assert!(syzygy(&m, 1).unwrap().check_homomorphism().is_ok());
        prop_assert!(dual(&m).unwrap().module.check_homomorphism().is_ok());
    }

    #[test]
    fn free_summands_reassemble(r in 0usize..4, seed in any::<u64>(), extra in 0usize..3) {
        let a = ring(r);
        let m = Module::direct_sum(&a, &[random_module(&a, 2, 2, seed), Module::free(&a, extra)]);
        let s = split_free_summands(&m).unwrap();
        prop_assert!(s.free_rank >= extra);
        let back = Module::direct_sum(&a, &[Module::free(&a, s.free_rank), s.remainder.clone()]);
        prop_assert!(s.iso.is_isomorphism());
        prop_assert!(is_isomorphic(&m, &back, IsoBudget::default()).unwrap().is_yes());
    }

    #[test]
    fn residue_modules_are_powers_of_k(seed in any::<u64>()) {
        let a = plane();
        let m = random_module(&a, 3, 3, seed);
        let top = syzygy(&m, 1).unwrap();
        if top.is_killed_by_max_ideal() {
            prop_assert!(is_isomorphic(&top, &Module::simple(&a).power(top.dim()), IsoBudget::default()).unwrap().is_yes());
        }
    }

    #[test]
    fn resolutions_are_minimal(r in 0usize..4, seed in any::<u64>()) {
        let a = ring(r);
        let m = random_module(&a, 3, 3, seed);
        let res = resolve(&m, 4).unwrap();
        for i in 1..=4 {
            prop_assert!(res.differential_r(i).is_minimal());
        }
        for i in 0..4 {
            let b = res.betti()[i];
            prop_assert_eq!(res.syzygy(i + 1).dim(), b * a.dim() - res.syzygy(i).dim());
            prop_assert_eq!(b, res.syzygy(i).minimal_generator_count());
        }
        prop_assert_eq!(betti_numbers(&m, 4).unwrap(), res.betti());
    }

    #[test]
    fn betti_additive(r in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = ring(r);
        let (m, n) = (random_module(&a, 2, 2, s1), random_module(&a, 2, 2, s2));
        let sum = Module::direct_sum(&a, &[m.clone(), n.clone()]);
        let (bm, bn, bs) = (betti_numbers(&m, 5).unwrap(), betti_numbers(&n, 5).unwrap(), betti_numbers(&sum, 5).unwrap());
        for i in 0..=5 {
            prop_assert_eq!(bs[i], bm[i] + bn[i]);
        }
    }

    #[test]
    fn ext_additive_and_shifts(r in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = ring(r);
        let (m, m2, n) = (random_module(&a, 2, 2, s1), random_module(&a, 2, 2, s2), random_module(&a, 2, 2, s3));
        let sum = Module::direct_sum(&a, &[m.clone(), m2.clone()]);
        let (e1, e2, es) = (ext_dims(&m, &n, 4).unwrap(), ext_dims(&m2, &n, 4).unwrap(), ext_dims(&sum, &n, 4).unwrap());
        for i in 0..=4 {
            prop_assert_eq!(es[i], e1[i] + e2[i]);
        }
        for shift in 1..=2 {
            let o = ext_dims(&syzygy(&m, shift).unwrap(), &n, 4 - shift).unwrap();
            for i in 1..=4 - shift {
                prop_assert_eq!(o[i], e1[i + shift]);
            }
        }
        // the fast route against the Hom complex
        for i in 0..=2 {
            prop_assert_eq!(ext(&m, &n, i).unwrap().dim, e1[i]);
        }
    }

    #[test]
    fn free_modules_are_reflexive(r in 0usize..4, rank in 0usize..3) {
        let f = Module::free(&ring(r), rank);
        let b = biduality_map(&f).unwrap();
        prop_assert!(b.is_isomorphism());
    }

    #[test]
    fn extension_classes_round_trip(r in 0usize..2, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = ring(r);
        let (c, left) = (random_module(&a, 2, 2, s1), random_module(&a, 2, 2, s2));
        let space = Ext1Space::new(&c, &left).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(s3);
        let cls: Vec<F2> = (0..space.dim()).map(|_| F2::random(&mut rng)).collect();
        let ses = space.extension_middle_term(&space.representative(&cls)).unwrap();
        prop_assert!(ses.check().is_ok());
        prop_assert_eq!(space.class_of(&ses).unwrap(), cls);
        let hs = horseshoe_syzygy(&ses).unwrap();
        prop_assert!(hs.ses.check().is_ok());
        let ob = minimal_free_cover(ses.middle()).unwrap().kernel;
        prop_assert_eq!(hs.ses.middle().dim(), ob.dim() + hs.free_rank * a.dim());
    }

    #[test]
    fn pushforward_kills_ext1(r in 0usize..4, seed in any::<u64>()) {
        let a = ring(r);
        let m = random_module(&a, 3, 3, seed);
        if let Ok(pf) = pushforward(&m) {
            prop_assert!(pf.ses.check().is_ok());
            prop_assert_eq!(ext_dims(pf.ses.right(), &Module::free(&a, 1), 1).unwrap()[1], 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_output_verifies_and_window_is_monotone(r in 0usize..4, seed in any::<u64>(), gdim in any::<bool>()) {
        let a = ring(r);
        let m = random_module(&a, 3, 3, seed);
        let target = if gdim { Target::Gdim } else { Target::Pd };
        if let Some(seq) = search(&m, &standard_bounds(), target).unwrap().sequence {
            prop_assert!(verify(&seq, 10).unwrap().accepted());
            if target == Target::Pd {
                for w in 0..10 {
                    prop_assert!(verify(&seq, w).unwrap().accepted());
                }
            }
        }
    }

    #[test]
    fn transfers_round_trip_over_gorenstein(seed in any::<u64>()) {
        let a = cubic();
        let n = random_module(&a, 3, 3, seed);
        let seq = search(&n, &standard_bounds(), Target::Pd).unwrap().sequence.expect("every module over k[x]/(x³) is reached");
        let shifted = transform_syzygy(&seq, 10).unwrap();
        prop_assert!(verify(&shifted, 10).unwrap().accepted());
        let back = transform_cosyzygy(&shifted, &n, &Matrix::identity(shifted.base.dim()), 10).unwrap();
        prop_assert!(verify(&back, 10).unwrap().accepted());
        prop_assert!(back.base == n);
    }

    #[test]
    fn gorenstein_modules_are_certified(seed in any::<u64>()) {
        let m = random_module(&cubic(), 3, 3, seed);
        prop_assert_eq!(is_totally_reflexive(&m, 10).unwrap(), TrVerdict::Certified);
    }

    #[test]
    fn structure_branches_are_exclusive(seed in any::<u64>()) {
        let a = plane();
        let m = random_module(&a, 3, 3, seed);
        let rep = check_prop27(&a, &m, &standard_bounds(), None).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.counterexample);
        let shape = free_plus_residue_shape(&m).unwrap().is_some();
        let found = search(&m, &standard_bounds(), Target::Pd).unwrap().sequence.is_some();
        prop_assert_eq!(shape, found);
    }

    #[test]
    fn ext_vanishing_passes_down_the_sequence(r in 0usize..4, seed in any::<u64>()) {
        let a = ring(r);
        let m = random_module(&a, 3, 3, seed);
        let rr = Module::free(&a, 1);
        let w = 6;
        let vanish = |x: &Module<F2>| ext_dims(x, &rr, w).unwrap()[1..].iter().all(|&d| d == 0);
        if let Some(seq) = search(&m, &standard_bounds(), Target::Pd).unwrap().sequence {
            if vanish(&m) {
                for i in 0..=seq.len() {
                    prop_assert!(vanish(seq.module(i)));
                }
            }
        }
    }
}
