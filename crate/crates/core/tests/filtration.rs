mod common;

use folcris_core::derham::Form;
use folcris_core::poly::LocalizedPoly;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn product(dist: &folcris_core::foliation::Distribution, s: &[usize]) -> Form {
    let alg = dist.algebra();
    s.iter().fold(Form::function(LocalizedPoly::one(alg)), |acc, &i| acc.wedge(&dist.generators()[i]))
}

/// A random element of `F^{-i}`: `Σ ω_S ∧ η_S` over `|S| = i`.
fn element(dist: &folcris_core::foliation::Distribution, i: usize, rng: &mut ChaCha8Rng) -> Form {
    let alg = dist.algebra();
    let extra = rng.gen_range(0..=alg.nvars() - i);
    let mut acc = Form::zero(alg, i + extra);
    for _ in 0..2 {
        let mut s: Vec<usize> = (0..dist.rank()).collect();
        while s.len() > i {
            s.remove(rng.gen_range(0..s.len()));
        }
        acc = &acc + &product(dist, &s).wedge(&common::form(alg, rng, extra));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_preserves_each_level(k in 0usize..9, seed in any::<u64>()) {
        let (dist, _) = &common::distributions()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..=dist.rank() {
            let a = element(dist, i, &mut rng);
            let lvl = dist.filtration_level(&a).unwrap();
            prop_assert!(lvl.contains(i));
            prop_assert_eq!(lvl.recombine(dist.generators(), dist.algebra(), a.degree()), a.clone());
            prop_assert!(dist.filtration_level(&a.d()).unwrap().contains(i));
        }
    }

    #[test]
    fn levels_are_multiplicative(k in 0usize..9, i in 0usize..3, j in 0usize..3, seed in any::<u64>()) {
        let (dist, _) = &common::distributions()[k];
        let (i, j) = (i.min(dist.rank()), j.min(dist.rank()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = element(dist, i, &mut rng);
        let b = element(dist, j, &mut rng);
        prop_assume!(a.degree() + b.degree() <= dist.algebra().nvars());
        prop_assert!(dist.filtration_level(&a.wedge(&b)).unwrap().contains(i + j));
    }

    #[test]
    fn levels_above_the_codimension_vanish(k in 0usize..9, seed in any::<u64>()) {
        let (dist, _) = &common::distributions()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = dist.rank();
        let s: Vec<usize> = (0..=d).map(|_| rng.gen_range(0..d)).collect();
        prop_assert!(product(dist, &s).is_zero());
        let deg = rng.gen_range(0..=dist.algebra().nvars());
        let a = common::form(dist.algebra(), &mut rng, deg);
        prop_assert!(dist.filtration_level(&a).unwrap().level.is_none_or(|l| l <= d));
    }
}

#[test]
fn graded_zero_is_the_foliated_complex() {
    for (dist, homogeneous) in common::distributions() {
        if !homogeneous {
            continue;
        }
        for n in [2, 3] {
            let gr = dist.graded_piece(0, n).unwrap();
            let fol = dist.foliated_complex(n).unwrap();
            assert_eq!(gr.len(), fol.len());
            for j in 0..fol.len() {
                assert_eq!(gr.dim(j), fol.dim(j));
                for k in 0..fol.dim(j) {
                    assert_eq!(gr.basis(j)[k].exponents, fol.basis(j)[k].exponents);
                    assert_eq!(gr.basis_form(j, k), fol.basis_form(j, k));
                }
                assert_eq!(gr.differential(j), fol.differential(j));
            }
            let top = dist.filtered_subcomplex(dist.rank() + 1, n).unwrap();
            assert!((0..top.len()).all(|j| top.dim(j) == 0));
        }
    }
}

#[test]
fn non_homogeneous_generators_refuse_truncation() {
    let (ric, _) = &common::distributions()[2];
    assert!(matches!(ric.foliated_complex(3), Err(folcris_core::Error::UnsupportedTruncation(_))));
}
