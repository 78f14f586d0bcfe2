mod common;

use folcris_core::derham::Form;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(cfg in 0usize..12, deg in 0usize..3, seed in any::<u64>()) {
        let alg = &common::configurations()[cfg];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::form(alg, &mut rng, deg.min(alg.nvars()));
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn graded_leibniz(cfg in 0usize..12, da in 0usize..3, db in 0usize..2, seed in any::<u64>()) {
        let alg = &common::configurations()[cfg];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::form(alg, &mut rng, da.min(alg.nvars()));
        let b = common::form(alg, &mut rng, db);
        let lhs = a.wedge(&b).d();
        let rhs = &a.d().wedge(&b) + &a.wedge(&b.d()).scale_int(sign(a.degree()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_commutativity(cfg in 0usize..12, da in 0usize..3, db in 0usize..3, seed in any::<u64>()) {
        let alg = &common::configurations()[cfg];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::form(alg, &mut rng, da.min(alg.nvars()));
        let b = common::form(alg, &mut rng, db.min(alg.nvars()));
        let s = sign(a.degree() * b.degree());
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_int(s));
    }

    #[test]
    fn printing_round_trips(cfg in 0usize..12, deg in 0usize..3, seed in any::<u64>()) {
        let alg = &common::configurations()[cfg];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::form(alg, &mut rng, deg.min(alg.nvars()));
        prop_assume!(!a.is_zero());
        prop_assert_eq!(Form::parse(alg, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn restriction_is_a_dga_map(seed in any::<u64>(), da in 0usize..2, db in 0usize..2) {
        let x = common::algebra(5, 2, &["x", "y", "z"], None);
        let u = common::algebra(5, 2, &["x", "y", "z"], Some(vec![(vec![1, 0, 0], 1)]));
        let v = common::algebra(5, 2, &["x", "y", "z"], Some(vec![(vec![1, 1, 0], 1)]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::form(&x, &mut rng, da);
        let b = common::form(&x, &mut rng, db);
        let r = |f: &Form| f.restrict(&u).unwrap();
        prop_assert_eq!(r(&a.wedge(&b)), r(&a).wedge(&r(&b)));
        prop_assert_eq!(r(&a.d()), r(&a).d());
        prop_assert_eq!(r(&a).restrict(&v).unwrap(), a.restrict(&v).unwrap());
    }
}
