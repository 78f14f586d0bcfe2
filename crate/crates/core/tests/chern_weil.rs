mod common;

use std::sync::Arc;

use folcris_core::chern_weil::{transgression, verify_bott_vanishing, verify_theorem_t1, Connection, InvariantPolynomial};
use folcris_core::derham::Form;
use folcris_core::foliation::Distribution;
use folcris_core::poly::Algebra;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_connection(alg: &Arc<Algebra>, rank: usize, rng: &mut ChaCha8Rng) -> Connection {
    let entries = (0..rank).map(|_| (0..rank).map(|_| common::form(alg, rng, 1)).collect()).collect();
    Connection::from_entries(alg, entries).unwrap()
}

/// `A_ij = Σ_k g_ijk ω_k + δ_ij df`: curvature lies in `F^{-1}`.
fn flat_along(dist: &Distribution, rank: usize, rng: &mut ChaCha8Rng) -> Connection {
    let alg = dist.algebra();
    let df = Form::function(common::function(alg, rng, 2, 2)).d();
    let entries = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    let mut e = if i == j { df.clone() } else { Form::zero(alg, 1) };
                    for w in dist.generators() {
                        e = &e + &w.scale(&common::function(alg, rng, 2, 2));
                    }
                    e
                })
                .collect()
        })
        .collect();
    Connection::from_entries(alg, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transgression_identity(seed in any::<u64>(), rank in 1usize..3, which in 0usize..3) {
        let r = common::ring(11, 1);
        let alg = common::algebra(11, 1, &["x", "y", "z", "w"], None);
        let phi = InvariantPolynomial::parse(r, ["X1", "X1^2", "X1^2 - 3*X2"][which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c0 = random_connection(&alg, rank, &mut rng);
        let c1 = random_connection(&alg, rank, &mut rng);
        let t = transgression(&c0, &c1, &phi).unwrap();
        prop_assert_eq!(t.d(), &c1.phi_form(&phi).unwrap() - &c0.phi_form(&phi).unwrap());
    }
}

#[test]
fn chern_classes_of_flat_along_connections_vanish_on_leaves() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut count = 0;
    for (dist, _) in common::distributions() {
        let bott = Connection::new(dist.bott_connection().unwrap().connection).unwrap();
        let mut conns = vec![bott];
        for rank in 1..=2 {
            conns.push(flat_along(&dist, rank, &mut rng));
        }
        for conn in conns {
            for i in 1..=conn.rank() {
                let cert = verify_theorem_t1(&conn, &dist, i).unwrap();
                assert!(dist.project(&cert.chern_form).is_zero());
                assert_eq!(cert.level.recombine(dist.generators(), dist.algebra(), 2 * i), cert.chern_form);
            }
            count += 1;
        }
    }
    assert!(count >= 20);
}

#[test]
fn bott_vanishing_for_monomials_above_the_codimension() {
    for (dist, _) in common::distributions() {
        let d = dist.rank();
        let r = dist.algebra().ring();
        let bott = Connection::new(dist.bott_connection().unwrap().connection).unwrap();
        for phi in ["X1^2", "X2", "X1^3", "X1*X2", "X3"] {
            let phi = InvariantPolynomial::parse(r, phi).unwrap();
            if phi.weight() <= d {
                continue;
            }
            let cert = verify_bott_vanishing(&bott, &dist, &phi).unwrap();
            assert!(cert.phi_form.is_zero() && cert.recheck(&dist));
        }
    }
}

#[test]
fn a_connection_not_flat_along_the_leaves_is_rejected() {
    let alg = common::algebra(7, 1, &["x", "y", "z", "w"], None);
    let dist = common::dist(&alg, &["dz"]);
    let conn = Connection::from_entries(&alg, vec![vec![Form::parse(&alg, "w*dx").unwrap()]]).unwrap();
    assert!(matches!(verify_theorem_t1(&conn, &dist, 1), Err(folcris_core::Error::HypothesisUnmet(_))));
}
