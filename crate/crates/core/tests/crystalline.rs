//! Level-n consistency. The A^1 oracle: over Z/25 with N = 5 the complex is
//! `span(1, x, .., x^5) -> span(dx, .., x^4 dx)`, `d x^k = k x^(k-1) dx`.
//! `k = 5` gives `5 x^4 dx`, so `x^5` is not closed but `5 x^5` is; `x^4 dx`
//! is hit only up to the factor 5. Hence `H^0 = Z/25 · 1 ⊕ Z/5 · 5x^5` and
//! `H^1 = Z/5 · x^4 dx`.

mod common;

use folcris_core::chern_weil::{verify_bott_vanishing, Connection, InvariantPolynomial};
use folcris_core::crystalline::{crystalline_cohomology, lift_foliation, lift_presentation, verify_c4, LiftOutcome};
use folcris_core::derham::Form;

#[test]
fn affine_line_over_z25() {
    let lift = lift_presentation(&common::algebra(5, 1, &["x"], None), 2).unwrap();
    let h0 = crystalline_cohomology(&lift, 0, 5).unwrap();
    let orders: Vec<u32> = h0.decomposition.summands.iter().map(|s| s.exponent).collect();
    assert_eq!(orders, vec![2, 1]);
    let reps: Vec<String> = h0.representatives.iter().map(|f| f.to_string()).collect();
    assert_eq!(reps, vec!["1", "5*x^5"]);
    let h1 = crystalline_cohomology(&lift, 1, 5).unwrap();
    assert_eq!(h1.torsion(), vec![1]);
    assert_eq!(h1.representatives[0], Form::parse(lift.lifted(), "x^4*dx").unwrap());
}

#[test]
fn c4_certificates_reduce_to_c2_certificates() {
    for (dist, _) in common::distributions() {
        let p = dist.algebra().ring().p();
        if ![7, 11].contains(&p) {
            continue;
        }
        for n in 2..=3 {
            let lift = lift_presentation(dist.algebra(), n).unwrap();
            let LiftOutcome::Lifted(ss) = lift_foliation(&dist, &lift, None).unwrap() else {
                panic!("verbatim lift of {:?} failed", dist.generators());
            };
            assert!(ss.reduces_to_base());
            let bott = Connection::new(dist.bott_connection().unwrap().connection).unwrap();
            for phi in ["X1^2", "X1^3", "X1*X2", "X3"] {
                let phi = InvariantPolynomial::parse(dist.algebra().ring(), phi).unwrap();
                if phi.weight() <= dist.rank() {
                    continue;
                }
                let c4 = verify_c4(&ss, &phi).unwrap();
                assert!(c4.certificate.phi_form.is_zero());
                assert_eq!(c4.reduce(dist.algebra()), verify_bott_vanishing(&bott, &dist, &phi).unwrap());
            }
        }
    }
}

#[test]
fn reduction_is_a_chain_map() {
    for vars in [&["x"][..], &["x", "y"]] {
        let lift = lift_presentation(&common::algebra(7, 1, vars, None), 3).unwrap();
        assert!(lift.reduction_commutes(3).unwrap());
    }
}
