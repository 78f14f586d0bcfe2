#![allow(dead_code)]

use std::sync::Arc;

use folcris_core::derham::{Form, FrameSet};
use folcris_core::foliation::{check_integrability, Distribution};
use folcris_core::poly::{Algebra, LocalizedPoly, Monomial, Poly, Presentation};
use folcris_core::zmod::Ring;
use rand::Rng;

pub fn algebra(p: u64, n: u32, vars: &[&str], h: Option<Vec<(Vec<u32>, i64)>>) -> Arc<Algebra> {
    Algebra::new(&Presentation { p, n, vars: vars.iter().map(|s| s.to_string()).collect(), inverted: h }).unwrap()
}

/// The coefficient rings exercised by the randomized suites.
pub fn configurations() -> Vec<Arc<Algebra>> {
    let mut out = Vec::new();
    for (p, n) in [(5, 1), (7, 1), (3, 2), (5, 2)] {
        out.push(algebra(p, n, &["x", "y", "z"], None));
        out.push(algebra(p, n, &["x", "y", "z"], Some(vec![(vec![1, 0, 0], 1)])));
        out.push(algebra(p, n, &["x", "y"], Some(vec![(vec![1, 0], 1), (vec![0, 0], 1)])));
    }
    out
}

pub fn function<R: Rng>(alg: &Arc<Algebra>, rng: &mut R, terms: usize, max_deg: u32) -> LocalizedPoly {
    let ring = alg.ring();
    let v = alg.nvars();
    let num = Poly::from_terms(
        ring,
        v,
        (0..terms).map(|_| {
            let e: Vec<u32> = (0..v).map(|_| rng.gen_range(0..=max_deg)).collect();
            (Monomial(e), rng.gen_range(0..ring.modulus()))
        }),
    );
    let den = if alg.h().is_some() { rng.gen_range(0..3) } else { 0 };
    LocalizedPoly::new(alg, num, den)
}

pub fn form<R: Rng>(alg: &Arc<Algebra>, rng: &mut R, degree: usize) -> Form {
    let sets = FrameSet::subsets(alg.nvars(), degree);
    let mut acc = Form::zero(alg, degree);
    for _ in 0..rng.gen_range(0..=3) {
        let set = sets[rng.gen_range(0..sets.len())];
        acc = &acc + &Form::term(alg, function(alg, rng, 3, 3), set);
    }
    acc
}

pub fn ring(p: u64, n: u32) -> Ring {
    Ring::new(p, n).unwrap()
}

pub fn dist(alg: &Arc<Algebra>, gens: &[&str]) -> Distribution {
    let gens: Vec<Form> = gens.iter().map(|g| Form::parse(alg, g).unwrap()).collect();
    check_integrability(alg, &gens, None).unwrap().integrable().unwrap()
}

/// Integrable distributions used across suites, with whether their
/// generators are weight-homogeneous (so truncations apply).
pub fn distributions() -> Vec<(Distribution, bool)> {
    let a2 = algebra(7, 1, &["x", "y"], None);
    let a2x = algebra(7, 1, &["x", "y"], Some(vec![(vec![1, 0], 1)]));
    let a3 = algebra(5, 1, &["x", "y", "z"], None);
    let a3x = algebra(5, 1, &["x", "y", "z"], Some(vec![(vec![1, 0, 0], 1)]));
    let a3z9 = algebra(3, 2, &["x", "y", "z"], None);
    let a4 = algebra(11, 1, &["x", "y", "z", "w"], None);
    vec![
        (dist(&a2, &["dy"]), true),
        (dist(&a2, &["dx"]), true),
        (dist(&a2, &["dy + y^2*dx"]), false),
        (dist(&a2x, &["x*dy - 2*y*dx"]), true),
        (dist(&a3, &["dz"]), true),
        (dist(&a3, &["dz", "dy"]), true),
        (dist(&a3x, &["x*dz - z*dx"]), true),
        (dist(&a3z9, &["dz + x*dy + y*dx"]), false),
        (dist(&a4, &["dz + w^2*dx", "dw"]), false),
    ]
}
