//! Kernel, solve and homology against brute-force enumeration.

mod common;

use std::collections::BTreeSet;

use folcris_core::linalg::{homology_at, kernel, solve, Matrix};
use folcris_core::zmod::Ring;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every vector of `(Z/m)^len`.
fn vectors(m: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..m).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn all_matrices(r: Ring, rows: usize, cols: usize) -> Vec<Matrix> {
    vectors(r.modulus(), rows * cols)
        .into_iter()
        .map(|e| {
            let rows: Vec<Vec<i64>> = e.chunks(cols.max(1)).map(|c| c.iter().map(|&x| x as i64).collect()).collect();
            let rows = if cols == 0 { vec![vec![]; rows.len()] } else { rows };
            Matrix::from_rows(r, &rows)
        })
        .collect()
}

/// The submodule spanned by the columns of `g`, by enumeration.
fn span(g: &Matrix) -> BTreeSet<Vec<u64>> {
    let r = g.ring();
    vectors(r.modulus(), g.cols()).iter().map(|c| g.mul_vec(c).unwrap()).collect()
}

fn null_set(m: &Matrix) -> BTreeSet<Vec<u64>> {
    vectors(m.ring().modulus(), m.cols()).into_iter().filter(|x| m.mul_vec(x).unwrap().iter().all(|&v| v == 0)).collect()
}

#[test]
fn kernel_and_solve_agree_with_enumeration_over_z9() {
    let r = common::ring(3, 2);
    for (rows, cols) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let rhs = vectors(9, rows);
        for m in all_matrices(r, rows, cols) {
            let k = kernel(&m);
            assert_eq!(span(&k), null_set(&m), "kernel of {m:?}");
            let image = span(&m);
            for b in &rhs {
                match solve(&m, b).unwrap() {
                    Ok(x) => assert_eq!(&m.mul_vec(&x).unwrap(), b),
                    Err(_) => assert!(!image.contains(b)),
                }
            }
        }
    }
}

#[test]
fn homology_length_matches_enumeration_over_z9() {
    let r = common::ring(3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d_out in all_matrices(r, 2, 2) {
        // d_in from random combinations of kernel columns, so d_out d_in = 0.
        let k = kernel(&d_out);
        let cols: Vec<Vec<u64>> = (0..2)
            .map(|_| {
                let c: Vec<u64> = (0..k.cols()).map(|_| rng.gen_range(0..9)).collect();
                k.mul_vec(&c).unwrap()
            })
            .collect();
        let d_in = Matrix::from_columns(r, 2, &cols);
        let h = homology_at(&d_in, &d_out).unwrap();
        let (z, b) = (null_set(&d_out).len(), span(&d_in).len());
        assert_eq!(z % b, 0);
        assert_eq!(3u64.pow(h.length()), (z / b) as u64);
        for g in h.generators() {
            assert!(d_out.mul_vec(g).unwrap().iter().all(|&v| v == 0));
        }
    }
}

fn random_matrix(r: Ring, rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let m = r.modulus() as i64;
    let e: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..m)).collect()).collect();
    Matrix::from_rows(r, &e)
}

proptest! {
    #[test]
    fn construct_then_solve_over_z25(seed in any::<u64>()) {
        let r = common::ring(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(r, &mut rng, 4, 4);
        let x: Vec<u64> = (0..4).map(|_| rng.gen_range(0..25)).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = solve(&m, &b).unwrap().expect("constructed system is solvable");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
        let k = kernel(&m);
        prop_assert!(m.mul(&k).unwrap().is_zero());
        // x - y lies in the kernel span.
        let diff: Vec<u64> = x.iter().zip(&y).map(|(a, b)| r.sub(*a, *b)).collect();
        prop_assert!(solve(&k, &diff).unwrap().is_ok());
    }

    #[test]
    fn unsolvable_systems_have_certified_residuals(seed in any::<u64>()) {
        let r = common::ring(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Rank-deficient: the last row is 5 times the first.
        let mut m = random_matrix(r, &mut rng, 4, 4);
        for j in 0..4 {
            m.set(3, j, r.mul(5, m.get(0, j)));
        }
        let b = vec![1, 0, 0, 0];
        // Any image vector has b_3 = 5 b_0, which fails here.
        prop_assert!(solve(&m, &b).unwrap().is_err());
    }
}
