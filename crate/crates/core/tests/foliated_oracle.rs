//! Foliated cohomology of `A^2 / F_5` along `D = <dy>` at `N = 5`, against a
//! direct enumeration.
//!
//! Modulo `dy` the complex is `C^0 = F_5[x,y]_{<=5} -> C^1 = F_5[x,y]_{<=4} dx`
//! with differential `∂_x`. On monomials `∂_x(x^a y^b) = a x^(a-1) y^b`, so
//! the kernel is spanned by the `x^a y^b` with `5 | a`, and the image by the
//! `x^c y^b dx` with `c + 1` prime to 5. Both are monomial, so ranks and
//! generators can be read off by listing exponents.

use folcris_core::derham::Form;
use folcris_core::foliation::check_integrability;
use folcris_core::poly::Algebra;
use folcris_core::zmod::Ring;

const P: u32 = 5;
const N: u32 = 5;

fn monomial(a: u32, b: u32) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    let parts: Vec<String> = [part("x", a), part("y", b)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn oracle() -> (Vec<String>, Vec<String>) {
    let h0 = (0..=N)
        .flat_map(|a| (0..=N - a).map(move |b| (a, b)))
        .filter(|(a, _)| a % P == 0)
        .map(|(a, b)| monomial(a, b))
        .collect();
    let h1 = (0..N)
        .flat_map(|c| (0..N - c).map(move |b| (c, b)))
        .filter(|(c, _)| (c + 1) % P == 0)
        .map(|(c, b)| format!("{}*dx", monomial(c, b)))
        .collect();
    (h0, h1)
}

#[test]
fn plane_along_horizontal_leaves() {
    let (mut h0, h1) = oracle();
    assert_eq!(h0.len(), 7);
    assert_eq!(h1, vec!["x^4*dx"]);

    let alg = Algebra::polynomial(Ring::new(5, 1).unwrap(), &["x", "y"]).unwrap();
    let dist = check_integrability(&alg, &[Form::parse(&alg, "dy").unwrap()], None).unwrap().integrable().unwrap();
    let c = dist.foliated_complex(N).unwrap();
    let got0 = c.cohomology(0).unwrap();
    assert_eq!((got0.free_rank(), got0.torsion().len()), (7, 0));
    let mut reps: Vec<String> = got0.representatives.iter().map(|f| f.to_string()).collect();
    reps.sort();
    h0.sort();
    assert_eq!(reps, h0);
    let got1 = c.cohomology(1).unwrap();
    assert_eq!(got1.free_rank(), 1);
    assert_eq!(got1.representatives.iter().map(|f| f.to_string()).collect::<Vec<_>>(), h1);
}
