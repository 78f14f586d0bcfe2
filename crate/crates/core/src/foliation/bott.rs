use crate::derham::{Form, FormMatrix};
use crate::error::{Error, Result};
use crate::foliation::Distribution;
use crate::poly::LocalizedPoly;

/// The Bott connection on the conormal module, in the frame `ω_1..ω_d`.
///
/// With `dω_i = Σ_j α_ij ∧ ω_j` the connection is `d + A` with `A = α^T`
/// (so `∇ω_j = Σ_i A_ij ω_i`); `β` is `A` projected to foliated forms.
#[derive(Clone, Debug)]
pub struct BottConnection {
    pub connection: FormMatrix,
    pub beta: FormMatrix,
    /// `dA + A∧A`, equal to `(dα - α∧α)^T`.
    pub curvature: FormMatrix,
}

/// One identity checked by [`Distribution::validate_algebroid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizCheck {
    pub identity: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizReport {
    pub checks: Vec<LeibnizCheck>,
}

impl Distribution {
    pub fn bott_connection(&self) -> Result<BottConnection> {
        let a = self.witness().transpose();
        let curvature = a.d().add(&a.wedge(&a));
        for row in curvature.rows() {
            for k in row {
                if !self.filtration_level(k)?.contains(1) {
                    return Err(Error::InternalConsistency(format!(
                        "Bott curvature entry {k} has no conormal factor"
                    )));
                }
            }
        }
        let beta = a.map(1, |f| self.project(f));
        Ok(BottConnection { connection: a, beta, curvature })
    }

    /// Checks the Lie algebroid identities of the foliated complex on a
    /// generating sample: `d1(f m) = f d1(m) + d0(f) ∧ m` and `d^2 = 0`.
    pub fn validate_algebroid(&self) -> Result<LeibnizReport> {
        let alg = self.algebra();
        let d0 = |f: &LocalizedPoly| self.project(&Form::function(f.clone()).d());
        let d1 = |m: &Form| self.project(&m.d());
        let mut functions = vec![LocalizedPoly::one(alg)];
        for i in 0..alg.nvars() {
            functions.push(LocalizedPoly::var(alg, i));
            for k in i..alg.nvars() {
                functions.push(&LocalizedPoly::var(alg, i) * &LocalizedPoly::var(alg, k));
            }
        }
        if alg.h().is_some() {
            functions.push(LocalizedPoly::h_inverse(alg));
        }
        let frame: Vec<Form> = self.complement().iter().map(|&k| Form::dx(alg, k)).collect();
        let mut checks = Vec::new();
        for f in &functions {
            let lhs = d1(&d0(f));
            checks.push(LeibnizCheck { identity: format!("d1(d0({f})) = 0"), holds: lhs.is_zero() });
            for m in &frame {
                for g in &functions {
                    let m = m.scale(g);
                    let lhs = d1(&m.scale(f));
                    let rhs = &d1(&m).scale(f) + &d0(f).wedge(&m);
                    checks.push(LeibnizCheck {
                        identity: format!("d1(({f}) * ({m})) = ({f}) d1({m}) + d0({f}) ∧ {m}"),
                        holds: lhs == self.project(&rhs),
                    });
                    checks.push(LeibnizCheck {
                        identity: format!("d1(d1({m})) = 0"),
                        holds: d1(&d1(&m)).is_zero(),
                    });
                }
            }
        }
        if let Some(bad) = checks.iter().find(|c| !c.holds) {
            return Err(Error::InternalConsistency(format!("algebroid identity fails: {}", bad.identity)));
        }
        Ok(LeibnizReport { checks })
    }
}

/// Curvature `dA + A∧A` of a matrix of 1-forms.
pub fn curvature_of(a: &FormMatrix) -> FormMatrix {
    a.d().add(&a.wedge(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::check_integrability;
    use crate::poly::{Algebra, Presentation};
    use crate::zmod::Ring;

    #[test]
    fn bott_examples() {
        let a = Algebra::polynomial(Ring::new(7, 1).unwrap(), &["x", "y"]).unwrap();
        let d = check_integrability(&a, &[Form::parse(&a, "dy").unwrap()], None).unwrap().integrable().unwrap();
        let b = d.bott_connection().unwrap();
        assert!(b.beta.is_zero() && b.curvature.is_zero());

        let ric = check_integrability(&a, &[Form::parse(&a, "dy + y^2*dx").unwrap()], None)
            .unwrap()
            .integrable()
            .unwrap();
        let b = ric.bott_connection().unwrap();
        assert_eq!(b.curvature.get(0, 0), &Form::parse(&a, "2*dx*dy").unwrap());
        assert!(ric.filtration_level(b.curvature.get(0, 0)).unwrap().contains(1));

        let ax = Algebra::new(&Presentation {
            p: 7,
            n: 1,
            vars: vec!["x".into(), "y".into()],
            inverted: Some(vec![(vec![1, 0], 1)]),
        })
        .unwrap();
        let rad = check_integrability(&ax, &[Form::parse(&ax, "x*dy - 2*y*dx").unwrap()], None)
            .unwrap()
            .integrable()
            .unwrap();
        let b = rad.bott_connection().unwrap();
        assert_eq!(b.beta.get(0, 0), &Form::parse(&ax, "3*x^-1*dx").unwrap());
        assert!(b.curvature.is_zero());
    }

    #[test]
    fn algebroid_identities_hold() {
        let ax = Algebra::new(&Presentation {
            p: 7,
            n: 1,
            vars: vec!["x".into(), "y".into()],
            inverted: Some(vec![(vec![1, 0], 1)]),
        })
        .unwrap();
        for gens in [vec![], vec!["dy"], vec!["x*dy - 2*y*dx"]] {
            let g: Vec<Form> = gens.iter().map(|s| Form::parse(&ax, s).unwrap()).collect();
            let d = check_integrability(&ax, &g, None).unwrap().integrable().unwrap();
            let report = d.validate_algebroid().unwrap();
            assert!(report.checks.len() > 10 && report.checks.iter().all(|c| c.holds));
        }
    }
}
