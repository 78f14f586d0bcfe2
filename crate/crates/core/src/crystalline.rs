//! Crystalline cohomology through smooth lifts to `Z/p^n`, S-structures on
//! foliations and the Bott vanishing and residues at finite level.

use std::sync::Arc;

use crate::chern_weil::{residue, verify_bott_vanishing, BottCertificate, Connection, InvariantPolynomial, ResidueClass};
use crate::derham::{Cohomology, Form, TruncatedComplex};
use crate::error::{Error, Result};
use crate::foliation::{check_integrability, Distribution, FiltrationLevel, Integrability};
use crate::poly::{Algebra, Poly};

/// A coefficient-wise lift of an `F_p`-presentation to `Z/p^n`.
#[derive(Clone, Debug)]
pub struct Lift {
    base: Arc<Algebra>,
    lifted: Arc<Algebra>,
}

pub fn lift_presentation(base: &Arc<Algebra>, n: u32) -> Result<Lift> {
    if base.ring().n() != 1 {
        return Err(Error::Usage(format!("lifts start from a presentation over F_p, not {}", base.ring())));
    }
    // Algebra::change_ring re-runs the presentation check over Z/p^n.
    let lifted = base.change_ring(n)?;
    Ok(Lift { base: base.clone(), lifted })
}

impl Lift {
    pub fn base(&self) -> &Arc<Algebra> {
        &self.base
    }

    pub fn lifted(&self) -> &Arc<Algebra> {
        &self.lifted
    }

    pub fn level(&self) -> u32 {
        self.lifted.ring().n()
    }

    pub fn lift_form(&self, a: &Form) -> Form {
        a.change_ring(&self.lifted)
    }

    pub fn reduce_form(&self, a: &Form) -> Form {
        a.change_ring(&self.base)
    }

    /// The lift of `U = X_h` for `h` over the base.
    pub fn localize(&self, h: &Poly) -> Result<Lift> {
        let base = self.base.localize(h)?;
        lift_presentation(&base, self.level())
    }

    /// Entrywise reduction of the lifted truncated differentials equals the
    /// base differentials (the reduction is a chain map on the same bases).
    pub fn reduction_commutes(&self, bound: u32) -> Result<bool> {
        let hi = TruncatedComplex::de_rham(&self.lifted, bound)?;
        let lo = TruncatedComplex::de_rham(&self.base, bound)?;
        let base_ring = self.base.ring();
        for j in 0..hi.len() {
            let (a, b) = (hi.differential(j), lo.differential(j));
            if (a.rows(), a.cols()) != (b.rows(), b.cols()) || hi.basis(j) != lo.basis(j) {
                return Ok(false);
            }
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    if a.get(r, c) % base_ring.modulus() != b.get(r, c) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `H^j` of the truncated de Rham complex of the lift, the finite-level
/// stand-in for `H^j_cris(X/W_n)`.
pub fn crystalline_cohomology(lift: &Lift, j: usize, bound: u32) -> Result<Cohomology> {
    TruncatedComplex::de_rham(&lift.lifted, bound)?.cohomology(j)
}

/// An S-structure: a lift of an integrable distribution that stays
/// integrable over `Z/p^n`.
#[derive(Clone, Debug)]
pub struct SStructure {
    pub lift: Lift,
    pub base: Distribution,
    pub lifted: Distribution,
}

impl SStructure {
    /// Generators, certificate and witness reduce to those of the base.
    pub fn reduces_to_base(&self) -> bool {
        let base = &self.lift.base;
        self.lifted.generators().iter().map(|w| w.change_ring(base)).eq(self.base.generators().iter().cloned())
            && self.lifted.certificate() == self.base.certificate()
            && self
                .lifted
                .witness()
                .rows()
                .iter()
                .flatten()
                .map(|f| f.change_ring(base))
                .eq(self.base.witness().rows().iter().flatten().cloned())
    }
}

/// Result of [`lift_foliation`].
#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(Box<SStructure>),
    /// Lifted generators that are not integrable mod `p^n`: the residuals of
    /// `dω̃_i` modulo `D̃ ∧ Ω^1`, all divisible by `p^valuation`.
    Obstruction { generators: Vec<Form>, residuals: Vec<Form>, valuation: u32 },
}

/// Tries to lift `F` along `lift`, using the given proposals or the
/// coefficient-wise lift of the generators.
pub fn lift_foliation(base: &Distribution, lift: &Lift, proposals: Option<&[Form]>) -> Result<LiftOutcome> {
    if !base.algebra().same_as(&lift.base) {
        return Err(Error::PresentationMismatch);
    }
    let generators: Vec<Form> = match proposals {
        None => base.generators().iter().map(|w| lift.lift_form(w)).collect(),
        Some(p) => {
            if p.len() != base.rank() {
                return Err(Error::WrongReduction(format!("{} proposals for {} generators", p.len(), base.rank())));
            }
            for (w, w0) in p.iter().zip(base.generators()) {
                if !w.algebra().same_as(&lift.lifted) {
                    return Err(Error::PresentationMismatch);
                }
                if lift.reduce_form(w) != *w0 {
                    return Err(Error::WrongReduction(format!("{w} does not reduce to {w0}")));
                }
            }
            p.to_vec()
        }
    };
    match check_integrability(&lift.lifted, &generators, Some(base.certificate()))? {
        Integrability::Integrable(lifted) => {
            let ss = SStructure { lift: lift.clone(), base: base.clone(), lifted };
            if !ss.reduces_to_base() {
                return Err(Error::InternalConsistency("lifted witness does not reduce to the base witness".into()));
            }
            Ok(LiftOutcome::Lifted(Box::new(ss)))
        }
        Integrability::NotIntegrable { residuals, .. } => {
            let valuation = residuals.iter().map(Form::valuation).min().unwrap_or(lift.level());
            Ok(LiftOutcome::Obstruction { generators, residuals, valuation })
        }
    }
}

/// Bott vanishing at level `n`, with the lifted Bott connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C4Certificate {
    pub level: u32,
    pub certificate: BottCertificate,
}

pub fn verify_c4(ss: &SStructure, phi: &InvariantPolynomial) -> Result<C4Certificate> {
    let phi = if phi.ring() == ss.lift.lifted.ring() { phi.clone() } else { phi.change_ring(ss.lift.lifted.ring()) };
    let bott = Connection::new(ss.lifted.bott_connection()?.connection)?;
    let certificate = verify_bott_vanishing(&bott, &ss.lifted, &phi)?;
    Ok(C4Certificate { level: ss.lift.level(), certificate })
}

fn reduce_level(lvl: &FiltrationLevel, target: &Arc<Algebra>) -> FiltrationLevel {
    let decomposition: Vec<(Vec<usize>, Form)> = lvl
        .decomposition
        .iter()
        .map(|(s, eta)| (s.clone(), eta.change_ring(target)))
        .filter(|(_, eta)| !eta.is_zero())
        .collect();
    let level = decomposition.iter().map(|(s, _)| s.len()).min();
    FiltrationLevel { level, decomposition }
}

impl C4Certificate {
    /// The certificate read mod `p`: forms reduced, vanishing terms dropped
    /// and levels recomputed.
    pub fn reduce(&self, target: &Arc<Algebra>) -> BottCertificate {
        let c = &self.certificate;
        let chern_levels: Vec<(usize, Form, FiltrationLevel)> = c
            .chern_levels
            .iter()
            .map(|(i, f, lvl)| (*i, f.change_ring(target), reduce_level(lvl, target)))
            .collect();
        let monomial_bounds = c
            .monomial_bounds
            .iter()
            .map(|(e, _)| {
                let b = e.iter().enumerate().map(|(i, &x)| chern_levels[i].2.level.unwrap_or(c.weight) * x as usize).sum();
                (e.clone(), b)
            })
            .collect();
        BottCertificate {
            weight: c.weight,
            codimension: c.codimension,
            chern_levels,
            monomial_bounds,
            phi_form: c.phi_form.change_ring(target),
        }
    }
}

/// Residue at level `n`: `ss` is an S-structure on `U = X_h` and `global`
/// a connection on the lift of `X`.
pub fn crystalline_residue(
    x: &Lift,
    h: &Poly,
    ss: &SStructure,
    global: &Connection,
    phi: &InvariantPolynomial,
) -> Result<ResidueClass> {
    let lifted_h = h.change_ring(x.lifted.ring());
    residue(&x.lifted, &lifted_h, &ss.lifted, global, phi, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Presentation;

    fn fp(p: u64, vars: &[&str], h: Option<Vec<(Vec<u32>, i64)>>) -> Arc<Algebra> {
        Algebra::new(&Presentation { p, n: 1, vars: vars.iter().map(|s| s.to_string()).collect(), inverted: h }).unwrap()
    }

    #[test]
    fn lifts() {
        let l = lift_presentation(&fp(5, &["x", "y"], None), 2).unwrap();
        assert_eq!(l.lifted().to_string(), "Z/5^2[x,y]");
        let l = lift_presentation(&fp(5, &["x"], Some(vec![(vec![1], 1), (vec![0], 3)])), 3).unwrap();
        assert_eq!(l.lifted().to_string(), "Z/5^3[x][1/(x + 3)]");
        assert!(lift_presentation(l.lifted(), 4).is_err());
    }

    #[test]
    fn cohomology_of_the_lifted_line() {
        let l = lift_presentation(&fp(5, &["x"], None), 2).unwrap();
        let h0 = crystalline_cohomology(&l, 0, 5).unwrap();
        assert_eq!((h0.free_rank(), h0.torsion()), (1, vec![1]));
        let h1 = crystalline_cohomology(&l, 1, 5).unwrap();
        assert_eq!(h1.torsion(), vec![1]);
        assert_eq!(h1.representatives[0].to_string(), "x^4*dx");
        assert!(crystalline_cohomology(&l, 2, 5).unwrap().decomposition.is_zero());
        assert!(l.reduction_commutes(4).unwrap());
    }

    #[test]
    fn verbatim_and_obstructed_lifts() {
        let b = fp(7, &["x", "y"], Some(vec![(vec![1, 0], 1)]));
        let f = check_integrability(&b, &[Form::parse(&b, "x*dy - 2*y*dx").unwrap()], None)
            .unwrap()
            .integrable()
            .unwrap();
        let l = lift_presentation(&b, 2).unwrap();
        let LiftOutcome::Lifted(ss) = lift_foliation(&f, &l, None).unwrap() else { panic!("no lift") };
        // -2 lifts verbatim to 5, so dω̃ = -4 dx∧dy.
        assert_eq!(ss.lifted.witness().get(0, 0), &Form::parse(l.lifted(), "-4*x^-1*dx").unwrap());
        let w = Form::parse(l.lifted(), "x*dy - 2*y*dx").unwrap();
        let LiftOutcome::Lifted(ss) = lift_foliation(&f, &l, Some(&[w])).unwrap() else { panic!("no lift") };
        assert_eq!(ss.lifted.witness().get(0, 0), &Form::parse(l.lifted(), "3*x^-1*dx").unwrap());

        let b3 = fp(7, &["x", "y", "z"], None);
        let f3 = check_integrability(&b3, &[Form::parse(&b3, "dz").unwrap()], None).unwrap().integrable().unwrap();
        let l3 = lift_presentation(&b3, 2).unwrap();
        let bad = Form::parse(l3.lifted(), "dz + 7*y*dx").unwrap();
        match lift_foliation(&f3, &l3, Some(&[bad])).unwrap() {
            LiftOutcome::Obstruction { valuation, residuals, .. } => {
                assert_eq!(valuation, 1);
                assert_eq!(residuals[0], Form::parse(l3.lifted(), "-7*dx*dy").unwrap());
            }
            LiftOutcome::Lifted(_) => panic!("perturbed lift accepted"),
        }
        let wrong = Form::parse(l3.lifted(), "dz + y*dx").unwrap();
        assert!(matches!(lift_foliation(&f3, &l3, Some(&[wrong])), Err(Error::WrongReduction(_))));
    }

    #[test]
    fn c4_reduces_to_c2() {
        let b = fp(7, &["x", "y"], Some(vec![(vec![1, 0], 1)]));
        let f = check_integrability(&b, &[Form::parse(&b, "x*dy - 2*y*dx").unwrap()], None)
            .unwrap()
            .integrable()
            .unwrap();
        let l = lift_presentation(&b, 2).unwrap();
        let LiftOutcome::Lifted(ss) = lift_foliation(&f, &l, None).unwrap() else { panic!("no lift") };
        let sq = InvariantPolynomial::parse(b.ring(), "X1^2").unwrap();
        let c4 = verify_c4(&ss, &sq).unwrap();
        let bott = Connection::new(f.bott_connection().unwrap().connection).unwrap();
        assert_eq!(c4.reduce(&b), verify_bott_vanishing(&bott, &f, &sq).unwrap());
        let x1 = InvariantPolynomial::parse(b.ring(), "X1").unwrap();
        assert!(matches!(verify_c4(&ss, &x1), Err(Error::HypothesisUnmet(_))));
    }
}
