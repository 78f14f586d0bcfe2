use std::sync::Arc;

use crate::chern_weil::invariant::InvariantPolynomial;
use crate::chern_weil::tpoly::{determinant, minor, principal, TPoly};
use crate::derham::{Form, FormMatrix, FrameSet};
use crate::error::{Error, Result};
use crate::poly::Algebra;

/// The connection `d + A` on a free module of rank `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    matrix: FormMatrix,
}

/// A Chern form `c_i` with its closedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernForm {
    pub index: usize,
    pub form: Form,
    pub closed: bool,
}

impl Connection {
    pub fn new(matrix: FormMatrix) -> Result<Connection> {
        if matrix.degree() != 1 {
            return Err(Error::ShapeMismatch("connection matrices hold 1-forms".into()));
        }
        Ok(Connection { matrix })
    }

    pub fn from_entries(alg: &Arc<Algebra>, entries: Vec<Vec<Form>>) -> Result<Connection> {
        Connection::new(FormMatrix::from_entries(alg, 1, entries)?)
    }

    /// The trivial connection `d` on the free module of rank `m`.
    pub fn trivial(alg: &Arc<Algebra>, m: usize) -> Connection {
        Connection { matrix: FormMatrix::zero(alg, m, 1) }
    }

    pub fn rank(&self) -> usize {
        self.matrix.size()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.matrix.algebra()
    }

    pub fn matrix(&self) -> &FormMatrix {
        &self.matrix
    }

    /// `K = dA + A∧A`, with the Bianchi identity `dK = K∧A - A∧K` checked exactly.
    pub fn curvature(&self) -> Result<FormMatrix> {
        let a = &self.matrix;
        let k = a.d().add(&a.wedge(a));
        let bianchi = k.d().sub(&k.wedge(a).sub(&a.wedge(&k)));
        if !bianchi.is_zero() {
            return Err(Error::InternalConsistency("Bianchi identity fails".into()));
        }
        Ok(k)
    }

    pub fn restrict(&self, target: &Arc<Algebra>) -> Result<Connection> {
        let rows = self
            .matrix
            .rows()
            .iter()
            .map(|r| r.iter().map(|f| f.restrict(target)).collect())
            .collect::<Result<Vec<Vec<Form>>>>()?;
        Connection::from_entries(target, rows)
    }

    pub fn change_ring(&self, target: &Arc<Algebra>) -> Result<Connection> {
        let rows = self.matrix.rows().iter().map(|r| r.iter().map(|f| f.change_ring(target)).collect()).collect();
        Connection::from_entries(target, rows)
    }

    /// `c_i`: the coefficient of degree `2i` in `det(Id + K)`.
    pub fn chern_form(&self, i: usize) -> Result<ChernForm> {
        let k = self.curvature()?;
        let kt = constant_matrix(&k);
        let form = chern_tpoly(&kt, i, self.algebra()).at_zero();
        let form = if form.is_zero() { Form::zero(self.algebra(), 2 * i) } else { form };
        let closed = form.d().is_zero();
        if !closed {
            return Err(Error::InternalConsistency(format!("c_{i} is not closed")));
        }
        Ok(ChernForm { index: i, form, closed })
    }

    /// `φ(c_1, .., c_m)` as a `2q`-form.
    pub fn phi_form(&self, phi: &InvariantPolynomial) -> Result<Form> {
        if phi.ring() != self.algebra().ring() {
            return Err(Error::PresentationMismatch);
        }
        let k = self.curvature()?;
        let kt = constant_matrix(&k);
        let out = phi_tpoly(phi, &kt, self.algebra()).at_zero();
        Ok(if out.is_zero() { Form::zero(self.algebra(), 2 * phi.weight()) } else { out })
    }
}

fn constant_matrix(k: &FormMatrix) -> Vec<Vec<TPoly>> {
    k.rows().iter().map(|r| r.iter().map(TPoly::constant).collect()).collect()
}

/// `c_i(K) = Σ_{|S| = i} det K_S`.
pub(crate) fn chern_tpoly(k: &[Vec<TPoly>], i: usize, alg: &Arc<Algebra>) -> TPoly {
    if i == 0 {
        return TPoly::one(alg);
    }
    let m = k.len();
    let mut acc = TPoly::zero(alg, 2 * i);
    if i > m {
        return acc;
    }
    for s in FrameSet::subsets(m, i) {
        let idx: Vec<usize> = s.indices().collect();
        acc = acc.add(&determinant(&principal(k, &idx), alg));
    }
    acc
}

fn eval_monomial(e: &[u32], c: u64, chern: &[TPoly], alg: &Arc<Algebra>) -> TPoly {
    let mut acc = TPoly::one(alg);
    for (i, &x) in e.iter().enumerate() {
        for _ in 0..x {
            acc = acc.wedge(&chern[i]);
        }
    }
    acc.scale_int(c)
}

pub(crate) fn phi_tpoly(phi: &InvariantPolynomial, k: &[Vec<TPoly>], alg: &Arc<Algebra>) -> TPoly {
    let chern: Vec<TPoly> = (1..=phi.num_vars()).map(|i| chern_tpoly(k, i, alg)).collect();
    let mut acc = TPoly::zero(alg, 2 * phi.weight());
    for (e, c) in phi.terms() {
        acc = acc.add(&eval_monomial(e, c, &chern, alg));
    }
    acc
}

/// Chern-Simons form `T` with `dT = φ(∇_1) - φ(∇_0)`:
/// `T = ∫_0^1 Σ_k ∂φ/∂X_k(c(K_t)) ∧ Σ_{|S|=k} Σ_{a,b∈S} θ_ab ∧ adj(K_t,S)_ba dt`
/// along `A_t = A_0 + tθ`, `θ = A_1 - A_0`.
pub fn transgression(c0: &Connection, c1: &Connection, phi: &InvariantPolynomial) -> Result<Form> {
    if c0.rank() != c1.rank() {
        return Err(Error::ShapeMismatch("connections of different ranks".into()));
    }
    if !c0.algebra().same_as(c1.algebra()) {
        return Err(Error::PresentationMismatch);
    }
    let alg = c0.algebra();
    let ring = alg.ring();
    let q = phi.weight();
    if q == 0 {
        return Err(Error::Usage("constant φ has no transgression".into()));
    }
    if ring.p() <= 2 * q as u64 {
        return Err(Error::SmallCharacteristic { p: ring.p(), q });
    }
    let m = c0.rank();
    let a0 = c0.matrix();
    let theta = c1.matrix().sub(a0);
    let k0 = c0.curvature()?;
    let lin = theta.d().add(&a0.wedge(&theta)).add(&theta.wedge(a0));
    let quad = theta.wedge(&theta);
    let kt: Vec<Vec<TPoly>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    TPoly::from_coeffs(alg, 2, vec![k0.get(i, j).clone(), lin.get(i, j).clone(), quad.get(i, j).clone()])
                })
                .collect()
        })
        .collect();
    let chern: Vec<TPoly> = (1..=phi.num_vars()).map(|i| chern_tpoly(&kt, i, alg)).collect();
    let mut integrand = TPoly::zero(alg, 2 * q - 1);
    for k in 1..=phi.num_vars().min(m) {
        let dphi = phi.derivative(k);
        if dphi.is_empty() {
            continue;
        }
        let mut coeff = TPoly::zero(alg, 2 * (q - k));
        for (e, c) in &dphi {
            coeff = coeff.add(&eval_monomial(e, *c, &chern, alg));
        }
        // Directional derivative of c_k at K_t along θ.
        let mut direction = TPoly::zero(alg, 2 * k - 1);
        for s in FrameSet::subsets(m, k) {
            let idx: Vec<usize> = s.indices().collect();
            let ks = principal(&kt, &idx);
            for (a, &ia) in idx.iter().enumerate() {
                for (b, &ib) in idx.iter().enumerate() {
                    let th = theta.get(ia, ib);
                    if th.is_zero() {
                        continue;
                    }
                    // adj(K_S)_{ba} = (-1)^{a+b} det(K_S without row a, column b)
                    let cof = determinant(&minor(&ks, a, b), alg);
                    let cof = if (a + b) % 2 == 0 { cof } else { cof.neg() };
                    direction = direction.add(&TPoly::constant(th).wedge(&cof));
                }
            }
        }
        integrand = integrand.add(&coeff.wedge(&direction));
    }
    let t = integrand.integrate()?;
    let t = if t.is_zero() { Form::zero(alg, 2 * q - 1) } else { t };
    let delta = &c1.phi_form(phi)? - &c0.phi_form(phi)?;
    if t.d() != delta {
        return Err(Error::InternalConsistency("dT differs from φ(∇1) - φ(∇0)".into()));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::Ring;

    fn space(p: u64, vars: &[&str]) -> Arc<Algebra> {
        Algebra::polynomial(Ring::new(p, 1).unwrap(), vars).unwrap()
    }

    fn conn(a: &Arc<Algebra>, rows: &[&[&str]]) -> Connection {
        Connection::from_entries(a, rows.iter().map(|r| r.iter().map(|s| Form::parse(a, s).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn curvature_examples() {
        let a = space(7, &["x", "y"]);
        assert!(Connection::trivial(&a, 2).curvature().unwrap().is_zero());
        assert_eq!(conn(&a, &[&["y*dx"]]).curvature().unwrap().get(0, 0), &Form::parse(&a, "-dx*dy").unwrap());
        assert!(conn(&a, &[&["x*dx"]]).curvature().unwrap().is_zero());
    }

    #[test]
    fn chern_examples() {
        let a = space(7, &["x", "y"]);
        let c = conn(&a, &[&["y*dx", "0"], &["0", "0"]]);
        assert_eq!(c.chern_form(1).unwrap().form, Form::parse(&a, "-dx*dy").unwrap());
        assert!(c.chern_form(2).unwrap().form.is_zero());
        let r = Ring::new(7, 1).unwrap();
        let sq = InvariantPolynomial::parse(r, "X1^2").unwrap();
        assert!(conn(&a, &[&["y*dx"]]).phi_form(&sq).unwrap().is_zero());
        let a4 = space(7, &["x", "y", "z", "w"]);
        assert!(conn(&a4, &[&["z*dw"]]).phi_form(&sq).unwrap().is_zero());
        assert_eq!(
            conn(&a4, &[&["z*dw + x*dy"]]).phi_form(&sq).unwrap(),
            Form::parse(&a4, "2*dz*dw*dx*dy").unwrap()
        );
    }

    #[test]
    fn transgression_examples() {
        let a = space(11, &["x", "y", "z", "w"]);
        let r = Ring::new(11, 1).unwrap();
        let x1 = InvariantPolynomial::parse(r, "X1").unwrap();
        let sq = InvariantPolynomial::parse(r, "X1^2").unwrap();
        let c0 = conn(&a, &[&["y*dx"]]);
        let c1 = conn(&a, &[&["z*dw + x*dy"]]);
        assert!(transgression(&c0, &c0, &sq).unwrap().is_zero());
        assert_eq!(transgression(&c0, &c1, &x1).unwrap(), Form::parse(&a, "z*dw + x*dy - y*dx").unwrap());
        let t = transgression(&c0, &c1, &sq).unwrap();
        assert_eq!(t.d(), &c1.phi_form(&sq).unwrap() - &c0.phi_form(&sq).unwrap());
        let two = conn(&a, &[&["y*dx", "z*dw"], &["x*dz", "w*dy"]]);
        let c2 = InvariantPolynomial::parse(r, "X2").unwrap();
        let t = transgression(&Connection::trivial(&a, 2), &two, &c2).unwrap();
        assert_eq!(t.d(), two.phi_form(&c2).unwrap());
        let small = space(3, &["x", "y"]);
        let sq3 = InvariantPolynomial::parse(Ring::new(3, 1).unwrap(), "X1^2").unwrap();
        let z = Connection::trivial(&small, 1);
        assert_eq!(transgression(&z, &z, &sq3), Err(Error::SmallCharacteristic { p: 3, q: 2 }));
    }
}
