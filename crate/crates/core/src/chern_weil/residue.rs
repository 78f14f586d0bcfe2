use std::sync::Arc;

use crate::chern_weil::{transgression, verify_bott_vanishing, BottCertificate, Connection, InvariantPolynomial};
use crate::derham::{is_fiber_cocycle, Form, SupportedComplex};
use crate::error::{Error, Result};
use crate::foliation::Distribution;
use crate::linalg::solve;
use crate::poly::{Algebra, Poly};

/// A fiber cocycle `(a, b)` of degree `2q` for restriction `C(X) -> C(U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    pub degree: usize,
    /// `φ(∇_global)` on `X`.
    pub a: Form,
    /// Transgression from the adapted connection to `∇_global|_U`.
    pub b: Form,
    pub phi: InvariantPolynomial,
    pub adapted: Connection,
    pub global: Connection,
    pub vanishing: BottCertificate,
}

impl ResidueClass {
    pub fn base(&self) -> &Arc<Algebra> {
        self.a.algebra()
    }

    pub fn open(&self) -> &Arc<Algebra> {
        self.b.algebra()
    }

    /// `da = 0` and `a|_U = db`, by exact form arithmetic.
    pub fn is_fiber_closed(&self) -> Result<bool> {
        is_fiber_cocycle(&self.a, &self.b, self.open())
    }

    /// Componentwise difference, itself a fiber cocycle.
    pub fn difference(&self, other: &ResidueClass) -> Result<(Form, Form)> {
        Ok((self.a.try_add(&-&other.a)?, self.b.try_add(&-&other.b)?))
    }

    /// A fiber primitive `(c, e)` with `dc = a` and `c|_U - de = b`, if one
    /// exists in the given truncation.
    pub fn primitive_in(&self, complex: &SupportedComplex) -> Result<Option<(Form, Form)>> {
        fiber_primitive(complex, self.degree, &self.a, &self.b)
    }
}

/// Solves for a fiber primitive of `(a, b)` in degree `j` of a truncation.
pub fn fiber_primitive(complex: &SupportedComplex, j: usize, a: &Form, b: &Form) -> Result<Option<(Form, Form)>> {
    if j == 0 {
        return Ok(None);
    }
    let target = complex.coordinates(j, a, b)?;
    match solve(&complex.differential(j - 1), &target)? {
        Err(_) => Ok(None),
        Ok(y) => {
            let nx = complex.base().dim(j - 1);
            let c = complex.base().to_form(j - 1, &y[..nx]);
            let e = if j >= 2 {
                complex.open().to_form(j - 2, &y[nx..])
            } else {
                Form::zero(complex.open().algebra(), 0)
            };
            Ok(Some((c, e)))
        }
    }
}

fn check_open(x: &Arc<Algebra>, h: &Poly, u: &Arc<Algebra>) -> Result<()> {
    let expected = x.localize(h)?;
    if *expected != **u {
        return Err(Error::Usage(format!("the foliation lives on {u}, not on the localization {expected}")));
    }
    Ok(())
}

/// Residue of `φ` for a foliation on `U = X_h`: `a = φ(∇_global)`,
/// `b = T(∇_ad, ∇_global|_U)` where `φ(∇_ad) = 0` by Bott vanishing.
/// The adapted connection defaults to the Bott connection of `F_U`.
pub fn residue(
    x: &Arc<Algebra>,
    h: &Poly,
    foliation: &Distribution,
    global: &Connection,
    phi: &InvariantPolynomial,
    adapted: Option<&Connection>,
) -> Result<ResidueClass> {
    let u = foliation.algebra();
    check_open(x, h, u)?;
    if !global.algebra().same_as(x) {
        return Err(Error::PresentationMismatch);
    }
    let (q, d) = (phi.weight(), foliation.rank());
    if q <= d {
        return Err(Error::HypothesisUnmet(format!("φ has degree q = {q}, which does not exceed the codimension d = {d}")));
    }
    let p = x.ring().p();
    if p <= 2 * q as u64 {
        return Err(Error::SmallCharacteristic { p, q });
    }
    let adapted = match adapted {
        Some(c) => c.clone(),
        None => Connection::new(foliation.bott_connection()?.connection)?,
    };
    if adapted.rank() != global.rank() {
        return Err(Error::Usage(format!(
            "adapted connection has rank {} but the global one has rank {}",
            adapted.rank(),
            global.rank()
        )));
    }
    let vanishing = verify_bott_vanishing(&adapted, foliation, phi)?;
    let a = global.phi_form(phi)?;
    let b = transgression(&adapted, &global.restrict(u)?, phi)?;
    let class = ResidueClass { degree: 2 * q, a, b, phi: phi.clone(), adapted, global: global.clone(), vanishing };
    if !class.is_fiber_closed()? {
        return Err(Error::InternalConsistency("residue pair is not fiber-closed".into()));
    }
    Ok(class)
}
