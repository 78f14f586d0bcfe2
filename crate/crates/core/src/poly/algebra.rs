use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::poly::{Monomial, Poly};
use crate::zmod::Ring;

/// Raw, unchecked description of a framed algebra `Z/p^n[x_1..x_v][1/h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub p: u64,
    pub n: u32,
    pub vars: Vec<String>,
    /// Integer-coefficient terms of `h`, if a localization is requested.
    pub inverted: Option<Vec<(Vec<u32>, i64)>>,
}

/// Witness that a presentation satisfies the framing hypotheses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationCertificate {
    pub ring: Ring,
    pub monomial_order: &'static str,
    /// Leading monomial and (unit) leading coefficient of `h`.
    pub leading_term: Option<(Vec<u32>, u64)>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

/// Checks the hypotheses that make `Ω^1` free on the coordinate frame and
/// fractions well defined: odd prime characteristic, well-formed variables,
/// and `h` with a unit graded-lex leading coefficient.
pub fn check_presentation(p: &Presentation) -> Result<PresentationCertificate> {
    let ring = Ring::new(p.p, p.n).map_err(|e| Error::InvalidPresentation(e.to_string()))?;
    for (i, v) in p.vars.iter().enumerate() {
        if !valid_name(v) {
            return Err(Error::InvalidPresentation(format!("variable name {v:?} must match [a-z][a-z0-9]*")));
        }
        if p.vars[..i].contains(v) {
            return Err(Error::InvalidPresentation(format!("variable {v} declared twice")));
        }
    }
    for v in &p.vars {
        if let Some(rest) = v.strip_prefix('d') {
            if p.vars.iter().any(|w| w == rest) {
                return Err(Error::InvalidPresentation(format!(
                    "variable {v} collides with the differential of {rest}"
                )));
            }
        }
    }
    if p.vars.len() > 60 {
        return Err(Error::InvalidPresentation("at most 60 variables are supported".into()));
    }
    let leading_term = match &p.inverted {
        None => None,
        Some(terms) => {
            let h = poly_from_int_terms(ring, p.vars.len(), terms)?;
            let Some((m, c)) = h.leading() else {
                return Err(Error::InvalidPresentation("cannot invert the zero polynomial".into()));
            };
            if !ring.is_unit(c) {
                return Err(Error::InvalidPresentation(format!(
                    "leading coefficient {} of h is not a unit in {ring}",
                    ring.signed(c)
                )));
            }
            Some((m.0.clone(), c))
        }
    };
    Ok(PresentationCertificate { ring, monomial_order: "graded-lex", leading_term })
}

fn poly_from_int_terms(ring: Ring, nvars: usize, terms: &[(Vec<u32>, i64)]) -> Result<Poly> {
    let mut out = Poly::zero(ring, nvars);
    for (e, c) in terms {
        if e.len() != nvars {
            return Err(Error::InvalidPresentation("exponent vector length mismatch".into()));
        }
        out = &out + &Poly::monomial(ring, Monomial(e.clone()), ring.from_i64(*c));
    }
    Ok(out)
}

/// A certified framed algebra `A = Z/p^n[x_1..x_v][1/h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    ring: Ring,
    vars: Vec<String>,
    h: Option<Poly>,
    certificate: PresentationCertificate,
}

impl Algebra {
    pub fn new(presentation: &Presentation) -> Result<Arc<Algebra>> {
        let certificate = check_presentation(presentation)?;
        let ring = certificate.ring;
        let h = match &presentation.inverted {
            None => None,
            Some(terms) => Some(poly_from_int_terms(ring, presentation.vars.len(), terms)?),
        };
        Ok(Arc::new(Algebra { ring, vars: presentation.vars.clone(), h, certificate }))
    }

    /// Polynomial ring over `ring` in the given variables.
    pub fn polynomial(ring: Ring, vars: &[&str]) -> Result<Arc<Algebra>> {
        Algebra::new(&Presentation {
            p: ring.p(),
            n: ring.n(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            inverted: None,
        })
    }

    /// Localization of `self` at an additional polynomial `extra`; the new
    /// inverted element is `h * extra`.
    pub fn localize(&self, extra: &Poly) -> Result<Arc<Algebra>> {
        let h = match &self.h {
            None => extra.clone(),
            Some(h) => h * extra,
        };
        Algebra::with_h(self.ring, &self.vars, Some(h))
    }

    pub fn with_h(ring: Ring, vars: &[String], h: Option<Poly>) -> Result<Arc<Algebra>> {
        let inverted = h.as_ref().map(|h| {
            h.terms().map(|(m, c)| (m.0.clone(), ring.signed(c))).collect::<Vec<_>>()
        });
        Algebra::new(&Presentation { p: ring.p(), n: ring.n(), vars: vars.to_vec(), inverted })
    }

    /// Same variables and `h` over `Z/p^k`: reduction for `k < n`,
    /// coefficient-wise lift for `k > n`.
    pub fn change_ring(&self, k: u32) -> Result<Arc<Algebra>> {
        let target = self.ring.with_exponent(k)?;
        Algebra::with_h(target, &self.vars, self.h.as_ref().map(|h| h.change_ring(target)))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn certificate(&self) -> &PresentationCertificate {
        &self.certificate
    }

    /// The inverted polynomial, if any.
    pub fn h(&self) -> Option<&Poly> {
        self.h.as_ref()
    }

    /// `h`, or `1` when nothing is inverted.
    pub fn h_or_one(&self) -> Poly {
        self.h.clone().unwrap_or_else(|| Poly::one(self.ring, self.nvars()))
    }

    /// Exponent vector `a` when `h = c * x^a` for a unit `c` (including the
    /// unlocalized case, `a = 0`).
    pub fn monomial_h(&self) -> Option<Vec<u32>> {
        match &self.h {
            None => Some(vec![0; self.nvars()]),
            Some(h) if h.num_terms() == 1 => {
                let (m, c) = h.terms().next().unwrap();
                self.ring.is_unit(c).then(|| m.0.clone())
            }
            Some(_) => None,
        }
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Algebra>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.ring, self.vars.join(","))?;
        if let Some(h) = &self.h {
            write!(f, "[1/({})]", crate::poly::display_poly(h, &self.vars))?;
        }
        Ok(())
    }
}
