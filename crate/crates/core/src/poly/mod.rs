//! Sparse polynomials over `Z/p^n`, framed algebras `Z/p^n[x][1/h]` and
//! their text syntax.

mod algebra;
mod localized;
pub mod parse;
#[allow(clippy::module_inception)]
mod poly;

use std::sync::Arc;

pub use algebra::{check_presentation, Algebra, Presentation, PresentationCertificate};
pub use localized::LocalizedPoly;
pub use poly::{Monomial, Poly};

use crate::error::{Error, Result};
use crate::zmod::Ring;
use parse::Evaluator;

/// `+`/`-` joined terms, highest first; `coeff` is the symmetric representative.
fn join_terms(terms: impl Iterator<Item = (i64, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let (neg, abs) = (c < 0, c.unsigned_abs());
        let body = match (abs, mono.is_empty()) {
            (_, true) => abs.to_string(),
            (1, false) => mono,
            (_, false) => format!("{abs}*{mono}"),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn monomial_text(exps: impl Iterator<Item = i64>, vars: &[String]) -> String {
    exps.zip(vars)
        .filter(|(e, _)| *e != 0)
        .map(|(e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn display_poly(p: &Poly, vars: &[String]) -> String {
    let ring = p.ring();
    join_terms(
        p.terms()
            .rev()
            .map(|(m, c)| (ring.signed(c), monomial_text(m.0.iter().map(|&e| e as i64), vars))),
    )
}

pub fn display_laurent(ring: Ring, terms: &[(Vec<i64>, u64)], vars: &[String]) -> String {
    let mut sorted: Vec<&(Vec<i64>, u64)> = terms.iter().collect();
    // Highest total degree first, then larger exponents first.
    sorted.sort_by(|a, b| {
        let (da, db): (i64, i64) = (a.0.iter().sum(), b.0.iter().sum());
        db.cmp(&da).then_with(|| b.0.cmp(&a.0))
    });
    join_terms(sorted.into_iter().map(|(e, c)| (ring.signed(*c), monomial_text(e.iter().copied(), vars))))
}

/// Evaluates polynomial syntax into elements of a framed algebra.
pub struct ElementParser<'a> {
    pub algebra: &'a Arc<Algebra>,
}

impl Evaluator for ElementParser<'_> {
    type Value = LocalizedPoly;

    fn int(&self, v: u64) -> Result<LocalizedPoly> {
        Ok(LocalizedPoly::constant(self.algebra, self.algebra.ring().from_u64(v)))
    }

    fn ident(&self, name: &str, pos: usize) -> Result<LocalizedPoly> {
        match self.algebra.var_index(name) {
            Some(i) => Ok(LocalizedPoly::var(self.algebra, i)),
            None => Err(Error::Parse { pos, message: format!("unknown variable {name}") }),
        }
    }

    fn add(&self, a: LocalizedPoly, b: LocalizedPoly, _pos: usize) -> Result<LocalizedPoly> {
        Ok(&a + &b)
    }

    fn mul(&self, a: LocalizedPoly, b: LocalizedPoly, _pos: usize) -> Result<LocalizedPoly> {
        Ok(&a * &b)
    }

    fn neg(&self, a: LocalizedPoly) -> Result<LocalizedPoly> {
        Ok(-&a)
    }

    fn pow(&self, a: LocalizedPoly, exp: i64, pos: usize) -> Result<LocalizedPoly> {
        let base = if exp < 0 {
            a.inverse().ok_or_else(|| Error::Parse {
                pos,
                message: format!("{a} is not invertible in {}", self.algebra),
            })?
        } else {
            a
        };
        Ok(base.pow(exp.unsigned_abs() as u32))
    }
}

pub fn parse_element(algebra: &Arc<Algebra>, src: &str) -> Result<LocalizedPoly> {
    ElementParser { algebra }.parse(src)
}

/// Parses a plain polynomial (no inversions) in the given variables.
pub fn parse_poly(ring: Ring, vars: &[String], src: &str) -> Result<Poly> {
    let alg = Algebra::with_h(ring, vars, None)?;
    let e = parse_element(&alg, src)?;
    Ok(e.numerator().clone())
}

/// `poly_arith` of the element API: exact sum or product of two elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

pub fn poly_arith(a: &LocalizedPoly, b: &LocalizedPoly, op: ArithOp) -> Result<LocalizedPoly> {
    if !a.algebra().same_as(b.algebra()) {
        return Err(Error::PresentationMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Mul => a * b,
    })
}
