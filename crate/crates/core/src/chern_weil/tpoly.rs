use std::sync::Arc;

use crate::derham::Form;
use crate::error::{Error, Result};
use crate::poly::{Algebra, LocalizedPoly};

/// A polynomial in an auxiliary parameter `t` with homogeneous form
/// coefficients, `Σ_k t^k F_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TPoly {
    alg: Arc<Algebra>,
    degree: usize,
    coeffs: Vec<Form>,
}

impl TPoly {
    pub fn zero(alg: &Arc<Algebra>, degree: usize) -> TPoly {
        TPoly { alg: alg.clone(), degree, coeffs: Vec::new() }
    }

    pub fn constant(f: &Form) -> TPoly {
        TPoly::from_coeffs(f.algebra(), f.degree(), vec![f.clone()])
    }

    pub fn one(alg: &Arc<Algebra>) -> TPoly {
        TPoly::constant(&Form::function(LocalizedPoly::one(alg)))
    }

    pub fn from_coeffs(alg: &Arc<Algebra>, degree: usize, coeffs: Vec<Form>) -> TPoly {
        let mut out = TPoly { alg: alg.clone(), degree, coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Form::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        TPoly::from_coeffs(&self.alg, self.degree, coeffs)
    }

    pub fn neg(&self) -> TPoly {
        TPoly::from_coeffs(&self.alg, self.degree, self.coeffs.iter().map(|f| -f).collect())
    }

    pub fn scale_int(&self, c: u64) -> TPoly {
        let c = LocalizedPoly::constant(&self.alg, self.alg.ring().from_u64(c));
        TPoly::from_coeffs(&self.alg, self.degree, self.coeffs.iter().map(|f| f.scale(&c)).collect())
    }

    pub fn wedge(&self, other: &TPoly) -> TPoly {
        let degree = self.degree + other.degree;
        if self.is_zero() || other.is_zero() {
            return TPoly::zero(&self.alg, degree);
        }
        let mut coeffs = vec![Form::zero(&self.alg, degree); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &a.wedge(b);
            }
        }
        TPoly::from_coeffs(&self.alg, degree, coeffs)
    }

    /// Value at `t = 0` (or the only coefficient of a constant).
    pub fn at_zero(&self) -> Form {
        self.coeffs.first().cloned().unwrap_or_else(|| Form::zero(&self.alg, self.degree))
    }

    /// `∫_0^1 Σ t^k F_k dt = Σ F_k / (k+1)`.
    pub fn integrate(&self) -> Result<Form> {
        let ring = self.alg.ring();
        let mut acc = Form::zero(&self.alg, self.degree);
        for (k, f) in self.coeffs.iter().enumerate() {
            let inv = ring.inv(ring.from_u64(k as u64 + 1)).ok_or(Error::SmallCharacteristic {
                p: ring.p(),
                q: (k + 2) / 2,
            })?;
            acc = &acc + &f.scale(&LocalizedPoly::constant(&self.alg, inv));
        }
        Ok(acc)
    }
}

/// Determinant of a square matrix of even-degree entries (which commute), by
/// Laplace expansion along the first row.
pub(crate) fn determinant(m: &[Vec<TPoly>], alg: &Arc<Algebra>) -> TPoly {
    match m.len() {
        0 => TPoly::one(alg),
        1 => m[0][0].clone(),
        k => {
            let mut acc: Option<TPoly> = None;
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let term = m[0][c].wedge(&determinant(&minor(m, 0, c), alg));
                let term = if c % 2 == 0 { term } else { term.neg() };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            acc.unwrap_or_else(|| TPoly::zero(alg, m[0][0].degree * k))
        }
    }
}

pub(crate) fn minor(m: &[Vec<TPoly>], row: usize, col: usize) -> Vec<Vec<TPoly>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// The principal submatrix on the index set `s`.
pub(crate) fn principal(m: &[Vec<TPoly>], s: &[usize]) -> Vec<Vec<TPoly>> {
    s.iter().map(|&i| s.iter().map(|&j| m[i][j].clone()).collect()).collect()
}
