use std::fmt;
use std::sync::Arc;

use crate::derham::form::Form;
use crate::error::{Error, Result};
use crate::poly::Algebra;

/// Square matrix of homogeneous forms (connection and curvature matrices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    alg: Arc<Algebra>,
    degree: usize,
    entries: Vec<Vec<Form>>,
}

impl FormMatrix {
    pub fn zero(alg: &Arc<Algebra>, size: usize, degree: usize) -> FormMatrix {
        FormMatrix { alg: alg.clone(), degree, entries: vec![vec![Form::zero(alg, degree); size]; size] }
    }

    pub fn from_entries(alg: &Arc<Algebra>, degree: usize, entries: Vec<Vec<Form>>) -> Result<FormMatrix> {
        let m = entries.len();
        for row in &entries {
            if row.len() != m {
                return Err(Error::ShapeMismatch("form matrix must be square".into()));
            }
            for f in row {
                if !f.algebra().same_as(alg) {
                    return Err(Error::PresentationMismatch);
                }
                if !f.is_zero() && f.degree() != degree {
                    return Err(Error::ShapeMismatch(format!("entry {f} is not a {degree}-form")));
                }
            }
        }
        let entries = entries
            .into_iter()
            .map(|row| row.into_iter().map(|f| if f.is_zero() { Form::zero(alg, degree) } else { f }).collect())
            .collect();
        Ok(FormMatrix { alg: alg.clone(), degree, entries })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        self.entries[i][j] = f;
    }

    pub fn rows(&self) -> &[Vec<Form>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Form::is_zero)
    }

    pub fn transpose(&self) -> FormMatrix {
        let m = self.size();
        let entries = (0..m).map(|i| (0..m).map(|j| self.entries[j][i].clone()).collect()).collect();
        FormMatrix { alg: self.alg.clone(), degree: self.degree, entries }
    }

    pub fn map(&self, degree: usize, f: impl Fn(&Form) -> Form) -> FormMatrix {
        let entries = self.entries.iter().map(|row| row.iter().map(&f).collect()).collect();
        FormMatrix { alg: self.alg.clone(), degree, entries }
    }

    pub fn d(&self) -> FormMatrix {
        self.map(self.degree + 1, Form::d)
    }

    pub fn add(&self, other: &FormMatrix) -> FormMatrix {
        let m = self.size();
        let entries =
            (0..m).map(|i| (0..m).map(|j| &self.entries[i][j] + &other.entries[i][j]).collect()).collect();
        FormMatrix { alg: self.alg.clone(), degree: self.degree.max(other.degree), entries }
    }

    pub fn sub(&self, other: &FormMatrix) -> FormMatrix {
        self.add(&other.map(other.degree, |f| -f))
    }

    /// Matrix product with entries multiplied by the wedge.
    pub fn wedge(&self, other: &FormMatrix) -> FormMatrix {
        let m = self.size();
        let degree = self.degree + other.degree;
        let mut out = FormMatrix::zero(&self.alg, m, degree);
        for i in 0..m {
            for j in 0..m {
                let mut acc = Form::zero(&self.alg, degree);
                for k in 0..m {
                    acc = &acc + &self.entries[i][k].wedge(&other.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> Form {
        let mut acc = Form::zero(&self.alg, self.degree);
        for i in 0..self.size() {
            acc = &acc + &self.entries[i][i];
        }
        acc
    }
}

impl fmt::Display for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|row| format!("[{}]", row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
