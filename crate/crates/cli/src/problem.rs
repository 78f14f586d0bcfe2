//! Problem files: a JSON document describing one task.

use std::sync::Arc;

use folcris_core::chern_weil::{Connection, InvariantPolynomial};
use folcris_core::derham::{Form, FormMatrix};
use folcris_core::poly::{parse_poly, Algebra, Poly};
use folcris_core::zmod::Ring;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "folcris-problem/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: String,
    pub ring: RingBlock,
    pub variety: VarietyBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub foliation: Option<FoliationBlock>,
    /// Connection matrix of 1-forms `A` (for `d + A`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<Vec<String>>>,
    /// Adapted connection on the open locus (residues only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adapted: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default)]
    pub task: TaskBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    pub p: u64,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyBlock {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invert: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationBlock {
    pub generators: Vec<String>,
    /// Variables whose differentials the generators can replace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<u32>,
    /// `h` of the open locus `U = X_h` (residues).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open: Option<String>,
    /// Level `n` of the lift to `Z/p^n` (crystalline commands).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    /// Chern index for `t1-check` (all indices when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    /// Proposed lifted generators (crystalline commands).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<Vec<String>>,
}

impl ProblemFile {
    pub fn from_json(src: &str) -> Result<ProblemFile, CliError> {
        let p: ProblemFile = serde_json::from_str(src)
            .map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if p.schema != SCHEMA {
            return Err(CliError::Input(format!("schema: expected \"{SCHEMA}\", got \"{}\"", p.schema)));
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn ring(&self) -> Result<Ring, CliError> {
        Ring::new(self.ring.p, self.ring.n).map_err(|e| at("ring", e))
    }

    /// `X`, with its optional inverted element.
    pub fn variety(&self) -> Result<Arc<Algebra>, CliError> {
        let ring = self.ring()?;
        let h = self.variety.invert.as_deref().map(|s| poly(ring, &self.variety.vars, s, "variety.invert")).transpose()?;
        Algebra::with_h(ring, &self.variety.vars, h).map_err(|e| at("variety", e))
    }

    pub fn open_element(&self, ring: Ring) -> Result<Poly, CliError> {
        let src = self.task.open.as_deref().ok_or_else(|| CliError::Input("task.open: required for this command".into()))?;
        poly(ring, &self.variety.vars, src, "task.open")
    }

    pub fn foliation_block(&self) -> Result<&FoliationBlock, CliError> {
        self.foliation.as_ref().ok_or_else(|| CliError::Input("foliation: required for this command".into()))
    }

    pub fn phi(&self, ring: Ring) -> Result<InvariantPolynomial, CliError> {
        let src = self.phi.as_deref().ok_or_else(|| CliError::Input("phi: required for this command".into()))?;
        InvariantPolynomial::parse(ring, src).map_err(|e| at("phi", e))
    }

    pub fn level(&self) -> Result<u32, CliError> {
        match self.task.level {
            Some(n) if n >= 1 => Ok(n),
            Some(_) => Err(CliError::Input("task.level: must be at least 1".into())),
            None => Err(CliError::Input("task.level: required for this command".into())),
        }
    }
}

/// Prefixes a core error with the offending field.
pub fn at(path: &str, e: folcris_core::Error) -> CliError {
    CliError::Input(format!("{path}: {e}"))
}

fn poly(ring: Ring, vars: &[String], src: &str, path: &str) -> Result<Poly, CliError> {
    parse_poly(ring, vars, src).map_err(|e| at(path, e))
}

pub fn form(alg: &Arc<Algebra>, src: &str, path: &str) -> Result<Form, CliError> {
    Form::parse(alg, src).map_err(|e| at(path, e))
}

/// Parses a form of a known degree; a printed `0` takes that degree.
pub fn form_of_degree(alg: &Arc<Algebra>, src: &str, degree: usize, path: &str) -> Result<Form, CliError> {
    let f = form(alg, src, path)?;
    if f.is_zero() {
        return Ok(Form::zero(alg, degree));
    }
    if f.degree() != degree {
        return Err(CliError::Input(format!("{path}: expected a {degree}-form, got {f}")));
    }
    Ok(f)
}

pub fn forms(alg: &Arc<Algebra>, srcs: &[String], path: &str) -> Result<Vec<Form>, CliError> {
    srcs.iter().enumerate().map(|(i, s)| form(alg, s, &format!("{path}[{i}]"))).collect()
}

pub fn form_matrix(alg: &Arc<Algebra>, rows: &[Vec<String>], degree: usize, path: &str) -> Result<FormMatrix, CliError> {
    let entries = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, f)| form_of_degree(alg, f, degree, &format!("{path}[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    FormMatrix::from_entries(alg, degree, entries).map_err(|e| at(path, e))
}

pub fn connection(alg: &Arc<Algebra>, rows: &[Vec<String>], path: &str) -> Result<Connection, CliError> {
    Connection::new(form_matrix(alg, rows, 1, path)?).map_err(|e| at(path, e))
}

pub fn var_indices(alg: &Algebra, names: &[String], path: &str) -> Result<Vec<usize>, CliError> {
    names
        .iter()
        .map(|n| alg.var_index(n).ok_or_else(|| CliError::Input(format!("{path}: unknown variable {n}"))))
        .collect()
}
