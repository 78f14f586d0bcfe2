use crate::error::{Error, Result};
use crate::linalg::howell::howell_form;
use crate::linalg::matrix::Matrix;
use crate::linalg::smith::smith_form;
use crate::zmod::Ring;

/// Column generators of `{x : M x = 0}`.
///
/// Obtained from the Howell form of `[M^T | I]`: the rows whose left block
/// vanishes span exactly the pairs `(0, x)` with `M x = 0`.
pub fn kernel(m: &Matrix) -> Matrix {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let aug = m.transpose().hstack(&Matrix::identity(ring, cols)).expect("shapes agree");
    let hf = howell_form(&aug);
    let h = hf.matrix();
    let gens: Vec<Vec<u64>> = (0..hf.rank())
        .filter(|&i| (0..rows).all(|j| h.get(i, j) == 0))
        .map(|i| (0..cols).map(|j| h.get(i, rows + j)).collect())
        .collect();
    Matrix::from_columns(ring, cols, &gens)
}

/// Outcome of [`solve`] when `M x = b` has no solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoSolution {
    /// Canonical remainder of `b` modulo the column span of `M`; nonzero.
    pub residual: Vec<u64>,
}

/// Solves `M x = b`, deciding solvability through the Howell form of `M^T`.
pub fn solve(m: &Matrix, b: &[u64]) -> Result<std::result::Result<Vec<u64>, NoSolution>> {
    if b.len() != m.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side of length {} for a matrix with {} rows",
            b.len(),
            m.rows()
        )));
    }
    let ring = m.ring();
    let b: Vec<u64> = b.iter().map(|&x| ring.from_u64(x)).collect();
    let hf = howell_form(&m.transpose());
    let (residual, coeffs) = hf.reduce(&b);
    if residual.iter().any(|&x| x != 0) {
        return Ok(Err(NoSolution { residual }));
    }
    let full = hf.transform().transpose().mul_vec(&coeffs)?;
    Ok(Ok(full[..m.cols()].to_vec()))
}

/// One cyclic summand `Z/p^e` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    /// `e = n` for a free summand.
    pub exponent: u32,
    pub generator: Vec<u64>,
}

/// Invariant-factor decomposition of a finitely generated `Z/p^n`-module
/// given as a subquotient of a free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecomposition {
    pub ring: Ring,
    /// Free summands first, then torsion summands by increasing exponent.
    pub summands: Vec<Summand>,
}

impl ModuleDecomposition {
    pub fn free_rank(&self) -> usize {
        self.summands.iter().filter(|s| s.exponent == self.ring.n()).count()
    }

    /// Exponents `e` of the torsion summands `Z/p^e`, sorted.
    pub fn torsion(&self) -> Vec<u32> {
        self.summands
            .iter()
            .filter(|s| s.exponent < self.ring.n())
            .map(|s| s.exponent)
            .collect()
    }

    pub fn generators(&self) -> Vec<&[u64]> {
        self.summands.iter().map(|s| s.generator.as_slice()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// Cardinality as a power of `p`.
    pub fn length(&self) -> u32 {
        self.summands.iter().map(|s| s.exponent).sum()
    }
}

/// Decomposes `Z / B` where `z` and `b` hold column generators of submodules
/// `B ⊆ Z ⊆ R^m`.
pub fn subquotient(z: &Matrix, b: &Matrix) -> Result<ModuleDecomposition> {
    let ring = z.ring();
    if z.rows() != b.rows() {
        return Err(Error::ShapeMismatch("subquotient ambient ranks differ".into()));
    }
    let k = z.cols();
    // Relations among the generators of Z, then the boundaries written in them.
    let mut relations: Vec<Vec<u64>> = kernel(z).columns();
    for col in b.columns() {
        match solve(z, &col)? {
            Ok(y) => relations.push(y),
            Err(_) => {
                return Err(Error::ComplexNotValid(
                    "boundary generator outside the cycle module".into(),
                ))
            }
        }
    }
    let rel = Matrix::from_columns(ring, k, &relations);
    let smith = smith_form(&rel);
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..k {
        let e = smith.exponents.get(i).copied().unwrap_or(ring.n());
        if e == 0 {
            continue;
        }
        let coeffs = smith.p_inv.column(i);
        let generator = z.mul_vec(&coeffs)?;
        let summand = Summand { exponent: e, generator };
        if e == ring.n() {
            free.push(summand);
        } else {
            torsion.push(summand);
        }
    }
    torsion.sort_by_key(|s| s.exponent);
    free.extend(torsion);
    Ok(ModuleDecomposition { ring, summands: free })
}

/// `ker(d_out) / im(d_in)` for composable `d_in: C_prev -> C`, `d_out: C -> C_next`.
pub fn homology_at(d_in: &Matrix, d_out: &Matrix) -> Result<ModuleDecomposition> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::ShapeMismatch(format!(
            "d_in lands in rank {} but d_out starts at rank {}",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let composite = d_out.mul(d_in)?;
    if !composite.is_zero() {
        return Err(Error::ComplexNotValid("d_out * d_in is nonzero".into()));
    }
    subquotient(&kernel(d_out), d_in)
}
