use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::derham::form::{Form, FrameSet};
use crate::error::{Error, Result};
use crate::linalg::{homology_at, solve, Matrix, ModuleDecomposition};
use crate::poly::{Algebra, LocalizedPoly};
use crate::zmod::Ring;

/// Which frame subsets span the complex, read in the target frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Every subset: the full complex.
    All,
    /// Subsets avoiding the mask; terms meeting it are quotiented away.
    Avoid(FrameSet),
    /// Exactly `level` conormal factors; more are quotiented away (a graded piece).
    Graded { conormal: FrameSet, level: usize },
    /// At least `level` conormal factors (a filtration subcomplex).
    AtLeast { conormal: FrameSet, level: usize },
}

enum Class {
    Keep(usize),
    Drop,
    Foreign,
}

impl Selection {
    fn classify(&self, s: FrameSet) -> Class {
        match *self {
            Selection::All => Class::Keep(s.len()),
            Selection::Avoid(mask) => {
                if s.intersects(mask) {
                    Class::Drop
                } else {
                    Class::Keep(s.len())
                }
            }
            Selection::Graded { conormal, level } => {
                let k = s.intersection(conormal).len();
                match k.cmp(&level) {
                    std::cmp::Ordering::Equal => Class::Keep(s.len() - level),
                    std::cmp::Ordering::Greater => Class::Drop,
                    std::cmp::Ordering::Less => Class::Foreign,
                }
            }
            Selection::AtLeast { conormal, level } => {
                if s.intersection(conormal).len() >= level {
                    Class::Keep(s.len())
                } else {
                    Class::Foreign
                }
            }
        }
    }

    fn shift(&self) -> usize {
        match *self {
            Selection::Graded { level, .. } => level,
            _ => 0,
        }
    }
}

/// Frame data for assembling a complex: how coordinate differentials are
/// rewritten in the target frame, how target frame elements read back as
/// forms, and their weights.
#[derive(Clone, Debug)]
pub struct ComplexShape {
    pub label: String,
    pub frame_names: Vec<String>,
    /// Image of each `dx_i` in the target frame; `None` for the coordinate frame.
    pub images: Option<Vec<Form>>,
    /// Each target frame element as a form in the coordinate frame.
    pub lifts: Vec<Form>,
    /// Weight vector of each target frame element.
    pub weights: Vec<Vec<i64>>,
    pub selection: Selection,
}

impl ComplexShape {
    pub fn de_rham(alg: &Arc<Algebra>) -> ComplexShape {
        let v = alg.nvars();
        ComplexShape {
            label: "de Rham".into(),
            frame_names: Form::coordinate_frame_names(alg),
            images: None,
            lifts: (0..v).map(|i| Form::dx(alg, i)).collect(),
            weights: (0..v).map(|i| unit_weight(v, i)).collect(),
            selection: Selection::All,
        }
    }

    pub fn rewrite(&self, a: &Form) -> Form {
        match &self.images {
            None => a.clone(),
            Some(images) => a.substitute(images),
        }
    }
}

pub fn unit_weight(v: usize, i: usize) -> Vec<i64> {
    let mut w = vec![0; v];
    w[i] = 1;
    w
}

/// A basis element `x^e θ_S` with Laurent exponent vector `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisForm {
    pub exponents: Vec<i64>,
    pub frame: FrameSet,
}

/// A finite free complex spanned by the basis forms of weight `|E| <= N`,
/// `E_i >= -N a_i` where `h = c x^a`. The differential preserves weights, so
/// this is a subcomplex whenever the frame is weight-homogeneous.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    alg: Arc<Algebra>,
    bound: u32,
    shape: Arc<ComplexShape>,
    bases: Vec<Vec<BasisForm>>,
    index: Vec<HashMap<BasisForm, usize>>,
    differentials: Vec<Matrix>,
}

/// Cohomology of a truncated complex in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: usize,
    pub bound: u32,
    pub decomposition: ModuleDecomposition,
    /// Forms representing the generators, in summand order.
    pub representatives: Vec<Form>,
}

impl Cohomology {
    pub fn free_rank(&self) -> usize {
        self.decomposition.free_rank()
    }

    pub fn torsion(&self) -> Vec<u32> {
        self.decomposition.torsion()
    }
}

/// Result of searching a primitive inside a truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitive {
    Found(Form),
    /// No primitive in this truncation; the residual is the canonical
    /// remainder of the coordinates of `a` modulo the boundaries.
    Inconclusive { bound: u32, residual: Vec<u64> },
}

fn enumerate_exponents(lower: &[i64], budget: i64, out: &mut Vec<Vec<i64>>) {
    fn rec(lower: &[i64], budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = cur.len();
        if i == lower.len() {
            out.push(cur.clone());
            return;
        }
        for f in 0..=budget {
            cur.push(lower[i] + f);
            rec(lower, budget - f, cur, out);
            cur.pop();
        }
    }
    if budget >= 0 {
        rec(lower, budget, &mut Vec::new(), out);
    }
}

impl TruncatedComplex {
    /// The truncated de Rham complex of `alg`.
    pub fn de_rham(alg: &Arc<Algebra>, bound: u32) -> Result<TruncatedComplex> {
        TruncatedComplex::assemble(alg, bound, ComplexShape::de_rham(alg))
    }

    pub fn assemble(alg: &Arc<Algebra>, bound: u32, shape: ComplexShape) -> Result<TruncatedComplex> {
        let a = alg.monomial_h().ok_or_else(|| {
            Error::UnsupportedTruncation(format!(
                "finite truncations need a monomial inverted element, {alg} has none"
            ))
        })?;
        let v = alg.nvars();
        let frame_len = shape.lifts.len();
        if frame_len > 30 {
            return Err(Error::UnsupportedTruncation("frames of more than 30 elements".into()));
        }
        let n = bound as i64;
        let mut bases: Vec<Vec<BasisForm>> = Vec::new();
        for mask in 0u64..(1u64 << frame_len) {
            let set = FrameSet(mask);
            let Class::Keep(j) = shape.selection.classify(set) else { continue };
            let offset: Vec<i64> = (0..v).map(|i| set.indices().map(|t| shape.weights[t][i]).sum()).collect();
            let lower: Vec<i64> = (0..v)
                .map(|i| {
                    let floor = -n * a[i] as i64 - offset[i];
                    if a[i] > 0 {
                        floor
                    } else {
                        floor.max(0)
                    }
                })
                .collect();
            let budget = n - offset.iter().sum::<i64>() - lower.iter().sum::<i64>();
            let mut exps = Vec::new();
            enumerate_exponents(&lower, budget, &mut exps);
            if bases.len() <= j {
                bases.resize(j + 1, Vec::new());
            }
            bases[j].extend(exps.into_iter().map(|e| BasisForm { exponents: e, frame: set }));
        }
        for basis in &mut bases {
            basis.sort_by(|x, y| {
                let (sx, sy): (i64, i64) = (x.exponents.iter().sum(), y.exponents.iter().sum());
                sx.cmp(&sy).then_with(|| x.frame.cmp(&y.frame)).then_with(|| y.exponents.cmp(&x.exponents))
            });
        }
        let index = bases
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect())
            .collect();
        let mut out = TruncatedComplex {
            alg: alg.clone(),
            bound,
            shape: Arc::new(shape),
            bases,
            index,
            differentials: Vec::new(),
        };
        let top = out.bases.len();
        let differentials: Result<Vec<Matrix>> = (0..top).into_par_iter().map(|j| out.assemble_differential(j)).collect();
        out.differentials = differentials?;
        for j in 1..top {
            if !out.differentials[j].mul(&out.differentials[j - 1])?.is_zero() {
                return Err(Error::InternalConsistency(format!("d^2 != 0 in degree {j}")));
            }
        }
        Ok(out)
    }

    fn assemble_differential(&self, j: usize) -> Result<Matrix> {
        let ring = self.alg.ring();
        let cols = self.dim(j);
        let rows = self.dim(j + 1);
        let mut m = Matrix::zeros(ring, rows, cols);
        for k in 0..cols {
            let image = self.basis_form(j, k).d();
            let coords = self.coordinates(j + 1, &image).map_err(|e| match e {
                Error::OutOfTruncation(msg) => Error::TruncationNotSubcomplex(format!(
                    "d of {} leaves the truncation: {msg}",
                    self.basis_form(j, k)
                )),
                other => other,
            })?;
            for (r, c) in coords.into_iter().enumerate() {
                m.set(r, k, c);
            }
        }
        Ok(m)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn ring(&self) -> Ring {
        self.alg.ring()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn shape(&self) -> &ComplexShape {
        &self.shape
    }

    /// Number of cohomological degrees with a nonempty basis range.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.iter().all(|b| b.is_empty())
    }

    pub fn dim(&self, j: usize) -> usize {
        self.bases.get(j).map_or(0, |b| b.len())
    }

    /// Form degree of cohomological degree `j`.
    pub fn form_degree(&self, j: usize) -> usize {
        j + self.shape.selection.shift()
    }

    pub fn basis(&self, j: usize) -> &[BasisForm] {
        self.bases.get(j).map_or(&[], |b| b.as_slice())
    }

    /// `d: C^j -> C^{j+1}` as a `dim(j+1) x dim(j)` matrix.
    pub fn differential(&self, j: usize) -> Matrix {
        self.differentials.get(j).cloned().unwrap_or_else(|| Matrix::zeros(self.ring(), self.dim(j + 1), self.dim(j)))
    }

    /// The `k`-th basis element of degree `j` as a form in the coordinate frame.
    pub fn basis_form(&self, j: usize, k: usize) -> Form {
        let b = &self.bases[j][k];
        let f = LocalizedPoly::from_laurent(&self.alg, &b.exponents, 1).expect("basis exponents are admissible");
        let mut acc = Form::function(f);
        for t in b.frame.indices() {
            acc = acc.wedge(&self.shape.lifts[t]);
        }
        acc
    }

    pub fn to_form(&self, j: usize, coords: &[u64]) -> Form {
        let mut acc = Form::zero(&self.alg, self.form_degree(j));
        for (k, &c) in coords.iter().enumerate() {
            if c != 0 {
                acc = &acc + &self.basis_form(j, k).scale(&LocalizedPoly::constant(&self.alg, c));
            }
        }
        acc
    }

    /// Coordinates of (the class of) `a` in degree `j`.
    pub fn coordinates(&self, j: usize, a: &Form) -> Result<Vec<u64>> {
        if !a.algebra().same_as(&self.alg) {
            return Err(Error::PresentationMismatch);
        }
        let ring = self.ring();
        let mut out = vec![0; self.dim(j)];
        if a.is_zero() {
            return Ok(out);
        }
        if a.degree() != self.form_degree(j) {
            return Err(Error::ShapeMismatch(format!(
                "a {}-form cannot live in degree {j} of this complex",
                a.degree()
            )));
        }
        let rewritten = self.shape.rewrite(a);
        for (set, f) in rewritten.terms() {
            match self.shape.selection.classify(set) {
                Class::Drop => continue,
                Class::Keep(jj) if jj == j => {}
                _ => {
                    return Err(Error::InternalConsistency(format!(
                        "term {} does not belong to degree {j} of the {} complex",
                        rewritten.display_with(&self.shape.frame_names),
                        self.shape.label
                    )))
                }
            }
            let terms = f.laurent_terms().ok_or_else(|| {
                Error::UnsupportedTruncation("coefficients need a Laurent expansion".into())
            })?;
            for (e, c) in terms {
                let key = BasisForm { exponents: e, frame: set };
                match self.index[j].get(&key) {
                    Some(&k) => out[k] = ring.add(out[k], c),
                    None => {
                        return Err(Error::OutOfTruncation(format!(
                            "{} is beyond bound N = {}",
                            Form::term(
                                &self.alg,
                                LocalizedPoly::from_laurent(&self.alg, &key.exponents, c)?,
                                set
                            )
                            .display_with(&self.shape.frame_names),
                            self.bound
                        )))
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether `a` maps to the zero cochain in degree `j`.
    pub fn is_zero_cochain(&self, j: usize, a: &Form) -> Result<bool> {
        Ok(self.coordinates(j, a)?.iter().all(|&c| c == 0))
    }

    pub fn cohomology(&self, j: usize) -> Result<Cohomology> {
        let d_in = if j == 0 { Matrix::zeros(self.ring(), self.dim(0), 0) } else { self.differential(j - 1) };
        let decomposition = homology_at(&d_in, &self.differential(j))?;
        let representatives = decomposition.summands.iter().map(|s| self.to_form(j, &s.generator)).collect();
        Ok(Cohomology { degree: j, bound: self.bound, decomposition, representatives })
    }

    /// Cohomology in every degree, computed concurrently.
    pub fn cohomology_all(&self) -> Result<Vec<Cohomology>> {
        (0..self.len()).into_par_iter().map(|j| self.cohomology(j)).collect()
    }

    /// A form `b` with `db = a` inside this truncation, if one exists.
    pub fn find_primitive(&self, a: &Form) -> Result<Primitive> {
        let shift = self.shape.selection.shift();
        if a.is_zero() {
            let deg = a.degree().max(shift + 1) - 1;
            return Ok(Primitive::Found(Form::zero(&self.alg, deg)));
        }
        let Some(j) = a.degree().checked_sub(shift) else {
            return Err(Error::ShapeMismatch("form below the complex range".into()));
        };
        let x = self.coordinates(j, a)?;
        let closed = self.differential(j).mul_vec(&x)?;
        if closed.iter().any(|&c| c != 0) {
            return Err(Error::NotACocycle);
        }
        if j == 0 {
            return Ok(Primitive::Inconclusive { bound: self.bound, residual: x });
        }
        let d = self.differential(j - 1);
        match solve(&d, &x)? {
            Ok(y) => {
                if d.mul_vec(&y)? != x {
                    return Err(Error::InternalConsistency("primitive fails its own check".into()));
                }
                Ok(Primitive::Found(self.to_form(j - 1, &y)))
            }
            Err(no) => Ok(Primitive::Inconclusive { bound: self.bound, residual: no.residual }),
        }
    }
}

/// Mapping fiber of restriction `C(X) -> C(U)`: degree `j` holds pairs
/// `(a, b)` with `a` in `C^j(X)`, `b` in `C^{j-1}(U)`, and
/// `D(a, b) = (da, a|_U - db)`.
#[derive(Clone, Debug)]
pub struct SupportedComplex {
    x: TruncatedComplex,
    u: TruncatedComplex,
    restrictions: Vec<Matrix>,
    differentials: Vec<Matrix>,
}

impl SupportedComplex {
    /// Truncated fiber complex for `U = X_h`.
    pub fn new(alg: &Arc<Algebra>, h: &crate::poly::Poly, bound: u32) -> Result<SupportedComplex> {
        let u_alg = alg.localize(h)?;
        let x = TruncatedComplex::de_rham(alg, bound)?;
        let u = TruncatedComplex::de_rham(&u_alg, bound)?;
        SupportedComplex::from_parts(x, u)
    }

    pub fn from_parts(x: TruncatedComplex, u: TruncatedComplex) -> Result<SupportedComplex> {
        let ring = x.ring();
        let top = x.len().max(u.len() + 1);
        let mut restrictions = Vec::new();
        for j in 0..x.len() {
            let mut r = Matrix::zeros(ring, u.dim(j), x.dim(j));
            for k in 0..x.dim(j) {
                let image = x.basis_form(j, k).restrict(u.algebra())?;
                for (row, c) in u.coordinates(j, &image)?.into_iter().enumerate() {
                    r.set(row, k, c);
                }
            }
            restrictions.push(r);
        }
        let mut out = SupportedComplex { x, u, restrictions, differentials: Vec::new() };
        out.differentials = (0..top).map(|j| out.assemble_differential(j)).collect::<Result<_>>()?;
        for j in 1..top {
            if !out.differentials[j].mul(&out.differentials[j - 1])?.is_zero() {
                return Err(Error::InternalConsistency(format!("fiber differential squares to nonzero in degree {j}")));
            }
        }
        Ok(out)
    }

    fn restriction(&self, j: usize) -> Matrix {
        self.restrictions.get(j).cloned().unwrap_or_else(|| Matrix::zeros(self.x.ring(), self.u.dim(j), self.x.dim(j)))
    }

    fn u_dim_below(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.u.dim(j - 1)
        }
    }

    pub fn dim(&self, j: usize) -> usize {
        self.x.dim(j) + self.u_dim_below(j)
    }

    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn assemble_differential(&self, j: usize) -> Result<Matrix> {
        let ring = self.x.ring();
        let (xa, ub) = (self.x.dim(j), self.u_dim_below(j));
        let (xa1, ub1) = (self.x.dim(j + 1), self.u.dim(j));
        let mut m = Matrix::zeros(ring, xa1 + ub1, xa + ub);
        let dx = self.x.differential(j);
        for r in 0..xa1 {
            for c in 0..xa {
                m.set(r, c, dx.get(r, c));
            }
        }
        let res = self.restriction(j);
        for r in 0..ub1 {
            for c in 0..xa {
                m.set(xa1 + r, c, res.get(r, c));
            }
        }
        if j > 0 {
            let du = self.u.differential(j - 1);
            for r in 0..ub1 {
                for c in 0..ub {
                    m.set(xa1 + r, xa + c, ring.neg(du.get(r, c)));
                }
            }
        }
        Ok(m)
    }

    pub fn differential(&self, j: usize) -> Matrix {
        self.differentials.get(j).cloned().unwrap_or_else(|| Matrix::zeros(self.x.ring(), self.dim(j + 1), self.dim(j)))
    }

    pub fn base(&self) -> &TruncatedComplex {
        &self.x
    }

    pub fn open(&self) -> &TruncatedComplex {
        &self.u
    }

    /// The chain map `(a, b) -> a` to `C(X)`.
    pub fn projection(&self, j: usize) -> Matrix {
        let mut m = Matrix::zeros(self.x.ring(), self.x.dim(j), self.dim(j));
        for k in 0..self.x.dim(j) {
            m.set(k, k, 1);
        }
        m
    }

    /// The chain map `C(U)[-1] -> fiber`, `b -> (0, b)` (up to the usual sign).
    pub fn inclusion(&self, j: usize) -> Matrix {
        let ub = self.u_dim_below(j);
        let mut m = Matrix::zeros(self.x.ring(), self.dim(j), ub);
        for k in 0..ub {
            m.set(self.x.dim(j) + k, k, 1);
        }
        m
    }

    pub fn coordinates(&self, j: usize, a: &Form, b: &Form) -> Result<Vec<u64>> {
        let mut out = self.x.coordinates(j, a)?;
        if j > 0 {
            out.extend(self.u.coordinates(j - 1, b)?);
        } else if !b.is_zero() {
            return Err(Error::ShapeMismatch("degree-0 fiber cochains have no open part".into()));
        }
        Ok(out)
    }

    pub fn cohomology(&self, j: usize) -> Result<ModuleDecomposition> {
        let d_in = if j == 0 { Matrix::zeros(self.x.ring(), self.dim(0), 0) } else { self.differential(j - 1) };
        homology_at(&d_in, &self.differential(j))
    }
}

/// Exact, untruncated check that `(a, b)` is a fiber cocycle:
/// `da = 0` and `a|_U = db`.
pub fn is_fiber_cocycle(a: &Form, b: &Form, u: &Arc<Algebra>) -> Result<bool> {
    if !a.d().is_zero() {
        return Ok(false);
    }
    let diff = a.restrict(u)?.try_add(&-&b.d())?;
    Ok(diff.is_zero())
}
