use crate::chern_weil::{Connection, InvariantPolynomial};
use crate::derham::Form;
use crate::error::{Error, Result};
use crate::foliation::{Distribution, FiltrationLevel};

/// Outcome of [`is_flat_along`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flatness {
    /// Every curvature entry lies in `F^{-1}`, with its decomposition.
    Flat { decompositions: Vec<Vec<FiltrationLevel>> },
    /// First curvature entry without a conormal factor.
    NotFlat { row: usize, col: usize, entry: Form },
}

impl Flatness {
    pub fn is_flat(&self) -> bool {
        matches!(self, Flatness::Flat { .. })
    }
}

/// Chain-level certificate that `c_i` vanishes in the foliated complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct T1Certificate {
    pub index: usize,
    pub chern_form: Form,
    pub level: FiltrationLevel,
}

/// Chain-level certificate that `φ(∇)` is the zero form because every
/// monomial of `φ` lands in `F^{-q}` with `q > d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottCertificate {
    pub weight: usize,
    pub codimension: usize,
    /// `(i, c_i, level of c_i)` for the Chern forms used by `φ`.
    pub chern_levels: Vec<(usize, Form, FiltrationLevel)>,
    /// For each monomial exponent vector, the guaranteed filtration level
    /// (a vanishing `c_i` counts as level `q`).
    pub monomial_bounds: Vec<(Vec<u32>, usize)>,
    pub phi_form: Form,
}

impl BottCertificate {
    /// Re-checks the certificate by form arithmetic: decompositions
    /// recombine, levels bound the monomials above `d`, and the form is zero.
    pub fn recheck(&self, dist: &Distribution) -> bool {
        let alg = dist.algebra();
        self.chern_levels.iter().all(|(i, c, lvl)| {
            lvl.recombine(dist.generators(), alg, 2 * i) == *c && lvl.contains(*i)
        }) && self.monomial_bounds.iter().all(|(_, b)| *b > self.codimension)
            && self.phi_form.is_zero()
    }
}

pub fn is_flat_along(conn: &Connection, dist: &Distribution) -> Result<Flatness> {
    if !conn.algebra().same_as(dist.algebra()) {
        return Err(Error::PresentationMismatch);
    }
    let k = conn.curvature()?;
    let mut decompositions = Vec::new();
    for (i, row) in k.rows().iter().enumerate() {
        let mut out = Vec::new();
        for (j, entry) in row.iter().enumerate() {
            let lvl = dist.filtration_level(entry)?;
            if !lvl.contains(1) {
                return Ok(Flatness::NotFlat { row: i, col: j, entry: entry.clone() });
            }
            out.push(lvl);
        }
        decompositions.push(out);
    }
    Ok(Flatness::Flat { decompositions })
}

fn require_flat(conn: &Connection, dist: &Distribution) -> Result<()> {
    match is_flat_along(conn, dist)? {
        Flatness::Flat { .. } => Ok(()),
        Flatness::NotFlat { row, col, entry } => Err(Error::HypothesisUnmet(format!(
            "connection is not flat along the foliation: curvature entry ({}, {}) = {entry} has no conormal factor",
            row + 1,
            col + 1
        ))),
    }
}

/// For a connection flat along `F`, `c_i` has filtration level at least
/// `i >= 1`, so its image in the foliated complex is the zero cochain.
pub fn verify_theorem_t1(conn: &Connection, dist: &Distribution, i: usize) -> Result<T1Certificate> {
    if i == 0 {
        return Err(Error::Usage("Chern index must be at least 1".into()));
    }
    require_flat(conn, dist)?;
    let c = conn.chern_form(i)?.form;
    let level = dist.filtration_level(&c)?;
    if !level.contains(i) || !dist.vanishes_on_leaves(&c) {
        return Err(Error::InternalConsistency(format!("c_{i} survives in the foliated complex")));
    }
    Ok(T1Certificate { index: i, chern_form: c, level })
}

/// Bott vanishing at chain level: `φ(∇) = 0` when `∇` is flat along a
/// foliation of codimension `d < q`.
pub fn verify_bott_vanishing(conn: &Connection, dist: &Distribution, phi: &InvariantPolynomial) -> Result<BottCertificate> {
    let (q, d) = (phi.weight(), dist.rank());
    if q <= d {
        return Err(Error::HypothesisUnmet(format!("φ has degree q = {q}, which does not exceed the codimension d = {d}")));
    }
    require_flat(conn, dist)?;
    let mut chern_levels = Vec::new();
    for i in 1..=phi.num_vars() {
        let c = conn.chern_form(i)?.form;
        let lvl = dist.filtration_level(&c)?;
        if !lvl.contains(i) {
            return Err(Error::InternalConsistency(format!("c_{i} has filtration level below {i}")));
        }
        chern_levels.push((i, c, lvl));
    }
    let monomial_bounds = phi
        .terms()
        .map(|(e, _)| {
            let bound: usize = e.iter().enumerate().map(|(i, &x)| chern_levels[i].2.level.unwrap_or(q) * x as usize).sum();
            (e.to_vec(), bound)
        })
        .collect();
    let phi_form = conn.phi_form(phi)?;
    let cert = BottCertificate { weight: q, codimension: d, chern_levels, monomial_bounds, phi_form };
    if !cert.recheck(dist) {
        return Err(Error::InternalConsistency("Bott vanishing certificate fails its recheck".into()));
    }
    Ok(cert)
}
