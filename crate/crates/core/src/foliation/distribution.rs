use std::sync::Arc;

use crate::derham::{Form, FormMatrix, FrameSet};
use crate::error::{Error, Result};
use crate::poly::{Algebra, LocalizedPoly};

/// An integrable, transversally smooth distribution `D = <ω_1..ω_d>` with
/// its rank certificate and integrability witness.
///
/// The certificate `J` makes the minor `C = (coefficient of dx_j in ω_i)_{j in J}`
/// invertible, so `(ω_1..ω_d, dx_k for k not in J)` is a frame of `Ω^1`
/// (the completed frame, written `θ`).
#[derive(Clone, Debug)]
pub struct Distribution {
    alg: Arc<Algebra>,
    generators: Vec<Form>,
    certificate: Vec<usize>,
    complement: Vec<usize>,
    det_inverse: LocalizedPoly,
    witness: FormMatrix,
    theta_images: Vec<Form>,
    pi_images: Vec<Form>,
    lifts: Vec<Form>,
}

/// Outcome of an integrability check.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Integrability {
    Integrable(Distribution),
    /// `residuals[i]` is the image of `dω_i` in foliated 2-forms; at least one is nonzero.
    NotIntegrable { certificate: Vec<usize>, residuals: Vec<Form> },
}

impl Integrability {
    pub fn integrable(self) -> Option<Distribution> {
        match self {
            Integrability::Integrable(d) => Some(d),
            Integrability::NotIntegrable { .. } => None,
        }
    }
}

fn determinant(m: &[Vec<LocalizedPoly>], alg: &Arc<Algebra>) -> LocalizedPoly {
    match m.len() {
        0 => LocalizedPoly::one(alg),
        1 => m[0][0].clone(),
        k => {
            let mut acc = LocalizedPoly::zero(alg);
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor = minor(m, 0, c);
                let term = &m[0][c] * &determinant(&minor, alg);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<LocalizedPoly>], row: usize, col: usize) -> Vec<Vec<LocalizedPoly>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

struct Completion {
    certificate: Vec<usize>,
    complement: Vec<usize>,
    det_inverse: LocalizedPoly,
    theta_images: Vec<Form>,
    pi_images: Vec<Form>,
    lifts: Vec<Form>,
}

fn complete(alg: &Arc<Algebra>, gens: &[Form], certificate: &[usize]) -> Result<Completion> {
    let v = alg.nvars();
    let d = gens.len();
    let mut sorted = certificate.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d || sorted.iter().any(|&j| j >= v) {
        return Err(Error::Usage(format!("certificate must list {d} distinct coordinates out of {v}")));
    }
    let complement: Vec<usize> = (0..v).filter(|i| !sorted.contains(i)).collect();
    let c: Vec<Vec<LocalizedPoly>> =
        gens.iter().map(|w| sorted.iter().map(|&j| w.coefficient(FrameSet::single(j))).collect()).collect();
    let det = determinant(&c, alg);
    let det_inverse = det.inverse().ok_or_else(|| {
        let names: Vec<&str> = sorted.iter().map(|&j| alg.vars()[j].as_str()).collect();
        Error::NotTransversallySmooth(format!(
            "the minor on d{} has determinant {det}, which is not invertible in {alg}",
            names.join(",d")
        ))
    })?;
    // C^{-1} = adj(C) / det.
    let c_inv: Vec<Vec<LocalizedPoly>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| {
                    let cof = determinant(&minor(&c, i, j), alg);
                    let cof = if (i + j) % 2 == 0 { cof } else { -&cof };
                    &cof * &det_inverse
                })
                .collect()
        })
        .collect();
    // M = C^{-1} B, where B holds the coefficients on the complement.
    let m: Vec<Vec<LocalizedPoly>> = (0..d)
        .map(|j| {
            complement
                .iter()
                .map(|&k| {
                    let mut acc = LocalizedPoly::zero(alg);
                    for (i, w) in gens.iter().enumerate() {
                        acc = &acc + &(&c_inv[j][i] * &w.coefficient(FrameSet::single(k)));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut theta_images = vec![Form::zero(alg, 1); v];
    let mut pi_images = vec![Form::zero(alg, 1); v];
    for (t, &k) in complement.iter().enumerate() {
        theta_images[k] = Form::dx(alg, d + t);
        pi_images[k] = Form::dx(alg, k);
    }
    for (j, &jj) in sorted.iter().enumerate() {
        let mut theta = Form::zero(alg, 1);
        let mut pi = Form::zero(alg, 1);
        for (i, row) in c_inv[j].iter().enumerate() {
            theta = &theta + &Form::dx(alg, i).scale(row);
        }
        for (t, &k) in complement.iter().enumerate() {
            let coeff = -&m[j][t];
            theta = &theta + &Form::dx(alg, d + t).scale(&coeff);
            pi = &pi + &Form::dx(alg, k).scale(&coeff);
        }
        theta_images[jj] = theta;
        pi_images[jj] = pi;
    }
    let mut lifts: Vec<Form> = gens.to_vec();
    lifts.extend(complement.iter().map(|&k| Form::dx(alg, k)));
    Ok(Completion { certificate: sorted, complement, det_inverse, theta_images, pi_images, lifts })
}

fn find_certificate(alg: &Arc<Algebra>, gens: &[Form]) -> Result<Completion> {
    let mut last = None;
    for set in FrameSet::subsets(alg.nvars(), gens.len()) {
        let j: Vec<usize> = set.indices().collect();
        match complete(alg, gens, &j) {
            Ok(c) => return Ok(c),
            Err(e @ Error::NotTransversallySmooth(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| {
        Error::NotTransversallySmooth(format!("{} generators exceed the {} coordinates", gens.len(), alg.nvars()))
    }))
}

fn check_generators(alg: &Arc<Algebra>, gens: &[Form]) -> Result<()> {
    for w in gens {
        if !w.algebra().same_as(alg) {
            return Err(Error::PresentationMismatch);
        }
        if w.degree() != 1 {
            return Err(Error::Usage(format!("generator {w} is not a 1-form")));
        }
    }
    if gens.len() > alg.nvars() {
        return Err(Error::NotTransversallySmooth(format!(
            "{} generators exceed the {} coordinates",
            gens.len(),
            alg.nvars()
        )));
    }
    Ok(())
}

/// Decides integrability of `<ω_1..ω_d>`: completes the generators to a
/// frame, rewrites each `dω_i` in it and reads the witness off the terms
/// with an ω factor. The remainder is the obstruction.
pub fn check_integrability(
    alg: &Arc<Algebra>,
    generators: &[Form],
    certificate: Option<&[usize]>,
) -> Result<Integrability> {
    check_generators(alg, generators)?;
    let comp = match certificate {
        Some(j) => complete(alg, generators, j)?,
        None => find_certificate(alg, generators)?,
    };
    let d = generators.len();
    let conormal = FrameSet((1u64 << d) - 1);
    let mut witness = FormMatrix::zero(alg, d, 1);
    let mut residuals = Vec::with_capacity(d);
    for (i, w) in generators.iter().enumerate() {
        let dw = w.d().substitute(&comp.theta_images);
        let mut residual = Form::zero(alg, 2);
        for (set, c) in dw.terms() {
            let idx: Vec<usize> = set.indices().collect();
            let (a, b) = (idx[0], idx[1]);
            if !set.intersects(conormal) {
                let k = |t: usize| Form::dx(alg, comp.complement[t - d]);
                residual = &residual + &k(a).wedge(&k(b)).scale(c);
            } else if b < d {
                // c ω_a ∧ ω_b
                let e = witness.get(i, b) + &generators[a].scale(c);
                witness.set(i, b, e);
            } else {
                // c ω_a ∧ dx_k = (-c dx_k) ∧ ω_a
                let k = comp.complement[b - d];
                let e = witness.get(i, a) - &Form::dx(alg, k).scale(c);
                witness.set(i, a, e);
            }
        }
        residuals.push(residual);
    }
    if residuals.iter().any(|r| !r.is_zero()) {
        return Ok(Integrability::NotIntegrable { certificate: comp.certificate, residuals });
    }
    let dist = Distribution::from_parts(alg, generators, comp, witness);
    dist.verify_witness()?;
    Ok(Integrability::Integrable(dist))
}

impl Distribution {
    fn from_parts(alg: &Arc<Algebra>, generators: &[Form], comp: Completion, witness: FormMatrix) -> Distribution {
        Distribution {
            alg: alg.clone(),
            generators: generators.to_vec(),
            certificate: comp.certificate,
            complement: comp.complement,
            det_inverse: comp.det_inverse,
            witness,
            theta_images: comp.theta_images,
            pi_images: comp.pi_images,
            lifts: comp.lifts,
        }
    }

    /// Builds a distribution from a supplied witness, which is checked exactly.
    pub fn with_witness(
        alg: &Arc<Algebra>,
        generators: &[Form],
        certificate: &[usize],
        witness: FormMatrix,
    ) -> Result<Distribution> {
        check_generators(alg, generators)?;
        if witness.size() != generators.len() {
            return Err(Error::ShapeMismatch("witness must be d x d".into()));
        }
        let comp = complete(alg, generators, certificate)?;
        let dist = Distribution::from_parts(alg, generators, comp, witness);
        dist.verify_witness().map_err(|_| {
            Error::HypothesisUnmet("the supplied witness does not satisfy dω_i = Σ α_ij ∧ ω_j".into())
        })?;
        Ok(dist)
    }

    /// `dω_i - Σ_j α_ij ∧ ω_j` for each `i`.
    pub fn witness_defects(&self) -> Vec<Form> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let mut acc = w.d();
                for (j, wj) in self.generators.iter().enumerate() {
                    acc = &acc - &self.witness.get(i, j).wedge(wj);
                }
                acc
            })
            .collect()
    }

    fn verify_witness(&self) -> Result<()> {
        if self.witness_defects().iter().all(Form::is_zero) {
            Ok(())
        } else {
            Err(Error::InternalConsistency("integrability witness fails exact verification".into()))
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn generators(&self) -> &[Form] {
        &self.generators
    }

    /// Codimension `d`.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn certificate(&self) -> &[usize] {
        &self.certificate
    }

    /// Coordinates `k` whose `dx_k` complete the frame.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Inverse of the certificate minor's determinant.
    pub fn det_inverse(&self) -> &LocalizedPoly {
        &self.det_inverse
    }

    pub fn witness(&self) -> &FormMatrix {
        &self.witness
    }

    pub(crate) fn conormal_mask(&self) -> FrameSet {
        FrameSet((1u64 << self.rank()) - 1)
    }

    pub(crate) fn certificate_mask(&self) -> FrameSet {
        FrameSet::from_indices(&self.certificate)
    }

    pub(crate) fn theta_images(&self) -> &[Form] {
        &self.theta_images
    }

    pub(crate) fn pi_images(&self) -> &[Form] {
        &self.pi_images
    }

    pub(crate) fn lifts(&self) -> &[Form] {
        &self.lifts
    }

    /// Names of the completed frame: `w1..wd` then the remaining `dx_k`.
    pub fn frame_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.rank()).map(|i| format!("w{i}")).collect();
        names.extend(self.complement.iter().map(|&k| format!("d{}", self.alg.vars()[k])));
        names
    }

    /// `a` rewritten in the completed frame (index `i < d` is `ω_{i+1}`).
    pub fn to_frame(&self, a: &Form) -> Form {
        a.substitute(&self.theta_images)
    }

    /// A form written in the completed frame, read back in coordinates.
    pub fn from_frame(&self, a: &Form) -> Form {
        a.substitute(&self.lifts)
    }

    /// Projection to foliated forms: the canonical representative of the
    /// class of `a` modulo `D ∧ Ω`, supported on the complement.
    pub fn project(&self, a: &Form) -> Form {
        a.substitute(&self.pi_images)
    }

    /// Whether `a` vanishes in the foliated complex.
    pub fn vanishes_on_leaves(&self, a: &Form) -> bool {
        self.project(a).is_zero()
    }

    /// The same distribution over `target` (same variables and `h`, another
    /// power of `p`), re-checked from scratch with the same certificate.
    pub fn change_ring(&self, target: &Arc<Algebra>) -> Result<Integrability> {
        let gens: Vec<Form> = self.generators.iter().map(|w| w.change_ring(target)).collect();
        check_integrability(target, &gens, Some(&self.certificate))
    }

    /// Restriction to a further localization.
    pub fn restrict(&self, target: &Arc<Algebra>) -> Result<Distribution> {
        let gens: Vec<Form> = self.generators.iter().map(|w| w.restrict(target)).collect::<Result<_>>()?;
        let witness = self.witness.rows().iter().map(|r| r.iter().map(|f| f.restrict(target)).collect()).collect::<Result<Vec<Vec<Form>>>>()?;
        let witness = FormMatrix::from_entries(target, 1, witness)?;
        Distribution::with_witness(target, &gens, &self.certificate, witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Presentation;
    use crate::zmod::Ring;

    pub(crate) fn plane_at_x(p: u64, n: u32) -> Arc<Algebra> {
        Algebra::new(&Presentation {
            p,
            n,
            vars: vec!["x".into(), "y".into()],
            inverted: Some(vec![(vec![1, 0], 1)]),
        })
        .unwrap()
    }

    #[test]
    fn closed_generator_has_zero_witness() {
        let a = Algebra::polynomial(Ring::new(7, 1).unwrap(), &["x", "y"]).unwrap();
        let d = check_integrability(&a, &[Form::parse(&a, "dy").unwrap()], None).unwrap().integrable().unwrap();
        assert!(d.witness().is_zero());
        assert_eq!(d.certificate(), &[1]);
    }

    #[test]
    fn radial_form_on_the_punctured_plane() {
        let a = plane_at_x(7, 1);
        let w = Form::parse(&a, "x*dy - 2*y*dx").unwrap();
        let d = check_integrability(&a, &[w], Some(&[1])).unwrap().integrable().unwrap();
        assert_eq!(d.witness().get(0, 0), &Form::parse(&a, "3*x^-1*dx").unwrap());
    }

    #[test]
    fn contact_form_is_rejected() {
        let a = Algebra::polynomial(Ring::new(7, 1).unwrap(), &["x", "y", "z"]).unwrap();
        let w = Form::parse(&a, "dz + y*dx").unwrap();
        match check_integrability(&a, &[w], None).unwrap() {
            Integrability::NotIntegrable { residuals, .. } => {
                assert_eq!(residuals[0], Form::parse(&a, "dy*dx").unwrap());
            }
            Integrability::Integrable(_) => panic!("contact form accepted"),
        }
    }

    #[test]
    fn singular_minor_is_not_transversally_smooth() {
        let a = Algebra::polynomial(Ring::new(7, 1).unwrap(), &["x", "y"]).unwrap();
        let w = Form::parse(&a, "x*dy - 2*y*dx").unwrap();
        assert!(matches!(
            check_integrability(&a, std::slice::from_ref(&w), Some(&[1])),
            Err(Error::NotTransversallySmooth(_))
        ));
        assert!(matches!(check_integrability(&a, &[w], None), Err(Error::NotTransversallySmooth(_))));
    }

    #[test]
    fn riccati_witness() {
        let a = Algebra::polynomial(Ring::new(7, 1).unwrap(), &["x", "y"]).unwrap();
        let w = Form::parse(&a, "dy + y^2*dx").unwrap();
        let d = check_integrability(&a, std::slice::from_ref(&w), None).unwrap().integrable().unwrap();
        let alpha = d.witness().get(0, 0).clone();
        assert_eq!(alpha, Form::parse(&a, "-2*y*dx").unwrap());
        assert!(alpha.d().wedge(&w).is_zero());
    }

    #[test]
    fn supplied_witness_is_checked() {
        let a = plane_at_x(7, 1);
        let w = Form::parse(&a, "x*dy - 2*y*dx").unwrap();
        let good = FormMatrix::from_entries(&a, 1, vec![vec![Form::parse(&a, "3*x^-1*dx").unwrap()]]).unwrap();
        assert!(Distribution::with_witness(&a, std::slice::from_ref(&w), &[1], good).is_ok());
        let bad = FormMatrix::from_entries(&a, 1, vec![vec![Form::parse(&a, "x^-1*dx").unwrap()]]).unwrap();
        assert!(matches!(Distribution::with_witness(&a, &[w], &[1], bad), Err(Error::HypothesisUnmet(_))));
    }

    #[test]
    fn projection_kills_the_distribution() {
        let a = plane_at_x(7, 1);
        let w = Form::parse(&a, "x*dy - 2*y*dx").unwrap();
        let d = check_integrability(&a, std::slice::from_ref(&w), None).unwrap().integrable().unwrap();
        assert!(d.project(&w).is_zero());
        assert_eq!(d.project(&Form::parse(&a, "dy").unwrap()), Form::parse(&a, "2*x^-1*y*dx").unwrap());
        let f = Form::parse(&a, "x^2*y*dx + dy").unwrap();
        assert_eq!(d.from_frame(&d.to_frame(&f)), f);
    }
}
