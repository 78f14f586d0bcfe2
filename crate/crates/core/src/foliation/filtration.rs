use std::collections::BTreeMap;
use std::sync::Arc;

use crate::derham::{unit_weight, ComplexShape, Form, FrameSet, Selection, TruncatedComplex};
use crate::error::{Error, Result};
use crate::foliation::Distribution;
use crate::poly::{Algebra, LocalizedPoly};

/// Membership of a form in the filtration `F^{-i}`: the largest such `i`
/// (`None` for the zero form, which lies in every level) and a decomposition
/// `a = Σ ω_S ∧ η_S` with `|S| >= i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationLevel {
    pub level: Option<usize>,
    /// `(S, η_S)` with `S` a sorted list of generator indices.
    pub decomposition: Vec<(Vec<usize>, Form)>,
}

impl FiltrationLevel {
    /// `a ∈ F^{-i}`.
    pub fn contains(&self, i: usize) -> bool {
        self.level.is_none_or(|l| l >= i)
    }

    /// `Σ ω_S ∧ η_S`, recomputed from the printed data.
    pub fn recombine(&self, generators: &[Form], alg: &Arc<Algebra>, degree: usize) -> Form {
        let mut acc = Form::zero(alg, degree);
        for (s, eta) in &self.decomposition {
            let mut prod = Form::function(LocalizedPoly::one(alg));
            for &i in s {
                prod = prod.wedge(&generators[i]);
            }
            acc = &acc + &prod.wedge(eta);
        }
        acc
    }
}

/// Which filtration complex to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiltrationPiece {
    /// `F^{-i} / F^{-(i+1)}`.
    Graded(usize),
    /// `F^{-i}` as a subcomplex of the full complex.
    Sub(usize),
}

fn form_weight(w: &Form) -> Result<Vec<i64>> {
    let v = w.algebra().nvars();
    let mut weight: Option<Vec<i64>> = None;
    for (set, f) in w.terms() {
        let terms = f
            .laurent_terms()
            .ok_or_else(|| Error::UnsupportedTruncation("coefficients need a Laurent expansion".into()))?;
        for (e, _) in terms {
            let mut wt = e;
            for k in set.indices() {
                wt[k] += 1;
            }
            match &weight {
                None => weight = Some(wt),
                Some(prev) if *prev == wt => {}
                Some(_) => {
                    return Err(Error::UnsupportedTruncation(format!(
                        "generator {w} is not weight-homogeneous, so total-degree truncations are not subcomplexes"
                    )))
                }
            }
        }
    }
    Ok(weight.unwrap_or_else(|| vec![0; v]))
}

impl Distribution {
    /// Filtration level via the completed frame: the minimum number of
    /// ω-factors over the terms of `a`.
    pub fn filtration_level(&self, a: &Form) -> Result<FiltrationLevel> {
        if !a.algebra().same_as(self.algebra()) {
            return Err(Error::PresentationMismatch);
        }
        let alg = self.algebra();
        let d = self.rank();
        let conormal = self.conormal_mask();
        let framed = self.to_frame(a);
        let mut groups: BTreeMap<FrameSet, Form> = BTreeMap::new();
        for (set, c) in framed.terms() {
            let omegas = set.intersection(conormal);
            let rest = FrameSet(set.0 & !conormal.0);
            let mut eta = Form::function(c.clone());
            for t in rest.indices() {
                eta = eta.wedge(&Form::dx(alg, self.complement()[t - d]));
            }
            let entry = groups.entry(omegas).or_insert_with(|| Form::zero(alg, rest.len()));
            *entry = &*entry + &eta;
        }
        let level = groups.keys().map(|s| s.len()).min();
        let decomposition: Vec<(Vec<usize>, Form)> =
            groups.into_iter().map(|(s, eta)| (s.indices().collect(), eta)).collect();
        let out = FiltrationLevel { level, decomposition };
        if out.recombine(self.generators(), alg, a.degree()) != *a {
            return Err(Error::InternalConsistency("filtration decomposition does not recombine".into()));
        }
        Ok(out)
    }

    fn frame_shape(&self, selection: Selection, label: String) -> Result<ComplexShape> {
        let v = self.algebra().nvars();
        let mut weights: Vec<Vec<i64>> = self.generators().iter().map(form_weight).collect::<Result<_>>()?;
        weights.extend(self.complement().iter().map(|&k| unit_weight(v, k)));
        Ok(ComplexShape {
            label,
            frame_names: self.frame_names(),
            images: Some(self.theta_images().to_vec()),
            lifts: self.lifts().to_vec(),
            weights,
            selection,
        })
    }

    /// The foliated complex `Ω / (D ∧ Ω)`, truncated at `bound`. Basis forms
    /// are `x^e dx_K` with `K` inside the complement of the certificate.
    pub fn foliated_complex(&self, bound: u32) -> Result<TruncatedComplex> {
        let alg = self.algebra();
        let v = alg.nvars();
        let shape = ComplexShape {
            label: "foliated".into(),
            frame_names: Form::coordinate_frame_names(alg),
            images: Some(self.pi_images().to_vec()),
            lifts: (0..v).map(|i| Form::dx(alg, i)).collect(),
            weights: (0..v).map(|i| unit_weight(v, i)).collect(),
            selection: Selection::Avoid(self.certificate_mask()),
        };
        // Weight-homogeneity of the projection is what makes this a subcomplex.
        for w in self.generators() {
            form_weight(w)?;
        }
        TruncatedComplex::assemble(alg, bound, shape)
    }

    /// `Gr^i = F^{-i}/F^{-(i+1)}`, i.e. foliated forms with values in `Λ^i N*`,
    /// in cohomological degrees `0..=v-d`.
    pub fn graded_piece(&self, i: usize, bound: u32) -> Result<TruncatedComplex> {
        if i > self.rank() {
            return Err(Error::Usage(format!("graded pieces exist for 0 <= i <= {}", self.rank())));
        }
        let shape = self.frame_shape(
            Selection::Graded { conormal: self.conormal_mask(), level: i },
            format!("Gr^{i}"),
        )?;
        TruncatedComplex::assemble(self.algebra(), bound, shape)
    }

    /// The subcomplex `F^{-i}` of the truncated de Rham complex.
    pub fn filtered_subcomplex(&self, i: usize, bound: u32) -> Result<TruncatedComplex> {
        let shape = self.frame_shape(
            Selection::AtLeast { conormal: self.conormal_mask(), level: i },
            format!("F^-{i}"),
        )?;
        TruncatedComplex::assemble(self.algebra(), bound, shape)
    }
}

/// Truncated complex of `alg`, optionally the foliated quotient of a
/// distribution, or one of its filtration pieces.
pub fn truncate(
    alg: &Arc<Algebra>,
    bound: u32,
    quotient: Option<&Distribution>,
    piece: Option<FiltrationPiece>,
) -> Result<TruncatedComplex> {
    match (quotient, piece) {
        (None, None) => TruncatedComplex::de_rham(alg, bound),
        (None, Some(_)) => Err(Error::Usage("filtration pieces need a distribution".into())),
        (Some(d), _) if !d.algebra().same_as(alg) => Err(Error::PresentationMismatch),
        (Some(d), None) => d.foliated_complex(bound),
        (Some(d), Some(FiltrationPiece::Graded(i))) => d.graded_piece(i, bound),
        (Some(d), Some(FiltrationPiece::Sub(i))) => d.filtered_subcomplex(i, bound),
    }
}
