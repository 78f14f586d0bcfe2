use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::parse::Evaluator;
use crate::poly::{Algebra, ElementParser, LocalizedPoly};

/// A set of frame indices, stored as a bitmask. Ordered by size and then
/// lexicographically on the sorted index list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FrameSet(pub u64);

impl FrameSet {
    pub fn empty() -> FrameSet {
        FrameSet(0)
    }

    pub fn single(i: usize) -> FrameSet {
        FrameSet(1 << i)
    }

    pub fn from_indices(ix: &[usize]) -> FrameSet {
        FrameSet(ix.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn intersects(self, other: FrameSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: FrameSet) -> FrameSet {
        FrameSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FrameSet) -> FrameSet {
        FrameSet(self.0 & other.0)
    }

    /// Sign of `dx_self ∧ dx_other` relative to the sorted union; zero if the
    /// sets overlap.
    pub fn wedge_sign(self, other: FrameSet) -> i8 {
        if self.intersects(other) {
            return 0;
        }
        // Count pairs (i in self, j in other) with i > j.
        let mut inversions = 0;
        for j in other.indices() {
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All subsets of `{0..n}` of size `k`, in increasing order.
    pub fn subsets(n: usize, k: usize) -> Vec<FrameSet> {
        let mut out: Vec<FrameSet> =
            (0u64..(1u64 << n)).filter(|m| m.count_ones() as usize == k).map(FrameSet).collect();
        out.sort();
        out
    }
}

impl Ord for FrameSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for FrameSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneous element of the exterior algebra on `dx_1..dx_v` over a
/// framed algebra. Indices are read against whatever frame the caller uses;
/// by default the coordinate frame.
#[derive(Clone, Debug)]
pub struct Form {
    alg: Arc<Algebra>,
    degree: usize,
    terms: BTreeMap<FrameSet, LocalizedPoly>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for Form {}

impl Form {
    pub fn zero(alg: &Arc<Algebra>, degree: usize) -> Form {
        Form { alg: alg.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(f: LocalizedPoly) -> Form {
        let alg = f.algebra().clone();
        Form::term(&alg, f, FrameSet::empty())
    }

    /// `f dx_I`.
    pub fn term(alg: &Arc<Algebra>, f: LocalizedPoly, set: FrameSet) -> Form {
        let mut out = Form::zero(alg, set.len());
        out.add_term(set, f);
        out
    }

    pub fn dx(alg: &Arc<Algebra>, i: usize) -> Form {
        Form::term(alg, LocalizedPoly::one(alg), FrameSet::single(i))
    }

    pub fn parse(alg: &Arc<Algebra>, src: &str) -> Result<Form> {
        FormParser { algebra: alg }.parse(src)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (FrameSet, &LocalizedPoly)> {
        self.terms.iter().map(|(s, f)| (*s, f))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, set: FrameSet) -> LocalizedPoly {
        self.terms.get(&set).cloned().unwrap_or_else(|| LocalizedPoly::zero(&self.alg))
    }

    /// The coefficient function of a 0-form.
    pub fn as_function(&self) -> Option<LocalizedPoly> {
        (self.degree == 0).then(|| self.coefficient(FrameSet::empty()))
    }

    pub(crate) fn add_term(&mut self, set: FrameSet, f: LocalizedPoly) {
        debug_assert_eq!(set.len(), self.degree);
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&set) {
            None => {
                self.terms.insert(set, f);
            }
            Some(g) => {
                let s = &g + &f;
                if !s.is_zero() {
                    self.terms.insert(set, s);
                }
            }
        }
    }

    fn check(&self, other: &Form) {
        assert!(self.alg.same_as(&other.alg), "forms over different algebras");
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::PresentationMismatch);
        }
        if self.degree != other.degree {
            if self.is_zero() {
                return Ok(other.clone());
            }
            if other.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::Usage(format!(
                "cannot add forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (s, f) in &other.terms {
            out.add_term(*s, f.clone());
        }
        Ok(out)
    }

    /// Multiplication by a function.
    pub fn scale(&self, f: &LocalizedPoly) -> Form {
        let mut out = Form::zero(&self.alg, self.degree);
        for (s, g) in &self.terms {
            out.add_term(*s, g * f);
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> Form {
        self.scale(&LocalizedPoly::from_i64(&self.alg, c))
    }

    pub fn try_wedge(&self, other: &Form) -> Result<Form> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::PresentationMismatch);
        }
        Ok(self.wedge(other))
    }

    pub fn wedge(&self, other: &Form) -> Form {
        self.check(other);
        let mut out = Form::zero(&self.alg, self.degree + other.degree);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let sign = a.wedge_sign(*b);
                if sign == 0 {
                    continue;
                }
                let prod = f * g;
                out.add_term(a.union(*b), if sign > 0 { prod } else { -&prod });
            }
        }
        out
    }

    /// Exterior derivative `d(f dx_I) = Σ_i ∂_i f dx_i ∧ dx_I`.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(&self.alg, self.degree + 1);
        for (set, f) in &self.terms {
            for i in 0..self.alg.nvars() {
                if set.contains(i) {
                    continue;
                }
                let df = f.partial(i);
                if df.is_zero() {
                    continue;
                }
                let sign = FrameSet::single(i).wedge_sign(*set);
                out.add_term(set.union(FrameSet::single(i)), if sign > 0 { df } else { -&df });
            }
        }
        out
    }

    /// Algebra homomorphism `dx_i ↦ images[i]` (each a 1-form), extended
    /// multiplicatively; used to rewrite forms into another frame.
    pub fn substitute(&self, images: &[Form]) -> Form {
        let mut out = Form::zero(&self.alg, self.degree);
        for (set, f) in &self.terms {
            let mut acc = Form::function(f.clone());
            for i in set.indices() {
                acc = acc.wedge(&images[i]);
            }
            out = out.try_add(&acc).expect("homogeneous images");
        }
        out
    }

    /// Image under `A -> A_g` for a further localization.
    pub fn restrict(&self, target: &Arc<Algebra>) -> Result<Form> {
        let mut out = Form::zero(target, self.degree);
        for (s, f) in &self.terms {
            out.add_term(*s, f.restrict(target)?);
        }
        Ok(out)
    }

    /// Coefficients moved to another power of `p` (reduction or lift).
    pub fn change_ring(&self, target: &Arc<Algebra>) -> Form {
        let mut out = Form::zero(target, self.degree);
        for (s, f) in &self.terms {
            out.add_term(*s, f.change_ring(target));
        }
        out
    }

    /// Smallest p-adic valuation among coefficients (`n` for the zero form).
    pub fn valuation(&self) -> u32 {
        self.terms.values().map(|f| f.valuation()).min().unwrap_or(self.alg.ring().n())
    }

    /// Renders with explicit frame names, e.g. `["w1", "dx"]`.
    pub fn display_with(&self, frame_names: &[String]) -> String {
        let mut out = String::new();
        for (set, f) in &self.terms {
            let coeff = f.to_string();
            let frame: Vec<&str> = set.indices().map(|i| frame_names[i].as_str()).collect();
            let frame = frame.join("*");
            let simple = !coeff[1..].contains(" + ") && !coeff[1..].contains(" - ") && !coeff.contains(")^");
            let text = if frame.is_empty() {
                if simple {
                    coeff
                } else {
                    format!("({coeff})")
                }
            } else if coeff == "1" {
                frame
            } else if coeff == "-1" {
                format!("-{frame}")
            } else if simple {
                format!("{coeff}*{frame}")
            } else {
                format!("({coeff})*{frame}")
            };
            if out.is_empty() {
                out = text;
            } else if let Some(rest) = text.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&text);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn coordinate_frame_names(alg: &Algebra) -> Vec<String> {
        alg.vars().iter().map(|v| format!("d{v}")).collect()
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.check(rhs);
        self.try_add(rhs).expect("degree mismatch in form addition")
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        let mut out = Form::zero(&self.alg, self.degree);
        for (s, f) in &self.terms {
            out.terms.insert(*s, -f);
        }
        out
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Form::coordinate_frame_names(&self.alg)))
    }
}

/// Evaluates form syntax: `x*dy - 2*y*dx`, `dx*dy` (products are wedges).
pub struct FormParser<'a> {
    pub algebra: &'a Arc<Algebra>,
}

impl Evaluator for FormParser<'_> {
    type Value = Form;

    fn int(&self, v: u64) -> Result<Form> {
        Ok(Form::function(LocalizedPoly::constant(self.algebra, self.algebra.ring().from_u64(v))))
    }

    fn ident(&self, name: &str, pos: usize) -> Result<Form> {
        if let Some(i) = self.algebra.var_index(name) {
            return Ok(Form::function(LocalizedPoly::var(self.algebra, i)));
        }
        if let Some(i) = name.strip_prefix('d').and_then(|v| self.algebra.var_index(v)) {
            return Ok(Form::dx(self.algebra, i));
        }
        Err(Error::Parse { pos, message: format!("unknown variable or differential {name}") })
    }

    fn add(&self, a: Form, b: Form, pos: usize) -> Result<Form> {
        a.try_add(&b).map_err(|e| Error::Parse { pos, message: e.to_string() })
    }

    fn mul(&self, a: Form, b: Form, _pos: usize) -> Result<Form> {
        Ok(a.wedge(&b))
    }

    fn neg(&self, a: Form) -> Result<Form> {
        Ok(-&a)
    }

    fn pow(&self, a: Form, exp: i64, pos: usize) -> Result<Form> {
        match a.as_function() {
            Some(f) => {
                let g = ElementParser { algebra: self.algebra }.pow(f, exp, pos)?;
                Ok(Form::function(g))
            }
            None if exp == 1 => Ok(a),
            None => Err(Error::Parse { pos, message: "only functions can be raised to powers".into() }),
        }
    }
}
