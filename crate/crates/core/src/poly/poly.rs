use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::zmod::Ring;

/// Exponent vector. Ordered by total degree, then with larger lexicographic
/// exponents first inside a degree (`1 < x < y < x^2 < x*y < y^2`); this is
/// the canonical iteration and basis order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Graded-lexicographic comparison (the monomial order used for leading terms).
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over `Z/p^n` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl Poly {
    pub fn zero(ring: Ring, nvars: usize) -> Poly {
        Poly { ring, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, nvars: usize, c: u64) -> Poly {
        Poly::monomial(ring, Monomial::one(nvars), c)
    }

    pub fn one(ring: Ring, nvars: usize) -> Poly {
        Poly::constant(ring, nvars, 1)
    }

    pub fn var(ring: Ring, nvars: usize, i: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(ring: Ring, m: Monomial, c: u64) -> Poly {
        let mut p = Poly::zero(ring, m.0.len());
        p.add_term(m, ring.from_u64(c));
        p
    }

    pub fn from_terms(ring: Ring, nvars: usize, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Poly {
        let mut p = Poly::zero(ring, nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, ring.from_u64(c));
        }
        p
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has degree at most zero.
    pub fn as_constant(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (m, &c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then_some(c)
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, u64)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0)).map(|(m, &c)| (m, c))
    }

    /// Smallest p-adic valuation among the coefficients (`n` for zero).
    pub fn valuation(&self) -> u32 {
        self.terms.values().map(|&c| self.ring.valuation(c)).min().unwrap_or(self.ring.n())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let ring = self.ring;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: u64) -> Poly {
        let ring = self.ring;
        let mut out = Poly::zero(ring, self.nvars);
        for (m, &a) in &self.terms {
            out.add_term(m.clone(), ring.mul(a, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Poly {
        let ring = self.ring;
        let mut out = Poly::zero(ring, self.nvars);
        for (k, &a) in &self.terms {
            out.add_term(k.mul(m), ring.mul(a, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.ring, self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let ring = self.ring;
        let mut out = Poly::zero(ring, self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, ring.mul(c, ring.from_u64(e as u64)));
        }
        out
    }

    /// Division with remainder by `h`, whose graded-lex leading coefficient
    /// must be a unit. `self = q * h + r` with no term of `r` divisible by the
    /// leading monomial of `h`.
    pub fn div_rem(&self, h: &Poly) -> (Poly, Poly) {
        let ring = self.ring;
        let (lm, lc) = h.leading().expect("division by zero polynomial");
        let (lm, lc_inv) = (lm.clone(), ring.inv(lc).expect("leading coefficient must be a unit"));
        let mut q = Poly::zero(ring, self.nvars);
        let mut r = Poly::zero(ring, self.nvars);
        let mut work = self.clone();
        while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c)) {
            if lm.divides(&m) {
                let qm = m.div(&lm);
                let qc = ring.mul(c, lc_inv);
                work = &work - &h.mul_monomial(&qm, qc);
                q.add_term(qm, qc);
            } else {
                work.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        (q, r)
    }

    /// Exact quotient by `h` if `h` divides `self`.
    pub fn exact_div(&self, h: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(h);
        r.is_zero().then_some(q)
    }

    /// Moves the coefficients into another power of the same prime: reduction
    /// when `target` is smaller, coefficient-wise lift (same representatives)
    /// when it is larger.
    pub fn change_ring(&self, target: Ring) -> Poly {
        assert_eq!(self.ring.p(), target.p());
        Poly::from_terms(target, self.nvars, self.terms.iter().map(|(m, &c)| (m.clone(), c)))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), self.ring.neg(c));
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.ring.neg(1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        let ring = self.ring;
        let mut out = Poly::zero(ring, self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.add_term(a.mul(b), ring.mul(ca, cb));
            }
        }
        out
    }
}
