use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::algebra::Algebra;
use crate::poly::poly::{Monomial, Poly};
use crate::poly::{display_laurent, display_poly};

/// Element `f / h^m` of a framed algebra, kept with `m` minimal. Because `h`
/// is a nonzerodivisor the minimal representation is unique, so structural
/// equality is equality in the algebra.
#[derive(Clone, Debug)]
pub struct LocalizedPoly {
    alg: Arc<Algebra>,
    num: Poly,
    den: u32,
}

impl PartialEq for LocalizedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.num == other.num
    }
}

impl Eq for LocalizedPoly {}

impl LocalizedPoly {
    pub fn new(alg: &Arc<Algebra>, num: Poly, den: u32) -> LocalizedPoly {
        assert_eq!(num.ring(), alg.ring(), "numerator over the wrong ring");
        assert_eq!(num.nvars(), alg.nvars(), "numerator in the wrong variables");
        let den = if alg.h().is_none() { 0 } else { den };
        let mut out = LocalizedPoly { alg: alg.clone(), num, den };
        out.normalize();
        out
    }

    pub fn from_poly(alg: &Arc<Algebra>, num: Poly) -> LocalizedPoly {
        LocalizedPoly::new(alg, num, 0)
    }

    pub fn zero(alg: &Arc<Algebra>) -> LocalizedPoly {
        LocalizedPoly { alg: alg.clone(), num: Poly::zero(alg.ring(), alg.nvars()), den: 0 }
    }

    pub fn one(alg: &Arc<Algebra>) -> LocalizedPoly {
        LocalizedPoly::constant(alg, 1)
    }

    pub fn constant(alg: &Arc<Algebra>, c: u64) -> LocalizedPoly {
        LocalizedPoly::from_poly(alg, Poly::constant(alg.ring(), alg.nvars(), c))
    }

    pub fn from_i64(alg: &Arc<Algebra>, c: i64) -> LocalizedPoly {
        LocalizedPoly::constant(alg, alg.ring().from_i64(c))
    }

    pub fn var(alg: &Arc<Algebra>, i: usize) -> LocalizedPoly {
        LocalizedPoly::from_poly(alg, Poly::var(alg.ring(), alg.nvars(), i))
    }

    /// `1 / h`.
    pub fn h_inverse(alg: &Arc<Algebra>) -> LocalizedPoly {
        LocalizedPoly::new(alg, Poly::one(alg.ring(), alg.nvars()), 1)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == 0 && self.num.as_constant() == Some(1)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = 0;
            return;
        }
        let Some(h) = self.alg.h() else { return };
        while self.den > 0 {
            match self.num.exact_div(h) {
                Some(q) => {
                    self.num = q;
                    self.den -= 1;
                }
                None => break,
            }
        }
    }

    fn check(&self, other: &LocalizedPoly) {
        assert!(self.alg.same_as(&other.alg), "elements of different algebras");
    }

    fn raised(&self, den: u32) -> Poly {
        if den == self.den {
            return self.num.clone();
        }
        &self.num * &self.alg.h_or_one().pow(den - self.den)
    }

    pub fn scale(&self, c: u64) -> LocalizedPoly {
        LocalizedPoly::new(&self.alg, self.num.scale(c), self.den)
    }

    pub fn pow(&self, k: u32) -> LocalizedPoly {
        let mut acc = LocalizedPoly::one(&self.alg);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂x_i` with the quotient rule `∂(f/h^m) = (h ∂f - m f ∂h) / h^(m+1)`.
    pub fn partial(&self, i: usize) -> LocalizedPoly {
        if self.den == 0 {
            return LocalizedPoly::new(&self.alg, self.num.derivative(i), 0);
        }
        let ring = self.alg.ring();
        let h = self.alg.h_or_one();
        let first = &h * &self.num.derivative(i);
        let second = (&self.num * &h.derivative(i)).scale(ring.from_u64(self.den as u64));
        LocalizedPoly::new(&self.alg, &first - &second, self.den + 1)
    }

    /// Smallest p-adic valuation of the numerator's coefficients.
    pub fn valuation(&self) -> u32 {
        self.num.valuation()
    }

    /// `deg f - m * deg h`.
    pub fn total_degree(&self) -> Option<i64> {
        let hd = self.alg.h().and_then(|h| h.total_degree()).unwrap_or(0) as i64;
        self.num.total_degree().map(|d| d as i64 - self.den as i64 * hd)
    }

    /// Inverse in the algebra, found when the reduction mod `p` of the
    /// numerator is `c * h^k` (or `c * x^b` with `x^b | h^k` for monomial
    /// `h`). Such elements are exactly `unit * (1 + nilpotent)` and the
    /// inverse is a finite geometric series.
    pub fn inverse(&self) -> Option<LocalizedPoly> {
        if self.is_zero() {
            return None;
        }
        let alg = &self.alg;
        let ring = alg.ring();
        let field = ring.with_exponent(1).ok()?;
        let reduced = self.num.change_ring(field);
        if reduced.is_zero() {
            return None;
        }
        // Find a "visible unit" u = c * g with g | h^k such that num ≡ u mod p.
        let mut h_power = 0u32;
        let (g_exp, c) = if let Some(a) = alg.monomial_h() {
            if reduced.num_terms() != 1 {
                return None;
            }
            let (m, c) = reduced.terms().next().unwrap();
            let support_ok = m.0.iter().zip(&a).all(|(&e, &ai)| e == 0 || ai > 0);
            if !support_ok {
                return None;
            }
            (Some(m.clone()), c)
        } else {
            let hbar = alg.h().unwrap().change_ring(field);
            let mut rest = reduced.clone();
            while rest.as_constant().is_none() {
                rest = rest.exact_div(&hbar)?;
                h_power += 1;
            }
            (None, rest.as_constant().unwrap())
        };
        let c_inv = ring.inv(c)?;
        // inv_visible = 1 / (c * g) as an algebra element.
        let inv_visible = match g_exp {
            Some(m) => {
                let a = alg.monomial_h().unwrap();
                let k = m
                    .0
                    .iter()
                    .zip(&a)
                    .filter(|(_, &ai)| ai > 0)
                    .map(|(&e, &ai)| e.div_ceil(ai))
                    .max()
                    .unwrap_or(0);
                // h^k / x^m = c_h^k * x^(k a - m).
                let h = alg.h_or_one();
                let (_, ch) = h.terms().next().unwrap();
                let cofactor: Vec<u32> = a.iter().zip(&m.0).map(|(&ai, &e)| k * ai - e).collect();
                let num = Poly::monomial(ring, Monomial(cofactor), ring.mul(ring.pow(ch, k as u64), c_inv));
                LocalizedPoly::new(alg, num, k)
            }
            None => LocalizedPoly::new(alg, Poly::constant(ring, alg.nvars(), c_inv), h_power),
        };
        // self * inv_visible = 1 + p*t, invert by the nilpotent series.
        let w = self * &inv_visible;
        let nil = &w - &LocalizedPoly::one(alg);
        if nil.num.valuation() == 0 {
            return None;
        }
        let mut series = LocalizedPoly::one(alg);
        let mut power = LocalizedPoly::one(alg);
        let neg_nil = -&nil;
        for _ in 1..ring.n() {
            power = &power * &neg_nil;
            series = &series + &power;
        }
        let inv = &inv_visible * &series;
        debug_assert!((self * &inv).is_one());
        Some(inv)
    }

    /// Laurent expansion for monomial `h`: pairs `(exponents, coefficient)`
    /// with possibly negative exponents on the inverted variables.
    pub fn laurent_terms(&self) -> Option<Vec<(Vec<i64>, u64)>> {
        let a = self.alg.monomial_h()?;
        let ring = self.alg.ring();
        let ch_inv = match self.alg.h() {
            Some(h) => ring.inv(h.terms().next().unwrap().1)?,
            None => 1,
        };
        let scale = ring.pow(ch_inv, self.den as u64);
        Some(
            self.num
                .terms()
                .map(|(m, c)| {
                    let e = m.0.iter().zip(&a).map(|(&e, &ai)| e as i64 - (ai as i64) * self.den as i64).collect();
                    (e, ring.mul(c, scale))
                })
                .collect(),
        )
    }

    /// `c * x^e` for a Laurent exponent vector, valid when `h` is monomial
    /// and every negative exponent sits on a variable dividing `h`.
    pub fn from_laurent(alg: &Arc<Algebra>, e: &[i64], c: u64) -> Result<LocalizedPoly> {
        let a = alg.monomial_h().ok_or_else(|| {
            Error::UnsupportedTruncation("Laurent monomials need a monomial inverted element".into())
        })?;
        let ring = alg.ring();
        let mut k: u32 = 0;
        for (&ei, &ai) in e.iter().zip(&a) {
            if ei < 0 {
                if ai == 0 {
                    return Err(Error::NotInvertible("negative power of a non-inverted variable".into()));
                }
                k = k.max(((-ei) as u32).div_ceil(ai));
            }
        }
        let num_exp: Vec<u32> = e.iter().zip(&a).map(|(&ei, &ai)| (ei + (k * ai) as i64) as u32).collect();
        let ch = alg.h().map(|h| h.terms().next().unwrap().1).unwrap_or(1);
        let coeff = ring.mul(c, ring.pow(ch, k as u64));
        Ok(LocalizedPoly::new(alg, Poly::monomial(ring, Monomial(num_exp), coeff), k))
    }

    /// Image under `A_h -> A_{h g}` where `target` inverts `h * g`.
    pub fn restrict(&self, target: &Arc<Algebra>) -> Result<LocalizedPoly> {
        if self.alg.ring() != target.ring() || self.alg.vars() != target.vars() {
            return Err(Error::PresentationMismatch);
        }
        if self.den == 0 {
            return Ok(LocalizedPoly::new(target, self.num.clone(), 0));
        }
        let h = self.alg.h().expect("den > 0 implies localization");
        let target_h = target.h().ok_or(Error::PresentationMismatch)?;
        let g = target_h.exact_div(h).ok_or(Error::PresentationMismatch)?;
        Ok(LocalizedPoly::new(target, &self.num * &g.pow(self.den), self.den))
    }

    /// Same fraction read over another algebra with identical variables and
    /// `h` over a different power of `p` (reduction or coefficient lift).
    pub fn change_ring(&self, target: &Arc<Algebra>) -> LocalizedPoly {
        LocalizedPoly::new(target, self.num.change_ring(target.ring()), self.den)
    }
}

impl Add for &LocalizedPoly {
    type Output = LocalizedPoly;
    fn add(self, rhs: &LocalizedPoly) -> LocalizedPoly {
        self.check(rhs);
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let den = self.den.max(rhs.den);
        LocalizedPoly::new(&self.alg, &self.raised(den) + &rhs.raised(den), den)
    }
}

impl Sub for &LocalizedPoly {
    type Output = LocalizedPoly;
    fn sub(self, rhs: &LocalizedPoly) -> LocalizedPoly {
        self + &(-rhs)
    }
}

impl Neg for &LocalizedPoly {
    type Output = LocalizedPoly;
    fn neg(self) -> LocalizedPoly {
        LocalizedPoly { alg: self.alg.clone(), num: -&self.num, den: self.den }
    }
}

impl Mul for &LocalizedPoly {
    type Output = LocalizedPoly;
    fn mul(self, rhs: &LocalizedPoly) -> LocalizedPoly {
        self.check(rhs);
        if self.is_zero() || rhs.is_zero() {
            return LocalizedPoly::zero(&self.alg);
        }
        LocalizedPoly::new(&self.alg, &self.num * &rhs.num, self.den + rhs.den)
    }
}

impl fmt::Display for LocalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.alg.vars();
        if self.den == 0 {
            return f.write_str(&display_poly(&self.num, vars));
        }
        if let Some(terms) = self.laurent_terms() {
            return f.write_str(&display_laurent(self.alg.ring(), &terms, vars));
        }
        let h = self.alg.h().unwrap();
        write!(f, "({})*({})^-{}", display_poly(&self.num, vars), display_poly(h, vars), self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::algebra::Presentation;
    use crate::zmod::Ring;

    fn laurent_x(p: u64, n: u32) -> Arc<Algebra> {
        Algebra::new(&Presentation {
            p,
            n,
            vars: vec!["x".into()],
            inverted: Some(vec![(vec![1], 1)]),
        })
        .unwrap()
    }

    #[test]
    fn cancellation_of_x_over_x() {
        let a = laurent_x(3, 2);
        let x = LocalizedPoly::var(&a, 0);
        let xinv = LocalizedPoly::h_inverse(&a);
        let prod = &xinv * &x;
        assert!(prod.is_one());
        assert_eq!(prod.denominator_exponent(), 0);
    }

    #[test]
    fn quotient_rule_for_inverse() {
        let a = laurent_x(3, 2);
        let d = LocalizedPoly::h_inverse(&a).partial(0);
        let expected = -&LocalizedPoly::h_inverse(&a).pow(2);
        assert_eq!(d, expected);
        assert_eq!(d.to_string(), "-x^-2");
    }

    #[test]
    fn inverses_in_localizations() {
        let a = laurent_x(3, 2);
        let x = LocalizedPoly::var(&a, 0);
        let u = &(&x * &LocalizedPoly::constant(&a, 2)) + &LocalizedPoly::constant(&a, 3);
        // 2x + 3 = 2x (1 + 3/(2x)) is a unit in Z/9[x, 1/x].
        let inv = u.inverse().unwrap();
        assert!((&u * &inv).is_one());
        let r = Ring::new(3, 2).unwrap();
        let poly = Algebra::polynomial(r, &["x"]).unwrap();
        let one_plus_3x = &LocalizedPoly::one(&poly) + &LocalizedPoly::var(&poly, 0).scale(3);
        assert!((&one_plus_3x * &one_plus_3x.inverse().unwrap()).is_one());
        assert!(LocalizedPoly::var(&poly, 0).inverse().is_none());
    }

    #[test]
    fn non_monomial_h_inverse() {
        let a = Algebra::new(&Presentation {
            p: 5,
            n: 3,
            vars: vec!["x".into()],
            inverted: Some(vec![(vec![1], 1), (vec![0], 3)]),
        })
        .unwrap();
        let h = &LocalizedPoly::var(&a, 0) + &LocalizedPoly::constant(&a, 3);
        let inv = h.inverse().unwrap();
        assert!((&h * &inv).is_one());
        assert_eq!(inv.to_string(), "(1)*(x + 3)^-1");
    }

    #[test]
    fn laurent_round_trip() {
        let a = laurent_x(5, 2);
        let e = LocalizedPoly::from_laurent(&a, &[-3], 7).unwrap();
        assert_eq!(e.laurent_terms().unwrap(), vec![(vec![-3], 7)]);
        assert_eq!(e.total_degree(), Some(-3));
    }
}
