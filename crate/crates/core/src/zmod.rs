//! Arithmetic in `Z/p^n` for an odd prime `p`.
//!
//! Values are carried around as bare `u64` residues in `[0, p^n)` together
//! with a [`Ring`] descriptor; [`RingElement`] bundles the two for call sites
//! that want operator syntax.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Descriptor of the coefficient ring `Z/p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    p: u64,
    n: u32,
    modulus: u64,
}

impl Ring {
    /// Builds `Z/p^n`, rejecting `p = 2`, composite `p`, `n = 0` and moduli
    /// that do not fit below `2^63`.
    pub fn new(p: u64, n: u32) -> Result<Ring> {
        if p == 2 {
            return Err(Error::InvalidRing(
                "p = 2 is excluded; the characteristic must be odd".into(),
            ));
        }
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidRing("exponent n must be at least 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..n {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m < (1u64 << 63))
                .ok_or_else(|| Error::InvalidRing(format!("{p}^{n} does not fit below 2^63")))?;
        }
        Ok(Ring { p, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The ring `Z/p^k` for `1 <= k`; used for reductions and lifts.
    pub fn with_exponent(&self, k: u32) -> Result<Ring> {
        Ring::new(self.p, k)
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.modulus as i128) as u64
    }

    pub fn from_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `p^k` as a residue (zero once `k >= n`).
    pub fn p_power(&self, k: u32) -> u64 {
        if k >= self.n {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// p-adic valuation, with `v(0) = n`.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut old_r, mut r) = (a as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Some(old_s.rem_euclid(self.modulus as i128) as u64)
    }

    /// Some `c` with `b * c = a`, when one exists.
    pub fn divide(&self, a: u64, b: u64) -> Option<u64> {
        let va = self.valuation(a);
        let vb = self.valuation(b);
        if va < vb {
            return None;
        }
        if a == 0 {
            return Some(0);
        }
        let pb = self.p.pow(vb);
        let a_red = a / pb;
        let b_unit = self.inv(b / pb)?;
        Some(self.mul(a_red, b_unit))
    }

    /// Splits a nonzero residue as `p^v * u` with `u` a unit; returns `(v, u)`.
    pub fn unit_part(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        if v >= self.n {
            return (self.n, 1);
        }
        (v, a / self.p.pow(v))
    }

    /// Symmetric representative in `(-p^n/2, p^n/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }

    /// Reduction `Z/p^n -> Z/p^k` of a residue of `self` into `target`.
    pub fn reduce_into(&self, a: u64, target: &Ring) -> u64 {
        debug_assert_eq!(self.p, target.p);
        a % target.modulus
    }

    pub fn element(&self, value: u64) -> RingElement {
        RingElement { ring: *self, value: value % self.modulus }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.n)
        }
    }
}

/// A residue paired with its ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    value: u64,
}

impl RingElement {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inverse(&self) -> Option<RingElement> {
        self.ring.inv(self.value).map(|v| self.ring.element(v))
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, rhs: RingElement) -> RingElement {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        self.ring.element(self.ring.add(self.value, rhs.value))
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, rhs: RingElement) -> RingElement {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        self.ring.element(self.ring.sub(self.value, rhs.value))
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        self.ring.element(self.ring.mul(self.value, rhs.value))
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.ring.element(self.ring.neg(self.value))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.signed(self.value))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_descriptors() {
        assert!(Ring::new(2, 3).is_err());
        assert!(Ring::new(9, 1).is_err());
        assert!(Ring::new(5, 0).is_err());
        assert!(Ring::new(3, 40).is_err());
        assert!(Ring::new(3, 39).is_ok());
    }

    #[test]
    fn valuation_and_units() {
        let r = Ring::new(5, 2).unwrap();
        assert_eq!(r.valuation(0), 2);
        assert_eq!(r.valuation(5), 1);
        assert_eq!(r.valuation(7), 0);
        assert!(r.is_unit(24));
        assert!(!r.is_unit(10));
        assert_eq!(r.mul(r.inv(7).unwrap(), 7), 1);
        assert_eq!(r.inv(10), None);
    }

    #[test]
    fn division_follows_valuations() {
        let r = Ring::new(3, 2).unwrap();
        assert_eq!(r.divide(4, 2), Some(2));
        assert_eq!(r.divide(1, 3), None);
        let c = r.divide(6, 3).unwrap();
        assert_eq!(r.mul(c, 3), 6);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&k| is_prime(k)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn signed_representatives() {
        let r = Ring::new(3, 2).unwrap();
        assert_eq!(r.signed(8), -1);
        assert_eq!(r.signed(4), 4);
        assert_eq!(r.signed(5), -4);
    }
}
