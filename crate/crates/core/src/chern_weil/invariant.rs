use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::parse::Evaluator;
use crate::zmod::Ring;

/// A polynomial `φ(X_1, .., X_m)` in the Chern variables. `X_i` has Chern
/// weight `i` (form degree `2i`); `φ` must be weighted-homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPolynomial {
    ring: Ring,
    /// Exponent vectors (index `i` for `X_{i+1}`) to nonzero coefficients.
    terms: BTreeMap<Vec<u32>, u64>,
    weight: usize,
}

type Terms = BTreeMap<Vec<u32>, u64>;

struct ChernEval {
    ring: Ring,
    vars: usize,
}

fn add_into(ring: Ring, acc: &mut Terms, e: Vec<u32>, c: u64) {
    let v = ring.add(acc.get(&e).copied().unwrap_or(0), c);
    if v == 0 {
        acc.remove(&e);
    } else {
        acc.insert(e, v);
    }
}

impl Evaluator for ChernEval {
    type Value = Terms;

    fn int(&self, v: u64) -> Result<Terms> {
        let mut t = Terms::new();
        add_into(self.ring, &mut t, vec![0; self.vars], self.ring.from_u64(v));
        Ok(t)
    }

    fn ident(&self, name: &str, pos: usize) -> Result<Terms> {
        let i = chern_index(name)
            .filter(|&i| i <= self.vars)
            .ok_or_else(|| Error::Parse { pos, message: format!("expected a Chern variable X1..X{}, got {name}", self.vars) })?;
        let mut e = vec![0; self.vars];
        e[i - 1] = 1;
        Ok(Terms::from([(e, 1)]))
    }

    fn add(&self, mut a: Terms, b: Terms, _pos: usize) -> Result<Terms> {
        for (e, c) in b {
            add_into(self.ring, &mut a, e, c);
        }
        Ok(a)
    }

    fn mul(&self, a: Terms, b: Terms, _pos: usize) -> Result<Terms> {
        let mut out = Terms::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                add_into(self.ring, &mut out, e, self.ring.mul(*ca, *cb));
            }
        }
        Ok(out)
    }

    fn neg(&self, a: Terms) -> Result<Terms> {
        Ok(a.into_iter().map(|(e, c)| (e, self.ring.neg(c))).collect())
    }

    fn pow(&self, a: Terms, exp: i64, pos: usize) -> Result<Terms> {
        if exp < 0 {
            return Err(Error::Parse { pos, message: "negative powers are not polynomial".into() });
        }
        let mut acc = self.int(1)?;
        for _ in 0..exp {
            acc = self.mul(acc, a.clone(), pos)?;
        }
        Ok(acc)
    }
}

fn chern_index(name: &str) -> Option<usize> {
    let i: usize = name.strip_prefix('X')?.parse().ok()?;
    (i >= 1).then_some(i)
}

fn scan_vars(src: &str) -> usize {
    src.split(|c: char| !c.is_ascii_alphanumeric())
        .filter_map(chern_index)
        .max()
        .unwrap_or(1)
}

impl InvariantPolynomial {
    /// Parses e.g. `X1^2 - 3*X2`.
    pub fn parse(ring: Ring, src: &str) -> Result<InvariantPolynomial> {
        let vars = scan_vars(src);
        let terms = ChernEval { ring, vars }.parse(src)?;
        InvariantPolynomial::from_terms(ring, terms)
    }

    pub fn from_terms(ring: Ring, terms: BTreeMap<Vec<u32>, u64>) -> Result<InvariantPolynomial> {
        let terms: Terms = terms.into_iter().filter(|(_, c)| ring.from_u64(*c) != 0).collect();
        let weights: Vec<usize> = terms.keys().map(|e| chern_weight(e)).collect();
        let Some(&weight) = weights.first() else {
            return Err(Error::NonHomogeneous("the zero polynomial has no degree".into()));
        };
        if weights.iter().any(|&w| w != weight) {
            let p = InvariantPolynomial { ring, terms, weight };
            return Err(Error::NonHomogeneous(format!("{p} mixes weights under deg X_i = 2i")));
        }
        Ok(InvariantPolynomial { ring, terms, weight })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Chern weight `q = Σ i e_i`; the form degree of `φ(c)` is `2q`.
    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    /// Number of Chern variables in use.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// `∂φ/∂X_k` (1-based `k`), as raw terms.
    pub(crate) fn derivative(&self, k: usize) -> Vec<(Vec<u32>, u64)> {
        self.terms
            .iter()
            .filter(|(e, _)| e.get(k - 1).copied().unwrap_or(0) > 0)
            .map(|(e, c)| {
                let mut e = e.clone();
                let ek = e[k - 1];
                e[k - 1] -= 1;
                (e, self.ring.mul(*c, self.ring.from_u64(ek as u64)))
            })
            .filter(|(_, c)| *c != 0)
            .collect()
    }

    /// Same residues read over another power of `p` (reduction, or the
    /// coefficient-wise lift with representatives in `[0, p^n)`).
    pub fn change_ring(&self, target: Ring) -> InvariantPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), target.from_u64(*c)))
            .filter(|(_, c)| *c != 0)
            .collect();
        InvariantPolynomial { ring: target, terms, weight: self.weight }
    }
}

pub(crate) fn chern_weight(e: &[u32]) -> usize {
    e.iter().enumerate().map(|(i, &x)| (i + 1) * x as usize).sum()
}

impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let c = self.ring.signed(*c);
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("X{}", i + 1) } else { format!("X{}^{x}", i + 1) })
                .collect();
            let mono = mono.join("*");
            let abs = c.unsigned_abs();
            let body = match (abs, mono.is_empty()) {
                (_, true) => abs.to_string(),
                (1, false) => mono,
                _ => format!("{abs}*{mono}"),
            };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}
