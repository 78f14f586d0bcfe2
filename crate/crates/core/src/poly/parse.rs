//! Text syntax shared by polynomials, forms and invariant polynomials:
//! integers, identifiers, `+ - * ^` and parentheses. Exponents may be
//! negative (`x^-1`), which evaluators interpret as inversion.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Ident { name: String, pos: usize },
    Add(Box<Expr>, Box<Expr>, usize),
    Sub(Box<Expr>, Box<Expr>, usize),
    Mul(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow { base: Box<Expr>, exp: i64, pos: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = src[start..i].parse::<u64>().map_err(|_| Error::Parse {
                pos: start,
                message: "integer literal too large".into(),
            })?;
            out.push((Tok::Int(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, message: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?), pos);
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if !self.eat('*') {
                break;
            }
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.at += 1;
                let k = i64::try_from(k).or_else(|_| self.err("exponent too large"))?;
                Ok(Expr::Pow { base: Box::new(base), exp: if negative { -k } else { k }, pos })
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Expr::Ident { name, pos })
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            _ => self.err("expected a number, a name or '('"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Evaluation of a parsed [`Expr`] into some algebraic structure.
pub trait Evaluator {
    type Value;
    fn int(&self, v: u64) -> Result<Self::Value>;
    fn ident(&self, name: &str, pos: usize) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value, pos: usize) -> Result<Self::Value>;
    fn mul(&self, a: Self::Value, b: Self::Value, pos: usize) -> Result<Self::Value>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: Self::Value, exp: i64, pos: usize) -> Result<Self::Value>;

    fn eval(&self, e: &Expr) -> Result<Self::Value> {
        match e {
            Expr::Int(v) => self.int(*v),
            Expr::Ident { name, pos } => self.ident(name, *pos),
            Expr::Add(a, b, pos) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.add(a, b, *pos)
            }
            Expr::Sub(a, b, pos) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                let nb = self.neg(b)?;
                self.add(a, nb, *pos)
            }
            Expr::Mul(a, b, pos) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.mul(a, b, *pos)
            }
            Expr::Neg(a) => {
                let a = self.eval(a)?;
                self.neg(a)
            }
            Expr::Pow { base, exp, pos } => {
                let b = self.eval(base)?;
                self.pow(b, *exp, *pos)
            }
        }
    }

    fn parse(&self, src: &str) -> Result<Self::Value> {
        self.eval(&parse_expr(src)?)
    }
}
