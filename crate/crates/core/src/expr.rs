//! A small expression grammar shared by ring elements and Clifford elements.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'|'·'] power | power)*
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer ['/' integer] | name | '(' expr ')'
//! ```
//! Juxtaposition multiplies, so `2v1`, `2 v1` and `2*v1` are the same.
//! The Unicode minus sign is accepted wherever `-` is.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{big, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Scalar),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, col)),
            '-' | '−' => out.push((Tok::Minus, col)),
            '*' | '·' => out.push((Tok::Star, col)),
            '/' => out.push((Tok::Slash, col)),
            '^' => out.push((Tok::Caret, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Num(s.parse().expect("digits")), col));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Name(chars[start..i].iter().collect()), col));
                continue;
            }
            other => return Err(Error::Parse { column: col, message: format!("unexpected character `{other}`") }),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse { column: self.col(), message: message.to_string() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::LParen) => {
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let e: i64 = match i64::try_from(n) {
                    Ok(e) => e,
                    Err(_) => return self.err("exponent too large"),
                };
                Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }))
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            Ok(Expr::Number(Scalar::new(n, d)))
                        }
                        _ => self.err("expected a nonzero denominator"),
                    }
                } else {
                    Ok(Expr::Number(big(n)))
                }
            }
            Some(Tok::Name(s)) => {
                self.pos += 1;
                Ok(Expr::Name(s))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("expected a number, a name or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let end = text.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Folds an expression into some algebra.
pub trait Evaluate {
    type Value: Clone;
    fn number(&self, q: &Scalar) -> Result<Self::Value>;
    fn name(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value>;
    fn pow(&self, base: &Expr, e: i64) -> Result<Self::Value>;
}

pub fn eval<E: Evaluate>(ev: &E, e: &Expr) -> Result<E::Value> {
    match e {
        Expr::Number(q) => ev.number(q),
        Expr::Name(n) => ev.name(n),
        Expr::Neg(a) => ev.neg(&eval(ev, a)?),
        Expr::Add(a, b) => ev.add(&eval(ev, a)?, &eval(ev, b)?),
        Expr::Sub(a, b) => ev.sub(&eval(ev, a)?, &eval(ev, b)?),
        Expr::Mul(a, b) => ev.mul(&eval(ev, a)?, &eval(ev, b)?),
        Expr::Pow(a, k) => ev.pow(a, *k),
    }
}

/// Nonnegative powers by repeated multiplication.
pub fn pow_by_mul<E: Evaluate>(ev: &E, one: E::Value, base: &Expr, e: i64) -> Result<E::Value> {
    if e < 0 {
        return Err(Error::Parse { column: 0, message: "negative exponent on a non-unit".into() });
    }
    let b = eval(ev, base)?;
    let mut acc = one;
    for _ in 0..e {
        acc = ev.mul(&acc, &b)?;
    }
    Ok(acc)
}
