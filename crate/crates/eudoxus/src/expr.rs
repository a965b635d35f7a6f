//! Expression language: parsing, canonical printing, and evaluation to
//! certified reals.
//!
//! Grammar (whitespace-insensitive):
//!   expr    := term (('+' | '-') term)*
//!   term    := factor (('*' | '/') factor)*
//!   factor  := base ('^' nat)?
//!   base    := nat '/' nat          -- rational literal
//!            | nat
//!            | 'pi' | 'e'
//!            | 'sqrt' '(' nat ')'
//!            | 'root' '(' nat ',' nat ')'
//!            | 'polyroot' '(' int (',' int)* ';' int ',' int ')'
//!            | '-' base
//!            | '(' expr ')'
//!
//! A natural followed directly by '/' and another natural is a rational
//! literal, so `2/3 + 1/6` keeps a proven certificate; division of
//! non-literal operands goes through the multiplicative inverse.

use crate::constructors::{poly_root, HomogenizedPolynomial};
use crate::error::Error;
use crate::real::{to_decimal, Real};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Integer(BigInt),
    Rational(BigInt, BigInt),
    Pi,
    E,
    Sqrt(BigInt),
    /// `Root(m, r)`: the r-th root of the natural m.
    Root(BigInt, BigInt),
    /// `PolyRoot(coefficients, lo, hi)`: the bracketed root of the
    /// integer polynomial with the given coefficients (constant first).
    PolyRoot(Vec<BigInt>, BigInt, BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl fmt::Display for Expr {
    /// Fully parenthesized canonical form; parsing it reproduces the
    /// tree exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Integer(j) => write!(f, "{j}"),
            Expr::Rational(p, q) => write!(f, "{p}/{q}"),
            Expr::Pi => write!(f, "pi"),
            Expr::E => write!(f, "e"),
            Expr::Sqrt(m) => write!(f, "sqrt({m})"),
            Expr::Root(m, r) => write!(f, "root({m}, {r})"),
            Expr::PolyRoot(cs, lo, hi) => {
                let list: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "polyroot({}; {lo}, {hi})", list.join(", "))
            }
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(b, e) => write!(f, "({b}^{e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i]
                    .parse()
                    .map_err(|_| Error::Parse {
                        pos: start,
                        msg: "malformed number".into(),
                    })?;
                out.push((start, Tok::Nat(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                let tok = match c {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b',' => Tok::Comma,
                    b';' => Tok::Semi,
                    other => {
                        return Err(Error::Parse {
                            pos: i,
                            msg: format!("unexpected character {:?}", other as char),
                        })
                    }
                };
                out.push((i, tok));
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn nat(&mut self, what: &str) -> Result<BigInt> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Nat(n)) => Ok(n),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    /// A possibly negated natural, used in polyroot argument lists.
    fn int(&mut self, what: &str) -> Result<BigInt> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            Ok(-self.nat(what)?)
        } else {
            self.nat(what)
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.here();
            let e = self.nat("exponent")?;
            let e = e.to_u32().ok_or(Error::Parse {
                pos,
                msg: "exponent out of range".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) => {
                // A natural directly followed by '/' and a natural is a
                // rational literal, not a division.
                if self.peek2() == Some(&Tok::Slash)
                    && matches!(self.toks.get(self.pos + 2), Some((_, Tok::Nat(_))))
                {
                    self.bump();
                    self.bump();
                    let q = self.nat("denominator")?;
                    return Ok(Expr::Rational(n, q));
                }
                self.bump();
                Ok(Expr::Integer(n))
            }
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.base()?)))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                match name.as_str() {
                    "pi" => Ok(Expr::Pi),
                    "e" => Ok(Expr::E),
                    "sqrt" => {
                        self.expect(Tok::LParen, "'(' after sqrt")?;
                        let m = self.nat("radicand")?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Sqrt(m))
                    }
                    "root" => {
                        self.expect(Tok::LParen, "'(' after root")?;
                        let m = self.nat("radicand")?;
                        self.expect(Tok::Comma, "','")?;
                        let r = self.nat("root degree")?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Root(m, r))
                    }
                    "polyroot" => {
                        self.expect(Tok::LParen, "'(' after polyroot")?;
                        let mut coeffs = vec![self.int("coefficient")?];
                        while self.peek() == Some(&Tok::Comma) {
                            self.bump();
                            coeffs.push(self.int("coefficient")?);
                        }
                        self.expect(Tok::Semi, "';' before the bracket")?;
                        let lo = self.int("bracket low end")?;
                        self.expect(Tok::Comma, "','")?;
                        let hi = self.int("bracket high end")?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::PolyRoot(coeffs, lo, hi))
                    }
                    other => self.fail(format!("unknown name '{other}'")),
                }
            }
            _ => self.fail("expected a value"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        src_len: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

/// Builds the certified real denoted by an expression tree.
pub fn eval(expr: &Expr) -> Result<Real> {
    match expr {
        Expr::Integer(j) => Real::integer(j.clone()),
        Expr::Rational(p, q) => Real::rational(p.clone(), q.clone()),
        Expr::Pi => Real::pi(),
        Expr::E => Real::e(),
        Expr::Sqrt(m) => {
            if m.is_zero() {
                Real::integer(0)
            } else {
                Real::sqrt_nat(m.clone())
            }
        }
        Expr::Root(m, r) => eval_root(m, r),
        Expr::PolyRoot(coeffs, lo, hi) => {
            let poly = HomogenizedPolynomial::new(coeffs.clone(), lo.clone(), hi.clone())?;
            Ok(Real::from_slope(poly_root(&poly)?))
        }
        Expr::Neg(e) => eval(e)?.neg(),
        Expr::Add(a, b) => eval(a)?.add(&eval(b)?),
        Expr::Sub(a, b) => eval(a)?.sub(&eval(b)?),
        Expr::Mul(a, b) => eval(a)?.mul(&eval(b)?),
        Expr::Div(a, b) => eval(a)?.mul(&eval(b)?.inverse()?),
        Expr::Pow(b, e) => eval(b)?.int_power(*e),
    }
}

/// `root(m, r)`: the r-th root of m as the bracketed root of `x^r - m`.
fn eval_root(m: &BigInt, r: &BigInt) -> Result<Real> {
    if m.is_negative() || !r.is_positive() {
        return Err(Error::Invalid(format!(
            "root({m}, {r}) requires m >= 0 and r >= 1"
        )));
    }
    if m.is_zero() || m.is_one() {
        return Real::integer(m.clone());
    }
    if r.is_one() {
        return Real::integer(m.clone());
    }
    let degree = r.to_u32().ok_or_else(|| {
        Error::ResourceExhausted(format!("root degree {r} exceeds the supported range"))
    })? as usize;
    // P(x) = x^r - m is increasing on [0, inf) with P(1) < 0 < P(m).
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    coeffs[0] = -m.clone();
    coeffs[degree] = BigInt::one();
    let poly = HomogenizedPolynomial::new(coeffs, BigInt::one(), m.clone())?;
    Ok(Real::from_slope(poly_root(&poly)?))
}

/// Everything the CLI reports about one evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    /// Canonical form of the evaluated expression.
    pub expr: String,
    /// Decimal rendering (or explicit interval on a rounding boundary).
    pub decimal: String,
    /// Exact error radius at the certifying index, as "p/q".
    pub error_bound: String,
    pub certificate: CertificateSummary,
    /// Slope index at which the rendering was certified.
    pub index_used: String,
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateSummary {
    /// Defect bound of the underlying (raw) slope.
    pub bound: String,
    pub value_at_one: String,
    /// "proven" or "empirical".
    pub class: String,
}

/// Parses, evaluates, and renders in one step, timing the whole run.
pub fn evaluate_source(src: &str, digits: u32) -> Result<Evaluation> {
    let start = Instant::now();
    let ast = parse(src)?;
    let real = eval(&ast)?;
    let rendered = to_decimal(&real, digits)?;
    let cert = real.raw().certificate();
    Ok(Evaluation {
        expr: ast.to_string(),
        decimal: rendered.text,
        error_bound: format!(
            "{}/{}",
            rendered.error_bound.numer(),
            rendered.error_bound.denom()
        ),
        certificate: CertificateSummary {
            bound: cert.bound.to_string(),
            value_at_one: cert.value_at_one.to_string(),
            class: cert.class.to_string(),
        },
        index_used: rendered.index.to_string(),
        wall_ms: start.elapsed().as_millis(),
    })
}
