//! Operator expressions: parser, canonical printer and evaluator.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := scalar | atom
//! scalar := rational | rational 'i' | '(' rational ('+' | '-') rational 'i' ')'
//! atom   := 'D' | 'F' | 'I' | 'L' '(' int ')' | 'P' '(' nat ')'
//!         | 'adj' '(' expr ')' | 'com' '(' expr ',' expr ')' | '(' expr ')'
//! ```
//!
//! `−` (U+2212) is read as `-`. A rational may carry a leading `-` wherever a
//! factor may start. Parentheses leave no trace in the tree.

use std::fmt;

use berezin_core::berezin::{gen_d, gen_f};
use berezin_core::conformal::gen_l;
use berezin_core::{BandOperator, GaussianRational, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpExpr {
    Scalar(GaussianRational),
    D,
    F,
    I,
    L(i64),
    P(u64),
    Adj(Box<OpExpr>),
    Com(Box<OpExpr>, Box<OpExpr>),
    Add(Box<OpExpr>, Box<OpExpr>),
    Sub(Box<OpExpr>, Box<OpExpr>),
    Mul(Box<OpExpr>, Box<OpExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at position {position}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    /// 1-based byte offset into the input.
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            chars.next();
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = p + 1;
                chars.next();
            }
            out.push((Tok::Num(text[pos..end].parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() {
            let mut end = pos;
            while let Some(&(p, d)) = chars.peek() {
                if !d.is_ascii_alphabetic() {
                    break;
                }
                end = p + 1;
                chars.next();
            }
            out.push((Tok::Ident(text[pos..end].to_string()), pos));
        } else {
            return Err(ParseError { position: pos + 1, expected: vec!["a token".into()], found: format!("'{c}'") });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (tok, pos) = &self.toks[self.at];
        let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        expected.dedup();
        ParseError { position: pos + 1, expected, found: tok.to_string() }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn expr(&mut self) -> PResult<OpExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.at += 1;
                    lhs = OpExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.at += 1;
                    lhs = OpExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<OpExpr> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.at += 1;
            lhs = OpExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn nat(&mut self) -> PResult<BigInt> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        if *self.peek() == Tok::Minus {
            self.at += 1;
            return Ok(-self.nat()?);
        }
        self.nat()
    }

    /// `['-'] nat ['/' nat]`
    fn rational(&mut self, signed: bool) -> PResult<BigRational> {
        let num = if signed { self.int()? } else { self.nat()? };
        if *self.peek() != Tok::Slash {
            return Ok(BigRational::from_integer(num));
        }
        self.at += 1;
        let den = self.nat()?;
        if den.is_zero() {
            self.at -= 1;
            return Err(self.error(&["nonzero denominator"]));
        }
        Ok(BigRational::new(num, den))
    }

    /// A rational with an optional trailing `i`.
    fn simple_scalar(&mut self) -> PResult<GaussianRational> {
        let r = self.rational(true)?;
        if self.is_ident("i") {
            self.at += 1;
            return Ok(GaussianRational::new(BigRational::zero(), r));
        }
        Ok(GaussianRational::real(r))
    }

    /// `'(' rational ('+'|'-') rational 'i' ')'`
    fn complex_scalar(&mut self) -> PResult<GaussianRational> {
        self.expect(Tok::LParen, "'('")?;
        let re = self.rational(true)?;
        let sign = match self.peek() {
            Tok::Plus => 1,
            Tok::Minus => -1,
            _ => return Err(self.error(&["'+'", "'-'"])),
        };
        self.at += 1;
        let im = self.rational(false)?;
        if !self.is_ident("i") {
            return Err(self.error(&["'i'"]));
        }
        self.at += 1;
        self.expect(Tok::RParen, "')'")?;
        let im = if sign < 0 { -im } else { im };
        Ok(GaussianRational::new(re, im))
    }

    fn call_arg(&mut self) -> PResult<OpExpr> {
        self.expect(Tok::LParen, "'('")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(e)
    }

    fn factor(&mut self) -> PResult<OpExpr> {
        match self.peek().clone() {
            Tok::Num(_) => Ok(OpExpr::Scalar(self.simple_scalar()?)),
            Tok::Minus if matches!(self.peek_at(1), Tok::Num(_)) => Ok(OpExpr::Scalar(self.simple_scalar()?)),
            Tok::LParen => {
                let save = self.at;
                if let Ok(c) = self.complex_scalar() {
                    return Ok(OpExpr::Scalar(c));
                }
                self.at = save;
                self.call_arg()
            }
            Tok::Ident(name) => {
                self.at += 1;
                match name.as_str() {
                    "D" => Ok(OpExpr::D),
                    "F" => Ok(OpExpr::F),
                    "I" => Ok(OpExpr::I),
                    "L" => {
                        self.expect(Tok::LParen, "'('")?;
                        let k = self.int()?;
                        self.at -= 1;
                        let k = i64::try_from(k).map_err(|_| self.error(&["integer in range"]))?;
                        self.at += 1;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(OpExpr::L(k))
                    }
                    "P" => {
                        self.expect(Tok::LParen, "'('")?;
                        let k = self.nat()?;
                        self.at -= 1;
                        let k = u64::try_from(k).map_err(|_| self.error(&["integer in range"]))?;
                        self.at += 1;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(OpExpr::P(k))
                    }
                    "adj" => Ok(OpExpr::Adj(Box::new(self.call_arg()?))),
                    "com" => {
                        self.expect(Tok::LParen, "'('")?;
                        let a = self.expr()?;
                        self.expect(Tok::Comma, "','")?;
                        let b = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(OpExpr::Com(Box::new(a), Box::new(b)))
                    }
                    _ => {
                        self.at -= 1;
                        Err(self.error(FACTOR_START))
                    }
                }
            }
            _ => Err(self.error(FACTOR_START)),
        }
    }
}

const FACTOR_START: &[&str] = &["rational", "'('", "'D'", "'F'", "'I'", "'L'", "'P'", "'adj'", "'com'"];

pub fn parse_expr(text: &str) -> Result<OpExpr, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["'+'", "'-'", "'*'", "end of input"]));
    }
    Ok(e)
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_scalar(c: &GaussianRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rat(&c.re),
        (true, false) => format!("{}i", fmt_rat(&c.im)),
        (false, false) => {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            format!("({} {sign} {}i)", fmt_rat(&c.re), fmt_rat(&c.im.abs()))
        }
    }
}

/// A sum that would read back as a complex literal once parenthesized.
fn looks_like_complex(lhs: &OpExpr, rhs: &OpExpr) -> bool {
    matches!(
        (lhs, rhs),
        (OpExpr::Scalar(a), OpExpr::Scalar(b)) if a.im.is_zero() && b.re.is_zero() && b.im.is_positive()
    )
}

impl OpExpr {
    fn is_sum(&self) -> bool {
        matches!(self, OpExpr::Add(..) | OpExpr::Sub(..))
    }

    fn write_parens(&self, out: &mut String) {
        match self {
            OpExpr::Add(a, b) | OpExpr::Sub(a, b) if looks_like_complex(a, b) => {
                let op = if matches!(self, OpExpr::Add(..)) { '+' } else { '-' };
                out.push_str(&format!("(({}) {op} ", fmt_scalar(scalar_of(a))));
                b.write(out);
                out.push(')');
            }
            _ => {
                out.push('(');
                self.write(out);
                out.push(')');
            }
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            OpExpr::Scalar(c) => out.push_str(&fmt_scalar(c)),
            OpExpr::D => out.push('D'),
            OpExpr::F => out.push('F'),
            OpExpr::I => out.push('I'),
            OpExpr::L(k) => out.push_str(&format!("L({k})")),
            OpExpr::P(k) => out.push_str(&format!("P({k})")),
            OpExpr::Adj(e) => {
                out.push_str("adj(");
                e.write(out);
                out.push(')');
            }
            OpExpr::Com(a, b) => {
                out.push_str("com(");
                a.write(out);
                out.push_str(", ");
                b.write(out);
                out.push(')');
            }
            OpExpr::Add(a, b) | OpExpr::Sub(a, b) => {
                a.write(out);
                out.push_str(if matches!(self, OpExpr::Add(..)) { " + " } else { " - " });
                if b.is_sum() {
                    b.write_parens(out);
                } else {
                    b.write(out);
                }
            }
            OpExpr::Mul(a, b) => {
                if a.is_sum() {
                    a.write_parens(out);
                } else {
                    a.write(out);
                }
                out.push('*');
                if b.is_sum() || matches!(**b, OpExpr::Mul(..)) {
                    b.write_parens(out);
                } else {
                    b.write(out);
                }
            }
        }
    }
}

fn scalar_of(e: &OpExpr) -> &GaussianRational {
    match e {
        OpExpr::Scalar(c) => c,
        _ => unreachable!("checked by looks_like_complex"),
    }
}

/// Canonical spacing: `" + "`, `" - "`, `", "`, and no spaces around `*`.
impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

/// Exact value of `e` on `V_h`.
pub fn eval_expr(e: &OpExpr, weight: &Weight) -> berezin_core::Result<BandOperator> {
    Ok(match e {
        OpExpr::Scalar(c) => BandOperator::scalar(weight, c.clone()),
        OpExpr::D => gen_d(weight),
        OpExpr::F => gen_f(weight),
        OpExpr::I => BandOperator::identity(weight),
        OpExpr::L(k) => gen_l(*k, weight)?,
        OpExpr::P(k) => BandOperator::projector(weight, *k as usize),
        OpExpr::Adj(a) => eval_expr(a, weight)?.adjoint(),
        OpExpr::Com(a, b) => eval_expr(a, weight)?.commutator(&eval_expr(b, weight)?)?,
        OpExpr::Add(a, b) => eval_expr(a, weight)?.add(&eval_expr(b, weight)?)?,
        OpExpr::Sub(a, b) => eval_expr(a, weight)?.sub(&eval_expr(b, weight)?)?,
        OpExpr::Mul(a, b) => eval_expr(a, weight)?.mul(&eval_expr(b, weight)?)?,
    })
}
