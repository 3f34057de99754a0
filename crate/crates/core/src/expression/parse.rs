//! Recursive-descent parser for metric coefficient expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := int | name | '(' expr ')' | '-' factor
//! ```
//!
//! Names are `x1..x4` or parameters bound by the caller. A divisor must fold
//! to a nonzero constant, so the result is always a polynomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::poly::{Coord, Poly4};
use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound parameter `{name}` at byte {pos}")]
    UnboundParameter { name: String, pos: usize },
    #[error("division by a non-constant expression at byte {pos}")]
    NonConstantDivisor { pos: usize },
    #[error("division by zero at byte {pos}")]
    DivisionByZero { pos: usize },
    #[error("exponent at byte {pos} must be a non-negative integer")]
    InvalidExponent { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    /// Anything the grammar has no use for, kept so errors point at it.
    Stray(char),
    End,
}

fn lex(text: &str) -> Vec<(Tok, usize)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Name(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                i += ch.len_utf8();
                out.push((Tok::Stray(ch), start));
                continue;
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    out
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    params: &'a BTreeMap<String, Rational>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Poly4, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly4, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.factor()?;
                    let c = d
                        .constant_value()
                        .ok_or(ParseError::NonConstantDivisor { pos })?;
                    if c.is_zero() {
                        return Err(ParseError::DivisionByZero { pos });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly4, ParseError> {
        let b = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(b);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().0 {
            Tok::Int(n) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| ParseError::InvalidExponent { pos })?;
                // "x^1.5" lexes as Int(1) followed by a stray '.'
                if matches!(self.peek(), Tok::Stray('.')) {
                    return Err(ParseError::InvalidExponent { pos });
                }
                Ok(b.pow(e))
            }
            Tok::Minus | Tok::LParen | Tok::Name(_) | Tok::Stray('.') => {
                Err(ParseError::InvalidExponent { pos })
            }
            _ => Err(ParseError::Syntax {
                pos,
                msg: "expected an integer exponent".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<Poly4, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => {
                if matches!(self.peek(), Tok::Stray('.')) {
                    return self.syntax("decimal literals are not allowed; write p/q");
                }
                Ok(Poly4::constant(Rational::from_integer(n)))
            }
            Tok::Name(name) => {
                if let Some(c) = coordinate(&name) {
                    return Ok(Poly4::var(c));
                }
                match self.params.get(&name) {
                    Some(v) => Ok(Poly4::constant(v.clone())),
                    None => Err(ParseError::UnboundParameter { name, pos }),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Minus => Ok(-self.factor()?),
            Tok::End => Err(ParseError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            other => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected {}", describe(&other)),
            }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Stray(c) => format!("character `{c}`"),
        Tok::RParen => "`)`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        other => format!("{other:?}"),
    }
}

fn coordinate(name: &str) -> Option<Coord> {
    match name {
        "x1" => Some(Coord::X1),
        "x2" => Some(Coord::X2),
        "x3" => Some(Coord::X3),
        "x4" => Some(Coord::X4),
        _ => None,
    }
}

/// Parses `text` into a canonical polynomial, substituting bound parameters.
pub fn parse(text: &str, params: &BTreeMap<String, Rational>) -> Result<Poly4, ParseError> {
    let mut p = Parser {
        toks: lex(text),
        at: 0,
        params,
    };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Name(_) | Tok::Int(_) | Tok::LParen => {
            p.syntax("implicit multiplication is not allowed; use `*`")
        }
        other => {
            let msg = format!("unexpected {}", describe(other));
            p.syntax(msg)
        }
    }
}
