//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | symbol | '(' expr ')'
//! ```
//!
//! Symbols are the declared variables and the generator of the coefficient
//! field. Juxtaposition is not multiplication. Division is only by nonzero
//! constants, which lets rational coefficients round-trip through printing.

use num_bigint::BigInt;

use super::{MultiPoly, PolyError};
use crate::field::FieldDescriptor;

/// Bounds that keep hostile input from exploding.
#[derive(Clone, Copy, Debug)]
pub struct ParseLimits {
    pub max_exponent: u32,
    pub max_terms: usize,
    pub max_depth: usize,
}

impl Default for ParseLimits {
    fn default() -> Self {
        ParseLimits { max_exponent: 512, max_terms: 20_000, max_depth: 128 }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> PolyError {
    PolyError::SyntaxError { position, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(start, format!("unexpected character {ch:?}")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    field: &'a FieldDescriptor,
    limits: ParseLimits,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn check_size(&self, p: &MultiPoly) -> Result<(), PolyError> {
        if p.num_terms() > self.limits.max_terms {
            return Err(syntax(self.offset(), "expression expands to too many terms"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        self.depth += 1;
        if self.depth > self.limits.max_depth {
            return Err(syntax(self.offset(), "expression nested too deeply"));
        }
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
            self.check_size(&acc)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if acc.num_terms().saturating_mul(rhs.num_terms()) > self.limits.max_terms {
                        return Err(syntax(self.offset(), "expression expands to too many terms"));
                    }
                    acc = acc.mul(&rhs)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    let c = rhs.as_constant().ok_or_else(|| syntax(at, "division by a non-constant"))?;
                    if self.field.is_zero(&c) {
                        return Err(syntax(at, "division by zero"));
                    }
                    acc = acc.scale(&self.field.inv(&c)?);
                }
                _ => break,
            }
            self.check_size(&acc)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, PolyError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            self.depth += 1;
            if self.depth > self.limits.max_depth {
                return Err(syntax(self.offset(), "expression nested too deeply"));
            }
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(inner.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return Err(syntax(at, "expected a nonnegative integer exponent"));
        };
        self.pos += 1;
        let e: u32 = match u32::try_from(&e) {
            Ok(e) if e <= self.limits.max_exponent => e,
            _ => return Err(syntax(at, "exponent too large")),
        };
        // cheap bound before expanding: a k-term base gives at least k terms
        if base.num_terms() > 1 && e > 1 {
            let bound = (base.num_terms() as f64).powf(e as f64).min(f64::MAX);
            let degree_bound = (base.total_degree().unwrap_or(0) as f64 * e as f64 + 1.0).powi(self.vars.len() as i32);
            if bound.min(degree_bound) > self.limits.max_terms as f64 {
                return Err(syntax(at, "expression expands to too many terms"));
            }
        }
        let out = base.pow(e);
        self.check_size(&out)?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => {
                let c = self.field.from_scalar(self.field.base().from_bigint(&n));
                Ok(MultiPoly::constant(self.field, self.vars, c))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(MultiPoly::var(self.field, self.vars, i));
                }
                match (self.field.extension_data(), self.field.generator()) {
                    (Some(ext), Some(g)) if ext.generator() == name => Ok(MultiPoly::constant(self.field, self.vars, g)),
                    _ => Err(PolyError::UnknownSymbol { position: at, name }),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(syntax(at, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "integer",
        Tok::Ident(_) => "symbol",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
    }
}

/// Parses `text` as a polynomial in `vars` over `field`.
pub fn parse(text: &str, vars: &[String], field: &FieldDescriptor) -> Result<MultiPoly, PolyError> {
    parse_with_limits(text, vars, field, ParseLimits::default())
}

pub fn parse_with_limits(
    text: &str,
    vars: &[String],
    field: &FieldDescriptor,
    limits: ParseLimits,
) -> Result<MultiPoly, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), vars, field, limits, depth: 0 };
    let out = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(syntax(p.offset(), format!("unexpected {}", describe(tok))));
    }
    Ok(out)
}
