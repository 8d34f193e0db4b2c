//! Expressions over the generators and the parameters, e.g.
//! `(q^-1)*dx*th + (1-p)*dth*x`.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{AlgebraError, Element, Letter, Relations, Word};
use crate::coeffs::{Param, ParamRational};

pub type Span = Range<usize>;

#[derive(Clone, Debug)]
pub enum ExprKind {
    Scalar(ParamRational),
    Gen(Letter),
    Product(Vec<Expr>),
    Sum(Vec<Expr>),
    Neg(Box<Expr>),
}

/// Syntax tree node; equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for ExprKind {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (self, other) {
            (Scalar(a), Scalar(b)) => a == b,
            (Gen(a), Gen(b)) => a == b,
            (Product(a), Product(b)) | (Sum(a), Sum(b)) => a == b,
            (Neg(a), Neg(b)) => a == b,
            _ => false,
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<&'static str>,
}

fn expected_suffix(expected: &[&'static str]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Star,
    Slash,
    Plus,
    Minus,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
        }
    }
}

const ATOM: &[&str] = &["generator", "parameter", "integer", "`(`", "`-`"];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

fn error_at(src: &str, offset: usize, message: String, expected: &[&'static str]) -> ParseError {
    let (line, column) = position(src, offset);
    ParseError {
        message,
        line,
        column,
        expected: expected.to_vec(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let single = match c {
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            chars.next();
            out.push((t, i..i + 1));
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            out.push((Tok::Int(src[i..end].parse().expect("digits")), i..end));
        } else if c.is_ascii_alphabetic() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_alphanumeric() {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            out.push((Tok::Ident(src[i..end].to_string()), i..end));
        } else {
            return Err(error_at(src, i, format!("unexpected character `{c}`"), &[]));
        }
    }
    Ok(out)
}

fn param_of(name: &str) -> Option<Param> {
    Param::ALL.into_iter().find(|p| p.name() == name)
}

fn scalar(c: ParamRational, span: Span) -> Expr {
    Expr {
        kind: ExprKind::Scalar(c),
        span,
    }
}

fn as_scalar(e: &Expr) -> Option<&ParamRational> {
    match &e.kind {
        ExprKind::Scalar(c) => Some(c),
        _ => None,
    }
}

/// Flattens nested products and folds all scalar factors into one leading
/// scalar (scalars are central).
fn product(factors: Vec<Expr>, span: Span) -> Expr {
    let mut coeff = ParamRational::one();
    let mut rest = Vec::new();
    let mut scalar_span: Option<Span> = None;
    for f in factors {
        match f.kind {
            ExprKind::Scalar(c) => {
                coeff = &coeff * &c;
                scalar_span.get_or_insert(f.span);
            }
            ExprKind::Product(inner) => {
                for g in inner {
                    match g.kind {
                        ExprKind::Scalar(c) => {
                            coeff = &coeff * &c;
                            scalar_span.get_or_insert(g.span);
                        }
                        _ => rest.push(g),
                    }
                }
            }
            _ => rest.push(f),
        }
    }
    if rest.is_empty() || coeff.is_zero() {
        return scalar(coeff, span);
    }
    if !coeff.is_one() {
        rest.insert(0, scalar(coeff, scalar_span.unwrap_or(span.clone())));
    }
    if rest.len() == 1 {
        return rest.pop().unwrap();
    }
    Expr {
        kind: ExprKind::Product(rest),
        span,
    }
}

/// Flattens nested sums; a sum of scalars folds to a scalar.
fn sum(terms: Vec<Expr>, span: Span) -> Expr {
    let mut flat = Vec::new();
    for t in terms {
        match t.kind {
            ExprKind::Sum(inner) => flat.extend(inner),
            _ => flat.push(t),
        }
    }
    if flat.iter().all(|t| as_scalar(t).is_some()) {
        let total = flat.iter().fold(ParamRational::zero(), |acc, t| &acc + as_scalar(t).unwrap());
        return scalar(total, span);
    }
    if flat.len() == 1 {
        return flat.pop().unwrap();
    }
    Expr {
        kind: ExprKind::Sum(flat),
        span,
    }
}

fn neg(e: Expr, span: Span) -> Expr {
    match e.kind {
        ExprKind::Scalar(c) => scalar(-c, span),
        _ => Expr {
            kind: ExprKind::Neg(Box::new(e)),
            span,
        },
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(_, s)| s.start)
    }

    fn end_of_previous(&self) -> usize {
        self.pos.checked_sub(1).map_or(0, |p| self.toks[p].1.end)
    }

    fn error(&self, message: String, expected: &[&'static str]) -> ParseError {
        error_at(self.src, self.offset(), message, expected)
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("unexpected {t}"), expected),
            None => self.error("unexpected end of input".into(), expected),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let start = self.offset();
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t_start = self.offset();
            let t = self.term()?;
            let span = t_start..self.end_of_previous();
            terms.push(if negate { neg(t, span) } else { t });
            negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(sum(terms, start..self.end_of_previous()))
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::Int(_) | Tok::LParen))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let start = self.offset();
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.factor()?;
                    let inv = as_scalar(&d)
                        .ok_or_else(|| error_at(self.src, at, "can only divide by a scalar".into(), &[]))?
                        .inv()
                        .map_err(|_| error_at(self.src, at, "division by zero".into(), &[]))?;
                    factors.push(scalar(inv, d.span));
                }
                _ if self.starts_factor() => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(product(factors, start..self.end_of_previous()))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let start = self.offset();
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(neg(inner, start..self.end_of_previous()));
        }
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
        let at = self.offset();
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Err(self.unexpected(&["integer"]));
        };
        self.pos += 1;
        let n: i32 = n
            .try_into()
            .map_err(|_| error_at(self.src, at, "exponent too large".into(), &[]))?;
        let n = if negative { -n } else { n };
        let span = start..self.end_of_previous();
        self.power(base, n, span, at)
    }

    fn power(&self, base: Expr, n: i32, span: Span, at: usize) -> Result<Expr, ParseError> {
        if let Some(c) = as_scalar(&base) {
            let v = c
                .pow(n)
                .map_err(|_| error_at(self.src, at, "zero to a negative power".into(), &[]))?;
            return Ok(scalar(v, span));
        }
        let (base, n) = match (&base.kind, n < 0) {
            (_, false) => (base, n),
            (ExprKind::Gen(Letter::X), true) => (gen(Letter::XInv, base.span.clone()), -n),
            (ExprKind::Gen(Letter::XInv), true) => (gen(Letter::X, base.span.clone()), -n),
            _ => {
                return Err(error_at(
                    self.src,
                    at,
                    "negative powers are only defined for x, xinv and scalars".into(),
                    &[],
                ))
            }
        };
        Ok(product(vec![base; n as usize], span))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some((tok, span)) = self.toks.get(self.pos).cloned() else {
            return Err(self.unexpected(ATOM));
        };
        match tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(scalar(ParamRational::from_rational(BigRational::from_integer(n)), span))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(l) = Letter::from_token(&name) {
                    Ok(gen(l, span))
                } else if let Some(p) = param_of(&name) {
                    Ok(scalar(ParamRational::param(p), span))
                } else {
                    Err(error_at(
                        self.src,
                        span.start,
                        format!("unknown token `{name}`"),
                        &["x", "xinv", "th", "dx", "dth", "w", "u", "q", "p", "r", "s"],
                    ))
                }
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected(&["`)`", "`+`", "`-`", "`*`"]));
                }
                self.pos += 1;
                Ok(Expr {
                    kind: inner.kind,
                    span: span.start..self.end_of_previous(),
                })
            }
            _ => Err(self.unexpected(ATOM)),
        }
    }
}

fn gen(l: Letter, span: Span) -> Expr {
    Expr {
        kind: ExprKind::Gen(l),
        span,
    }
}

pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    if p.toks.is_empty() {
        return Err(p.unexpected(ATOM));
    }
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected(&["`+`", "`-`", "`*`", "`/`", "end of input"]));
    }
    Ok(e)
}

/// A parameter value for `--set`; must not mention generators.
pub fn parse_scalar(src: &str) -> Result<ParamRational, ParseError> {
    let e = parse_expression(src)?;
    as_scalar(&e)
        .cloned()
        .ok_or_else(|| error_at(src, 0, "expected a scalar expression".into(), &[]))
}

impl Expr {
    /// Letters used anywhere in the expression.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut Vec<Letter>) {
        match &self.kind {
            ExprKind::Scalar(_) => {}
            ExprKind::Gen(l) => out.push(*l),
            ExprKind::Product(v) | ExprKind::Sum(v) => v.iter().for_each(|e| e.collect_letters(out)),
            ExprKind::Neg(e) => e.collect_letters(out),
        }
    }

    /// The element in `rels`, not normalised.
    pub fn to_element(&self, rels: &Arc<Relations>) -> Result<Element, AlgebraError> {
        Ok(match &self.kind {
            ExprKind::Scalar(c) => Element::scalar(rels, c.clone()),
            ExprKind::Gen(l) => Element::word(rels, Word(vec![*l]), ParamRational::one())?,
            ExprKind::Product(v) => {
                let mut acc = Element::one(rels);
                for e in v {
                    acc = acc.multiply(&e.to_element(rels)?)?;
                }
                acc
            }
            ExprKind::Sum(v) => {
                let mut acc = Element::zero(rels);
                for e in v {
                    acc = acc.checked_add(&e.to_element(rels)?)?;
                }
                acc
            }
            ExprKind::Neg(e) => -&e.to_element(rels)?,
        })
    }
}

fn fmt_scalar_factor(c: &ParamRational) -> String {
    if c.is_atomic() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

fn fmt_factor(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &e.kind {
        ExprKind::Sum(_) | ExprKind::Neg(_) => write!(f, "({e})"),
        ExprKind::Scalar(c) => f.write_str(&fmt_scalar_factor(c)),
        _ => write!(f, "{e}"),
    }
}

/// Pretty-printing; re-parsing gives back an equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Scalar(c) => write!(f, "{c}"),
            ExprKind::Gen(l) => f.write_str(l.token()),
            ExprKind::Product(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    fmt_factor(e, f)?;
                }
                Ok(())
            }
            ExprKind::Sum(v) => {
                for (i, e) in v.iter().enumerate() {
                    match (&e.kind, i) {
                        (ExprKind::Neg(inner), 0) => {
                            f.write_str("-")?;
                            fmt_factor(inner, f)?;
                        }
                        (ExprKind::Neg(inner), _) => {
                            f.write_str(" - ")?;
                            fmt_factor(inner, f)?;
                        }
                        (ExprKind::Scalar(c), 0) => f.write_str(&fmt_scalar_factor(c))?,
                        (ExprKind::Scalar(c), _) => write!(f, " + {}", fmt_scalar_factor(c))?,
                        (_, 0) => write!(f, "{e}")?,
                        _ => write!(f, " + {e}")?,
                    }
                }
                Ok(())
            }
            ExprKind::Neg(e) => {
                f.write_str("-")?;
                fmt_factor(e, f)
            }
        }
    }
}
