//! Polynomials in the ray variables `x_0, ..., x_{n-1}` with rational
//! coefficients, used as representatives of Chow classes.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Exponent vector of a monomial, one entry per ray.
pub type Exponents = Vec<u32>;

/// A finitely supported map from exponent vectors to nonzero rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChowClass {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

pub fn degree(e: &[u32]) -> usize {
    e.iter().map(|&a| a as usize).sum()
}

/// Indices with a positive exponent.
pub fn support(e: &[u32]) -> Vec<usize> {
    e.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i).collect()
}

pub fn is_square_free(e: &[u32]) -> bool {
    e.iter().all(|&a| a <= 1)
}

impl ChowClass {
    pub fn zero(nvars: usize) -> Self {
        ChowClass { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Rational::one())
    }

    /// The generator `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponents: Exponents, coefficient: Rational) -> Self {
        let mut c = Self::zero(exponents.len());
        c.add_term(exponents, coefficient);
        c
    }

    /// The square-free monomial on the given rays.
    pub fn product_of(nvars: usize, rays: &[usize]) -> Self {
        let mut e = vec![0; nvars];
        for &r in rays {
            e[r] += 1;
        }
        Self::monomial(e, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exponents: Exponents, coefficient: Rational) {
        assert_eq!(exponents.len(), self.nvars, "exponent vector length");
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `factor * other` to `self`.
    pub fn add_scaled(&mut self, other: &ChowClass, factor: &Rational) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Rational) -> ChowClass {
        let mut out = Self::zero(self.nvars);
        out.add_scaled(self, factor);
        out
    }

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|e| degree(e)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn homogeneous_part(&self, deg: usize) -> ChowClass {
        self.filter(|e| degree(e) == deg)
    }

    pub fn filter(&self, mut keep: impl FnMut(&[u32]) -> bool) -> ChowClass {
        ChowClass {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Product, keeping only terms accepted by `keep`.
    ///
    /// The monomials rejected by `keep` must be closed under multiplication
    /// by any monomial (degree above a bound, support outside every cone),
    /// so that dropping them early commutes with further products.
    pub fn mul_filtered(&self, other: &ChowClass, mut keep: impl FnMut(&[u32]) -> bool) -> ChowClass {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut out = Self::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if keep(&e) {
                    out.add_term(e, ca * cb);
                }
            }
        }
        out
    }

    /// Parses the textual form `coeff*xI^a*xJ^b + ...`.
    pub fn parse(text: &str, nvars: usize) -> Result<ChowClass> {
        Parser::new(text, nvars)?.parse()
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowClass({self})")
    }
}

impl fmt::Display for ChowClass {
    /// Terms by descending degree, then descending exponent vector, so that
    /// `x0` terms come first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exponents, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| degree(b).cmp(&degree(a)).then_with(|| b.cmp(a)));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || degree(e) == 0 {
                factors.push(abs.to_string());
            }
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{a}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &ChowClass {
    type Output = ChowClass;

    fn add(self, rhs: &ChowClass) -> ChowClass {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &ChowClass {
    type Output = ChowClass;

    fn sub(self, rhs: &ChowClass) -> ChowClass {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;

    fn neg(self) -> ChowClass {
        self.scale(&-Rational::one())
    }
}

impl Mul for &ChowClass {
    type Output = ChowClass;

    fn mul(self, rhs: &ChowClass) -> ChowClass {
        self.mul_filtered(rhs, |_| true)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::ClassParse(msg.into())
}

impl Parser {
    fn new(text: &str, nvars: usize) -> Result<Self> {
        let mut tokens = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                _ if c.is_whitespace() => {}
                '+' => tokens.push(Token::Plus),
                '-' => tokens.push(Token::Minus),
                '*' => tokens.push(Token::Star),
                '/' => tokens.push(Token::Slash),
                '^' => tokens.push(Token::Caret),
                '0'..='9' => {
                    let start = i;
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..=i].iter().collect();
                    tokens.push(Token::Num(s.parse().map_err(|_| parse_err(format!("bad number {s}")))?));
                }
                'x' | 'X' => {
                    let start = i + 1;
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                    if start > i {
                        return Err(parse_err(format!("variable without index at column {}", start)));
                    }
                    let s: String = chars[start..=i].iter().collect();
                    let idx: usize = s.parse().map_err(|_| parse_err(format!("bad variable index {s}")))?;
                    if idx >= nvars {
                        return Err(parse_err(format!("variable x{idx} out of range (fan has {nvars} rays)")));
                    }
                    tokens.push(Token::Var(idx));
                }
                _ => return Err(parse_err(format!("unexpected character {c:?} at column {}", i + 1))),
            }
            i += 1;
        }
        Ok(Parser { tokens, pos: 0, nvars })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn parse(mut self) -> Result<ChowClass> {
        if self.tokens.is_empty() {
            return Err(parse_err("empty expression"));
        }
        let mut out = ChowClass::zero(self.nvars);
        let mut first = true;
        while self.peek().is_some() {
            let mut sign = Rational::one();
            loop {
                match self.peek() {
                    Some(Token::Plus) => {}
                    Some(Token::Minus) => sign = -sign,
                    _ => break,
                }
                self.pos += 1;
            }
            if !first && self.pos > 0 && !matches!(self.tokens[self.pos - 1], Token::Plus | Token::Minus) {
                return Err(parse_err("expected '+' or '-' between terms"));
            }
            first = false;
            let (e, c) = self.term()?;
            out.add_term(e, c * sign);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Exponents, Rational)> {
        let mut e = vec![0u32; self.nvars];
        let mut c = Rational::one();
        loop {
            match self.next() {
                Some(Token::Num(n)) => {
                    let mut q = Rational::from_integer(n);
                    if self.peek() == Some(&Token::Slash) {
                        self.pos += 1;
                        match self.next() {
                            Some(Token::Num(d)) if !d.is_zero() => q /= Rational::from_integer(d),
                            Some(Token::Num(_)) => return Err(parse_err("zero denominator")),
                            _ => return Err(parse_err("expected denominator after '/'")),
                        }
                    }
                    c *= q;
                }
                Some(Token::Var(i)) => {
                    let mut a = 1u32;
                    if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        match self.next() {
                            Some(Token::Num(n)) => {
                                a = u32::try_from(n).map_err(|_| parse_err("exponent too large"))?;
                            }
                            _ => return Err(parse_err("expected exponent after '^'")),
                        }
                    }
                    e[i] += a;
                }
                Some(t) => return Err(parse_err(format!("unexpected token {t:?}"))),
                None => return Err(parse_err("unexpected end of expression")),
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                return Ok((e, c));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_display() {
        let c = ChowClass::parse("-4/7*x0*x3 - 3/7*x0*x4", 6).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.coefficient(&[1, 0, 0, 1, 0, 0]), q(-4, 7));
        assert_eq!(c.to_string(), "-4/7*x0*x3 - 3/7*x0*x4");
        let c = ChowClass::parse("x0^3", 6).unwrap();
        assert_eq!(c.to_string(), "x0^3");
        assert_eq!(ChowClass::parse(" 2 + x1 - x1 ", 2).unwrap().to_string(), "2");
        assert_eq!(ChowClass::parse("x1*x1*3/2", 2).unwrap().to_string(), "3/2*x1^2");
        assert_eq!(ChowClass::parse("-x0 + -x1", 2).unwrap().to_string(), "-x0 - x1");
    }

    #[test]
    fn parse_errors() {
        assert!(ChowClass::parse("x9", 3).is_err());
        assert!(ChowClass::parse("", 3).is_err());
        assert!(ChowClass::parse("x0 x1", 3).is_err());
        assert!(ChowClass::parse("1/0", 3).is_err());
        assert!(ChowClass::parse("x0^", 3).is_err());
        assert!(ChowClass::parse("y0", 3).is_err());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = ChowClass::var(3, 0);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).to_string(), "0");
    }

    #[test]
    fn multiplication_expands() {
        let a = &ChowClass::one(2) + &ChowClass::var(2, 0);
        let sq = &a * &a;
        assert_eq!(sq.to_string(), "x0^2 + 2*x0 + 1");
        assert_eq!(sq.degrees(), vec![0, 1, 2]);
        assert_eq!(sq.homogeneous_part(1).to_string(), "2*x0");
    }
}
