//! Text grammar for polynomials.
//!
//! ```text
//! poly   := ['-'] term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! coeff  := integer ['/' integer]
//! factor := var ('^' integer)?
//! var    := 'x(' i ',' j ')' | 'g(' r ',' s ')' | 't(' k ')'
//! ```
//!
//! Whitespace is ignored. Coefficients are reduced into the target field.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use super::{Monomial, Poly, Var};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: Vec<(usize, usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut col) = (1, 1);
        for c in src.chars() {
            if c == '\n' {
                line += 1;
                col = 1;
                continue;
            }
            if !c.is_whitespace() {
                chars.push((line, col, c));
            }
            col += 1;
        }
        Parser { chars, pos: 0, src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, _, c)| c)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = match self.chars.get(self.pos) {
            Some(&(l, c, _)) => (l, c),
            None => {
                let line = self.src.lines().count().max(1);
                let column = self.src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
                (line, column)
            }
        };
        ParseError { line, column, message: message.into() }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            self.pos = start;
            return Err(self.err("expected integer"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small(&mut self, what: &str) -> Result<usize, ParseError> {
        let at = self.pos;
        let v = self.integer()?;
        match usize::try_from(v) {
            Ok(v) if v >= 1 && v <= u16::MAX as usize => Ok(v),
            _ => {
                self.pos = at;
                Err(self.err(format!("{what} index out of range")))
            }
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        let fam = match self.peek() {
            Some(c @ ('x' | 'g' | 't')) => c,
            _ => return Err(self.err("expected variable x(i,j), g(r,s) or t(k)")),
        };
        self.pos += 1;
        self.expect('(')?;
        let v = if fam == 't' {
            Var::t(self.small("parameter")?)
        } else {
            let i = self.small("row")?;
            self.expect(',')?;
            let j = self.small("column")?;
            if fam == 'x' {
                Var::x(i, j)
            } else {
                Var::g(i, j)
            }
        };
        self.expect(')')?;
        Ok(v)
    }

    fn factor(&mut self) -> Result<(Var, u32), ParseError> {
        let v = self.var()?;
        let mut e = 1u32;
        if self.peek() == Some('^') {
            self.pos += 1;
            let at = self.pos;
            let big = self.integer()?;
            e = u32::try_from(big).map_err(|_| {
                self.pos = at;
                self.err("exponent too large")
            })?;
        }
        Ok((v, e))
    }

    fn term<F: Field>(&mut self) -> Result<(F, Monomial), ParseError> {
        let mut coeff = F::one();
        let mut pairs = Vec::new();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.integer()?;
            let mut den = BigInt::one();
            if self.peek() == Some('/') {
                self.pos += 1;
                den = self.integer()?;
            }
            coeff = F::from_fraction(&num, &den)
                .ok_or_else(|| self.err("denominator vanishes in the coefficient field"))?;
        } else {
            pairs.push(self.factor()?);
        }
        while self.peek() == Some('*') {
            self.pos += 1;
            pairs.push(self.factor()?);
        }
        Ok((coeff, Monomial::from_pairs(pairs)))
    }

    fn poly<F: Field>(&mut self) -> Result<Poly<F>, ParseError> {
        let mut p = Poly::zero();
        let mut sign = F::one();
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -F::one();
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        loop {
            let (c, m) = self.term::<F>()?;
            p.add_term(m, sign * c);
            match self.peek() {
                Some('+') => sign = F::one(),
                Some('-') => sign = -F::one(),
                None => break,
                Some(other) => return Err(self.err(format!("unexpected '{other}'"))),
            }
            self.pos += 1;
        }
        Ok(p)
    }
}

/// Parses one polynomial.
pub fn parse_poly<F: Field>(src: &str) -> Result<Poly<F>, ParseError> {
    let mut p = Parser::new(src);
    if p.peek().is_none() {
        return Err(p.err("empty polynomial"));
    }
    p.poly()
}

/// Parses one polynomial per non-empty line; `#` starts a comment.
pub fn parse_poly_list<F: Field>(src: &str) -> Result<Vec<Poly<F>>, ParseError> {
    let mut out = Vec::new();
    for (k, line) in src.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_poly::<F>(body).map_err(|mut e| {
            e.line = k + 1;
            e
        })?);
    }
    Ok(out)
}
