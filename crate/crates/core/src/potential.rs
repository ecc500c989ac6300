//! Laurent-polynomial potentials `V(x) = Σ c_p x^p`, `p ∈ ℤ`, and their parser.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, ExactRational};

/// Finite Laurent polynomial keyed by power; zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, ExactRational>,
}

impl LaurentPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, ExactRational)>>(terms: I) -> Self {
        let mut p = Self::new();
        for (power, c) in terms {
            p.add_term(power, c);
        }
        p
    }

    pub fn add_term(&mut self, power: i64, c: ExactRational) {
        let entry = self.terms.entry(power).or_default();
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&power);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactRational)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True if only even powers appear, so the potential preserves parity.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|p| p % 2 == 0)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let magnitude = Rational::from(c.abs_ref());
            match (i, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}*x^{}", format_rational(&magnitude), p)?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).parse()
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, position: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            input: self.input.to_string(),
            position,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        let mut poly = LaurentPoly::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.error(0, "empty potential"));
        }
        let mut sign = 1;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            sign = if c == b'-' { -1 } else { 1 };
            self.pos += 1;
        }
        loop {
            let (power, coeff) = self.term()?;
            poly.add_term(power, coeff * sign);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(_) => return Err(self.error(self.pos, "expected '+' or '-' between terms")),
            }
            self.pos += 1;
        }
        Ok(poly)
    }

    /// `[number ['*']] [x ['^' int]]`, at least one part present.
    fn term(&mut self) -> Result<(i64, ExactRational)> {
        self.skip_ws();
        let start = self.pos;
        let mut coeff = None;
        if matches!(self.peek(), Some(b'0'..=b'9' | b'.')) {
            coeff = Some(self.number()?);
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                if !matches!(self.peek(), Some(b'x')) {
                    return Err(self.error(self.pos, "expected 'x' after '*'"));
                }
            }
        }
        let power = match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                }
            }
            Some(b'P' | b'p') => {
                return Err(self.error(
                    self.pos,
                    "momentum terms are not allowed in a potential; inverse momentum has no \
                     representation on this basis",
                ))
            }
            _ if coeff.is_some() => 0,
            _ => return Err(self.error(start, "expected a number or 'x'")),
        };
        Ok((power, coeff.unwrap_or_else(|| Rational::from(1))))
    }

    fn number(&mut self) -> Result<ExactRational> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            let exp_sign = matches!(c, b'+' | b'-')
                && self.pos > start
                && matches!(self.bytes[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || matches!(c, b'.' | b'e' | b'E' | b'/') || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        parse_rational(&self.input[start..self.pos]).map_err(|e| match e {
            Error::Parse {
                position, message, ..
            } => self.error(start + position, message),
            other => other,
        })
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let parens = self.peek() == Some(b'(');
        if parens {
            self.pos += 1;
            self.skip_ws();
        }
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'.' | b'/')) {
            return Err(self.error(self.pos, "only integer powers of x are supported"));
        }
        let power: i64 = self.input[start..self.pos]
            .parse()
            .map_err(|_| self.error(start, "expected an integer power"))?;
        if parens {
            self.skip_ws();
            if self.peek() != Some(b')') {
                return Err(self.error(self.pos, "expected ')'"));
            }
            self.pos += 1;
        }
        Ok(power)
    }
}
