use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::table::TableRef;
use super::{LaurentError, LaurentPolynomial, Monomial, VariableTable};

pub(super) fn write_factors(
    f: &mut fmt::Formatter<'_>,
    m: &Monomial,
    table: &VariableTable,
) -> fmt::Result {
    let mut first = true;
    for (i, e) in m.support() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(table.name(i))?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    m: &Monomial,
    c: &BigInt,
    table: &VariableTable,
) -> fmt::Result {
    if m.is_one() {
        return write!(f, "{c}");
    }
    if !c.is_one() {
        write!(f, "{c}*")?;
    }
    write_factors(f, m, table)
}

pub(super) fn write_poly(f: &mut fmt::Formatter<'_>, p: &LaurentPolynomial) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let table = p.table();
    for (n, (m, c)) in p.terms().enumerate() {
        match (n, c.is_negative()) {
            (0, false) => {}
            (0, true) => f.write_str("-")?,
            (_, false) => f.write_str(" + ")?,
            (_, true) => f.write_str(" - ")?,
        }
        write_term(f, m, &c.abs(), table)?;
    }
    Ok(())
}

impl LaurentPolynomial {
    /// Parses an expression over `table`. Accepts the canonical text form
    /// as well as parentheses, `/` by an exact divisor and `^` with integer
    /// exponents.
    pub fn parse(text: &str, table: &TableRef) -> Result<Self, LaurentError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            table,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl Monomial {
    /// Parses a monomial such as `a^2*b^-1` or `1` over `table`.
    pub fn parse(text: &str, table: &TableRef) -> Result<Self, LaurentError> {
        let p = LaurentPolynomial::parse(text, table)?;
        p.as_monomial().cloned().ok_or_else(|| LaurentError::Parse {
            pos: 0,
            message: format!("`{text}` is not a monomial"),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a TableRef,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> LaurentError {
        LaurentError::Parse {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, LaurentError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' {
                acc.try_add(&rhs)?
            } else {
                acc.try_sub(&rhs)?
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPolynomial, LaurentError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                acc.try_mul(&rhs)?
            } else {
                acc.exact_div(&rhs)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LaurentPolynomial, LaurentError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<LaurentPolynomial, LaurentError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let e: i64 = digits
            .parse()
            .map_err(|_| self.error("expected integer exponent"))?;
        base.pow(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<LaurentPolynomial, LaurentError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let n: BigInt = digits.parse().expect("digits");
                Ok(LaurentPolynomial::constant(self.table, n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric()
                        || self.src[self.pos] == b'_'
                        || self.src[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let i = self.table.lookup(name)?;
                Ok(LaurentPolynomial::var(self.table, i))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
