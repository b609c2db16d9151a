//! Text grammar for integer polynomials in `x`:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use thiserror::Error;

use super::int_poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial parse error at column {column}: {message}")]
pub struct ParsePolyError {
    /// 1-based column of the offending character.
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

const MAX_EXPONENT: u32 = 4096;

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError {
            column: self.pos + 1,
            message: message.into(),
        })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParsePolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        if self.src.get(self.pos) == Some(&b'.') {
            return self.err("non-integer coefficient");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
        Ok(digits.parse().unwrap_or_default())
    }

    fn expr(&mut self) -> Result<IntPoly, ParsePolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly, ParsePolyError> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPoly, ParsePolyError> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<IntPoly, ParsePolyError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.integer()?;
            let exp: u32 = match u32::try_from(&exp) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err("exponent too large"),
            };
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPoly, ParsePolyError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                if self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    return self.err("only the variable x is allowed");
                }
                Ok(IntPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(IntPoly::constant(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => self.err("only the variable x is allowed"),
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_poly(text: &str) -> Result<IntPoly, ParsePolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f = parse_poly("x^7 - 7*x + 3").unwrap();
        assert_eq!(f, IntPoly::from_i64s(&[3, -7, 0, 0, 0, 0, 0, 1]));
        let g = parse_poly("(x+1)*(x-1)").unwrap();
        assert_eq!(g, IntPoly::from_i64s(&[-1, 0, 1]));
        assert_eq!(parse_poly("-x^2").unwrap(), IntPoly::from_i64s(&[0, 0, -1]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poly("x^2 - 1.5").is_err());
        assert!(parse_poly("y^2 + 1").is_err());
        assert!(parse_poly("x^2 +").is_err());
        assert!(parse_poly("xx").is_err());
        let e = parse_poly("x + z").unwrap_err();
        assert_eq!(e.column, 5);
    }
}
