//! Recursive-descent parser for element expressions such as
//! `1 + 3*z^2*r - r^2/2`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'z' | 'r' | '(' expr ')'
//! ```
//!
//! `z` is `zeta_N` and `r` is the real radical `a^(1/N)`. A rational literal
//! `p/q` is the division `p / q`. Division by any invertible element is
//! accepted. Error positions are 0-based byte offsets into the input.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Algebra, AlgebraElement};
use crate::{Error, Result};

/// Parses `input` as an element of `alg`.
pub fn parse_element(alg: &Algebra, input: &str) -> Result<AlgebraElement> {
    let mut p = Parser { alg, src: input.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    alg: &'a Algebra,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
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

    fn expr(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                &acc * &rhs
            } else {
                let inv = match rhs.as_rational() {
                    Some(q) if q == &BigRational::from_integer(0.into()) => {
                        return Err(Error::Parse { pos: at, msg: "division by zero".into() })
                    }
                    Some(q) => AlgebraElement::from_rational(self.alg, q.recip()),
                    None => rhs.inverse().map_err(|_| Error::Parse {
                        pos: at,
                        msg: "divisor is not invertible".into(),
                    })?,
                };
                &acc * &inv
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<AlgebraElement> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<AlgebraElement> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse { pos: at, msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a nonnegative integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<AlgebraElement> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let v = self.integer()?;
                Ok(AlgebraElement::from_rational(self.alg, BigRational::from_integer(v)))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(AlgebraElement::x(self.alg))
            }
            Some(b'r') => {
                self.pos += 1;
                Ok(AlgebraElement::y(self.alg))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::exact::{rat, ratio};

    #[test]
    fn parses_grammar() {
        let alg = make_algebra(2, 3).unwrap();
        let e = parse_element(&alg, "1 + 3*z^2*r - r^2/2").unwrap();
        let z = AlgebraElement::x(&alg);
        let r = AlgebraElement::y(&alg);
        let expected = &(&AlgebraElement::one(&alg) + &(&(&z * &z) * &r).scalar_mul(&rat(3)))
            - &(&r * &r).scalar_mul(&ratio(1, 2));
        assert_eq!(e, expected);
        assert_eq!(parse_element(&alg, "-(1+r)^2").unwrap(), (&AlgebraElement::one(&alg) + &r).pow(2).neg());
        assert_eq!(parse_element(&alg, "7/14").unwrap(), AlgebraElement::from_rational(&alg, ratio(1, 2)));
        assert_eq!(parse_element(&alg, "r^3").unwrap(), AlgebraElement::from_int(&alg, 2));
    }

    #[test]
    fn display_round_trips() {
        let alg = make_algebra(3, 4).unwrap();
        let e = parse_element(&alg, "(2 - z*r/3)^3 + r^3").unwrap();
        assert_eq!(parse_element(&alg, &e.to_string()).unwrap(), e);
    }

    #[test]
    fn error_positions() {
        let alg = make_algebra(2, 2).unwrap();
        let pos = |s: &str| match parse_element(&alg, s) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(pos("1 + * r"), 4);
        assert_eq!(pos("(1 + r"), 6);
        assert_eq!(pos("z^x"), 2);
        assert_eq!(pos("1/0"), 1);
        assert_eq!(pos("2 q"), 2);
        assert_eq!(pos(""), 0);
    }
}
