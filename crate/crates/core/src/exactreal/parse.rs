//! Textual constructors for certified reals.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary
//! primary := number | 'sqrt' '(' expr ')' | 'log' '(' expr ')'
//!          | 'exp' '(' expr ')' | '(' expr ')'
//! number  := digits ['.' digits]
//! ```
//! Decimal literals parse to exact rationals, so `"1.05"` is exactly 21/20.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::CertifiedReal;
use crate::error::{Error, Result};

pub fn parse_real(input: &str) -> Result<CertifiedReal> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::Parse(format!(
            "unexpected trailing input at byte {} in {input:?}",
            p.pos
        )));
    }
    Ok(v)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CertifiedReal> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CertifiedReal> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    if let Some(q) = rhs.as_rational() {
                        if q.is_zero() {
                            return Err(Error::Parse("division by zero".into()));
                        }
                    }
                    acc = acc.div(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<CertifiedReal> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<CertifiedReal> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                match name.as_str() {
                    "sqrt" => arg.sqrt(),
                    "log" | "ln" => Ok(arg.ln()),
                    "exp" => Ok(arg.exp()),
                    other => Err(Error::Parse(format!("unknown function {other:?}"))),
                }
            }
            Some(c) => Err(Error::Parse(format!(
                "unexpected character {:?} at byte {}",
                c as char, self.pos
            ))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {:?} at byte {}",
                c as char, self.pos
            )))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<CertifiedReal> {
        self.skip_ws();
        let start = self.pos;
        let mut seen_dot = false;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_digit() {
                self.pos += 1;
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        if text.is_empty() || text == "." {
            return Err(Error::Parse(format!("expected a number at byte {start}")));
        }
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        let digits = format!("{int_part}{frac_part}");
        let num: BigInt = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad number {text:?}")))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(CertifiedReal::from_rational(BigRational::new(num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_real("1.05").unwrap().as_rational().unwrap(), &rat(21, 20));
        assert_eq!(
            parse_real("355/113").unwrap().as_rational().unwrap(),
            &rat(355, 113)
        );
        assert_eq!(parse_real("0").unwrap().as_rational().unwrap(), &rat(0, 1));
    }

    #[test]
    fn quadratic_constructors() {
        let golden = parse_real("(1+sqrt(5))/2").unwrap();
        match golden {
            CertifiedReal::Quadratic { d, .. } => assert_eq!(d, 5),
            other => panic!("expected quadratic, got {other:?}"),
        }
        let x = parse_real("-sqrt(2)/2").unwrap();
        assert!((x.to_f64().unwrap() + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn adaptive_functions() {
        let e = parse_real("exp(1)").unwrap();
        assert!((e.to_f64().unwrap() - std::f64::consts::E).abs() < 1e-14);
        let l = parse_real("log(2)").unwrap();
        assert!((l.to_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_real("").is_err());
        assert!(parse_real("1 +").is_err());
        assert!(parse_real("sin(1)").is_err());
        assert!(parse_real("1.2.3").is_err());
        assert!(parse_real("(1").is_err());
        assert!(parse_real("1/0").is_err());
    }
}
