//! Shared cursor for the recursive-descent parsers of sets, sequences,
//! filters and test vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Consumes `tok` if it comes next.
    pub fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    /// Consumes a keyword only when it is not the prefix of a longer word.
    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if let Some(after) = self.rest().strip_prefix(kw) {
            let next = after.chars().next();
            if !matches!(next, Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                self.pos += kw.len();
                return true;
            }
        }
        false
    }

    pub fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&[tok], format!("expected `{}`", tok)))
        }
    }

    pub fn error(&mut self, expected: &[&str], message: impl Into<String>) -> Error {
        self.skip_ws();
        Error::parse(self.pos, expected, message)
    }

    pub fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["end of input"], "trailing input"))
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.rest().chars().next() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    pub fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return Err(self.error(&["integer"], "expected an integer"));
        }
        d.parse::<u64>()
            .map_err(|_| Error::parse(start, &["integer"], "integer out of range"))
    }

    /// `[-]digits[.digits][/digits]`, read exactly.
    pub fn rational(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat("-");
        let int_part = self.digits();
        if int_part.is_empty() {
            return Err(Error::parse(start, &["number"], "expected a number"));
        }
        let mut value = BigRational::from_integer(int_part.parse::<BigInt>().unwrap());
        if self.rest().starts_with('.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() {
                return Err(self.error(&["digit"], "expected fractional digits"));
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            value += BigRational::new(frac.parse::<BigInt>().unwrap(), scale);
        }
        if self.rest().starts_with('/') {
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.error(&["integer"], "expected a denominator"));
            }
            let den: BigInt = den.parse().unwrap();
            if den.is_zero() {
                return Err(Error::parse(start, &["nonzero denominator"], "zero denominator"));
            }
            value /= BigRational::from_integer(den);
        }
        Ok(if neg { -value } else { value })
    }

    /// A rational or `sqrt(RATIONAL)`.
    pub fn scalar(&mut self) -> Result<Scalar> {
        if self.eat_keyword("sqrt") {
            self.expect("(")?;
            let at = self.pos();
            let q = self.rational()?;
            if q < BigRational::zero() {
                return Err(Error::parse(at, &["nonnegative number"], "negative radicand"));
            }
            self.expect(")")?;
            Ok(Scalar::sqrt_of(q))
        } else if self.eat("-") {
            let inner = self.scalar()?;
            Ok(inner.neg())
        } else {
            Ok(Scalar::from_rational(self.rational()?))
        }
    }
}

/// Renders a rational for the grammars: `p` or `p/q`.
pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
