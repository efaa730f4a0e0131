//! Real scalars that stay exact as long as they can.
//!
//! A value is either `±sqrt(q)` for a nonnegative rational `q` (which covers
//! every rational and every square root of one), or a binary64 fallback.
//! Products and quotients of exact values stay exact; sums stay exact when
//! the radicands differ by a rational square factor.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub enum Scalar {
    /// `(-1)^neg * sqrt(square)`; `square >= 0`, and zero is never negative.
    Exact {
        neg: bool,
        square: BigRational,
    },
    Float(f64),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // ratio too large for the direct conversion
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Formats a binary64 with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let neg = q.is_negative();
        let square = &q * &q;
        Scalar::Exact { neg, square }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `sqrt(q)` for `q >= 0`.
    pub fn sqrt_of(q: BigRational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        Scalar::Exact { neg: false, square: q }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact { .. })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact { square, .. } => square.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact { neg, square } => !neg && !square.is_zero(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact { neg, square } => {
                let v = match rational_sqrt(square) {
                    Some(r) => rational_to_f64(&r),
                    None => rational_to_f64(square).sqrt(),
                };
                if *neg {
                    -v
                } else {
                    v
                }
            }
            Scalar::Float(x) => *x,
        }
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact { neg, square } => {
                let r = rational_sqrt(square)?;
                Some(if *neg { -r } else { r })
            }
            Scalar::Float(_) => None,
        }
    }

    /// The exact square of the value, when available.
    pub fn square(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact { square, .. } => Some(square.clone()),
            Scalar::Float(_) => None,
        }
    }

    pub fn squared(&self) -> Scalar {
        match self {
            Scalar::Exact { square, .. } => Scalar::from_rational(square.clone()),
            Scalar::Float(x) => Scalar::Float(x * x),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact { square, .. } => Scalar::Exact {
                neg: false,
                square: square.clone(),
            },
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact { neg, square } => Scalar::Exact {
                neg: !neg && !square.is_zero(),
                square: square.clone(),
            },
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact { neg: n1, square: s1 }, Scalar::Exact { neg: n2, square: s2 }) => {
                let square = s1 * s2;
                let neg = (n1 != n2) && !square.is_zero();
                Scalar::Exact { neg, square }
            }
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    /// Reciprocal; `None` for zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact { neg, square } => Scalar::Exact {
                neg: *neg,
                square: square.recip(),
            },
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        Some(self.mul(&other.recip()?))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if let (Scalar::Exact { neg: n1, square: s1 }, Scalar::Exact { neg: n2, square: s2 }) = (self, other) {
            // sqrt(s1) = k * sqrt(s2) with k rational
            if let Some(k) = rational_sqrt(&(s1 / s2)) {
                let k1 = if *n1 { -k } else { k };
                let k2 = if *n2 { -BigRational::one() } else { BigRational::one() };
                let factor = k1 + k2;
                let neg = factor.is_negative();
                let square = &factor * &factor * s2;
                let neg = neg && !square.is_zero();
                return Scalar::Exact { neg, square };
            }
        }
        Scalar::Float(self.to_f64() + other.to_f64())
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    /// Exact comparison when both sides are exact, binary64 otherwise.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact { neg: n1, square: s1 }, Scalar::Exact { neg: n2, square: s2 }) => {
                let sign = |neg: bool, s: &BigRational| -> i32 {
                    if s.is_zero() {
                        0
                    } else if neg {
                        -1
                    } else {
                        1
                    }
                };
                let (a, b) = (sign(*n1, s1), sign(*n2, s2));
                if a != b {
                    return a.cmp(&b);
                }
                match a {
                    0 => Ordering::Equal,
                    1 => s1.cmp(s2),
                    _ => s2.cmp(s1),
                }
            }
            _ => self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(Ordering::Equal),
        }
    }

    pub fn exact_eq(&self, other: &Scalar) -> bool {
        self.is_exact() && other.is_exact() && self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            (Scalar::Exact { .. }, Scalar::Exact { .. }) => self.cmp_value(other) == Ordering::Equal,
            _ => false,
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact { neg, square } => {
                let sign = if *neg { "-" } else { "" };
                match rational_sqrt(square) {
                    Some(r) => write!(f, "{}{}", sign, r),
                    None => write!(f, "{}sqrt({})", sign, square),
                }
            }
            Scalar::Float(x) => write!(f, "{}", format_f64(*x)),
        }
    }
}

/// Parses a rational in the crate grammar: `-3/4`, `0.125`, `7`.
pub fn parse_rational(text: &str) -> crate::error::Result<BigRational> {
    let mut cur = crate::syntax::Cursor::new(text);
    let q = cur.rational()?;
    cur.finish()?;
    Ok(q)
}

impl std::str::FromStr for Scalar {
    type Err = crate::error::Error;

    /// Exact forms (`3/4`, `sqrt(2)`, `-sqrt(1/3)`) or a binary64 in
    /// scientific notation as produced by `Display`.
    fn from_str(text: &str) -> crate::error::Result<Self> {
        let mut cur = crate::syntax::Cursor::new(text);
        if let Ok(s) = cur.scalar().and_then(|s| cur.finish().map(|_| s)) {
            return Ok(s);
        }
        text.trim()
            .parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| crate::error::Error::parse(0, &["rational", "sqrt(q)", "float"], "not a scalar"))
    }
}
