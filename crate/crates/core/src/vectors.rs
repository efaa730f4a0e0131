//! Test vectors in ℓ_p with exact or symbolic coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Scalar};
use crate::syntax::{fmt_rational, Cursor};

#[derive(Debug, Clone, PartialEq)]
pub enum TestVector {
    /// Finitely many nonzero coordinates `(k, x_k)`, `k` increasing.
    Finite(Vec<(u64, BigRational)>),
    /// `x_k = coef · k^{-beta}`.
    PowerTail { coef: BigRational, beta: BigRational },
    /// `x_{base^m + shift} = m^{-decay}` for `m >= 1`, zero elsewhere.
    GeomSpikes { base: u64, shift: u64, decay: BigRational },
}

/// `q^{-e}` for a positive rational `q`; exact when `2e` is an integer.
fn rational_power(q: &BigRational, e: &BigRational) -> Scalar {
    let two_e = e * BigRational::from_integer(BigInt::from(2));
    if two_e.is_integer() {
        if let Some(k) = two_e.to_integer().to_i32() {
            let base = q.recip();
            let sq = if k >= 0 {
                num_traits::pow(base, k as usize)
            } else {
                num_traits::pow(q.clone(), (-k) as usize)
            };
            return Scalar::sqrt_of(sq);
        }
    }
    Scalar::Float(rational_to_f64(q).powf(-rational_to_f64(e)))
}

impl TestVector {
    pub fn unit(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("coordinates are indexed from 1".into()));
        }
        Ok(TestVector::Finite(vec![(k, BigRational::one())]))
    }

    /// Coordinate `x_k`, `k >= 1`.
    pub fn coord(&self, k: u64) -> Scalar {
        match self {
            TestVector::Finite(v) => v
                .binary_search_by_key(&k, |(i, _)| *i)
                .map(|i| Scalar::from_rational(v[i].1.clone()))
                .unwrap_or_else(|_| Scalar::zero()),
            TestVector::PowerTail { coef, beta } => {
                let kq = BigRational::from_integer(BigInt::from(k));
                Scalar::from_rational(coef.clone()).mul(&rational_power(&kq, beta))
            }
            TestVector::GeomSpikes { decay, .. } => match self.spike_level(k) {
                Some(m) => rational_power(&BigRational::from_integer(BigInt::from(m)), decay),
                None => Scalar::zero(),
            },
        }
    }

    /// Binary64 value of `x_k`, without exact arithmetic.
    pub fn coord_f64(&self, k: u64) -> f64 {
        match self {
            TestVector::Finite(_) => self.coord(k).to_f64(),
            TestVector::PowerTail { coef, beta } => rational_to_f64(coef) * (k as f64).powf(-rational_to_f64(beta)),
            TestVector::GeomSpikes { decay, .. } => match self.spike_level(k) {
                Some(m) => (m as f64).powf(-rational_to_f64(decay)),
                None => 0.0,
            },
        }
    }

    /// `m` with `k = base^m + shift`, for spike vectors.
    pub fn spike_level(&self, k: u64) -> Option<u64> {
        let TestVector::GeomSpikes { base, shift, .. } = self else {
            return None;
        };
        let t = k.checked_sub(*shift)?;
        let mut x = *base;
        let mut m = 1;
        while x < t {
            x = x.checked_mul(*base)?;
            m += 1;
        }
        (x == t).then_some(m)
    }

    /// Support bound for finite vectors.
    pub fn max_support(&self) -> Option<u64> {
        match self {
            TestVector::Finite(v) => Some(v.last().map(|(k, _)| *k).unwrap_or(0)),
            _ => None,
        }
    }

    /// Whether the vector lies in ℓ_p.
    pub fn in_lp(&self, p: &BigRational) -> bool {
        match self {
            TestVector::Finite(_) => true,
            TestVector::PowerTail { coef, beta } => coef.is_zero() || beta * p > BigRational::one(),
            TestVector::GeomSpikes { decay, .. } => decay * p > BigRational::one(),
        }
    }

    /// Certified upper bound on `‖x‖_1`, when finite.
    pub fn l1_norm_upper(&self) -> Option<f64> {
        match self {
            TestVector::Finite(v) => Some(v.iter().map(|(_, x)| rational_to_f64(&x.abs())).sum()),
            TestVector::PowerTail { coef, beta } => {
                let b = rational_to_f64(beta);
                (b > 1.0).then(|| rational_to_f64(&coef.abs()) * (1.0 + 1.0 / (b - 1.0)))
            }
            TestVector::GeomSpikes { decay, .. } => {
                let d = rational_to_f64(decay);
                (d > 1.0).then(|| 1.0 + 1.0 / (d - 1.0))
            }
        }
    }

    /// Exact `‖x‖_1` for finite vectors.
    pub fn l1_norm_exact(&self) -> Option<BigRational> {
        match self {
            TestVector::Finite(v) => Some(v.iter().map(|(_, x)| x.abs()).sum()),
            _ => None,
        }
    }

    pub fn prefix_f64(&self, len: usize) -> Vec<f64> {
        (1..=len as u64).map(|k| self.coord_f64(k)).collect()
    }

    /// `unit(k)`, `finite{k:v,...}`, `tail(c,beta)`, `spikes(b,shift,decay)`.
    pub fn parse(text: &str) -> Result<TestVector> {
        let mut cur = Cursor::new(text);
        let start = cur.pos();
        let v = if cur.eat_keyword("unit") {
            cur.expect("(")?;
            let k = cur.uint()?;
            cur.expect(")")?;
            TestVector::unit(k).map_err(|e| Error::parse(start, &["index >= 1"], e.to_string()))?
        } else if cur.eat_keyword("finite") {
            cur.expect("{")?;
            let mut v: Vec<(u64, BigRational)> = Vec::new();
            if !cur.eat("}") {
                loop {
                    let at = cur.pos();
                    let k = cur.uint()?;
                    if k == 0 || v.last().is_some_and(|(j, _)| *j >= k) {
                        return Err(Error::parse(at, &["increasing index >= 1"], "bad index"));
                    }
                    cur.expect(":")?;
                    let x = cur.rational()?;
                    if !x.is_zero() {
                        v.push((k, x));
                    }
                    if cur.eat("}") {
                        break;
                    }
                    cur.expect(",")?;
                }
            }
            TestVector::Finite(v)
        } else if cur.eat_keyword("tail") {
            cur.expect("(")?;
            let coef = cur.rational()?;
            cur.expect(",")?;
            let beta = cur.rational()?;
            cur.expect(")")?;
            TestVector::PowerTail { coef, beta }
        } else if cur.eat_keyword("spikes") {
            cur.expect("(")?;
            let at = cur.pos();
            let base = cur.uint()?;
            if base < 2 {
                return Err(Error::parse(at, &["base >= 2"], "base below 2"));
            }
            cur.expect(",")?;
            let shift = cur.uint()?;
            cur.expect(",")?;
            let decay = cur.rational()?;
            cur.expect(")")?;
            TestVector::GeomSpikes { base, shift, decay }
        } else {
            return Err(cur.error(&["unit", "finite", "tail", "spikes"], "expected a test vector"));
        };
        cur.finish()?;
        Ok(v)
    }
}

impl fmt::Display for TestVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestVector::Finite(v) if v.len() == 1 && v[0].1.is_one() => write!(f, "unit({})", v[0].0),
            TestVector::Finite(v) => {
                let parts: Vec<String> = v.iter().map(|(k, x)| format!("{}:{}", k, fmt_rational(x))).collect();
                write!(f, "finite{{{}}}", parts.join(","))
            }
            TestVector::PowerTail { coef, beta } => {
                write!(f, "tail({},{})", fmt_rational(coef), fmt_rational(beta))
            }
            TestVector::GeomSpikes { base, shift, decay } => {
                write!(f, "spikes({},{},{})", base, shift, fmt_rational(decay))
            }
        }
    }
}

impl std::str::FromStr for TestVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TestVector::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn coordinates() {
        let x = TestVector::parse("spikes(2,1,2)").unwrap();
        assert_eq!(x.coord(3), Scalar::one());
        assert_eq!(x.coord(5), Scalar::from_rational(rat(1, 4)));
        assert_eq!(x.coord(9), Scalar::from_rational(rat(1, 9)));
        assert!(x.coord(4).is_zero());
        let t = TestVector::parse("tail(1,2)").unwrap();
        assert_eq!(t.coord(3), Scalar::from_rational(rat(1, 9)));
        let f = TestVector::parse("finite{2:1/2,5:-3}").unwrap();
        assert_eq!(f.coord(5), Scalar::from_int(-3));
        assert_eq!(f.l1_norm_exact(), Some(rat(7, 2)));
        assert!(t.in_lp(&rat(1, 1)));
        assert!(!TestVector::parse("tail(1,1)").unwrap().in_lp(&rat(1, 1)));
    }

    #[test]
    fn grammar_round_trip() {
        for s in [
            "unit(3)",
            "finite{1:2,4:-1/3}",
            "tail(1,2)",
            "spikes(2,1,2)",
            "tail(3/2,3/4)",
        ] {
            assert_eq!(TestVector::parse(s).unwrap().to_string(), s);
        }
        assert!(TestVector::parse("unit(0)").is_err());
        assert!(TestVector::parse("finite{3:1,2:1}").is_err());
        assert!(TestVector::parse("spikes(1,0,2)").is_err());
    }
}
