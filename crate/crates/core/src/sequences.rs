//! Symbolic positive sequences `a_n` and divergence verdicts for
//! Σ_{n∈I} a_n^e over structured index sets.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::natset::{SetExpr, SumVerdict, WeightTail, DEFAULT_HORIZON};
use crate::scalar::{rational_to_f64, Scalar};
use crate::syntax::{fmt_rational, Cursor};

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarSeq {
    /// `coef · n^beta · ln(n+1)^gamma`
    PowerLog {
        coef: Scalar,
        beta: BigRational,
        gamma: BigRational,
    },
    Constant(Scalar),
    /// `values[n-1]` for `n <= values.len()`, `tail` afterwards.
    ExplicitPrefix {
        values: Vec<Scalar>,
        tail: Box<ScalarSeq>,
    },
    /// Pairwise disjoint pieces covering ℕ.
    Piecewise(Vec<(SetExpr, ScalarSeq)>),
}

/// Precompiled binary64 form of a [`ScalarSeq`]; see [`ScalarSeq::float_eval`].
#[derive(Debug, Clone, PartialEq)]
pub enum FloatSeq {
    PowerLog { coef: f64, beta: f64, gamma: f64 },
    Constant(f64),
    Prefix { values: Vec<f64>, tail: Box<FloatSeq> },
    Piecewise(Vec<(SetExpr, FloatSeq)>),
}

impl FloatSeq {
    /// Agrees with [`ScalarSeq::eval_f64`].
    pub fn at(&self, n: u64) -> f64 {
        match self {
            FloatSeq::PowerLog { coef, beta, gamma } => {
                let x = n as f64;
                let mut v = coef * x.powf(*beta);
                if *gamma != 0.0 {
                    v *= (x + 1.0).ln().powf(*gamma);
                }
                v
            }
            FloatSeq::Constant(c) => *c,
            FloatSeq::Prefix { values, tail } => match values.get(n as usize - 1) {
                Some(v) => *v,
                None => tail.at(n),
            },
            FloatSeq::Piecewise(pieces) => pieces
                .iter()
                .find(|(s, _)| s.member(n) == Some(true))
                .map(|(_, q)| q.at(n))
                .expect("pieces cover every index"),
        }
    }
}

/// Asymptotic shape `coef · n^beta · ln(n+1)^gamma` of a non-piecewise sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct TailForm {
    pub coef: f64,
    pub beta: BigRational,
    pub gamma: BigRational,
}

impl TailForm {
    pub fn bounded(&self) -> bool {
        self.beta.is_negative() || (self.beta.is_zero() && !self.gamma.is_positive())
    }

    /// Weights `a_n^e` in the summation family.
    pub fn power_weight(&self, e: &BigRational) -> WeightTail {
        WeightTail::new(
            self.coef.powf(rational_to_f64(e)),
            -(&self.beta * e),
            -(&self.gamma * e),
        )
    }

    /// Product form `a^e · other`.
    pub fn times_power(&self, e: &BigRational, other: &TailForm) -> TailForm {
        TailForm {
            coef: self.coef.powf(rational_to_f64(e)) * other.coef,
            beta: &self.beta * e + &other.beta,
            gamma: &self.gamma * e + &other.gamma,
        }
    }

    pub fn at(&self, n: u64) -> f64 {
        let x = n as f64;
        let mut v = self.coef * x.powf(rational_to_f64(&self.beta));
        if !self.gamma.is_zero() {
            v *= (x + 1.0).ln().powf(rational_to_f64(&self.gamma));
        }
        v
    }
}

fn positive(c: &Scalar, what: &str) -> Result<()> {
    if c.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{} must be positive, got {}", what, c)))
    }
}

impl ScalarSeq {
    pub fn pow(coef: Scalar, beta: BigRational) -> Result<Self> {
        ScalarSeq::powlog(coef, beta, BigRational::zero())
    }

    pub fn powlog(coef: Scalar, beta: BigRational, gamma: BigRational) -> Result<Self> {
        positive(&coef, "coefficient")?;
        Ok(ScalarSeq::PowerLog { coef, beta, gamma })
    }

    pub fn constant(c: Scalar) -> Result<Self> {
        positive(&c, "constant")?;
        Ok(ScalarSeq::Constant(c))
    }

    pub fn prefix(values: Vec<Scalar>, tail: ScalarSeq) -> Result<Self> {
        for v in &values {
            positive(v, "prefix value")?;
        }
        Ok(ScalarSeq::ExplicitPrefix {
            values,
            tail: Box::new(tail),
        })
    }

    /// Checks that the pieces are pairwise disjoint and cover ℕ.
    pub fn piecewise(pieces: Vec<(SetExpr, ScalarSeq)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Invalid("piecewise sequence without pieces".into()));
        }
        for (s, _) in &pieces {
            if s.contains_sampled() {
                return Err(Error::Invalid("piece sets must be symbolic".into()));
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                match pieces[i].0.disjoint_from(&pieces[j].0) {
                    Some(true) => {}
                    Some(false) => {
                        return Err(Error::Invalid(format!(
                            "pieces `{}` and `{}` overlap",
                            pieces[i].0, pieces[j].0
                        )))
                    }
                    None => return Err(Error::Invalid("cannot decide disjointness of pieces".into())),
                }
            }
        }
        let cover = pieces.iter().map(|(s, _)| s.clone()).reduce(|a, b| a.union(b)).unwrap();
        match cover.complement().is_empty_set() {
            Some(true) => Ok(ScalarSeq::Piecewise(pieces)),
            Some(false) => Err(Error::Invalid("pieces do not cover every index".into())),
            None => Err(Error::Invalid("cannot decide whether pieces cover ℕ".into())),
        }
    }

    /// `a_n` for `n >= 1`; exact when the data allow it.
    pub fn eval_at(&self, n: u64) -> Scalar {
        assert!(n >= 1, "sequences are indexed from 1");
        match self {
            ScalarSeq::PowerLog { coef, beta, gamma } => {
                let two_beta = beta * BigRational::from_integer(BigInt::from(2));
                if gamma.is_zero() && two_beta.is_integer() {
                    if let (Some(c2), Some(k)) = (coef.square(), two_beta.to_integer().to_i32()) {
                        let base = BigRational::from_integer(BigInt::from(n));
                        let pw = if k >= 0 {
                            num_traits::pow(base, k as usize)
                        } else {
                            num_traits::pow(base.recip(), (-k) as usize)
                        };
                        return Scalar::sqrt_of(c2 * pw);
                    }
                }
                let x = n as f64;
                let mut v = coef.to_f64() * x.powf(rational_to_f64(beta));
                if !gamma.is_zero() {
                    v *= (x + 1.0).ln().powf(rational_to_f64(gamma));
                }
                Scalar::Float(v)
            }
            ScalarSeq::Constant(c) => c.clone(),
            ScalarSeq::ExplicitPrefix { values, tail } => {
                if (n as usize) <= values.len() {
                    values[n as usize - 1].clone()
                } else {
                    tail.eval_at(n)
                }
            }
            ScalarSeq::Piecewise(pieces) => pieces
                .iter()
                .find(|(s, _)| s.member(n) == Some(true))
                .map(|(_, q)| q.eval_at(n))
                .expect("pieces cover every index"),
        }
    }

    /// Binary64 value of `a_n`, without exact arithmetic.
    pub fn eval_f64(&self, n: u64) -> f64 {
        match self {
            ScalarSeq::PowerLog { coef, beta, gamma } => {
                let x = n as f64;
                let mut v = coef.to_f64() * x.powf(rational_to_f64(beta));
                if !gamma.is_zero() {
                    v *= (x + 1.0).ln().powf(rational_to_f64(gamma));
                }
                v
            }
            ScalarSeq::Constant(c) => c.to_f64(),
            ScalarSeq::ExplicitPrefix { values, tail } => {
                if (n as usize) <= values.len() {
                    values[n as usize - 1].to_f64()
                } else {
                    tail.eval_f64(n)
                }
            }
            ScalarSeq::Piecewise(pieces) => pieces
                .iter()
                .find(|(s, _)| s.member(n) == Some(true))
                .map(|(_, q)| q.eval_f64(n))
                .expect("pieces cover every index"),
        }
    }

    /// Binary64 evaluator with the rational parameters converted once, for
    /// loops over many indices.
    pub fn float_eval(&self) -> FloatSeq {
        match self {
            ScalarSeq::PowerLog { coef, beta, gamma } => FloatSeq::PowerLog {
                coef: coef.to_f64(),
                beta: rational_to_f64(beta),
                gamma: rational_to_f64(gamma),
            },
            ScalarSeq::Constant(c) => FloatSeq::Constant(c.to_f64()),
            ScalarSeq::ExplicitPrefix { values, tail } => FloatSeq::Prefix {
                values: values.iter().map(Scalar::to_f64).collect(),
                tail: Box::new(tail.float_eval()),
            },
            ScalarSeq::Piecewise(pieces) => {
                FloatSeq::Piecewise(pieces.iter().map(|(s, q)| (s.clone(), q.float_eval())).collect())
            }
        }
    }

    /// Asymptotic form, for sequences that are not piecewise.
    pub fn tail_form(&self) -> Option<TailForm> {
        match self {
            ScalarSeq::PowerLog { coef, beta, gamma } => Some(TailForm {
                coef: coef.to_f64(),
                beta: beta.clone(),
                gamma: gamma.clone(),
            }),
            ScalarSeq::Constant(c) => Some(TailForm {
                coef: c.to_f64(),
                beta: BigRational::zero(),
                gamma: BigRational::zero(),
            }),
            ScalarSeq::ExplicitPrefix { tail, .. } => tail.tail_form(),
            ScalarSeq::Piecewise(_) => None,
        }
    }

    /// Flattened `(region, tail form)` pairs; regions partition ℕ.
    pub fn regions(&self) -> Vec<(SetExpr, TailForm)> {
        match self {
            ScalarSeq::Piecewise(pieces) => pieces
                .iter()
                .flat_map(|(s, q)| {
                    q.regions()
                        .into_iter()
                        .map(|(r, f)| (intersect_simplified(s, &r), f))
                        .collect::<Vec<_>>()
                })
                .collect(),
            ScalarSeq::ExplicitPrefix { tail, .. } => tail.regions(),
            other => vec![(SetExpr::all(), other.tail_form().unwrap())],
        }
    }

    /// Largest explicit prefix length anywhere in the expression.
    pub fn prefix_len(&self) -> u64 {
        match self {
            ScalarSeq::ExplicitPrefix { values, tail } => (values.len() as u64).max(tail.prefix_len()),
            ScalarSeq::Piecewise(pieces) => pieces.iter().map(|(_, q)| q.prefix_len()).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Σ_{n∈I} a_n^e.
    pub fn sum_power_verdict(&self, e: &BigRational, set: &SetExpr) -> SumVerdict {
        let mut total = 0.0;
        let mut undecided = false;
        for (region, form) in self.regions() {
            let part = intersect_simplified(set, &region);
            match part.weight_sum(&form.power_weight(e)) {
                SumVerdict::Diverges => return SumVerdict::Diverges,
                SumVerdict::Converges { bound } => total += bound,
                SumVerdict::Inconclusive { .. } => undecided = true,
            }
        }
        let ef = rational_to_f64(e);
        let fe = self.float_eval();
        if undecided {
            let horizon = set.sampled_horizon().unwrap_or(DEFAULT_HORIZON).min(DEFAULT_HORIZON);
            let partial = (1..=horizon)
                .filter(|&n| set.member(n) == Some(true))
                .map(|n| fe.at(n).powf(ef))
                .sum();
            return SumVerdict::Inconclusive { partial, horizon };
        }
        let k = self.prefix_len();
        let head: f64 = (1..=k)
            .filter(|&n| set.member(n) == Some(true))
            .map(|n| fe.at(n).powf(ef))
            .sum();
        SumVerdict::Converges { bound: total + head }
    }

    /// Σ_{n∈I} a_n^{-p}.
    pub fn sum_inverse_p_verdict(&self, p: &BigRational, set: &SetExpr) -> SumVerdict {
        self.sum_power_verdict(&-p.clone(), set)
    }

    /// Σ_{n∈I} a_n, for weight sequences.
    pub fn weight_sum(&self, set: &SetExpr) -> SumVerdict {
        self.sum_power_verdict(&BigRational::one(), set)
    }

    /// `Some(true)` when `sup a_n < ∞` is certified, `Some(false)` when
    /// unboundedness is.
    pub fn is_bounded(&self) -> Option<bool> {
        let mut verdict = Some(true);
        for (region, form) in self.regions() {
            if form.bounded() {
                continue;
            }
            match region.is_infinite() {
                Some(true) => return Some(false),
                Some(false) => {}
                None => verdict = None,
            }
        }
        verdict
    }

    /// `Some(true)` when the sequence is certified non-decreasing in `n`.
    pub fn is_nondecreasing(&self) -> Option<bool> {
        match self {
            ScalarSeq::PowerLog { beta, gamma, .. } => {
                if !beta.is_negative() && !gamma.is_negative() {
                    Some(true)
                } else if beta.is_negative() && !gamma.is_positive() {
                    Some(false)
                } else {
                    None
                }
            }
            ScalarSeq::Constant(_) => Some(true),
            ScalarSeq::ExplicitPrefix { values, tail } => {
                let mut prev: Option<Scalar> = None;
                let n = values.len() as u64;
                for v in values.iter().cloned().chain(std::iter::once(tail.eval_at(n + 1))) {
                    if let Some(p) = &prev {
                        if p.cmp_value(&v) == std::cmp::Ordering::Greater {
                            return Some(false);
                        }
                    }
                    prev = Some(v);
                }
                tail.is_nondecreasing()
            }
            ScalarSeq::Piecewise(_) => None,
        }
    }

    pub fn reciprocal(&self) -> ScalarSeq {
        match self {
            ScalarSeq::PowerLog { coef, beta, gamma } => ScalarSeq::PowerLog {
                coef: coef.recip().expect("positive"),
                beta: -beta.clone(),
                gamma: -gamma.clone(),
            },
            ScalarSeq::Constant(c) => ScalarSeq::Constant(c.recip().expect("positive")),
            ScalarSeq::ExplicitPrefix { values, tail } => ScalarSeq::ExplicitPrefix {
                values: values.iter().map(|v| v.recip().expect("positive")).collect(),
                tail: Box::new(tail.reciprocal()),
            },
            ScalarSeq::Piecewise(pieces) => {
                ScalarSeq::Piecewise(pieces.iter().map(|(s, q)| (s.clone(), q.reciprocal())).collect())
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> ScalarSeq {
        match self {
            ScalarSeq::PowerLog { coef, beta, gamma } => ScalarSeq::PowerLog {
                coef: coef.mul(c),
                beta: beta.clone(),
                gamma: gamma.clone(),
            },
            ScalarSeq::Constant(k) => ScalarSeq::Constant(k.mul(c)),
            ScalarSeq::ExplicitPrefix { values, tail } => ScalarSeq::ExplicitPrefix {
                values: values.iter().map(|v| v.mul(c)).collect(),
                tail: Box::new(tail.scale(c)),
            },
            ScalarSeq::Piecewise(pieces) => {
                ScalarSeq::Piecewise(pieces.iter().map(|(s, q)| (s.clone(), q.scale(c))).collect())
            }
        }
    }

    /// Symbolic termwise product when both sides share a shape.
    pub fn mul(&self, other: &ScalarSeq) -> Option<ScalarSeq> {
        use ScalarSeq::*;
        let as_power = |q: &ScalarSeq| -> Option<(Scalar, BigRational, BigRational)> {
            match q {
                PowerLog { coef, beta, gamma } => Some((coef.clone(), beta.clone(), gamma.clone())),
                Constant(c) => Some((c.clone(), BigRational::zero(), BigRational::zero())),
                _ => None,
            }
        };
        match (self, other) {
            (ExplicitPrefix { values: v1, tail: t1 }, ExplicitPrefix { values: v2, tail: t2 })
                if v1.len() == v2.len() =>
            {
                Some(ExplicitPrefix {
                    values: v1.iter().zip(v2).map(|(a, b)| a.mul(b)).collect(),
                    tail: Box::new(t1.mul(t2)?),
                })
            }
            (Piecewise(p1), Piecewise(p2)) if p1.len() == p2.len() => {
                let mut out = Vec::new();
                for ((s1, q1), (s2, q2)) in p1.iter().zip(p2) {
                    if s1 != s2 {
                        return None;
                    }
                    out.push((s1.clone(), q1.mul(q2)?));
                }
                Some(Piecewise(out))
            }
            _ => {
                let (c1, b1, g1) = as_power(self)?;
                let (c2, b2, g2) = as_power(other)?;
                let (beta, gamma) = (b1 + b2, g1 + g2);
                let coef = c1.mul(&c2);
                if beta.is_zero() && gamma.is_zero() {
                    Some(Constant(coef))
                } else {
                    Some(PowerLog { coef, beta, gamma })
                }
            }
        }
    }

    /// The constant value when the sequence is symbolically constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self {
            ScalarSeq::Constant(c) => Some(c.clone()),
            ScalarSeq::PowerLog { coef, beta, gamma } if beta.is_zero() && gamma.is_zero() => Some(coef.clone()),
            ScalarSeq::ExplicitPrefix { values, tail } => {
                let c = tail.as_constant()?;
                values.iter().all(|v| v.exact_eq(&c)).then_some(c)
            }
            ScalarSeq::Piecewise(pieces) => {
                let c = pieces[0].1.as_constant()?;
                pieces
                    .iter()
                    .all(|(_, q)| q.as_constant().is_some_and(|d| d.exact_eq(&c)))
                    .then_some(c)
            }
            ScalarSeq::PowerLog { .. } => None,
        }
    }

    pub fn parse(text: &str) -> Result<ScalarSeq> {
        let mut cur = Cursor::new(text);
        let s = parse_seq(&mut cur)?;
        cur.finish()?;
        Ok(s)
    }
}

pub(crate) fn intersect_simplified(a: &SetExpr, b: &SetExpr) -> SetExpr {
    a.clone().intersect_simplified(b.clone())
}

impl fmt::Display for ScalarSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarSeq::PowerLog { coef, beta, gamma } if gamma.is_zero() => {
                write!(f, "pow({},{})", coef, fmt_rational(beta))
            }
            ScalarSeq::PowerLog { coef, beta, gamma } => {
                write!(f, "powlog({},{},{})", coef, fmt_rational(beta), fmt_rational(gamma))
            }
            ScalarSeq::Constant(c) => write!(f, "const({})", c),
            ScalarSeq::ExplicitPrefix { values, tail } => {
                let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "prefix[{}]:{}", vs.join(","), tail)
            }
            ScalarSeq::Piecewise(pieces) => {
                let ps: Vec<String> = pieces.iter().map(|(s, q)| format!("{} => {}", s, q)).collect();
                write!(f, "piece{{{}}}", ps.join("; "))
            }
        }
    }
}

impl std::str::FromStr for ScalarSeq {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScalarSeq::parse(s)
    }
}

fn domain_at(at: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::parse(at, &["valid sequence"], other.to_string()),
    }
}

pub(crate) fn parse_seq(cur: &mut Cursor) -> Result<ScalarSeq> {
    cur.skip_ws();
    let at = cur.pos();
    if cur.eat_keyword("powlog") {
        cur.expect("(")?;
        let c = cur.scalar()?;
        cur.expect(",")?;
        let b = cur.rational()?;
        cur.expect(",")?;
        let g = cur.rational()?;
        cur.expect(")")?;
        return ScalarSeq::powlog(c, b, g).map_err(|e| domain_at(at, e));
    }
    if cur.eat_keyword("pow") {
        cur.expect("(")?;
        let c = cur.scalar()?;
        cur.expect(",")?;
        let b = cur.rational()?;
        cur.expect(")")?;
        return ScalarSeq::pow(c, b).map_err(|e| domain_at(at, e));
    }
    if cur.eat_keyword("const") {
        cur.expect("(")?;
        let c = cur.scalar()?;
        cur.expect(")")?;
        return ScalarSeq::constant(c).map_err(|e| domain_at(at, e));
    }
    if cur.eat_keyword("prefix") {
        cur.expect("[")?;
        let mut values = Vec::new();
        if !cur.eat("]") {
            loop {
                values.push(cur.scalar()?);
                if cur.eat("]") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        cur.expect(":")?;
        let tail = parse_seq(cur)?;
        return ScalarSeq::prefix(values, tail).map_err(|e| domain_at(at, e));
    }
    if cur.eat_keyword("piece") {
        cur.expect("{")?;
        let mut pieces = Vec::new();
        loop {
            let s = crate::natset::parse_union(cur)?;
            cur.expect("=>")?;
            let q = parse_seq(cur)?;
            pieces.push((s, q));
            if cur.eat("}") {
                break;
            }
            cur.expect(";")?;
        }
        return ScalarSeq::piecewise(pieces).map_err(|e| domain_at(at, e));
    }
    Err(cur.error(&["pow", "powlog", "const", "prefix", "piece"], "expected a sequence"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn q(s: &str) -> ScalarSeq {
        ScalarSeq::parse(s).unwrap()
    }

    #[test]
    fn float_eval_agrees_with_eval_f64() {
        for t in [
            "powlog(3,-1/2,2)",
            "prefix[2,5]:pow(sqrt(2),1)",
            "const(7/2)",
            "piece{residue(2,0) => pow(1,1); residue(2,1) => const(3)}",
        ] {
            let (s, f) = (q(t), q(t).float_eval());
            for n in 1..200 {
                assert_eq!(f.at(n), s.eval_f64(n), "{} at {}", t, n);
            }
        }
    }

    fn all() -> SetExpr {
        SetExpr::all()
    }

    #[test]
    fn evaluates_exactly() {
        assert_eq!(q("pow(1,1/2)").eval_at(9), Scalar::from_int(3));
        assert_eq!(q("const(2)").eval_at(1_000_000), Scalar::from_int(2));
        assert_eq!(q("prefix[5,7]:const(1)").eval_at(3), Scalar::one());
        assert_eq!(q("prefix[5,7]:const(1)").eval_at(2), Scalar::from_int(7));
        assert_eq!(q("pow(1,1/2)").eval_at(2), Scalar::sqrt_of(rat(2, 1)));
        assert_eq!(q("pow(3,-2)").eval_at(2), Scalar::from_rational(rat(3, 4)));
        assert!(!q("powlog(1,1,1)").eval_at(2).is_exact());
    }

    #[test]
    fn parse_errors_and_domain() {
        assert!(ScalarSeq::parse("const(0)").is_err());
        assert!(ScalarSeq::parse("pow(-1,2)").is_err());
        assert!(ScalarSeq::parse("piece{residue(2,0) => const(2); residue(2,0) => const(3)}").is_err());
        assert!(ScalarSeq::parse("piece{residue(2,0) => const(2)}").is_err());
        let ok = q("piece{residue(2,0) => const(2); residue(2,1) => pow(1,1)}");
        assert_eq!(ok.eval_at(4), Scalar::from_int(2));
        assert_eq!(ok.eval_at(5), Scalar::from_int(5));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "pow(1,1/2)",
            "powlog(2,1,-3/2)",
            "const(sqrt(2))",
            "prefix[5,7]:const(1)",
            "piece{geom(2) => pow(1,1); !geom(2) => const(2)}",
        ] {
            assert_eq!(q(s).to_string(), s);
            assert_eq!(q(&q(s).to_string()), q(s));
        }
    }

    #[test]
    fn inverse_power_sums() {
        let two = rat(2, 1);
        assert!(q("pow(1,1/2)").sum_inverse_p_verdict(&two, &all()).diverges());
        let c = q("pow(1,1)").sum_inverse_p_verdict(&two, &all());
        assert!(c.bound().unwrap() <= 2.0);
        assert!(q("const(3)")
            .sum_inverse_p_verdict(&rat(1, 1), &SetExpr::parse("geom(7)").unwrap())
            .diverges());
        // prefix values count toward the bound
        let pre = q("prefix[1/10]:pow(1,1)").sum_inverse_p_verdict(&two, &all());
        assert!(pre.bound().unwrap() >= 100.0);
        // piecewise: n on geometric indices, 2 elsewhere
        let pw = q("piece{geom(2) => pow(1,1); !geom(2) => const(2)}");
        assert!(pw
            .sum_inverse_p_verdict(&rat(1, 1), &SetExpr::parse("geom(2)").unwrap())
            .converges());
        assert!(pw.sum_inverse_p_verdict(&rat(1, 1), &all()).diverges());
    }

    #[test]
    fn boundedness_and_monotonicity() {
        assert_eq!(q("const(5)").is_bounded(), Some(true));
        assert_eq!(q("pow(1,1/2)").is_bounded(), Some(false));
        assert_eq!(q("powlog(2,0,-1)").is_bounded(), Some(true));
        assert_eq!(
            q("piece{geom(2) => pow(1,1); !geom(2) => const(2)}").is_bounded(),
            Some(false)
        );
        assert_eq!(
            q("piece{finite{1,2} => pow(1,1); !finite{1,2} => const(2)}").is_bounded(),
            Some(true)
        );
        assert_eq!(q("pow(1,1/2)").is_nondecreasing(), Some(true));
        assert_eq!(q("prefix[3]:pow(1,1/2)").is_nondecreasing(), Some(false));
        assert_eq!(q("prefix[1,1]:pow(1,1/2)").is_nondecreasing(), Some(true));
    }

    #[test]
    fn symbolic_products() {
        let a = q("pow(1,2)");
        let x = a.reciprocal().scale(&Scalar::from_rational(rat(11, 10)));
        assert_eq!(
            a.mul(&x).unwrap().as_constant(),
            Some(Scalar::from_rational(rat(11, 10)))
        );
    }
}
