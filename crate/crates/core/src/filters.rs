//! Free filters on ℕ: set classification, filter limits of scalar
//! sequences, and domination.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::natset::{Density, SetExpr, MAX_WINDOW};
use crate::scalar::Scalar;
use crate::sequences::{parse_seq, ScalarSeq, TailForm};
use crate::syntax::{fmt_rational, Cursor};

#[derive(Debug, Clone, PartialEq)]
pub enum FilterSpec {
    Frechet,
    Statistical,
    /// Sets whose complement has finite weight; weights sum to ∞.
    Summable(ScalarSeq),
    /// Trace of the base filter on a base-stationary set.
    Trace(Box<FilterSpec>, SetExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetClass {
    Member,
    Negligible,
    Stationary,
    Inconclusive,
}

impl SetClass {
    pub fn is_decided(self) -> bool {
        self != SetClass::Inconclusive
    }

    /// Member or Stationary: the set meets every filter member.
    pub fn is_stationary_or_member(self) -> bool {
        matches!(self, SetClass::Member | SetClass::Stationary)
    }
}

impl fmt::Display for SetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SetClass::Member => "Member",
            SetClass::Negligible => "Negligible",
            SetClass::Stationary => "Stationary",
            SetClass::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

impl FilterSpec {
    /// Summable filter; the weights must have a divergent total.
    pub fn summable(weights: ScalarSeq) -> Result<Self> {
        match weights.weight_sum(&SetExpr::all()) {
            crate::natset::SumVerdict::Diverges => Ok(FilterSpec::Summable(weights)),
            crate::natset::SumVerdict::Converges { .. } => Err(Error::Invalid(format!(
                "weights {} have a finite total, the summable filter is not free",
                weights
            ))),
            crate::natset::SumVerdict::Inconclusive { .. } => Err(Error::Invalid(format!(
                "cannot certify that weights {} have an infinite total",
                weights
            ))),
        }
    }

    /// The trace `F(I)`; `I` must be stationary (or a member).
    pub fn trace(self, set: SetExpr) -> Result<Self> {
        trace_filter(&self, &set)
    }

    /// Base filter after stripping traces.
    pub fn root(&self) -> &FilterSpec {
        match self {
            FilterSpec::Trace(base, _) => base.root(),
            other => other,
        }
    }

    pub fn parse(text: &str) -> Result<FilterSpec> {
        let mut cur = Cursor::new(text);
        let f = parse_filter(&mut cur)?;
        cur.finish()?;
        Ok(f)
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::Frechet => f.write_str("frechet"),
            FilterSpec::Statistical => f.write_str("statistical"),
            FilterSpec::Summable(s) => write!(f, "summable({})", s),
            FilterSpec::Trace(base, set) => write!(f, "trace({}; {})", base, set),
        }
    }
}

impl std::str::FromStr for FilterSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FilterSpec::parse(s)
    }
}

pub(crate) fn parse_filter(cur: &mut Cursor) -> Result<FilterSpec> {
    cur.skip_ws();
    let at = cur.pos();
    if cur.eat_keyword("frechet") {
        return Ok(FilterSpec::Frechet);
    }
    if cur.eat_keyword("statistical") {
        return Ok(FilterSpec::Statistical);
    }
    if cur.eat_keyword("summable") {
        cur.expect("(")?;
        let s = parse_seq(cur)?;
        cur.expect(")")?;
        return FilterSpec::summable(s).map_err(|e| Error::parse(at, &["divergent weights"], e.to_string()));
    }
    if cur.eat_keyword("trace") {
        cur.expect("(")?;
        let base = parse_filter(cur)?;
        cur.expect(";")?;
        let set = crate::natset::parse_union(cur)?;
        cur.expect(")")?;
        return trace_filter(&base, &set).map_err(|e| Error::parse(at, &["stationary trace set"], e.to_string()));
    }
    Err(cur.error(&["frechet", "statistical", "summable", "trace"], "expected a filter"))
}

/// Member / Negligible / Stationary classification of `a` under `f`.
pub fn classify_set(a: &SetExpr, f: &FilterSpec) -> SetClass {
    match f {
        FilterSpec::Frechet => {
            let small = a.is_infinite().map(|x| !x);
            let co_small = a.clone().complement().is_infinite().map(|x| !x);
            decide(small, co_small)
        }
        FilterSpec::Statistical => {
            let zero = |d: Density| -> Option<bool> {
                let (lo, hi) = d.bounds()?;
                if hi.is_zero() {
                    Some(true)
                } else if lo.is_positive() {
                    Some(false)
                } else {
                    None
                }
            };
            decide(
                zero(a.natural_density()),
                zero(a.clone().complement().natural_density()),
            )
        }
        FilterSpec::Summable(s) => {
            let finite = |set: &SetExpr| -> Option<bool> {
                match s.weight_sum(set) {
                    crate::natset::SumVerdict::Converges { .. } => Some(true),
                    crate::natset::SumVerdict::Diverges => Some(false),
                    crate::natset::SumVerdict::Inconclusive { .. } => None,
                }
            };
            decide(finite(a), finite(&a.clone().complement()))
        }
        FilterSpec::Trace(base, i) => {
            let inside = classify_set(&a.clone().intersect_simplified(i.clone()), base);
            let outside = classify_set(&a.clone().complement().intersect_simplified(i.clone()), base);
            if inside == SetClass::Negligible {
                SetClass::Negligible
            } else if outside == SetClass::Negligible {
                SetClass::Member
            } else if inside.is_decided() && outside.is_decided() {
                SetClass::Stationary
            } else {
                SetClass::Inconclusive
            }
        }
    }
}

/// Combines "A is small" and "complement is small" into a class.
fn decide(small: Option<bool>, co_small: Option<bool>) -> SetClass {
    match (small, co_small) {
        (Some(true), _) => SetClass::Negligible,
        (_, Some(true)) => SetClass::Member,
        (Some(false), Some(false)) => SetClass::Stationary,
        _ => SetClass::Inconclusive,
    }
}

/// `F(I)`; fails with `NotStationary` when `I` is negligible.
pub fn trace_filter(f: &FilterSpec, i: &SetExpr) -> Result<FilterSpec> {
    match classify_set(i, f) {
        SetClass::Member | SetClass::Stationary => Ok(FilterSpec::Trace(Box::new(f.clone()), i.clone())),
        SetClass::Negligible => Err(Error::NotStationary(format!("{} under {}", i, f))),
        SetClass::Inconclusive => Err(Error::Invalid(format!(
            "cannot certify that {} is stationary under {}",
            i, f
        ))),
    }
}

// ---------------------------------------------------------------------------
// Filter limits

/// Real sequences whose filter limits can be examined.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitSeq {
    Positive(ScalarSeq),
    /// `height` on `set`, zero elsewhere.
    Indicator {
        set: SetExpr,
        height: BigRational,
    },
    /// Values for `n = 1..=len`; unknown afterwards.
    Sampled(Vec<f64>),
}

impl LimitSeq {
    /// `ind(SET)`, `ind(SET, c)`, `sampled[v,...]`, or a sequence.
    pub fn parse(text: &str) -> Result<LimitSeq> {
        let mut cur = Cursor::new(text);
        let s = if cur.eat_keyword("ind") {
            cur.expect("(")?;
            let set = crate::natset::parse_union(&mut cur)?;
            let height = if cur.eat(",") {
                cur.rational()?
            } else {
                BigRational::one()
            };
            cur.expect(")")?;
            LimitSeq::Indicator { set, height }
        } else if cur.eat_keyword("sampled") {
            cur.expect("[")?;
            let mut v = Vec::new();
            if !cur.eat("]") {
                loop {
                    v.push(crate::scalar::rational_to_f64(&cur.rational()?));
                    if cur.eat("]") {
                        break;
                    }
                    cur.expect(",")?;
                }
            }
            LimitSeq::Sampled(v)
        } else {
            LimitSeq::Positive(parse_seq(&mut cur)?)
        };
        cur.finish()?;
        Ok(s)
    }
}

impl fmt::Display for LimitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitSeq::Positive(s) => write!(f, "{}", s),
            LimitSeq::Indicator { set, height } if height.is_one() => write!(f, "ind({})", set),
            LimitSeq::Indicator { set, height } => {
                write!(f, "ind({}, {})", set, fmt_rational(height))
            }
            LimitSeq::Sampled(v) => {
                let vs: Vec<String> = v.iter().map(|x| format!("{}", x)).collect();
                write!(f, "sampled[{}]", vs.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LimitVerdict {
    ConvergesTo(BigRational),
    DoesNotConverge {
        epsilon: BigRational,
        witness: SetExpr,
        class: SetClass,
    },
    Inconclusive {
        epsilon: BigRational,
        reason: String,
    },
}

/// `1, 1/2, ..., 2^-20`.
pub fn default_eps_schedule() -> Vec<BigRational> {
    (0..=20)
        .map(|k| BigRational::new(BigInt::one(), BigInt::from(1u64 << k)))
        .collect()
}

/// Decides `F-lim x_n = target` along the ε schedule.
pub fn f_limit_scalar(x: &LimitSeq, f: &FilterSpec, target: &BigRational, schedule: &[BigRational]) -> LimitVerdict {
    limit_from_sets(f, target, schedule, |eps| exceptional_set(x, target, eps))
}

/// Walks the ε schedule given the exceptional sets `{n : |x_n - target| >= ε}`:
/// the limit holds when every one of them is `F`-negligible.
pub fn limit_from_sets(
    f: &FilterSpec,
    target: &BigRational,
    schedule: &[BigRational],
    mut exceptional: impl FnMut(&BigRational) -> Option<SetExpr>,
) -> LimitVerdict {
    for eps in schedule {
        let Some(set) = exceptional(eps) else {
            return LimitVerdict::Inconclusive {
                epsilon: eps.clone(),
                reason: "exceptional set not expressible".into(),
            };
        };
        match classify_set(&set, f) {
            SetClass::Negligible => {}
            SetClass::Inconclusive => {
                return LimitVerdict::Inconclusive {
                    epsilon: eps.clone(),
                    reason: format!("cannot classify {}", set),
                }
            }
            class => {
                return LimitVerdict::DoesNotConverge {
                    epsilon: eps.clone(),
                    witness: set,
                    class,
                }
            }
        }
    }
    LimitVerdict::ConvergesTo(target.clone())
}

/// `{n : |x_n - target| >= eps}` as a set expression.
pub fn exceptional_set(x: &LimitSeq, target: &BigRational, eps: &BigRational) -> Option<SetExpr> {
    let far = |v: &BigRational| (v - target).abs() >= *eps;
    match x {
        LimitSeq::Indicator { set, height } => {
            let on = far(height);
            let off = far(&BigRational::zero());
            Some(match (on, off) {
                (true, true) => SetExpr::all(),
                (true, false) => set.clone(),
                (false, true) => set.clone().complement(),
                (false, false) => SetExpr::empty(),
            })
        }
        LimitSeq::Sampled(v) => {
            let t = crate::scalar::rational_to_f64(target);
            let e = crate::scalar::rational_to_f64(eps);
            let members = (1..=v.len() as u64)
                .filter(|&n| (v[n as usize - 1] - t).abs() >= e)
                .collect();
            Some(SetExpr::sampled(v.len() as u64, members))
        }
        LimitSeq::Positive(s) => {
            let hi = Scalar::from_rational(target + eps);
            let lo = Scalar::from_rational(target - eps);
            seq_exceptional(s, &hi, &lo)
        }
    }
}

/// `{n : s_n >= hi or s_n <= lo}`.
fn seq_exceptional(s: &ScalarSeq, hi: &Scalar, lo: &Scalar) -> Option<SetExpr> {
    let cond =
        |v: &Scalar| v.cmp_value(hi) != std::cmp::Ordering::Less || v.cmp_value(lo) != std::cmp::Ordering::Greater;
    match s {
        ScalarSeq::Constant(c) => Some(if cond(c) { SetExpr::all() } else { SetExpr::empty() }),
        ScalarSeq::PowerLog { .. } => {
            let form = s.tail_form()?;
            if form.beta.is_zero() && form.gamma.is_zero() {
                let c = s.eval_at(1);
                return Some(if cond(&c) { SetExpr::all() } else { SetExpr::empty() });
            }
            monotone_exceptional(s, &form, hi, lo)
        }
        ScalarSeq::ExplicitPrefix { values, tail } => {
            let k = values.len() as u64;
            let head: Vec<u64> = (1..=k).filter(|&n| cond(&values[n as usize - 1])).collect();
            let rest = seq_exceptional(tail, hi, lo)?.intersect_simplified(SetExpr::Range { lo: k + 1, hi: None });
            Some(SetExpr::finite(head).union_simplified(rest))
        }
        ScalarSeq::Piecewise(pieces) => {
            let mut acc = SetExpr::empty();
            for (set, q) in pieces {
                let part = seq_exceptional(q, hi, lo)?;
                acc = acc.union_simplified(set.clone().intersect_simplified(part));
            }
            Some(acc)
        }
    }
}

/// First index from which `c n^β ln(n+1)^γ` is monotone.
pub(crate) fn monotone_from(form: &TailForm) -> Option<u64> {
    let (b, g) = (&form.beta, &form.gamma);
    if b.is_zero() || g.is_zero() || b.is_positive() == g.is_positive() {
        return Some(1);
    }
    // d/dn ln f = β/n + γ/((n+1) ln(n+1)); (n+1) ln(n+1)/n is increasing.
    let ratio = crate::scalar::rational_to_f64(&(g / b).abs());
    let ok = |n: u64| {
        let x = n as f64;
        (x + 1.0) * (x + 1.0).ln() / x > ratio * (1.0 + 1e-12)
    };
    let mut hi = 1u64;
    while !ok(hi) {
        hi = hi.checked_mul(2)?;
        if hi > MAX_WINDOW {
            return None;
        }
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn monotone_exceptional(s: &ScalarSeq, form: &TailForm, hi: &Scalar, lo: &Scalar) -> Option<SetExpr> {
    use std::cmp::Ordering::*;
    let n0 = monotone_from(form)?;
    let increasing = form.beta.is_positive() || (form.beta.is_zero() && form.gamma.is_positive());
    let ge_hi = |n: u64| s.eval_at(n).cmp_value(hi) != Less;
    let le_lo = |n: u64| s.eval_at(n).cmp_value(lo) != Greater;
    // Eventual truth values: increasing sequences tend to ∞, decreasing ones
    // to 0 from above.
    let (hi_lim, lo_lim) = if increasing {
        (true, false)
    } else {
        (!hi.is_positive(), lo.is_positive())
    };
    let mut out: Vec<u64> = (1..n0).filter(|&n| ge_hi(n) || le_lo(n)).collect();
    let mut tail = SetExpr::empty();
    for (pred, lim) in [(&ge_hi as &dyn Fn(u64) -> bool, hi_lim), (&le_lo, lo_lim)] {
        let switch = first_switch(pred, n0, lim)?;
        let seg = if lim {
            SetExpr::Range { lo: switch, hi: None }
        } else if switch > n0 {
            if switch - n0 <= 64 {
                out.extend(n0..switch);
                SetExpr::empty()
            } else {
                SetExpr::Range {
                    lo: n0,
                    hi: Some(switch - 1),
                }
            }
        } else {
            SetExpr::empty()
        };
        tail = tail.union_simplified(seg);
    }
    out.sort_unstable();
    out.dedup();
    Some(SetExpr::finite(out).union_simplified(tail))
}

/// Smallest `n >= n0` from which the monotone predicate equals `lim`.
pub(crate) fn first_switch(pred: &dyn Fn(u64) -> bool, n0: u64, lim: bool) -> Option<u64> {
    if pred(n0) == lim {
        return Some(n0);
    }
    let mut lo = n0;
    let mut step = 1u64;
    let mut hi = loop {
        let cand = n0.checked_add(step)?;
        if cand > (1u64 << 62) {
            return None;
        }
        if pred(cand) == lim {
            break cand;
        }
        lo = cand;
        step = step.checked_mul(2)?;
    };
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) == lim {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

// ---------------------------------------------------------------------------
// Domination

#[derive(Debug, Clone, PartialEq)]
pub enum DomVerdict {
    Proved(String),
    /// A set that is a member of the second filter but not of the first.
    Refuted(SetExpr),
    Inconclusive(String),
}

/// Decides `F1 ⊇ F2` (every `F2` member is an `F1` member).
pub fn dominates(f1: &FilterSpec, f2: &FilterSpec) -> DomVerdict {
    if let Some(rule) = dominates_by_rule(f1, f2) {
        return DomVerdict::Proved(rule);
    }
    for w in witness_library(f2) {
        if classify_set(&w, f2) == SetClass::Member
            && matches!(classify_set(&w, f1), SetClass::Negligible | SetClass::Stationary)
        {
            return DomVerdict::Refuted(w);
        }
    }
    DomVerdict::Inconclusive("no rule applies and no library witness separates the filters".into())
}

fn dominates_by_rule(f1: &FilterSpec, f2: &FilterSpec) -> Option<String> {
    if f1 == f2 {
        return Some("reflexive".into());
    }
    if *f2 == FilterSpec::Frechet {
        return Some("free filters contain every cofinite set".into());
    }
    match (f1, f2) {
        (FilterSpec::Trace(base, _), _) => {
            dominates_by_rule(base, f2).map(|r| format!("trace contains its base; {}", r))
        }
        (FilterSpec::Summable(s), FilterSpec::Summable(t)) => {
            weights_dominated(s, t).then(|| "summable weights compare: s <= C t termwise".into())
        }
        (FilterSpec::Statistical, FilterSpec::Summable(t)) => weights_dominated(
            &ScalarSeq::PowerLog {
                coef: Scalar::one(),
                beta: -BigRational::one(),
                gamma: BigRational::zero(),
            },
            t,
        )
        .then(|| "weights t >= c/n: finite t-sum forces density zero".into()),
        _ => None,
    }
}

/// Certifies `s_n <= C t_n` for all large `n` on every infinite region.
fn weights_dominated(s: &ScalarSeq, t: &ScalarSeq) -> bool {
    for (rs, fs) in s.regions() {
        for (rt, ft) in t.regions() {
            let meet = rs.clone().intersect_simplified(rt.clone());
            match meet.is_infinite() {
                Some(false) => continue,
                Some(true) => {
                    let ratio_bounded = fs.beta < ft.beta || (fs.beta == ft.beta && fs.gamma <= ft.gamma);
                    if !ratio_bounded {
                        return false;
                    }
                }
                None => return false,
            }
        }
    }
    true
}

/// Deterministic candidate sets for refutations, members of `f` first.
pub fn witness_library(f: &FilterSpec) -> Vec<SetExpr> {
    let mut out = Vec::new();
    let geoms = [2u64, 3];
    for &b in &geoms {
        out.push(SetExpr::Geom(b).complement());
    }
    out.push(SetExpr::Geom(2).union(SetExpr::Geom(3)).complement());
    for q in 2..=4u64 {
        for r in 0..q {
            out.push(SetExpr::Residue { modulus: q, residue: r });
        }
    }
    for q in 2..=4u64 {
        for r in 0..q {
            out.push(SetExpr::Residue { modulus: q, residue: r }.complement());
        }
    }
    for &b in &geoms {
        out.push(SetExpr::Geom(b));
    }
    if let FilterSpec::Trace(base, i) = f {
        out.insert(0, i.clone());
        for w in witness_library(base) {
            out.push(w.intersect_simplified(i.clone()));
        }
    }
    out
}
