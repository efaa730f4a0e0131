//! Finitely described subsets of ℕ = {1, 2, ...}.
//!
//! Every symbolic set (one without `Sampled` atoms) agrees, outside a finite
//! window `[1, cutoff]` and outside the geometric atoms, with a periodic set
//! modulo the lcm of its residue moduli. Along each geometric atom `{b^m}`
//! membership is eventually periodic in `m`. [`Profile`] captures both, and
//! densities and weighted sums are decided from it.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::rational_to_f64;
use crate::syntax::{fmt_rational, Cursor};

pub const DEFAULT_HORIZON: u64 = 1_000_000;

/// Largest residue modulus lcm the decision procedures will tabulate.
const MAX_MODULUS: u64 = 1 << 20;
/// Finite windows larger than this are not enumerated when bounding sums.
pub const MAX_WINDOW: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetExpr {
    Finite(Vec<u64>),
    CoFinite(Vec<u64>),
    Residue {
        modulus: u64,
        residue: u64,
    },
    /// Inclusive `[lo, hi]`, or `[lo, ∞)` when `hi` is open.
    Range {
        lo: u64,
        hi: Option<u64>,
    },
    /// `{b^m : m >= 1}`.
    Geom(u64),
    /// Explicit membership up to `horizon`; unknown beyond it.
    Sampled {
        horizon: u64,
        members: Vec<u64>,
    },
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersection(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DensityVerdict {
    Exact(String),
    Zero,
    Bounds(String, String),
    Inconclusive(u64),
}

/// Density verdict with rational payloads; [`DensityVerdict`] is its
/// serializable rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Exact(BigRational),
    Zero,
    Bounds(BigRational, BigRational),
    Inconclusive(u64),
}

impl Density {
    pub fn exact(&self) -> Option<BigRational> {
        match self {
            Density::Exact(q) => Some(q.clone()),
            Density::Zero => Some(BigRational::zero()),
            _ => None,
        }
    }

    /// `(lower, upper)` when anything is known.
    pub fn bounds(&self) -> Option<(BigRational, BigRational)> {
        match self {
            Density::Exact(q) => Some((q.clone(), q.clone())),
            Density::Zero => Some((BigRational::zero(), BigRational::zero())),
            Density::Bounds(l, u) => Some((l.clone(), u.clone())),
            Density::Inconclusive(_) => None,
        }
    }

    pub fn verdict(&self) -> DensityVerdict {
        match self {
            Density::Exact(q) => DensityVerdict::Exact(fmt_rational(q)),
            Density::Zero => DensityVerdict::Zero,
            Density::Bounds(l, u) => DensityVerdict::Bounds(fmt_rational(l), fmt_rational(u)),
            Density::Inconclusive(h) => DensityVerdict::Inconclusive(*h),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SumVerdict {
    Diverges,
    Converges { bound: f64 },
    Inconclusive { partial: f64, horizon: u64 },
}

impl SumVerdict {
    pub fn diverges(&self) -> bool {
        matches!(self, SumVerdict::Diverges)
    }

    pub fn converges(&self) -> bool {
        matches!(self, SumVerdict::Converges { .. })
    }

    pub fn bound(&self) -> Option<f64> {
        match self {
            SumVerdict::Converges { bound } => Some(*bound),
            _ => None,
        }
    }
}

impl fmt::Display for SumVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumVerdict::Diverges => write!(f, "diverges"),
            SumVerdict::Converges { bound } => {
                write!(f, "converges(bound {})", crate::scalar::format_f64(*bound))
            }
            SumVerdict::Inconclusive { partial, horizon } => write!(
                f,
                "inconclusive(partial {} at {})",
                crate::scalar::format_f64(*partial),
                horizon
            ),
        }
    }
}

/// Weights `w_n = coef · n^{-alpha} · ln(n+1)^{-gamma}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTail {
    pub coef: f64,
    pub alpha: BigRational,
    pub gamma: BigRational,
}

impl WeightTail {
    pub fn new(coef: f64, alpha: BigRational, gamma: BigRational) -> Self {
        WeightTail { coef, alpha, gamma }
    }

    pub fn power(alpha: BigRational) -> Self {
        WeightTail::new(1.0, alpha, BigRational::zero())
    }

    pub fn at(&self, n: u64) -> f64 {
        let n = n as f64;
        let a = rational_to_f64(&self.alpha);
        let g = rational_to_f64(&self.gamma);
        let mut v = self.coef * n.powf(-a);
        if g != 0.0 {
            v *= (n + 1.0).ln().powf(-g);
        }
        v
    }

    /// Σ over ℕ diverges.
    pub fn full_diverges(&self) -> bool {
        let one = BigRational::one();
        self.alpha < one || (self.alpha == one && self.gamma <= one)
    }

    /// Σ over a geometric set diverges.
    pub fn geom_diverges(&self) -> bool {
        let zero = BigRational::zero();
        self.alpha < zero || (self.alpha == zero && self.gamma <= BigRational::one())
    }

    /// Certified upper bound on Σ_{n>=1} w_n when it converges.
    pub fn full_bound(&self) -> Option<f64> {
        if self.full_diverges() {
            return None;
        }
        let c = self.coef;
        let a = rational_to_f64(&self.alpha);
        let g = rational_to_f64(&self.gamma);
        let ln2 = std::f64::consts::LN_2;
        if self.alpha == BigRational::one() {
            // γ > 1: first term plus the integral of a decreasing majorant
            return Some(c * (ln2.powf(-g) + 2.0 * ln2.powf(1.0 - g) / (g - 1.0)));
        }
        if g >= 0.0 {
            Some(c * ln2.powf(-g) * a / (a - 1.0))
        } else {
            // ln(x+1) <= (2^δ/δ) x^δ for x >= 1
            let h = -g;
            let delta = (a - 1.0) / (2.0 * h);
            let a2 = (a + 1.0) / 2.0;
            Some(c * (2f64.powf(delta) / delta).powf(h) * a2 / (a2 - 1.0))
        }
    }

    /// Certified upper bound on Σ_{m>=1} w_{b^m} when it converges.
    pub fn geom_bound(&self, base: u64) -> Option<f64> {
        if self.geom_diverges() {
            return None;
        }
        let c = self.coef;
        let a = rational_to_f64(&self.alpha);
        let g = rational_to_f64(&self.gamma);
        let b = base as f64;
        if self.alpha.is_zero() {
            return Some(c * b.ln().powf(-g) * g / (g - 1.0));
        }
        let r = b.powf(-a);
        if g >= 0.0 {
            return Some(c * (b + 1.0).ln().powf(-g) * r / (1.0 - r));
        }
        // terms <= c r^m (m ln 2b)^h; sum until the ratio drops below ρ
        let h = -g;
        let l2b = (2.0 * b).ln().powf(h);
        let rho = (1.0 + r) / 2.0;
        let mut acc = 0.0;
        let mut m = 1.0f64;
        loop {
            let t = r.powf(m) * m.powf(h);
            acc += t;
            if ((m + 1.0) / m).powf(h) * r <= rho {
                acc += t * rho / (1.0 - rho);
                break;
            }
            m += 1.0;
        }
        Some(c * l2b * acc)
    }
}

/// Eventual behaviour of a symbolic set along one geometric atom.
#[derive(Debug, Clone)]
struct SparseClass {
    base: u64,
    /// first exponent from which membership of `b^m` is periodic and `b^m > cutoff`
    start: u32,
    hits: Vec<u32>,
}

#[derive(Debug, Clone)]
struct Profile {
    modulus: u64,
    pattern: Vec<bool>,
    cutoff: u64,
    sparse: Vec<SparseClass>,
}

impl Profile {
    fn dense(&self) -> bool {
        self.pattern.iter().any(|&b| b)
    }

    fn infinite(&self) -> bool {
        self.dense() || self.sparse.iter().any(|s| !s.hits.is_empty())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// `b = r^i` with `r` not a perfect power.
fn minimal_root(b: u64) -> (u64, u32) {
    for i in (2..=63u32).rev() {
        let r = (b as f64).powf(1.0 / i as f64).round() as u64;
        for cand in r.saturating_sub(1).max(2)..=r + 1 {
            if cand.checked_pow(i) == Some(b) {
                let (rr, j) = minimal_root(cand);
                return (rr, i * j);
            }
        }
    }
    (b, 1)
}

fn is_power_of(n: u64, b: u64) -> bool {
    if n < b {
        return false;
    }
    let mut x = n;
    while x.is_multiple_of(b) {
        x /= b;
        if x == 1 {
            return true;
        }
    }
    false
}

fn pow_checked(b: u64, m: u32) -> Option<u64> {
    b.checked_pow(m)
}

impl SetExpr {
    pub fn all() -> Self {
        SetExpr::CoFinite(Vec::new())
    }

    pub fn empty() -> Self {
        SetExpr::Finite(Vec::new())
    }

    pub fn finite(mut v: Vec<u64>) -> Self {
        v.sort_unstable();
        v.dedup();
        SetExpr::Finite(v)
    }

    pub fn cofinite(mut v: Vec<u64>) -> Self {
        v.sort_unstable();
        v.dedup();
        SetExpr::CoFinite(v)
    }

    pub fn residue(modulus: u64, residue: u64) -> Result<Self> {
        if modulus == 0 || residue >= modulus {
            return Err(Error::Invalid(format!(
                "residue({},{}) needs 0 <= r < q",
                modulus, residue
            )));
        }
        Ok(SetExpr::Residue { modulus, residue })
    }

    pub fn geom(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::Invalid(format!("geom({}) needs base >= 2", base)));
        }
        Ok(SetExpr::Geom(base))
    }

    pub fn sampled(horizon: u64, mut members: Vec<u64>) -> Self {
        members.retain(|&n| n >= 1 && n <= horizon);
        members.sort_unstable();
        members.dedup();
        SetExpr::Sampled { horizon, members }
    }

    pub fn union(self, other: SetExpr) -> Self {
        SetExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn intersect(self, other: SetExpr) -> Self {
        SetExpr::Intersection(Box::new(self), Box::new(other))
    }

    pub fn complement(self) -> Self {
        SetExpr::Complement(Box::new(self))
    }

    /// Union that drops trivial sides (`∅ ∪ B = B`, `ℕ ∪ B = ℕ`).
    pub fn union_simplified(self, other: SetExpr) -> Self {
        if self.is_literally_empty() || other.is_literally_all() {
            other
        } else if other.is_literally_empty() || self.is_literally_all() || self == other {
            self
        } else {
            self.union(other)
        }
    }

    /// Intersection that drops trivial sides.
    pub fn intersect_simplified(self, other: SetExpr) -> Self {
        if self.is_literally_all() || other.is_literally_empty() {
            other
        } else if other.is_literally_all() || self.is_literally_empty() || self == other {
            self
        } else {
            self.intersect(other)
        }
    }

    fn is_literally_all(&self) -> bool {
        matches!(self, SetExpr::CoFinite(v) if v.is_empty()) || matches!(self, SetExpr::Range { lo: 0 | 1, hi: None })
    }

    fn is_literally_empty(&self) -> bool {
        matches!(self, SetExpr::Finite(v) if v.is_empty())
    }

    pub fn contains_sampled(&self) -> bool {
        match self {
            SetExpr::Sampled { .. } => true,
            SetExpr::Union(a, b) | SetExpr::Intersection(a, b) => a.contains_sampled() || b.contains_sampled(),
            SetExpr::Complement(a) => a.contains_sampled(),
            _ => false,
        }
    }

    /// Smallest horizon over the sampled atoms.
    pub fn sampled_horizon(&self) -> Option<u64> {
        match self {
            SetExpr::Sampled { horizon, .. } => Some(*horizon),
            SetExpr::Union(a, b) | SetExpr::Intersection(a, b) => match (a.sampled_horizon(), b.sampled_horizon()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            SetExpr::Complement(a) => a.sampled_horizon(),
            _ => None,
        }
    }

    /// Symbolic inner (`upper = false`) or outer envelope obtained by
    /// replacing each sampled atom with ∅ or ℕ according to its polarity.
    pub fn envelope(&self, upper: bool) -> SetExpr {
        match self {
            SetExpr::Sampled { .. } => {
                if upper {
                    SetExpr::all()
                } else {
                    SetExpr::empty()
                }
            }
            SetExpr::Union(a, b) => a.envelope(upper).union(b.envelope(upper)),
            SetExpr::Intersection(a, b) => a.envelope(upper).intersect(b.envelope(upper)),
            SetExpr::Complement(a) => a.envelope(!upper).complement(),
            other => other.clone(),
        }
    }

    fn eval_with(&self, atom: &impl Fn(&SetExpr) -> bool) -> bool {
        match self {
            SetExpr::Union(a, b) => a.eval_with(atom) || b.eval_with(atom),
            SetExpr::Intersection(a, b) => a.eval_with(atom) && b.eval_with(atom),
            SetExpr::Complement(a) => !a.eval_with(atom),
            leaf => atom(leaf),
        }
    }

    fn eval_tri(&self, atom: &impl Fn(&SetExpr) -> Option<bool>) -> Option<bool> {
        match self {
            SetExpr::Union(a, b) => match (a.eval_tri(atom), b.eval_tri(atom)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            SetExpr::Intersection(a, b) => match (a.eval_tri(atom), b.eval_tri(atom)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            SetExpr::Complement(a) => a.eval_tri(atom).map(|v| !v),
            leaf => atom(leaf),
        }
    }

    /// Membership of `n >= 1`; `None` only past a sampled horizon.
    pub fn member(&self, n: u64) -> Option<bool> {
        self.eval_tri(&|leaf| match leaf {
            SetExpr::Finite(v) => Some(v.binary_search(&n).is_ok()),
            SetExpr::CoFinite(v) => Some(v.binary_search(&n).is_err()),
            SetExpr::Residue { modulus, residue } => Some(n % modulus == *residue),
            SetExpr::Range { lo, hi } => Some(n >= *lo && hi.is_none_or(|h| n <= h)),
            SetExpr::Geom(b) => Some(is_power_of(n, *b)),
            SetExpr::Sampled { horizon, members } => {
                if n <= *horizon {
                    Some(members.binary_search(&n).is_ok())
                } else {
                    None
                }
            }
            _ => unreachable!(),
        })
    }

    /// `s ∩ [1, horizon]` in increasing order.
    pub fn enumerate_prefix(&self, horizon: u64) -> Result<Vec<u64>> {
        if let Some(h) = self.sampled_horizon() {
            if horizon > h {
                return Err(Error::HorizonExceeded {
                    requested: horizon,
                    available: h,
                });
            }
        }
        Ok((1..=horizon).filter(|&n| self.member(n) == Some(true)).collect())
    }

    fn atoms(&self, out: &mut Vec<SetExpr>) {
        match self {
            SetExpr::Union(a, b) | SetExpr::Intersection(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            SetExpr::Complement(a) => a.atoms(out),
            leaf => out.push(leaf.clone()),
        }
    }

    fn profile(&self) -> Option<Profile> {
        if self.contains_sampled() {
            return None;
        }
        let mut atoms = Vec::new();
        self.atoms(&mut atoms);
        let mut modulus = 1u64;
        let mut cutoff = 0u64;
        let mut bases: Vec<u64> = Vec::new();
        for a in &atoms {
            match a {
                SetExpr::Residue { modulus: q, .. } => {
                    modulus = lcm(modulus, *q)?;
                    if modulus > MAX_MODULUS {
                        return None;
                    }
                }
                SetExpr::Finite(v) | SetExpr::CoFinite(v) => {
                    cutoff = cutoff.max(v.last().copied().unwrap_or(0));
                }
                SetExpr::Range { lo, hi } => {
                    cutoff = cutoff.max(hi.unwrap_or(lo.saturating_sub(1)));
                }
                SetExpr::Geom(b) if !bases.contains(b) => {
                    bases.push(*b);
                }
                _ => {}
            }
        }
        bases.sort_unstable();

        // generic membership for n > cutoff outside every geometric atom
        let large = |leaf: &SetExpr, r: u64, geom: &dyn Fn(u64) -> bool| -> bool {
            match leaf {
                SetExpr::Finite(_) => false,
                SetExpr::CoFinite(_) => true,
                SetExpr::Residue { modulus: q, residue } => r % q == *residue,
                SetExpr::Range { hi, .. } => hi.is_none(),
                SetExpr::Geom(b) => geom(*b),
                _ => unreachable!(),
            }
        };
        let pattern: Vec<bool> = (0..modulus)
            .map(|r| self.eval_with(&|leaf| large(leaf, r, &|_| false)))
            .collect();

        let roots: Vec<(u64, u64, u32)> = bases
            .iter()
            .map(|&b| {
                let (r, i) = minimal_root(b);
                (b, r, i)
            })
            .collect();
        let mut sparse = Vec::new();
        for &(b, root, i) in &roots {
            // b^m mod L is eventually periodic in m
            let mut seen: HashMap<u64, u32> = HashMap::new();
            let mut residues = Vec::new();
            let mut v = b % modulus;
            let mut m = 1u32;
            let (mu, t1) = loop {
                if let Some(&first) = seen.get(&v) {
                    break (first, m - first);
                }
                seen.insert(v, m);
                residues.push(v);
                v = ((v as u128 * b as u128) % modulus as u128) as u64;
                m += 1;
            };
            let mut period = t1 as u64;
            for &(_, r2, j) in &roots {
                if r2 == root {
                    period = lcm(period, (j / i.gcd(&j)) as u64)?;
                }
            }
            if period > MAX_MODULUS {
                return None;
            }
            let mut m_big = 1u32;
            while pow_checked(b, m_big).is_some_and(|x| x <= cutoff) {
                m_big += 1;
            }
            let start = mu.max(m_big);
            let residue_at = |m: u32| -> u64 {
                let idx = if m < mu {
                    (m - 1) as usize
                } else {
                    (mu - 1 + (m - mu) % t1) as usize
                };
                residues[idx]
            };
            let hits = (start..start + period as u32)
                .filter(|&m| {
                    let r = residue_at(m);
                    self.eval_with(&|leaf| {
                        large(leaf, r, &|b2| {
                            let (r2, j) = minimal_root(b2);
                            r2 == root && (i as u64 * m as u64).is_multiple_of(j as u64)
                        })
                    })
                })
                .map(|m| m - start)
                .collect();
            sparse.push(SparseClass { base: b, start, hits });
        }
        Some(Profile {
            modulus,
            pattern,
            cutoff,
            sparse,
        })
    }

    /// Whether the set is infinite; `None` when undecidable here.
    pub fn is_infinite(&self) -> Option<bool> {
        if self.contains_sampled() {
            let lower = self.envelope(false).is_infinite();
            let upper = self.envelope(true).is_infinite();
            return match (lower, upper) {
                (Some(true), _) => Some(true),
                (_, Some(false)) => Some(false),
                _ => None,
            };
        }
        self.profile().map(|p| p.infinite())
    }

    /// All elements of a finite symbolic set (elements beyond u64 are not
    /// representable and never occur for parsed inputs).
    pub fn finite_elements(&self) -> Option<Vec<u64>> {
        let p = self.profile()?;
        if p.infinite() || p.cutoff > MAX_WINDOW {
            return None;
        }
        let mut out: Vec<u64> = (1..=p.cutoff).filter(|&n| self.member(n) == Some(true)).collect();
        for s in &p.sparse {
            for m in 1..s.start {
                if let Some(x) = pow_checked(s.base, m) {
                    if x > p.cutoff && self.member(x) == Some(true) {
                        out.push(x);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    pub fn is_empty_set(&self) -> Option<bool> {
        match self.is_infinite()? {
            true => Some(false),
            false => Some(self.finite_elements()?.is_empty()),
        }
    }

    /// Natural density, exact for every symbolic set.
    pub fn natural_density(&self) -> Density {
        if self.contains_sampled() {
            let lo = self.envelope(false).natural_density().exact();
            let hi = self.envelope(true).natural_density().exact();
            return match (lo, hi) {
                (Some(l), Some(h)) if l == h => {
                    if l.is_zero() {
                        Density::Zero
                    } else {
                        Density::Exact(l)
                    }
                }
                (Some(l), Some(h)) => Density::Bounds(l, h),
                _ => Density::Inconclusive(self.sampled_horizon().unwrap_or(0)),
            };
        }
        match self.profile() {
            Some(p) => {
                let count = p.pattern.iter().filter(|&&b| b).count() as i64;
                if count == 0 {
                    Density::Zero
                } else {
                    Density::Exact(BigRational::new(BigInt::from(count), BigInt::from(p.modulus as i64)))
                }
            }
            None => Density::Inconclusive(DEFAULT_HORIZON),
        }
    }

    /// Decides Σ_{n∈s} w_n < ∞.
    pub fn weight_sum(&self, w: &WeightTail) -> SumVerdict {
        self.weight_sum_with_horizon(w, DEFAULT_HORIZON)
    }

    pub fn weight_sum_with_horizon(&self, w: &WeightTail, horizon: u64) -> SumVerdict {
        if self.contains_sampled() {
            let upper = self.envelope(true).weight_sum_with_horizon(w, horizon);
            if upper.converges() {
                return upper;
            }
            if self.envelope(false).weight_sum_with_horizon(w, horizon).diverges() {
                return SumVerdict::Diverges;
            }
            let h = self.sampled_horizon().unwrap_or(horizon).min(horizon);
            return self.partial(w, h);
        }
        let Some(p) = self.profile() else {
            return self.partial(w, horizon);
        };
        let full = w.full_bound();
        if p.dense() {
            return match full {
                None => SumVerdict::Diverges,
                Some(bound) => SumVerdict::Converges { bound },
            };
        }
        if p.sparse.iter().any(|s| !s.hits.is_empty()) && w.geom_diverges() {
            return SumVerdict::Diverges;
        }
        if p.cutoff > MAX_WINDOW {
            return match full {
                Some(bound) => SumVerdict::Converges { bound },
                None => self.partial(w, horizon),
            };
        }
        let mut bound: f64 = (1..=p.cutoff)
            .filter(|&n| self.member(n) == Some(true))
            .map(|n| w.at(n))
            .sum();
        for s in &p.sparse {
            if s.hits.is_empty() {
                for m in 1..s.start {
                    if let Some(x) = pow_checked(s.base, m) {
                        if x > p.cutoff && self.member(x) == Some(true) {
                            bound += w.at(x);
                        }
                    }
                }
            } else {
                bound += w.geom_bound(s.base).expect("geometric sum converges");
            }
        }
        if let Some(f) = full {
            bound = bound.min(f);
        }
        SumVerdict::Converges { bound }
    }

    fn partial(&self, w: &WeightTail, horizon: u64) -> SumVerdict {
        let partial = (1..=horizon)
            .filter(|&n| self.member(n) == Some(true))
            .map(|n| w.at(n))
            .sum();
        SumVerdict::Inconclusive { partial, horizon }
    }

    /// Decides `self ∩ other = ∅`.
    pub fn disjoint_from(&self, other: &SetExpr) -> Option<bool> {
        self.clone().intersect(other.clone()).is_empty_set()
    }

    pub fn parse(text: &str) -> Result<SetExpr> {
        let mut cur = Cursor::new(text);
        let e = parse_union(&mut cur)?;
        cur.finish()?;
        Ok(e)
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            SetExpr::Finite(v) => write!(f, "finite{{{}}}", list(v)),
            SetExpr::CoFinite(v) => write!(f, "cofinite{{{}}}", list(v)),
            SetExpr::Residue { modulus, residue } => write!(f, "residue({},{})", modulus, residue),
            SetExpr::Range { lo, hi: Some(h) } => write!(f, "range({},{})", lo, h),
            SetExpr::Range { lo, hi: None } => write!(f, "range({},)", lo),
            SetExpr::Geom(b) => write!(f, "geom({})", b),
            SetExpr::Sampled { horizon, members } => {
                write!(f, "sampled({}){{{}}}", horizon, list(members))
            }
            SetExpr::Union(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 0)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 1)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            SetExpr::Intersection(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            SetExpr::Complement(a) => {
                write!(f, "!")?;
                a.fmt_prec(f, 2)
            }
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl std::str::FromStr for SetExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SetExpr::parse(s)
    }
}

const ATOM_START: &[&str] = &["finite", "cofinite", "residue", "range", "geom", "sampled", "!", "("];

pub(crate) fn parse_union(cur: &mut Cursor) -> Result<SetExpr> {
    let mut left = parse_intersection(cur)?;
    while cur.eat("|") {
        let right = parse_intersection(cur)?;
        left = left.union(right);
    }
    Ok(left)
}

fn parse_intersection(cur: &mut Cursor) -> Result<SetExpr> {
    let mut left = parse_unary(cur)?;
    while cur.eat("&") {
        let right = parse_unary(cur)?;
        left = left.intersect(right);
    }
    Ok(left)
}

fn parse_unary(cur: &mut Cursor) -> Result<SetExpr> {
    if cur.eat("!") {
        return Ok(parse_unary(cur)?.complement());
    }
    if cur.eat("(") {
        let e = parse_union(cur)?;
        cur.expect(")")?;
        return Ok(e);
    }
    parse_atom(cur)
}

fn parse_list(cur: &mut Cursor) -> Result<Vec<u64>> {
    cur.expect("{")?;
    let mut v: Vec<u64> = Vec::new();
    if cur.eat("}") {
        return Ok(v);
    }
    loop {
        let at = cur.pos();
        let n = cur.uint()?;
        if n == 0 {
            return Err(Error::parse(at, &["positive integer"], "indices start at 1"));
        }
        if v.last().is_some_and(|&last| n <= last) {
            return Err(Error::parse(
                at,
                &["strictly increasing index"],
                "list must be strictly increasing",
            ));
        }
        v.push(n);
        if cur.eat("}") {
            return Ok(v);
        }
        cur.expect(",")?;
    }
}

fn parse_atom(cur: &mut Cursor) -> Result<SetExpr> {
    let start = {
        cur.skip_ws();
        cur.pos()
    };
    if cur.eat_keyword("finite") {
        return Ok(SetExpr::Finite(parse_list(cur)?));
    }
    if cur.eat_keyword("cofinite") {
        return Ok(SetExpr::CoFinite(parse_list(cur)?));
    }
    if cur.eat_keyword("residue") {
        cur.expect("(")?;
        let q = cur.uint()?;
        cur.expect(",")?;
        let r = cur.uint()?;
        cur.expect(")")?;
        return SetExpr::residue(q, r)
            .map_err(|_| Error::parse(start, &["residue(q,r) with 0 <= r < q"], "residue out of range"));
    }
    if cur.eat_keyword("range") {
        cur.expect("(")?;
        let lo = cur.uint()?;
        cur.expect(",")?;
        let hi = if cur.eat(")") {
            None
        } else {
            let at = cur.pos();
            let h = cur.uint()?;
            cur.expect(")")?;
            if h < lo {
                return Err(Error::parse(at, &["upper bound >= lower bound"], "empty range"));
            }
            Some(h)
        };
        return Ok(SetExpr::Range { lo, hi });
    }
    if cur.eat_keyword("geom") {
        cur.expect("(")?;
        let b = cur.uint()?;
        cur.expect(")")?;
        return SetExpr::geom(b).map_err(|_| Error::parse(start, &["geom(b) with b >= 2"], "base below 2"));
    }
    if cur.eat_keyword("sampled") {
        cur.expect("(")?;
        let h = cur.uint()?;
        cur.expect(")")?;
        let at = cur.pos();
        let members = parse_list(cur)?;
        if members.last().is_some_and(|&m| m > h) {
            return Err(Error::parse(at, &["members within horizon"], "member past horizon"));
        }
        return Ok(SetExpr::Sampled { horizon: h, members });
    }
    Err(cur.error(ATOM_START, "expected a set expression"))
}

/// Exact rational `count/n`, used by tests and reports.
pub fn ratio(count: u64, n: u64) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(n))
}

/// `true` when the rational lies in `[0, 1]`.
pub fn is_unit_interval(q: &BigRational) -> bool {
    !q.is_negative() && q <= &BigRational::one()
}
