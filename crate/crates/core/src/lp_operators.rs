//! The rank-structured operators `S̃_n x = x_{≤n} − (x_{n+1}/b_{n+1}) v_n` on
//! finite truncations of ℓ_p, their norms, and the recurrence solve.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Scalar};
use crate::syntax::{fmt_rational, Cursor};

/// Iteration caps for the numeric paths.
pub const OUTER_CAP: usize = 200;
pub const INNER_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PExp {
    One,
    Two,
    /// `p > 1`, `p != 2`.
    Other(BigRational),
}

/// ℓ_p truncated to `dim` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceKind {
    pub p: PExp,
    pub dim: usize,
}

impl SpaceKind {
    pub fn new(p: BigRational, dim: usize) -> Result<Self> {
        if p < BigRational::one() {
            return Err(Error::Domain(format!("p must be >= 1, got {}", p)));
        }
        if dim < 2 {
            return Err(Error::Domain(format!("truncation dimension must be >= 2, got {}", dim)));
        }
        let p = if p.is_one() {
            PExp::One
        } else if p == BigRational::from_integer(BigInt::from(2)) {
            PExp::Two
        } else {
            PExp::Other(p)
        };
        Ok(SpaceKind { p, dim })
    }

    pub fn l1(dim: usize) -> Self {
        SpaceKind {
            p: PExp::One,
            dim: dim.max(2),
        }
    }

    pub fn l2(dim: usize) -> Self {
        SpaceKind {
            p: PExp::Two,
            dim: dim.max(2),
        }
    }

    pub fn p_rational(&self) -> BigRational {
        match &self.p {
            PExp::One => BigRational::one(),
            PExp::Two => BigRational::from_integer(BigInt::from(2)),
            PExp::Other(q) => q.clone(),
        }
    }

    pub fn p_f64(&self) -> f64 {
        rational_to_f64(&self.p_rational())
    }

    pub fn with_dim(&self, dim: usize) -> Self {
        SpaceKind {
            p: self.p.clone(),
            dim: dim.max(2),
        }
    }

    /// `l1`, `l2`, `lp(RAT)` or `l<RAT>` such as `l1.5`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let mut cur = Cursor::new(text);
        let at = cur.pos();
        if !cur.eat("l") {
            return Err(cur.error(&["l1", "l2", "lp(p)"], "expected a space"));
        }
        let p = if cur.eat("p") {
            cur.expect("(")?;
            let q = cur.rational()?;
            cur.expect(")")?;
            q
        } else {
            cur.rational()?
        };
        cur.finish()?;
        SpaceKind::new(p, dim).map_err(|e| Error::parse(at, &["p >= 1"], e.to_string()))
    }

    /// Grammar form of the exponent: `l1`, `l2`, `lp(3/2)`.
    pub fn name(&self) -> String {
        match &self.p {
            PExp::One => "l1".into(),
            PExp::Two => "l2".into(),
            PExp::Other(q) => format!("lp({})", fmt_rational(q)),
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormValue {
    Exact(BigRational),
    /// The value is the square root of this rational.
    ExactSquare(BigRational),
    Float(f64),
}

impl NormValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(q) => rational_to_f64(q),
            NormValue::ExactSquare(q) => rational_to_f64(q).sqrt(),
            NormValue::Float(x) => *x,
        }
    }

    pub fn to_scalar(&self) -> Scalar {
        match self {
            NormValue::Exact(q) => Scalar::from_rational(q.clone()),
            NormValue::ExactSquare(q) => Scalar::sqrt_of(q.clone()),
            NormValue::Float(x) => Scalar::Float(*x),
        }
    }

    pub fn from_scalar(s: &Scalar) -> Self {
        match s {
            Scalar::Exact { .. } => match s.as_rational() {
                Some(q) => NormValue::Exact(q),
                None => NormValue::ExactSquare(s.square().expect("exact")),
            },
            Scalar::Float(x) => NormValue::Float(*x),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, NormValue::Float(_))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_scalar())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormMethod {
    ColumnMax,
    ClosedFormL2,
    NumericOpt,
    BruteForce,
    /// `Id − S̃_n` acts as a rank-one block plus an identity block.
    BlockDiagonal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub value: NormValue,
    pub method: NormMethod,
    pub lower: f64,
    pub upper: f64,
}

impl NormReport {
    fn exact(value: NormValue, method: NormMethod) -> Self {
        let v = value.to_f64();
        NormReport {
            value,
            method,
            lower: v,
            upper: v,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// `S̃_n` for coefficients `b_1..b_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailOp {
    pub n: usize,
    pub b: Vec<Scalar>,
    pub space: SpaceKind,
}

pub(crate) fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    } else {
        let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

impl TailOp {
    pub fn new(n: usize, b: Vec<Scalar>, space: SpaceKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("stage n must be >= 1".into()));
        }
        if b.len() < n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: b.len(),
            });
        }
        if let Some(bad) = b.iter().find(|x| !x.is_positive()) {
            return Err(Error::Domain(format!("coefficients must be positive, got {}", bad)));
        }
        let mut b = b;
        b.truncate(n + 1);
        let space = space.with_dim(space.dim.max(n + 1));
        Ok(TailOp { n, b, space })
    }

    fn last(&self) -> &Scalar {
        &self.b[self.n]
    }

    /// `u_i = b_i / b_{n+1}`, `i <= n`.
    pub fn u(&self) -> Vec<Scalar> {
        let last = self.last();
        self.b[..self.n]
            .iter()
            .map(|x| x.div(last).expect("positive"))
            .collect()
    }

    pub fn u_f64(&self) -> Vec<f64> {
        let last = self.last().to_f64();
        self.b[..self.n].iter().map(|x| x.to_f64() / last).collect()
    }

    /// `S̃_n x`; coordinates past `n` are zero.
    pub fn apply(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() < self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: x.len(),
            });
        }
        let t = x[self.n].div(self.last()).expect("positive");
        let mut out: Vec<Scalar> = (0..self.n).map(|i| x[i].sub(&t.mul(&self.b[i]))).collect();
        out.resize(x.len(), Scalar::zero());
        Ok(out)
    }

    pub fn apply_f64(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() < self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: x.len(),
            });
        }
        let u = self.u_f64();
        let t = x[self.n];
        let mut out: Vec<f64> = (0..self.n).map(|i| x[i] - t * u[i]).collect();
        out.resize(x.len(), 0.0);
        Ok(out)
    }

    /// Dense `(n+1) × (n+1)` matrix, for independent oracles only.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let u = self.u_f64();
        let m = self.n + 1;
        let mut a = vec![vec![0.0; m]; m];
        for i in 0..self.n {
            a[i][i] = 1.0;
            a[i][self.n] = -u[i];
        }
        a
    }

    /// Riesz–Thorin bound `‖T‖_1^{1/p} ‖T‖_∞^{1-1/p}`.
    pub fn riesz_thorin_upper(&self) -> f64 {
        let u = self.u_f64();
        let col = u.iter().sum::<f64>().max(1.0);
        let row = u.iter().fold(1.0f64, |m, x| m.max(1.0 + x));
        let p = self.space.p_f64();
        col.powf(1.0 / p) * row.powf(1.0 - 1.0 / p)
    }

    /// `‖S̃_n‖_p = (1 + ‖u‖_p^{p'})^{1/p'}` in binary64, the value attained
    /// when `x_{≤n}` is parallel to `u`.
    pub fn closed_form_norm(&self) -> f64 {
        let p = self.space.p_f64();
        let un = lp_norm(&self.u_f64(), p);
        if p == 1.0 {
            return un.max(1.0);
        }
        let q = p / (p - 1.0);
        (1.0 + un.powf(q)).powf(1.0 / q)
    }
}

/// Exact Σ b_i over the first `k` coefficients, when the surds combine.
pub(crate) fn exact_sum(b: &[Scalar]) -> Scalar {
    b.iter().fold(Scalar::zero(), |acc, x| acc.add(x))
}

/// Operator norm of `S̃_n` on ℓ_p.
pub fn op_norm(t: &TailOp) -> Result<NormReport> {
    match &t.space.p {
        PExp::One => {
            let s = exact_sum(&t.b[..t.n]).div(t.last()).expect("positive");
            let v = if s.cmp_value(&Scalar::one()) == std::cmp::Ordering::Less {
                Scalar::one()
            } else {
                s
            };
            Ok(NormReport::exact(NormValue::from_scalar(&v), NormMethod::ColumnMax))
        }
        PExp::Two => {
            let squares: Option<Vec<BigRational>> = t.b.iter().map(|x| x.square()).collect();
            match squares {
                Some(sq) => {
                    let total: BigRational = sq[..t.n].iter().cloned().sum();
                    let value = BigRational::one() + total / &sq[t.n];
                    Ok(NormReport::exact(
                        NormValue::ExactSquare(value),
                        NormMethod::ClosedFormL2,
                    ))
                }
                None => {
                    let u = t.u_f64();
                    let v = (1.0 + u.iter().map(|x| x * x).sum::<f64>()).sqrt();
                    Ok(NormReport {
                        value: NormValue::Float(v),
                        method: NormMethod::ClosedFormL2,
                        lower: v,
                        upper: v,
                    })
                }
            }
        }
        PExp::Other(_) => numeric_opt(t),
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `‖S̃_n x‖_p` over unit vectors with `|x_{n+1}| = τ`.
///
/// For fixed `τ` the best `x_{≤n}` lies on the ray of `u` with the defect
/// sign opposite to `x_{n+1}`, scaled by `κ = (1 − τ^p)^{1/p} / ‖u‖_p`, so the
/// value is `‖(κ+τ) u‖_p`; a golden-section search then runs over `τ`.
fn numeric_opt(t: &TailOp) -> Result<NormReport> {
    let p = t.space.p_f64();
    let u = t.u_f64();
    let un = lp_norm(&u, p);
    let value_at = |tau: f64| -> Result<f64> {
        let r = (1.0 - tau.powf(p)).max(0.0).powf(1.0 / p);
        if r == 0.0 || un == 0.0 {
            return Ok((tau * un).max(r).max(tau));
        }
        let kappa = r / un;
        Ok(((kappa + tau) * un).max(r).max(tau))
    };
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (value_at(c)?, value_at(d)?);
    let mut it = 0;
    while b - a > 1e-12 {
        it += 1;
        if it > OUTER_CAP {
            return Err(Error::ConvergenceFailure {
                iterations: it,
                lo: a,
                hi: b,
            });
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = value_at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = value_at(d)?;
        }
    }
    let best = [fc, fd, value_at(0.0)?, value_at(1.0)?, un.max(1.0)]
        .into_iter()
        .fold(f64::MIN, f64::max);
    let upper = t.riesz_thorin_upper().max(best);
    Ok(NormReport {
        value: NormValue::Float(best),
        method: NormMethod::NumericOpt,
        lower: best,
        upper,
    })
}

/// Lower bound from extreme directions, seeded random vectors and
/// coordinate ascent; independent of the structure used by [`op_norm`].
pub fn op_norm_bruteforce(t: &TailOp, budget: usize, seed: u64) -> NormReport {
    let m = t.n + 1;
    if t.space.p == PExp::One {
        // ℓ₁ norms are attained at basis directions; evaluate them exactly.
        let mut best = Scalar::zero();
        for k in 0..m {
            let mut e = vec![Scalar::zero(); m];
            e[k] = Scalar::one();
            let y = t.apply(&e).expect("dimension");
            let norm = y.iter().fold(Scalar::zero(), |acc, v| acc.add(&v.abs()));
            if norm.cmp_value(&best) == std::cmp::Ordering::Greater {
                best = norm;
            }
        }
        let mut r = NormReport::exact(NormValue::from_scalar(&best), NormMethod::BruteForce);
        r.upper = f64::INFINITY;
        return r;
    }
    let p = t.space.p_f64();
    let ratio = |x: &[f64]| -> f64 {
        let den = lp_norm(x, p);
        if den == 0.0 {
            0.0
        } else {
            lp_norm(&t.apply_f64(x).expect("dimension"), p) / den
        }
    };
    let mut best_x = vec![0.0; m];
    let mut best = 0.0;
    for k in 0..m {
        let mut e = vec![0.0; m];
        e[k] = 1.0;
        let r = ratio(&e);
        if r > best {
            best = r;
            best_x = e;
        }
    }
    if budget > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r = ratio(&x);
            if r > best {
                best = r;
                best_x = x;
            }
        }
        best = coordinate_ascent(&ratio, best_x, best).1;
    }
    NormReport {
        value: NormValue::Float(best),
        method: NormMethod::BruteForce,
        lower: best,
        upper: f64::INFINITY,
    }
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Coordinate sweeps with golden line searches plus a pattern step along
/// the net change of each sweep.
fn coordinate_ascent(f: &dyn Fn(&[f64]) -> f64, mut x: Vec<f64>, mut fx: f64) -> (Vec<f64>, f64) {
    let m = x.len();
    for _sweep in 0..OUTER_CAP {
        let start = x.clone();
        let before = fx;
        for j in 0..m {
            let scale = x.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-12);
            let line = |s: f64| {
                let mut y = x.clone();
                y[j] = s;
                f(&y)
            };
            let (s, v) = golden_max(&line, -2.0 * scale, 2.0 * scale, 80);
            if v > fx {
                x[j] = s;
                fx = v;
            }
        }
        let dir: Vec<f64> = x.iter().zip(&start).map(|(a, b)| a - b).collect();
        if dir.iter().any(|v| *v != 0.0) {
            let line = |s: f64| {
                let y: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + s * d).collect();
                f(&y)
            };
            let (s, v) = golden_max(&line, 0.0, 4.0, 80);
            if v > fx {
                x = x.iter().zip(&dir).map(|(a, d)| a + s * d).collect();
                fx = v;
            }
        }
        // renormalize to keep the line-search windows meaningful
        let norm = x.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        if norm > 0.0 {
            x.iter_mut().for_each(|v| *v /= norm);
        }
        if fx - before <= 1e-15 * fx.max(1.0) {
            break;
        }
    }
    (x, fx)
}

/// `b_{n+1}` with `‖S̃_n‖ = a`.
pub fn solve_b_next(b: &[Scalar], a: &Scalar, space: &SpaceKind) -> Result<Scalar> {
    if a.cmp_value(&Scalar::one()) != std::cmp::Ordering::Greater {
        return Err(Error::Domain(format!("target norm must exceed 1, got {}", a)));
    }
    if b.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    match &space.p {
        PExp::One => Ok(exact_sum(b).div(a).expect("positive")),
        PExp::Two => {
            let squares: Option<Vec<BigRational>> = b.iter().map(|x| x.square()).collect();
            match (squares, a.square()) {
                (Some(sq), Some(a2)) => {
                    let total: BigRational = sq.iter().cloned().sum();
                    Ok(Scalar::sqrt_of(total / (a2 - BigRational::one())))
                }
                _ => {
                    let total: f64 = b.iter().map(|x| x.to_f64().powi(2)).sum();
                    let af = a.to_f64();
                    Ok(Scalar::Float((total / (af * af - 1.0)).sqrt()))
                }
            }
        }
        PExp::Other(_) => bisect_b_next(b, a.to_f64(), space),
    }
}

/// Monotone bisection on `b_{n+1}`: the norm falls strictly from ∞ to 1.
fn bisect_b_next(b: &[Scalar], a: f64, space: &SpaceKind) -> Result<Scalar> {
    let n = b.len();
    let norm_at = |beta: f64| -> Result<f64> {
        let mut coeffs = b.to_vec();
        coeffs.push(Scalar::Float(beta));
        let t = TailOp::new(n, coeffs, space.clone())?;
        Ok(op_norm(&t)?.to_f64())
    };
    let scale = b.iter().map(|x| x.to_f64()).fold(0.0f64, f64::max);
    let (mut lo, mut hi) = (scale, scale);
    let mut f_lo = norm_at(lo)?;
    let mut guard = 0;
    while f_lo <= a {
        lo /= 2.0;
        f_lo = norm_at(lo)?;
        guard += 1;
        if guard > INNER_CAP || lo == 0.0 {
            return Err(Error::ConvergenceFailure {
                iterations: guard,
                lo,
                hi,
            });
        }
    }
    let mut f_hi = norm_at(hi)?;
    while f_hi >= a {
        hi *= 2.0;
        f_hi = norm_at(hi)?;
        guard += 1;
        if guard > INNER_CAP || !hi.is_finite() {
            return Err(Error::ConvergenceFailure {
                iterations: guard,
                lo,
                hi,
            });
        }
    }
    let mut it = 0;
    while hi - lo > 1e-13 * hi {
        it += 1;
        if it > INNER_CAP {
            return Err(Error::ConvergenceFailure { iterations: it, lo, hi });
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = norm_at(mid)?;
        // monotonicity check at the bracketing points
        if f_mid > f_lo + 1e-12 || f_mid < f_hi - 1e-12 {
            return Err(Error::ConvergenceFailure { iterations: it, lo, hi });
        }
        if f_mid > a {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(Scalar::Float(0.5 * (lo + hi)))
}

/// Norm of `R_n = Id − S̃_n` on the truncation of dimension `dim > n + 1`.
///
/// `R_n x = (x_{n+1} u, x_{n+1}, x_{n+2}, ...)`, so the norm is
/// `max(1, ‖(u, 1)‖_p) = (1 + ‖u‖_p^p)^{1/p}`.
pub fn remainder_norm(t: &TailOp, dim: usize) -> Result<NormReport> {
    if dim <= t.n + 1 {
        return Err(Error::DimensionMismatch {
            expected: t.n + 2,
            got: dim,
        });
    }
    match &t.space.p {
        PExp::One => {
            let v = exact_sum(&t.b[..t.n])
                .div(t.last())
                .expect("positive")
                .add(&Scalar::one());
            Ok(NormReport::exact(NormValue::from_scalar(&v), NormMethod::ColumnMax))
        }
        PExp::Two => {
            let squares: Option<Vec<BigRational>> = t.b.iter().map(|x| x.square()).collect();
            match squares {
                Some(sq) => {
                    let total: BigRational = sq[..t.n].iter().cloned().sum();
                    let value = BigRational::one() + total / &sq[t.n];
                    Ok(NormReport::exact(
                        NormValue::ExactSquare(value),
                        NormMethod::ClosedFormL2,
                    ))
                }
                None => {
                    let v = (1.0 + t.u_f64().iter().map(|x| x * x).sum::<f64>()).sqrt();
                    Ok(NormReport {
                        value: NormValue::Float(v),
                        method: NormMethod::ClosedFormL2,
                        lower: v,
                        upper: v,
                    })
                }
            }
        }
        PExp::Other(_) => {
            let p = t.space.p_f64();
            let mut col = t.u_f64();
            col.push(1.0);
            let v = lp_norm(&col, p).max(1.0);
            Ok(NormReport {
                value: NormValue::Float(v),
                method: NormMethod::BlockDiagonal,
                lower: v,
                upper: v,
            })
        }
    }
}

/// `‖R_n x‖_p / ‖x‖_p` evaluated directly, for oracles.
pub fn remainder_apply_f64(t: &TailOp, x: &[f64]) -> Result<Vec<f64>> {
    let s = t.apply_f64(x)?;
    Ok(x.iter().zip(&s).map(|(a, b)| a - b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn rat_scalar(n: i64, d: i64) -> Scalar {
        Scalar::from_rational(rat(n, d))
    }

    fn op(n: usize, b: &[Scalar], space: SpaceKind) -> TailOp {
        TailOp::new(n, b.to_vec(), space).unwrap()
    }

    #[test]
    fn apply_examples() {
        let one = Scalar::one();
        let t = op(1, &[one.clone(), one.clone()], SpaceKind::l1(4));
        let e1 = vec![one.clone(), Scalar::zero()];
        let e2 = vec![Scalar::zero(), one.clone()];
        assert_eq!(t.apply(&e1).unwrap(), e1);
        assert_eq!(t.apply(&e2).unwrap(), vec![one.neg(), Scalar::zero()]);
        let t = op(2, &[one.clone(), rat_scalar(1, 2), rat_scalar(3, 4)], SpaceKind::l1(4));
        let e3 = vec![Scalar::zero(), Scalar::zero(), one.clone()];
        assert_eq!(
            t.apply(&e3).unwrap(),
            vec![rat_scalar(-4, 3), rat_scalar(-2, 3), Scalar::zero()]
        );
        assert!(matches!(t.apply(&e1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn exact_norms() {
        let b = [Scalar::one(), rat_scalar(1, 2), rat_scalar(3, 4)];
        let t = op(2, &b, SpaceKind::l1(4));
        let r = op_norm(&t).unwrap();
        assert_eq!(r.value, NormValue::Exact(rat(2, 1)));
        assert_eq!(op_norm_bruteforce(&t, 0, 0).value, NormValue::Exact(rat(2, 1)));
        assert_eq!(remainder_norm(&t, 5).unwrap().value, NormValue::Exact(rat(3, 1)));
        let b = [Scalar::one(), Scalar::one(), Scalar::sqrt_of(rat(2, 1))];
        let t = op(2, &b, SpaceKind::l2(4));
        assert_eq!(op_norm(&t).unwrap().value, NormValue::ExactSquare(rat(2, 1)));
        let t = op(1, &[Scalar::one(), Scalar::one()], SpaceKind::l2(4));
        assert_eq!(remainder_norm(&t, 3).unwrap().value, NormValue::ExactSquare(rat(2, 1)));
        assert!(remainder_norm(&t, 2).is_err());
    }

    #[test]
    fn solve_examples() {
        let l1 = SpaceKind::l1(8);
        assert_eq!(
            solve_b_next(&[Scalar::one(), rat_scalar(1, 2)], &Scalar::from_int(2), &l1).unwrap(),
            rat_scalar(3, 4)
        );
        assert_eq!(
            solve_b_next(&[Scalar::one()], &Scalar::from_int(2), &l1).unwrap(),
            rat_scalar(1, 2)
        );
        let l2 = SpaceKind::l2(8);
        let b3 = solve_b_next(&[Scalar::one(), Scalar::one()], &Scalar::sqrt_of(rat(2, 1)), &l2).unwrap();
        assert_eq!(b3.square(), Some(rat(2, 1)));
        assert!(matches!(
            solve_b_next(&[Scalar::one()], &Scalar::one(), &l1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn general_p_matches_closed_form_and_bruteforce() {
        let space = SpaceKind::new(rat(3, 2), 8).unwrap();
        let t = op(1, &[Scalar::one(), Scalar::one()], space.clone());
        let r = op_norm(&t).unwrap();
        assert!((r.to_f64() - t.closed_form_norm()).abs() < 1e-12);
        assert!(r.lower <= r.to_f64() && r.to_f64() <= r.upper + 1e-15);
        let bf = op_norm_bruteforce(&t, 200, 7);
        assert!(bf.to_f64() <= r.upper + 1e-12);
        assert!(
            (r.to_f64() - bf.to_f64()).abs() < 1e-6,
            "{} vs {}",
            r.to_f64(),
            bf.to_f64()
        );
        // extreme points only
        let e = op_norm_bruteforce(&t, 0, 0);
        assert_eq!(e.to_f64(), 1.0);
        let b = [Scalar::one(), rat_scalar(1, 3)];
        let bn = solve_b_next(&b, &Scalar::from_rational(rat(5, 2)), &space).unwrap();
        let mut coeffs = b.to_vec();
        coeffs.push(bn);
        let t = op(2, &coeffs, space);
        assert!((op_norm(&t).unwrap().to_f64() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn space_parsing() {
        assert_eq!(SpaceKind::parse("l1", 4).unwrap(), SpaceKind::l1(4));
        assert_eq!(SpaceKind::parse("l2", 4).unwrap(), SpaceKind::l2(4));
        assert_eq!(SpaceKind::parse("lp(3/2)", 4).unwrap().name(), "lp(3/2)");
        assert_eq!(SpaceKind::parse("l1.5", 4).unwrap().name(), "lp(3/2)");
        assert!(SpaceKind::parse("l0.5", 4).is_err());
        assert!(SpaceKind::parse("x", 4).is_err());
    }
}
