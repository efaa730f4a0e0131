//! Diagonal systems `a_n e_n` / `a_n e*_n`: plank separators when
//! Σ a_n^{-p} converges, cluster-point witnesses and the averaging profile
//! when it diverges, and the passage between functionals and operators.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp_operators::{op_norm, NormValue, PExp, TailOp};
use crate::natset::{SetExpr, SumVerdict};
use crate::scalar::{format_f64, rational_to_f64, Scalar};
use crate::sequences::ScalarSeq;
use crate::vectors::TestVector;

/// Where the diagonal functionals act.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualKind {
    /// `a_n e*_n ∈ ℓ_∞ = ℓ_1^*`; the separator lies in ℓ₁.
    LInfDiagonal,
    /// `a_n e_n` in ℓ₂; the separator lies in ℓ₂.
    L2Diagonal,
}

impl DualKind {
    pub fn exponent(self) -> BigRational {
        match self {
            DualKind::LInfDiagonal => BigRational::one(),
            DualKind::L2Diagonal => BigRational::from_integer(BigInt::from(2)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DualKind::LInfDiagonal => "linf-diagonal",
            DualKind::L2Diagonal => "l2-diagonal",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "linf-diagonal" | "linf" | "l1" => Ok(DualKind::LInfDiagonal),
            "l2-diagonal" | "l2" => Ok(DualKind::L2Diagonal),
            other => Err(Error::parse(
                0,
                &["linf-diagonal", "l2-diagonal"],
                format!("unknown dual kind {:?}", other),
            )),
        }
    }
}

/// `x_n = (1+ε)/a_n` with `|a_n x_n| = 1+ε > 1` for every `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlankSeparator {
    pub kind: DualKind,
    pub margin: BigRational,
    pub vector: ScalarSeq,
    /// `a_n x_n` as a symbolic constant.
    pub product: Scalar,
    /// The identity `a_n x_n = 1+ε` holds in exact arithmetic.
    pub identity_exact: bool,
    /// Bound on Σ a_n^{-p}.
    pub sum_bound: f64,
    /// `‖x‖₁ <= (1+ε)·bound` or `‖h‖₂² <= (1+ε)²·bound`.
    pub norm_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeparatorVerdict {
    Separated(Box<PlankSeparator>),
    /// The summation could not be decided.
    Inconclusive {
        partial: f64,
        horizon: u64,
    },
}

pub fn plank_separator(a: &ScalarSeq, kind: DualKind, margin: &BigRational) -> Result<SeparatorVerdict> {
    if !margin.is_positive() {
        return Err(Error::Domain(format!("margin must be positive, got {}", margin)));
    }
    let p = kind.exponent();
    let bound = match a.sum_inverse_p_verdict(&p, &SetExpr::all()) {
        SumVerdict::Diverges => {
            return Err(Error::NotSeparable(format!(
                "Σ a_n^(-{}) diverges, so the diagonal sequence is acceptable",
                crate::syntax::fmt_rational(&p)
            )))
        }
        SumVerdict::Inconclusive { partial, horizon } => {
            return Ok(SeparatorVerdict::Inconclusive { partial, horizon })
        }
        SumVerdict::Converges { bound } => bound,
    };
    let level = BigRational::one() + margin;
    let level_s = Scalar::from_rational(level.clone());
    let vector = a.reciprocal().scale(&level_s);
    let product = a
        .mul(&vector)
        .and_then(|s| s.as_constant())
        .ok_or_else(|| Error::Invalid("separator identity is not symbolic for this sequence".into()))?;
    let identity_exact = product.is_exact() && product.exact_eq(&level_s);
    if !identity_exact && (product.to_f64() - level_s.to_f64()).abs() > 1e-12 * level_s.to_f64() {
        return Err(Error::Invalid(format!(
            "separator identity fails: a_n x_n = {}",
            product
        )));
    }
    let lf = rational_to_f64(&level);
    let norm_bound = match kind {
        DualKind::LInfDiagonal => lf * bound,
        DualKind::L2Diagonal => lf * lf * bound,
    };
    Ok(SeparatorVerdict::Separated(Box::new(PlankSeparator {
        kind,
        margin: margin.clone(),
        vector,
        product,
        identity_exact,
        sum_bound: bound,
        norm_bound,
    })))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClusterOutcome {
    /// Smallest `m` with `max_k |a_m (x_k)_m| < 1`.
    Found { m: u64, maxima: Vec<Scalar>, value: Scalar },
    /// No index up to the horizon; not a refutation.
    NotFound {
        horizon: u64,
        running_min: f64,
        argmin: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterWitness {
    /// Σ a_n^{-r} at the dual exponent `r`; divergence is the regime where
    /// witnesses exist for every finite family.
    pub divergence: SumVerdict,
    pub outcome: ClusterOutcome,
}

/// `|a_m (x)_m|`.
fn diag_value(a: &ScalarSeq, x: &TestVector, m: u64) -> Scalar {
    a.eval_at(m).mul(&x.coord(m)).abs()
}

pub fn cluster_witness(a: &ScalarSeq, dual_p: &BigRational, xs: &[TestVector], horizon: u64) -> Result<ClusterWitness> {
    if *dual_p < BigRational::one() {
        return Err(Error::Domain(format!("dual exponent must be >= 1, got {}", dual_p)));
    }
    if let Some(bad) = xs.iter().find(|x| !x.in_lp(dual_p)) {
        return Err(Error::Domain(format!("{} is not in l{}", bad, dual_p)));
    }
    let divergence = a.sum_inverse_p_verdict(dual_p, &SetExpr::all());
    let one = Scalar::one();
    let (mut running_min, mut argmin) = (f64::INFINITY, 0);
    let a_f = a.float_eval();
    for m in 1..=horizon {
        let af = a_f.at(m);
        let approx = xs.iter().map(|x| (af * x.coord_f64(m)).abs()).fold(0.0, f64::max);
        if approx < running_min {
            running_min = approx;
            argmin = m;
        }
        if approx > 1.0 + 1e-9 {
            continue;
        }
        let maxima: Vec<Scalar> = xs.iter().map(|x| diag_value(a, x, m)).collect();
        let value = maxima
            .iter()
            .cloned()
            .max_by(|p, q| p.cmp_value(q))
            .unwrap_or_else(Scalar::zero);
        if value.cmp_value(&one) == Ordering::Less {
            return Ok(ClusterWitness {
                divergence,
                outcome: ClusterOutcome::Found { m, maxima, value },
            });
        }
    }
    Ok(ClusterWitness {
        divergence,
        outcome: ClusterOutcome::NotFound {
            horizon,
            running_min,
            argmin,
        },
    })
}

/// One row of the averaging profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub n: u64,
    /// `A(n) = Σ_{m≤n} p_{n,m} Σ_k |a_m (x_k)_m|`.
    pub a: f64,
    /// `B(n) = Σ_k ‖x_k‖₁ / Σ_{j≤n} a_j^{-1}`.
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Profile {
    pub rows: Vec<ProfileRow>,
    /// `A(n) <= B(n)` on every grid point.
    pub bound_holds: bool,
    /// `B` is strictly decreasing along the grid.
    pub b_decreasing: bool,
}

impl Lemma1Profile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,A,B\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.n, format_f64(r.a), format_f64(r.b)));
        }
        out
    }
}

/// Averages of `|a_m x_k(m)|` with weights `p_{n,m} = a_m^{-1}/Σ_{j≤n} a_j^{-1}`.
pub fn lemma1_profile(a: &ScalarSeq, xs: &[TestVector], grid: &[u64]) -> Result<Lemma1Profile> {
    if !a.sum_inverse_p_verdict(&BigRational::one(), &SetExpr::all()).diverges() {
        return Err(Error::Domain("the profile needs Σ a_n^{-1} = ∞".into()));
    }
    let one = BigRational::one();
    if let Some(bad) = xs.iter().find(|x| !x.in_lp(&one)) {
        return Err(Error::Domain(format!("{} is not in l1", bad)));
    }
    let norms: Vec<f64> = xs
        .iter()
        .map(|x| x.l1_norm_upper().expect("l1 membership checked"))
        .collect();
    let total_norm: f64 = norms.iter().sum();
    let mut grid: Vec<u64> = grid.iter().copied().filter(|&n| n >= 1).collect();
    grid.sort_unstable();
    grid.dedup();
    let mut rows = Vec::with_capacity(grid.len());
    // running sums: H(n) = Σ a_j^{-1}, W(n) = Σ_m a_m^{-1} Σ_k |a_m x_k(m)| = Σ_m Σ_k |x_k(m)|
    let (mut h, mut w) = (0.0f64, 0.0f64);
    let mut m = 0u64;
    let af = a.float_eval();
    for &n in &grid {
        while m < n {
            m += 1;
            let am = af.at(m);
            h += 1.0 / am;
            w += xs.iter().map(|x| (am * x.coord_f64(m)).abs()).sum::<f64>() / am;
        }
        rows.push(ProfileRow {
            n,
            a: w / h,
            b: total_norm / h,
        });
    }
    let bound_holds = rows.iter().all(|r| r.a <= r.b * (1.0 + 1e-12));
    let b_decreasing = rows.windows(2).all(|p| p[1].b < p[0].b);
    Ok(Lemma1Profile {
        rows,
        bound_holds,
        b_decreasing,
    })
}

/// `T_n = a_n e*_n ⊗ e_anchor` and its norm.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedOperator {
    pub n: u64,
    pub anchor: u64,
    /// Single nonzero matrix entry, at row `anchor`, column `n`.
    pub entry: Scalar,
    /// `‖T_n‖ = ‖a_n e*_n‖ ‖e_anchor‖ = a_n`.
    pub norm: Scalar,
}

/// Lifts diagonal functionals to rank-one operators, `n = 1..=count`.
pub fn lift_functionals_to_operators(a: &ScalarSeq, anchor: u64, count: u64) -> Result<Vec<LiftedOperator>> {
    if anchor == 0 {
        return Err(Error::Invalid("the anchor index starts at 1".into()));
    }
    Ok((1..=count)
        .map(|n| {
            let entry = a.eval_at(n);
            // ℓ₁ operator norm of a one-entry matrix: its largest column sum
            let norm = entry.abs();
            LiftedOperator { n, anchor, entry, norm }
        })
        .collect())
}

/// Functional extracted from an ℓ₁ stage `S̃_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedFunctional {
    pub n: usize,
    /// Coordinates of `x*_n = y*_n ∘ S̃_n`.
    pub coords: Vec<Scalar>,
    /// `‖x*_n‖_∞`.
    pub norm: Scalar,
    pub op_norm: NormValue,
    /// `‖x*_n‖ = ‖S̃_n‖` exactly.
    pub norm_attained: bool,
    /// Largest `|x*_n(x)| / ‖S̃_n x‖` over the sampled vectors.
    pub worst_ratio: f64,
}

/// For each ℓ₁ stage, picks a column of maximal norm, the sign functional
/// `y*` norming its image, and returns `x* = y* ∘ S̃_n`; then checks
/// `|x*(x)| <= 2‖S̃_n x‖` on `samples` seeded vectors.
pub fn extract_functionals(stages: &[TailOp], samples: usize, seed: u64) -> Result<Vec<ExtractedFunctional>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(stages.len());
    for t in stages {
        if t.space.p != PExp::One {
            return Err(Error::Domain(
                "functional extraction is implemented on l1 stages".into(),
            ));
        }
        let dim = t.n + 1;
        let u = t.u();
        // column j < n is e_j; column n is −u
        let col_norm = u.iter().fold(Scalar::zero(), |acc, x| acc.add(&x.abs()));
        let column: Vec<Scalar> = if col_norm.cmp_value(&Scalar::one()) == Ordering::Greater {
            u.iter()
                .map(|x| x.neg())
                .chain(std::iter::once(Scalar::zero()))
                .collect()
        } else {
            let mut e = vec![Scalar::zero(); dim];
            e[0] = Scalar::one();
            e
        };
        let sign = |x: &Scalar| match x.cmp_value(&Scalar::zero()) {
            Ordering::Less => Scalar::from_int(-1),
            _ => Scalar::one(),
        };
        let y: Vec<Scalar> = column.iter().map(sign).collect();
        // x*_i = Σ_r y_r T_{r,i}
        let mut coords: Vec<Scalar> = y[..t.n].to_vec();
        let last = y[..t.n]
            .iter()
            .zip(&u)
            .fold(Scalar::zero(), |acc, (yr, ur)| acc.sub(&yr.mul(ur)));
        coords.push(last);
        let norm = coords
            .iter()
            .map(|c| c.abs())
            .max_by(|p, q| p.cmp_value(q))
            .expect("nonempty");
        let on = op_norm(t)?.value;
        let norm_attained = norm.exact_eq(&on.to_scalar());
        let cf: Vec<f64> = coords.iter().map(|c| c.to_f64()).collect();
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let image: f64 = t.apply_f64(&x)?.iter().map(|v| v.abs()).sum();
            let val: f64 = cf.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>().abs();
            if image > 0.0 {
                worst = worst.max(val / image);
            }
        }
        out.push(ExtractedFunctional {
            n: t.n,
            coords,
            norm,
            op_norm: on,
            norm_attained,
            worst_ratio: worst,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::filters::FilterSpec;
    use crate::lp_operators::SpaceKind;
    use crate::scalar::rat;

    fn seq(s: &str) -> ScalarSeq {
        ScalarSeq::parse(s).unwrap()
    }

    fn vecs(v: &[&str]) -> Vec<TestVector> {
        v.iter().map(|s| TestVector::parse(s).unwrap()).collect()
    }

    #[test]
    fn separators() {
        let SeparatorVerdict::Separated(s) =
            plank_separator(&seq("pow(1,2)"), DualKind::LInfDiagonal, &rat(1, 10)).unwrap()
        else {
            panic!("expected a separator")
        };
        assert!(s.identity_exact);
        assert_eq!(s.product, Scalar::from_rational(rat(11, 10)));
        assert!(s.norm_bound <= 1.1 * 2.0 + 1e-12);
        assert_eq!(s.vector.eval_at(2), Scalar::from_rational(rat(11, 40)));
        assert!(matches!(
            plank_separator(&seq("pow(1,1)"), DualKind::L2Diagonal, &rat(1, 10)).unwrap(),
            SeparatorVerdict::Separated(_)
        ));
        assert!(matches!(
            plank_separator(&seq("const(2)"), DualKind::LInfDiagonal, &rat(1, 10)),
            Err(Error::NotSeparable(_))
        ));
    }

    #[test]
    fn cluster_witnesses() {
        let w = cluster_witness(&seq("const(2)"), &rat(1, 1), &vecs(&["unit(1)"]), 10).unwrap();
        assert!(matches!(w.outcome, ClusterOutcome::Found { m: 2, .. }));
        let w = cluster_witness(&seq("pow(1,1/2)"), &rat(2, 1), &vecs(&["tail(1,1)"]), 100).unwrap();
        assert!(matches!(w.outcome, ClusterOutcome::Found { m: 2, .. }));
        let w = cluster_witness(&seq("pow(1,2)"), &rat(1, 1), &vecs(&["tail(11/10,2)"]), 1000).unwrap();
        match w.outcome {
            ClusterOutcome::NotFound { running_min, .. } => assert!((running_min - 1.1).abs() < 1e-12),
            other => panic!("{:?}", other),
        }
        assert!(w.divergence.converges());
    }

    #[test]
    fn profile() {
        let p = lemma1_profile(&seq("const(1)"), &vecs(&["unit(1)"]), &[1, 10, 100]).unwrap();
        for r in &p.rows {
            assert!((r.a - 1.0 / r.n as f64).abs() < 1e-15 && (r.b - r.a).abs() < 1e-15);
        }
        let p = lemma1_profile(&seq("pow(1,1/2)"), &vecs(&["tail(1,2)"]), &[10, 100]).unwrap();
        assert!(p.bound_holds && p.b_decreasing);
        assert!(p.to_csv().starts_with("n,A,B\n"));
        assert!(lemma1_profile(&seq("pow(1,2)"), &vecs(&["unit(1)"]), &[10]).is_err());
    }

    #[test]
    fn lifts() {
        let ops = lift_functionals_to_operators(&seq("const(2)"), 1, 5).unwrap();
        assert!(ops.iter().all(|t| t.norm == Scalar::from_int(2)));
        let sys = build_basis(&seq("const(2)"), &SpaceKind::l1(8), &FilterSpec::Frechet, 8).unwrap();
        let fs = extract_functionals(&sys.stages, 100, 0).unwrap();
        for f in &fs {
            assert!(f.norm_attained, "stage {}", f.n);
            assert!(f.worst_ratio <= 2.0);
        }
    }
}
