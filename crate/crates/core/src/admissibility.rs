//! `(F,p)`-admissibility: Σ_{n∈I} a_n^{-p} = ∞ for every F-stationary `I`.
//!
//! Verdicts are proved by sufficient criteria and refuted by explicit
//! witnesses: symbolic sets from a fixed library, or sets built block by
//! block with a certificate attached.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{classify_set, FilterSpec, SetClass};
use crate::natset::{SetExpr, SumVerdict, DEFAULT_HORIZON};
use crate::scalar::rational_to_f64;
use crate::sequences::{intersect_simplified, ScalarSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionKind {
    /// Blocks `D_m ⊂ {a^p s > 2^m}` with s-mass in `[1, 2]`.
    Greedy,
    /// One index per level: `a_{n_k}^p >= 2^k`.
    Sparse,
}

/// A witness set built index by index up to a horizon, with the rule that
/// continues it past the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructedWitness {
    pub kind: ConstructionKind,
    pub blocks: Vec<Vec<u64>>,
    /// Weight mass of each block (greedy) — each lies in `[1, 2]`.
    pub block_sums: Vec<f64>,
    /// Σ a_n^{-p} over the emitted prefix.
    pub inverse_sum: f64,
    /// Certified bound on Σ a_n^{-p} over the whole witness.
    pub bound: f64,
    pub horizon: u64,
    pub rule: String,
}

impl ConstructedWitness {
    pub fn indices(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.blocks.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// The emitted prefix as a set expression.
    pub fn prefix_set(&self) -> SetExpr {
        SetExpr::finite(self.indices())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Symbolic(SetExpr),
    Constructed(ConstructedWitness),
}

impl Witness {
    pub fn set_text(&self) -> String {
        match self {
            Witness::Symbolic(s) => s.to_string(),
            Witness::Constructed(c) => c.prefix_set().to_string(),
        }
    }
}

impl Witness {
    /// Short description for messages: constructed witnesses list only their
    /// first indices.
    pub fn summary(&self) -> String {
        const SHOWN: usize = 8;
        match self {
            Witness::Symbolic(s) => s.to_string(),
            Witness::Constructed(c) => {
                let idx = c.indices();
                if idx.len() <= SHOWN {
                    return c.prefix_set().to_string();
                }
                let head: Vec<String> = idx[..SHOWN].iter().map(u64::to_string).collect();
                format!(
                    "{{{}, ...}} ({} indices up to {})",
                    head.join(","),
                    idx.len(),
                    c.horizon
                )
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.set_text())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdmissVerdict {
    Proved {
        criterion: String,
    },
    Refuted {
        witness: Witness,
        /// Classification of a symbolic witness under the filter.
        filter_class: Option<SetClass>,
        /// Σ a_n^{-p} over the witness.
        inverse_sum: SumVerdict,
    },
    Inconclusive {
        reason: String,
    },
}

impl AdmissVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            AdmissVerdict::Proved { .. } => "Proved",
            AdmissVerdict::Refuted { .. } => "Refuted",
            AdmissVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, AdmissVerdict::Proved { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, AdmissVerdict::Refuted { .. })
    }
}

fn proved(c: impl Into<String>) -> AdmissVerdict {
    AdmissVerdict::Proved { criterion: c.into() }
}

fn inconclusive(r: impl Into<String>) -> AdmissVerdict {
    AdmissVerdict::Inconclusive { reason: r.into() }
}

fn check_p(p: &BigRational) -> Result<()> {
    if *p < BigRational::one() {
        return Err(Error::Domain(format!("exponent p must be >= 1, got {}", p)));
    }
    Ok(())
}

/// Decides whether `a` is `(F,p)`-admissible.
pub fn check_admissible(a: &ScalarSeq, f: &FilterSpec, p: &BigRational) -> Result<AdmissVerdict> {
    check_admissible_with_horizon(a, f, p, DEFAULT_HORIZON)
}

pub fn check_admissible_with_horizon(
    a: &ScalarSeq,
    f: &FilterSpec,
    p: &BigRational,
    horizon: u64,
) -> Result<AdmissVerdict> {
    check_p(p)?;
    let global = a.sum_inverse_p_verdict(p, &SetExpr::all());
    if global.converges() {
        return Ok(AdmissVerdict::Refuted {
            witness: Witness::Symbolic(SetExpr::all()),
            filter_class: Some(SetClass::Member),
            inverse_sum: global,
        });
    }
    if a.is_bounded() == Some(true) {
        return Ok(proved(
            "bounded: a_n^-p stays above a positive constant on every infinite set",
        ));
    }
    match f {
        FilterSpec::Frechet => Ok(frechet(a, f, p, horizon)),
        FilterSpec::Summable(s) => Ok(summable(a, s, f, p, horizon)),
        FilterSpec::Statistical => Ok(statistical(a, f, p)),
        FilterSpec::Trace(base, _) => {
            let inner = check_admissible_with_horizon(a, base, p, horizon)?;
            Ok(match inner {
                AdmissVerdict::Proved { criterion } => {
                    proved(format!("admissible for the base filter ({})", criterion))
                }
                AdmissVerdict::Refuted {
                    witness: Witness::Symbolic(w),
                    inverse_sum,
                    ..
                } if classify_set(&w, f).is_stationary_or_member() => AdmissVerdict::Refuted {
                    filter_class: Some(classify_set(&w, f)),
                    witness: Witness::Symbolic(w),
                    inverse_sum,
                },
                _ => library_search(a, f, p)
                    .unwrap_or_else(|| inconclusive("base-filter verdict does not transfer to the trace")),
            })
        }
    }
}

fn frechet(a: &ScalarSeq, f: &FilterSpec, p: &BigRational, horizon: u64) -> AdmissVerdict {
    if a.is_bounded() != Some(false) {
        return library_search(a, f, p).unwrap_or_else(|| inconclusive("boundedness of a is not decidable"));
    }
    if let Some(v) = library_search(a, f, p) {
        return v;
    }
    match sparse_witness(a, p, horizon) {
        Some(w) => AdmissVerdict::Refuted {
            inverse_sum: SumVerdict::Converges { bound: w.bound },
            witness: Witness::Constructed(w),
            filter_class: None,
        },
        None => inconclusive(format!(
            "a is unbounded but no index with a_n^p >= 2 lies below the horizon {}",
            horizon
        )),
    }
}

/// The summable-filter criterion at exponent `p`: is `a^p s` bounded outside a set
/// of finite `s`-mass? `None` when undecidable here.
pub fn summable_criterion(a: &ScalarSeq, s: &ScalarSeq, p: &BigRational) -> Option<bool> {
    let mut undecided = false;
    for (ra, fa) in a.regions() {
        for (rs, fs) in s.regions() {
            let region = intersect_simplified(&ra, &rs);
            let g = fa.times_power(p, &fs);
            if g.bounded() {
                continue;
            }
            match s.weight_sum(&region) {
                SumVerdict::Converges { .. } => {}
                SumVerdict::Diverges => return Some(false),
                SumVerdict::Inconclusive { .. } => undecided = true,
            }
        }
    }
    (!undecided).then_some(true)
}

fn summable(a: &ScalarSeq, s: &ScalarSeq, f: &FilterSpec, p: &BigRational, horizon: u64) -> AdmissVerdict {
    match summable_criterion(a, s, p) {
        Some(true) => proved("a^p s is bounded outside a set of finite s-mass"),
        Some(false) => {
            if let Some(v) = library_search(a, f, p) {
                return v;
            }
            match greedy_blocks(a, s, p, horizon) {
                Ok(w) => AdmissVerdict::Refuted {
                    inverse_sum: SumVerdict::Converges { bound: w.bound },
                    witness: Witness::Constructed(w),
                    filter_class: None,
                },
                Err(e) => inconclusive(format!("criterion fails but greedy construction stopped: {}", e)),
            }
        }
        None => {
            library_search(a, f, p).unwrap_or_else(|| inconclusive("the boundedness criterion is not decidable here"))
        }
    }
}

fn statistical(a: &ScalarSeq, f: &FilterSpec, p: &BigRational) -> AdmissVerdict {
    let form = a.tail_form();
    match (a.is_nondecreasing(), form) {
        (Some(true), Some(form)) => {
            let threshold = p.recip();
            if form.beta < threshold || (form.beta == threshold && !form.gamma.is_positive()) {
                proved("non-decreasing with sup a_n / n^(1/p) < infinity")
            } else {
                library_search(a, f, p).unwrap_or_else(|| {
                    inconclusive(
                        "non-decreasing with sup a_n / n^(1/p) = infinity, so not admissible by \
                         the monotone criterion; no witness of positive density is expressible",
                    )
                })
            }
        }
        _ => library_search(a, f, p)
            .unwrap_or_else(|| inconclusive("statistical criterion needs a non-decreasing sequence")),
    }
}

/// Structured candidate sets for admissibility refutations.
pub fn admissibility_library(a: &ScalarSeq, f: &FilterSpec) -> Vec<SetExpr> {
    let mut out = Vec::new();
    for b in 2..=5u64 {
        out.push(SetExpr::Geom(b));
    }
    out.push(SetExpr::Geom(2).union(SetExpr::Geom(3)));
    for q in 2..=4u64 {
        for r in 0..q {
            out.push(SetExpr::Residue { modulus: q, residue: r });
        }
    }
    for (region, _) in a.regions() {
        if region != SetExpr::all() {
            out.push(region.clone());
            out.push(intersect_simplified(&region, &SetExpr::Geom(2)));
        }
    }
    if let FilterSpec::Trace(_, i) = f {
        let base: Vec<SetExpr> = out.iter().map(|w| intersect_simplified(w, i)).collect();
        out.insert(0, i.clone());
        out.extend(base);
    }
    out
}

/// First library set that is stationary (or a member) with Σ a^{-p} < ∞.
fn library_search(a: &ScalarSeq, f: &FilterSpec, p: &BigRational) -> Option<AdmissVerdict> {
    for w in admissibility_library(a, f) {
        let class = classify_set(&w, f);
        if !class.is_stationary_or_member() {
            continue;
        }
        let sum = a.sum_inverse_p_verdict(p, &w);
        if sum.converges() {
            return Some(AdmissVerdict::Refuted {
                witness: Witness::Symbolic(w),
                filter_class: Some(class),
                inverse_sum: sum,
            });
        }
    }
    None
}

/// `n_k` = the smallest index after `n_{k-1}` with `a_n^p >= 2^k`.
fn sparse_witness(a: &ScalarSeq, p: &BigRational, horizon: u64) -> Option<ConstructedWitness> {
    let pf = rational_to_f64(p);
    let mut blocks = Vec::new();
    let mut inverse_sum = 0.0;
    let mut level = 2.0f64;
    let af = a.float_eval();
    for n in 1..=horizon {
        let ap = af.at(n).powf(pf);
        if ap >= level {
            blocks.push(vec![n]);
            inverse_sum += 1.0 / ap;
            level *= 2.0;
        }
    }
    if blocks.is_empty() {
        return None;
    }
    Some(ConstructedWitness {
        kind: ConstructionKind::Sparse,
        blocks,
        block_sums: Vec::new(),
        inverse_sum,
        bound: 1.0,
        horizon,
        rule: "n_k = least index after n_(k-1) with a_n^p >= 2^k; exists for every k because a is \
               unbounded, and sum a_(n_k)^-p <= sum 2^-k = 1"
            .into(),
    })
}

/// The greedy block construction, run without consulting the criterion.
///
/// Block `m = 1, 2, ...` collects, smallest index first, unused indices with
/// `a_n^p s_n > 2^m` and `s_n <= 1` until its `s`-mass reaches 1 (so it is
/// at most 2). Then Σ_{D_m} a^{-p} < 2^{-m} Σ_{D_m} s <= 2^{1-m}.
pub fn greedy_blocks(a: &ScalarSeq, s: &ScalarSeq, p: &BigRational, horizon: u64) -> Result<ConstructedWitness> {
    let pf = rational_to_f64(p);
    let mut blocks = Vec::new();
    let mut block_sums = Vec::new();
    let mut inverse_sum = 0.0;
    let mut current = Vec::new();
    let mut mass = 0.0;
    let mut inv = 0.0;
    let mut level = 2.0f64;
    let (af, sf) = (a.float_eval(), s.float_eval());
    for n in 1..=horizon {
        let sn = sf.at(n);
        let ap = af.at(n).powf(pf);
        if sn > 1.0 || ap * sn <= level {
            continue;
        }
        current.push(n);
        mass += sn;
        inv += 1.0 / ap;
        if mass >= 1.0 {
            blocks.push(std::mem::take(&mut current));
            block_sums.push(mass);
            inverse_sum += inv;
            mass = 0.0;
            inv = 0.0;
            level *= 2.0;
        }
    }
    if blocks.is_empty() {
        return Err(Error::HorizonExceeded {
            requested: horizon.saturating_add(1),
            available: horizon,
        });
    }
    Ok(ConstructedWitness {
        kind: ConstructionKind::Greedy,
        blocks,
        block_sums,
        inverse_sum,
        bound: 2.0,
        horizon,
        rule: "block D_m: smallest unused indices with a_n^p s_n > 2^m until the s-mass reaches 1; \
               every block has s-mass in [1,2], so the s-sum diverges while sum a_n^-p <= 2"
            .into(),
    })
}

/// Greedy non-admissibility witness for `Summable(s)`; refuses when the
/// boundedness criterion holds.
pub fn nonadmissibility_witness(
    a: &ScalarSeq,
    s: &ScalarSeq,
    p: &BigRational,
    horizon: u64,
) -> Result<ConstructedWitness> {
    check_p(p)?;
    if summable_criterion(a, s, p) == Some(true) {
        return Err(Error::CriterionHolds);
    }
    greedy_blocks(a, s, p, horizon)
}

/// Re-checks a refutation: the witness meets every filter member and
/// carries a finite Σ a^{-p}.
pub fn verify_refutation(a: &ScalarSeq, f: &FilterSpec, p: &BigRational, v: &AdmissVerdict) -> bool {
    let AdmissVerdict::Refuted { witness, .. } = v else {
        return false;
    };
    match witness {
        Witness::Symbolic(w) => {
            classify_set(w, f).is_stationary_or_member() && a.sum_inverse_p_verdict(p, w).converges()
        }
        Witness::Constructed(c) => {
            let pf = rational_to_f64(p);
            let total: f64 = c.indices().iter().map(|&n| a.eval_f64(n).powf(-pf)).sum();
            let sums_ok = match (c.kind, f.root()) {
                (ConstructionKind::Greedy, FilterSpec::Summable(s)) => c.blocks.iter().all(|b| {
                    let m: f64 = b.iter().map(|&n| s.eval_f64(n)).sum();
                    (1.0..=2.0).contains(&m)
                }),
                (ConstructionKind::Sparse, FilterSpec::Frechet) => c.blocks.iter().all(|b| b.len() == 1),
                _ => false,
            };
            sums_ok && total <= c.bound * (1.0 + 1e-12)
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct BandReport {
    pub p: BigRational,
    pub sufficient: AdmissVerdict,
    pub necessary: Vec<(BigRational, AdmissVerdict)>,
}

/// `s = 1 + k (p - 1) / 4` for `k = 1, 2, 3`.
pub fn default_band_schedule(p: &BigRational) -> Vec<BigRational> {
    (1..=3)
        .map(|k| BigRational::one() + (p - BigRational::one()) * BigRational::new(BigInt::from(k), BigInt::from(4)))
        .collect()
}

/// Sufficient condition at `p` and necessary conditions at exponents below.
pub fn admissibility_band(a: &ScalarSeq, f: &FilterSpec, p: &BigRational) -> Result<BandReport> {
    admissibility_band_with(a, f, p, &default_band_schedule(p))
}

pub fn admissibility_band_with(
    a: &ScalarSeq,
    f: &FilterSpec,
    p: &BigRational,
    schedule: &[BigRational],
) -> Result<BandReport> {
    let two = BigRational::from_integer(BigInt::from(2));
    if *p <= BigRational::one() || *p >= two {
        return Err(Error::Domain(format!("band exponent must lie in (1,2), got {}", p)));
    }
    let sufficient = check_admissible(a, f, p)?;
    let necessary = schedule
        .iter()
        .map(|s| Ok((s.clone(), check_admissible(a, f, s)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BandReport {
        p: p.clone(),
        sufficient,
        necessary,
    })
}

/// `Summable(1/a)`, the summable filter for which `a` is admissible at p = 1.
pub fn associated_summable_filter(a: &ScalarSeq) -> Result<FilterSpec> {
    match a.sum_inverse_p_verdict(&BigRational::one(), &SetExpr::all()) {
        SumVerdict::Diverges => Ok(FilterSpec::Summable(a.reciprocal())),
        SumVerdict::Converges { bound } => Err(Error::NotDivergent(format!(
            "sum of 1/a_n is at most {}",
            crate::scalar::format_f64(bound)
        ))),
        SumVerdict::Inconclusive { .. } => Err(Error::NotDivergent(
            "divergence of sum 1/a_n could not be certified".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SlowVerdict {
    SlowByRule(String),
    NotSlow { witness: ScalarSeq },
    Inconclusive(String),
}

/// Slow filters: every (F,1)-admissible sequence has inf a_n / sqrt(n) = 0.
pub fn slow_certificate(f: &FilterSpec) -> SlowVerdict {
    if let FilterSpec::Summable(ScalarSeq::PowerLog { beta, gamma, .. }) = f {
        let alpha = -beta.clone();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if gamma.is_zero() && alpha.is_positive() && alpha < half {
            return SlowVerdict::SlowByRule(format!(
                "weights c n^-{} with exponent in (0, 1/2)",
                crate::syntax::fmt_rational(&alpha)
            ));
        }
    }
    let one = BigRational::one();
    for text in ["pow(1,1/2)", "pow(1,3/4)", "pow(1,1)"] {
        let a = ScalarSeq::parse(text).expect("library sequence");
        if let Ok(v) = check_admissible(&a, f, &one) {
            if v.is_proved() {
                return SlowVerdict::NotSlow { witness: a };
            }
        }
    }
    SlowVerdict::Inconclusive("no rule applies and no library sequence with inf a_n/sqrt(n) > 0 is admissible".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn seq(s: &str) -> ScalarSeq {
        ScalarSeq::parse(s).unwrap()
    }

    fn filt(s: &str) -> FilterSpec {
        FilterSpec::parse(s).unwrap()
    }

    #[test]
    fn spec_examples() {
        let two = rat(2, 1);
        let one = rat(1, 1);
        assert!(check_admissible(&seq("pow(1,1/2)"), &FilterSpec::Statistical, &two)
            .unwrap()
            .is_proved());
        for f in ["frechet", "statistical", "summable(pow(1,-1))"] {
            let v = check_admissible(&seq("pow(1,1)"), &filt(f), &two).unwrap();
            match &v {
                AdmissVerdict::Refuted {
                    witness: Witness::Symbolic(w),
                    ..
                } => assert_eq!(*w, SetExpr::all()),
                other => panic!("{:?}", other),
            }
            assert!(verify_refutation(&seq("pow(1,1)"), &filt(f), &two, &v));
        }
        assert!(
            check_admissible(&seq("pow(1,1/2)"), &filt("summable(pow(1,-1/2))"), &one)
                .unwrap()
                .is_proved()
        );
        assert!(check_admissible(&seq("const(3)"), &FilterSpec::Frechet, &one)
            .unwrap()
            .is_proved());
        assert!(check_admissible(&seq("pow(1,1)"), &FilterSpec::Frechet, &rat(1, 2)).is_err());
    }

    #[test]
    fn frechet_refutations() {
        let one = rat(1, 1);
        let v = check_admissible(&seq("pow(1,1/2)"), &FilterSpec::Frechet, &one).unwrap();
        assert_eq!(
            v,
            AdmissVerdict::Refuted {
                witness: Witness::Symbolic(SetExpr::Geom(2)),
                filter_class: Some(SetClass::Stationary),
                inverse_sum: seq("pow(1,1/2)").sum_inverse_p_verdict(&one, &SetExpr::Geom(2)),
            }
        );
        // logarithmic growth needs the sparse construction
        let a = seq("powlog(1,0,1/2)");
        let v = check_admissible(&a, &FilterSpec::Frechet, &one).unwrap();
        assert!(matches!(
            &v,
            AdmissVerdict::Refuted {
                witness: Witness::Constructed(_),
                ..
            }
        ));
        assert!(verify_refutation(&a, &FilterSpec::Frechet, &one, &v));
    }

    #[test]
    fn greedy_block_example() {
        let one = rat(1, 1);
        let w = nonadmissibility_witness(&seq("pow(1,2)"), &seq("pow(1,-1)"), &one, 100_000).unwrap();
        assert_eq!(w.blocks[0], vec![3, 4, 5, 6, 7]);
        assert!(w.block_sums.iter().all(|m| (1.0..=2.0).contains(m)));
        assert!(w.inverse_sum <= 2.0);
        assert!(matches!(
            nonadmissibility_witness(&seq("const(2)"), &seq("pow(1,-1)"), &one, 1000),
            Err(Error::CriterionHolds)
        ));
        assert!(matches!(
            nonadmissibility_witness(&seq("pow(1,1)"), &seq("pow(1,-1)"), &one, 1000),
            Err(Error::CriterionHolds)
        ));
        // a = n, s = n^-1/2: no library witness, greedy refutes
        let f = filt("summable(pow(1,-1/2))");
        let v = check_admissible(&seq("pow(1,1)"), &f, &one).unwrap();
        assert!(matches!(
            &v,
            AdmissVerdict::Refuted {
                witness: Witness::Constructed(_),
                ..
            }
        ));
        assert!(verify_refutation(&seq("pow(1,1)"), &f, &one, &v));
    }

    #[test]
    fn band_and_associated_filter() {
        let p = rat(3, 2);
        let band = admissibility_band(&seq("pow(1,3/5)"), &FilterSpec::Statistical, &p).unwrap();
        assert!(band.sufficient.is_proved());
        assert!(band.necessary.iter().all(|(_, v)| v.is_proved()));
        let band = admissibility_band(&seq("pow(1,2/3)"), &FilterSpec::Frechet, &p).unwrap();
        assert!(band.sufficient.is_refuted());
        assert!(band.necessary.iter().all(|(_, v)| v.is_refuted()));
        assert!(admissibility_band(&seq("const(5)"), &FilterSpec::Statistical, &p)
            .unwrap()
            .necessary
            .iter()
            .all(|(_, v)| v.is_proved()));
        assert!(admissibility_band(&seq("const(5)"), &FilterSpec::Statistical, &rat(2, 1)).is_err());

        assert_eq!(
            associated_summable_filter(&seq("pow(1,1/2)")).unwrap().to_string(),
            "summable(pow(1,-1/2))"
        );
        assert_eq!(
            associated_summable_filter(&seq("const(2)")).unwrap().to_string(),
            "summable(const(1/2))"
        );
        assert!(matches!(
            associated_summable_filter(&seq("pow(1,2)")),
            Err(Error::NotDivergent(_))
        ));
        let a = seq("pow(1,1/2)");
        let f = associated_summable_filter(&a).unwrap();
        assert!(check_admissible(&a, &f, &rat(1, 1)).unwrap().is_proved());
    }

    #[test]
    fn slow_filters() {
        assert!(matches!(
            slow_certificate(&filt("summable(pow(1,-1/4))")),
            SlowVerdict::SlowByRule(_)
        ));
        match slow_certificate(&filt("summable(pow(1,-1))")) {
            SlowVerdict::NotSlow { witness } => assert_eq!(witness, seq("pow(1,1/2)")),
            other => panic!("{:?}", other),
        }
        assert!(matches!(
            slow_certificate(&FilterSpec::Statistical),
            SlowVerdict::NotSlow { .. }
        ));
    }

    #[test]
    fn trace_filters_inherit() {
        let one = rat(1, 1);
        let t = filt("trace(statistical; residue(2,0))");
        assert!(check_admissible(&seq("pow(1,1/2)"), &t, &one).unwrap().is_proved());
        let t = filt("trace(frechet; residue(3,1))");
        let v = check_admissible(&seq("pow(1,1/2)"), &t, &one).unwrap();
        assert!(verify_refutation(&seq("pow(1,1/2)"), &t, &one, &v), "{:?}", v);
    }
}
