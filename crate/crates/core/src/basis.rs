//! The rank-one perturbation construction: coefficients `b_n` chosen so that
//! the partial-sum operators of `v_n = Σ_{i≤n} b_i e_i`,
//! `v*_n = e*_n/b_n − e*_{n+1}/b_{n+1}` have norms `a_n`, together with the
//! defect sequence `c_n = ‖v_n‖/b_{n+1}` and its filter-convergence analysis.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::admissibility::{check_admissible, AdmissVerdict};
use crate::error::{Error, Result};
use crate::filters::{
    classify_set, default_eps_schedule, first_switch, limit_from_sets, monotone_from, FilterSpec, LimitVerdict,
    SetClass,
};
use crate::lp_operators::{
    exact_sum, lp_norm, op_norm, remainder_norm, solve_b_next, NormReport, NormValue, PExp, SpaceKind, TailOp,
};
use crate::natset::SetExpr;
use crate::scalar::{rational_to_f64, Scalar};
use crate::sequences::{ScalarSeq, TailForm};
use crate::vectors::TestVector;

/// Relative tolerance for norm checks when a value is not exact.
pub const NORM_TOL: f64 = 1e-9;
/// Finite exceptional sets up to this many candidates are listed
/// element by element; larger ones are reported as an enclosing range.
pub const ENUM_CAP: u64 = 100_000;

pub const INCONCLUSIVE_GATE_CAVEAT: &str = "For 1 < p < 2 admissibility is only a sufficient condition; \
with an Inconclusive gate the F-basis property of the built system is not certified";
pub const TRUNCATION_CAVEAT: &str = "vector-level checks are certified on the n_max-truncation; \
exceptional sets carry the infinite-tail content";

/// Invariant checks performed while building.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildChecks {
    /// `|‖S̃_n‖ − a_n|` maximised over stages (zero when every stage is exact).
    pub max_norm_error: f64,
    /// Every stage norm equals `a_n` as an exact identity.
    pub norms_exact: bool,
    /// `max_n |c_n − a_n|`; the construction guarantees at most 1.
    pub max_defect_gap: f64,
    /// ℓ₁ only: `Σ_{i≤n+1} b_i = (1 + 1/a_n) Σ_{i≤n} b_i` at every stage, exactly for exact targets.
    pub l1_partial_sum_identity: Option<bool>,
    /// ℓ₁ only: `‖R_n‖ = 1 + a_n` at every stage, exactly for exact targets.
    pub l1_remainder_attained: Option<bool>,
    /// `max(1, ‖S̃_n‖ − 1) <= ‖R_n‖ <= ‖S̃_n‖ + 1` at every stage.
    pub remainder_sandwich: bool,
}

impl BuildChecks {
    pub fn passed(&self) -> bool {
        self.max_norm_error <= NORM_TOL
            && self.max_defect_gap <= 1.0 + NORM_TOL
            && self.l1_partial_sum_identity != Some(false)
            && self.l1_remainder_attained != Some(false)
            && self.remainder_sandwich
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSystem {
    pub space: SpaceKind,
    pub target: ScalarSeq,
    pub filter: FilterSpec,
    pub n_max: usize,
    /// `b_1, ..., b_{n_max}`.
    pub coefficients: Vec<Scalar>,
    /// `S̃_n` for `n = 1, ..., n_max − 1`.
    pub stages: Vec<TailOp>,
    pub norms: Vec<NormReport>,
    /// `‖R_n‖` per stage.
    pub remainders: Vec<NormReport>,
    /// `c_n = ‖v_n‖/b_{n+1}` per stage.
    pub defect_coeffs: Vec<Scalar>,
    /// Admissibility verdict that gated the build, at exponent `gate_p`.
    pub gate: AdmissVerdict,
    pub gate_p: BigRational,
    pub caveats: Vec<String>,
    pub checks: BuildChecks,
}

impl BasisSystem {
    /// `a_n` for stage `n`.
    pub fn target_at(&self, n: usize) -> Scalar {
        self.target.eval_at(n as u64)
    }
}

/// `φ(a) = (a^{p'} − 1)^{1/p'}`: the defect coefficient forced by `‖S̃_n‖ = a`.
/// Equals `a` in ℓ₁ and `sqrt(a² − 1)` in ℓ₂.
pub fn defect_from_norm(a: &Scalar, space: &SpaceKind) -> Scalar {
    match &space.p {
        PExp::One => a.clone(),
        PExp::Two => match a.square() {
            Some(a2) => Scalar::sqrt_of(a2 - BigRational::one()),
            None => {
                let x = a.to_f64();
                Scalar::Float((x * x - 1.0).max(0.0).sqrt())
            }
        },
        PExp::Other(_) => {
            let p = space.p_f64();
            let q = p / (p - 1.0);
            Scalar::Float((a.to_f64().powf(q) - 1.0).max(0.0).powf(1.0 / q))
        }
    }
}

/// `‖(b_1, ..., b_n)‖_p / b_{n+1}`.
fn defect_coefficient(b: &[Scalar], space: &SpaceKind) -> Scalar {
    let n = b.len() - 1;
    let last = &b[n];
    match &space.p {
        PExp::One => exact_sum(&b[..n]).div(last).expect("positive"),
        PExp::Two => {
            let squares: Option<Vec<BigRational>> = b.iter().map(|x| x.square()).collect();
            match squares {
                Some(sq) => {
                    let total: BigRational = sq[..n].iter().cloned().sum();
                    Scalar::sqrt_of(total / &sq[n])
                }
                None => {
                    let v: Vec<f64> = b[..n].iter().map(|x| x.to_f64()).collect();
                    Scalar::Float(lp_norm(&v, 2.0) / last.to_f64())
                }
            }
        }
        PExp::Other(_) => {
            let v: Vec<f64> = b[..n].iter().map(|x| x.to_f64()).collect();
            Scalar::Float(lp_norm(&v, space.p_f64()) / last.to_f64())
        }
    }
}

/// Whether a computed norm equals `a`, and the absolute error.
fn norm_matches(v: &NormValue, a: &Scalar) -> (bool, f64) {
    let exact = match (v, a.is_exact()) {
        (NormValue::Exact(q), true) => Some(Scalar::from_rational(q.clone()).exact_eq(a)),
        (NormValue::ExactSquare(q), true) => a.square().map(|a2| a2 == *q && a.is_positive()),
        _ => None,
    };
    match exact {
        Some(true) => (true, 0.0),
        _ => (false, (v.to_f64() - a.to_f64()).abs()),
    }
}

/// Exponent at which the build is gated by admissibility.
fn gate_exponent(space: &SpaceKind) -> (BigRational, Option<String>) {
    let p = space.p_rational();
    if p > BigRational::from_integer(BigInt::from(2)) {
        (
            BigRational::one(),
            Some(format!(
                "for p = {} > 2 the gate checks the necessary (F,1)-admissibility only",
                crate::syntax::fmt_rational(&p)
            )),
        )
    } else {
        (p, None)
    }
}

/// Builds `b_1, ..., b_{n_max}` with `‖S̃_n‖ = a_n` for `n < n_max`.
/// Exact equality when both sides are exact, relative agreement within
/// [`NORM_TOL`] once either side has left the exact field.
fn agrees(x: &Scalar, y: &Scalar) -> bool {
    if x.is_exact() && y.is_exact() {
        return x.exact_eq(y);
    }
    let (x, y) = (x.to_f64(), y.to_f64());
    (x - y).abs() <= NORM_TOL * x.abs().max(y.abs()).max(1.0)
}

pub fn build_basis(a: &ScalarSeq, space: &SpaceKind, f: &FilterSpec, n_max: usize) -> Result<BasisSystem> {
    if n_max < 2 {
        return Err(Error::Domain(format!("n_max must be >= 2, got {}", n_max)));
    }
    let space = space.with_dim(n_max);
    let (gate_p, gate_note) = gate_exponent(&space);
    let gate = check_admissible(a, f, &gate_p)?;
    let mut caveats = vec![TRUNCATION_CAVEAT.to_string()];
    caveats.extend(gate_note);
    match &gate {
        AdmissVerdict::Refuted { witness, .. } => {
            return Err(Error::NotAdmissible {
                witness: witness.summary(),
            });
        }
        AdmissVerdict::Inconclusive { .. } => caveats.push(INCONCLUSIVE_GATE_CAVEAT.to_string()),
        AdmissVerdict::Proved { .. } => {}
    }
    let one = Scalar::one();
    for n in 1..=n_max as u64 {
        let v = a.eval_at(n);
        if v.cmp_value(&one) != Ordering::Greater {
            return Err(Error::Domain(format!("a_{} = {} must exceed 1", n, v)));
        }
    }

    let mut b = vec![Scalar::one()];
    let mut stages = Vec::with_capacity(n_max - 1);
    let mut norms = Vec::with_capacity(n_max - 1);
    let mut remainders = Vec::with_capacity(n_max - 1);
    let mut defects = Vec::with_capacity(n_max - 1);
    let mut checks = BuildChecks {
        max_norm_error: 0.0,
        norms_exact: true,
        max_defect_gap: 0.0,
        l1_partial_sum_identity: (space.p == PExp::One).then_some(true),
        l1_remainder_attained: (space.p == PExp::One).then_some(true),
        remainder_sandwich: true,
    };
    for n in 1..n_max {
        let an = a.eval_at(n as u64);
        let next = solve_b_next(&b, &an, &space)?;
        if space.p == PExp::One {
            let before = exact_sum(&b);
            let after = before.add(&next);
            let predicted = before.mul(&one.add(&an.recip().expect("a_n > 1")));
            if !agrees(&after, &predicted) {
                checks.l1_partial_sum_identity = Some(false);
            }
        }
        b.push(next);
        let stage = TailOp::new(n, b.clone(), space.clone())?;
        let norm = op_norm(&stage)?;
        let (exact, err) = norm_matches(&norm.value, &an);
        checks.norms_exact &= exact;
        checks.max_norm_error = checks.max_norm_error.max(err / an.to_f64().max(1.0));

        let c = defect_coefficient(&b, &space);
        let gap = (c.to_f64() - an.to_f64()).abs();
        checks.max_defect_gap = checks.max_defect_gap.max(gap);

        let rem = remainder_norm(&stage, n + 2)?;
        let (s, r) = (norm.to_f64(), rem.to_f64());
        let slack = NORM_TOL * s.max(1.0);
        if r < 1.0f64.max(s - 1.0) - slack || r > s + 1.0 + slack {
            checks.remainder_sandwich = false;
        }
        if space.p == PExp::One && !agrees(&rem.value.to_scalar(), &an.add(&one)) {
            checks.l1_remainder_attained = Some(false);
        }
        stages.push(stage);
        norms.push(norm);
        remainders.push(rem);
        defects.push(c);
    }
    if !checks.passed() {
        return Err(Error::Invalid(format!(
            "construction failed its invariant checks: {:?}",
            checks
        )));
    }
    Ok(BasisSystem {
        space,
        target: a.clone(),
        filter: f.clone(),
        n_max,
        coefficients: b,
        stages,
        norms,
        remainders,
        defect_coeffs: defects,
        gate,
        gate_p,
        caveats,
        checks,
    })
}

/// Outcome of checking `v*_m(v_n) = δ_{mn}` on the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalityRecord {
    pub pairs_checked: usize,
    /// Every pair evaluated in exact arithmetic.
    pub all_exact: bool,
    pub max_error: f64,
    /// Pairs `(m, n)` that violate the identity.
    pub failures: Vec<(usize, usize)>,
}

impl BiorthogonalityRecord {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `v*_m(v_n)` from the coefficients, `m < n_max`, `n <= n_max`.
pub fn pairing(sys: &BasisSystem, m: usize, n: usize) -> Scalar {
    let b = &sys.coefficients;
    // v_n has coordinates b_1..b_n; v*_m reads coordinates m and m+1.
    let coord = |i: usize| if i <= n { b[i - 1].clone() } else { Scalar::zero() };
    let first = coord(m).div(&b[m - 1]).expect("positive");
    let second = coord(m + 1).div(&b[m]).expect("positive");
    first.sub(&second)
}

pub fn verify_biorthogonality(sys: &BasisSystem) -> BiorthogonalityRecord {
    let mut rec = BiorthogonalityRecord {
        pairs_checked: 0,
        all_exact: true,
        max_error: 0.0,
        failures: Vec::new(),
    };
    for m in 1..sys.n_max {
        for n in 1..=sys.n_max {
            let v = pairing(sys, m, n);
            let want = if m == n { Scalar::one() } else { Scalar::zero() };
            rec.pairs_checked += 1;
            let ok = if v.is_exact() {
                v.exact_eq(&want)
            } else {
                rec.all_exact = false;
                let err = (v.to_f64() - want.to_f64()).abs();
                rec.max_error = rec.max_error.max(err);
                err <= 1e-12
            };
            if !ok {
                rec.failures.push((m, n));
            }
        }
    }
    rec
}

// ---------------------------------------------------------------------------
// Convergence of the defect term

/// Exceptional set `{n : d_n >= ε}` of the defect term at one ε.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalEntry {
    pub epsilon: BigRational,
    /// `None` when the set is not expressible.
    pub set: Option<SetExpr>,
    /// The set is a finite range enclosing the exceptional set.
    pub enclosure: bool,
    pub class_filter: SetClass,
    pub class_frechet: SetClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub vector: TestVector,
    pub space: SpaceKind,
    pub filter: FilterSpec,
    /// `d_n = |x_{n+1}| c_n` for `n < n_max`, on the truncation.
    pub defects: Vec<Scalar>,
    pub exceptional: Vec<ExceptionalEntry>,
    pub verdict: LimitVerdict,
    pub frechet_verdict: LimitVerdict,
}

/// Exact comparison `d >= eps`, falling back to binary64 away from ties.
fn at_least(d: &Scalar, eps: &Scalar) -> bool {
    d.cmp_value(eps) != Ordering::Less
}

struct DefectTerm<'a> {
    a: &'a ScalarSeq,
    space: &'a SpaceKind,
    x: &'a TestVector,
}

impl DefectTerm<'_> {
    /// `|x_{n+1}| φ(a_n)`.
    fn at(&self, n: u64) -> Scalar {
        let xn = self.x.coord(n + 1).abs();
        if xn.is_zero() {
            return xn;
        }
        xn.mul(&defect_from_norm(&self.a.eval_at(n), self.space))
    }

    /// Binary64 screen first, exact comparison near the threshold.
    fn exceeds(&self, n: u64, eps: &Scalar) -> bool {
        let xn = self.x.coord_f64(n + 1).abs();
        if xn == 0.0 {
            return false;
        }
        let approx = xn * defect_from_norm(&Scalar::Float(self.a.eval_f64(n)), self.space).to_f64();
        let e = eps.to_f64();
        if (approx - e).abs() > 1e-9 * e {
            return approx > e;
        }
        at_least(&self.at(n), eps)
    }

    fn exceptional(&self, eps: &BigRational) -> Option<(SetExpr, bool)> {
        let eps_s = Scalar::from_rational(eps.clone());
        match self.x {
            TestVector::Finite(v) => {
                let members: Vec<u64> = v
                    .iter()
                    .filter(|(k, _)| *k >= 2)
                    .map(|(k, _)| k - 1)
                    .filter(|&n| self.exceeds(n, &eps_s))
                    .collect();
                Some((SetExpr::finite(members), false))
            }
            TestVector::PowerTail { coef, beta } => self.power_tail(coef, beta, eps, &eps_s),
            TestVector::GeomSpikes { base, shift, decay } => self.spikes(*base, *shift, decay, eps, &eps_s),
        }
    }

    fn tail_start(&self) -> u64 {
        self.a.prefix_len() + 1
    }

    fn power_tail(
        &self,
        coef: &BigRational,
        beta_x: &BigRational,
        eps: &BigRational,
        eps_s: &Scalar,
    ) -> Option<(SetExpr, bool)> {
        if coef.is_zero() {
            return Some((SetExpr::empty(), false));
        }
        let form = self.a.tail_form()?;
        // d_n <= |coef| n^{-β_x} a_n for n past the prefix, since φ(a) <= a.
        let bound = TailForm {
            coef: rational_to_f64(&coef.abs()) * form.coef,
            beta: &form.beta - beta_x,
            gamma: form.gamma.clone(),
        };
        let decays = bound.beta.is_negative() || (bound.beta.is_zero() && bound.gamma.is_negative());
        if !decays {
            return None;
        }
        let n0 = monotone_from(&bound)?.max(self.tail_start());
        let e = rational_to_f64(eps) * (1.0 - 1e-9);
        let below = |n: u64| bound.at(n) < e;
        let cut = first_switch(&below, n0, true)?;
        if cut - 1 > ENUM_CAP {
            return Some((
                SetExpr::Range {
                    lo: 1,
                    hi: Some(cut - 1),
                },
                true,
            ));
        }
        let members: Vec<u64> = (1..cut).filter(|&n| self.exceeds(n, eps_s)).collect();
        Some((SetExpr::finite(members), false))
    }

    fn spikes(
        &self,
        base: u64,
        shift: u64,
        decay: &BigRational,
        eps: &BigRational,
        eps_s: &Scalar,
    ) -> Option<(SetExpr, bool)> {
        let form = self.a.tail_form()?;
        let index = |m: u64| {
            base.checked_pow(u32::try_from(m).ok()?)?
                .checked_add(shift)?
                .checked_sub(1)
        };
        let (beta, gamma) = (rational_to_f64(&form.beta), rational_to_f64(&form.gamma));
        let d = rational_to_f64(decay);
        let lnb = (base as f64).ln();
        let gm_d = &form.gamma - decay;
        let grows = form.beta.is_positive() || (form.beta.is_zero() && gm_d.is_positive());
        let decays = form.beta.is_negative() || (form.beta.is_zero() && gm_d.is_negative());
        // first level whose defect index lies past the explicit prefix
        let mut m_p = 1u64;
        while index(m_p)? < self.tail_start() {
            m_p += 1;
        }
        let e = rational_to_f64(eps);
        if grows {
            if shift != 1 {
                return None;
            }
            // d at n = b^m is at least h(m) = K b^{mβ} m^{γ−decay} − m^{−decay}.
            let k = form.coef
                * if gamma >= 0.0 {
                    lnb.powf(gamma)
                } else {
                    (2.0 * base as f64).ln().powf(gamma)
                };
            let h = |m: u64| {
                let mf = m as f64;
                (k.ln() + mf * beta * lnb + (gamma - d) * mf.ln()).exp() - mf.powf(-d)
            };
            let m_star = if beta > 0.0 && d > gamma {
                ((d - gamma) / (beta * lnb)).floor() as u64 + 1
            } else {
                1
            };
            let start = m_star.max(m_p);
            let above = |m: u64| h(m) >= e * (1.0 + 1e-9);
            let cut = first_switch(&above, start, true)?;
            let mut exceptions = Vec::new();
            for m in 1..cut {
                let n = index(m)?;
                if !self.exceeds(n, eps_s) {
                    exceptions.push(n);
                }
            }
            let geom = SetExpr::geom(base).ok()?;
            let set = if exceptions.is_empty() {
                geom
            } else {
                geom.intersect(SetExpr::finite(exceptions).complement())
            };
            Some((set, false))
        } else if decays {
            // d at n = b^m + shift − 1 is at most U(m) = c F G b^{mβ} m^{γ−decay}.
            let g = if gamma >= 0.0 {
                ((base * (1 + shift)) as f64).ln().powf(gamma)
            } else {
                lnb.powf(gamma)
            };
            let f = if shift == 0 && beta < 0.0 {
                2f64.powf(-beta)
            } else {
                1.0
            };
            let c = form.coef * f * g;
            let u = |m: u64| {
                let mf = m as f64;
                (c.ln() + mf * beta * lnb + (gamma - d) * mf.ln()).exp()
            };
            let m_star = if gamma > d && beta < 0.0 {
                ((gamma - d) / (-beta * lnb)).floor() as u64 + 1
            } else {
                1
            };
            let start = m_star.max(m_p);
            let below = |m: u64| u(m) < e * (1.0 - 1e-9);
            let cut = first_switch(&below, start, true)?;
            let mut members = Vec::new();
            for m in 1..cut {
                let n = index(m)?;
                if self.exceeds(n, eps_s) {
                    members.push(n);
                }
            }
            Some((SetExpr::finite(members), false))
        } else {
            None
        }
    }
}

/// Analyses `d_n = |x_{n+1}| c_n → 0` along `sys.filter` and along the
/// Fréchet filter.
pub fn convergence_demo(sys: &BasisSystem, x: &TestVector) -> Result<ConvergenceReport> {
    convergence_demo_with(sys, x, &default_eps_schedule())
}

pub fn convergence_demo_with(sys: &BasisSystem, x: &TestVector, schedule: &[BigRational]) -> Result<ConvergenceReport> {
    if !x.in_lp(&sys.space.p_rational()) {
        return Err(Error::Domain(format!("{} is not in {}", x, sys.space)));
    }
    let term = DefectTerm {
        a: &sys.target,
        space: &sys.space,
        x,
    };
    let defects = (1..sys.n_max)
        .map(|n| x.coord(n as u64 + 1).abs().mul(&sys.defect_coeffs[n - 1]))
        .collect();
    let mut exceptional = Vec::with_capacity(schedule.len());
    for eps in schedule {
        let found = term.exceptional(eps);
        let (set, enclosure) = match found {
            Some((s, e)) => (Some(s), e),
            None => (None, false),
        };
        let classify = |f: &FilterSpec| set.as_ref().map_or(SetClass::Inconclusive, |s| classify_set(s, f));
        exceptional.push(ExceptionalEntry {
            epsilon: eps.clone(),
            class_filter: classify(&sys.filter),
            class_frechet: classify(&FilterSpec::Frechet),
            set,
            enclosure,
        });
    }
    let lookup = |eps: &BigRational| {
        exceptional
            .iter()
            .find(|e| &e.epsilon == eps)
            .and_then(|e| e.set.clone())
    };
    let zero = BigRational::zero();
    let verdict = limit_from_sets(&sys.filter, &zero, schedule, lookup);
    let frechet_verdict = limit_from_sets(&FilterSpec::Frechet, &zero, schedule, lookup);
    Ok(ConvergenceReport {
        vector: x.clone(),
        space: sys.space.clone(),
        filter: sys.filter.clone(),
        defects,
        exceptional,
        verdict,
        frechet_verdict,
    })
}

/// Test vectors used to probe the defect term: a unit vector, a power tail
/// and a sparse spike vector, all in every ℓ_p with `p >= 1`.
pub fn defect_test_family() -> Vec<TestVector> {
    ["unit(1)", "tail(1,2)", "spikes(2,1,2)"]
        .iter()
        .map(|s| TestVector::parse(s).expect("fixed family parses"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub defect_coeffs: Vec<Scalar>,
    /// `|c_n − a_n|` per stage.
    pub gaps: Vec<f64>,
    pub max_gap: f64,
    /// ℓ₁: `c_n = a_n` exactly at every stage.
    pub l1_exact: Option<bool>,
    /// `c_n` equals `φ(a_n)` at every stage (exactly when both are exact).
    pub matches_closed_form: bool,
    /// Closed form of the whole defect sequence, when it lies in the
    /// sequence family (ℓ₁: `c = a`).
    pub defect_seq: Option<ScalarSeq>,
    pub family: Vec<(TestVector, LimitVerdict)>,
}

pub fn defect_report(sys: &BasisSystem) -> Result<DefectReport> {
    let mut gaps = Vec::new();
    let mut l1_exact = (sys.space.p == PExp::One).then_some(true);
    let mut matches_closed_form = true;
    for (i, c) in sys.defect_coeffs.iter().enumerate() {
        let a = sys.target_at(i + 1);
        gaps.push((c.to_f64() - a.to_f64()).abs());
        if sys.space.p == PExp::One && !(c.is_exact() && c.exact_eq(&a)) {
            l1_exact = Some(false);
        }
        let phi = defect_from_norm(&a, &sys.space);
        let ok = if c.is_exact() && phi.is_exact() {
            c.exact_eq(&phi)
        } else {
            (c.to_f64() - phi.to_f64()).abs() <= 1e-7 * phi.to_f64().max(1.0)
        };
        matches_closed_form &= ok;
    }
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    let defect_seq = (sys.space.p == PExp::One).then(|| sys.target.clone());
    let mut family = Vec::new();
    for x in defect_test_family() {
        let r = convergence_demo(sys, &x)?;
        family.push((x, r.verdict));
    }
    Ok(DefectReport {
        defect_coeffs: sys.defect_coeffs.clone(),
        gaps,
        max_gap,
        l1_exact,
        matches_closed_form,
        defect_seq,
        family,
    })
}
