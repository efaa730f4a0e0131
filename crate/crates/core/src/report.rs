//! Serializable report records.
//!
//! Every exact value is rendered as text in the grammars of this crate
//! (`3/4`, `sqrt(2)`), every binary64 with 17 significant digits, and every
//! set, sequence and filter in a form that re-parses. Field order is fixed by
//! declaration order, so serialized reports are byte-stable.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::admissibility::{AdmissVerdict, BandReport, ConstructedWitness, Witness};
use crate::basis::{BasisSystem, BiorthogonalityRecord, ConvergenceReport, DefectReport};
use crate::filters::{DomVerdict, LimitVerdict, SetClass};
use crate::lp_operators::NormReport;
use crate::natset::SumVerdict;
use crate::scalar::format_f64;
use crate::separation::{ClusterOutcome, ClusterWitness, Lemma1Profile, PlankSeparator};
use crate::syntax::fmt_rational;

pub fn rational_text(q: &BigRational) -> String {
    fmt_rational(q)
}

pub fn float_text(x: f64) -> String {
    format_f64(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumRecord {
    /// `Converges`, `Diverges` or `Inconclusive`.
    pub verdict: String,
    pub bound: Option<String>,
    pub partial: Option<String>,
    pub horizon: Option<u64>,
}

impl From<&SumVerdict> for SumRecord {
    fn from(v: &SumVerdict) -> Self {
        match v {
            SumVerdict::Diverges => SumRecord {
                verdict: "Diverges".into(),
                bound: None,
                partial: None,
                horizon: None,
            },
            SumVerdict::Converges { bound } => SumRecord {
                verdict: "Converges".into(),
                bound: Some(float_text(*bound)),
                partial: None,
                horizon: None,
            },
            SumVerdict::Inconclusive { partial, horizon } => SumRecord {
                verdict: "Inconclusive".into(),
                bound: None,
                partial: Some(float_text(*partial)),
                horizon: Some(*horizon),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructedRecord {
    pub construction: String,
    pub blocks: Vec<Vec<u64>>,
    pub block_sums: Vec<String>,
    /// Σ a_n^{-p} over the emitted prefix.
    pub inverse_sum: String,
    pub bound: String,
    pub horizon: u64,
    pub rule: String,
}

impl From<&ConstructedWitness> for ConstructedRecord {
    fn from(c: &ConstructedWitness) -> Self {
        ConstructedRecord {
            construction: format!("{:?}", c.kind),
            blocks: c.blocks.clone(),
            block_sums: c.block_sums.iter().map(|x| float_text(*x)).collect(),
            inverse_sum: float_text(c.inverse_sum),
            bound: float_text(c.bound),
            horizon: c.horizon,
            rule: c.rule.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissRecord {
    /// `Proved`, `Refuted` or `Inconclusive`.
    pub verdict: String,
    pub criterion: Option<String>,
    /// Witness set expression (the emitted prefix for constructed witnesses).
    pub witness: Option<String>,
    pub witness_class: Option<SetClass>,
    pub inverse_sum: Option<SumRecord>,
    pub construction: Option<ConstructedRecord>,
    pub reason: Option<String>,
}

impl From<&AdmissVerdict> for AdmissRecord {
    fn from(v: &AdmissVerdict) -> Self {
        let mut r = AdmissRecord {
            verdict: v.kind().into(),
            criterion: None,
            witness: None,
            witness_class: None,
            inverse_sum: None,
            construction: None,
            reason: None,
        };
        match v {
            AdmissVerdict::Proved { criterion } => r.criterion = Some(criterion.clone()),
            AdmissVerdict::Refuted {
                witness,
                filter_class,
                inverse_sum,
            } => {
                r.witness = Some(witness.set_text());
                r.witness_class = *filter_class;
                r.inverse_sum = Some(inverse_sum.into());
                if let Witness::Constructed(c) = witness {
                    r.construction = Some(c.into());
                }
            }
            AdmissVerdict::Inconclusive { reason } => r.reason = Some(reason.clone()),
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandRecord {
    pub sufficient: AdmissRecord,
    pub necessary: Vec<(String, AdmissRecord)>,
}

impl From<&BandReport> for BandRecord {
    fn from(b: &BandReport) -> Self {
        BandRecord {
            sufficient: (&b.sufficient).into(),
            necessary: b.necessary.iter().map(|(s, v)| (rational_text(s), v.into())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormRecord {
    pub value: String,
    pub method: String,
    pub lower: String,
    pub upper: String,
}

impl From<&NormReport> for NormRecord {
    fn from(n: &NormReport) -> Self {
        NormRecord {
            value: n.value.to_scalar().to_string(),
            method: format!("{:?}", n.method),
            lower: float_text(n.lower),
            upper: float_text(n.upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub n: usize,
    pub target: String,
    pub norm: NormRecord,
    pub remainder: NormRecord,
    pub defect: String,
    pub defect_gap: String,
    /// Seeded brute-force lower bound on the stage norm, for `p ∉ {1, 2}`.
    pub bruteforce_lower: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiorthRecord {
    pub pairs_checked: usize,
    pub all_exact: bool,
    pub max_error: String,
    pub failures: Vec<(usize, usize)>,
}

impl From<&BiorthogonalityRecord> for BiorthRecord {
    fn from(b: &BiorthogonalityRecord) -> Self {
        BiorthRecord {
            pairs_checked: b.pairs_checked,
            all_exact: b.all_exact,
            max_error: float_text(b.max_error),
            failures: b.failures.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksRecord {
    pub passed: bool,
    pub norms_exact: bool,
    pub max_norm_error: String,
    pub max_defect_gap: String,
    pub l1_partial_sum_identity: Option<bool>,
    pub l1_remainder_attained: Option<bool>,
    pub remainder_sandwich: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRecord {
    /// `ConvergesTo`, `DoesNotConverge` or `Inconclusive`.
    pub verdict: String,
    pub limit: Option<String>,
    pub epsilon: Option<String>,
    pub witness: Option<String>,
    pub class: Option<SetClass>,
    pub reason: Option<String>,
}

impl From<&LimitVerdict> for LimitRecord {
    fn from(v: &LimitVerdict) -> Self {
        match v {
            LimitVerdict::ConvergesTo(l) => LimitRecord {
                verdict: "ConvergesTo".into(),
                limit: Some(rational_text(l)),
                epsilon: None,
                witness: None,
                class: None,
                reason: None,
            },
            LimitVerdict::DoesNotConverge {
                epsilon,
                witness,
                class,
            } => LimitRecord {
                verdict: "DoesNotConverge".into(),
                limit: None,
                epsilon: Some(rational_text(epsilon)),
                witness: Some(witness.to_string()),
                class: Some(*class),
                reason: None,
            },
            LimitVerdict::Inconclusive { epsilon, reason } => LimitRecord {
                verdict: "Inconclusive".into(),
                limit: None,
                epsilon: Some(rational_text(epsilon)),
                witness: None,
                class: None,
                reason: Some(reason.clone()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectRecord {
    pub max_gap: String,
    pub l1_exact: Option<bool>,
    pub matches_closed_form: bool,
    pub defect_sequence: Option<String>,
    /// Verdict of `d_n → 0` along the filter for each probe vector.
    pub family: Vec<(String, LimitRecord)>,
}

impl From<&DefectReport> for DefectRecord {
    fn from(d: &DefectReport) -> Self {
        DefectRecord {
            max_gap: float_text(d.max_gap),
            l1_exact: d.l1_exact,
            matches_closed_form: d.matches_closed_form,
            defect_sequence: d.defect_seq.as_ref().map(|s| s.to_string()),
            family: d.family.iter().map(|(x, v)| (x.to_string(), v.into())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub sequence: String,
    pub space: String,
    pub filter: String,
    pub n_max: usize,
    pub gate_p: String,
    pub gate: AdmissRecord,
    pub coefficients: Vec<String>,
    pub stages: Vec<StageRecord>,
    pub checks: ChecksRecord,
    pub biorthogonality: BiorthRecord,
    pub defect: DefectRecord,
}

impl BasisRecord {
    pub fn new(sys: &BasisSystem, bio: &BiorthogonalityRecord, defect: &DefectReport) -> Self {
        let stages = (0..sys.stages.len())
            .map(|i| StageRecord {
                n: i + 1,
                target: sys.target_at(i + 1).to_string(),
                norm: (&sys.norms[i]).into(),
                remainder: (&sys.remainders[i]).into(),
                defect: sys.defect_coeffs[i].to_string(),
                defect_gap: float_text(defect.gaps[i]),
                bruteforce_lower: None,
            })
            .collect();
        let c = &sys.checks;
        BasisRecord {
            sequence: sys.target.to_string(),
            space: sys.space.name(),
            filter: sys.filter.to_string(),
            n_max: sys.n_max,
            gate_p: rational_text(&sys.gate_p),
            gate: (&sys.gate).into(),
            coefficients: sys.coefficients.iter().map(|b| b.to_string()).collect(),
            stages,
            checks: ChecksRecord {
                passed: c.passed(),
                norms_exact: c.norms_exact,
                max_norm_error: float_text(c.max_norm_error),
                max_defect_gap: float_text(c.max_defect_gap),
                l1_partial_sum_identity: c.l1_partial_sum_identity,
                l1_remainder_attained: c.l1_remainder_attained,
                remainder_sandwich: c.remainder_sandwich,
            },
            biorthogonality: bio.into(),
            defect: defect.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRecord {
    pub epsilon: String,
    pub set: Option<String>,
    pub enclosure: bool,
    pub class_filter: SetClass,
    pub class_frechet: SetClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub sequence: String,
    pub space: String,
    pub filter: String,
    pub vector: String,
    pub n_max: usize,
    /// `d_n = |x_{n+1}| c_n` on the truncation.
    pub defects: Vec<String>,
    pub exceptional: Vec<ExceptionalRecord>,
    pub verdict: LimitRecord,
    pub frechet_verdict: LimitRecord,
}

impl ConvergenceRecord {
    pub fn new(sys: &BasisSystem, r: &ConvergenceReport) -> Self {
        ConvergenceRecord {
            sequence: sys.target.to_string(),
            space: r.space.name(),
            filter: r.filter.to_string(),
            vector: r.vector.to_string(),
            n_max: sys.n_max,
            defects: r.defects.iter().map(|d| d.to_string()).collect(),
            exceptional: r
                .exceptional
                .iter()
                .map(|e| ExceptionalRecord {
                    epsilon: rational_text(&e.epsilon),
                    set: e.set.as_ref().map(|s| s.to_string()),
                    enclosure: e.enclosure,
                    class_filter: e.class_filter,
                    class_frechet: e.class_frechet,
                })
                .collect(),
            verdict: (&r.verdict).into(),
            frechet_verdict: (&r.frechet_verdict).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorRecord {
    pub kind: String,
    pub margin: String,
    pub vector: String,
    pub product: String,
    pub identity_exact: bool,
    pub sum_bound: String,
    pub norm_bound: String,
}

impl From<&PlankSeparator> for SeparatorRecord {
    fn from(s: &PlankSeparator) -> Self {
        SeparatorRecord {
            kind: s.kind.name().into(),
            margin: rational_text(&s.margin),
            vector: s.vector.to_string(),
            product: s.product.to_string(),
            identity_exact: s.identity_exact,
            sum_bound: float_text(s.sum_bound),
            norm_bound: float_text(s.norm_bound),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub divergence: SumRecord,
    /// `Found` or `NotFound`.
    pub outcome: String,
    pub m: Option<u64>,
    pub maxima: Vec<String>,
    pub value: Option<String>,
    pub horizon: Option<u64>,
    pub running_min: Option<String>,
    pub argmin: Option<u64>,
}

impl From<&ClusterWitness> for ClusterRecord {
    fn from(c: &ClusterWitness) -> Self {
        let divergence = (&c.divergence).into();
        match &c.outcome {
            ClusterOutcome::Found { m, maxima, value } => ClusterRecord {
                divergence,
                outcome: "Found".into(),
                m: Some(*m),
                maxima: maxima.iter().map(|x| x.to_string()).collect(),
                value: Some(value.to_string()),
                horizon: None,
                running_min: None,
                argmin: None,
            },
            ClusterOutcome::NotFound {
                horizon,
                running_min,
                argmin,
            } => ClusterRecord {
                divergence,
                outcome: "NotFound".into(),
                m: None,
                maxima: Vec::new(),
                value: None,
                horizon: Some(*horizon),
                running_min: Some(float_text(*running_min)),
                argmin: Some(*argmin),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationRecord {
    pub sequence: String,
    pub kind: String,
    /// `Separated`, `NotSeparable` or `Inconclusive`.
    pub verdict: String,
    pub separator: Option<SeparatorRecord>,
    pub divergence: Option<SumRecord>,
    /// Cluster-point search on the probe vectors when the sum diverges.
    pub cluster: Option<ClusterRecord>,
    pub probes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub sequence: String,
    pub vectors: Vec<String>,
    pub rows: Vec<(u64, String, String)>,
    pub bound_holds: bool,
    pub b_decreasing: bool,
}

impl ProfileRecord {
    pub fn new(sequence: String, vectors: Vec<String>, p: &Lemma1Profile) -> Self {
        ProfileRecord {
            sequence,
            vectors,
            rows: p.rows.iter().map(|r| (r.n, float_text(r.a), float_text(r.b))).collect(),
            bound_holds: p.bound_holds,
            b_decreasing: p.b_decreasing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationRecord {
    pub stronger: String,
    pub weaker: String,
    /// `Proved`, `Refuted` or `Inconclusive`.
    pub verdict: String,
    pub rule: Option<String>,
    /// A member of the weaker filter that the stronger one misses.
    pub witness: Option<String>,
    pub reason: Option<String>,
}

impl DominationRecord {
    pub fn new(stronger: String, weaker: String, v: &DomVerdict) -> Self {
        let (verdict, rule, witness, reason) = match v {
            DomVerdict::Proved(r) => ("Proved", Some(r.clone()), None, None),
            DomVerdict::Refuted(w) => ("Refuted", None, Some(w.to_string()), None),
            DomVerdict::Inconclusive(r) => ("Inconclusive", None, None, Some(r.clone())),
        };
        DominationRecord {
            stronger,
            weaker,
            verdict: verdict.into(),
            rule,
            witness,
            reason,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyRecord {
    pub set: String,
    pub filter: String,
    pub class: SetClass,
    pub density: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub sequence: String,
    pub filter: String,
    pub p: String,
    pub result: AdmissRecord,
    /// For `1 < p < 2`: the sufficient test at `p` and the necessary ones below.
    pub band: Option<BandRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub sequence: String,
    pub weights: String,
    pub p: String,
    pub witness: String,
    pub construction: ConstructedRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
// Built once per run and serialized; boxing the variants would only add noise.
#[allow(clippy::large_enum_variant)]
pub enum ReportBody {
    Admissibility(AdmissibilityReport),
    Basis(Box<BasisRecord>),
    Witness(WitnessReport),
    Separation(SeparationRecord),
    Classification(ClassifyRecord),
    Convergence(ConvergenceRecord),
    Domination(DominationRecord),
    Profile(ProfileRecord),
}

/// A complete run report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// Echo of the effective inputs, in a fixed order.
    pub inputs: Vec<(String, String)>,
    /// Headline verdict that determines the exit status.
    pub verdict: String,
    pub body: ReportBody,
    pub caveats: Vec<String>,
}

impl Report {
    /// Flat `section,key,value` rows, or the profile table for profiles.
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        if let ReportBody::Profile(p) = &self.body {
            let mut rows = vec![vec!["n".to_string(), "A".to_string(), "B".to_string()]];
            rows.extend(p.rows.iter().map(|(n, a, b)| vec![n.to_string(), a.clone(), b.clone()]));
            return rows;
        }
        let mut rows = vec![vec!["section".to_string(), "key".to_string(), "value".to_string()]];
        rows.push(vec!["report".into(), "command".into(), self.command.clone()]);
        rows.push(vec!["report".into(), "verdict".into(), self.verdict.clone()]);
        for (k, v) in &self.inputs {
            rows.push(vec!["input".into(), k.clone(), v.clone()]);
        }
        match &self.body {
            ReportBody::Basis(b) => {
                for (i, c) in b.coefficients.iter().enumerate() {
                    rows.push(vec!["b".into(), (i + 1).to_string(), c.clone()]);
                }
                for s in &b.stages {
                    rows.push(vec!["norm".into(), s.n.to_string(), s.norm.value.clone()]);
                    rows.push(vec!["defect".into(), s.n.to_string(), s.defect.clone()]);
                }
            }
            ReportBody::Convergence(c) => {
                for e in &c.exceptional {
                    let set = e.set.clone().unwrap_or_else(|| "unexpressible".into());
                    rows.push(vec!["exceptional".into(), e.epsilon.clone(), set]);
                }
                rows.push(vec!["verdict".into(), "filter".into(), c.verdict.verdict.clone()]);
                rows.push(vec![
                    "verdict".into(),
                    "frechet".into(),
                    c.frechet_verdict.verdict.clone(),
                ]);
            }
            _ => {}
        }
        for c in &self.caveats {
            rows.push(vec!["caveat".into(), String::new(), c.clone()]);
        }
        rows
    }
}
