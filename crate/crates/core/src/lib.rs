pub mod admissibility;
pub mod basis;
pub mod error;
pub mod filters;
pub mod lp_operators;
pub mod natset;
pub mod report;
pub mod scalar;
pub mod separation;
pub mod sequences;
mod syntax;
pub mod vectors;

pub use admissibility::{check_admissible, AdmissVerdict, BandReport, ConstructedWitness, SlowVerdict, Witness};
pub use basis::{
    build_basis, convergence_demo, defect_report, verify_biorthogonality, BasisSystem, ConvergenceReport, DefectReport,
};
pub use error::{Error, Result};
pub use filters::{
    classify_set, dominates, f_limit_scalar, trace_filter, DomVerdict, FilterSpec, LimitSeq, LimitVerdict, SetClass,
};
pub use lp_operators::{
    op_norm, op_norm_bruteforce, remainder_norm, solve_b_next, NormMethod, NormReport, NormValue, PExp, SpaceKind,
    TailOp,
};
pub use natset::{Density, DensityVerdict, SetExpr, SumVerdict, WeightTail};
pub use report::{Report, ReportBody};
pub use scalar::parse_rational;
pub use scalar::Scalar;
pub use separation::{
    cluster_witness, extract_functionals, lemma1_profile, lift_functionals_to_operators, plank_separator,
    ClusterOutcome, DualKind, Lemma1Profile, SeparatorVerdict,
};
pub use sequences::{FloatSeq, ScalarSeq, TailForm};
pub use vectors::TestVector;
