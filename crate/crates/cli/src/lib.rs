//! Batch driver: parses a run configuration, dispatches to the engines and
//! renders a deterministic report.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use fbasis::admissibility::{admissibility_band, check_admissible_with_horizon, nonadmissibility_witness};
use fbasis::basis::{build_basis, convergence_demo_with, defect_report, verify_biorthogonality};
use fbasis::filters::{classify_set, dominates, DomVerdict, FilterSpec, LimitVerdict, SetClass};
use fbasis::lp_operators::{op_norm_bruteforce, PExp, SpaceKind};
use fbasis::natset::{DensityVerdict, SetExpr};
use fbasis::report::{
    float_text, rational_text, AdmissibilityReport, BasisRecord, ClassifyRecord, ClusterRecord, ConvergenceRecord,
    DominationRecord, ProfileRecord, Report, ReportBody, SeparationRecord, SumRecord, WitnessReport,
};
use fbasis::separation::{cluster_witness, lemma1_profile, plank_separator, DualKind, SeparatorVerdict};
use fbasis::{parse_rational, AdmissVerdict, Error, ScalarSeq, TestVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_IO: i32 = 74;

pub const DEFAULT_HORIZON: u64 = 1_000_000;
pub const DEFAULT_N_MAX: usize = 32;
pub const DEFAULT_SEED: u64 = 0;
pub const HORIZON_ENV: &str = "FBASIS_HORIZON";
/// Random starts for the brute-force norm bound on general-p stages.
const BRUTEFORCE_BUDGET: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckAdmissible,
    BuildBasis,
    Witness,
    Separate,
    ClassifySet,
    DemoConvergence,
    Dominates,
    ProfileLemma1,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckAdmissible => "check-admissible",
            Command::BuildBasis => "build-basis",
            Command::Witness => "witness",
            Command::Separate => "separate",
            Command::ClassifySet => "classify-set",
            Command::DemoConvergence => "demo-convergence",
            Command::Dominates => "dominates",
            Command::ProfileLemma1 => "profile-lemma1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Command-line flags; every option may also come from `--config`.
#[derive(Debug, Parser)]
#[command(name = "fbasis", version, about = "Filter bases with prescribed partial-sum norms")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Target sequence, e.g. `pow(1,1/2)` or `prefix[2]:pow(1,1)`.
    #[arg(long)]
    pub seq: Option<String>,
    /// Filter, e.g. `statistical` or `summable(pow(1,-1))`.
    #[arg(long)]
    pub filter: Option<String>,
    /// Second filter for `dominates` (the candidate weaker filter).
    #[arg(long)]
    pub filter2: Option<String>,
    /// Index set for `classify-set`.
    #[arg(long)]
    pub set: Option<String>,
    /// Exponent p >= 1.
    #[arg(long)]
    pub p: Option<String>,
    /// Space: `l1`, `l2`, `lp(3/2)`.
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub n_max: Option<String>,
    #[arg(long)]
    pub horizon: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Smallest ε of the halving schedule 1, 1/2, ... used by `demo-convergence`.
    #[arg(long)]
    pub eps_min: Option<String>,
    /// Diagonal kind for `separate`: `linf-diagonal` or `l2-diagonal`.
    #[arg(long)]
    pub kind: Option<String>,
    /// Separator margin ε > 0.
    #[arg(long)]
    pub margin: Option<String>,
    /// Comma-separated grid of n for `profile-lemma1`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Test vector; repeatable.
    #[arg(long = "x")]
    pub vectors: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// File of `key = value` lines with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seq: Option<String>,
    pub filter: Option<String>,
    pub filter2: Option<String>,
    pub set: Option<String>,
    pub p: Option<String>,
    pub space: Option<String>,
    pub n_max: usize,
    pub horizon: u64,
    pub seed: u64,
    pub eps_min: Option<String>,
    pub kind: Option<String>,
    pub margin: Option<String>,
    pub grid: Option<String>,
    pub vectors: Vec<String>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            seq: None,
            filter: None,
            filter2: None,
            set: None,
            p: None,
            space: None,
            n_max: DEFAULT_N_MAX,
            horizon: DEFAULT_HORIZON,
            seed: DEFAULT_SEED,
            eps_min: None,
            kind: None,
            margin: None,
            grid: None,
            vectors: Vec::new(),
            format: Format::Json,
            output: None,
        }
    }
}

/// A failure before or outside the engines, with its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("i/o: {0}")]
    Io(String),
    /// An engine failure that is not a verdict, e.g. a numeric breakdown.
    #[error("{0}")]
    Inconclusive(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
            CliError::Inconclusive(_) => EXIT_INCONCLUSIVE,
        }
    }
}

fn engine_error(e: Error) -> CliError {
    match e {
        Error::Parse { .. } => CliError::Parse(e.to_string()),
        Error::ConvergenceFailure { .. } | Error::HorizonExceeded { .. } => CliError::Inconclusive(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// `key = value` lines; `#` starts a comment. Repeated `x` keys accumulate.
pub fn parse_config_text(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Parse(format!("config line {}: expected key = value", i + 1)));
        };
        out.push((k.trim().replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.trim()
        .replace('_', "")
        .parse()
        .or_else(|_| {
            // allow 1e6-style integers
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.fract() == 0.0 && *x >= 0.0)
                .and_then(|x| format!("{}", x as u64).parse().ok())
                .ok_or(())
        })
        .map_err(|_| CliError::Usage(format!("{} must be a nonnegative integer, got {:?}", key, v)))
}

impl RunConfig {
    fn apply(&mut self, key: &str, value: String) -> CliResult<()> {
        match key {
            "seq" => self.seq = Some(value),
            "filter" => self.filter = Some(value),
            "filter2" => self.filter2 = Some(value),
            "set" => self.set = Some(value),
            "p" => self.p = Some(value),
            "space" => self.space = Some(value),
            "n-max" => self.n_max = parse_num(key, &value)?,
            "horizon" => self.horizon = parse_num(key, &value)?,
            "seed" => self.seed = parse_num(key, &value)?,
            "eps-min" => self.eps_min = Some(value),
            "kind" => self.kind = Some(value),
            "margin" => self.margin = Some(value),
            "grid" => self.grid = Some(value),
            "x" => self.vectors.push(value),
            "format" => {
                self.format = Format::from_str(&value, true)
                    .map_err(|_| CliError::Usage(format!("unknown format {:?}", value)))?
            }
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(CliError::Usage(format!("unknown configuration key {:?}", other))),
        }
        Ok(())
    }
}

/// Resolves defaults, then `FBASIS_HORIZON`, then the config file, then flags.
pub fn resolve(cli: Cli, env_horizon: Option<String>) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::new(cli.command);
    if let Some(h) = env_horizon {
        cfg.horizon = parse_num(HORIZON_ENV, &h)?;
    }
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
        for (k, v) in parse_config_text(&text)? {
            cfg.apply(&k, v)?;
        }
    }
    let flags: [(&str, Option<String>); 13] = [
        ("seq", cli.seq),
        ("filter", cli.filter),
        ("filter2", cli.filter2),
        ("set", cli.set),
        ("p", cli.p),
        ("space", cli.space),
        ("n-max", cli.n_max),
        ("horizon", cli.horizon),
        ("seed", cli.seed),
        ("eps-min", cli.eps_min),
        ("kind", cli.kind),
        ("margin", cli.margin),
        ("grid", cli.grid),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.apply(k, v)?;
        }
    }
    if !cli.vectors.is_empty() {
        cfg.vectors = cli.vectors;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(o) = cli.output {
        cfg.output = Some(o);
    }
    Ok(cfg)
}

fn require<'a>(v: &'a Option<String>, key: &str) -> CliResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("--{} is required", key)))
}

fn parsed<T>(r: fbasis::Result<T>) -> CliResult<T> {
    r.map_err(engine_error)
}

impl RunConfig {
    fn seq(&self) -> CliResult<ScalarSeq> {
        parsed(ScalarSeq::parse(require(&self.seq, "seq")?))
    }

    fn filter_or(&self, default: FilterSpec) -> CliResult<FilterSpec> {
        match &self.filter {
            Some(f) => parsed(FilterSpec::parse(f)),
            None => Ok(default),
        }
    }

    fn space(&self) -> CliResult<SpaceKind> {
        match (&self.space, &self.p) {
            (Some(s), _) => parsed(SpaceKind::parse(s, self.n_max.max(2))),
            (None, Some(p)) => {
                let p = parsed(parse_rational(p))?;
                parsed(SpaceKind::new(p, self.n_max.max(2)))
            }
            (None, None) => Ok(SpaceKind::l1(self.n_max.max(2))),
        }
    }

    fn p(&self) -> CliResult<BigRational> {
        match (&self.p, &self.space) {
            (Some(p), _) => parsed(parse_rational(p)),
            (None, Some(_)) => Ok(self.space()?.p_rational()),
            (None, None) => Ok(BigRational::one()),
        }
    }

    fn vectors_or(&self, default: &str) -> CliResult<Vec<TestVector>> {
        if self.vectors.is_empty() {
            return Ok(vec![parsed(TestVector::parse(default))?]);
        }
        self.vectors.iter().map(|v| parsed(TestVector::parse(v))).collect()
    }

    /// Effective inputs, echoed in every report.
    fn echo(&self) -> Vec<(String, String)> {
        let mut v = Vec::new();
        let mut put = |k: &str, val: Option<String>| {
            if let Some(val) = val {
                v.push((k.to_string(), val));
            }
        };
        put("seq", self.seq.clone());
        put("filter", self.filter.clone());
        put("filter2", self.filter2.clone());
        put("set", self.set.clone());
        put("p", self.p.clone());
        put("space", self.space.clone());
        put("n-max", Some(self.n_max.to_string()));
        put("horizon", Some(self.horizon.to_string()));
        put("seed", Some(self.seed.to_string()));
        put("eps-min", self.eps_min.clone());
        put("kind", self.kind.clone());
        put("margin", self.margin.clone());
        put("grid", self.grid.clone());
        for x in &self.vectors {
            put("x", Some(x.clone()));
        }
        v
    }
}

/// The report together with the exit status it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Report,
}

fn verdict_exit(kind: &str) -> i32 {
    match kind {
        "Refuted" | "NotSeparable" => EXIT_REFUTED,
        "Inconclusive" => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    }
}

fn outcome(cfg: &RunConfig, verdict: &str, body: ReportBody, caveats: Vec<String>) -> Outcome {
    Outcome {
        exit_code: verdict_exit(verdict),
        report: Report {
            command: cfg.command.name().into(),
            inputs: cfg.echo(),
            verdict: verdict.into(),
            body,
            caveats,
        },
    }
}

fn halving_schedule(min: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    let two = BigRational::from_integer(BigInt::from(2));
    while out.len() < 64 {
        let next = out.last().unwrap() / &two;
        if next < *min {
            break;
        }
        out.push(next);
    }
    out
}

/// Runs one configured command.
pub fn run_command(cfg: &RunConfig) -> CliResult<Outcome> {
    match cfg.command {
        Command::CheckAdmissible => check_admissible_cmd(cfg),
        Command::BuildBasis => build_basis_cmd(cfg),
        Command::Witness => witness_cmd(cfg),
        Command::Separate => separate_cmd(cfg),
        Command::ClassifySet => classify_cmd(cfg),
        Command::DemoConvergence => demo_cmd(cfg),
        Command::Dominates => dominates_cmd(cfg),
        Command::ProfileLemma1 => profile_cmd(cfg),
    }
}

fn admissibility_outcome(
    cfg: &RunConfig,
    a: &ScalarSeq,
    f: &FilterSpec,
    p: &BigRational,
    verdict: &AdmissVerdict,
) -> CliResult<Outcome> {
    let two = BigRational::from_integer(BigInt::from(2));
    let band = if *p > BigRational::one() && *p < two {
        Some((&parsed(admissibility_band(a, f, p))?).into())
    } else {
        None
    };
    let body = ReportBody::Admissibility(AdmissibilityReport {
        sequence: a.to_string(),
        filter: f.to_string(),
        p: rational_text(p),
        result: verdict.into(),
        band,
    });
    Ok(outcome(cfg, verdict.kind(), body, Vec::new()))
}

fn check_admissible_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let a = cfg.seq()?;
    let f = cfg.filter_or(FilterSpec::Frechet)?;
    let p = cfg.p()?;
    let v = parsed(check_admissible_with_horizon(&a, &f, &p, cfg.horizon))?;
    admissibility_outcome(cfg, &a, &f, &p, &v)
}

fn build_basis_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let a = cfg.seq()?;
    let f = cfg.filter_or(FilterSpec::Frechet)?;
    let space = cfg.space()?;
    let sys = match build_basis(&a, &space, &f, cfg.n_max) {
        Ok(s) => s,
        Err(Error::NotAdmissible { .. }) => {
            // re-run the gate to report its witness in full
            let gate_p = if space.p_rational() > BigRational::from_integer(BigInt::from(2)) {
                BigRational::one()
            } else {
                space.p_rational()
            };
            let v = parsed(check_admissible_with_horizon(&a, &f, &gate_p, cfg.horizon))?;
            return admissibility_outcome(cfg, &a, &f, &gate_p, &v);
        }
        Err(e) => return Err(engine_error(e)),
    };
    let bio = verify_biorthogonality(&sys);
    let defect = parsed(defect_report(&sys))?;
    let mut record = BasisRecord::new(&sys, &bio, &defect);
    if matches!(space.p, PExp::Other(_)) {
        for (stage, rec) in sys.stages.iter().zip(record.stages.iter_mut()) {
            let bf = op_norm_bruteforce(stage, BRUTEFORCE_BUDGET, cfg.seed);
            rec.bruteforce_lower = Some(float_text(bf.lower));
        }
    }
    let verdict = if !bio.passed() {
        "Refuted"
    } else if sys.gate.is_proved() {
        "Built"
    } else {
        "Inconclusive"
    };
    Ok(outcome(
        cfg,
        verdict,
        ReportBody::Basis(Box::new(record)),
        sys.caveats.clone(),
    ))
}

fn witness_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let a = cfg.seq()?;
    let f = cfg.filter_or(FilterSpec::Frechet)?;
    let p = cfg.p()?;
    if let FilterSpec::Summable(s) = &f {
        return match nonadmissibility_witness(&a, s, &p, cfg.horizon) {
            Ok(w) => {
                let body = ReportBody::Witness(WitnessReport {
                    sequence: a.to_string(),
                    weights: s.to_string(),
                    p: rational_text(&p),
                    witness: w.prefix_set().to_string(),
                    construction: (&w).into(),
                });
                let caveat = format!("witness emitted up to horizon {}; continued by: {}", w.horizon, w.rule);
                Ok(outcome(cfg, "Refuted", body, vec![caveat]))
            }
            Err(Error::CriterionHolds) => {
                let v = AdmissVerdict::Proved {
                    criterion: "summable criterion holds; no witness exists".into(),
                };
                admissibility_outcome(cfg, &a, &f, &p, &v)
            }
            Err(e) => Err(engine_error(e)),
        };
    }
    let v = parsed(check_admissible_with_horizon(&a, &f, &p, cfg.horizon))?;
    admissibility_outcome(cfg, &a, &f, &p, &v)
}

fn separate_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let a = cfg.seq()?;
    let kind = match &cfg.kind {
        Some(k) => parsed(DualKind::parse(k))?,
        None => DualKind::LInfDiagonal,
    };
    let margin = match &cfg.margin {
        Some(m) => parsed(parse_rational(m))?,
        None => BigRational::new(BigInt::from(1), BigInt::from(10)),
    };
    let probes = cfg.vectors_or("unit(1)")?;
    let mut rec = SeparationRecord {
        sequence: a.to_string(),
        kind: kind.name().into(),
        verdict: String::new(),
        separator: None,
        divergence: None,
        cluster: None,
        probes: probes.iter().map(|x| x.to_string()).collect(),
    };
    match plank_separator(&a, kind, &margin) {
        Ok(SeparatorVerdict::Separated(s)) => {
            rec.verdict = "Separated".into();
            rec.divergence = Some(SumRecord {
                verdict: "Converges".into(),
                bound: Some(float_text(s.sum_bound)),
                partial: None,
                horizon: None,
            });
            rec.separator = Some(s.as_ref().into());
        }
        Ok(SeparatorVerdict::Inconclusive { partial, horizon }) => {
            rec.verdict = "Inconclusive".into();
            rec.divergence = Some((&fbasis::natset::SumVerdict::Inconclusive { partial, horizon }).into());
        }
        Err(Error::NotSeparable(_)) => {
            rec.verdict = "NotSeparable".into();
            let w = parsed(cluster_witness(&a, &kind.exponent(), &probes, cfg.horizon))?;
            rec.divergence = Some((&w.divergence).into());
            rec.cluster = Some(ClusterRecord::from(&w));
        }
        Err(e) => return Err(engine_error(e)),
    }
    let verdict = rec.verdict.clone();
    Ok(outcome(cfg, &verdict, ReportBody::Separation(rec), Vec::new()))
}

fn classify_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let set = parsed(SetExpr::parse(require(&cfg.set, "set")?))?;
    let f = cfg.filter_or(FilterSpec::Frechet)?;
    let class = classify_set(&set, &f);
    let density = match &f {
        FilterSpec::Statistical => Some(density_text(&set.natural_density().verdict())),
        _ => None,
    };
    let verdict = match class {
        SetClass::Inconclusive => "Inconclusive".to_string(),
        c => c.to_string(),
    };
    let body = ReportBody::Classification(ClassifyRecord {
        set: set.to_string(),
        filter: f.to_string(),
        class,
        density,
    });
    Ok(outcome(cfg, &verdict, body, Vec::new()))
}

fn density_text(d: &DensityVerdict) -> String {
    match d {
        DensityVerdict::Exact(v) => v.clone(),
        DensityVerdict::Zero => "0".into(),
        DensityVerdict::Bounds(lo, hi) => format!("[{}, {}]", lo, hi),
        DensityVerdict::Inconclusive(h) => format!("inconclusive at horizon {}", h),
    }
}

fn demo_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let a = cfg.seq()?;
    let f = cfg.filter_or(FilterSpec::Frechet)?;
    let space = cfg.space()?;
    let xs = cfg.vectors_or("unit(1)")?;
    if xs.len() != 1 {
        return Err(CliError::Usage("demo-convergence takes exactly one --x".into()));
    }
    let schedule = match &cfg.eps_min {
        Some(e) => halving_schedule(&parsed(parse_rational(e))?),
        None => fbasis::filters::default_eps_schedule(),
    };
    let sys = match build_basis(&a, &space, &f, cfg.n_max) {
        Ok(s) => s,
        Err(Error::NotAdmissible { .. }) => {
            let v = parsed(check_admissible_with_horizon(&a, &f, &space.p_rational(), cfg.horizon))?;
            return admissibility_outcome(cfg, &a, &f, &space.p_rational(), &v);
        }
        Err(e) => return Err(engine_error(e)),
    };
    let r = parsed(convergence_demo_with(&sys, &xs[0], &schedule))?;
    let verdict = match &r.verdict {
        LimitVerdict::ConvergesTo(_) => "ConvergesTo",
        LimitVerdict::DoesNotConverge { .. } => "DoesNotConverge",
        LimitVerdict::Inconclusive { .. } => "Inconclusive",
    };
    let body = ReportBody::Convergence(ConvergenceRecord::new(&sys, &r));
    Ok(outcome(cfg, verdict, body, sys.caveats.clone()))
}

fn dominates_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let f1 = parsed(FilterSpec::parse(require(&cfg.filter, "filter")?))?;
    let f2 = parsed(FilterSpec::parse(require(&cfg.filter2, "filter2")?))?;
    let v = dominates(&f1, &f2);
    let verdict = match &v {
        DomVerdict::Proved(_) => "Proved",
        DomVerdict::Refuted(_) => "Refuted",
        DomVerdict::Inconclusive(_) => "Inconclusive",
    };
    let body = ReportBody::Domination(DominationRecord::new(f1.to_string(), f2.to_string(), &v));
    Ok(outcome(cfg, verdict, body, Vec::new()))
}

fn profile_cmd(cfg: &RunConfig) -> CliResult<Outcome> {
    let a = cfg.seq()?;
    let xs = cfg.vectors_or("unit(1)")?;
    let grid: Vec<u64> = match &cfg.grid {
        Some(g) => g
            .split(',')
            .map(|s| parse_num::<u64>("grid", s))
            .collect::<CliResult<_>>()?,
        None => vec![10, 100, 1_000, 10_000, 100_000],
    };
    let prof = parsed(lemma1_profile(&a, &xs, &grid))?;
    let verdict = if prof.bound_holds { "BoundHolds" } else { "Refuted" };
    let body = ReportBody::Profile(ProfileRecord::new(
        a.to_string(),
        xs.iter().map(|x| x.to_string()).collect(),
        &prof,
    ));
    Ok(outcome(cfg, verdict, body, Vec::new()))
}

/// Serializes a report; identical reports give identical bytes.
pub fn emit_report(report: &Report, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            for row in report.csv_rows() {
                w.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

pub fn parse_report_json(bytes: &[u8]) -> CliResult<Report> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse(e.to_string()))
}

/// Parses arguments, runs, writes the report and returns the exit status.
pub fn main_with<I, T>(args: I, env: &BTreeMap<String, String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e);
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e);
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = resolve(cli, env.get(HORIZON_ENV).cloned()).and_then(|cfg| {
        let out = run_command(&cfg)?;
        let bytes = emit_report(&out.report, cfg.format)?;
        match &cfg.output {
            Some(path) => fs::write(path, &bytes).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?,
            None => stdout.write_all(&bytes).map_err(|e| CliError::Io(e.to_string()))?,
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "fbasis: {}", e);
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let kv = parse_config_text("# c\nseq = pow(1,1/2)\n\nn_max=8\nx = finite{1:2,3:4}\n").unwrap();
        assert_eq!(kv[1], ("n-max".to_string(), "8".to_string()));
        assert_eq!(kv[2].1, "finite{1:2,3:4}");
        assert!(parse_config_text("nonsense").is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_num::<u64>("h", "1e6").unwrap(), 1_000_000);
        assert_eq!(parse_num::<u64>("h", "1_000").unwrap(), 1000);
        assert!(parse_num::<u64>("h", "-3").is_err());
    }
}
