//! JSON front end: one command per run, or a batch of inputs mapped through
//! the same command.

use std::fmt;
use std::io::Read;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use rigidsys::derham::{
    deligne_residues, fuchs_degree, hilbert_poly, CurveGeometry, ResidueData, ResidueWire,
};
use rigidsys::exactfield::format_rational;
use rigidsys::galois::{absolute_point_test_with, galois_orbit_eigen};
use rigidsys::linalg::RootSearch;
use rigidsys::moduli::{component_membership, construct_representative, ComponentSpec};
use rigidsys::monodromy::{
    det_data, is_irreducible, katz_report, mon_with, rank2_classify, EigenData, EigenWire,
    MonodromyTuple, TupleWire,
};
use rigidsys::tori::{
    coset_intersect, coset_membership, enumerate_torsion, formula_eval, monomial_preimage,
    nonsimple_locus_formula, TorsionCoset, TorusFormula, DEFAULT_GRID_CAP,
};
use rigidsys::{ErrorClass, Rational};

pub const DEFAULT_ORDER_BOUND: u64 = 12;
pub const DEFAULT_CONDUCTOR_CAP: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Mon,
    Classify,
    Construct,
    Derham,
    Orbit,
    Tori,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Check,
        Command::Mon,
        Command::Classify,
        Command::Construct,
        Command::Derham,
        Command::Orbit,
        Command::Tori,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Mon => "mon",
            Command::Classify => "classify",
            Command::Construct => "construct",
            Command::Derham => "derham",
            Command::Orbit => "orbit",
            Command::Tori => "tori",
        }
    }
}

/// Settings of a single invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// A file path, `-` for stdin, or inline JSON (starting with `{` or `[`).
    pub input: String,
    pub output: Option<PathBuf>,
    #[serde(default = "default_order_bound")]
    pub order_bound: u64,
    #[serde(default = "default_conductor_cap")]
    pub conductor_cap: u64,
    #[serde(default)]
    pub batch: bool,
}

fn default_order_bound() -> u64 {
    DEFAULT_ORDER_BOUND
}

fn default_conductor_cap() -> u64 {
    DEFAULT_CONDUCTOR_CAP
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<String>) -> RunConfig {
        RunConfig {
            command,
            input: input.into(),
            output: None,
            order_bound: DEFAULT_ORDER_BOUND,
            conductor_cap: DEFAULT_CONDUCTOR_CAP,
            batch: false,
        }
    }

    fn search(&self) -> RootSearch {
        RootSearch {
            extra_conductor: 1,
            conductor_cap: self.conductor_cap,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rigidsys::Error),
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Parse(_) => "parse-error",
            CliError::Io(_) => "io-error",
            CliError::Config(_) => "config-error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Input => 1,
                ErrorClass::Precondition => 2,
                ErrorClass::Budget => 3,
            },
            _ => 1,
        }
    }

    fn to_json(&self) -> Value {
        json!({ "error": self.code(), "message": self.to_string() })
    }
}

fn parse<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::Parse(e.to_string()))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Outcome of a run: the exit status and the JSON document produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: String,
    /// Whether the report went to the configured output file.
    pub written: bool,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report)
    }
}

fn read_input(spec: &str) -> Result<String, CliError> {
    let trimmed = spec.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(spec.to_string());
    }
    if spec == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(spec).map_err(|e| CliError::Io(format!("{spec}: {e}")))
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Runs a command and returns its report without touching the output path.
pub fn evaluate(config: &RunConfig) -> Outcome {
    let result = (|| -> Result<Value, BatchFailure> {
        if config.order_bound == 0 || config.conductor_cap == 0 {
            return Err(CliError::Config("budgets must be positive".into()).into());
        }
        let text = read_input(&config.input)?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
        if config.batch {
            batch(config, &value)
        } else {
            Ok(execute(config, &value)?)
        }
    })();
    match result {
        Ok(v) => Outcome {
            exit_code: 0,
            report: render(&v),
            written: false,
        },
        Err(BatchFailure::Item(code, v)) => Outcome {
            exit_code: code,
            report: render(&v),
            written: false,
        },
        Err(BatchFailure::Whole(e)) => Outcome {
            exit_code: e.exit_code(),
            report: render(&e.to_json()),
            written: false,
        },
    }
}

enum BatchFailure {
    /// Some batch item failed: exit code of the first failure and the full report.
    Item(i32, Value),
    Whole(CliError),
}

impl From<CliError> for BatchFailure {
    fn from(e: CliError) -> Self {
        BatchFailure::Whole(e)
    }
}

fn batch(config: &RunConfig, value: &Value) -> Result<Value, BatchFailure> {
    let Value::Array(items) = value else {
        return Err(CliError::Parse("batch input must be a JSON array".into()).into());
    };
    let mut first_failure = None;
    let results: Vec<Value> = items
        .iter()
        .map(|item| match execute(config, item) {
            Ok(v) => v,
            Err(e) => {
                first_failure.get_or_insert(e.exit_code());
                e.to_json()
            }
        })
        .collect();
    let report = Value::Array(results);
    match first_failure {
        None => Ok(report),
        Some(code) => Err(BatchFailure::Item(code, report)),
    }
}

/// Runs the command and writes the report to the configured output (stdout
/// when absent).
pub fn run(config: &RunConfig) -> Outcome {
    let outcome = evaluate(config);
    match &config.output {
        None => outcome,
        Some(path) => match std::fs::write(path, &outcome.report) {
            Ok(()) => Outcome {
                written: true,
                ..outcome
            },
            Err(e) => {
                let err = CliError::Io(format!("{}: {e}", path.display()));
                Outcome {
                    exit_code: err.exit_code(),
                    report: render(&err.to_json()),
                    written: false,
                }
            }
        },
    }
}

/// Dispatches one input document.
pub fn execute(config: &RunConfig, input: &Value) -> Result<Value, CliError> {
    match config.command {
        Command::Check => cmd_check(config, input),
        Command::Mon => cmd_mon(config, input),
        Command::Classify => cmd_classify(config, input),
        Command::Construct => cmd_construct(config, input),
        Command::Derham => cmd_derham(input),
        Command::Orbit => cmd_orbit(config, input),
        Command::Tori => cmd_tori(config, input),
    }
}

fn check_conductor(config: &RunConfig, n: u64) -> Result<(), CliError> {
    if n > config.conductor_cap {
        return Err(rigidsys::Error::BudgetExceeded(format!(
            "input conductor {n} exceeds the cap {}",
            config.conductor_cap
        ))
        .into());
    }
    Ok(())
}

/// A tuple given bare or under a "tuple" key.
fn tuple_from(config: &RunConfig, input: &Value) -> Result<MonodromyTuple, CliError> {
    let raw = match input.get("tuple") {
        Some(t) => t,
        None => input,
    };
    let wire: TupleWire = parse(raw)?;
    let t = MonodromyTuple::try_from(wire)?;
    check_conductor(config, t.conductor())?;
    Ok(t)
}

fn eigen_from(config: &RunConfig, raw: &Value) -> Result<EigenData, CliError> {
    let wire: EigenWire = parse(raw)?;
    let e = EigenData::try_from(wire)?;
    check_conductor(config, e.conductor())?;
    Ok(e)
}

fn eigen_input(config: &RunConfig, input: &Value) -> Result<EigenData, CliError> {
    match input.get("eigen") {
        Some(e) => eigen_from(config, e),
        None => eigen_from(config, input),
    }
}

fn cmd_check(config: &RunConfig, input: &Value) -> Result<Value, CliError> {
    let t = tuple_from(config, input)?;
    let report = katz_report(&t);
    let classification = if t.rank() == 2 && report.is_irreducible {
        to_json(&rank2_classify(&t)?)
    } else {
        Value::Null
    };
    Ok(json!({
        "tuple": to_json(&t),
        "valid": true,
        "irreducible": is_irreducible(&t),
        "report": to_json(&report),
        "classification": classification,
    }))
}

fn cmd_mon(config: &RunConfig, input: &Value) -> Result<Value, CliError> {
    let t = tuple_from(config, input)?;
    let m = mon_with(&t, &config.search());
    Ok(json!({
        "charpolys": to_json(&m.charpolys),
        "eigen": to_json(&m.eigen),
        "det": to_json(&det_data(&t)),
    }))
}

fn cmd_classify(config: &RunConfig, input: &Value) -> Result<Value, CliError> {
    let e = eigen_input(config, input)?;
    if e.punctures() < 3 {
        return Err(rigidsys::Error::Shape("at least 3 points required".into()).into());
    }
    let mut components = Vec::new();
    let mut members = Vec::new();
    for spec in ComponentSpec::enumerate(e.punctures()) {
        let member = component_membership(&e, &spec)?;
        if member {
            members.push(spec.triple());
        }
        components.push(json!({ "triple": spec.triple(), "member": member }));
    }
    Ok(json!({
        "s": e.punctures(),
        "components": components,
        "members": members,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstructInput {
    eigen: Value,
    spec: Option<ComponentSpec>,
}

fn cmd_construct(config: &RunConfig, input: &Value) -> Result<Value, CliError> {
    let req: ConstructInput = parse(input)?;
    let e = eigen_from(config, &req.eigen)?;
    let spec = match req.spec {
        Some(spec) => spec,
        None => {
            let mut chosen = None;
            for spec in ComponentSpec::enumerate(e.punctures()) {
                if component_membership(&e, &spec)? {
                    chosen = Some(spec);
                    break;
                }
            }
            chosen.ok_or_else(|| {
                rigidsys::Error::NotInComponent("data lies in no component".into())
            })?
        }
    };
    let t = construct_representative(&e, &spec)?;
    Ok(to_json(&t))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DerhamInput {
    residues: Option<ResidueWire>,
    eigen: Option<EigenWire>,
    geometry: CurveGeometry,
}

fn cmd_derham(input: &Value) -> Result<Value, CliError> {
    let req: DerhamInput = parse(input)?;
    let rd = match (req.residues, req.eigen) {
        (Some(r), None) => ResidueData::try_from(r)?,
        (None, Some(e)) => deligne_residues(&EigenData::try_from(e)?)?,
        _ => {
            return Err(CliError::Parse(
                "exactly one of \"residues\" or \"eigen\" is required".into(),
            ))
        }
    };
    let deg = fuchs_degree(&rd);
    let hilbert: Vec<String> = hilbert_poly(&rd, &req.geometry)
        .iter()
        .map(format_rational)
        .collect();
    Ok(json!({
        "residues": to_json(&rd),
        "degE": format_rational(&deg.value),
        "degE_integral": deg.integral,
        "hilbert": hilbert,
    }))
}

fn cmd_orbit(config: &RunConfig, input: &Value) -> Result<Value, CliError> {
    let (eigen, absolute) = if input.get("eigen").is_some() && input.get("tuple").is_none() {
        (eigen_from(config, &input["eigen"])?, Value::Null)
    } else {
        let t = tuple_from(config, input)?;
        let verdict = absolute_point_test_with(&t, &config.search())?;
        let eigen = mon_with(&t, &config.search())
            .eigen
            .expect("absolute point test checked splitting");
        (eigen, to_json(&verdict))
    };
    let orbit = galois_orbit_eigen(&eigen);
    Ok(json!({
        "orbit_size": orbit.len(),
        "orbit": to_json(&orbit),
        "absolute": absolute,
    }))
}

#[derive(Deserialize)]
struct PointWire(Vec<rigidsys::exactfield::rational::RationalWire>);

impl PointWire {
    fn into_vec(self) -> Vec<Rational> {
        self.0.into_iter().map(|w| w.0).collect()
    }
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
enum ToriInput {
    Membership {
        point: PointWire,
        coset: TorsionCoset,
    },
    Intersect {
        a: TorsionCoset,
        b: TorsionCoset,
    },
    Preimage {
        coset: TorsionCoset,
        map: Vec<Vec<i64>>,
    },
    Enumerate {
        coset: TorsionCoset,
        order_bound: Option<u64>,
    },
    Eval {
        formula: TorusFormula,
        point: PointWire,
    },
    NonsimpleFormula {
        s: usize,
        triple: [usize; 3],
    },
}

fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn cmd_tori(config: &RunConfig, input: &Value) -> Result<Value, CliError> {
    let req: ToriInput = parse(input)?;
    Ok(match req {
        ToriInput::Membership { point, coset } => {
            json!({ "member": coset_membership(&point.into_vec(), &coset)? })
        }
        ToriInput::Intersect { a, b } => {
            let c = coset_intersect(&a, &b)?;
            json!({ "coset": to_json(&c), "empty": c.is_empty() })
        }
        ToriInput::Preimage { coset, map } => {
            let c = monomial_preimage(&coset, &map)?;
            json!({ "coset": to_json(&c), "empty": c.is_empty() })
        }
        ToriInput::Enumerate { coset, order_bound } => {
            let bound = order_bound.unwrap_or(config.order_bound);
            let pts = enumerate_torsion(&coset, bound, DEFAULT_GRID_CAP)?;
            let pts: Vec<Vec<String>> = pts.iter().map(|p| rational_strings(p)).collect();
            json!({ "order_bound": bound, "count": pts.len(), "points": pts })
        }
        ToriInput::Eval { formula, point } => {
            json!({ "value": formula_eval(&formula, &point.into_vec())? })
        }
        ToriInput::NonsimpleFormula { s, triple } => {
            json!({ "formula": to_json(&nonsimple_locus_formula(s, triple)?) })
        }
    })
}

/// Human-readable input schema of a command.
pub fn describe_schema(command: Command) -> &'static str {
    match command {
        Command::Check => {
            "check: a tuple {\"r\": r, \"s\": s, \"matrices\": [Matrix, ...]}, bare or as {\"tuple\": ...}.\n\
             Matrix: {\"rows\": r, \"cols\": c, \"entries\": [CycNum, ...]} row-major.\n\
             CycNum: \"p/q\", an integer, or {\"n\": conductor, \"c\": [[\"p\",\"q\"], ...]}.\n\
             Output: tuple, irreducible, Katz report, rank-2 classification.\n"
        }
        Command::Mon => {
            "mon: a tuple, as for check.\n\
             Output: per-point characteristic polynomials (lowest degree first), eigenvalues when they split, determinants.\n"
        }
        Command::Classify => {
            "classify: eigenvalue data {\"r\": 2, \"s\": s, \"points\": [[CycNum, CycNum], ...]}, bare or as {\"eigen\": ...}.\n\
             Output: membership in each of the C(s,3) components.\n"
        }
        Command::Construct => {
            "construct: {\"eigen\": EigenData, \"spec\": {\"s\": s, \"triple\": [i, j, k]}}; spec is optional\n\
             (defaults to the first component, in lexicographic order, containing the data).\n\
             Output: a tuple accepted by check and mon.\n"
        }
        Command::Derham => {
            "derham: {\"residues\": {\"r\": r, \"s\": s, \"points\": [[\"p/q\", ...], ...]}, \"geometry\": {\"genus\": g, \"degH\": d}}\n\
             or {\"eigen\": EigenData, \"geometry\": ...} with root-of-unity eigenvalues.\n\
             Output: residues, degE, degE_integral, hilbert [constant, slope].\n"
        }
        Command::Orbit => {
            "orbit: a rank-2 tuple (bare or {\"tuple\": ...}), or {\"eigen\": EigenData}.\n\
             Output: Galois orbit of the eigenvalue data; for tuples also the absolute-point verdict.\n"
        }
        Command::Tori => {
            "tori: {\"op\": ..., ...} with TorsionCoset {\"N\": n, \"L\": [[int, ...], ...], \"tau\": [\"p/q\", ...] | null}:\n\
             {\"op\": \"membership\", \"point\": [q, ...], \"coset\": C}\n\
             {\"op\": \"intersect\", \"a\": C, \"b\": C}\n\
             {\"op\": \"preimage\", \"coset\": C, \"map\": [[int, ...], ...]}\n\
             {\"op\": \"enumerate\", \"coset\": C, \"order_bound\": B (optional, defaults to --order-bound)}\n\
             {\"op\": \"eval\", \"formula\": F, \"point\": [q, ...]} with F a coset or {\"op\": \"union\"|\"intersection\"|\"complement\", \"args\": [F, ...]}\n\
             {\"op\": \"nonsimple-formula\", \"s\": s, \"triple\": [i, j, k]}\n"
        }
    }
}
