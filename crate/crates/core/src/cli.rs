//! Command-line front end. Every command reads JSON documents, runs one
//! library operation, and renders one JSON document. [`execute`] returns the
//! rendered output and exit code instead of printing, so the binary stays a
//! thin shell and tests can drive commands in-process.
//!
//! Exit codes: 0 ok, 1 negative verdict, 2 malformed input, 3 numerical
//! failure, 4 size cap exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::dense::{self, DenseOp, SINGLE_REGISTER_CAP};
use crate::embedding::{self, Verdict};
use crate::error::Error;
use crate::linalg::AntisymMat;
use crate::sim::{self, Circuit, InputState, Measurement, MeasurementOp};
use crate::state::{wick_dense, DGaussState, DiagonalSpec};
use crate::unitary::{self, DGUnitary, Gate, GateSequence};

pub const CIRCUIT_SCHEMA: &str = "dgsim.circuit.v1";
pub const STATE_SCHEMA: &str = "dgsim.state.v1";
pub const HAMILTONIAN_SCHEMA: &str = "dgsim.hamiltonian.v1";
pub const GATES_SCHEMA: &str = "dgsim.gates.v1";
pub const DENSE_SCHEMA: &str = "dgsim.dense.v1";
pub const EMBEDDING_SCHEMA: &str = "dgsim.embedding.v1";
pub const RESULT_SCHEMA: &str = "dgsim.result.v1";

/// Deviation threshold of `oracle-verify` and residual threshold of `compile`.
pub const DEFAULT_TOL: f64 = 1e-7;

pub mod exit {
    pub const OK: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const CAP: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "dgsim", about = "Simulate, compile and test displaced fermionic Gaussian circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the result document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance override for the command's pass/fail threshold.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate a circuit file: expectation value or shot table.
    Run {
        circuit: PathBuf,
        /// Sample this many shots on the measured lines (overrides the file).
        #[arg(long)]
        shots: Option<usize>,
        /// Sampling seed (overrides the file).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Compile a Hamiltonian file (h, d) into a gate sequence.
    Compile {
        hamiltonian: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Embed a pure state file, or a Hamiltonian file, into the even sector on n+1 qubits.
    Embed {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Gaussianity test of a pure state (dense file or circuit file).
    TestState {
        input: PathBuf,
        /// Use the embedding route even for even states.
        #[arg(long)]
        displaced: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Gaussianity test of a unitary (dense file or gate-sequence file).
    TestUnitary {
        input: PathBuf,
        /// Use the embedding route even for parity-preserving unitaries.
        #[arg(long)]
        displaced: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a circuit on both the covariance and the dense path and compare.
    OracleVerify {
        circuit: PathBuf,
        /// Largest register the dense path may build.
        #[arg(long, default_value_t = SINGLE_REGISTER_CAP)]
        n_max: usize,
        /// Add this offset to the first gate angle on the covariance path only
        /// (negative control).
        #[arg(long, allow_hyphen_values = true)]
        corrupt_angle: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Print version and supported schemas.
    Version {
        #[command(flatten)]
        common: Common,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure carrying its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self { code: exit::PARSE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Dimension(_) | Error::Index(_) | Error::NotAntisymmetric(_) => exit::PARSE,
            Error::Cap(_) => exit::CAP,
            Error::NotRotation(_)
            | Error::Disconnected(_)
            | Error::Inadmissible(_)
            | Error::Saturated { .. }
            | Error::Numerical(_)
            | Error::Precondition(_)
            | Error::LogBranch => exit::NUMERIC,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses arguments, runs the command, and writes `--out` if requested.
/// Nothing is written when the command fails.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let text = e.render().to_string();
            return if code == exit::OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(Report { code, doc, note }) => {
            let rendered = match to_json(&doc) {
                Ok(s) => s,
                Err(f) => return failure(f),
            };
            let out = match &common_of(&cli.command).out {
                Some(path) => match write_atomic(path, &rendered) {
                    Ok(()) => String::new(),
                    Err(f) => return failure(f),
                },
                None => rendered,
            };
            Outcome { code, stdout: out, stderr: note }
        }
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) }
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::Run { common, .. }
        | Command::Compile { common, .. }
        | Command::Embed { common, .. }
        | Command::TestState { common, .. }
        | Command::TestUnitary { common, .. }
        | Command::OracleVerify { common, .. }
        | Command::Version { common } => common,
    }
}

fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let tmp = path.with_extension("tmp~");
    let io_fail = |e: io::Error| Failure::parse(format!("cannot write {}: {e}", path.display()));
    std::fs::write(&tmp, text).map_err(io_fail)?;
    std::fs::rename(&tmp, path).map_err(io_fail)
}

struct Report {
    code: i32,
    doc: Value,
    note: String,
}

impl Report {
    fn ok(doc: Value) -> Self {
        Self { code: exit::OK, doc, note: String::new() }
    }
}

fn dispatch(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Run { circuit, shots, seed, .. } => cmd_run(&read(circuit)?, *shots, *seed),
        Command::Compile { hamiltonian, common } => cmd_compile(&read(hamiltonian)?, common.tol.unwrap_or(DEFAULT_TOL)),
        Command::Embed { input, .. } => cmd_embed(&read(input)?),
        Command::TestState { input, displaced, common } => cmd_test_state(&read(input)?, *displaced, common.tol),
        Command::TestUnitary { input, displaced, common } => cmd_test_unitary(&read(input)?, *displaced, common.tol),
        Command::OracleVerify { circuit, n_max, corrupt_angle, common } => {
            cmd_oracle_verify(&read(circuit)?, *n_max, common.tol.unwrap_or(DEFAULT_TOL), *corrupt_angle)
        }
        Command::Version { .. } => Ok(Report::ok(json!({
            "schema": RESULT_SCHEMA,
            "command": "version",
            "name": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "schemas": [CIRCUIT_SCHEMA, STATE_SCHEMA, HAMILTONIAN_SCHEMA, GATES_SCHEMA, DENSE_SCHEMA,
                        EMBEDDING_SCHEMA, RESULT_SCHEMA],
        }))),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))
}

// ---------------------------------------------------------------- documents

/// Circuit file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub schema: String,
    pub n: usize,
    pub input: InputDoc,
    #[serde(default)]
    pub gates: Vec<Gate>,
    pub measure: MeasureDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum InputDoc {
    /// Canonical values of `⊗(I + λ_j Z)/2`.
    Lambdas(Vec<f64>),
    /// Bloch vectors of a product state.
    Bloch(Vec<[f64; 3]>),
    Covariance(CovarianceDoc),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceDoc {
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
    pub mu: Vec<f64>,
}

/// Lines plus either an outcome bitstring `x` or `shots` and `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub lines: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// State file: `lambdas`, or `M` with `mu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub schema: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
}

/// Hamiltonian file: antisymmetric `h` (2n×2n) and displacement `d` (2n).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianDoc {
    pub schema: String,
    pub n: usize,
    pub h: Vec<Vec<f64>>,
    pub d: Vec<f64>,
}

/// Gate-sequence file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GatesDoc {
    pub schema: String,
    pub n: usize,
    pub gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<CompileStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompileStats {
    pub count: usize,
    /// `count / n³`.
    pub c: f64,
    pub residual: f64,
}

/// Dense state vector (`amplitudes` as `[re, im]` pairs) or matrix (`re`,
/// optional `im`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseDoc {
    pub schema: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

fn schema_of(text: &str) -> CliResult<String> {
    let v: Value = serde_json::from_str(text).map_err(json_failure)?;
    v.get("schema")
        .and_then(Value::as_str)
        .map(str::to_owned)
        .ok_or_else(|| Failure::parse("document has no string field \"schema\""))
}

fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str, expected: &str) -> CliResult<T> {
    let schema = schema_of(text)?;
    if schema != expected {
        return Err(Failure::parse(format!("schema is {schema:?}, expected {expected:?}")));
    }
    serde_json::from_str(text).map_err(json_failure)
}

fn json_failure(e: serde_json::Error) -> Failure {
    Failure::parse(format!("invalid document: {e}"))
}

fn matrix(rows: &[Vec<f64>], dim: usize, what: &str) -> CliResult<DMatrix<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Failure::parse(format!("{what} must be {dim}×{dim}")));
    }
    Ok(DMatrix::from_fn(dim, dim, |j, k| rows[j][k]))
}

fn vector(v: &[f64], len: usize, what: &str) -> CliResult<Vec<f64>> {
    if v.len() != len {
        return Err(Failure::parse(format!("{what} must have {len} entries, found {}", v.len())));
    }
    Ok(v.to_vec())
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn state_from_parts(n: usize, m: &[Vec<f64>], mu: &[f64]) -> CliResult<DGaussState> {
    let m = AntisymMat::new(matrix(m, 2 * n, "M")?)?;
    Ok(DGaussState::new(&m, &vector(mu, 2 * n, "mu")?)?)
}

impl StateDoc {
    pub fn from_state(s: &DGaussState) -> Self {
        Self {
            schema: STATE_SCHEMA.into(),
            n: s.n(),
            lambdas: None,
            m: Some(rows(&s.m())),
            mu: Some(s.mu().iter().copied().collect()),
        }
    }

    pub fn to_state(&self) -> CliResult<DGaussState> {
        match (&self.lambdas, &self.m, &self.mu) {
            (Some(l), None, None) => {
                let spec = DiagonalSpec::new(vector(l, self.n, "lambdas")?)?;
                Ok(crate::state::from_diagonal(&spec))
            }
            (None, Some(m), Some(mu)) => state_from_parts(self.n, m, mu),
            _ => Err(Failure::parse("state needs either \"lambdas\" or both \"M\" and \"mu\"")),
        }
    }
}

impl HamiltonianDoc {
    pub fn to_parts(&self) -> CliResult<(AntisymMat<f64>, Vec<f64>)> {
        let h = AntisymMat::new(matrix(&self.h, 2 * self.n, "h")?)?;
        Ok((h, vector(&self.d, 2 * self.n, "d")?))
    }
}

impl DenseDoc {
    fn dim(&self) -> CliResult<usize> {
        dense::check_cap(self.n, dense::MAX_QUBITS, "dense input")?;
        Ok(1 << self.n)
    }

    pub fn to_state(&self) -> CliResult<DenseOp> {
        let d = self.dim()?;
        match (&self.amplitudes, &self.re) {
            (Some(a), None) if self.im.is_none() => {
                if a.len() != d {
                    return Err(Failure::parse(format!("amplitudes must have {d} entries")));
                }
                let amps: Vec<Complex64> = a.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                Ok(DenseOp::from_state_vector(self.n, &amps)?)
            }
            (None, Some(_)) => self.to_matrix(),
            _ => Err(Failure::parse("dense state needs \"amplitudes\" or \"re\" (with optional \"im\")")),
        }
    }

    pub fn to_matrix(&self) -> CliResult<DenseOp> {
        let d = self.dim()?;
        let (Some(re), None) = (&self.re, &self.amplitudes) else {
            return Err(Failure::parse("dense matrix needs \"re\" (with optional \"im\")"));
        };
        let re = matrix(re, d, "re")?;
        let im = match &self.im {
            Some(im) => matrix(im, d, "im")?,
            None => DMatrix::zeros(d, d),
        };
        Ok(DenseOp::new(self.n, re.zip_map(&im, Complex64::new))?)
    }
}

impl CircuitDoc {
    /// Library circuit with optional overrides of shot count and seed.
    pub fn to_circuit(&self, shots: Option<usize>, seed: Option<u64>) -> CliResult<Circuit> {
        let n = self.n;
        let input = match &self.input {
            InputDoc::Lambdas(l) => InputState::Diagonal(DiagonalSpec::new(vector(l, n, "lambdas")?)?),
            InputDoc::Bloch(b) => {
                if b.len() != n {
                    return Err(Failure::parse(format!("bloch must list {n} vectors")));
                }
                InputState::Product(b.clone())
            }
            InputDoc::Covariance(c) => InputState::Covariance(state_from_parts(n, &c.m, &c.mu)?),
        };
        let m = &self.measure;
        let shots = shots.or(m.shots);
        let measurement = match (shots, &m.x) {
            (Some(0), _) => return Err(Failure::parse("shots must be at least 1")),
            (Some(shots), _) => Measurement::Sample { lines: m.lines.clone(), shots, seed: seed.or(m.seed).unwrap_or(0) },
            (None, Some(x)) => Measurement::Expectation(MeasurementOp::new(m.lines.clone(), sim::parse_bitstring(x)?)?),
            (None, None) => return Err(Failure::parse("measure needs \"x\" or \"shots\"")),
        };
        let c = Circuit { n, input, gates: self.gates.clone(), measurement };
        c.validate()?;
        Ok(c)
    }
}

// ----------------------------------------------------------------- commands

fn cmd_run(text: &str, shots: Option<usize>, seed: Option<u64>) -> CliResult<Report> {
    let doc: CircuitDoc = parse_doc(text, CIRCUIT_SCHEMA)?;
    let c = doc.to_circuit(shots, seed)?;
    let s = sim::run(&c)?;
    let doc = match &c.measurement {
        Measurement::Expectation(m) => json!({
            "schema": RESULT_SCHEMA,
            "command": "run",
            "n": c.n,
            "lines": m.lines(),
            "x": sim::bitstring(m.outcome()),
            "expectation": sim::expectation(&s, m)?,
        }),
        Measurement::Sample { lines, shots, seed } => {
            let mut counts = BTreeMap::new();
            for bits in sim::sample_par(&s, lines, *shots, *seed)? {
                *counts.entry(sim::bitstring(&bits)).or_insert(0usize) += 1;
            }
            json!({
                "schema": RESULT_SCHEMA,
                "command": "run",
                "n": c.n,
                "lines": lines,
                "shots": shots,
                "seed": seed,
                "counts": counts,
            })
        }
    };
    Ok(Report::ok(doc))
}

fn cmd_compile(text: &str, tol: f64) -> CliResult<Report> {
    let doc: HamiltonianDoc = parse_doc(text, HAMILTONIAN_SCHEMA)?;
    let (h, d) = doc.to_parts()?;
    let u = DGUnitary::new(h, d)?;
    let seq = unitary::compile(u.rotation())?;
    let residual = unitary::compile_residual(&seq, u.rotation())?;
    let count = seq.gates.len();
    let c = if doc.n == 0 { 0.0 } else { count as f64 / (doc.n as f64).powi(3) };
    if residual > tol {
        return Err(Error::Numerical(format!("compiled sequence misses the target by {residual:e}")).into());
    }
    let out = GatesDoc {
        schema: GATES_SCHEMA.into(),
        n: doc.n,
        gates: seq.gates,
        stats: Some(CompileStats { count, c, residual }),
    };
    let note = format!("gates: {count}, C = count/n^3 = {c:.6}, residual = {residual:.3e}\n");
    Ok(Report { code: exit::OK, doc: to_value(&out)?, note })
}

fn cmd_embed(text: &str) -> CliResult<Report> {
    let schema = schema_of(text)?;
    if schema == HAMILTONIAN_SCHEMA {
        let doc: HamiltonianDoc = parse_doc(text, HAMILTONIAN_SCHEMA)?;
        let (h, d) = doc.to_parts()?;
        let g = embedding::embedded_generator(&h, &d)?;
        let out = HamiltonianDoc {
            schema: HAMILTONIAN_SCHEMA.into(),
            n: doc.n + 1,
            h: rows(g.matrix()),
            d: vec![0.0; 2 * doc.n + 2],
        };
        return Ok(Report::ok(to_value(&out)?));
    }
    let doc: StateDoc = parse_doc(text, STATE_SCHEMA)?;
    let e = embedding::embed_state(&doc.to_state()?)?;
    Ok(Report::ok(json!({
        "schema": EMBEDDING_SCHEMA,
        "n": e.state.n(),
        "M": rows(&e.state.m()),
        "mu": e.state.mu().iter().copied().collect::<Vec<f64>>(),
        "r": e.r.iter().copied().collect::<Vec<f64>>(),
        "c": e.c,
        "purity": e.state.purity(),
    })))
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Gaussian => "gaussian",
        Verdict::NonGaussian => "non-gaussian",
    }
}

fn cmd_test_state(text: &str, displaced: bool, tol: Option<f64>) -> CliResult<Report> {
    let psi = match schema_of(text)?.as_str() {
        CIRCUIT_SCHEMA => {
            let doc: CircuitDoc = parse_doc(text, CIRCUIT_SCHEMA)?;
            sim::run(&doc.to_circuit(None, None)?)?.dense()?
        }
        _ => parse_doc::<DenseDoc>(text, DENSE_SCHEMA)?.to_state()?,
    };
    let route_displaced = displaced || !psi.is_even(1e-10);
    let t = if route_displaced { embedding::displaced_state_test(&psi)? } else { embedding::gaussian_state_test(&psi)? };
    let verdict = match tol {
        Some(tol) if t.overlap >= 1.0 - tol => Verdict::Gaussian,
        Some(_) => Verdict::NonGaussian,
        None => t.verdict,
    };
    Ok(verdict_report("test-state", psi.n(), route_displaced, "overlap", t.overlap, verdict))
}

fn cmd_test_unitary(text: &str, displaced: bool, tol: Option<f64>) -> CliResult<Report> {
    let u = match schema_of(text)?.as_str() {
        GATES_SCHEMA => {
            let doc: GatesDoc = parse_doc(text, GATES_SCHEMA)?;
            let seq = GateSequence { n: doc.n, gates: doc.gates };
            seq.validate()?;
            seq.dense()?
        }
        _ => parse_doc::<DenseDoc>(text, DENSE_SCHEMA)?.to_matrix()?,
    };
    let route_displaced = displaced || u.parity_violation() > 1e-10;
    let t = if route_displaced { embedding::displaced_unitary_test(&u)? } else { embedding::gaussian_unitary_test(&u)? };
    let verdict = match tol {
        Some(tol) if t.deviation < tol => Verdict::Gaussian,
        Some(_) => Verdict::NonGaussian,
        None => t.verdict,
    };
    Ok(verdict_report("test-unitary", u.n(), route_displaced, "deviation", t.deviation, verdict))
}

fn verdict_report(command: &str, n: usize, displaced: bool, key: &str, value: f64, v: Verdict) -> Report {
    let mut doc = json!({
        "schema": RESULT_SCHEMA,
        "command": command,
        "n": n,
        "route": if displaced { "embedded" } else { "even" },
        "verdict": verdict_str(v),
    });
    doc[key] = json!(value);
    let code = if v == Verdict::Gaussian { exit::OK } else { exit::NEGATIVE };
    Report { code, doc, note: String::new() }
}

/// Dense preparation of a circuit's input, built independently of the
/// covariance path wherever the input allows it.
fn dense_input(input: &InputState) -> CliResult<DenseOp> {
    Ok(match input {
        InputState::Diagonal(spec) => {
            let b: Vec<[f64; 3]> = spec.lambdas().iter().map(|&l| [0.0, 0.0, l]).collect();
            dense::product_state(&b)?
        }
        InputState::Product(b) => dense::product_state(b)?,
        InputState::Covariance(s) => wick_dense(s.extended()),
    })
}

fn corrupt(gates: &mut [Gate], delta: f64) -> CliResult<()> {
    for g in gates.iter_mut() {
        match g {
            Gate::Matchgate { angle, .. } | Gate::Line1 { angle, .. } => {
                *angle += delta;
                return Ok(());
            }
            Gate::Fswap { .. } => {}
        }
    }
    Err(Failure::parse("--corrupt-angle needs a circuit with at least one angle-bearing gate"))
}

fn cmd_oracle_verify(text: &str, n_max: usize, tol: f64, corrupt_angle: Option<f64>) -> CliResult<Report> {
    let doc: CircuitDoc = parse_doc(text, CIRCUIT_SCHEMA)?;
    if n_max > SINGLE_REGISTER_CAP {
        return Err(Error::Cap(format!("--n-max {n_max} exceeds the dense cap {SINGLE_REGISTER_CAP}")).into());
    }
    if doc.n > n_max {
        return Err(Error::Cap(format!("circuit has {} qubits, --n-max is {n_max}", doc.n)).into());
    }
    let c = doc.to_circuit(None, None)?;
    let mut fast = c.clone();
    if let Some(delta) = corrupt_angle {
        corrupt(&mut fast.gates, delta)?;
    }
    let s = sim::run(&fast)?;

    let mut rho = dense_input(&c.input)?;
    for g in &c.gates {
        rho = rho.conjugated_by(&g.dense(c.n)?);
    }

    let mut checkpoints = Vec::new();
    let dev = (s.extended() - dense::real_extended_covariance(&rho)).amax();
    checkpoints.push(json!({"name": "post-state", "deviation": dev}));
    let outcomes: Vec<(Vec<usize>, Vec<bool>)> = match &c.measurement {
        Measurement::Expectation(m) => vec![(m.lines().to_vec(), m.outcome().to_vec())],
        Measurement::Sample { lines, .. } => (0..1usize << lines.len())
            .map(|v| (lines.clone(), (0..lines.len()).map(|b| v >> (lines.len() - 1 - b) & 1 == 1).collect()))
            .collect(),
    };
    for (lines, x) in outcomes {
        let cov = sim::expectation(&s, &MeasurementOp::new(lines.clone(), x.clone())?)?;
        let den = dense::born_probability(&rho, &lines, &x)?;
        checkpoints.push(json!({
            "name": format!("p({})", sim::bitstring(&x)),
            "lines": lines,
            "covariance": cov,
            "dense": den,
            "deviation": (cov - den).abs(),
        }));
    }
    let max_dev = checkpoints.iter().filter_map(|c| c["deviation"].as_f64()).fold(0.0, f64::max);
    let pass = max_dev < tol;
    let doc = json!({
        "schema": RESULT_SCHEMA,
        "command": "oracle-verify",
        "n": c.n,
        "tol": tol,
        "max_deviation": max_dev,
        "pass": pass,
        "checkpoints": checkpoints,
    });
    Ok(Report { code: if pass { exit::OK } else { exit::NEGATIVE }, doc, note: String::new() })
}

// ------------------------------------------------------------------- output

/// Pretty JSON with every float written to 17 significant digits.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if !v.is_finite() {
            return Err(io::Error::new(io::ErrorKind::InvalidData, format!("non-finite number {v}")));
        }
        write!(w, "{v:.16e}")
    }
    // serde_json turns NaN and ±∞ into null, and no document has nullable fields.
    fn write_null<W: ?Sized + Write>(&mut self, _: &mut W) -> io::Result<()> {
        Err(io::Error::new(io::ErrorKind::InvalidData, "non-finite number in output"))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Renders a document with 17-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    doc.serialize(&mut ser)
        .map_err(|e| Failure { code: exit::NUMERIC, message: format!("cannot render output: {e}") })?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn to_value<T: Serialize>(doc: &T) -> CliResult<Value> {
    serde_json::to_value(doc).map_err(|e| Failure { code: exit::NUMERIC, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_17_digits() {
        let s = to_json(&json!({"v": 0.1, "w": -2.5e-300})).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["v"].as_f64(), Some(0.1));
        assert_eq!(v["w"].as_f64(), Some(-2.5e-300));
    }

    #[test]
    fn non_finite_output_is_numeric_failure() {
        assert_eq!(to_json(&json!({"v": 1.0})).map(|_| ()), Ok(()));
        let e = to_json(&f64::NAN).unwrap_err();
        assert_eq!(e.code, exit::NUMERIC);
    }

    #[test]
    fn unknown_verb_is_parse_error() {
        assert_eq!(execute(["dgsim", "frobnicate"]).code, exit::PARSE);
    }
}
