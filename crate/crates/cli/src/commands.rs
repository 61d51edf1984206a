//! Argument definitions and dispatch to the engine.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graded_poisson::closedform::{self, Equivalence, SliceForm};
use graded_poisson::cohomology::{CohomologyOptions, CohomologyTable, EngineMode, Engine, Grading};
use graded_poisson::planar::milnor_basis;
use graded_poisson::schouten::{self, MultiDerivation};
use graded_poisson::{AlgebraSignature, GpError, GradedPolynomial, Parity};
use serde_json::{json, Value};
use thiserror::Error;

use crate::expr::{parse_multiderivation, parse_polynomial, ParseError, SignatureSpec};

#[derive(Debug, Parser)]
#[command(name = "gp", version, about = "Exact calculus for graded Poisson structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether an odd multiderivation squares to zero.
    Check(CheckArgs),
    /// Schouten bracket of two multiderivations.
    Bracket(PairArgs),
    /// Modified (Lie super) bracket of two multiderivations.
    Mbracket(PairArgs),
    /// Brute-force cohomology table.
    Cohomology(CohomologyArgs),
    /// Closed-form cohomology generators.
    Closedform(ClosedFormArgs),
    /// Milnor number and monomial basis of a binary form.
    Milnor(MilnorArgs),
    /// Test whether a function is a Casimir of a 2|1 codifferential.
    Casimir(CasimirArgs),
    /// Normal form of a 0|1 codifferential.
    Classify01(Classify01Args),
    /// Rational equivalence of first-kind 1|1 codifferentials.
    Equiv11(Equiv11Args),
    /// Maurer-Cartan residual of a deformation.
    Mc(McArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Human-readable output instead of JSON.
    #[arg(long)]
    pub pretty: bool,
    /// Write the output to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// The main expression: positional, `--psi`, or `--in FILE`.
#[derive(Debug, Clone, Args)]
pub struct PsiSource {
    /// Expression (alternative to --psi).
    #[arg(value_name = "EXPR")]
    pub expr: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// Read the expression from a UTF-8 file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long, default_value = "1,1")]
    pub sig: SignatureSpec,
    #[command(flatten)]
    pub source: PsiSource,
    /// Truncation arity of the self-bracket (default: everything).
    #[arg(long)]
    pub max_arity: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long, default_value = "1,1")]
    pub sig: SignatureSpec,
    pub left: String,
    pub right: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CohomologyArgs {
    #[arg(long, default_value = "1,1")]
    pub sig: SignatureSpec,
    #[command(flatten)]
    pub source: PsiSource,
    #[arg(long, default_value_t = 3)]
    pub nmax: usize,
    #[arg(long, default_value_t = 6)]
    pub emax: i64,
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    /// Leave out odd 0-cochains as sources of coboundaries.
    #[arg(long)]
    pub convention: bool,
    /// Weights `even,odd` of the internal grading.
    #[arg(long, value_name = "EW,OW")]
    pub grading: Option<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ClosedFormArgs {
    #[arg(long, default_value = "1,1")]
    pub sig: SignatureSpec,
    #[command(flatten)]
    pub source: PsiSource,
    #[arg(long, default_value_t = 3)]
    pub nmax: usize,
    /// Dimensions are listed up to this weight.
    #[arg(long, default_value_t = 6)]
    pub emax: i64,
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    #[arg(long)]
    pub convention: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct MilnorArgs {
    /// Binary form in x, y.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CasimirArgs {
    #[command(flatten)]
    pub source: PsiSource,
    /// Candidate function on 2|1.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Classify01Args {
    #[command(flatten)]
    pub source: PsiSource,
    /// Arity up to which higher terms are removed.
    #[arg(long, default_value_t = 8)]
    pub max_arity: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Equiv11Args {
    /// Coefficient of the first codifferential, a polynomial in x.
    #[arg(long, allow_hyphen_values = true)]
    pub g1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub g2: String,
    /// Number of Dth factors.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long, default_value = "1,1")]
    pub sig: SignatureSpec,
    #[command(flatten)]
    pub source: PsiSource,
    /// Odd deformation.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long)]
    pub max_arity: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {field}: {source}")]
    Parse { field: &'static str, source: ParseError },
    #[error(transparent)]
    Engine(#[from] GpError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Engine(_) => "engine",
            CliError::Io(_) => "io",
        };
        let mut v = json!({ "kind": kind, "message": self.to_string() });
        if let CliError::Parse { field, source } = self {
            v["field"] = json!(field);
            v["position"] = json!(source.position());
        }
        v
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    /// 0 success, 1 mathematical negative, 2 usage or parse error.
    pub code: i32,
    pub out: Option<PathBuf>,
}

struct Report {
    input: Value,
    result: Value,
    negative: bool,
    table: Option<String>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Bracket(_) => "bracket",
            Command::Mbracket(_) => "mbracket",
            Command::Cohomology(_) => "cohomology",
            Command::Closedform(_) => "closedform",
            Command::Milnor(_) => "milnor",
            Command::Casimir(_) => "casimir",
            Command::Classify01(_) => "classify01",
            Command::Equiv11(_) => "equiv11",
            Command::Mc(_) => "mc",
        }
    }

    fn output(&self) -> &Output {
        match self {
            Command::Check(a) => &a.output,
            Command::Bracket(a) | Command::Mbracket(a) => &a.output,
            Command::Cohomology(a) => &a.output,
            Command::Closedform(a) => &a.output,
            Command::Milnor(a) => &a.output,
            Command::Casimir(a) => &a.output,
            Command::Classify01(a) => &a.output,
            Command::Equiv11(a) => &a.output,
            Command::Mc(a) => &a.output,
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let output = cli.command.output();
    let (text, code) = match dispatch(&cli.command) {
        Ok(rep) => {
            let doc = json!({ "command": name, "input": rep.input, "result": rep.result });
            let text = match (output.pretty, rep.table) {
                (true, Some(t)) => t,
                (true, None) => serde_json::to_string_pretty(&doc).expect("json"),
                (false, _) => doc.to_string(),
            };
            (text, i32::from(rep.negative))
        }
        Err(e) => {
            let doc = json!({ "command": name, "error": e.to_json() });
            let text = if output.pretty { format!("error: {e}") } else { doc.to_string() };
            (text, 2)
        }
    };
    Outcome { text, code, out: output.out.clone() }
}

fn signature(spec: &SignatureSpec) -> Result<AlgebraSignature, CliError> {
    AlgebraSignature::new(spec.even, spec.odd).map_err(CliError::from)
}

fn read_source(src: &PsiSource) -> Result<String, CliError> {
    let mut found = Vec::new();
    if let Some(e) = &src.expr {
        found.push(e.clone());
    }
    if let Some(e) = &src.psi {
        found.push(e.clone());
    }
    if let Some(path) = &src.input {
        found.push(std::fs::read_to_string(path)?.trim().to_string());
    }
    match found.len() {
        1 => Ok(found.pop().expect("one")),
        0 => Err(CliError::Usage("missing expression: pass it positionally, with --psi, or with --in FILE".into())),
        _ => Err(CliError::Usage("give the expression only once".into())),
    }
}

fn md(field: &'static str, text: &str, sig: &AlgebraSignature) -> Result<MultiDerivation, CliError> {
    parse_multiderivation(text, sig).map_err(|source| CliError::Parse { field, source })
}

fn poly(field: &'static str, text: &str, sig: &AlgebraSignature) -> Result<GradedPolynomial, CliError> {
    parse_polynomial(text, sig).map_err(|source| CliError::Parse { field, source })
}

fn full_arity(a: &MultiDerivation, b: &MultiDerivation) -> usize {
    (a.max_arity().unwrap_or(0) + b.max_arity().unwrap_or(0)).max(1)
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Check(a) => check(a),
        Command::Bracket(a) => pair(a, schouten::schouten_bracket),
        Command::Mbracket(a) => pair(a, schouten::modified_bracket),
        Command::Cohomology(a) => cohomology(a),
        Command::Closedform(a) => closed_form(a),
        Command::Milnor(a) => milnor(a),
        Command::Casimir(a) => casimir(a),
        Command::Classify01(a) => classify01(a),
        Command::Equiv11(a) => equiv11(a),
        Command::Mc(a) => mc(a),
    }
}

fn check(a: &CheckArgs) -> Result<Report, CliError> {
    let sig = signature(&a.sig)?;
    let psi = md("psi", &read_source(&a.source)?, &sig)?;
    let max = a.max_arity.unwrap_or_else(|| full_arity(&psi, &psi));
    let res = schouten::is_codifferential(&psi, max)?;
    Ok(Report {
        input: json!({ "sig": sig.to_string(), "psi": psi.to_string(), "max_arity": max }),
        result: json!({ "codifferential": res.is_codifferential, "residual": res.residual.to_string() }),
        negative: !res.is_codifferential,
        table: None,
    })
}

fn pair(
    a: &PairArgs,
    op: fn(&MultiDerivation, &MultiDerivation) -> graded_poisson::Result<MultiDerivation>,
) -> Result<Report, CliError> {
    let sig = signature(&a.sig)?;
    let l = md("left", &a.left, &sig)?;
    let r = md("right", &a.right, &sig)?;
    let br = op(&l, &r)?;
    Ok(Report {
        input: json!({ "sig": sig.to_string(), "left": l.to_string(), "right": r.to_string() }),
        result: json!({ "bracket": br.to_string() }),
        negative: false,
        table: None,
    })
}

fn parse_grading(text: &str) -> Result<Grading, CliError> {
    let bad = || CliError::Usage(format!("grading must be `even,odd` weights, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let ew = a.trim().parse().map_err(|_| bad())?;
    let ow = b.trim().parse().map_err(|_| bad())?;
    Ok(Grading::new(ew, ow)?)
}

fn mode_json(mode: &EngineMode) -> Value {
    match mode {
        EngineMode::Homogeneous { weight, min_arity, max_arity } => {
            json!({ "kind": "homogeneous", "weight": weight, "min_arity": min_arity, "max_arity": max_arity })
        }
        EngineMode::Filtered { arity, low, high } => {
            json!({ "kind": "filtered", "arity": arity, "low": low, "high": high })
        }
    }
}

fn table_text(t: &CohomologyTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "grading ({}, {})", t.grading.even_weight, t.grading.odd_weight);
    let _ = writeln!(s, "{:>3} {:>6} {:>4} {:>6} {:>6} {:>6}", "n", "parity", "e", "dim Z", "dim B", "dim H");
    for ((n, p, e), c) in &t.entries {
        let flag = if c.converged { "" } else { "  (unconverged)" };
        let _ = writeln!(s, "{n:>3} {:>6} {e:>4} {:>6} {:>6} {:>6}{flag}", p.to_string(), c.dim_z, c.dim_b, c.dim_h);
    }
    s.pop();
    s
}

fn cohomology(a: &CohomologyArgs) -> Result<Report, CliError> {
    let sig = signature(&a.sig)?;
    let psi = md("psi", &read_source(&a.source)?, &sig)?;
    let grading = a.grading.as_deref().map(parse_grading).transpose()?;
    let opts = CohomologyOptions { deformation_convention: a.convention, grading, ..Default::default() };
    let engine = Engine::new(&psi, opts)?;
    let table = engine.table(a.nmax, a.emax, a.parity.map(Parity::from))?;
    let slices: Vec<Value> = table
        .entries
        .iter()
        .map(|((n, p, e), c)| {
            json!({
                "n": n,
                "parity": p.to_string(),
                "e": e,
                "dims": { "z": c.dim_z, "b": c.dim_b, "h": c.dim_h },
                "representatives": c.representatives.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "converged": c.converged,
            })
        })
        .collect();
    let g = table.grading;
    Ok(Report {
        input: json!({
            "sig": sig.to_string(), "psi": psi.to_string(), "nmax": a.nmax, "emax": a.emax,
            "parity": a.parity.map(|p| Parity::from(p).to_string()), "convention": a.convention,
        }),
        result: json!({
            "grading": { "even_weight": g.even_weight, "odd_weight": g.odd_weight },
            "mode": mode_json(&table.mode),
            "slices": slices,
        }),
        negative: false,
        table: Some(table_text(&table)),
    })
}

fn closed_form(a: &ClosedFormArgs) -> Result<Report, CliError> {
    let sig = signature(&a.sig)?;
    let psi = md("psi", &read_source(&a.source)?, &sig)?;
    let parities: Vec<Parity> = match a.parity {
        Some(p) => vec![p.into()],
        None => vec![Parity::Even, Parity::Odd],
    };
    let mut slices = Vec::new();
    let mut text = String::new();
    for n in 0..=a.nmax {
        for &p in &parities {
            let form = closedform::closed_form(&psi, a.convention, n, p)?;
            let entry = match &form {
                SliceForm::NoClosedForm => {
                    let _ = writeln!(text, "H^{n}_{p}: no closed form");
                    json!({ "n": n, "parity": p.to_string(), "closed_form": false })
                }
                SliceForm::Generators(gens) => {
                    if gens.is_empty() {
                        let _ = writeln!(text, "H^{n}_{p} = 0");
                    }
                    let items: Vec<Value> = gens
                        .iter()
                        .map(|g| {
                            let lead = g.element(0).to_string();
                            let _ = writeln!(text, "H^{n}_{p}: {} * {lead}  (weight {})", g.module.label(), g.weight);
                            let dims: Vec<Value> = (g.weight..=a.emax.max(g.weight))
                                .map(|e| json!({ "e": e, "dim": g.dim_at(e) }))
                                .collect();
                            json!({
                                "generator": lead,
                                "module": g.module.label(),
                                "weight": g.weight,
                                "total_dim": g.total_dim(),
                                "dims": dims,
                            })
                        })
                        .collect();
                    json!({ "n": n, "parity": p.to_string(), "closed_form": true, "generators": items })
                }
            };
            slices.push(entry);
        }
    }
    text.pop();
    Ok(Report {
        input: json!({
            "sig": sig.to_string(), "psi": psi.to_string(), "nmax": a.nmax, "emax": a.emax, "convention": a.convention,
        }),
        result: json!({ "slices": slices }),
        negative: false,
        table: Some(text),
    })
}

fn milnor(a: &MilnorArgs) -> Result<Report, CliError> {
    let text = match (&a.b, &a.input) {
        (Some(b), None) => b.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)?.trim().to_string(),
        _ => return Err(CliError::Usage("give the form with exactly one of --b or --in".into())),
    };
    let sig = graded_poisson::planar::plane();
    let b = poly("b", &text, &sig)?;
    let data = milnor_basis(&b)?;
    Ok(Report {
        input: json!({ "b": b.to_string() }),
        result: json!({ "mu": data.mu(), "basis": data.basis().iter().map(|m| m.to_string()).collect::<Vec<_>>() }),
        negative: false,
        table: None,
    })
}

fn casimir(a: &CasimirArgs) -> Result<Report, CliError> {
    let sig = AlgebraSignature::new(2, 1)?;
    let psi = md("psi", &read_source(&a.source)?, &sig)?;
    let alpha = poly("alpha", &a.alpha, &sig)?;
    let res = closedform::casimir_residual(&psi, &alpha)?;
    Ok(Report {
        input: json!({ "psi": psi.to_string(), "alpha": alpha.to_string() }),
        result: json!({ "casimir": res.is_zero(), "residual": res.to_string() }),
        negative: !res.is_zero(),
        table: None,
    })
}

fn classify01(a: &Classify01Args) -> Result<Report, CliError> {
    let sig = AlgebraSignature::new(0, 1)?;
    let psi = md("psi", &read_source(&a.source)?, &sig)?;
    let input = json!({ "psi": psi.to_string(), "max_arity": a.max_arity });
    let check = schouten::is_codifferential(&psi, full_arity(&psi, &psi))?;
    if !check.is_codifferential {
        return Ok(Report {
            input,
            result: json!({ "codifferential": false, "residual": check.residual.to_string() }),
            negative: true,
            table: None,
        });
    }
    let order = closedform::classify_0_1(&psi)?;
    let normal = closedform::normalize_0_1(&psi, a.max_arity.max(order))?;
    Ok(Report {
        input,
        result: json!({ "codifferential": true, "order": order, "normal_form": normal.to_string() }),
        negative: false,
        table: None,
    })
}

fn univariate(field: &'static str, text: &str) -> Result<graded_poisson::univariate::UniPoly, CliError> {
    let sig = AlgebraSignature::new(1, 0)?;
    Ok(poly(field, text, &sig)?.to_univariate()?.1)
}

fn equiv11(a: &Equiv11Args) -> Result<Report, CliError> {
    let g1 = univariate("g1", &a.g1)?;
    let g2 = univariate("g2", &a.g2)?;
    let verdict = closedform::equivalent_1_1_first_kind(&g1, &g2, a.k)?;
    let (label, witness) = match &verdict {
        Equivalence::Witness { a, b, c } => ("yes", json!({ "a": a.to_string(), "b": b.to_string(), "c": c.to_string() })),
        Equivalence::None => ("no", Value::Null),
        Equivalence::Unknown => ("unknown", Value::Null),
    };
    let show = |p: &graded_poisson::univariate::UniPoly| p.to_string().replace('t', "x");
    Ok(Report {
        input: json!({ "g1": show(&g1), "g2": show(&g2), "k": a.k }),
        result: json!({ "equivalent": label, "witness": witness }),
        negative: verdict == Equivalence::None,
        table: None,
    })
}

fn mc(a: &McArgs) -> Result<Report, CliError> {
    let sig = signature(&a.sig)?;
    let psi = md("psi", &read_source(&a.source)?, &sig)?;
    let alpha = md("alpha", &a.alpha, &sig)?;
    let max = a.max_arity.unwrap_or_else(|| full_arity(&psi, &alpha).max(full_arity(&alpha, &alpha)));
    let res = schouten::maurer_cartan_residual(&psi, &alpha, max)?;
    Ok(Report {
        input: json!({ "sig": sig.to_string(), "psi": psi.to_string(), "alpha": alpha.to_string(), "max_arity": max }),
        result: json!({ "solution": res.is_zero(), "residual": res.to_string() }),
        negative: !res.is_zero(),
        table: None,
    })
}
