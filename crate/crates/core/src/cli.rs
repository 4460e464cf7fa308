//! The `qcompare` command-line front end.
//!
//! Every subcommand writes one machine-readable report to stdout (JSON by
//! default, CSV for `fig1`) and diagnostics to stderr. Reports echo their
//! inputs and round every float to 12 significant digits, so identical
//! requests produce byte-identical output. Exit status is 0 on success, 2 on
//! domain errors and 3 on malformed requests or input files.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::compare::{
    build_comparison_operator, discrimination_strategy, no_measurement, optimal_comparison, ordering_chain,
    strategy_table, ComparisonResult,
};
use crate::discriminate::{helstrom, margin_discrimination_povm, margin_discrimination_states, phase_state_srm, Povm};
use crate::error::{Error, Result};
use crate::linalg::{HermitianOperator, DEFAULT_EIG_EPS};
use crate::margin::{
    assemble_optimal_povm, discrimination_comparison_povm, discrimination_strategy_margin, evaluate_margin_povm,
    fig1_curve, optimal_margin_comparison, uniform_grid, MarginComparison,
};
use crate::numfmt::{format_sig, round_sig, SIG_DIGITS};
use crate::oracle::{simulate_comparison, OptimizerConfig};
use crate::states::{phase_states, states_with_overlap, Ensemble, EnsembleFile, PureState};
use crate::sufficiency::no_measurement_sufficient;

/// Exit status for domain errors (invalid parameters, violated invariants).
pub const EXIT_DOMAIN: u8 = 2;
/// Exit status for malformed requests and unparsable input files.
pub const EXIT_PARSE: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A parsed command line.
#[derive(Clone, Debug, Parser)]
#[command(name = "qcompare", version, about = "Optimal comparison and discrimination of quantum states")]
pub struct CommandRequest {
    #[command(subcommand)]
    pub command: Command,
    /// Report format [default: json, or csv for fig1]
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Seed for randomized computations
    #[arg(long, global = true, env = "QCOMPARE_SEED")]
    pub seed: Option<u64>,
}

/// Where the states come from. Exactly one option must be given.
#[derive(Clone, Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// JSON ensemble file: {"states": [[[re, im], ...], ...], "priors": [...]}
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    /// The N phase states (1, e^{2πik/N})/√2 with equal priors
    #[arg(long, value_name = "N")]
    pub phase_states: Option<usize>,
    /// Two equiprobable qubit states with this overlap modulus
    #[arg(long, value_name = "S")]
    pub overlap: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimStrategy {
    Optimal,
    Discrimination,
    NoMeasurement,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Optimal, discrimination and no-measurement comparison of an ensemble
    Compare(StateSource),
    /// Minimum-error discrimination, or two pure states with an error margin
    Discriminate {
        #[command(flatten)]
        source: StateSource,
        /// Error margin for discriminating two pure states
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Comparison of two pure states with an error margin
    Margin {
        #[arg(long)]
        overlap: f64,
        #[arg(long)]
        margin: f64,
        /// Also assemble and certify the optimal POVM
        #[arg(long)]
        povm: bool,
    },
    /// Success probabilities of the three strategies for N phase states
    Table1 {
        #[arg(long)]
        n: usize,
    },
    /// Optimal and discrimination-strategy success along a margin grid
    Fig1 {
        #[arg(long)]
        overlap: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Largest margin on the grid
        #[arg(long, default_value_t = 0.5)]
        m_max: f64,
    },
    /// Whether answering "different" without measuring is optimal
    Sufficiency(StateSource),
    /// Monte Carlo estimate of a comparison strategy
    Simulate {
        #[command(flatten)]
        source: StateSource,
        /// Error margin (two pure states only)
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, value_enum, default_value = "optimal")]
        strategy: SimStrategy,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
}

/// What a command produced: the exit status and the text for each stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub status: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the request.
pub fn run_from_args<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CommandRequest::try_parse_from(args) {
        Ok(request) => run(&request),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CommandOutput { status: 0, stdout: text, stderr: String::new() }
                }
                _ => CommandOutput { status: EXIT_PARSE, stdout: String::new(), stderr: text },
            }
        }
    }
}

pub fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        _ => EXIT_DOMAIN,
    }
}

pub fn run(request: &CommandRequest) -> CommandOutput {
    match dispatch(request) {
        Ok(stdout) => CommandOutput { status: 0, stdout, stderr: String::new() },
        Err(e) => CommandOutput { status: exit_status(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn dispatch(request: &CommandRequest) -> Result<String> {
    let seed = request.seed.unwrap_or(0);
    let format = request.format;
    let json_or_flat = |report: Value| match format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => render_json(report),
        OutputFormat::Csv => render_flat_csv(report),
    };
    match &request.command {
        Command::Compare(source) => compare_report(source).map(json_or_flat),
        Command::Discriminate { source, margin } => discriminate_report(source, *margin, seed).map(json_or_flat),
        Command::Margin { overlap, margin, povm } => margin_report(*overlap, *margin, *povm, seed).map(json_or_flat),
        Command::Sufficiency(source) => sufficiency_report(source).map(json_or_flat),
        Command::Simulate { source, margin, strategy, trials } => {
            simulate_report(source, *margin, *strategy, *trials, seed).map(json_or_flat)
        }
        Command::Table1 { n } => {
            let t = strategy_table(*n)?;
            Ok(match format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => render_json(json!({
                    "command": "table1",
                    "input": { "n": n },
                    "p_no": t.p_no,
                    "p_disc": t.p_disc,
                    "p_opt": t.p_opt,
                    "disc_trace": t.disc_trace,
                    "opt_rank": t.opt_rank,
                    "ordering": t.ordering,
                })),
                OutputFormat::Csv => {
                    let f = |x: f64| format_sig(x, SIG_DIGITS);
                    format!(
                        "n,p_no,p_disc,p_opt,ordering\n{},{},{},{},{}\n",
                        t.n,
                        f(t.p_no),
                        f(t.p_disc),
                        f(t.p_opt),
                        t.ordering
                    )
                }
            })
        }
        Command::Fig1 { overlap, points, m_max } => {
            if !(0.0..=1.0).contains(m_max) {
                return Err(Error::Domain(format!("--m-max must lie in [0, 1], got {m_max}")));
            }
            let curve = fig1_curve(*overlap, &uniform_grid(*m_max, *points))?;
            Ok(match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => curve.to_csv(),
                OutputFormat::Json => render_json(json!({
                    "command": "fig1",
                    "input": { "overlap": overlap, "points": points, "m_max": m_max },
                    "m_c": curve.m_c,
                    "points": curve.points,
                })),
            })
        }
    }
}

/// Resolved states plus the echo of where they came from.
struct Resolved {
    ensemble: Ensemble,
    /// Present when every state is pure.
    pure: Option<Vec<PureState>>,
    /// Set for the phase-state family, which has a known discrimination measurement.
    phase_n: Option<usize>,
    echo: Value,
}

fn resolve(source: &StateSource) -> Result<Resolved> {
    let (file, phase_n, origin) = if let Some(path) = &source.ensemble {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read ensemble file {}: {e}", path.display())))?;
        (EnsembleFile::parse(&text)?, None, json!({ "ensemble": path.display().to_string() }))
    } else if let Some(n) = source.phase_states {
        (EnsembleFile::from_pure(&phase_states(n)?, None), Some(n), json!({ "phase_states": n }))
    } else if let Some(s) = source.overlap {
        let (a, b) = states_with_overlap(s)?;
        (EnsembleFile::from_pure(&[a, b], None), None, json!({ "overlap": s }))
    } else {
        return Err(Error::Parse("one of --ensemble, --phase-states, --overlap is required".into()));
    };
    let ensemble = file.to_ensemble()?;
    let pure = file.pure_states().ok();
    let echo = json!({
        "source": origin,
        "states": file.states,
        "priors": file.priors_or_uniform(),
    });
    Ok(Resolved { ensemble, pure, phase_n, echo })
}

fn two_pure(r: &Resolved) -> Result<(PureState, PureState)> {
    match r.pure.as_deref() {
        Some([a, b]) => Ok((a.clone(), b.clone())),
        _ => Err(Error::Unsupported("this operation needs exactly two pure states".into())),
    }
}

fn equal_priors(e: &Ensemble) -> bool {
    let w = 1.0 / e.len() as f64;
    e.priors().iter().all(|p| (p - w).abs() < 1e-12)
}

fn strategy_json(r: &ComparisonResult) -> Value {
    json!({ "p_success": r.p_success, "p_error": r.p_error, "e_same_trace": r.povm_same.trace() })
}

/// The discrimination strategy when a natural discrimination measurement exists.
fn discrimination_for(r: &Resolved) -> Result<Option<ComparisonResult>> {
    let e = &r.ensemble;
    let single = if let Some(n) = r.phase_n {
        phase_state_srm(n)?.povm
    } else if e.len() == 2 {
        helstrom(&e.states()[0], &e.states()[1], e.priors()[0], e.priors()[1])?.povm
    } else {
        return Ok(None);
    };
    discrimination_strategy(e, &single).map(Some)
}

fn compare_report(source: &StateSource) -> Result<Value> {
    let r = resolve(source)?;
    let e = &r.ensemble;
    let op = build_comparison_operator(e);
    let opt = optimal_comparison(e)?;
    let no = no_measurement(e);
    let disc = discrimination_for(&r)?;
    let mut chain = vec![("no", no.p_success), ("opt", opt.p_success)];
    if let Some(d) = &disc {
        chain.insert(1, ("disc", d.p_success));
    }
    Ok(json!({
        "command": "compare",
        "input": r.echo,
        "baseline": op.baseline,
        "lambda_eigenvalues": op.lambda.eigenvalues()?,
        "optimal": strategy_json(&opt),
        "discrimination": disc.as_ref().map(strategy_json),
        "no_measurement": strategy_json(&no),
        "ordering": ordering_chain(&chain),
    }))
}

fn discriminate_report(source: &StateSource, margin: Option<f64>, seed: u64) -> Result<Value> {
    let r = resolve(source)?;
    let e = &r.ensemble;
    let Some(mu) = margin else {
        let d = if let Some(n) = r.phase_n {
            phase_state_srm(n)?
        } else if e.len() == 2 {
            helstrom(&e.states()[0], &e.states()[1], e.priors()[0], e.priors()[1])?
        } else {
            return Err(Error::Unsupported(
                "closed-form discrimination is available for two states or the phase-state family".into(),
            ));
        };
        return Ok(json!({
            "command": "discriminate",
            "input": r.echo,
            "success": d.success,
            "povm": povm_json(&d.povm),
        }));
    };
    let (a, b) = two_pure(&r)?;
    if !equal_priors(e) {
        return Err(Error::Unsupported("margin discrimination assumes equal priors".into()));
    }
    let closed = margin_discrimination_states(&a, &b, mu)?;
    let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
    let d = margin_discrimination_povm(&a, &b, mu, &cfg)?;
    let mut input = r.echo;
    input["margin"] = json!(mu);
    Ok(json!({
        "command": "discriminate",
        "input": input,
        "result": closed,
        "povm_success": d.success,
        "povm": povm_json(&d.povm),
    }))
}

fn margin_json(m: &MarginComparison) -> Value {
    serde_json::to_value(m).expect("margin results serialize")
}

fn margin_report(s: f64, m: f64, with_povm: bool, seed: u64) -> Result<Value> {
    let opt = optimal_margin_comparison(s, m)?;
    let disc = discrimination_strategy_margin(s, m)?;
    let mut report = json!({
        "command": "margin",
        "input": { "overlap": s, "margin": m },
        "m_c": opt.m_c,
        "optimal": margin_json(&opt),
        "discrimination": margin_json(&disc),
    });
    if with_povm {
        let (a, b) = states_with_overlap(s)?;
        let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
        let povm = assemble_optimal_povm(&a, &b, m, &cfg)?;
        let probs = evaluate_margin_povm(&a, &b, &povm)?;
        report["povm"] = json!({
            "states": [amplitudes_json(&a), amplitudes_json(&b)],
            "elements": povm_json(&povm),
            "evaluated": probs,
            "min_eigenvalue": povm.min_eigenvalue()?,
            "completeness_defect": povm.completeness_defect(),
        });
    }
    Ok(report)
}

fn sufficiency_report(source: &StateSource) -> Result<Value> {
    let r = resolve(source)?;
    let states = r.pure.as_ref().ok_or_else(|| Error::Unsupported("the sufficiency test needs pure states".into()))?;
    let check = no_measurement_sufficient(states)?;
    let lambda_max = build_comparison_operator(&Ensemble::uniform(states)?).lambda.max_eigenvalue()?;
    Ok(json!({
        "command": "sufficiency",
        "input": r.echo,
        "priors_assumed": "equal",
        "sufficient": check.sufficient,
        "spectrum": check.spectrum,
        "threshold": check.threshold,
        "lambda_max": lambda_max,
        "no_measurement_optimal": lambda_max <= DEFAULT_EIG_EPS,
    }))
}

fn simulate_report(
    source: &StateSource,
    margin: Option<f64>,
    strategy: SimStrategy,
    trials: u64,
    seed: u64,
) -> Result<Value> {
    let r = resolve(source)?;
    let e = &r.ensemble;
    let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
    let (povm, analytic): (Povm, f64) = match (margin, strategy) {
        (Some(m), SimStrategy::Optimal) => {
            let (a, b) = two_pure(&r)?;
            let s = a.overlap(&b)?.norm().min(1.0);
            (assemble_optimal_povm(&a, &b, m, &cfg)?, optimal_margin_comparison(s, m)?.p_success)
        }
        (Some(m), SimStrategy::Discrimination) => {
            let (a, b) = two_pure(&r)?;
            let s = a.overlap(&b)?.norm().min(1.0);
            let target = discrimination_strategy_margin(s, m)?;
            let mu = match target.mu {
                Some(mu) => mu,
                None => crate::discriminate::critical_discrimination_margin(s),
            };
            (discrimination_comparison_povm(&a, &b, mu, &cfg)?, target.p_success)
        }
        (Some(_), SimStrategy::NoMeasurement) => {
            return Err(Error::Unsupported("the margin applies to measuring strategies only".into()));
        }
        (None, SimStrategy::Optimal) => {
            let o = optimal_comparison(e)?;
            (o.povm()?, o.p_success)
        }
        (None, SimStrategy::Discrimination) => {
            let d = discrimination_for(&r)?.ok_or_else(|| {
                Error::Unsupported("no closed-form discrimination measurement for this ensemble".into())
            })?;
            (d.povm()?, d.p_success)
        }
        (None, SimStrategy::NoMeasurement) => {
            let n = no_measurement(e);
            (n.povm()?, n.p_success)
        }
    };
    let report = simulate_comparison(e, &povm, trials, seed)?;
    let z = if report.stderr > 0.0 { (report.p_success_hat - analytic) / report.stderr } else { 0.0 };
    let mut input = r.echo;
    input["margin"] = json!(margin);
    input["strategy"] = serde_json::to_value(strategy_name(strategy)).expect("string");
    input["trials"] = json!(trials);
    input["seed"] = json!(seed);
    Ok(json!({
        "command": "simulate",
        "input": input,
        "report": report,
        "analytic_p_success": analytic,
        "z_score": z,
    }))
}

fn strategy_name(s: SimStrategy) -> &'static str {
    match s {
        SimStrategy::Optimal => "optimal",
        SimStrategy::Discrimination => "discrimination",
        SimStrategy::NoMeasurement => "no-measurement",
    }
}

fn amplitudes_json(s: &PureState) -> Value {
    json!(s.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

fn matrix_json(h: &HermitianOperator) -> Value {
    let n = h.dim();
    json!((0..n).map(|i| (0..n).map(|j| [h.get(i, j).re, h.get(i, j).im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

#[derive(Serialize)]
struct ElementJson {
    label: String,
    matrix: Value,
}

fn povm_json(p: &Povm) -> Value {
    json!(p
        .elements()
        .iter()
        .map(|(label, e)| ElementJson { label: label.to_string(), matrix: matrix_json(e) })
        .collect::<Vec<_>>())
}

/// Rounds every non-integer number to 12 significant digits; `-0` becomes `0`.
fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            let x = if x == 0.0 { 0.0 } else { x };
            *v = json!(x);
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn render_json(mut report: Value) -> String {
    round_numbers(&mut report);
    let mut s = serde_json::to_string_pretty(&report).expect("JSON values serialize");
    s.push('\n');
    s
}

/// `key,value` rows with dotted paths, for reports that are not tables.
fn render_flat_csv(report: Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, child, out);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), child, out);
                }
            }
            Value::Number(n) => {
                let text = match n.as_f64() {
                    Some(x) if n.is_f64() => format_sig(x, SIG_DIGITS),
                    _ => n.to_string(),
                };
                out.push_str(&format!("{prefix},{text}\n"));
            }
            Value::String(s) => {
                let quoted =
                    if s.contains([',', '"', '\n']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.clone() };
                out.push_str(&format!("{prefix},{quoted}\n"));
            }
            Value::Bool(b) => out.push_str(&format!("{prefix},{b}\n")),
            Value::Null => out.push_str(&format!("{prefix},\n")),
        }
    }
    let mut out = String::from("key,value\n");
    walk("", &report, &mut out);
    out
}
