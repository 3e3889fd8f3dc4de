//! `tangent`: derivatives, divided differences, anchors and Kronecker
//! matrices over exact rationals or floats, with JSON output.

use std::collections::HashMap;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tangent_core::anchor::{anchor_inverse_matrix, anchor_matrix};
use tangent_core::hyperlin::{kron_det, kron_inverse, kron_product, symplectic_adjugate};
use tangent_core::json::{
    bindings_to_json, blocks_from_json, label_to_json, matrix_to_json, parse_list, tangent_to_json,
    vector_tangent_from_json, ScalarJson,
};
use tangent_core::slope::{self, split_components, ExprFn, SlopeResult};
use tangent_core::{expr, Expr, Float, Rational, Tangent, TimeLabel, Vector};
use tangent_verify::{Config, Suite};

#[derive(Parser)]
#[command(name = "tangent", version, about = "Exact generalized differentiation in tangent algebras")]
struct Cli {
    /// Scalar ring for all arithmetic.
    #[arg(long, value_enum, env = "TANGENT_RING", default_value = "rational", global = true)]
    ring: Ring,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ring {
    Rational,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Partial derivative of an expression at a point.
    Derive(DeriveArgs),
    /// First-order slope (value and difference quotient) of an expression.
    Divdiff(DivdiffArgs),
    /// Higher-order slope of an expression at a time label.
    Slope(SlopeArgs),
    /// Anchor matrix of a time label, or its inverse.
    Anchor(AnchorArgs),
    /// Kronecker product of 2x2 blocks, its inverse, determinant or adjugate.
    Kron(KronArgs),
    /// Run the randomized property suites (always in exact arithmetic).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(long)]
    expr: String,
    /// Differentiation variable; repeat for mixed partials.
    #[arg(long = "var", required = true)]
    vars: Vec<String>,
    /// Derivative order; with a single `--var` that variable is repeated.
    #[arg(long)]
    order: Option<usize>,
    /// Bindings such as `x=2,y=1/3`.
    #[arg(long)]
    at: String,
}

#[derive(Args)]
struct DivdiffArgs {
    #[arg(long)]
    expr: String,
    /// Base point: bindings (`x=3`) or values in variable order (`3`).
    #[arg(long, allow_hyphen_values = true)]
    v0: String,
    /// Direction, in the same format as `--v0`.
    #[arg(long, allow_hyphen_values = true)]
    v1: String,
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Evaluate the expression in the tangent algebra (any label).
    Expr,
    /// Conjugate pointwise evaluation by the anchor (regular labels).
    Anchor,
    /// Weighted sum of point evaluations (regular labels).
    Formula,
}

#[derive(Args)]
struct SlopeArgs {
    #[arg(long)]
    expr: String,
    /// Target times, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Source times, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Base point; every first-order coefficient defaults to the all-ones direction.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "args")]
    at: Option<String>,
    /// Full argument as a JSON vector-valued element (overrides --at, --t, --s).
    #[arg(long)]
    args: Option<String>,
    #[arg(long, value_enum, default_value = "expr")]
    method: Method,
}

#[derive(Args)]
struct AnchorArgs {
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct KronArgs {
    /// JSON list of blocks `[[[a,b],[c,d]], ...]`, first factor first.
    #[arg(long)]
    blocks: String,
    #[arg(long, conflicts_with_all = ["det", "adjugate"])]
    inverse: bool,
    #[arg(long, conflicts_with = "adjugate")]
    det: bool,
    #[arg(long)]
    adjugate: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest order exercised by every check.
    #[arg(long = "n", value_parser = clap::value_parser!(u64).range(1..=8))]
    max_order: Option<u64>,
    /// Random cases per check.
    #[arg(long, default_value_t = 100)]
    cases: usize,
}

enum Failure {
    /// Bad input or an arithmetic error; exit code 2.
    Error(String),
    /// A property check failed; exit code 1.
    Verification(Value),
}

impl From<tangent_core::Error> for Failure {
    fn from(e: tangent_core::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.ring {
        Ring::Rational => run::<Rational>(cli.command),
        Ring::Float => run::<Float>(cli.command),
    };
    match result {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(value)) => {
            println!("{value}");
            ExitCode::from(1)
        }
        Err(Failure::Error(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run<S: ScalarJson>(command: Command) -> Outcome {
    match command {
        Command::Derive(args) => derive::<S>(args),
        Command::Divdiff(args) => divdiff::<S>(args),
        Command::Slope(args) => slope_cmd::<S>(args),
        Command::Anchor(args) => anchor::<S>(args),
        Command::Kron(args) => kron::<S>(args),
        Command::Verify(args) => verify(args),
    }
}

fn parse_expr<S: ScalarJson>(text: &str) -> Result<Expr, Failure> {
    Ok(expr::parse_with(text, expr::ParseOptions { allow_decimals: !S::EXACT })?)
}

fn parse_bindings<S: ScalarJson>(text: &str) -> Result<HashMap<String, S>, Failure> {
    let mut out = HashMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Error(format!("expected `name=value`, found `{item}`")))?;
        out.insert(name.trim().to_string(), S::parse_text(value)?);
    }
    Ok(out)
}

/// A point given as bindings or as values in variable order.
fn parse_point<S: ScalarJson>(text: &str, vars: &[String]) -> Result<Vec<S>, Failure> {
    if text.contains('=') {
        let bindings = parse_bindings::<S>(text)?;
        vars.iter()
            .map(|v| {
                bindings
                    .get(v)
                    .cloned()
                    .ok_or_else(|| tangent_core::Error::UnboundVariable(v.clone()).into())
            })
            .collect()
    } else {
        let values = parse_list::<S>(text)?;
        if values.len() != vars.len() {
            return Err(Failure::Error(format!(
                "expected {} coordinates ({}), found {}",
                vars.len(),
                vars.join(", "),
                values.len()
            )));
        }
        Ok(values)
    }
}

fn parse_scalar<S: ScalarJson>(text: &str) -> Result<S, Failure> {
    Ok(S::parse_text(text)?)
}

fn parse_label<S: ScalarJson>(t: &str, s: &str) -> Result<TimeLabel<S>, Failure> {
    Ok(TimeLabel::new(parse_list(t)?, parse_list(s)?)?)
}

fn derive<S: ScalarJson>(args: DeriveArgs) -> Outcome {
    let expr = parse_expr::<S>(&args.expr)?;
    let point = parse_bindings::<S>(&args.at)?;
    let wrt: Vec<&str> = match (args.vars.as_slice(), args.order) {
        ([single], Some(k)) => vec![single.as_str(); k],
        (vars, Some(k)) if k != vars.len() => {
            return Err(Failure::Error(format!(
                "--order {k} does not match the {} variables given",
                vars.len()
            )))
        }
        (vars, _) => vars.iter().map(String::as_str).collect(),
    };
    let value = slope::derivative(&expr, &point, &wrt)?;
    Ok(json!({ "value": value.to_json() }))
}

fn divdiff<S: ScalarJson>(args: DivdiffArgs) -> Outcome {
    let f = ExprFn::scalar(parse_expr::<S>(&args.expr)?);
    let v0 = parse_point::<S>(&args.v0, f.vars())?;
    let v1 = parse_point::<S>(&args.v1, f.vars())?;
    let w = slope::slope1(&f, &v0, &v1, parse_scalar(&args.t)?, parse_scalar(&args.s)?)?;
    let c = w.coeffs();
    Ok(json!({ "w0": c[0].0[0].to_json(), "w1": c[1].0[0].to_json() }))
}

fn slope_cmd<S: ScalarJson>(args: SlopeArgs) -> Outcome {
    let f = ExprFn::scalar(parse_expr::<S>(&args.expr)?);
    let width = f.vars().len();
    let v: SlopeResult<S> = match &args.args {
        Some(text) => {
            let value: Value =
                serde_json::from_str(text).map_err(|e| Failure::Error(format!("--args: {e}")))?;
            vector_tangent_from_json(&value, width)?
        }
        None => {
            let label = Arc::new(parse_label::<S>(&args.t, &args.s)?);
            let base = parse_point::<S>(args.at.as_deref().unwrap_or_default(), f.vars())?;
            let n = label.order();
            let coeffs = (0..1usize << n)
                .map(|mask| match mask {
                    0 => Vector(base.clone()),
                    m if m.is_power_of_two() => Vector(vec![S::one(); width]),
                    _ => Vector(vec![S::zero(); width]),
                })
                .collect();
            Tangent::new(label, coeffs)?
        }
    };
    let result = match args.method {
        Method::Expr => f.extend(&v)?,
        Method::Anchor => slope::slope_n(&f, &v)?,
        Method::Formula => slope::slope_n_formula(&f, &v)?,
    };
    let base = &v.coeffs()[0].0;
    let point = bindings_to_json(f.vars().iter().zip(base));
    let scalar = split_components(&result).remove(0);
    Ok(json!({
        "label": label_to_json(v.label()),
        "point": point,
        "result": tangent_to_json(&scalar),
    }))
}

fn anchor<S: ScalarJson>(args: AnchorArgs) -> Outcome {
    let label = parse_label::<S>(&args.t, &args.s)?;
    let m = if args.inverse {
        anchor_inverse_matrix(&label)?
    } else {
        anchor_matrix(&label)
    };
    Ok(matrix_to_json(&m))
}

fn kron<S: ScalarJson>(args: KronArgs) -> Outcome {
    let value: Value =
        serde_json::from_str(&args.blocks).map_err(|e| Failure::Error(format!("--blocks: {e}")))?;
    let blocks = blocks_from_json::<S>(&value)?;
    if args.det {
        if blocks.is_empty() {
            return Err(tangent_core::Error::EmptyBlocks.into());
        }
        return Ok(json!({ "value": kron_det(&blocks).to_json() }));
    }
    let m = if args.inverse {
        kron_inverse(&blocks)?
    } else if args.adjugate {
        symplectic_adjugate(&blocks)?
    } else {
        kron_product(&blocks)?
    };
    Ok(matrix_to_json(&m))
}

fn verify(args: VerifyArgs) -> Outcome {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse().map_err(Failure::Error)?]
    };
    let config = Config {
        seed: args.seed,
        cases: args.cases,
        max_order: args.max_order.map(|n| n as usize),
    };
    let mut passed = true;
    let report: Vec<Value> = suites
        .into_iter()
        .map(|suite| {
            let checks: Vec<Value> = tangent_verify::run_suite(suite, &config)
                .into_iter()
                .map(|outcome| {
                    eprintln!("{}: {outcome}", suite.name());
                    passed &= outcome.passed();
                    json!({
                        "check": outcome.check.name(),
                        "cases": outcome.cases,
                        "failures": outcome.failures,
                        "first_failure": outcome.first_failure,
                    })
                })
                .collect();
            json!({ "suite": suite.name(), "checks": checks })
        })
        .collect();
    let value = json!({ "seed": args.seed, "passed": passed, "suites": report });
    if passed {
        Ok(value)
    } else {
        Err(Failure::Verification(value))
    }
}
