//! `rootseries` command line: coefficient tables, series-vs-Newton
//! evaluation and the identity checks, all as JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rootseries::numeric::Scalar;
use rootseries::problem::{BaseSpec, CoeffRow, EvalRow, Mode, ProblemSpec};
use rootseries::series::MultiIndex;
use rootseries::symbolic::{parse_rational, Rational};
use rootseries::verify::{self, IdentityReport, TransformCase};
use serde::Serialize;

const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser)]
#[command(
    name = "rootseries",
    version,
    about = "Taylor series of perturbed roots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Taylor coefficients for every multi-index up to the order.
    Coeff(ProblemArgs),
    /// Truncated series against the Newton-tracked root at each a-value.
    Eval(ProblemArgs),
    /// Run identity checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Total order; defaults to the spec's max_order.
    #[arg(long)]
    order: Option<u32>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Working precision in bits; above 53 uses MPFR.
    #[arg(long, default_value_t = 53)]
    precision: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    selector: Selector,
    /// Spec supplying exponents (integrality) or a two-term base (transform).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Total order bound for integrality, transform and the main consistency checks.
    #[arg(long)]
    order: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Size bound M for fprod and derivset.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Size bound N for nu, newton and vandermonde.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Power applied in the transform check when a spec is given.
    #[arg(long, default_value = "2", allow_negative_numbers = true)]
    beta2: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Selector {
    Fprod,
    Nu,
    Derivset,
    Newton,
    Vandermonde,
    Integrality,
    Transform,
    TheoremMainConsistency,
    All,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Verification,
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Verification => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl From<rootseries::Error> for Failure {
    fn from(e: rootseries::Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

#[derive(Serialize)]
struct CoeffOutput<'a> {
    mode: Mode,
    order: u32,
    gammas: &'a [Scalar],
    coefficients: Vec<CoeffRow>,
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    order: u32,
    precision: u32,
    radius: f64,
    gammas: &'a [Scalar],
    rows: Vec<EvalRow>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Failure::Validation(String::new()).code())
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Coeff(args) => coeff(args),
        Command::Eval(args) => eval(args),
        Command::Verify(args) => verify_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Validation(m) => eprintln!("error: {m}"),
                Failure::Numeric(m) => eprintln!("numeric failure: {m}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn load_spec(path: &Path) -> Result<ProblemSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    Ok(ProblemSpec::from_json(&text)?)
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Validation(e.to_string()))?;
    text.push('\n');
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Validation(format!("{}: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Validation(e.to_string())),
    }
}

fn prepared_spec(args: &ProblemArgs) -> Result<(ProblemSpec, u32), Failure> {
    let mut spec = load_spec(&args.spec)?;
    if let Some(m) = args.mode {
        spec.mode = match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Numeric => Mode::Numeric,
        };
    }
    let order = args.order.unwrap_or(spec.max_order);
    if order == 0 {
        return Err(Failure::Validation("order must be at least 1".into()));
    }
    Ok((spec, order))
}

fn coeff(args: ProblemArgs) -> Result<(), Failure> {
    let (spec, order) = prepared_spec(&args)?;
    let coefficients = spec.coefficients(order, args.precision)?;
    let out = CoeffOutput {
        mode: spec.mode,
        order,
        gammas: &spec.gammas,
        coefficients,
    };
    emit(&out, args.out.as_deref())
}

fn eval(args: ProblemArgs) -> Result<(), Failure> {
    let (spec, order) = prepared_spec(&args)?;
    let rows = spec.evaluate(order, args.precision)?;
    let out = EvalOutput {
        order,
        precision: args.precision.max(53),
        radius: spec.radius(),
        gammas: &spec.gammas,
        rows,
    };
    emit(&out, args.out.as_deref())
}

fn parse_scalar(text: &str) -> Result<Scalar, Failure> {
    if let Ok(q) = parse_rational(text) {
        return Ok(Scalar::Rational(q));
    }
    text.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .map(Scalar::real)
        .ok_or_else(|| Failure::Validation(format!("not a number: {text}")))
}

fn integrality_report(
    spec: Option<&ProblemSpec>,
    order: Option<u32>,
) -> Result<IdentityReport, Failure> {
    let Some(spec) = spec else {
        return Ok(verify::integrality_sweep(2, 3, order.unwrap_or(6))?);
    };
    let order = order.unwrap_or(spec.max_order);
    verify::integer_gammas(&spec.gammas)?;
    let shown: Vec<String> = spec.gammas.iter().map(ToString::to_string).collect();
    let mut report = IdentityReport::new(
        "integrality",
        format!("gamma=({}) sum n<={order}", shown.join(",")),
    );
    for n in MultiIndex::graded(spec.gammas.len(), order) {
        report.absorb(verify::integrality_check(&n, &spec.gammas)?);
    }
    Ok(report)
}

fn transform_report(
    spec: Option<&ProblemSpec>,
    order: Option<u32>,
    beta2: &str,
) -> Result<IdentityReport, Failure> {
    let order = order.unwrap_or(4);
    let cases = match spec {
        None => verify::standard_transform_cases(order),
        Some(spec) => {
            let BaseSpec::TwoTerm { twoterm } = &spec.base else {
                return Err(Failure::Validation(
                    "transform needs a two-term base in the spec".into(),
                ));
            };
            vec![TransformCase {
                gammas: spec.gammas.clone(),
                b: twoterm.b.clone(),
                beta1: twoterm.beta.clone(),
                beta2: parse_scalar(beta2)?,
                alpha1: twoterm.alpha,
                alpha2: None,
                order,
            }]
        }
    };
    let mut report = IdentityReport::new(
        "transform",
        format!("{} cases, sum n<={order}", cases.len()),
    );
    for case in &cases {
        report.absorb(verify::transform_check(case, 1e-9)?);
    }
    Ok(report)
}

fn consistency_report(order: Option<u32>, seed: u64) -> Result<IdentityReport, Failure> {
    let order = order.unwrap_or(5);
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let mut report = IdentityReport::new(
        "theorem-main-consistency",
        format!("d<=3 sum n<={order}, seed {seed}"),
    );
    report.absorb(prefixed(verify::check_closed_form_exact(3, order, seed)?));
    report.absorb(prefixed(verify::check_twoterm_consistency(
        &[q(2, 1), q(3, 1), q(5, 2)],
        3,
        order,
        seed,
    )?));
    Ok(report)
}

/// Tags every instance and the counterexample with the identity name, for
/// merged reports.
fn prefixed(mut r: IdentityReport) -> IdentityReport {
    for inst in &mut r.instances {
        inst.params = format!("{}: {}", r.identity, inst.params);
    }
    if let Some(c) = &mut r.counterexample {
        *c = format!("{}: {c}", r.identity);
    }
    r
}

fn run_selector(
    sel: Selector,
    args: &VerifyArgs,
    spec: Option<&ProblemSpec>,
) -> Result<IdentityReport, Failure> {
    let seed = args.seed;
    Ok(match sel {
        Selector::Fprod => verify::check_f_prod_range(args.m.unwrap_or(5))?,
        Selector::Nu => verify::check_nu_range(args.n.unwrap_or(5))?,
        Selector::Derivset => verify::check_deriv_set(args.m.unwrap_or(4), 10, seed)?,
        Selector::Newton => verify::check_newton_series(args.n.unwrap_or(6), 5, seed)?,
        Selector::Vandermonde => verify::check_vandermonde(args.n.unwrap_or(8) as u32, 5, seed)?,
        Selector::Integrality => integrality_report(spec, args.order)?,
        Selector::Transform => transform_report(spec, args.order, &args.beta2)?,
        Selector::TheoremMainConsistency => consistency_report(args.order, seed)?,
        Selector::All => {
            let parts = [
                Selector::Fprod,
                Selector::Nu,
                Selector::Derivset,
                Selector::Newton,
                Selector::Vandermonde,
                Selector::Integrality,
                Selector::Transform,
                Selector::TheoremMainConsistency,
            ];
            let mut ranges = Vec::new();
            let mut all = IdentityReport::new("all", "");
            for p in parts {
                let r = run_selector(p, args, spec)?;
                eprintln!("{r}");
                ranges.push(format!("{} [{}]", r.identity, r.range));
                all.absorb(prefixed(r));
            }
            all.range = ranges.join("; ");
            all
        }
    })
}

fn verify_cmd(args: VerifyArgs) -> Result<(), Failure> {
    let spec = args.spec.as_deref().map(load_spec).transpose()?;
    let report = run_selector(args.selector, &args, spec.as_ref())?;
    if args.selector != Selector::All {
        eprintln!("{report}");
    }
    emit(&report, args.out.as_deref())?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
