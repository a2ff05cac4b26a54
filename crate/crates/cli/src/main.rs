//! `fnk`: evaluate, check and solve n-dimensional fuzzy negations and
//! automorphisms from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fnk_core::fuzzyset::SetFormat;
use fnk_core::ndim_automorphism::{strict_conjugation_gap, trillas_roundtrip};
use fnk_core::simplex::{format_significant, simplex_point_count};
use fnk_core::unit_negation::EquilibriumKind;
use fnk_core::verify::{self, gen_negation, GenKind, PAIR_CAP};
use fnk_core::{
    Error, NDFuzzySet, NDInterval, NDimAutomorphism, NDimNegation, PropertyReport, SuiteConfig, UnitNegation,
};

const DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "fnk", version, about = "n-dimensional fuzzy negations: evaluation, deciders and theorem suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a negation or automorphism at one point of L_n.
    Eval(EvalArgs),
    /// Run property deciders on a negation or automorphism.
    Check(CheckArgs),
    /// Run a named theorem suite.
    Theorems(TheoremArgs),
    /// Locate the equilibrium point of a negation.
    Equilibrium(EquilibriumArgs),
    /// Complement every membership of a fuzzy set.
    Complement(ComplementArgs),
    /// Describe the simplex grid for (n, m).
    GridInfo(GridArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Expression sources: inline JSON, `@path`, or `gen:<kind>` (seeded by `--seed`).
#[derive(Args)]
struct Expr {
    #[arg(long)]
    neg: Option<String>,
    #[arg(long)]
    auto: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    expr: Expr,
    /// Comma-separated nondecreasing tuple, or `/v/:n` for a degenerate point.
    #[arg(long)]
    point: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    expr: Expr,
    /// Comma-separated property ids; defaults depend on the expression type.
    #[arg(long, value_delimiter = ',')]
    props: Vec<String>,
    /// Dimension for lifted unit negations and generated expressions.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Override the grid resolution of every selected property.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TheoremArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Dimensions, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3])]
    n: Vec<usize>,
    /// Resolution of pair-quadratic checks.
    #[arg(long, default_value_t = verify::M_PAIR)]
    m: usize,
    /// Resolution of pointwise checks.
    #[arg(long, default_value_t = verify::M_POINT)]
    m_point: usize,
    #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Zero all timing fields so identical runs produce identical bytes.
    #[arg(long)]
    redact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct EquilibriumArgs {
    #[arg(long)]
    neg: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = fnk_core::solve::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ComplementArgs {
    /// Input fuzzy set (`.json` or CSV).
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    neg: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; defaults to the output (else input) file extension.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Failure with a stable process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Argument(_) | Error::Parse(_) | Error::Ingestion(_) => 2,
            Error::Domain(_) | Error::Precondition(_) => 3,
            Error::Io(_) => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 4, message: format!("{}: {e}", path.display()) }
}

type CliResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    let outcome = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Check(a) => check(a),
        Command::Theorems(a) => theorems(a),
        Command::Equilibrium(a) => equilibrium(a),
        Command::Complement(a) => complement(a),
        Command::GridInfo(a) => grid_info(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FNK_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("FNK_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

/// Inline JSON, or the contents of `@path`.
fn read_source(source: &str) -> Result<String, Failure> {
    match source.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| io_failure(Path::new(path), e)),
        None => Ok(source.to_string()),
    }
}

/// Resolves a negation; a unit negation is lifted to `Ñ` of dimension `n`.
fn load_negation(source: &str, n: usize, seed: u64) -> Result<NDimNegation, Failure> {
    if let Some(kind) = source.strip_prefix("gen:") {
        let kind: GenKind = kind.parse()?;
        return Ok(gen_negation(seed, kind, n)?);
    }
    let text = read_source(source)?;
    match NDimNegation::from_json(&text) {
        Ok(neg) => Ok(neg),
        Err(nd_err) => match UnitNegation::from_json(&text) {
            Ok(unit) => Ok(NDimNegation::tilde(unit, n)?),
            Err(_) => Err(nd_err.into()),
        },
    }
}

fn load_automorphism(source: &str, n: usize, seed: u64) -> Result<NDimAutomorphism, Failure> {
    if let Some(kind) = source.strip_prefix("gen:") {
        if kind != "random" {
            return Err(usage(format!("automorphisms can only be generated with gen:random, got gen:{kind}")));
        }
        let mut rng = verify::gen::rng(seed);
        return Ok(NDimAutomorphism::from_unit(verify::gen::random_automorphism(&mut rng), n)?);
    }
    let text = read_source(source)?;
    match NDimAutomorphism::from_json(&text) {
        Ok(a) => Ok(a),
        Err(nd_err) => match fnk_core::UnitAutomorphism::from_json(&text) {
            Ok(unit) => Ok(NDimAutomorphism::from_unit(unit, n)?),
            Err(_) => Err(nd_err.into()),
        },
    }
}

enum Subject {
    Neg(NDimNegation),
    Auto(NDimAutomorphism),
}

fn load_subject(expr: &Expr, n: usize, seed: u64) -> Result<Subject, Failure> {
    match (&expr.neg, &expr.auto) {
        (Some(s), None) => Ok(Subject::Neg(load_negation(s, n, seed)?)),
        (None, Some(s)) => Ok(Subject::Auto(load_automorphism(s, n, seed)?)),
        _ => Err(usage("exactly one of --neg or --auto is required")),
    }
}

fn format_tuple(values: &[f64]) -> String {
    values.iter().map(|v| format_significant(*v, DIGITS)).collect::<Vec<_>>().join(",")
}

fn format_point(p: &NDInterval<f64>) -> String {
    if p.is_degenerate() {
        format!("/{}/", format_significant(p.values()[0], DIGITS))
    } else {
        format_tuple(p.values())
    }
}

fn eval(a: EvalArgs) -> CliResult {
    let x: NDInterval<f64> = a.point.parse()?;
    let y = match load_subject(&a.expr, x.dim(), a.seed)? {
        Subject::Neg(neg) => neg.eval(&x)?,
        Subject::Auto(phi) => phi.eval(&x)?,
    };
    match a.format {
        Format::Text | Format::Csv => println!("{}", format_tuple(y.values())),
        Format::Json => println!("{}", json!({"input": x, "output": y})),
    }
    Ok(true)
}

const NEG_PROPS: &[&str] = &[
    "axioms",
    "subset_monotone",
    "monotone_by_part",
    "representable",
    "strong",
    "strict",
    "dp",
    "induced_equal",
    "equals_tilde",
    "no_degenerate_image",
    "lattice_duality",
    "trillas",
    "strict_gap",
    "continuity",
];
const AUTO_PROPS: &[&str] = &["boundary", "order_isomorphism", "inverse_roundtrip", "continuity"];

fn neg_property(neg: &NDimNegation, prop: &str, m: Option<usize>) -> Result<PropertyReport, Failure> {
    let pair = m.unwrap_or(verify::M_PAIR);
    let point = m.unwrap_or(verify::M_POINT);
    Ok(match prop {
        "axioms" => neg.check_nd_axioms(point),
        "subset_monotone" => neg.is_subset_monotone(pair),
        "monotone_by_part" => neg.is_monotone_by_part(pair),
        "representable" => neg.decide_representability(pair).to_report(),
        "strong" => neg.is_strong_nd(point),
        "strict" => neg.is_strict_nd(pair),
        "dp" => neg.check_dp(point),
        "induced_equal" => neg.check_induced_equal(point),
        "equals_tilde" => neg.check_equals_tilde_induced(point),
        "no_degenerate_image" => precondition_report(prop, neg.dim(), point, neg.no_degenerate_image(point))?,
        "lattice_duality" => precondition_report(prop, neg.dim(), pair, neg.lattice_duality(pair))?,
        "trillas" => precondition_report(prop, neg.dim(), pair, trillas_roundtrip(neg, pair))?,
        "strict_gap" => precondition_report(prop, neg.dim(), pair, strict_conjugation_gap(neg, pair))?,
        "continuity" => neg.discontinuity(m.unwrap_or(fnk_core::ndim_negation::continuity_base(neg.dim(), pair)), 3),
        other => {
            return Err(usage(format!(
                "unknown property '{other}' for a negation (expected one of {})",
                NEG_PROPS.join(", ")
            )))
        }
    })
}

/// A failed precondition is a failing property, not a process error.
fn precondition_report(
    prop: &str,
    n: usize,
    m: usize,
    r: fnk_core::Result<PropertyReport>,
) -> Result<PropertyReport, Failure> {
    match r {
        Ok(r) => Ok(r),
        Err(Error::Precondition(msg)) => {
            Ok(PropertyReport::new(format!("nd.{prop}"), n, m, 0.0).fail(json!({"precondition": msg})))
        }
        Err(e) => Err(e.into()),
    }
}

fn auto_property(phi: &NDimAutomorphism, prop: &str, m: Option<usize>) -> Result<PropertyReport, Failure> {
    Ok(match prop {
        "boundary" => phi.check_boundary(),
        "order_isomorphism" => phi.check_order_isomorphism(m.unwrap_or(verify::M_PAIR)),
        "inverse_roundtrip" => phi.check_inverse_roundtrip(m.unwrap_or(verify::M_POINT)),
        "continuity" => phi.discontinuity(m.unwrap_or(verify::M_PAIR), 3),
        other => {
            return Err(usage(format!(
                "unknown property '{other}' for an automorphism (expected one of {})",
                AUTO_PROPS.join(", ")
            )))
        }
    })
}

fn check(a: CheckArgs) -> CliResult {
    if let Some(m) = a.m {
        if m < 2 {
            return Err(usage("--m must be at least 2"));
        }
    }
    let subject = load_subject(&a.expr, a.n, a.seed)?;
    let (known, defaults): (&[&str], &[&str]) = match subject {
        Subject::Neg(_) => (NEG_PROPS, &["axioms", "representable", "strong", "dp"]),
        Subject::Auto(_) => (AUTO_PROPS, AUTO_PROPS),
    };
    let props: Vec<String> = if a.props.is_empty() {
        defaults.iter().map(|s| s.to_string()).collect()
    } else {
        a.props.iter().map(|s| s.trim().to_string()).collect()
    };
    if let Some(bad) = props.iter().find(|p| !known.contains(&p.as_str())) {
        return Err(usage(format!("unknown property '{bad}' (expected one of {})", known.join(", "))));
    }
    let reports = props
        .iter()
        .map(|p| match &subject {
            Subject::Neg(neg) => neg_property(neg, p, a.m),
            Subject::Auto(phi) => auto_property(phi, p, a.m),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(PropertyReport::passed);
    let payload = serde_json::to_string_pretty(&json!({
        "schema": verify::REPORT_SCHEMA,
        "passed": passed,
        "reports": reports,
    }))
    .expect("reports serialize");
    if let Some(out) = &a.out {
        fs::write(out, &payload).map_err(|e| io_failure(out, e))?;
    }
    match a.format {
        Format::Json => println!("{payload}"),
        Format::Csv => print!("{}", reports_csv(&reports)),
        Format::Text => {
            for r in &reports {
                println!("{}", report_line(r));
            }
            println!("{} of {} properties passed", reports.iter().filter(|r| r.passed()).count(), reports.len());
        }
    }
    Ok(passed)
}

fn report_line(r: &PropertyReport) -> String {
    let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
    let mut line = format!(
        "{:<14} {}  pairs={} max_error={}",
        verdict.as_str().unwrap_or_default().to_uppercase(),
        r.property_id,
        r.pairs_tested,
        format_significant(r.max_error, 3)
    );
    if let Some(w) = &r.witness {
        line.push_str(&format!("  witness={w}"));
    }
    line
}

fn reports_csv(reports: &[PropertyReport]) -> String {
    let mut s = String::from("property_id,verdict,pairs_tested,max_error,tolerance,n,m\n");
    for r in reports {
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.property_id,
            verdict.as_str().unwrap_or_default(),
            r.pairs_tested,
            r.max_error,
            r.tolerance,
            r.grid.n,
            r.grid.m
        ));
    }
    s
}

fn theorems(a: TheoremArgs) -> CliResult {
    let config = SuiteConfig {
        n: a.n,
        m_pair: a.m,
        m_point: a.m_point,
        trials: a.trials,
        seed: a.seed,
    };
    let mut report = verify::run_suite(&a.suite, &config)?;
    if a.redact {
        report = report.redacted();
    }
    let payload = report.to_json();
    if let Some(out) = &a.out {
        fs::write(out, &payload).map_err(|e| io_failure(out, e))?;
    }
    match a.format {
        Format::Json => println!("{payload}"),
        Format::Csv => print!("{}", reports_csv(&report.reports)),
        Format::Text => {
            for r in &report.reports {
                println!("{}", report_line(r));
            }
            println!(
                "suite {}: {} of {} properties passed",
                report.suite,
                report.reports.iter().filter(|r| r.passed()).count(),
                report.reports.len()
            );
        }
    }
    Ok(report.passed)
}

fn equilibrium(a: EquilibriumArgs) -> CliResult {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage("--tol must be positive"));
    }
    let neg = load_negation(&a.neg, a.n, a.seed)?;
    let r = neg.nd_equilibrium(a.tol);
    let text = match &r.kind {
        EquilibriumKind::Point(p) => format_point(p),
        EquilibriumKind::None => "none".to_string(),
        EquilibriumKind::Undetermined => "undetermined".to_string(),
    };
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&r).expect("results serialize")),
        Format::Csv => {
            let point = r.point().map(|p| format_tuple(p.values())).unwrap_or_default();
            println!("kind,point,residual\n{},\"{}\",{}", kind_name(&r.kind), point, r.residual);
        }
        Format::Text => {
            println!("{text}");
            if let Some(d) = &r.diagnostic {
                eprintln!("note: {d}");
            }
        }
    }
    Ok(matches!(r.kind, EquilibriumKind::Point(_) | EquilibriumKind::None))
}

fn kind_name<P>(k: &EquilibriumKind<P>) -> &'static str {
    match k {
        EquilibriumKind::Point(_) => "point",
        EquilibriumKind::None => "none",
        EquilibriumKind::Undetermined => "undetermined",
    }
}

fn complement(a: ComplementArgs) -> CliResult {
    if !a.set.exists() {
        return Err(io_failure(&a.set, std::io::Error::from(std::io::ErrorKind::NotFound)));
    }
    let set = NDFuzzySet::load(&a.set, SetFormat::from_path(&a.set))?;
    let neg = load_negation(&a.neg, set.dim(), a.seed)?;
    let out_set = set.complement(&neg)?;
    let format = match a.format {
        Some(Format::Json) => SetFormat::Json,
        Some(Format::Csv) => SetFormat::Csv,
        Some(Format::Text) => return Err(usage("complement writes csv or json")),
        None => SetFormat::from_path(a.out.as_deref().unwrap_or(&a.set)),
    };
    let text = match format {
        SetFormat::Csv => out_set.to_csv_digits(DIGITS),
        SetFormat::Json => out_set.to_json() + "\n",
    };
    match &a.out {
        Some(out) => fs::write(out, text).map_err(|e| io_failure(out, e))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn grid_info(a: GridArgs) -> CliResult {
    if a.n == 0 || a.m < 2 {
        return Err(usage("grid-info needs n ≥ 1 and m ≥ 2"));
    }
    let points = simplex_point_count(a.n, a.m);
    let pairs = points * (points + 1) / 2;
    let sampled = pairs > PAIR_CAP as u128;
    let info: Value = json!({
        "n": a.n,
        "m": a.m,
        "points": points.to_string(),
        "pairs": pairs.to_string(),
        "pair_cap": PAIR_CAP,
        "pairs_subsampled": sampled,
    });
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&info).expect("json")),
        Format::Text => {
            println!("n={} m={}", a.n, a.m);
            println!("points={points}");
            println!("pairs={pairs}{}", if sampled { " (subsampled above cap)" } else { "" });
        }
        Format::Csv => {
            if points > 1_000_000 {
                return Err(usage(format!("refusing to list {points} points")));
            }
            let grid = fnk_core::SimplexGrid::<f64>::new(a.n, a.m)?;
            let header: Vec<String> = (1..=a.n).map(|i| format!("mu{i}")).collect();
            println!("{}", header.join(","));
            for p in grid.points() {
                println!("{}", p.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            }
        }
    }
    Ok(true)
}
