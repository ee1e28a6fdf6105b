//! Command-line driver for the hierarchy bounds library.
//!
//! Subcommands:
//!
//! - `bound`: one hierarchy over a level range, CSV or JSON rows.
//! - `dkhl`: the weighted hierarchy, with its minimizing subset per level.
//! - `compare`: all four bound families side by side.
//! - `rate`: rows plus a least-squares fit of `log gap` against `log d`.
//! - `roots`: Jacobi roots and the closed-form extremal-root enclosure.
//! - `certify`: re-integrates stored density certificates and verdicts them.
//!
//! CSV rows follow the schema `d,hierarchy,value,gap,wall_time_ms` with
//! values printed as `{:.14e}`; the gap column is empty when no reference
//! minimum is involved. `--timing zero` pins the timing column to zero so
//! repeated runs are byte-identical.
//!
//! Exit codes: 0 success, 1 failed certification, 2 bad input, 3 numeric
//! failure, 4 resource limit.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use boxbound::{
    certificate_check, dkhl_bound, extremal_root_bounds, grid_bound, lasserre_bound,
    minimize_on_box, rate_fit, roots, BoundResult, Error, GridKind, Hierarchy, JacobiParams,
    ProductJacobiMeasure, SparsePolynomial,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "boxbound",
    version,
    about = "Measure-based bounds for box minima"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one bound family over a range of levels.
    Bound(BoundArgs),
    /// Compute the weighted hierarchy, reporting the minimizing subset.
    Dkhl(DkhlArgs),
    /// Run every bound family over the same levels.
    Compare(CompareArgs),
    /// Fit the decay rate of the gap against an interior reference minimum.
    Rate(RateArgs),
    /// Roots of a Jacobi polynomial and the extremal-root enclosure.
    Roots(RootsArgs),
    /// Check stored certificates against a polynomial and measure.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct PolyArgs {
    /// Polynomial in the variables x1..xn, e.g. "x1^2 - 2*x1*x2".
    #[arg(long)]
    poly: String,
    /// Number of variables; inferred from the largest index when omitted.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Jacobi exponent pairs "a1,b1;...;an,bn" (one pair broadcasts).
    /// Defaults to the Chebyshev measure on every axis.
    #[arg(long)]
    measure: Option<String>,
    /// Positive factor multiplying the reference weight.
    #[arg(long, default_value_t = 1.0)]
    scaling: f64,
}

#[derive(Args)]
struct RangeArgs {
    /// First hierarchy level.
    #[arg(long, default_value_t = 1)]
    d_min: usize,
    /// Last hierarchy level (defaults to --d-min).
    #[arg(long)]
    d_max: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format for stdout (or --out).
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// "zero" pins the wall-time column for reproducible output.
    #[arg(long, value_enum, default_value_t = Timing::Real)]
    timing: Timing,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Bound family to evaluate.
    #[arg(long, value_enum, default_value_t = HierarchyArg::Lasserre)]
    hierarchy: HierarchyArg,
    /// Write the density certificates (JSON array of results) to a file.
    #[arg(long)]
    cert_out: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DkhlArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Largest variable count before the subset scan is refused.
    #[arg(long, default_value_t = 6)]
    variable_cap: usize,
    /// Write the density certificates (JSON array of results) to a file.
    #[arg(long)]
    cert_out: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    #[command(flatten)]
    range: RangeArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Bound family whose gap decay is fitted.
    #[arg(long, value_enum, default_value_t = HierarchyArg::Lasserre)]
    hierarchy: HierarchyArg,
    /// Seed for the reference minimizer's random starts.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RootsArgs {
    /// Jacobi exponent alpha (> -1).
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Jacobi exponent beta (> -1).
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Polynomial degree.
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CertifyArgs {
    /// JSON file holding one result or an array, as written by --cert-out.
    #[arg(long)]
    certificate: String,
    #[command(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    /// Largest tolerated mass and objective error.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Timing {
    Real,
    Zero,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HierarchyArg {
    Lasserre,
    Dkhl,
    GridLobatto,
    GridRegular,
}

impl HierarchyArg {
    fn hierarchy(self) -> Hierarchy {
        match self {
            HierarchyArg::Lasserre => Hierarchy::Lasserre,
            HierarchyArg::Dkhl => Hierarchy::Dkhl,
            HierarchyArg::GridLobatto => Hierarchy::GridLobatto,
            HierarchyArg::GridRegular => Hierarchy::GridRegular,
        }
    }
}

/// One report line; `gap` is present only when a reference minimum exists,
/// `minimizing_subset` only for the weighted hierarchy.
#[derive(Clone, Serialize)]
struct Row {
    d: usize,
    hierarchy: String,
    value: f64,
    gap: Option<f64>,
    wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimizing_subset: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct RowsReport {
    rows: Vec<Row>,
}

#[derive(Serialize)]
struct RateReport {
    rows: Vec<Row>,
    reference: f64,
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

#[derive(Serialize)]
struct RootsReport {
    alpha: f64,
    beta: f64,
    k: usize,
    roots: Vec<f64>,
    enclosure: Option<Enclosure>,
}

#[derive(Serialize)]
struct Enclosure {
    lower: f64,
    upper: f64,
}

#[derive(Serialize)]
struct CertifyCheck {
    d: usize,
    hierarchy: String,
    claimed: f64,
    mass_error: f64,
    objective_error: f64,
    pass: bool,
}

#[derive(Serialize)]
struct CertifyReport {
    checks: Vec<CertifyCheck>,
    tol: f64,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound(args) => run_bound(args),
        Command::Dkhl(args) => run_dkhl(args),
        Command::Compare(args) => run_compare(args),
        Command::Rate(args) => run_rate(args),
        Command::Roots(args) => run_roots(args),
        Command::Certify(args) => run_certify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::InvalidArgument(_) | Error::Parse { .. } => 2,
                Error::NumericFailure(_) => 3,
                Error::ResourceLimit(_) => 4,
            };
            ExitCode::from(code)
        }
    }
}

/// Largest variable index mentioned in the text, so `--n` can be omitted.
fn infer_n(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let mut j = i + 1;
            let mut value = 0usize;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                value = value.saturating_mul(10) + (bytes[j] - b'0') as usize;
                j += 1;
            }
            if j > i + 1 {
                best = best.max(value);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best.max(1)
}

fn parse_poly(args: &PolyArgs) -> Result<SparsePolynomial, Error> {
    let n = args.n.unwrap_or_else(|| infer_n(&args.poly));
    SparsePolynomial::parse(&args.poly, n)
}

/// Builds the measure from "a1,b1;...;an,bn"; a single pair broadcasts to
/// every axis, and no spec at all means Chebyshev throughout.
fn parse_measure(args: &MeasureArgs, n: usize) -> Result<ProductJacobiMeasure, Error> {
    let params = match args.measure.as_deref() {
        None => vec![JacobiParams::chebyshev_first(); n],
        Some(spec) => {
            let mut pairs = Vec::new();
            for segment in spec.split(';') {
                let mut numbers = segment.split(',');
                let (Some(alpha), Some(beta), None) =
                    (numbers.next(), numbers.next(), numbers.next())
                else {
                    return Err(Error::InvalidArgument(format!(
                        "measure segment \"{segment}\" is not an \"alpha,beta\" pair"
                    )));
                };
                let alpha: f64 = alpha.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("cannot parse alpha in \"{segment}\""))
                })?;
                let beta: f64 = beta.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("cannot parse beta in \"{segment}\""))
                })?;
                pairs.push(JacobiParams::new(alpha, beta)?);
            }
            if pairs.len() == 1 && n > 1 {
                vec![pairs[0]; n]
            } else if pairs.len() == n {
                pairs
            } else {
                return Err(Error::InvalidArgument(format!(
                    "measure lists {} pairs for {n} variables",
                    pairs.len()
                )));
            }
        }
    };
    ProductJacobiMeasure::new(params, args.scaling)
}

fn is_default_measure(args: &MeasureArgs) -> bool {
    args.measure.is_none() && args.scaling == 1.0
}

fn levels(range: &RangeArgs) -> Result<Vec<usize>, Error> {
    let d_max = range.d_max.unwrap_or(range.d_min);
    if range.d_min == 0 {
        return Err(Error::InvalidArgument("levels start at d = 1".into()));
    }
    if d_max < range.d_min {
        return Err(Error::InvalidArgument(format!(
            "--d-max {d_max} is below --d-min {}",
            range.d_min
        )));
    }
    Ok((range.d_min..=d_max).collect())
}

fn elapsed_ms(start: Instant, timing: Timing) -> f64 {
    match timing {
        Timing::Real => start.elapsed().as_secs_f64() * 1e3,
        Timing::Zero => 0.0,
    }
}

/// Evaluates one family at one level. The measure only drives the plain
/// hierarchy; the weighted hierarchy and the grids are measure-free.
fn evaluate_level(
    f: &SparsePolynomial,
    mu: &ProductJacobiMeasure,
    d: usize,
    hierarchy: Hierarchy,
    timing: Timing,
    with_certificate: bool,
) -> Result<(Row, Option<BoundResult>), Error> {
    let start = Instant::now();
    let (result, subset) = match hierarchy {
        Hierarchy::Lasserre => (lasserre_bound(f, mu, d, with_certificate)?, None),
        Hierarchy::Dkhl => {
            let outcome = dkhl_bound(f, d, with_certificate)?;
            (outcome.bound, Some(outcome.minimizing_subset))
        }
        Hierarchy::GridLobatto => (grid_bound(f, d, GridKind::Lobatto)?, None),
        Hierarchy::GridRegular => (grid_bound(f, d, GridKind::Regular)?, None),
    };
    let row = Row {
        d,
        hierarchy: hierarchy.to_string(),
        value: result.value,
        gap: None,
        wall_time_ms: elapsed_ms(start, timing),
        minimizing_subset: subset,
    };
    let kept = if with_certificate { Some(result) } else { None };
    Ok((row, kept))
}

fn rows_to_csv(rows: &[Row]) -> String {
    let mut text = String::from("d,hierarchy,value,gap,wall_time_ms\n");
    for row in rows {
        let gap = row.gap.map(|g| format!("{g:.14e}")).unwrap_or_default();
        writeln!(
            text,
            "{},{},{:.14e},{},{:.3}",
            row.d, row.hierarchy, row.value, gap, row.wall_time_ms
        )
        .expect("writing to a string cannot fail");
    }
    text
}

fn to_json<T: Serialize>(report: &T) -> Result<String, Error> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|err| Error::NumericFailure(format!("serialization failed: {err}")))?;
    text.push('\n');
    Ok(text)
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Error> {
    match &output.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|err| Error::InvalidArgument(format!("cannot write {path}: {err}"))),
    }
}

fn write_certificates(path: &str, results: &[BoundResult]) -> Result<(), Error> {
    let text = to_json(&results)?;
    fs::write(path, text)
        .map_err(|err| Error::InvalidArgument(format!("cannot write {path}: {err}")))
}

fn emit_rows(output: &OutputArgs, rows: Vec<Row>) -> Result<(), Error> {
    let text = match output.format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => to_json(&RowsReport { rows })?,
    };
    emit(output, &text)
}

fn run_bound(args: BoundArgs) -> Result<ExitCode, Error> {
    let hierarchy = args.hierarchy.hierarchy();
    if hierarchy != Hierarchy::Lasserre && !is_default_measure(&args.measure) {
        return Err(Error::InvalidArgument(format!(
            "the {hierarchy} family ignores --measure/--scaling; drop them or use lasserre"
        )));
    }
    if args.cert_out.is_some() && !matches!(hierarchy, Hierarchy::Lasserre | Hierarchy::Dkhl) {
        return Err(Error::InvalidArgument(
            "grid families carry no density certificates".into(),
        ));
    }
    let f = parse_poly(&args.poly)?;
    let mu = parse_measure(&args.measure, f.n())?;
    let want_certificates = args.cert_out.is_some();
    let pairs: Vec<(Row, Option<BoundResult>)> = levels(&args.range)?
        .par_iter()
        .map(|&d| evaluate_level(&f, &mu, d, hierarchy, args.output.timing, want_certificates))
        .collect::<Result<_, _>>()?;
    let (rows, results): (Vec<Row>, Vec<Option<BoundResult>>) = pairs.into_iter().unzip();
    if let Some(path) = &args.cert_out {
        let results: Vec<BoundResult> = results.into_iter().flatten().collect();
        write_certificates(path, &results)?;
    }
    emit_rows(&args.output, rows)?;
    Ok(ExitCode::SUCCESS)
}

fn run_dkhl(args: DkhlArgs) -> Result<ExitCode, Error> {
    let f = parse_poly(&args.poly)?;
    let want_certificates = args.cert_out.is_some();
    let pairs: Vec<(Row, Option<BoundResult>)> = levels(&args.range)?
        .par_iter()
        .map(|&d| {
            let start = Instant::now();
            let outcome = boxbound::dkhl_bound_capped(&f, d, want_certificates, args.variable_cap)?;
            let row = Row {
                d,
                hierarchy: Hierarchy::Dkhl.to_string(),
                value: outcome.bound.value,
                gap: None,
                wall_time_ms: elapsed_ms(start, args.output.timing),
                minimizing_subset: Some(outcome.minimizing_subset),
            };
            let kept = want_certificates.then_some(outcome.bound);
            Ok((row, kept))
        })
        .collect::<Result<_, Error>>()?;
    let (rows, results): (Vec<Row>, Vec<Option<BoundResult>>) = pairs.into_iter().unzip();
    if let Some(path) = &args.cert_out {
        let results: Vec<BoundResult> = results.into_iter().flatten().collect();
        write_certificates(path, &results)?;
    }
    emit_rows(&args.output, rows)?;
    Ok(ExitCode::SUCCESS)
}

fn run_compare(args: CompareArgs) -> Result<ExitCode, Error> {
    let f = parse_poly(&args.poly)?;
    let mu = parse_measure(&args.measure, f.n())?;
    let levels = levels(&args.range)?;
    let mut rows = Vec::new();
    for hierarchy in [
        Hierarchy::Lasserre,
        Hierarchy::Dkhl,
        Hierarchy::GridLobatto,
        Hierarchy::GridRegular,
    ] {
        let family: Result<Vec<(Row, Option<BoundResult>)>, Error> = levels
            .par_iter()
            .map(|&d| evaluate_level(&f, &mu, d, hierarchy, args.output.timing, false))
            .collect();
        match family {
            Ok(pairs) => rows.extend(pairs.into_iter().map(|(row, _)| row)),
            // Families with tighter dimension caps bow out of the
            // comparison instead of failing it.
            Err(Error::ResourceLimit(reason)) => {
                eprintln!("note: skipping {hierarchy}: {reason}");
            }
            Err(other) => return Err(other),
        }
    }
    emit_rows(&args.output, rows)?;
    Ok(ExitCode::SUCCESS)
}

fn run_rate(args: RateArgs) -> Result<ExitCode, Error> {
    let hierarchy = args.hierarchy.hierarchy();
    if hierarchy != Hierarchy::Lasserre && !is_default_measure(&args.measure) {
        return Err(Error::InvalidArgument(format!(
            "the {hierarchy} family ignores --measure/--scaling; drop them or use lasserre"
        )));
    }
    let f = parse_poly(&args.poly)?;
    let mu = parse_measure(&args.measure, f.n())?;
    let reference = minimize_on_box(&f, args.seed)?;
    let levels = levels(&args.range)?;
    let mut rows: Vec<Row> = levels
        .par_iter()
        .map(|&d| {
            evaluate_level(&f, &mu, d, hierarchy, args.output.timing, false).map(|(row, _)| row)
        })
        .collect::<Result<_, _>>()?;
    for row in rows.iter_mut() {
        row.gap = Some(row.value - reference.value);
    }
    let gaps: Vec<f64> = rows.iter().map(|row| row.gap.unwrap_or(0.0)).collect();
    let fit = rate_fit(&levels, &gaps)?;
    match args.output.format {
        Format::Csv => {
            emit(&args.output, &rows_to_csv(&rows))?;
            // The fit goes to stderr so the CSV stays schema-clean.
            eprintln!(
                "rate: reference={:.14e} slope={:.6} intercept={:.6} r_squared={:.6}",
                reference.value, fit.slope, fit.intercept, fit.r_squared
            );
        }
        Format::Json => {
            let report = RateReport {
                rows,
                reference: reference.value,
                slope: fit.slope,
                intercept: fit.intercept,
                r_squared: fit.r_squared,
            };
            emit(&args.output, &to_json(&report)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_roots(args: RootsArgs) -> Result<ExitCode, Error> {
    let params = JacobiParams::new(args.alpha, args.beta)?;
    let roots = roots(&params, args.k)?;
    let enclosure = if args.k >= 2 {
        let bounds = extremal_root_bounds(&params, args.k)?;
        Some(Enclosure {
            lower: bounds.lower,
            upper: bounds.upper,
        })
    } else {
        None
    };
    match args.output.format {
        Format::Csv => {
            let mut text = String::from("index,root\n");
            for (index, root) in roots.iter().enumerate() {
                writeln!(text, "{index},{root:.14e}").expect("writing to a string cannot fail");
            }
            emit(&args.output, &text)?;
            if let Some(enclosure) = enclosure {
                eprintln!(
                    "enclosure: {:.14e} <= smallest root <= {:.14e}",
                    enclosure.lower, enclosure.upper
                );
            }
        }
        Format::Json => {
            let report = RootsReport {
                alpha: args.alpha,
                beta: args.beta,
                k: args.k,
                roots,
                enclosure,
            };
            emit(&args.output, &to_json(&report)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_certify(args: CertifyArgs) -> Result<ExitCode, Error> {
    let f = parse_poly(&args.poly)?;
    let mu = parse_measure(&args.measure, f.n())?;
    let text = fs::read_to_string(&args.certificate).map_err(|err| {
        Error::InvalidArgument(format!("cannot read {}: {err}", args.certificate))
    })?;
    let results: Vec<BoundResult> = match serde_json::from_str(&text) {
        Ok(results) => results,
        Err(_) => {
            let single: BoundResult = serde_json::from_str(&text).map_err(|err| Error::Parse {
                position: 0,
                message: format!("bad certificate file: {err}"),
            })?;
            vec![single]
        }
    };
    if results.is_empty() {
        return Err(Error::InvalidArgument(
            "certificate file holds no results".into(),
        ));
    }
    let chebyshev = ProductJacobiMeasure::chebyshev(f.n())?;
    let mut checks = Vec::with_capacity(results.len());
    for result in &results {
        let certificate = result.certificate.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!("level {} result has no certificate", result.degree))
        })?;
        // The weighted hierarchy is defined against the Chebyshev measure;
        // --measure only applies to plain results.
        let measure = match result.hierarchy {
            Hierarchy::Lasserre => &mu,
            Hierarchy::Dkhl => &chebyshev,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "{other} results carry no certificates"
                )))
            }
        };
        let report = certificate_check(certificate, &f, measure, result.value)?;
        checks.push(CertifyCheck {
            d: result.degree,
            hierarchy: result.hierarchy.to_string(),
            claimed: result.value,
            mass_error: report.mass_error,
            objective_error: report.objective_error,
            pass: report.mass_error <= args.tol && report.objective_error <= args.tol,
        });
    }
    let pass = checks.iter().all(|check| check.pass);
    match args.output.format {
        Format::Csv => {
            let mut text = String::from("d,hierarchy,claimed,mass_error,objective_error,verdict\n");
            for check in &checks {
                writeln!(
                    text,
                    "{},{},{:.14e},{:.3e},{:.3e},{}",
                    check.d,
                    check.hierarchy,
                    check.claimed,
                    check.mass_error,
                    check.objective_error,
                    if check.pass { "PASS" } else { "FAIL" }
                )
                .expect("writing to a string cannot fail");
            }
            emit(&args.output, &text)?;
        }
        Format::Json => {
            let report = CertifyReport {
                checks,
                tol: args.tol,
                pass,
            };
            emit(&args.output, &to_json(&report)?)?;
        }
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
