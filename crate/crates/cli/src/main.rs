//! `somos` — generate sequence families, take exact Hankel transforms, and
//! check or fit Somos recurrences.

mod io;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use somos_core::cfexpr::{self, expand_fixpoint, expand_quadratic};
use somos_core::conjectures::{
    self, conjecture_def, run_case, CaseReport, ConjectureCase, SweepReportDoc, Verdict,
};
use somos_core::exact::{parse_rational, poly_degree_cap, set_poly_degree_cap, Homogeneous,
    Rational};
use somos_core::hankel::hankel_transform;
use somos_core::somos::{somos_check, somos_fit, SomosRelation};

use io::{csv_document, header_line, read_homogeneous, Sink};

/// Marks a bad invocation (exit 2) as opposed to a domain failure (exit 1).
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(anyhow!(UsageError(msg.into())))
}

#[derive(Parser)]
#[command(
    name = "somos",
    version,
    about = "Exact sequences, Hankel transforms and Somos recurrences",
    after_help = "Data files hold one integer / rational / polynomial per line; \
                  `#` starts a comment. All arithmetic is exact."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Report,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Fixpoint,
    Quadratic,
}

#[derive(Args)]
struct OutputOpts {
    /// Write the primary output here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Suppress the `#` header line (the only line carrying a timestamp)
    #[arg(long)]
    no_header: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a built-in family to a sequence prefix
    Expand {
        /// Family id: C1..C8, EX1R, EX6A, EX6B (or ex1, conj5..conj8)
        #[arg(long)]
        family: String,
        /// Exact parameter bindings, e.g. r=1,s=-2/3
        #[arg(long, default_value = "")]
        params: String,
        /// Number of sequence terms (default: one past the stock order)
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Expand a continued-fraction expression given in the DSL
    Cf {
        /// Expression over x, g, and the names bound by --params
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        terms: Option<usize>,
        /// fixpoint iteration or the quadratic closed form
        #[arg(long, value_enum, default_value = "fixpoint")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Hankel transform of a sequence file (ring auto-detected)
    Hankel {
        #[arg(long)]
        input: PathBuf,
        /// Produce h_0..h_m (needs 2m+1 input terms)
        #[arg(long)]
        terms: usize,
        /// Raise the polynomial product degree cap
        #[arg(long)]
        degree_cap: Option<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Check a Somos relation with given coefficients against a sequence
    Check {
        /// Somos order: 4, 6 or 8
        #[arg(long)]
        order: usize,
        /// Comma-separated coefficients, e.g. "9,0,23"
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "report")]
        format: Format,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Fit Somos coefficients to a sequence by exact linear algebra
    Fit {
        #[arg(long)]
        order: usize,
        /// Free/zero pattern, e.g. "1,0,1" to pin the middle coefficient
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "report")]
        format: Format,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run the full pipeline for one conjecture case and report the verdict
    Verify {
        #[arg(long)]
        conjecture: String,
        #[arg(long, default_value = "")]
        params: String,
        /// Sequence length (default: the conjecture's desk-scale budget)
        #[arg(long)]
        terms: Option<usize>,
        /// Hankel depth m (default: the conjecture's desk-scale budget)
        #[arg(long)]
        hankel_terms: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Verify a conjecture over a parameter grid
    Sweep {
        #[arg(long)]
        conjecture: String,
        /// Grid, e.g. "r=-2..3;s=1,2,-1/2" (ranges are inclusive integers)
        #[arg(long)]
        grid: String,
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long)]
        hankel_terms: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            if err.is::<UsageError>() {
                eprintln!("error: {err}");
                eprintln!("run `somos --help` (or `somos <verb> --help`) for usage");
                ExitCode::from(2)
            } else {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Expand { family, params, terms, format, out } => {
            expand_cmd(&family, &params, terms, format, out)
        }
        Command::Cf { expr, params, terms, method, format, out } => {
            cf_cmd(&expr, &params, terms, method, format, out)
        }
        Command::Hankel { input, terms, degree_cap, format, out } => {
            hankel_cmd(&input, terms, degree_cap, format, out)
        }
        Command::Check { order, coeffs, input, format, out } => {
            check_cmd(order, &coeffs, &input, format, out)
        }
        Command::Fit { order, mask, input, format, out } => {
            fit_cmd(order, mask.as_deref(), &input, format, out)
        }
        Command::Verify { conjecture, params, terms, hankel_terms, out } => {
            verify_cmd(&conjecture, &params, terms, hankel_terms, out)
        }
        Command::Sweep { conjecture, grid, terms, hankel_terms, out } => {
            sweep_cmd(&conjecture, &grid, terms, hankel_terms, out)
        }
    }
}

// ---------------------------------------------------------------------------
// option parsing helpers
// ---------------------------------------------------------------------------

fn parse_params(text: &str) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for piece in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((name, value)) = piece.split_once('=') else {
            return usage(format!("bad parameter `{piece}`: expected name=value"));
        };
        let value = parse_rational(value.trim())
            .map_err(|e| anyhow!(UsageError(format!("bad value for `{name}`: {e}"))))?;
        out.insert(name.trim().to_string(), value);
    }
    Ok(out)
}

fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_rational(p).map_err(|e| anyhow!(UsageError(format!("bad number `{p}`: {e}")))))
        .collect()
}

fn parse_mask(text: &str) -> Result<Vec<bool>> {
    text.split(',')
        .map(str::trim)
        .map(|p| match p {
            "1" => Ok(true),
            "0" => Ok(false),
            other => usage(format!("bad mask entry `{other}`: use 0 or 1")),
        })
        .collect()
}

fn parse_grid(text: &str) -> Result<BTreeMap<String, Vec<Rational>>> {
    let mut grid = BTreeMap::new();
    for dim in text.split(';').map(str::trim).filter(|d| !d.is_empty()) {
        let Some((name, spec)) = dim.split_once('=') else {
            return usage(format!("bad grid dimension `{dim}`: expected name=values"));
        };
        let values = if let Some((lo, hi)) = spec.split_once("..") {
            let lo: i64 = lo.trim().parse().map_err(|_| {
                anyhow!(UsageError(format!("bad range start `{lo}` in `{dim}`")))
            })?;
            let hi: i64 = hi.trim().parse().map_err(|_| {
                anyhow!(UsageError(format!("bad range end `{hi}` in `{dim}`")))
            })?;
            (lo..=hi).map(|n| Rational::from_integer(n.into())).collect()
        } else {
            parse_rational_list(spec)?
        };
        grid.insert(name.trim().to_string(), values);
    }
    if grid.is_empty() {
        return usage("empty grid");
    }
    Ok(grid)
}

/// Conjecture ids are accepted case-insensitively, with the closed-form
/// family names as aliases.
fn resolve_id(id: &str) -> Result<&'static str> {
    let upper = id.to_ascii_uppercase();
    match id.to_ascii_lowercase().as_str() {
        "ex1" => return Ok("EX1R"),
        "conj5" => return Ok("C5"),
        "conj6" => return Ok("C6"),
        "conj7" => return Ok("C7"),
        "conj8" => return Ok("C8"),
        _ => {}
    }
    conjectures::all_ids()
        .into_iter()
        .find(|known| **known == upper)
        .ok_or_else(|| {
            anyhow!(UsageError(format!(
                "unknown family `{id}`; known: {}, ex1, conj5..conj8",
                conjectures::all_ids().join(", ")
            )))
        })
}

fn rationals_only(h: Homogeneous, what: &str) -> Result<Vec<Rational>> {
    match h {
        Homogeneous::Int(v) => Ok(v.into_iter().map(Rational::from_integer).collect()),
        Homogeneous::Rat(v) => Ok(v),
        Homogeneous::Poly(_) => bail!("{what} needs integer or rational input, got polynomials"),
    }
}

fn emit_values(
    values: Vec<String>,
    what: &str,
    format: Format,
    out: OutputOpts,
) -> Result<u8> {
    let sink = Sink::new(out.output);
    match format {
        Format::Csv => {
            sink.write_all(&csv_document(header_line(out.no_header, what), &values))?
        }
        Format::Report => {
            let doc = serde_json::json!({ "values": values });
            sink.write_all(&format!("{}\n", serde_json::to_string_pretty(&doc)?))?
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn expand_cmd(
    family: &str,
    params: &str,
    terms: Option<usize>,
    format: Format,
    out: OutputOpts,
) -> Result<u8> {
    let terms = terms.unwrap_or(somos_core::series::DEFAULT_ORDER + 1);
    if terms == 0 {
        return usage("--terms must be at least 1");
    }
    let id = resolve_id(family)?;
    let def = conjecture_def(id)?;
    let binds = conjectures::complete_bindings(def, &parse_params(params)?)?;
    let series = conjectures::family_series(id, &binds, terms - 1)?;
    let values: Vec<String> = series.coeffs().iter().map(Rational::to_string).collect();
    let what = format!("somos expand family={id} terms={terms}");
    emit_values(values, &what, format, out)
}

fn cf_cmd(
    expr: &str,
    params: &str,
    terms: Option<usize>,
    method: Method,
    format: Format,
    out: OutputOpts,
) -> Result<u8> {
    let terms = terms.unwrap_or(somos_core::series::DEFAULT_ORDER + 1);
    if terms == 0 {
        return usage("--terms must be at least 1");
    }
    let binds = parse_params(params)?;
    let names: Vec<&str> = binds.keys().map(String::as_str).collect();
    let ast = cfexpr::parse(expr, &names)
        .map_err(|e| anyhow!(UsageError(format!("bad --expr: {e}"))))?;
    let series = match method {
        Method::Fixpoint => {
            if ast.has_self_ref() {
                expand_fixpoint(&ast, &binds, terms - 1)?
            } else {
                cfexpr::eval_series(&ast, &binds, None, terms - 1)?
            }
        }
        Method::Quadratic => expand_quadratic(&ast, &binds, terms - 1)?,
    };
    let values: Vec<String> = series.coeffs().iter().map(Rational::to_string).collect();
    emit_values(values, "somos cf", format, out)
}

fn hankel_cmd(
    input: &Path,
    terms: usize,
    degree_cap: Option<u32>,
    format: Format,
    out: OutputOpts,
) -> Result<u8> {
    if let Some(cap) = degree_cap {
        set_poly_degree_cap(cap.max(poly_degree_cap()));
    }
    let values: Vec<String> = match read_homogeneous(input)? {
        Homogeneous::Int(seq) => {
            hankel_transform(&seq, terms)?.iter().map(ToString::to_string).collect()
        }
        Homogeneous::Rat(seq) => {
            hankel_transform(&seq, terms)?.iter().map(ToString::to_string).collect()
        }
        Homogeneous::Poly(seq) => {
            hankel_transform(&seq, terms)?.iter().map(ToString::to_string).collect()
        }
    };
    let what = format!("somos hankel terms={terms}");
    emit_values(values, &what, format, out)
}

fn check_cmd(
    order: usize,
    coeffs: &str,
    input: &Path,
    format: Format,
    out: OutputOpts,
) -> Result<u8> {
    let coeffs = parse_rational_list(coeffs)?;
    let rel = SomosRelation::new(order, coeffs.clone())
        .map_err(|e| anyhow!(UsageError(e.to_string())))?;
    let seq = rationals_only(read_homogeneous(input)?, "check")?;
    let report = somos_check(&seq, &rel);
    let sink = Sink::new(out.output);
    match format {
        Format::Csv => {
            let mut lines = Vec::new();
            for n in order..seq.len() {
                let ok = !report.failures.iter().any(|f| f.n == n);
                lines.push(format!("{n},{}", if ok { "pass" } else { "fail" }));
            }
            sink.write_all(&csv_document(
                header_line(out.no_header, "somos check"),
                &lines,
            ))?;
        }
        Format::Report => {
            let doc = serde_json::json!({
                "order": order,
                "coeffs": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "checked": report.checked,
                "pass": report.passed(),
                "failures": report.failures.iter().map(|f| serde_json::json!({
                    "n": f.n,
                    "lhs": f.lhs.to_string(),
                    "rhs": f.rhs.to_string(),
                })).collect::<Vec<_>>(),
            });
            sink.write_all(&format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn fit_cmd(
    order: usize,
    mask: Option<&str>,
    input: &Path,
    format: Format,
    out: OutputOpts,
) -> Result<u8> {
    let mask = mask.map(parse_mask).transpose()?;
    let seq = rationals_only(read_homogeneous(input)?, "fit")?;
    let fit = somos_fit(&seq, order, mask.as_deref())?;
    let strings = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let sink = Sink::new(out.output);
    match format {
        Format::Csv => {
            let lines = fit.solution.as_deref().map(strings).unwrap_or_default();
            sink.write_all(&csv_document(header_line(out.no_header, "somos fit"), &lines))?;
        }
        Format::Report => {
            let doc = serde_json::json!({
                "order": fit.order,
                "mask": fit.mask,
                "status": fit.status.as_str(),
                "solution": fit.solution.as_deref().map(strings),
                "basis": fit.basis.iter().map(|v| strings(v)).collect::<Vec<_>>(),
                "rows": fit.rows,
                "nontrivial_rows": fit.nontrivial_rows,
                "verified_to": fit.verified_to,
                "first_failing": fit.first_failing,
            });
            sink.write_all(&format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
        }
    }
    Ok(if fit.solution.is_some() { 0 } else { 1 })
}

fn verify_cmd(
    conjecture: &str,
    params: &str,
    terms: Option<usize>,
    hankel_terms: Option<usize>,
    out: OutputOpts,
) -> Result<u8> {
    let id = resolve_id(conjecture)?;
    let def = conjecture_def(id)?;
    let case = ConjectureCase::new(id, parse_params(params)?)?.with_budget(
        terms.unwrap_or_else(|| def.default_terms()),
        hankel_terms.unwrap_or_else(|| def.default_hankel_terms()),
    );
    let report = run_case(&case)?;
    let sink = Sink::new(out.output);
    sink.write_all(&format!(
        "{}\n",
        serde_json::to_string_pretty(&report.to_doc())?
    ))?;
    Ok(if report.verdict.is_confirmed() { 0 } else { 1 })
}

fn sweep_cmd(
    conjecture: &str,
    grid: &str,
    terms: Option<usize>,
    hankel_terms: Option<usize>,
    out: OutputOpts,
) -> Result<u8> {
    let id = resolve_id(conjecture)?;
    let def = conjecture_def(id)?;
    let grid = parse_grid(grid)?;
    let terms = terms.unwrap_or_else(|| def.default_terms());
    let hankel_terms = hankel_terms.unwrap_or_else(|| def.default_hankel_terms());
    let (reports, summary) = conjectures::sweep(id, &grid, terms, hankel_terms)?;
    let doc = SweepReportDoc {
        id: id.to_string(),
        terms,
        hankel_terms,
        cases: reports.iter().map(CaseReport::to_doc).collect(),
        summary,
    };
    let json = format!("{}\n", serde_json::to_string_pretty(&doc)?);
    match &out.output {
        Some(_) => {
            Sink::new(out.output).write_all(&json)?;
            print!("{}", sweep_table(&reports, &summary));
        }
        None => {
            print!("{json}");
            eprint!("{}", sweep_table(&reports, &summary));
        }
    }
    Ok(if summary.refuted == 0 { 0 } else { 1 })
}

fn sweep_table(reports: &[CaseReport], summary: &conjectures::SweepSummary) -> String {
    let mut table = String::new();
    let _ = writeln!(table, "{:<28}  {:<28}  verdict", "params", "fit");
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        let fitted = match &r.fit {
            Some(f) => match &f.solution {
                Some(sol) => format!(
                    "({}){}",
                    sol.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                    if f.basis.is_empty() { "" } else { "+" }
                ),
                None => "inconsistent".to_string(),
            },
            None => "-".to_string(),
        };
        let verdict = match r.verdict {
            Verdict::RefutedAt(n) => format!("refuted at n={n}"),
            ref v => v.as_str(),
        };
        let _ = writeln!(table, "{params:<28}  {fitted:<28}  {verdict}");
    }
    let _ = writeln!(
        table,
        "total {}  confirmed {}  refuted {}  degenerate {}",
        summary.total, summary.confirmed, summary.refuted, summary.degenerate
    );
    table
}
