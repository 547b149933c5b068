//! `klvwb <subcommand> [options]`: the command-line front end.
//!
//! Exit codes: 0 success, 1 invalid datum or failed check, 2 computation
//! failure (no self-dual basis, missing costandard data), 3 usage or I/O.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::check::run_suites;
use crate::coxeter::CoxElt;
use crate::datum::{
    builtin_datum, builtin_names, load_datum, DatumError, OrbitDatum, ParamId, ValidatedDatum,
};
use crate::extcalc::{ExtCalculator, ExtRow};
use crate::hecke::render_combination;
use crate::klv::{c_expansion, c_rows, klv_table, KlvError, KlvTable};
use crate::mq::MqElement;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Klv,
    Act,
    Cexp,
    Ext,
    Check,
    ListBuiltins,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    #[value(name = "T")]
    T,
    #[value(name = "C")]
    C,
}

#[derive(Debug, Parser)]
#[command(
    name = "klvwb",
    version,
    about = "Hecke modules on orbit data and KLV polynomials"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Datum file (JSON)
    #[arg(long, conflicts_with = "builtin")]
    pub datum: Option<PathBuf>,
    /// Builtin datum name (see list-builtins)
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the output here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reduced word naming a Weyl group element, e.g. `s1,s2` or `1,2`
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long, value_enum, default_value_t = Basis::T)]
    pub basis: Basis,
    /// Parameter id (act, cexp)
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// Highest power of q listed in series expansions
    #[arg(long, default_value_t = 10)]
    pub window: i32,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Datum(String),
    Compute(String),
    Usage(String),
}

impl From<KlvError> for Failure {
    fn from(e: KlvError) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<DatumError> for Failure {
    fn from(e: DatumError) -> Self {
        match e {
            DatumError::UnknownBuiltin(_) => Failure::Usage(e.to_string()),
            _ => Failure::Datum(e.to_string()),
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let (code, body, stderr) = match dispatch(&args) {
        Ok((code, body)) => (code, body, String::new()),
        Err(Failure::Datum(m)) => (1, String::new(), format!("error: {m}\n")),
        Err(Failure::Compute(m)) => (2, String::new(), format!("error: {m}\n")),
        Err(Failure::Usage(m)) => (3, String::new(), format!("error: {m}\n")),
    };
    match &args.out {
        Some(path) if !body.is_empty() => match std::fs::write(path, &body) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr,
            },
            Err(e) => Outcome {
                code: 3,
                stdout: String::new(),
                stderr: format!("{stderr}error: cannot write {}: {e}\n", path.display()),
            },
        },
        _ => Outcome {
            code,
            stdout: body,
            stderr,
        },
    }
}

fn dispatch(args: &Args) -> Result<(i32, String), Failure> {
    if args.command == Command::ListBuiltins {
        return Ok((0, list_builtins(args.format)));
    }
    let datum = load(args)?;
    match args.command {
        Command::Validate => validate(args, datum),
        Command::Check => check(args, datum),
        Command::ListBuiltins => unreachable!(),
        _ => {
            let vd = ValidatedDatum::new(datum)
                .map_err(|f| Failure::Datum(format!("{f}\n{}", f.report)))?;
            match args.command {
                Command::Klv => klv(args, &vd),
                Command::Act => act(args, &vd),
                Command::Cexp => cexp(args, &vd),
                Command::Ext => ext(args, &vd),
                _ => unreachable!(),
            }
        }
    }
}

fn load(args: &Args) -> Result<OrbitDatum, Failure> {
    match (&args.datum, &args.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(load_datum(&text)?)
        }
        (None, Some(name)) => Ok(builtin_datum(name)?),
        _ => Err(Failure::Usage(
            "exactly one of --datum or --builtin is required".into(),
        )),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn list_builtins(format: Format) -> String {
    let names = builtin_names();
    match format {
        Format::Table => names.iter().map(|n| format!("{n}\n")).collect(),
        Format::Csv => std::iter::once("name\n".to_string())
            .chain(names.iter().map(|n| format!("{n}\n")))
            .collect(),
        Format::Json => json(
            &names
                .iter()
                .map(|name| serde_json::json!({ "name": name }))
                .collect::<Vec<_>>(),
        ),
    }
}

#[derive(Serialize)]
struct ReportRow<'a> {
    check: &'a str,
    status: &'static str,
    detail: &'a str,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per detail line, or one row with an empty detail.
fn report_rows(report: &Report) -> Vec<ReportRow<'_>> {
    let mut rows = Vec::new();
    for c in &report.checks {
        if c.details.is_empty() {
            rows.push(ReportRow {
                check: &c.name,
                status: c.status(),
                detail: "",
            });
        }
        for d in &c.details {
            rows.push(ReportRow {
                check: &c.name,
                status: c.status(),
                detail: d,
            });
        }
    }
    rows
}

fn render_report(format: Format, datum: &str, report: &Report) -> String {
    match format {
        Format::Table => format!(
            "datum: {datum}\n{report}result: {}\n",
            if report.passed() { "PASS" } else { "FAIL" }
        ),
        Format::Csv => std::iter::once("check,status,detail\n".to_string())
            .chain(
                report_rows(report)
                    .iter()
                    .map(|r| format!("{},{},{}\n", r.check, r.status, csv_field(r.detail))),
            )
            .collect(),
        Format::Json => json(&report_rows(report)),
    }
}

fn validate(args: &Args, datum: OrbitDatum) -> Result<(i32, String), Failure> {
    let report = crate::datum::validate_datum(&datum);
    let code = if report.passed() { 0 } else { 1 };
    Ok((code, render_report(args.format, datum.name(), &report)))
}

fn check(args: &Args, datum: OrbitDatum) -> Result<(i32, String), Failure> {
    let suites = run_suites(datum, args.window)?;
    let report = Report {
        checks: suites.checks.clone(),
    };
    let code = if suites.passed { 0 } else { 1 };
    Ok((code, render_report(args.format, &suites.datum, &report)))
}

fn param(vd: &ValidatedDatum, flag: &str, id: &str) -> Result<ParamId, Failure> {
    vd.datum()
        .find_param(id)
        .ok_or_else(|| Failure::Usage(format!("--{flag}: unknown parameter `{id}`")))
}

fn element(vd: &ValidatedDatum, word: Option<&str>) -> Result<CoxElt, Failure> {
    let sys = vd.datum().coxeter();
    let word = crate::coxeter::parse_word(word.unwrap_or(""))
        .map_err(|e| Failure::Usage(format!("--word: {e}")))?;
    sys.from_reduced_word(&word)
        .map_err(|e| Failure::Usage(format!("--word: {e}")))
}

fn klv(args: &Args, vd: &ValidatedDatum) -> Result<(i32, String), Failure> {
    let d = vd.datum();
    let t = klv_table(vd)?;
    let out = match args.format {
        Format::Csv => t.to_csv(d),
        Format::Json => json(&t.rows(d)),
        Format::Table => render_klv_table(d, &t),
    };
    Ok((0, out))
}

fn render_klv_table(d: &OrbitDatum, t: &KlvTable) -> String {
    d.param_ids()
        .map(|p| format!("L[{}] = {}\n", d.param(p).id, t.element(p).render(d)))
        .collect()
}

#[derive(Serialize)]
struct CoordRow {
    param: String,
    coeff: String,
}

fn act(args: &Args, vd: &ValidatedDatum) -> Result<(i32, String), Failure> {
    let d = vd.datum();
    let id = args
        .param
        .as_deref()
        .ok_or_else(|| Failure::Usage("act requires --param".into()))?;
    let p = param(vd, "param", id)?;
    let w = element(vd, args.word.as_deref())?;
    let x = MqElement::basis(p);
    let y = match args.basis {
        Basis::T => vd.actions().apply_tw(w, &x),
        Basis::C => vd
            .actions()
            .act_c(vd.hecke().kl_basis(), w, &x)
            .map_err(|e| Failure::Compute(e.to_string()))?,
    };
    let rows: Vec<CoordRow> = y
        .terms()
        .map(|(p, c)| CoordRow {
            param: d.param(p).id.clone(),
            coeff: c.to_string(),
        })
        .collect();
    let out = match args.format {
        Format::Table => format!("{}\n", y.render(d)),
        Format::Csv => std::iter::once("param,coeff\n".to_string())
            .chain(rows.iter().map(|r| format!("{},{}\n", r.param, r.coeff)))
            .collect(),
        Format::Json => json(&rows),
    };
    Ok((0, out))
}

fn cexp(args: &Args, vd: &ValidatedDatum) -> Result<(i32, String), Failure> {
    let d = vd.datum();
    let t = klv_table(vd)?;
    let w = element(vd, args.word.as_deref())?;
    let taus: Vec<ParamId> = match args.param.as_deref() {
        Some(id) => vec![param(vd, "param", id)?],
        None => d.param_ids().collect(),
    };
    let rows = c_rows(vd, &t, w, &taus)?;
    let out = match args.format {
        Format::Json => json(&rows),
        Format::Csv => std::iter::once("w,tau,gamma,c\n".to_string())
            .chain(
                rows.iter()
                    .map(|r| format!("{},{},{},{}\n", r.w, r.tau, r.gamma, r.c)),
            )
            .collect(),
        Format::Table => {
            let mut out = String::new();
            for &tau in &taus {
                let c = c_expansion(vd, &t, w, tau)?;
                let body = render_combination(
                    c.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(g, c)| (format!("L[{}]", d.params()[g].id), c)),
                );
                let _ = writeln!(
                    out,
                    "C[{}] L[{}] = {body}",
                    d.coxeter().element_token(w),
                    d.param(tau).id
                );
            }
            out
        }
    };
    Ok((0, out))
}

fn ext(args: &Args, vd: &ValidatedDatum) -> Result<(i32, String), Failure> {
    let d = vd.datum();
    let t = klv_table(vd)?;
    let calc = ExtCalculator::new(vd, &t)?;
    let window = args.window;
    let rows: Vec<ExtRow> = match (args.tau.as_deref(), args.gamma.as_deref()) {
        (Some(tau), Some(gamma)) => {
            vec![calc
                .ext(param(vd, "tau", tau)?, param(vd, "gamma", gamma)?)
                .row(d, window)]
        }
        (Some(tau), None) => vec![calc.ic(param(vd, "tau", tau)?).row(d, window)],
        (None, Some(_)) => return Err(Failure::Usage("--gamma requires --tau".into())),
        (None, None) => d
            .param_ids()
            .flat_map(|tau| d.param_ids().map(move |gamma| (tau, gamma)))
            .map(|(tau, gamma)| calc.ext(tau, gamma).row(d, window))
            .collect(),
    };
    let out = match args.format {
        Format::Json => json(&rows),
        Format::Csv => std::iter::once("tau,gamma,series,first_degrees\n".to_string())
            .chain(rows.iter().map(|r| {
                format!(
                    "{},{},{},{}\n",
                    r.tau,
                    r.gamma,
                    csv_field(&r.series),
                    csv_field(&r.first_degrees)
                )
            }))
            .collect(),
        Format::Table => rows
            .iter()
            .map(|r| {
                let label = if r.gamma == "-" {
                    format!("IC({})", r.tau)
                } else {
                    format!("E({}, {})", r.tau, r.gamma)
                };
                format!("{label} = {}    [{}]\n", r.series, r.first_degrees)
            })
            .collect(),
    };
    Ok((0, out))
}
