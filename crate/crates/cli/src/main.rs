use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use metric_affine::classify::projective::verify_projective_theorem;
use metric_affine::classify::quadric::{quadric_duality_check, QuadricStatus};
use metric_affine::classify::tables::{reproduce_table, TableCase};
use metric_affine::classify::{verify_main_prop, verify_theorem};
use metric_affine::formfile::{from_json, to_json, FormRecord};
use metric_affine::groups::{orthogonal_group, reflection_generation_status, weak_orthogonal_group, HARD_CEILING};
use metric_affine::homog::{drop, lift, roundtrip_checks, verify_reflections};
use metric_affine::transvect::verify_lemmas;
use metric_affine::{Budget, Error, FieldSpec, QForm, Report, Vars};

const BUDGET_VAR: &str = "METRIC_AFFINE_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "metric-affine",
    version,
    about = "Exact quadratic-form and affine-motion computations over small fields"
)]
struct Cli {
    /// Output format: human-readable text or line-delimited JSON records.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Enumeration budget (candidate matrices); overrides METRIC_AFFINE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Print notes and every failure.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    /// Write the resulting form record to this file (lift, drop).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lift a form on V to the form Q↑ on F×V*.
    Lift { file: PathBuf },
    /// Drop a form on F×V* to a form on V.
    Drop { file: PathBuf },
    /// Evaluate a form at a vector such as `1,2` or `(t,1)`.
    Eval { file: PathBuf, vector: String },
    /// Orders of O and O′ and whether reflections generate O′.
    Groups { file: PathBuf },
    /// Exhaustive verification suites.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Args, Debug)]
struct Range {
    /// GF(2), GF(3), GF(4), GF(5), GF(7); `3` or `gf3` also work.
    #[arg(long, value_parser = parse_field)]
    field: FieldSpec,
    #[arg(long)]
    dim: usize,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Transvection group orders and membership in O′.
    Lemmas(Range),
    /// β-image of the motion group equals O′ of every multiple of the lift.
    Proposition(Range),
    /// Reproduce an exceptional-case table (all of them when --case is omitted).
    Tables {
        #[arg(long, value_parser = parse_case)]
        case: Option<TableCase>,
        /// Field for t1 (GF(2) or GF(4)); other tables have a fixed field.
        #[arg(long, value_parser = parse_field)]
        field: Option<FieldSpec>,
    },
    /// Every dyad solution is a multiple of the lift.
    Theorem(Range),
    /// Equality of projective motion groups implies equality of linear ones.
    Projective(Range),
    /// Cone of the lifted form versus tangent hyperplanes of the quadric.
    Quadric { file: PathBuf },
    /// Affine reflections correspond to reflections of the lifted form.
    Reflections(Range),
    /// Lift/drop round trips.
    Roundtrip(Range),
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let t = s.trim();
    let digits = t.trim_start_matches(|c: char| c.is_ascii_alphabetic()).trim_matches(|c| c == '(' || c == ')');
    let normal = if t.eq_ignore_ascii_case("q") {
        "Q".to_string()
    } else if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
        format!("GF({digits})")
    } else {
        t.to_string()
    };
    normal.parse().map_err(|e: Error| e.to_string())
}

fn parse_case(s: &str) -> Result<TableCase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Verification,
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Ctx {
    format: Format,
    verbose: u8,
    budget: Budget,
    output: Option<PathBuf>,
}

fn budget_from(flag: Option<u64>, env: Option<String>) -> Result<Budget, Failure> {
    let raw = match (flag, env) {
        (Some(b), _) => b,
        (None, Some(text)) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Input(format!("{BUDGET_VAR}=`{text}` is not a non-negative integer")))?,
        (None, None) => return Ok(Budget::default()),
    };
    if raw > HARD_CEILING {
        return Err(Failure::Input(format!("budget {raw} exceeds the hard ceiling {HARD_CEILING}")));
    }
    Ok(Budget::new(raw))
}

fn read_form(path: &Path) -> Result<QForm, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    from_json(text.trim()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_vector(field: FieldSpec, text: &str) -> Result<Vec<metric_affine::Scalar>, Failure> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|c| field.parse_scalar(c.trim()).map_err(Failure::from)).collect()
}

impl Ctx {
    fn emit(&self, out: &mut impl Write, text: &str, record: Value) {
        match self.format {
            Format::Text => {
                let _ = write!(out, "{text}");
            }
            Format::Records => {
                let _ = writeln!(out, "{record}");
            }
        }
    }

    fn form_output(&self, out: &mut impl Write, label: &str, q: &QForm, vars: Vars) -> Result<(), Failure> {
        let record = to_json(q);
        let text = format!("{label}: {}\n{record}\n{}", q.render(vars), q.matrix());
        let rec =
            json!({"kind": "form", "label": label, "polynomial": q.render(vars), "record": FormRecord::from_form(q)});
        self.emit(out, &text, rec);
        if let Some(path) = &self.output {
            fs::write(path, format!("{record}\n")).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }

    fn report_output(&self, out: &mut impl Write, report: &Report) -> Result<(), Failure> {
        match self.format {
            Format::Text => {
                let status = if report.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{status} {}: {} checks, {} failures",
                    report.suite,
                    report.checked,
                    report.failures.len()
                );
                if self.verbose > 0 {
                    for n in &report.notes {
                        let _ = writeln!(out, "  note: {n}");
                    }
                }
                let shown = if self.verbose > 0 { report.failures.len() } else { 20 };
                for f in report.failures.iter().take(shown) {
                    let _ = writeln!(out, "  failure: {f}");
                }
                if report.failures.len() > shown {
                    let _ = writeln!(out, "  ... {} more (use -v)", report.failures.len() - shown);
                }
            }
            Format::Records => {
                let _ = writeln!(out, "{}", json!({"kind": "report", "report": report}));
            }
        }
        if report.passed() {
            Ok(())
        } else {
            Err(Failure::Verification)
        }
    }
}

fn run_verify(ctx: &Ctx, out: &mut impl Write, v: Verify) -> Result<(), Failure> {
    let b = ctx.budget;
    let report = match v {
        Verify::Lemmas(r) => verify_lemmas(r.field, r.dim)?,
        Verify::Proposition(r) => verify_main_prop(r.field, r.dim, b)?,
        Verify::Theorem(r) => verify_theorem(r.field, r.dim, b)?,
        Verify::Projective(r) => verify_projective_theorem(r.field, r.dim, b)?,
        Verify::Reflections(r) => verify_reflections(r.field, r.dim)?,
        Verify::Roundtrip(r) => roundtrip_checks(r.field, r.dim)?,
        Verify::Quadric { file } => {
            let q = read_form(&file)?;
            let res = quadric_duality_check(&q)?;
            let mut report = res.report;
            match &res.status {
                QuadricStatus::Verified => {
                    report.note(format!("quadric: {}", res.quadric.join(" ")));
                    report.note(format!("cone: {}", res.cone.join(" ")));
                }
                QuadricStatus::EmptyQuadric => {}
                QuadricStatus::Skipped(why) => report.note(format!("skipped: {why}")),
            }
            report
        }
        Verify::Tables { case, field } => {
            let cases: Vec<(TableCase, FieldSpec)> = match (case, field) {
                (Some(c), Some(f)) => vec![(c, f)],
                (Some(c), None) => vec![(c, c.default_field())],
                (None, Some(f)) => TableCase::ALL.into_iter().map(|c| (c, f)).collect(),
                (None, None) => {
                    let mut all: Vec<_> = TableCase::ALL.into_iter().map(|c| (c, c.default_field())).collect();
                    all.insert(1, (TableCase::T1, FieldSpec::Gf4));
                    all
                }
            };
            let mut report = Report::new("tables");
            for (c, f) in cases {
                let t = reproduce_table(c.dim(), f, b)?;
                let text = format!(
                    "table {c:?} over {f}\n{}{}",
                    t.render(),
                    t.errata
                        .iter()
                        .map(|(blk, row, printed, computed)| {
                            format!("corrected: block {blk} row {row}: printed {printed}, computed {computed}\n")
                        })
                        .collect::<String>()
                );
                ctx.emit(out, &text, json!({"kind": "table", "table": &t}));
                report.merge(t.report);
            }
            report
        }
    };
    ctx.report_output(out, &report)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let ctx = Ctx {
        format: cli.format,
        verbose: cli.verbose,
        budget: budget_from(cli.budget, std::env::var(BUDGET_VAR).ok())?,
        output: cli.output,
    };
    match cli.command {
        Command::Lift { file } => {
            let q = read_form(&file)?;
            ctx.form_output(out, "lift", &lift(&q)?, Vars::A)
        }
        Command::Drop { file } => {
            let q = read_form(&file)?;
            ctx.form_output(out, "drop", &drop(&q)?, Vars::X)
        }
        Command::Eval { file, vector } => {
            let q = read_form(&file)?;
            let x = parse_vector(q.field(), &vector)?;
            let value = q.eval(&x)?;
            ctx.emit(out, &format!("{value}\n"), json!({"kind": "value", "value": value.to_string()}));
            Ok(())
        }
        Command::Groups { file } => {
            let q = read_form(&file)?;
            let o = orthogonal_group(&q, ctx.budget)?.len();
            let w = weak_orthogonal_group(&q, ctx.budget)?.len();
            let s = reflection_generation_status(&q, ctx.budget)?;
            let text = format!(
                "form: {}\n|O| = {o}\n|O'| = {w}\nreflections generate O': {} (closure order {})\nexceptional shape: {}\n",
                q.render(Vars::X),
                s.generates,
                s.closure_order,
                s.shape.map_or("none".to_string(), |x| format!("{x:?}")),
            );
            let rec = json!({"kind": "groups", "orthogonal": o, "weak_orthogonal": w, "reflections": s});
            ctx.emit(out, &text, rec);
            Ok(())
        }
        Command::Verify(v) => run_verify(&ctx, out, v),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
