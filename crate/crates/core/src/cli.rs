//! Command-line front end. [`run_cli_with`] is pure apart from reading the
//! family and graph files it is pointed at, which keeps it testable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::audit::{AuditReport, Auditor};
use crate::dsl::{parse_weight, Value};
use crate::families::{partition_counts_at, FamilyRegistry, FamilySpec};
use crate::graph::load_edge_list;
use crate::indices::{
    average_sombor_for_family, index_on_graph, index_on_partition, is_average_sombor, symbolic_index,
    EdgeCountSource, IndexDefinition,
};

/// Environment variable naming a family file that extends or overrides the
/// built-in registry.
pub const FAMILY_FILE_ENV: &str = "SOMBOR_FAMILY_FILE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "sombor", version, about = "Exact degree-based indices and closed-form audits for silicon-carbide sheets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Point {
    /// Family name, e.g. Si2C3-I
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    p: Option<i64>,
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    q: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List registered families with their vertex and edge forms
    ListFamilies {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate an index on a family member, or print its closed form
    Compute {
        #[command(flatten)]
        point: Point,
        /// sombor, reduced_sombor, m1, m2, isi or average_sombor
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        index: Option<String>,
        /// Edge weight in du and dv, e.g. "sqrt(du^2 + dv^2)"
        #[arg(long)]
        expr: Option<String>,
        /// Edge count behind 2m/n for average_sombor: partition-sum or claimed
        #[arg(long, default_value = "partition-sum")]
        m_choice: EdgeCountSource,
        /// Print a floating approximation with this many decimals
        #[arg(long)]
        float: Option<usize>,
        /// Print the closed form in p and q instead of a value
        #[arg(long)]
        closed_form: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check one catalog entry (1-18) against the family partitions
    Verify {
        #[arg(long)]
        theorem: u32,
        /// Family row for 17
        #[arg(long)]
        family: Option<String>,
        /// Target for 18: m1, m2, isi, sombor-approx or inequalities
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run every check and print the report
    Audit {
        #[arg(long)]
        workers: Option<usize>,
        /// Stamp the report; without a value the current UTC time is used
        #[arg(long, num_args = 0..=1, default_missing_value = "now")]
        timestamp: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate a weight expression over a graph file or a family member
    Eval {
        #[arg(long)]
        expr: String,
        /// Edge-list file
        #[arg(long, conflicts_with_all = ["family", "p", "q"])]
        graph: Option<PathBuf>,
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        float: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn registry(family_file: Option<&str>) -> Result<FamilyRegistry, Failure> {
    let mut registry = FamilyRegistry::builtin();
    if let Some(path) = family_file.filter(|p| !p.is_empty()) {
        let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{FAMILY_FILE_ENV}={path}: {e}")))?;
        registry.extend_from_text(&text)?;
    }
    Ok(registry)
}

fn resolve_point<'a>(registry: &'a FamilyRegistry, point: &Point) -> Result<(&'a FamilySpec, i64, i64), Failure> {
    let name = point.family.as_deref().ok_or_else(|| Failure("--family is required".into()))?;
    let family = registry.get(name)?;
    match (point.p, point.q) {
        (Some(p), Some(q)) => Ok((family, p, q)),
        _ => Err(Failure("--p and --q are required".into())),
    }
}

fn render_value(value: &Value, float: Option<usize>) -> String {
    match (value, float) {
        (_, Some(digits)) => format!("{:.*}", digits, value.to_f64()),
        (Value::Exact(r), None) => r.to_string(),
        (Value::Real(x), None) => x.to_string(),
    }
}

fn render_real(x: f64, float: Option<usize>) -> String {
    match float {
        Some(digits) => format!("{x:.digits$}"),
        None => x.to_string(),
    }
}

/// A single computed quantity in the requested format.
fn emit_value(format: Format, fields: &[(&str, String)], exact: bool, float: f64) -> String {
    match format {
        Format::Text => format!("{}\n", fields.last().map(|(_, v)| v.as_str()).unwrap_or("")),
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (k, v) in fields {
                map.insert(k.to_string(), json!(v));
            }
            map.insert("exact".into(), json!(exact));
            map.insert("float".into(), json!(float));
            format!("{}\n", serde_json::Value::Object(map))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut head: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            head.extend(["exact", "float"]);
            let mut row: Vec<String> = fields.iter().map(|(_, v)| v.clone()).collect();
            row.extend([exact.to_string(), float.to_string()]);
            w.write_record(&head).expect("in-memory write");
            w.write_record(&row).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Md => {
            let mut out = String::new();
            let head: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let _ = writeln!(out, "| {} | exact | float |", head.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(head.len() + 2));
            let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            let _ = writeln!(out, "| {} | {} | {} |", row.join(" | "), exact, float);
            out
        }
    }
}

fn emit_report(report: &AuditReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
    }
}

fn list_families(registry: &FamilyRegistry, format: Format) -> String {
    let rows: Vec<[String; 3]> = registry
        .iter()
        .map(|f| [f.name.clone(), f.vertex_form.to_string(), f.claimed_edge_form.to_string()])
        .collect();
    match format {
        Format::Text => rows.iter().map(|[n, v, e]| format!("{n:<10} vertices {v}; edges {e}\n")).collect(),
        Format::Json => {
            let list: Vec<_> = rows.iter().map(|[n, v, e]| json!({"name": n, "vertices": v, "edges": e})).collect();
            format!("{}\n", serde_json::to_string_pretty(&list).expect("serializes"))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "vertices", "edges"]).expect("in-memory write");
            for row in &rows {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Md => {
            let mut out = String::from("| family | vertices | edges |\n|---|---|---|\n");
            for [n, v, e] in &rows {
                let _ = writeln!(out, "| {n} | {v} | {e} |");
            }
            out
        }
    }
}

fn timestamp(flag: Option<String>) -> Option<String> {
    flag.map(|t| {
        if t == "now" {
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
        } else {
            t
        }
    })
}

fn report_output(report: AuditReport, format: Format) -> CliOutput {
    CliOutput { code: if report.all_match() { 0 } else { 2 }, stdout: emit_report(&report, format), stderr: String::new() }
}

fn execute(command: Command, family_file: Option<&str>) -> Result<CliOutput, Failure> {
    let registry = registry(family_file)?;
    let ok = |stdout: String| Ok(CliOutput { code: 0, stdout, stderr: String::new() });
    match command {
        Command::ListFamilies { format } => ok(list_families(&registry, format)),
        Command::Compute { point, index, expr, m_choice, float, closed_form, format } => {
            let index_name = index.clone().unwrap_or_else(|| "expr".to_string());
            if closed_form {
                let name = point.family.as_deref().ok_or_else(|| Failure("--family is required".into()))?;
                let family = registry.get(name)?;
                let idx = match &expr {
                    Some(text) => IndexDefinition::from_expr("expr", parse_weight(text)?),
                    None => IndexDefinition::by_name(&index_name)?,
                };
                let form = symbolic_index(&idx, family)?;
                let fields = [("family", family.name.clone()), ("index", idx.name.clone()), ("closed_form", form.to_string())];
                let float = form.eval_float::<f64>(1, 1).unwrap_or(f64::NAN);
                return ok(emit_value(format, &fields, true, float));
            }
            let (family, p, q) = resolve_point(&registry, &point)?;
            let mut fields = vec![
                ("family", family.name.clone()),
                ("p", p.to_string()),
                ("q", q.to_string()),
                ("index", index_name.clone()),
            ];
            if expr.is_none() && is_average_sombor(&index_name) {
                let value = average_sombor_for_family(family, p, q, m_choice)?;
                fields.push(("m_choice", m_choice.label().to_string()));
                fields.push(("value", render_real(value, float)));
                return ok(emit_value(format, &fields, false, value));
            }
            let idx = match &expr {
                Some(text) => IndexDefinition::from_expr("expr", parse_weight(text)?),
                None => IndexDefinition::by_name(&index_name)?,
            };
            let part = partition_counts_at(family, p, q)?;
            let value = index_on_partition(&idx, &part)?;
            fields.push(("value", render_value(&value, float)));
            ok(emit_value(format, &fields, value.is_exact(), value.to_f64()))
        }
        Command::Verify { theorem, family, target, format } => {
            let selector = family.as_deref().or(target.as_deref());
            let report = Auditor::new(registry).verify(theorem, selector)?;
            Ok(report_output(report, format))
        }
        Command::Audit { workers, timestamp: stamp, format } => {
            let mut auditor = Auditor::new(registry).timestamp(timestamp(stamp));
            if let Some(n) = workers {
                auditor = auditor.workers(n);
            }
            Ok(report_output(auditor.run(), format))
        }
        Command::Eval { expr, graph, point, float, format } => {
            let idx = IndexDefinition::from_expr("expr", parse_weight(&expr)?);
            let (mut fields, value) = match graph {
                Some(path) => {
                    let file = std::fs::File::open(&path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                    let g = load_edge_list(file)?;
                    let value = index_on_graph(&idx, &g)?;
                    (vec![("graph", path.display().to_string())], value)
                }
                None => {
                    let (family, p, q) = resolve_point(&registry, &point)?;
                    let part = partition_counts_at(family, p, q)?;
                    let fields = vec![("family", family.name.clone()), ("p", p.to_string()), ("q", q.to_string())];
                    (fields, index_on_partition(&idx, &part)?)
                }
            };
            fields.push(("expr", expr.clone()));
            fields.push(("value", render_value(&value, float)));
            ok(emit_value(format, &fields, value.is_exact(), value.to_f64()))
        }
    }
}

fn synopsis() -> String {
    Cli::command().render_usage().to_string()
}

/// Runs one invocation; `argv[0]` is the program name. `family_file` plays
/// the role of the environment variable.
pub fn run_cli_with<I, T>(argv: I, family_file: Option<&str>) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: format!("{text}\n{}\n", synopsis()) }
            };
        }
    };
    match execute(cli.command, family_file) {
        Ok(out) => out,
        Err(Failure(message)) => {
            CliOutput { code: 1, stdout: String::new(), stderr: format!("error: {message}\n\n{}\n", synopsis()) }
        }
    }
}

/// Like [`run_cli_with`], reading the family file from the environment.
pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let file = std::env::var(FAMILY_FILE_ENV).ok();
    run_cli_with(argv, file.as_deref())
}
