//! Command-line front end.
//!
//! Arguments are parsed and fully validated into a [`CommandRequest`] before
//! any computation runs; [`run`] then dispatches it and returns an
//! [`Outcome`] holding the exit code and rendered output.
//!
//! Exit codes: 0 on success, 1 when a check finds a violation or
//! disagreement, 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coloring::ThreeColoring;
use crate::enumerate::DEFAULT_MAX_ORDER;
use crate::error::{Error, Result};
use crate::extremal::{
    classify_prime, gen_counterexample_even, gen_extremal_odd, gen_prime_coloring, MnResult,
};
use crate::group::{FiniteAbelianGroup, Subgroup};
use crate::structure::{sweep_even, sweep_odd, RegularityWitness};
use crate::suite::sumset_suite;

pub const MAX_ORDER_ENV: &str = "RAINBOWLAB_MAX_ORDER";

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "rainbowlab",
    version,
    about = "Rainbow-free 3-colorings of finite abelian groups"
)]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for enumeration sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Args)]
struct Bound {
    /// Largest group order searched exhaustively (overrides RAINBOWLAB_MAX_ORDER).
    #[arg(long)]
    max_order: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// Report the first rainbow AP(3) of a coloring file, or "rainbow-free".
    ScanRainbow { file: PathBuf },
    /// Classify an odd prime as P0 or P1.
    Classify { p: u64 },
    /// Compute m(n) by formula, by exhaustive search, or both.
    Mvalue {
        n: u64,
        #[arg(long, conflicts_with_all = ["search", "both"])]
        formula: bool,
        #[arg(long, conflicts_with = "both")]
        search: bool,
        #[arg(long)]
        both: bool,
        #[command(flatten)]
        bound: Bound,
    },
    /// Generate a coloring.
    Gen {
        #[command(subcommand)]
        kind: RawGen,
    },
    /// Certify every rainbow-free coloring of an odd-order group.
    VerifyMain {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        bound: Bound,
    },
    /// Certify every rainbow-free coloring of an even-order cyclic group.
    VerifyEven {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        bound: Bound,
    },
    /// Run the seeded random sumset theorem suite.
    VerifySumsets {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, default_value_t = 49)]
        max_order: usize,
    },
    /// Build or extend the m(n) results table.
    Table {
        #[arg(long, default_value_t = 15)]
        odd_max: u64,
        #[arg(long, default_value_t = 16)]
        even_max: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        bound: Bound,
    },
}

#[derive(Debug, Subcommand)]
enum RawGen {
    /// Extremal coloring of an odd-order group.
    Extremal { group: String },
    /// The B = <2, -1> coloring of Z/p for p in P1.
    Prime { p: u64 },
    /// Coloring of H + Z/2 + Z/2 by cosets of H.
    Counterexample { h: String },
}

/// Which values `mvalue` computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvalueMode {
    Formula,
    Search,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenKind {
    Extremal(FiniteAbelianGroup),
    Prime(u64),
    Counterexample(FiniteAbelianGroup),
}

/// A validated subcommand.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    ScanRainbow(ThreeColoring),
    Classify(u64),
    Mvalue {
        n: u64,
        mode: MvalueMode,
    },
    Gen(GenKind),
    VerifyMain(FiniteAbelianGroup),
    VerifyEven(FiniteAbelianGroup),
    VerifySumsets {
        seed: u64,
        pairs: usize,
        max_order: usize,
    },
    Table {
        odd_max: u64,
        even_max: u64,
        out: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandRequest {
    pub command: Command,
    pub format: Format,
    pub workers: Option<usize>,
    pub max_order: usize,
}

/// Exit code plus what to print on stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn env_max_order() -> std::result::Result<usize, String> {
    match std::env::var(MAX_ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{MAX_ORDER_ENV}={v:?} is not a non-negative integer")),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn parse_group(s: &str) -> std::result::Result<FiniteAbelianGroup, String> {
    s.parse()
        .map_err(|e| format!("bad group spec {s:?}: {e} (expected e.g. \"9\" or \"3,3\")"))
}

fn within(order: u64, max_order: usize, flag_hint: &str) -> std::result::Result<(), String> {
    if order > max_order as u64 {
        return Err(format!(
            "order {order} exceeds the exhaustive-search cap {max_order}; raise it with {flag_hint}"
        ));
    }
    Ok(())
}

const RAISE_HINT: &str = "--max-order or RAINBOWLAB_MAX_ORDER";

fn validate(cli: Cli) -> std::result::Result<CommandRequest, String> {
    if cli.workers == Some(0) {
        return Err("--workers must be at least 1".into());
    }
    let default_cap = env_max_order()?;
    let cap = |b: &Bound| b.max_order.unwrap_or(default_cap);
    let (command, default_format, max_order) = match cli.command {
        RawCommand::ScanRainbow { file } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let c = ThreeColoring::from_file_str(&text)
                .map_err(|e| format!("bad coloring file {}: {e}", file.display()))?;
            (Command::ScanRainbow(c), Format::Text, default_cap)
        }
        RawCommand::Classify { p } => {
            classify_prime(p).map_err(|e| e.to_string())?;
            (Command::Classify(p), Format::Json, default_cap)
        }
        RawCommand::Mvalue {
            n,
            formula,
            search,
            both: _,
            bound,
        } => {
            if n == 0 {
                return Err("n must be at least 1".into());
            }
            let mode = if formula {
                MvalueMode::Formula
            } else if search {
                MvalueMode::Search
            } else {
                MvalueMode::Both
            };
            let max_order = cap(&bound);
            if mode != MvalueMode::Formula {
                within(n, max_order, RAISE_HINT)?;
            }
            (Command::Mvalue { n, mode }, Format::Json, max_order)
        }
        RawCommand::Gen { kind } => {
            let kind = match kind {
                RawGen::Extremal { group } => {
                    let g = parse_group(&group)?;
                    if !g.is_odd_order() || g.order() == 1 {
                        return Err(format!(
                            "gen extremal needs an odd order > 1, got {}",
                            g.order()
                        ));
                    }
                    GenKind::Extremal(g)
                }
                RawGen::Prime { p } => {
                    let class = classify_prime(p).map_err(|e| e.to_string())?;
                    if class.class == crate::extremal::PrimeClass::P0 {
                        return Err(Error::PrimeInP0(p).to_string());
                    }
                    GenKind::Prime(p)
                }
                RawGen::Counterexample { h } => {
                    let g = parse_group(&h)?;
                    if g.order().is_power_of_two() {
                        return Err(Error::PowerOfTwo(g.order()).to_string());
                    }
                    GenKind::Counterexample(g)
                }
            };
            (Command::Gen(kind), Format::Text, default_cap)
        }
        RawCommand::VerifyMain { group, bound } => {
            let g = parse_group(&group)?;
            if !g.is_odd_order() {
                return Err(Error::OddOrderRequired(g.order()).to_string());
            }
            let max_order = cap(&bound);
            within(g.order() as u64, max_order, RAISE_HINT)?;
            (Command::VerifyMain(g), Format::Json, max_order)
        }
        RawCommand::VerifyEven { group, bound } => {
            let g = parse_group(&group)?;
            if g.is_odd_order() {
                return Err(format!(
                    "verify-even needs an even order, got {}",
                    g.order()
                ));
            }
            if !g.is_cyclic() {
                return Err(Error::NotCyclic.to_string());
            }
            let max_order = cap(&bound);
            within(g.order() as u64, max_order, RAISE_HINT)?;
            (Command::VerifyEven(g), Format::Json, max_order)
        }
        RawCommand::VerifySumsets {
            seed,
            pairs,
            max_order,
        } => {
            if max_order < 2 {
                return Err("--max-order must be at least 2".into());
            }
            (
                Command::VerifySumsets {
                    seed,
                    pairs,
                    max_order,
                },
                Format::Json,
                default_cap,
            )
        }
        RawCommand::Table {
            odd_max,
            even_max,
            out,
            bound,
        } => {
            let max_order = cap(&bound);
            within(odd_max.max(even_max), max_order, RAISE_HINT)?;
            if out.exists() {
                read_table(&out)?;
            }
            (
                Command::Table {
                    odd_max,
                    even_max,
                    out,
                },
                Format::Json,
                max_order,
            )
        }
    };
    Ok(CommandRequest {
        command,
        format: cli.format.unwrap_or(default_format),
        workers: cli.workers,
        max_order,
    })
}

/// Parses and validates command-line arguments (including the program name).
pub fn parse_request<I, T>(args: I) -> std::result::Result<CommandRequest, Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return Err(if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            });
        }
    };
    validate(cli).map_err(Outcome::usage)
}

pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_request(args) {
        Ok(req) => run(&req),
        Err(outcome) => outcome,
    }
}

/// Executes a validated request.
pub fn run(req: &CommandRequest) -> Outcome {
    let result = match req.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| dispatch(req)),
            Err(e) => return Outcome::usage(format!("cannot start {w} workers: {e}")),
        },
        None => dispatch(req),
    };
    match result {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome::usage(e),
    }
}

/// A report plus an optional plain-text form that replaces the generic
/// text renderer.
struct Report {
    value: Value,
    plain: Option<String>,
    ok: bool,
}

impl Report {
    fn new(value: impl Serialize, ok: bool) -> Self {
        Report {
            value: serde_json::to_value(value).expect("reports serialize"),
            plain: None,
            ok,
        }
    }
}

fn dispatch(req: &CommandRequest) -> Result<(u8, String)> {
    let report = match &req.command {
        Command::ScanRainbow(c) => {
            let hit = c.find_rainbow_ap3();
            let plain = match hit {
                Some(t) => format!("rainbow {},{},{}\n", t.x, t.y, t.z),
                None => "rainbow-free\n".to_string(),
            };
            Report {
                value: json!({
                    "group": c.group().literal(),
                    "rainbow_free": hit.is_none(),
                    "triple": hit.map(|t| [t.x, t.y, t.z]),
                }),
                plain: Some(plain),
                ok: true,
            }
        }
        Command::Classify(p) => Report::new(classify_prime(*p)?, true),
        Command::Mvalue { n, mode } => {
            let mut r = MnResult::compute(*n, *mode != MvalueMode::Formula, req.max_order)?;
            if *mode == MvalueMode::Search {
                r.formula = None;
                r.agree = None;
            }
            let ok = r.agree != Some(false);
            Report::new(r, ok)
        }
        Command::Gen(kind) => gen_report(kind)?,
        Command::VerifyMain(g) => {
            let (s, _) = sweep_odd(g, req.max_order)?;
            let ok = s.passed();
            Report::new(s, ok)
        }
        Command::VerifyEven(g) => {
            let (s, _) = sweep_even(g, req.max_order)?;
            let ok = s.passed();
            Report::new(s, ok)
        }
        Command::VerifySumsets {
            seed,
            pairs,
            max_order,
        } => {
            let s = sumset_suite(*seed, *pairs, *max_order)?;
            let ok = s.passed();
            Report::new(s, ok)
        }
        Command::Table {
            odd_max,
            even_max,
            out,
        } => {
            let rows = build_table(*odd_max, *even_max, out, req.max_order)?;
            let ok = rows.iter().all(|r| r.agree != Some(false));
            Report::new(rows, ok)
        }
    };
    let text = match (req.format, report.plain) {
        (Format::Json, _) => {
            let mut s = serde_json::to_string_pretty(&report.value).expect("valid json");
            s.push('\n');
            s
        }
        (Format::Text, Some(plain)) => plain,
        (Format::Text, None) => render_text(&report.value),
        (Format::Csv, _) => render_csv(&report.value),
    };
    Ok((if report.ok { EXIT_OK } else { EXIT_VIOLATION }, text))
}

fn subgroup_json(h: &Subgroup) -> Value {
    json!({ "order": h.order(), "members": h.members() })
}

fn witness_json(w: &RegularityWitness) -> Value {
    json!({
        "translation": w.translation,
        "subgroup": subgroup_json(&w.subgroup),
        "apex": w.apex,
    })
}

fn coloring_json(c: &ThreeColoring) -> Value {
    json!({
        "group": c.group().literal(),
        "labels": c.label_string(),
        "class_sizes": c.class_sizes(),
        "rainbow_free": c.is_rainbow_free(),
    })
}

fn gen_report(kind: &GenKind) -> Result<Report> {
    let (coloring, witness) = match kind {
        GenKind::Extremal(g) => {
            let e = gen_extremal_odd(g)?;
            (e.coloring, Some(e.witness))
        }
        GenKind::Prime(p) => (gen_prime_coloring(*p)?, None),
        GenKind::Counterexample(h) => (gen_counterexample_even(h)?.1, None),
    };
    let mut value = coloring_json(&coloring);
    if let Some(w) = witness {
        value["witness"] = witness_json(&w);
    }
    let ok = coloring.is_rainbow_free();
    Ok(Report {
        value,
        plain: Some(coloring.to_file_string()),
        ok,
    })
}

/// Reads a results table written by `table`.
pub fn read_table(path: &std::path::Path) -> std::result::Result<Vec<MnResult>, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| format!("{} is not a results table: {e}", path.display()))
}

fn write_table(path: &std::path::Path, rows: &[MnResult]) -> Result<()> {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, s)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

/// Rows for odd `n` in `3..=odd_max` and even `n` in `2..=even_max`, skipping
/// rows already present in `out` and rewriting it after each new row.
fn build_table(
    odd_max: u64,
    even_max: u64,
    out: &std::path::Path,
    max_order: usize,
) -> Result<Vec<MnResult>> {
    let mut rows = if out.exists() {
        read_table(out).map_err(Error::Precondition)?
    } else {
        Vec::new()
    };
    let wanted = (2..=odd_max.max(even_max)).filter(|&n| {
        if n % 2 == 1 {
            n <= odd_max
        } else {
            n <= even_max
        }
    });
    for n in wanted {
        if rows.iter().any(|r| r.n == n) {
            continue;
        }
        rows.push(MnResult::compute(n, true, max_order)?);
        rows.sort_by_key(|r| r.n);
        write_table(out, &rows)?;
    }
    if !out.exists() {
        write_table(out, &rows)?;
    }
    Ok(rows)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Aligned text: `key  value` lines for objects, a column table for arrays of
/// objects.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, val) in map {
                let _ = writeln!(out, "{k:<width$}  {}", scalar(val));
            }
        }
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let headers: Vec<&String> = items[0].as_object().expect("object").keys().collect();
            let cells: Vec<Vec<String>> = items
                .iter()
                .map(|it| headers.iter().map(|h| scalar(&it[h.as_str()])).collect())
                .collect();
            let widths: Vec<usize> = headers
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([h.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: Vec<&str>| {
                row.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(
                out,
                "{}",
                line(headers.iter().map(|h| h.as_str()).collect())
            );
            for r in &cells {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        other => {
            let _ = writeln!(out, "{}", scalar(other));
        }
    }
    out
}

fn csv_field(s: String) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// CSV: one header and one row per object; `key,value` rows for a lone
/// object.
pub fn render_csv(v: &Value) -> String {
    let mut out = String::new();
    let cell = |v: &Value| match v {
        Value::Null => String::new(),
        other => csv_field(scalar(other)),
    };
    match v {
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let headers: Vec<&String> = items[0].as_object().expect("object").keys().collect();
            let _ = writeln!(
                out,
                "{}",
                headers
                    .iter()
                    .map(|h| h.as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            for it in items {
                let row: Vec<String> = headers.iter().map(|h| cell(&it[h.as_str()])).collect();
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        Value::Object(map) => {
            out.push_str("key,value\n");
            for (k, val) in map {
                let _ = writeln!(out, "{},{}", csv_field(k.clone()), cell(val));
            }
        }
        other => {
            let _ = writeln!(out, "{}", cell(other));
        }
    }
    out
}
