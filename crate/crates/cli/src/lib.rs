//! Command-line front end: argument parsing, dispatch to the core crate and
//! the text/JSON/CSV emitters.
//!
//! Exit codes: 0 success, 2 invalid input, 3 outside a validity window,
//! 4 internal contradiction (an oracle disagreed with a closed form).

pub mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpn_bundles::comodule::Summand;
use cpn_bundles::counts::{count_bundles, j_closed, j_closed_amended, CITE_TOTAL};
use cpn_bundles::detection::{
    eo2_family, eop_family, find_projective_instances, ko_family, tmf2_families, toda_degree, unitary_families,
    DetectionInstance, TmfVariant, UnitaryFamily, CITE_TODA,
};
use cpn_bundles::eo::{
    closed_form_splitting, eo_neg1_shifted_xl, tensor_rule, EoEngine, Justification, CITE_SHIFTED_XL, CITE_SPLITTING,
    CITE_TENSOR, CITE_TOP_CELL,
};
use cpn_bundles::{counts, verify, Error, Execution, Prime};
use serde_json::{json, Value};

use report::{pair, CheckJson, ContributionJson, InstanceJson, Int, Payload, Report, Row};

/// Hard cap on the number of rows one `table` call may produce.
pub const MAX_ROWS: i64 = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;
pub const EXIT_CONTRADICTION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cpn-bundles", version, about = "p-primary counts of stably trivial bundles on CP^n")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Evaluate grids and tables on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-part of the number of stably trivial rank-r bundles on CP^n.
    Count(Point),
    /// EO-splitting of the stunted projective space CP^n_r.
    Split(Point),
    /// Decompose X_l ⊗ X_l2 into main and junk summands.
    Tensor(TensorArgs),
    /// EO_{-1} of CP^n_r ⊗ D CP^n_r, of Σ^{-2n} CP^n_r, or of Σ^{2s} X_l.
    EoGroup(EoGroupArgs),
    /// Detection instances from a named family, or all known ones at (p, r, n).
    Detect(DetectArgs),
    /// One row per rank at fixed corank.
    Table(TableArgs),
    /// Run the oracle-agreement grids.
    Selftest,
}

#[derive(Debug, Args)]
pub struct Point {
    #[arg(long, value_parser = parse_prime)]
    pub prime: Prime,
    #[arg(long)]
    pub rank: i64,
    #[arg(long)]
    pub dim: i64,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    #[arg(long, value_parser = parse_prime)]
    pub prime: Prime,
    #[arg(long)]
    pub l: i64,
    #[arg(long)]
    pub l2: i64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EoGroupArgs {
    #[arg(long, value_parser = parse_prime)]
    pub prime: Prime,
    #[arg(long)]
    pub rank: Option<i64>,
    #[arg(long)]
    pub dim: Option<i64>,
    /// EO_{-1} Σ^{-2n} CP^n_r instead of the tensor with the dual.
    #[arg(long)]
    pub top_cell: bool,
    /// Half-shift of a single Σ^{2s} X_l.
    #[arg(long)]
    pub s: Option<i64>,
    #[arg(long)]
    pub l: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ko,
    TmfW,
    TmfWk,
    Eo2,
    Eop,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 0)]
    pub t: i64,
    /// i, j or l of the family, whichever it is indexed by.
    #[arg(long)]
    pub index: Option<i64>,
    /// Which θ_j for the unitary eop family.
    #[arg(long)]
    pub j: Option<i64>,
    /// Report the class in π_* BU instead of the bundle on CP^n.
    #[arg(long)]
    pub unitary: bool,
    #[arg(long, value_parser = parse_prime)]
    pub prime: Option<Prime>,
    #[arg(long)]
    pub rank: Option<i64>,
    #[arg(long)]
    pub dim: Option<i64>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_parser = parse_prime)]
    pub prime: Prime,
    #[arg(long)]
    pub corank: i64,
    /// First rank (inclusive). Defaults to the least multiple of p² that is
    /// at least max(corank, 1).
    #[arg(long)]
    pub from: Option<i64>,
    /// Last rank (inclusive). Defaults to p² rows.
    #[arg(long)]
    pub to: Option<i64>,
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let v: i64 = s.parse().map_err(|e| format!("{e}"))?;
    Prime::new(v).map_err(|e| e.to_string())
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutOfWindow(_) => EXIT_WINDOW,
            Error::Contradiction(_) => EXIT_CONTRADICTION,
            _ => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: msg.into() }
}

fn pairs(xs: &[Summand]) -> Vec<[Int; 2]> {
    xs.iter().map(|&s| pair(s)).collect()
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn query(command: &str, fields: Value) -> BTreeMap<String, Value> {
    let mut q = BTreeMap::from([("command".to_string(), json!(command))]);
    if let Value::Object(m) = fields {
        q.extend(m.into_iter().filter(|(_, v)| !v.is_null()));
    }
    q
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn check_point(rank: i64, dim: i64) -> Result<(), Failure> {
    if rank < 0 || dim < rank {
        return Err(invalid(format!("need 0 <= rank <= dim, got rank={rank}, dim={dim}")));
    }
    Ok(())
}

fn cmd_count(a: &Point) -> Result<Report, Failure> {
    check_point(a.rank, a.dim)?;
    let res = count_bundles(a.rank, a.dim, a.prime);
    let mut r = Payload {
        kind: Some(res.kind.as_str().to_string()),
        valuation: res.valuation.map(Int::from),
        metastable: Some(res.metastable),
        eo_lower_bound: res.eo_lower_bound.map(Int::from),
        note: res.note.clone(),
        ..Payload::default()
    };
    if let Some(g) = &res.group {
        r.set_group(g);
    }
    if !res.evidence.is_empty() {
        r.instances = Some(res.evidence.iter().map(InstanceJson::from).collect());
    }
    Ok(Report {
        query: query("count", json!({"prime": a.prime.get(), "rank": a.rank, "dim": a.dim})),
        result: r,
        citations: res.citations,
    })
}

fn cmd_split(a: &Point) -> Result<Report, Failure> {
    check_point(a.rank, a.dim)?;
    let d = closed_form_splitting(a.rank, a.dim, a.prime)?;
    let result = Payload {
        main: Some(pairs(d.main())),
        junk: Some(pairs(d.junk())),
        decomposition: Some(pairs(d.all().summands())),
        ..Payload::default()
    };
    Ok(Report {
        query: query("split", json!({"prime": a.prime.get(), "rank": a.rank, "dim": a.dim})),
        result,
        citations: strings(&[CITE_SPLITTING]),
    })
}

fn cmd_tensor(a: &TensorArgs) -> Result<Report, Failure> {
    let d = tensor_rule(a.l, a.l2, a.prime)?;
    let result = Payload {
        main: Some(pairs(d.main())),
        junk: Some(pairs(d.junk())),
        decomposition: Some(pairs(d.all().summands())),
        ..Payload::default()
    };
    Ok(Report {
        query: query("tensor", json!({"prime": a.prime.get(), "l": a.l, "l2": a.l2})),
        result,
        citations: strings(&[CITE_TENSOR]),
    })
}

fn cmd_eo_group(a: &EoGroupArgs, exec: Execution) -> Result<Report, Failure> {
    let p = a.prime;
    let q = json!({
        "prime": p.get(), "rank": a.rank, "dim": a.dim, "s": a.s, "l": a.l,
        "top_cell": a.top_cell.then_some(true),
    });
    let q = query("eo-group", q);
    match (a.rank, a.dim, a.s, a.l) {
        (None, None, Some(s), Some(l)) if !a.top_cell => {
            let v = eo_neg1_shifted_xl(s, l, p)?;
            let mut r = Payload {
                justification: Some(
                    match v.justification {
                        Justification::Window => "window",
                        Justification::Connectivity => "connectivity",
                    }
                    .to_string(),
                ),
                ..Payload::default()
            };
            r.set_group(&v.group);
            Ok(Report { query: q, result: r, citations: strings(&[CITE_SHIFTED_XL]) })
        }
        (Some(rank), Some(dim), None, None) => {
            check_point(rank, dim)?;
            let mut r = Payload::default();
            if a.top_cell {
                r.set_group(&counts::eo_top_cell_closed(rank, dim, p)?);
                return Ok(Report { query: q, result: r, citations: strings(&[CITE_TOP_CELL, CITE_SPLITTING]) });
            }
            let engine = EoEngine::new(p)?.with_execution(exec);
            let report = engine.tensor_dual_report(rank, dim)?;
            let j = j_closed(dim, rank, p)?;
            let ja = j_closed_amended(dim, rank, p)?;
            if report.group.rank() as u32 != ja {
                return Err(Error::Contradiction(format!(
                    "engine gave {} but the amended count is {ja} at r={rank}, n={dim}",
                    report.group
                ))
                .into());
            }
            r.set_group(&report.group);
            r.j = Some(Int::from(j));
            r.j_amended = Some(Int::from(ja));
            r.main = Some(pairs(report.splitting.main()));
            r.junk = Some(pairs(report.splitting.junk()));
            r.contributions = Some(report.contributions.iter().map(ContributionJson::from).collect());
            if j != ja {
                r.note = Some(format!(
                    "the stated conditions give j = {j}; {} pair(s) with a top piece shorter than the bottom piece \
                     also contribute",
                    ja - j
                ));
            }
            Ok(Report { query: q, result: r, citations: strings(&[CITE_TOTAL, CITE_SPLITTING, CITE_TENSOR]) })
        }
        _ => Err(invalid("eo-group takes either --rank and --dim (optionally --top-cell) or --s and --l")),
    }
}

fn cmd_detect(a: &DetectArgs) -> Result<Report, Failure> {
    let mut q = json!({
        "t": a.t, "index": a.index, "j": a.j, "prime": a.prime.map(Prime::get),
        "rank": a.rank, "dim": a.dim, "unitary": a.unitary.then_some(true),
    });
    let mut result = Payload::default();
    let mut citations = Vec::new();
    let instances: Vec<DetectionInstance> = match a.family {
        Some(family) => {
            let name = family.to_possible_value().expect("no skipped variants").get_name().to_string();
            q["family"] = json!(name);
            let index = a.index.ok_or_else(|| invalid("--family needs --index"))?;
            let t = a.t;
            let inst = if a.unitary {
                let f = match family {
                    Family::Ko => UnitaryFamily::Ko { t, i: index },
                    Family::TmfW => UnitaryFamily::TmfW { t, i: index },
                    Family::TmfWk => UnitaryFamily::TmfWk { t, j: index },
                    Family::Eo2 => UnitaryFamily::Eo2 { t, l: index },
                    Family::Eop => {
                        let p = a.prime.ok_or_else(|| invalid("the eop family needs --prime"))?;
                        UnitaryFamily::Eop { p: p.get(), j: a.j.unwrap_or(1), l: index }
                    }
                };
                unitary_families(f)?
            } else {
                match family {
                    Family::Ko => ko_family(t, index)?,
                    Family::TmfW => tmf2_families(t, index, TmfVariant::W)?,
                    Family::TmfWk => tmf2_families(t, index, TmfVariant::WKappa4)?,
                    Family::Eo2 => eo2_family(t, index)?,
                    Family::Eop => eop_family(a.prime.ok_or_else(|| invalid("the eop family needs --prime"))?, index)?,
                }
            };
            vec![inst]
        }
        None => {
            let (Some(p), Some(rank), Some(dim)) = (a.prime, a.rank, a.dim) else {
                return Err(invalid("detect needs --family and --index, or --prime, --rank and --dim"));
            };
            check_point(rank, dim)?;
            let found = find_projective_instances(p, rank, dim);
            if let Ok(t) = toda_degree(rank, dim) {
                result.toda = Some(t.to_string());
                citations.push(CITE_TODA.to_string());
            } else {
                result.note = Some(format!("(r, n) = ({rank}, {dim}) is outside the metastable range"));
            }
            found
        }
    };
    for i in &instances {
        if !citations.contains(&i.citation) {
            citations.push(i.citation.clone());
        }
    }
    result.instances = Some(instances.iter().map(InstanceJson::from).collect());
    Ok(Report { query: query("detect", q), result, citations })
}

/// Ranks covered by a table request, validated against [`MAX_ROWS`].
pub fn table_range(p: Prime, corank: i64, from: Option<i64>, to: Option<i64>) -> Result<(i64, i64), Failure> {
    if corank < 0 {
        return Err(invalid(format!("corank must be >= 0, got {corank}")));
    }
    let q2 = p.get() * p.get();
    let from = from.unwrap_or_else(|| (corank.max(1) + q2 - 1) / q2 * q2);
    let to = to.unwrap_or(from + q2 - 1);
    if from < 0 {
        return Err(invalid(format!("ranks must be >= 0, got {from}")));
    }
    if to < from {
        return Err(invalid(format!("empty rank range {from}..={to}")));
    }
    if to - from >= MAX_ROWS {
        return Err(invalid(format!("{} rows requested; the limit is {MAX_ROWS}", to - from + 1)));
    }
    if to.checked_add(corank).is_none() {
        return Err(invalid("rank + corank overflows"));
    }
    Ok((from, to))
}

pub fn table_rows(p: Prime, corank: i64, from: i64, to: i64, exec: Execution) -> Vec<Row> {
    let ranks: Vec<i64> = (from..=to).collect();
    exec.map(&ranks, |&r| Row::new(r, r + corank, &count_bundles(r, r + corank, p)))
}

fn cmd_table(a: &TableArgs, exec: Execution) -> Result<Report, Failure> {
    let (from, to) = table_range(a.prime, a.corank, a.from, a.to)?;
    let rows = table_rows(a.prime, a.corank, from, to, exec);
    let mut citations: Vec<String> = Vec::new();
    for row in &rows {
        for c in row.citation.split(';').filter(|c| !c.is_empty()) {
            if !citations.iter().any(|x| x == c) {
                citations.push(c.to_string());
            }
        }
    }
    Ok(Report {
        query: query("table", json!({"prime": a.prime.get(), "corank": a.corank, "from": from, "to": to})),
        result: Payload { rows: Some(rows), ..Payload::default() },
        citations,
    })
}

/// Runs every grid; the second value is whether any failure is unexplained.
pub fn selftest(exec: Execution) -> (Report, bool) {
    let outcomes = verify::run_all(exec);
    let blocking = outcomes.iter().any(|o| o.blocking());
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let documented = outcomes.iter().filter(|o| !o.passed() && !o.blocking()).count();
    let unexplained = outcomes.len() - passed - documented;
    let note = format!("{passed} passed, {documented} failed with a documented cause, {unexplained} unexplained");
    let report = Report {
        query: query("selftest", json!({})),
        result: Payload {
            checks: Some(outcomes.iter().map(CheckJson::from).collect()),
            kind: Some(if blocking { "fail" } else { "pass" }.to_string()),
            note: Some(note),
            ..Payload::default()
        },
        citations: Vec::new(),
    };
    (report, blocking)
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    let exec = execution(cli.sequential);
    match &cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Split(a) => cmd_split(a),
        Command::Tensor(a) => cmd_tensor(a),
        Command::EoGroup(a) => cmd_eo_group(a, exec),
        Command::Detect(a) => cmd_detect(a),
        Command::Table(a) => cmd_table(a, exec),
        Command::Selftest => {
            let (report, blocking) = selftest(exec);
            if blocking {
                Err(Failure { code: EXIT_CONTRADICTION, message: report.to_text() })
            } else {
                Ok(report)
            }
        }
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(report.to_text()),
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv().map_err(|e| invalid(format!("csv: {e}"))),
    }
}

/// Parses `argv` (including the program name), runs it, writes data to `out`
/// or the `--output` file and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    let rendered = execute(&cli).and_then(|r| render(&r, cli.format));
    match rendered {
        Ok(data) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, data.as_bytes()),
                None => out.write_all(data.as_bytes()).and_then(|_| out.flush()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    EXIT_INVALID
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message.trim_end());
            f.code
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
