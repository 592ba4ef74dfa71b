//! `eisdenom`: scriptable reports over the eisdenom library.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use eisdenom::acceptance::{self, Status};
use eisdenom::arith::{
    fmt_rat, is_prime, padic_val, primes_up_to, zeta_denominator, zeta_neg, zeta_numerator,
};
use eisdenom::eis_eval::{
    cocycle_cached, delta_p_nu, denominator_eis, dp_value, lift_limit, pair_cycle, pair_lift,
    w_series, EisError,
};
use eisdenom::modsym::{build_lift, integrality_report, is_cycle};
use eisdenom::padic::{irregular_report, PadicError};
use eisdenom::quadfield::{
    partial_zeta_table, rademacher, sharpness_search, valid_discriminant, QuadError,
};
use eisdenom::sympoly::Mat2;

const MAX_M: usize = 720;
const MAX_PRIME_BOUND: u64 = 1_000_000;
const MAX_DISC: i64 = 100_000;
const MAX_IRREGULAR_P: u64 = 20_000;
const MAX_LIFT_TERMS: u128 = 2_000_000;
const MAX_GAMMA_ENTRY: i64 = 1_000_000_000;
const THREADS_VAR: &str = "EISDENOM_THREADS";

#[derive(Parser)]
#[command(
    name = "eisdenom",
    version,
    about = "Exact Eisenstein denominator reports"
)]
struct Cli {
    /// Output format (json by default; text for --selftest).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Run the acceptance suite and print a pass/fail matrix.
    #[arg(long)]
    selftest: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// zeta(1 - m) with its numerator N_m and denominator J_m.
    Zeta {
        #[arg(long)]
        m: usize,
    },
    /// Compares delta_p(n) with ord_p(N_{n+2}) for primes up to a bound.
    Denominator {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        prime_bound: u64,
    },
    /// D_p(n, nu) and its defect delta_p(n, nu).
    Dp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nu: usize,
        #[arg(long)]
        p: u64,
    },
    /// Closed-form pairing of the m-th lift against its p-adic limit.
    PairLift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        nu: usize,
        #[arg(long)]
        m: usize,
    },
    /// Higher Rademacher symbol Psi_k(gamma).
    Rademacher {
        #[arg(long)]
        k: usize,
        /// Matrix entries a,b,c,d of [[a,b],[c,d]].
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Partial zeta values zeta_O(A, 1 - k) for every narrow class.
    PartialZeta {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        k: usize,
    },
    /// Smallest discriminant whose J_2k-scaled partial zeta is a p-unit.
    Sharpness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 400)]
        max_disc: i64,
    },
    /// Builds lift cycles for every nu and checks cycle, integrality and pairing.
    LiftVerify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
    },
    /// Irregular indices and the Skula bound for primes 5 <= p <= max-p.
    Irregular {
        #[arg(long)]
        max_p: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<EisError> for CliError {
    fn from(e: EisError) -> Self {
        match e {
            EisError::NuRange { .. }
            | EisError::Weight(_)
            | EisError::NotPrime(_)
            | EisError::NotSl2 => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::InvalidDiscriminant(_)
            | QuadError::WeightTooSmall(_)
            | QuadError::DegenerateTrace
            | QuadError::NotSl2 => CliError::Usage(e.to_string()),
            QuadError::Eis(inner) => inner.into(),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::BadPrime(_) | PadicError::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

/// A summary object plus an optional table; `failure` marks an assertion that did not hold.
struct Report {
    command: &'static str,
    summary: Map<String, Value>,
    rows_key: &'static str,
    rows: Vec<Value>,
    failure: Option<String>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            summary: Map::new(),
            rows_key: "rows",
            rows: Vec::new(),
            failure: None,
        }
    }

    fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(1));
        obj.insert("command".into(), json!(self.command));
        for (k, v) in &self.summary {
            obj.insert(k.clone(), v.clone());
        }
        if !self.rows.is_empty() {
            obj.insert(self.rows_key.into(), Value::Array(self.rows.clone()));
        }
        Value::Object(obj)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}

fn require_weight(n: usize) -> Result<(), CliError> {
    require(n >= 2 && n.is_multiple_of(2), || {
        format!("n must be even and at least 2, got {n}")
    })?;
    require(n + 2 <= MAX_M, || {
        format!("n must satisfy n + 2 <= {MAX_M}, got {n}")
    })
}

fn require_prime(p: u64) -> Result<(), CliError> {
    require(is_prime(p), || format!("p must be prime, got {p}"))
}

fn require_nu(n: usize, nu: usize) -> Result<(), CliError> {
    require(nu >= 1 && nu < n, || {
        format!("nu must satisfy 1 <= nu <= n - 1 = {}, got {nu}", n - 1)
    })
}

fn require_k(k: usize) -> Result<(), CliError> {
    require(k >= 2, || format!("k must be at least 2, got {k}"))?;
    require(2 * k <= MAX_M, || {
        format!("k must satisfy 2k <= {MAX_M}, got {k}")
    })
}

/// A valuation as a JSON number, or "inf" for zero.
fn val_json(v: Option<i64>) -> Value {
    v.map_or_else(|| json!("inf"), |x| json!(x))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_zeta(m: usize) -> Result<Report, CliError> {
    require((1..=MAX_M).contains(&m), || {
        format!("m must satisfy 1 <= m <= {MAX_M}, got {m}")
    })?;
    let v = zeta_neg(m);
    Ok(Report::new("zeta")
        .field("m", m)
        .field("value", fmt_rat(&v))
        .field("N", zeta_numerator(m).to_string())
        .field("J", zeta_denominator(m).to_string()))
}

fn cmd_denominator(n: usize, prime_bound: u64) -> Result<Report, CliError> {
    require_weight(n)?;
    require((2..=MAX_PRIME_BOUND).contains(&prime_bound), || {
        format!("prime-bound must satisfy 2 <= prime-bound <= {MAX_PRIME_BOUND}, got {prime_bound}")
    })?;
    let rep = denominator_eis(n, prime_bound)?;
    let mismatched: Vec<u64> = rep
        .per_prime
        .iter()
        .filter(|r| !r.matches)
        .map(|r| r.p)
        .collect();
    let Value::Object(mut summary) = to_value(&rep) else {
        unreachable!()
    };
    let rows = match summary.shift_remove("per_prime") {
        Some(Value::Array(rows)) => rows,
        _ => Vec::new(),
    };
    let mut report = Report::new("denominator");
    report.summary = summary;
    report.rows_key = "per_prime";
    report.rows = rows;
    if !mismatched.is_empty() {
        report.failure = Some(format!(
            "delta_p differs from ord_p(N) at p in {mismatched:?}"
        ));
    }
    Ok(report)
}

fn cmd_dp(n: usize, nu: usize, p: u64) -> Result<Report, CliError> {
    require_weight(n)?;
    require_nu(n, nu)?;
    require_prime(p)?;
    let d = dp_value(n, nu, p)?;
    Ok(Report::new("dp")
        .field("n", n)
        .field("nu", nu)
        .field("p", p)
        .field("D_p", fmt_rat(&d))
        .field("ord_p", val_json(padic_val(&d, p)))
        .field("delta_p", delta_p_nu(n, nu, p)?))
}

fn cmd_pair_lift(n: usize, p: u64, nu: usize, m: usize) -> Result<Report, CliError> {
    require_weight(n)?;
    require_nu(n, nu)?;
    require_prime(p)?;
    require((1..=MAX_M).contains(&m), || {
        format!("m must satisfy 1 <= m <= {MAX_M}, got {m}")
    })?;
    let m = m as u32;
    let value = pair_lift(n, p, nu, m)?;
    let limit = lift_limit(n, nu, p)?;
    Ok(Report::new("pair-lift")
        .field("n", n)
        .field("p", p)
        .field("nu", nu)
        .field("m", m)
        .field("value", fmt_rat(&value))
        .field("W", fmt_rat(&w_series(n, p, nu, m)?))
        .field("limit", fmt_rat(&limit))
        .field("ord_p_defect", val_json(padic_val(&(&value - &limit), p))))
}

fn parse_gamma(s: &str) -> Result<Mat2, CliError> {
    let entries: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("gamma must be four integers a,b,c,d, got {s:?}")))?;
    let [a, b, c, d] = entries[..] else {
        return Err(usage(format!(
            "gamma must have exactly four entries, got {}",
            entries.len()
        )));
    };
    require(entries.iter().all(|x| x.abs() <= MAX_GAMMA_ENTRY), || {
        format!("gamma entries must satisfy |x| <= {MAX_GAMMA_ENTRY}")
    })?;
    require(a as i128 * d as i128 - b as i128 * c as i128 == 1, || {
        format!(
            "gamma must have determinant 1, got ad - bc = {}",
            a as i128 * d as i128 - b as i128 * c as i128
        )
    })?;
    require(a + d != 0, || "gamma must have nonzero trace".to_string())?;
    Ok(Mat2::from_i64(a, b, c, d))
}

fn cmd_rademacher(k: usize, gamma: &str) -> Result<Report, CliError> {
    require_k(k)?;
    let g = parse_gamma(gamma)?;
    let rep = rademacher(k, &g)?;
    let mut report = Report::new("rademacher");
    let Value::Object(summary) = to_value(&rep) else {
        unreachable!()
    };
    report.summary = summary;
    if !rep.integral {
        report.failure = Some(format!(
            "Psi_{k} is not an integer: {}",
            fmt_rat(&rep.value)
        ));
    }
    Ok(report)
}

fn cmd_partial_zeta(disc: i64, k: usize) -> Result<Report, CliError> {
    require(valid_discriminant(disc), || {
        format!("disc must be a positive non-square congruent to 0 or 1 mod 4, got {disc}")
    })?;
    require(disc <= MAX_DISC, || {
        format!("disc must be at most {MAX_DISC}, got {disc}")
    })?;
    require_k(k)?;
    let rows = partial_zeta_table(disc, k)?;
    let bad: Vec<usize> = rows
        .iter()
        .filter(|r| !r.j_times_zeta.is_integer())
        .map(|r| r.class_index)
        .collect();
    let mut report = Report::new("partial-zeta")
        .field("J", zeta_denominator(2 * k).to_string())
        .field("classes", rows.len());
    report.rows = rows.iter().map(to_value).collect();
    if !bad.is_empty() {
        report.failure = Some(format!("J * zeta is not integral for classes {bad:?}"));
    }
    Ok(report)
}

fn cmd_sharpness(k: usize, p: u64, max_disc: i64) -> Result<Report, CliError> {
    require_k(k)?;
    require_prime(p)?;
    require((5..=MAX_DISC).contains(&max_disc), || {
        format!("max-disc must satisfy 5 <= max-disc <= {MAX_DISC}, got {max_disc}")
    })?;
    let rep = sharpness_search(k, p, max_disc)?;
    let mut report = Report::new("sharpness");
    let Value::Object(summary) = to_value(&rep) else {
        unreachable!()
    };
    report.summary = summary;
    Ok(report)
}

fn cmd_lift_verify(n: usize, p: u64, m: usize) -> Result<Report, CliError> {
    require_weight(n)?;
    require_prime(p)?;
    require((1..=MAX_M).contains(&m), || {
        format!("m must satisfy 1 <= m <= {MAX_M}, got {m}")
    })?;
    require(
        (p as u128)
            .checked_pow(m as u32)
            .is_some_and(|t| t <= MAX_LIFT_TERMS),
        || format!("lift size p^m must be at most {MAX_LIFT_TERMS}, got {p}^{m}"),
    )?;
    let m = m as u32;
    let cocycle = cocycle_cached(n)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for nu in 1..n {
        let chain = build_lift(n, p, nu, m).map_err(|e| CliError::Failure(e.to_string()))?;
        let cycle = is_cycle(&chain).map_err(|e| CliError::Failure(e.to_string()))?;
        let min_ord = integrality_report(&chain, p);
        let integral = min_ord.is_none_or(|o| o >= 0);
        let chain_pair = pair_cycle(&cocycle, &chain)?;
        let closed = pair_lift(n, p, nu, m)?;
        let agree = chain_pair == closed;
        if !(cycle && integral && agree) {
            failures.push(nu);
        }
        rows.push(json!({
            "nu": nu,
            "terms": chain.len(),
            "is_cycle": cycle,
            "min_ord_p": val_json(min_ord),
            "integral": integral,
            "chain_pairing": fmt_rat(&chain_pair),
            "closed_form": fmt_rat(&closed),
            "agree": agree,
        }));
    }
    let mut report = Report::new("lift-verify")
        .field("n", n)
        .field("p", p)
        .field("m", m)
        .field("all_ok", failures.is_empty());
    report.rows = rows;
    if !failures.is_empty() {
        report.failure = Some(format!("lift checks failed for nu in {failures:?}"));
    }
    Ok(report)
}

fn cmd_irregular(max_p: u64) -> Result<Report, CliError> {
    require((5..=MAX_IRREGULAR_P).contains(&max_p), || {
        format!("max-p must satisfy 5 <= max-p <= {MAX_IRREGULAR_P}, got {max_p}")
    })?;
    use rayon::prelude::*;
    let primes: Vec<u64> = primes_up_to(max_p)
        .into_iter()
        .filter(|&p| p >= 5)
        .collect();
    let reps = primes
        .par_iter()
        .map(|&p| irregular_report(p))
        .collect::<Result<Vec<_>, _>>()?;
    let bad: Vec<u64> = reps
        .iter()
        .filter(|r| !r.skula_bound_ok)
        .map(|r| r.p)
        .collect();
    let mut report = Report::new("irregular")
        .field("max_p", max_p)
        .field("primes", reps.len())
        .field(
            "irregular_primes",
            reps.iter().filter(|r| r.index > 0).count(),
        );
    report.rows = reps.iter().map(to_value).collect();
    if !bad.is_empty() {
        report.failure = Some(format!("Skula bound fails at {bad:?}"));
    }
    Ok(report)
}

fn cmd_selftest() -> Report {
    let outcomes = acceptance::run_all();
    let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.id)
        .collect();
    let mut report = Report::new("selftest")
        .field("passed", count(Status::Pass))
        .field("failed", count(Status::Fail))
        .field("reported", count(Status::Reported));
    report.rows_key = "criteria";
    report.rows = outcomes.iter().map(to_value).collect();
    if !failed.is_empty() {
        report.failure = Some(format!("criteria failed: {failed:?}"));
    }
    report
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(scalar_text).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

/// Flattens nested objects into dotted keys, preserving field order.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, inner, out);
            }
        }
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

fn render_csv(report: &Report) -> Result<String, CliError> {
    let mut head = vec![
        ("schema".to_string(), "1".to_string()),
        ("command".to_string(), report.command.to_string()),
    ];
    flatten("", &Value::Object(report.summary.clone()), &mut head);
    let lines: Vec<Vec<(String, String)>> = if report.rows.is_empty() {
        vec![head]
    } else {
        report
            .rows
            .iter()
            .map(|row| {
                let mut line = head.clone();
                flatten("", row, &mut line);
                line
            })
            .collect()
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Failure(e.to_string());
    w.write_record(lines[0].iter().map(|(k, _)| k))
        .map_err(io_err)?;
    for line in &lines {
        w.write_record(line.iter().map(|(_, v)| v))
            .map_err(io_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failure(e.to_string()))
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    if report.command == "selftest" {
        for row in &report.rows {
            let outcome: &Map<String, Value> = row.as_object().expect("outcome object");
            let tag = scalar_text(&outcome["status"]).to_uppercase();
            let _ = writeln!(
                out,
                "[{tag}] {:>2} {}: {}",
                scalar_text(&outcome["id"]),
                scalar_text(&outcome["name"]),
                scalar_text(&outcome["detail"])
            );
        }
    }
    let _ = writeln!(out, "command: {}", report.command);
    let mut summary = Vec::new();
    flatten("", &Value::Object(report.summary.clone()), &mut summary);
    for (k, v) in summary {
        let _ = writeln!(out, "{k}: {v}");
    }
    if report.rows.is_empty() || report.command == "selftest" {
        return out;
    }
    let table: Vec<Vec<(String, String)>> = report
        .rows
        .iter()
        .map(|row| {
            let mut cells = Vec::new();
            flatten("", row, &mut cells);
            cells
        })
        .collect();
    let header: Vec<&String> = table[0].iter().map(|(k, _)| k).collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            table
                .iter()
                .map(|r| r[i].1.len())
                .chain([header[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let fmt_line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}:", report.rows_key);
    let _ = writeln!(
        out,
        "{}",
        fmt_line(header.iter().map(|s| s.as_str()).collect())
    );
    for row in &table {
        let _ = writeln!(
            out,
            "{}",
            fmt_line(row.iter().map(|(_, v)| v.as_str()).collect())
        );
    }
    out
}

fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json())
                .map_err(|e| CliError::Failure(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(report),
        Format::Text => Ok(render_text(report)),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
        usage(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Failure(e.to_string()))
}

fn dispatch(cmd: &Cmd) -> Result<Report, CliError> {
    match cmd {
        Cmd::Zeta { m } => cmd_zeta(*m),
        Cmd::Denominator { n, prime_bound } => cmd_denominator(*n, *prime_bound),
        Cmd::Dp { n, nu, p } => cmd_dp(*n, *nu, *p),
        Cmd::PairLift { n, p, nu, m } => cmd_pair_lift(*n, *p, *nu, *m),
        Cmd::Rademacher { k, gamma } => cmd_rademacher(*k, gamma),
        Cmd::PartialZeta { disc, k } => cmd_partial_zeta(*disc, *k),
        Cmd::Sharpness { k, p, max_disc } => cmd_sharpness(*k, *p, *max_disc),
        Cmd::LiftVerify { n, p, m } => cmd_lift_verify(*n, *p, *m),
        Cmd::Irregular { max_p } => cmd_irregular(*max_p),
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    configure_threads()?;
    match (&cli.command, cli.selftest) {
        (Some(_), true) => Err(usage("--selftest takes no subcommand")),
        (None, true) => Ok(cmd_selftest()),
        (Some(cmd), false) => dispatch(cmd),
        (None, false) => Err(usage("a subcommand or --selftest is required (see --help)")),
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli
        .format
        .unwrap_or(if cli.selftest && cli.command.is_none() {
            Format::Text
        } else {
            Format::Json
        });
    let report = match run(&cli) {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = match render(&report, format) {
        Ok(t) => t,
        Err(CliError::Usage(msg) | CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&text, cli.output.as_ref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    match report.failure {
        Some(msg) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_gamma_accepts_sl2() {
        assert_eq!(
            parse_gamma("2, -1, -3, 2").unwrap(),
            Mat2::from_i64(2, -1, -3, 2)
        );
    }

    #[test]
    fn parse_gamma_rejects_bad_input() {
        for bad in ["1,1,0", "1,1,0,x", "2,0,0,2", "0,-1,1,0"] {
            assert!(matches!(parse_gamma(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn flatten_uses_dotted_keys_in_order() {
        let v = json!({"a": 1, "w": {"D": 5, "f": "x"}, "l": ["1", "2"], "z": null});
        let mut out = Vec::new();
        flatten("", &v, &mut out);
        let expect = [
            ("a", "1"),
            ("w.D", "5"),
            ("w.f", "x"),
            ("l", "1;2"),
            ("z", ""),
        ];
        assert_eq!(out, expect.map(|(k, v)| (k.to_string(), v.to_string())));
    }

    #[test]
    fn passing_report_has_schema_and_no_failure() {
        let rep = cmd_rademacher(2, "1,1,0,1").unwrap();
        assert!(rep.failure.is_none());
        let json = rep.to_json();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["command"], "rademacher");
    }

    #[test]
    fn library_errors_map_to_exit_classes() {
        assert!(matches!(
            CliError::from(EisError::NotPrime(4)),
            CliError::Usage(_)
        ));
        assert!(matches!(
            CliError::from(EisError::Inconsistent),
            CliError::Failure(_)
        ));
        assert!(matches!(
            CliError::from(QuadError::Eis(EisError::Weight(3))),
            CliError::Usage(_)
        ));
        assert!(matches!(
            CliError::from(PadicError::DivisionByZero),
            CliError::Failure(_)
        ));
    }
}
