use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use latin_rect::bench;
use latin_rect::column_counts::ColumnCounts;
use latin_rect::crosscheck::{run_selftest, SelftestConfig, SuiteReport};
use latin_rect::expression::{generate_expression, DEFAULT_MAX_EXPRESSION_K};
use latin_rect::oracle::{brute_force_count, lonely_hall_count, profile_of, HallSet};
use latin_rect::profile::FactorialTable;
use latin_rect::tally::NoOps;
use latin_rect::{
    Bracket, CountResult, Error, EvalOptions, MethodRegistry, RendererRegistry, Variant, DEFAULT_MAX_TERMS,
};

const MAX_TERMS_ENV: &str = "LATIN_RECT_MAX_TERMS";

const EXIT_USAGE: u8 = 1;
const EXIT_GUARD: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "latin-rect", version, about = "Exact counts of k x n Latin rectangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count k x n Latin rectangles with a chosen method.
    Count(CountArgs),
    /// Print the formula for R_k(n).
    Expr(ExprArgs),
    /// Tabulate R_k(n) and L_k(n) over a range of n.
    Table(TableArgs),
    /// Operation counts and fitted growth exponents over a range of n.
    Bench(BenchArgs),
    /// Brute-force counts, optionally of lonely-hall configurations.
    Oracle(OracleArgs),
    /// Cross-check every formula against brute force.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
    Latex,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Human => "human",
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Latex => "latex",
            Format::Text => "text",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BracketArg {
    Derived,
    Literal,
}

#[derive(Args)]
struct VariantArgs {
    /// Count reduced rectangles (first row 1..n); the default.
    #[arg(long, conflicts_with = "total")]
    reduced: bool,
    /// Count all rectangles.
    #[arg(long)]
    total: bool,
}

impl VariantArgs {
    fn variant(&self) -> Variant {
        if self.total {
            Variant::Total
        } else {
            Variant::Reduced
        }
    }
}

#[derive(Args)]
struct Limits {
    /// Ceiling on summation terms; overrides the LATIN_RECT_MAX_TERMS variable.
    #[arg(long, value_parser = parse_positive)]
    max_terms: Option<BigUint>,
    /// Largest k the brute-force oracle accepts.
    #[arg(long)]
    oracle_max_k: Option<usize>,
    /// Largest n the brute-force oracle accepts.
    #[arg(long)]
    oracle_max_n: Option<usize>,
}

impl Limits {
    fn options(&self, threads: usize) -> Result<EvalOptions, Failure> {
        let max_terms = match &self.max_terms {
            Some(v) => v.clone(),
            None => match std::env::var(MAX_TERMS_ENV) {
                Ok(raw) => parse_positive(&raw).map_err(|e| Failure::usage(format!("{MAX_TERMS_ENV}: {e}")))?,
                Err(_) => BigUint::from(DEFAULT_MAX_TERMS),
            },
        };
        let mut opts = EvalOptions {
            max_terms,
            threads,
            ..EvalOptions::default()
        };
        if let Some(k) = self.oracle_max_k {
            opts.latin_limits.max_k = k;
            opts.lonely_hall_limits.max_k = k;
        }
        if let Some(n) = self.oracle_max_n {
            opts.latin_limits.max_n = n;
            opts.lonely_hall_limits.max_n = n;
        }
        Ok(opts)
    }
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    variant: VariantArgs,
    /// formula, factorial-bridge, direct-L or oracle; defaults to formula
    /// (reduced) or factorial-bridge (total).
    #[arg(long)]
    method: Option<String>,
    /// Two-row bracket used by direct-L.
    #[arg(long, value_enum, default_value = "derived")]
    bracket: BracketArg,
    /// human, json or csv.
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    limits: Limits,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExprArgs {
    #[arg(long)]
    k: usize,
    /// text or latex.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Largest k to print.
    #[arg(long, default_value_t = DEFAULT_MAX_EXPRESSION_K)]
    max_k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    k: usize,
    /// A single n or an inclusive range a..b.
    #[arg(long, value_parser = parse_range)]
    n: (usize, usize),
    /// human, json or csv.
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    limits: Limits,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    k: usize,
    /// A single n or an inclusive range a..b.
    #[arg(long, value_parser = parse_range)]
    n: (usize, usize),
    #[arg(long, default_value_t = 1)]
    step: usize,
    /// Also write the CSV report to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// csv or json (one object per line).
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Ignored beyond validation: measurements always run on one thread.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    limits: Limits,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    variant: VariantArgs,
    /// Omitted halls as row:floor pairs, e.g. "2:1,2:2"; counts lonely-hall
    /// configurations instead of Latin rectangles.
    #[arg(long)]
    halls: Option<String>,
    /// human or json.
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[command(flatten)]
    limits: Limits,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Check formula against oracle for k up to this.
    #[arg(long)]
    max_k: Option<usize>,
    /// Check formula against oracle for n up to this.
    #[arg(long)]
    max_n: Option<usize>,
    /// Seed for the random hall-set sample.
    #[arg(long)]
    seed: Option<u64>,
    /// human or json.
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn parse_positive(s: &str) -> Result<BigUint, String> {
    let v: BigUint = s.trim().parse().map_err(|_| format!("`{s}` is not a non-negative integer"))?;
    if v == BigUint::from(0u8) {
        return Err("the ceiling must be positive".into());
    }
    Ok(v)
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a non-negative integer"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_halls(k: usize, n: usize, s: &str) -> Result<HallSet, Failure> {
    let mut pairs = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parsed = item
            .split_once(':')
            .and_then(|(r, f)| Some((r.trim().parse().ok()?, f.trim().parse().ok()?)));
        match parsed {
            Some(p) => pairs.push(p),
            None => return Err(Failure::usage(format!("bad hall `{item}`; expected row:floor"))),
        }
    }
    HallSet::from_pairs(k, n, pairs).map_err(Failure::from)
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GuardExceeded { .. } => EXIT_GUARD,
            Error::Inconsistent(_) => EXIT_MISMATCH,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn allow(format: Format, allowed: &[Format], command: &str) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| f.name()).collect();
        Err(Failure::usage(format!(
            "`{command}` does not support --format {}; use one of {}",
            format.name(),
            names.join(", ")
        )))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
        }
    }
}

/// Machine-readable count record; every count is a decimal string.
#[derive(Serialize, Deserialize)]
struct CountRecord {
    k: usize,
    n: usize,
    variant: String,
    method: String,
    value: String,
    terms: String,
    adds: String,
    mults: String,
    elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extrapolated: Option<bool>,
}

impl From<&CountResult> for CountRecord {
    fn from(r: &CountResult) -> Self {
        CountRecord {
            k: r.k,
            n: r.n,
            variant: r.variant.to_string(),
            method: r.method.to_string(),
            value: r.value.to_string(),
            terms: r.stats.terms.to_string(),
            adds: r.stats.adds.to_string(),
            mults: r.stats.mults_actual.to_string(),
            elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
            extrapolated: r.extrapolated.then_some(true),
        }
    }
}

fn symbol(variant: Variant) -> char {
    match variant {
        Variant::Reduced => 'R',
        Variant::Total => 'L',
    }
}

fn cmd_count(a: CountArgs) -> Result<(), Failure> {
    allow(a.format, &[Format::Human, Format::Json, Format::Csv], "count")?;
    let variant = a.variant.variant();
    let mut opts = a.limits.options(a.threads)?;
    opts.bracket = match a.bracket {
        BracketArg::Derived => Bracket::Derived,
        BracketArg::Literal => Bracket::Literal,
    };
    let registry = MethodRegistry::with_builtin();
    let name = a.method.as_deref().unwrap_or(MethodRegistry::default_for(variant));
    let method = registry.get(name).map_err(|e| {
        Failure::usage(format!("{e}; available: {}", registry.names().join(", ")))
    })?;
    let res = method.count(a.k, a.n, variant, &opts)?;
    let text = match a.format {
        Format::Json => {
            let mut s = serde_json::to_string(&CountRecord::from(&res)).expect("plain record serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let r = CountRecord::from(&res);
            format!(
                "k,n,variant,method,value,terms,adds,mults,elapsed_ms\n{},{},{},{},{},{},{},{},{:.3}\n",
                r.k, r.n, r.variant, r.method, r.value, r.terms, r.adds, r.mults, r.elapsed_ms
            )
        }
        _ => {
            let mut s = format!("{}_{}({}) = {}\n", symbol(variant), res.k, res.n, res.value);
            let _ = writeln!(s, "method: {}", res.method);
            let _ = writeln!(
                s,
                "terms: {}  adds: {}  mults: {}",
                res.stats.terms, res.stats.adds, res.stats.mults_actual
            );
            if res.extrapolated {
                s.push_str("note: the non-reduced sum for k > 3 follows the k <= 3 pattern\n");
            }
            s
        }
    };
    emit(&a.out, &text)
}

fn cmd_expr(a: ExprArgs) -> Result<(), Failure> {
    allow(a.format, &[Format::Text, Format::Latex], "expr")?;
    let e = generate_expression(a.k, a.max_k)?;
    let text = RendererRegistry::with_builtin().get(a.format.name())?.render(&e);
    emit(&a.out, &text)
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    #[serde(rename = "R")]
    r: String,
    #[serde(rename = "L")]
    l: String,
}

fn cmd_table(a: TableArgs) -> Result<(), Failure> {
    allow(a.format, &[Format::Human, Format::Json, Format::Csv], "table")?;
    let opts = a.limits.options(a.threads)?;
    let registry = MethodRegistry::with_builtin();
    let formula = registry.get(MethodRegistry::default_for(Variant::Reduced))?;
    let mut rows = Vec::new();
    for n in a.n.0..=a.n.1 {
        let r = formula.count(a.k, n, Variant::Reduced, &opts)?.value;
        let l = &r * FactorialTable::new(n).get(n);
        rows.push(TableRow {
            n,
            r: r.to_string(),
            l: l.to_string(),
        });
    }
    let mut text = String::new();
    match a.format {
        Format::Csv => {
            let _ = writeln!(text, "n,R_{k}(n),L_{k}(n)", k = a.k);
            for row in &rows {
                let _ = writeln!(text, "{},{},{}", row.n, row.r, row.l);
            }
        }
        Format::Json => {
            for row in &rows {
                text.push_str(&serde_json::to_string(row).expect("plain record serializes"));
                text.push('\n');
            }
        }
        _ => {
            let rw = rows.iter().map(|r| r.r.len()).max().unwrap_or(0).max(7);
            let nw = rows.iter().map(|r| r.n.to_string().len()).max().unwrap_or(0).max(1);
            let _ = writeln!(text, "{:>nw$}  {:>rw$}  L_{k}(n)", "n", format!("R_{}(n)", a.k), k = a.k);
            for row in &rows {
                let _ = writeln!(text, "{:>nw$}  {:>rw$}  {}", row.n, row.r, row.l);
            }
        }
    }
    emit(&a.out, &text)
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    allow(a.format, &[Format::Csv, Format::Json], "bench")?;
    if a.threads.is_some_and(|t| t != 1) {
        eprintln!("note: bench always measures on a single thread");
    }
    let opts = a.limits.options(1)?;
    let s = bench::sweep(a.k, a.n.0, a.n.1, a.step, &opts.max_terms)?;
    let csv = bench::to_csv(&s);
    if let Some(path) = &a.csv {
        std::fs::write(path, &csv).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = match a.format {
        Format::Json => bench::to_json_lines(&s),
        _ => csv,
    };
    emit(&a.out, &text)
}

#[derive(Serialize)]
struct OracleRecord {
    k: usize,
    n: usize,
    variant: Option<String>,
    halls: Option<Vec<(usize, usize)>>,
    value: String,
    /// G evaluated on the profile of the hall set.
    formula_g: Option<String>,
}

fn cmd_oracle(a: OracleArgs) -> Result<(), Failure> {
    allow(a.format, &[Format::Human, Format::Json], "oracle")?;
    let opts = a.limits.options(1)?;
    let record = match &a.halls {
        None => {
            let variant = a.variant.variant();
            let value = brute_force_count(a.k, a.n, variant, opts.latin_limits)?;
            OracleRecord {
                k: a.k,
                n: a.n,
                variant: Some(variant.to_string()),
                halls: None,
                value: value.to_string(),
                formula_g: None,
            }
        }
        Some(spec) => {
            if a.k == 0 {
                return Err(Failure::usage("k must be at least 1"));
            }
            let s = parse_halls(a.k, a.n, spec)?;
            let value = lonely_hall_count(a.k, a.n, &s, opts.lonely_hall_limits)?;
            let profile = profile_of(&s, a.k, a.n);
            let g = ColumnCounts::new(a.k - 1).big_g(profile.counts(), &mut NoOps);
            OracleRecord {
                k: a.k,
                n: a.n,
                variant: None,
                halls: Some(s.iter().collect()),
                value: value.to_string(),
                formula_g: Some(g.to_string()),
            }
        }
    };
    let text = match a.format {
        Format::Json => {
            let mut s = serde_json::to_string(&record).expect("plain record serializes");
            s.push('\n');
            s
        }
        _ => match (&record.halls, &record.formula_g) {
            (Some(halls), Some(g)) => {
                let list: Vec<String> = halls.iter().map(|(r, f)| format!("{r}:{f}")).collect();
                format!(
                    "lonely-hall configurations (k={}, n={}, omitted {{{}}}): {}\nG(profile): {}\n",
                    a.k,
                    a.n,
                    list.join(","),
                    record.value,
                    g
                )
            }
            _ => format!(
                "{}_{}({}) = {}\nmethod: oracle\n",
                symbol(a.variant.variant()),
                a.k,
                a.n,
                record.value
            ),
        },
    };
    emit(&a.out, &text)
}

fn cmd_selftest(a: SelftestArgs) -> Result<(), Failure> {
    allow(a.format, &[Format::Human, Format::Json], "selftest")?;
    let mut cfg = match (a.max_k, a.max_n) {
        (None, None) => SelftestConfig::default(),
        (k, n) => {
            let d = SelftestConfig::default();
            SelftestConfig::with_depth(k.unwrap_or(d.max_k), n.unwrap_or(d.max_n))
        }
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    cfg.corrupt_g = a.inject_fault;
    let reports = run_selftest(&cfg);
    let text = match a.format {
        Format::Json => {
            let mut s = serde_json::to_string(&reports).expect("plain records serialize");
            s.push('\n');
            s
        }
        _ => human_selftest(&reports),
    };
    emit(&a.out, &text)?;
    let failed: Vec<&SuiteReport> = reports.iter().filter(|r| !r.ok()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let mut message = String::from("self-test mismatch");
    for r in failed {
        let _ = write!(
            message,
            "\n  {}: {}",
            r.name,
            r.counterexample.as_deref().unwrap_or("no counterexample recorded")
        );
    }
    Err(Failure {
        code: EXIT_MISMATCH,
        message,
    })
}

fn human_selftest(reports: &[SuiteReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let status = if r.ok() { "ok" } else { "FAIL" };
        let _ = writeln!(s, "{:<20} {}/{} {status}", r.name, r.passed, r.checks);
        if let Some(ce) = &r.counterexample {
            let _ = writeln!(s, "  counterexample: {ce}");
        }
        for note in &r.notes {
            let _ = writeln!(s, "  note: {note}");
        }
    }
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Expr(a) => cmd_expr(a),
        Command::Table(a) => cmd_table(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
