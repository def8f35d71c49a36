//! Operation counts of the reduced formula and log-log fits over `n`.
//!
//! Every big-integer addition or multiplication on the value path counts as
//! one operation; bit complexity is not modelled. Two multiplication tallies
//! are kept: the operations actually performed (square-and-multiply powers)
//! and the naive model in which `g^s` costs `s - 1` multiplications.
//!
//! Additions per term are constant only for fixed `k`: each g evaluation
//! costs on the order of `2^(k-1)·Bell(k-1)` additions.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerator::reduced_count;
use crate::error::{Error, Result};
use crate::profile::composition_count;
use crate::EvalOptions;

/// Which multiplication tally feeds the total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostModel {
    Actual,
    PaperModel,
}

impl std::str::FromStr for CostModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "actual" => Ok(CostModel::Actual),
            "paper_model" | "paper-model" => Ok(CostModel::PaperModel),
            other => Err(Error::InvalidArgument(format!("unknown cost model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub k: usize,
    pub n: usize,
    pub term_count: u64,
    pub adds: u64,
    pub mults_actual: u64,
    pub mults_paper_model: u64,
    pub elapsed_ms: f64,
    pub value: BigUint,
}

impl CostReport {
    pub fn mults(&self, model: CostModel) -> u64 {
        match model {
            CostModel::Actual => self.mults_actual,
            CostModel::PaperModel => self.mults_paper_model,
        }
    }

    pub fn total_ops(&self, model: CostModel) -> u64 {
        self.adds + self.mults(model)
    }
}

/// Evaluates `R_k(n)` single-threaded and reports its operation counts.
pub fn measure(k: usize, n: usize, max_terms: &BigUint) -> Result<CostReport> {
    let opts = EvalOptions {
        max_terms: max_terms.clone(),
        ..EvalOptions::single_threaded()
    };
    let start = Instant::now();
    let res = reduced_count(k, n, &opts)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let predicted = composition_count(n, k - 1);
    if BigUint::from(res.stats.terms) != predicted {
        return Err(Error::Inconsistent(format!(
            "evaluated {} terms, expected {predicted}",
            res.stats.terms
        )));
    }
    Ok(CostReport {
        k,
        n,
        term_count: res.stats.terms,
        adds: res.stats.adds,
        mults_actual: res.stats.mults_actual,
        mults_paper_model: res.stats.mults_paper_model,
        elapsed_ms,
        value: res.value,
    })
}

/// Reports over a range of `n` with least-squares log-log slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub k: usize,
    pub reports: Vec<CostReport>,
    pub exponent_terms: Option<f64>,
    pub exponent_actual: Option<f64>,
    pub exponent_paper_model: Option<f64>,
}

impl Sweep {
    pub fn exponent(&self, model: CostModel) -> Option<f64> {
        match model {
            CostModel::Actual => self.exponent_actual,
            CostModel::PaperModel => self.exponent_paper_model,
        }
    }
}

pub fn sweep(k: usize, n_min: usize, n_max: usize, step: usize, max_terms: &BigUint) -> Result<Sweep> {
    if k == 0 || step == 0 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "bad sweep: k={k}, n={n_min}..{n_max}, step={step}"
        )));
    }
    let reports = (n_min..=n_max)
        .step_by(step)
        .map(|n| measure(k, n, max_terms))
        .collect::<Result<Vec<_>>>()?;
    let fit = |f: &dyn Fn(&CostReport) -> u64| {
        let points: Vec<(f64, f64)> = reports
            .iter()
            .filter(|r| r.n > 0 && f(r) > 0)
            .map(|r| (r.n as f64, f(r) as f64))
            .collect();
        log_log_slope(&points)
    };
    Ok(Sweep {
        k,
        exponent_terms: fit(&|r| r.term_count),
        exponent_actual: fit(&|r| r.total_ops(CostModel::Actual)),
        exponent_paper_model: fit(&|r| r.total_ops(CostModel::PaperModel)),
        reports,
    })
}

/// Ordinary least-squares slope of `ln y` against `ln x`; `None` with fewer
/// than two distinct `x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let len = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub const CSV_HEADER: &str = "k,n,terms,adds,mults_actual,mults_paper_model,elapsed_ms";

fn fmt_exponent(e: Option<f64>) -> String {
    e.map_or_else(|| "absent".to_string(), |v| format!("{v:.4}"))
}

/// CSV rows followed by `#`-prefixed metadata lines.
pub fn to_csv(s: &Sweep) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &s.reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.3}",
            r.k, r.n, r.term_count, r.adds, r.mults_actual, r.mults_paper_model, r.elapsed_ms
        );
    }
    let _ = writeln!(out, "# fitted_exponent_terms={}", fmt_exponent(s.exponent_terms));
    let _ = writeln!(out, "# fitted_exponent_actual={}", fmt_exponent(s.exponent_actual));
    let _ = writeln!(out, "# fitted_exponent_paper_model={}", fmt_exponent(s.exponent_paper_model));
    out.push_str("# cost: one unit per big-integer add or multiply; bit complexity not counted\n");
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    k: usize,
    n: usize,
    terms: String,
    adds: String,
    mults_actual: String,
    mults_paper_model: String,
    elapsed_ms: f64,
    value: &'a str,
}

#[derive(Serialize)]
struct JsonSummary {
    k: usize,
    fitted_exponent_terms: Option<f64>,
    fitted_exponent_actual: Option<f64>,
    fitted_exponent_paper_model: Option<f64>,
}

/// One JSON object per report, then a summary object.
pub fn to_json_lines(s: &Sweep) -> String {
    let mut out = String::new();
    for r in &s.reports {
        let value = r.value.to_string();
        let row = JsonRow {
            k: r.k,
            n: r.n,
            terms: r.term_count.to_string(),
            adds: r.adds.to_string(),
            mults_actual: r.mults_actual.to_string(),
            mults_paper_model: r.mults_paper_model.to_string(),
            elapsed_ms: r.elapsed_ms,
            value: &value,
        };
        out.push_str(&serde_json::to_string(&row).expect("plain struct serializes"));
        out.push('\n');
    }
    let summary = JsonSummary {
        k: s.k,
        fitted_exponent_terms: s.exponent_terms,
        fitted_exponent_actual: s.exponent_actual,
        fitted_exponent_paper_model: s.exponent_paper_model,
    };
    out.push_str(&serde_json::to_string(&summary).expect("plain struct serializes"));
    out.push('\n');
    out
}
