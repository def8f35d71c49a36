//! Cross-validation suites: every formula against the brute-force oracle.
//!
//! Each suite walks its cases in increasing `(k, n)` order and keeps the
//! first mismatch as its counterexample, so the reported case is minimal.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::column_counts::{ColumnCounts, GPolynomial};
use crate::enumerator::{derangements_classical, derangements_ryser, reduced_count, total_count_direct};
use crate::oracle::{brute_force_count, lonely_hall_count, profile_of, HallSet};
use crate::profile::{composition_count, FactorialTable};
use crate::tally::NoOps;
use crate::{Bracket, EvalOptions, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: u64,
    pub passed: u64,
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checks: 0,
            passed: 0,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    pub fn ok(&self) -> bool {
        self.checks == self.passed
    }
}

/// Depth of the self-test run.
#[derive(Debug, Clone)]
pub struct SelftestConfig {
    /// Formula-vs-oracle covers `1 ≤ k ≤ max_k`, `0 ≤ n ≤ max_n`.
    pub max_k: usize,
    pub max_n: usize,
    /// Also check `R_3(7)` against the oracle.
    pub include_r3_7: bool,
    pub hall_k2_max_n: usize,
    pub hall_k3_max_n: usize,
    pub hall_random_n: usize,
    pub hall_random_samples: usize,
    pub seed: u64,
    pub bracket_max_n: usize,
    pub zero_max_k: usize,
    pub derangement_max_n: usize,
    pub corrupt_g: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            max_k: 4,
            max_n: 6,
            include_r3_7: true,
            hall_k2_max_n: 5,
            hall_k3_max_n: 4,
            hall_random_n: 5,
            hall_random_samples: 200,
            seed: 0x5eed,
            bracket_max_n: 6,
            zero_max_k: 5,
            derangement_max_n: 10,
            corrupt_g: false,
        }
    }
}

impl SelftestConfig {
    /// Caps every suite at `k ≤ max_k`, `n ≤ max_n`.
    pub fn with_depth(max_k: usize, max_n: usize) -> Self {
        let d = Self::default();
        SelftestConfig {
            max_k,
            max_n,
            include_r3_7: max_k >= 3 && max_n >= 7,
            hall_k2_max_n: d.hall_k2_max_n.min(max_n),
            hall_k3_max_n: d.hall_k3_max_n.min(max_n),
            hall_random_samples: if max_k >= 3 && max_n >= d.hall_random_n {
                d.hall_random_samples
            } else {
                0
            },
            bracket_max_n: d.bracket_max_n.min(max_n),
            zero_max_k: d.zero_max_k.min(max_k.max(2)),
            derangement_max_n: d.derangement_max_n.min(max_n.max(4)),
            ..d
        }
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            corrupt_g: self.corrupt_g,
            ..EvalOptions::default()
        }
    }

    fn columns(&self, m: usize) -> ColumnCounts {
        if self.corrupt_g {
            ColumnCounts::with_polynomial(GPolynomial::corrupted(m))
        } else {
            ColumnCounts::new(m)
        }
    }
}

fn show<T: std::fmt::Display, E: std::fmt::Display>(r: &Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// `R_k(n)` from the formula against the backtracking count.
pub fn formula_vs_oracle(cfg: &SelftestConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("formula-vs-oracle");
    let opts = cfg.eval_options();
    let mut cases: Vec<(usize, usize)> = (1..=cfg.max_k)
        .flat_map(|k| (0..=cfg.max_n).map(move |n| (k, n)))
        .collect();
    if cfg.include_r3_7 && !cases.contains(&(3, 7)) {
        cases.push((3, 7));
    }
    for (k, n) in cases {
        let Ok(oracle) = brute_force_count(k, n, Variant::Reduced, opts.latin_limits) else {
            continue;
        };
        let formula = reduced_count(k, n, &opts).map(|r| r.value);
        rep.check(formula.as_ref() == Ok(&oracle), || {
            format!("k={k}, n={n}: formula {}, oracle {oracle}", show(&formula))
        });
    }
    rep
}

fn g_of_profile(cfg: &SelftestConfig, s: &HallSet, k: usize, n: usize) -> BigInt {
    let p = profile_of(s, k, n);
    cfg.columns(k - 1).big_g(p.counts(), &mut NoOps)
}

/// `G(profile_of(S))` against a direct count of lonely-hall configurations.
pub fn g_vs_lonely_hall(cfg: &SelftestConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("g-vs-lonely-hall");
    let limits = cfg.eval_options().lonely_hall_limits;
    let check = |rep: &mut SuiteReport, s: &HallSet, k: usize, n: usize| {
        let g = g_of_profile(cfg, s, k, n);
        let direct = lonely_hall_count(k, n, s, limits);
        let ok = matches!(&direct, Ok(d) if BigInt::from(d.clone()) == g);
        rep.check(ok, || {
            let halls: Vec<String> = s.iter().map(|(r, f)| format!("({r},{f})")).collect();
            format!(
                "k={k}, n={n}, S={{{}}}: G = {g}, lonely-hall count {}",
                halls.join(","),
                show(&direct)
            )
        });
    };
    let exhaustive = [(2, cfg.hall_k2_max_n), (3, cfg.hall_k3_max_n)];
    for (k, max_n) in exhaustive {
        if k > cfg.max_k {
            continue;
        }
        for n in 0..=max_n {
            for s in HallSet::all(k, n) {
                check(&mut rep, &s, k, n);
            }
        }
    }
    if cfg.hall_random_samples > 0 {
        let (k, n) = (3, cfg.hall_random_n);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.hall_random_samples {
            let pairs: Vec<(usize, usize)> = (2..=k)
                .flat_map(|row| (1..=n).map(move |floor| (row, floor)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let s = HallSet::from_pairs(k, n, pairs).expect("sampled halls are in range");
            check(&mut rep, &s, k, n);
        }
        rep.notes
            .push(format!("{} random hall sets at k={k}, n={n}, seed {:#x}", cfg.hall_random_samples, cfg.seed));
    }
    rep
}

/// `Σ_S (-1)^{|S|} · lonely_hall_count(S)` against the backtracking Latin count.
pub fn inclusion_exclusion(cfg: &SelftestConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("inclusion-exclusion");
    let opts = cfg.eval_options();
    for k in 1..=cfg.max_k.min(3) {
        for n in 0..=cfg.max_n.min(4) {
            let mut total = BigInt::from(0);
            let mut failed = None;
            for s in HallSet::all(k, n) {
                match lonely_hall_count(k, n, &s, opts.lonely_hall_limits) {
                    Ok(c) if s.len() % 2 == 0 => total += BigInt::from(c),
                    Ok(c) => total -= BigInt::from(c),
                    Err(e) => failed = Some(e.to_string()),
                }
            }
            let oracle = brute_force_count(k, n, Variant::Reduced, opts.latin_limits);
            let ok = failed.is_none() && matches!(&oracle, Ok(o) if BigInt::from(o.clone()) == total);
            rep.check(ok, || {
                format!("k={k}, n={n}: signed hall-set sum {total}, oracle {}", show(&oracle))
            });
        }
    }
    rep
}

/// Direct non-reduced sums against `n!·R_k(n)`, and the two two-row brackets
/// against each other.
pub fn bracket_variants(cfg: &SelftestConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("bracket-variant");
    let opts = cfg.eval_options();
    for k in 1..=cfg.max_k.min(3) {
        for n in 0..=cfg.bracket_max_n {
            let direct = total_count_direct(k, n, Bracket::Derived, &opts).map(|r| r.value);
            let bridge = reduced_count(k, n, &opts).map(|r| r.value * FactorialTable::new(n).get(n));
            rep.check(direct.is_ok() && direct == bridge, || {
                format!("k={k}, n={n}: direct {}, n!·R {}", show(&direct), show(&bridge))
            });
        }
    }
    if cfg.max_k >= 2 {
        let mut agree = 0;
        for n in 0..=cfg.bracket_max_n {
            let derived = total_count_direct(2, n, Bracket::Derived, &opts).map(|r| r.value);
            let literal = total_count_direct(2, n, Bracket::Literal, &opts).map(|r| r.value);
            let ok = derived.is_ok() && derived == literal;
            if ok {
                agree += 1;
            }
            rep.check(ok, || {
                format!("k=2, n={n}: derived bracket {}, literal bracket {}", show(&derived), show(&literal))
            });
        }
        rep.notes.push(format!(
            "L_2 brackets (.. - s00) and (.. - s11) agree for {agree} of {} values n = 0..={}",
            cfg.bracket_max_n + 1,
            cfg.bracket_max_n
        ));
    }
    rep
}

/// `R_k(n) = 0` for `1 ≤ n < k`, with every term of the sum evaluated.
pub fn zero_rule(cfg: &SelftestConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("zero-for-k>n");
    let opts = cfg.eval_options();
    for k in 2..=cfg.zero_max_k {
        for n in 1..k {
            let res = reduced_count(k, n, &opts);
            let ok = matches!(&res, Ok(r) if r.value == BigUint::from(0u8)
                && BigUint::from(r.stats.terms) == composition_count(n, k - 1));
            rep.check(ok, || match &res {
                Ok(r) => format!("k={k}, n={n}: value {}, {} terms evaluated", r.value, r.stats.terms),
                Err(e) => format!("k={k}, n={n}: error: {e}"),
            });
        }
    }
    rep
}

/// The classical and Ryser derangement formulas against the two-row sum and
/// the oracle.
pub fn derangements(cfg: &SelftestConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("derangements");
    let opts = cfg.eval_options();
    for n in 0..=cfg.derangement_max_n {
        let classical = derangements_classical(n);
        let ryser = derangements_ryser(n);
        let formula = reduced_count(2, n, &opts).map(|r| r.value);
        let oracle = brute_force_count(2, n, Variant::Reduced, crate::oracle::OracleLimits { max_k: 2, max_n: 12 });
        let ok = classical == ryser && formula.as_ref() == Ok(&classical) && oracle.as_ref() == Ok(&classical);
        rep.check(ok, || {
            format!(
                "n={n}: classical {classical}, ryser {ryser}, formula {}, oracle {}",
                show(&formula),
                show(&oracle)
            )
        });
    }
    rep
}

/// Outcome of the two-omitted-hall count at one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoHallCheck {
    pub n: usize,
    pub oracle: u64,
    /// `(n-2)^2 (n-3)^(n-2)`
    pub derived: i64,
    /// `(n-2)^2 (n-3)^(n-3)`
    pub alternative: i64,
}

fn ipow(base: i64, exp: usize) -> i64 {
    (0..exp).fold(1i64, |acc, _| acc * base)
}

/// Counts for `k = 2` with two omitted halls, for `2 ≤ n ≤ max_n`.
pub fn two_hall_checks(max_n: usize) -> Vec<TwoHallCheck> {
    (2..=max_n)
        .map(|n| {
            let s = HallSet::from_pairs(2, n, [(2, 1), (2, 2)]).expect("halls in range");
            let oracle = lonely_hall_count(2, n, &s, crate::oracle::OracleLimits { max_k: 2, max_n })
                .expect("within limits");
            let ni = n as i64;
            TwoHallCheck {
                n,
                oracle: oracle.try_into().expect("small count"),
                derived: ipow(ni - 2, 2) * ipow(ni - 3, n - 2),
                alternative: ipow(ni - 2, 2) * ipow(ni - 3, n.saturating_sub(3)),
            }
        })
        .collect()
}

/// The three counting answers behind Ryser's derangement formula, checked
/// against lonely-hall enumeration.
pub fn ryser_bullets(cfg: &SelftestConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("ryser-bullets");
    let max_n = cfg.max_n.min(6);
    let limits = crate::oracle::OracleLimits { max_k: 2, max_n };
    for n in 1..=max_n {
        let ni = n as i64;
        let none = lonely_hall_count(2, n, &HallSet::new(), limits);
        let expected = ipow(ni - 1, n);
        rep.check(matches!(&none, Ok(c) if BigInt::from(c.clone()) == BigInt::from(expected)), || {
            format!("n={n}, no halls omitted: oracle {}, (n-1)^n = {expected}", show(&none))
        });
        let one = lonely_hall_count(2, n, &HallSet::from_pairs(2, n, [(2, 1)]).unwrap(), limits);
        let expected = (ni - 1) * ipow(ni - 2, n - 1);
        rep.check(matches!(&one, Ok(c) if BigInt::from(c.clone()) == BigInt::from(expected)), || {
            format!("n={n}, one hall omitted: oracle {}, (n-1)(n-2)^(n-1) = {expected}", show(&one))
        });
    }
    for c in two_hall_checks(max_n) {
        rep.check(c.oracle as i64 == c.derived, || {
            format!(
                "n={}, two halls omitted: oracle {}, (n-2)^2 (n-3)^(n-2) = {}",
                c.n, c.oracle, c.derived
            )
        });
        if c.n == 5 {
            let verdict = match (c.oracle as i64 == c.derived, c.oracle as i64 == c.alternative) {
                (true, false) => "matches (n-2)^2 (n-3)^(n-2), not the (n-3)^(n-3) variant",
                (false, true) => "matches the (n-2)^2 (n-3)^(n-3) variant",
                (true, true) => "matches both forms",
                (false, false) => "matches neither form",
            };
            rep.notes.push(format!(
                "two omitted halls at n=5: oracle {}; (n-2)^2 (n-3)^(n-2) = {}, (n-2)^2 (n-3)^(n-3) = {}; {verdict}",
                c.oracle, c.derived, c.alternative
            ));
        }
    }
    rep
}

/// Every suite, in a fixed order.
pub fn run_selftest(cfg: &SelftestConfig) -> Vec<SuiteReport> {
    vec![
        formula_vs_oracle(cfg),
        g_vs_lonely_hall(cfg),
        inclusion_exclusion(cfg),
        bracket_variants(cfg),
        zero_rule(cfg),
        derangements(cfg),
        ryser_bullets(cfg),
    ]
}
