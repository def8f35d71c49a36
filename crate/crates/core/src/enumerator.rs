//! The counting formulas.
//!
//! `R_k(n) = Σ_s (-1)^{|S|} · multinomial(s) · G(s)` over every profile `s`
//! with `2^(k-1)` classes, and the non-reduced
//! `L_k(n) = Σ_s (-1)^{|S|} · multinomial(s) · g(s)^n` over profiles with
//! `2^k` classes. Sums are exact; the composition stream is cut into
//! contiguous chunks that may be evaluated on several threads and combined by
//! exact addition, so the result never depends on the thread count.

use std::ops::AddAssign;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::column_counts::{pow_tallied, ColumnCounts, GPolynomial};
use crate::error::{Error, Result};
use crate::profile::{binomial, composition_count, sign_exponent, CompositionWalker, FactorialTable};
use crate::tally::{NoOps, OpSink, OpTally};
use crate::{Bracket, EvalOptions, Variant};

/// A count together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub k: usize,
    pub n: usize,
    pub variant: Variant,
    pub method: &'static str,
    pub value: BigUint,
    pub stats: OpTally,
    pub elapsed: Duration,
    /// Set when the formula is applied past the row counts it was written out
    /// for (direct non-reduced sums with `k > 3`).
    pub extrapolated: bool,
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(())
}

fn guard(m: usize, n: usize, opts: &EvalOptions) -> Result<()> {
    if m > 16 {
        return Err(Error::InvalidArgument(format!("{m} inclusion-exclusion rows is too many")));
    }
    let predicted = composition_count(n, m);
    if predicted > opts.max_terms {
        return Err(Error::GuardExceeded {
            what: "formula evaluation",
            predicted,
            ceiling: opts.max_terms.clone(),
        });
    }
    Ok(())
}

/// Chunks of the composition stream, each identified by its fixed trailing
/// coordinates, in colexicographic order.
fn chunk_tails(parts: usize, n: usize) -> Vec<Vec<usize>> {
    match parts {
        1 => vec![vec![]],
        2 | 3 => (0..=n).map(|last| vec![last]).collect(),
        _ => (0..=n)
            .flat_map(|last| (0..=n - last).map(move |second| vec![second, last]))
            .collect(),
    }
}

/// `Σ_s (-1)^{|S|} term(s)` over every composition of `n` into `2^m` parts.
///
/// `term` returns the unsigned magnitude; one addition is tallied per term.
pub(crate) fn signed_profile_sum<S, F>(m: usize, n: usize, threads: usize, term: F) -> (BigInt, S)
where
    S: OpSink + Default + AddAssign + Send,
    F: Fn(&[usize], &mut S) -> BigInt + Sync,
{
    let parts = 1usize << m;
    let tails = chunk_tails(parts, n);
    let run_chunk = |tail: &Vec<usize>| {
        let mut ops = S::default();
        let mut acc = BigInt::zero();
        let mut walker = CompositionWalker::with_tail(n, parts, tail);
        while let Some(counts) = walker.next_counts() {
            ops.term();
            let value = term(counts, &mut ops);
            ops.add(1);
            if sign_exponent(counts).is_multiple_of(2) {
                acc += value;
            } else {
                acc -= value;
            }
        }
        (acc, ops)
    };
    let combine = |(a, ta): (BigInt, S), (b, tb): (BigInt, S)| {
        let mut t = ta;
        t += tb;
        (a + b, t)
    };
    let identity = || (BigInt::zero(), S::default());
    if threads == 1 {
        return tails.iter().map(run_chunk).fold(identity(), combine);
    }
    let work = || tails.par_iter().map(run_chunk).reduce(identity, combine);
    if threads == 0 {
        work()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        }
    }
}

fn into_count(value: BigInt) -> Result<BigUint> {
    match value.sign() {
        Sign::Minus => Err(Error::Inconsistent(format!(
            "inclusion-exclusion produced a negative count ({value})"
        ))),
        _ => Ok(value.magnitude().clone()),
    }
}

/// `R_k(n)` by the generalized Ryser sum. No shortcut is taken for `n < k`:
/// the full sum is evaluated and cancels to zero on its own.
pub fn reduced_count(k: usize, n: usize, opts: &EvalOptions) -> Result<CountResult> {
    check_k(k)?;
    let m = k - 1;
    guard(m, n, opts)?;
    let start = Instant::now();
    let (sum, stats) = reduced_sum::<OpTally>(m, n, opts);
    Ok(CountResult {
        k,
        n,
        variant: Variant::Reduced,
        method: "formula",
        value: into_count(sum)?,
        stats,
        elapsed: start.elapsed(),
        extrapolated: false,
    })
}

fn reduced_sum<S: OpSink + Default + AddAssign + Send>(m: usize, n: usize, opts: &EvalOptions) -> (BigInt, S) {
    let facts = FactorialTable::new(n);
    let columns = if opts.corrupt_g {
        ColumnCounts::with_polynomial(GPolynomial::corrupted(m))
    } else {
        ColumnCounts::new(m)
    };
    signed_profile_sum(m, n, opts.threads, |counts, ops: &mut S| {
        let multinomial = BigInt::from(facts.multinomial(counts, ops));
        let g = columns.big_g(counts, ops);
        ops.mul(1, 1);
        multinomial * g
    })
}

/// `R_k(n)` through the same sum with every operation tally switched off.
pub fn reduced_value_uninstrumented(k: usize, n: usize, opts: &EvalOptions) -> Result<BigUint> {
    check_k(k)?;
    guard(k - 1, n, opts)?;
    let (sum, _) = reduced_sum::<NoOps>(k - 1, n, opts);
    into_count(sum)
}

/// `L_k(n) = n! · R_k(n)`.
pub fn total_count(k: usize, n: usize, opts: &EvalOptions) -> Result<CountResult> {
    let mut r = reduced_count(k, n, opts)?;
    let start = Instant::now();
    r.value *= FactorialTable::new(n).get(n);
    r.stats.mul(1, 1);
    r.elapsed += start.elapsed();
    r.variant = Variant::Total;
    r.method = "factorial-bridge";
    Ok(r)
}

/// The two-row bracket with `- s11` in place of the derived `- s00`.
fn literal_two_row_bracket(counts: &[usize]) -> BigInt {
    let s = |i: usize| BigInt::from(counts[i]);
    // index = bit(row 1) + 2 bit(row 2): s00, s10, s01, s11
    (s(0) + s(1)) * (s(0) + s(2)) - s(3)
}

/// `L_k(n)` by inclusion-exclusion over all (non-reduced) lonely-hall
/// configurations: profiles over `k` rows, bracket `g(s)^n`.
pub fn total_count_direct(k: usize, n: usize, bracket: Bracket, opts: &EvalOptions) -> Result<CountResult> {
    check_k(k)?;
    let m = k;
    guard(m, n, opts)?;
    let start = Instant::now();
    let facts = FactorialTable::new(n);
    let poly = if opts.corrupt_g {
        GPolynomial::corrupted(m)
    } else {
        GPolynomial::new(m)
    };
    let literal = k == 2 && bracket == Bracket::Literal;
    let (sum, stats) = signed_profile_sum(m, n, opts.threads, |counts, ops: &mut OpTally| {
        let multinomial = BigInt::from(facts.multinomial(counts, ops));
        let base = if literal {
            ops.add(3);
            ops.mul(1, 1);
            literal_two_row_bracket(counts)
        } else {
            let signed: Vec<i64> = counts.iter().map(|&c| c as i64).collect();
            poly.eval(&signed, ops)
        };
        let power = pow_tallied(&base, n as u64, ops);
        ops.mul(1, 1);
        multinomial * power
    });
    Ok(CountResult {
        k,
        n,
        variant: Variant::Total,
        method: "direct-L",
        value: into_count(sum)?,
        stats,
        elapsed: start.elapsed(),
        extrapolated: k > 3,
    })
}

/// `D(n) = Σ_r (-1)^r n!/r!`.
pub fn derangements_classical(n: usize) -> BigUint {
    let facts = FactorialTable::new(n);
    let mut acc = BigInt::zero();
    for r in 0..=n {
        let term = BigInt::from(facts.get(n) / facts.get(r));
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    into_count(acc).expect("alternating factorial sum is nonnegative")
}

/// `D(n) = Σ_r (-1)^r C(n, r) (n-r)^r (n-r-1)^(n-r)`, with `0^0 = 1`.
pub fn derangements_ryser(n: usize) -> BigUint {
    let mut acc = BigInt::zero();
    for r in 0..=n {
        let a = BigInt::from(n as i64 - r as i64);
        let b = BigInt::from(n as i64 - r as i64 - 1);
        let term = BigInt::from(binomial(n, r)) * pow_u(&a, r) * pow_u(&b, n - r);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    into_count(acc).expect("Ryser sum is nonnegative")
}

fn pow_u(base: &BigInt, exp: usize) -> BigInt {
    if exp == 0 {
        BigInt::one()
    } else {
        base.pow(exp as u32)
    }
}
