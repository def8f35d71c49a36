//! Floor-class profiles and the compositions that index the inclusion-exclusion sums.
//!
//! With `m` non-back rows under inclusion-exclusion, each floor falls into one
//! of `2^m` classes according to which of its halls are omitted. Class
//! vectors are indexed by binary value: bit `i` is the hall of rectangle row
//! `i + 2`, so row 2 is the lowest bit. Printed subscripts list bits in that
//! same order (`s10` for `m = 2` is "row 2 omitted, row 3 not", index 1).

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::tally::OpSink;

/// A floor's hall-membership pattern across the `m` inclusion-exclusion rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVector {
    m: u8,
    bits: u32,
}

impl ClassVector {
    pub fn new(m: usize, bits: u32) -> Self {
        assert!(m <= 16, "at most 16 inclusion-exclusion rows");
        assert!(bits < (1u32 << m), "class bits out of range");
        ClassVector { m: m as u8, bits }
    }

    pub fn all_ones(m: usize) -> Self {
        ClassVector::new(m, (1u32 << m) - 1)
    }

    /// Every class vector for `m` rows, by index.
    pub fn all(m: usize) -> impl Iterator<Item = ClassVector> {
        (0..(1u32 << m)).map(move |bits| ClassVector::new(m, bits))
    }

    pub fn m(self) -> usize {
        self.m as usize
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    /// Whether the hall of inclusion-exclusion row `i` (0-based) is omitted.
    pub fn bit(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_all_ones(self) -> bool {
        self.bits == (1u32 << self.m) - 1
    }

    /// Subscript string, e.g. `"10"` for index 1 with `m = 2`.
    pub fn subscript(self) -> String {
        (0..self.m())
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.subscript())
    }
}

/// A tally of floors per class; entries sum to `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    counts: Vec<usize>,
}

impl Profile {
    pub fn new(m: usize, counts: Vec<usize>) -> Self {
        assert_eq!(counts.len(), 1usize << m, "profile needs 2^m entries");
        Profile { m, counts }
    }

    /// All `n` floors in the all-zeros class (nothing omitted).
    pub fn unrestricted(m: usize, n: usize) -> Self {
        let mut counts = vec![0; 1 << m];
        counts[0] = n;
        Profile { m, counts }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, v: ClassVector) -> usize {
        self.counts[v.index()]
    }

    pub fn count_mut(&mut self, v: ClassVector) -> &mut usize {
        &mut self.counts[v.index()]
    }

    /// Number of omitted halls, `Σ_v weight(v)·s_v`.
    pub fn omitted_halls(&self) -> u64 {
        sign_exponent(&self.counts)
    }

    pub fn signed_counts(&self) -> Vec<i64> {
        self.counts.iter().map(|&c| c as i64).collect()
    }
}

/// `Σ_v weight(v)·counts[v]`.
pub fn sign_exponent(counts: &[usize]) -> u64 {
    counts
        .iter()
        .enumerate()
        .map(|(v, &c)| (v as u32).count_ones() as u64 * c as u64)
        .sum()
}

/// `+1` or `-1` according to the parity of the omitted-hall count.
pub fn sign(p: &Profile) -> i8 {
    if p.omitted_halls().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Exact factorials `0!..=n!`.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    table: Vec<BigUint>,
}

impl FactorialTable {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(BigUint::one());
        for i in 1..=n {
            let next = &table[i - 1] * BigUint::from(i);
            table.push(next);
        }
        FactorialTable { table }
    }

    pub fn get(&self, i: usize) -> &BigUint {
        &self.table[i]
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    /// `n! / Π counts[v]!` where `n = Σ counts`.
    ///
    /// Factors `0!` and `1!` are skipped; the quotient is tallied as one
    /// multiplication.
    pub fn multinomial<S: OpSink>(&self, counts: &[usize], ops: &mut S) -> BigUint {
        let n: usize = counts.iter().sum();
        let mut denom: Option<BigUint> = None;
        for &c in counts.iter().filter(|&&c| c >= 2) {
            denom = Some(match denom {
                None => self.table[c].clone(),
                Some(d) => {
                    ops.mul(1, 1);
                    d * &self.table[c]
                }
            });
        }
        match denom {
            None => self.table[n].clone(),
            Some(d) => {
                ops.mul(1, 1);
                &self.table[n] / d
            }
        }
    }
}

/// Multinomial coefficient of a profile.
pub fn multinomial(p: &Profile) -> BigUint {
    FactorialTable::new(p.n()).multinomial(&p.counts, &mut crate::tally::NoOps)
}

/// Steps through compositions in colexicographic order, mutating in place.
///
/// Only the first `free` coordinates move; the rest stay at the values given
/// at construction. Enumerating every value of the last coordinate with
/// `free = parts - 1` therefore splits the full sequence into contiguous
/// chunks.
#[derive(Debug, Clone)]
pub struct CompositionWalker {
    counts: Vec<usize>,
    free: usize,
    started: bool,
    done: bool,
}

impl CompositionWalker {
    /// All compositions of `n` into `parts` nonnegative parts.
    pub fn new(n: usize, parts: usize) -> Self {
        Self::with_tail(n, parts, &[])
    }

    /// Compositions of `n` into `parts` parts whose trailing coordinates equal
    /// `tail`.
    pub fn with_tail(n: usize, parts: usize, tail: &[usize]) -> Self {
        assert!(tail.len() <= parts);
        let free = parts - tail.len();
        let fixed: usize = tail.iter().sum();
        let mut counts = vec![0; parts];
        counts[free..].copy_from_slice(tail);
        let feasible = fixed <= n && (free > 0 || fixed == n);
        if free > 0 && feasible {
            counts[0] = n - fixed;
        }
        CompositionWalker {
            counts,
            free,
            started: false,
            done: !feasible,
        }
    }

    /// Advances to the next composition; `None` once exhausted.
    pub fn next_counts(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.counts);
        }
        if self.free <= 1 {
            self.done = true;
            return None;
        }
        let c = &mut self.counts;
        match (0..self.free - 1).find(|&i| c[i] > 0) {
            None => {
                self.done = true;
                None
            }
            Some(i) => {
                let v = c[i];
                c[i] = 0;
                c[0] = v - 1;
                c[i + 1] += 1;
                Some(&self.counts)
            }
        }
    }
}

/// Iterator over every profile with `2^m` classes summing to `n`, colexicographic.
pub struct Compositions {
    m: usize,
    walker: CompositionWalker,
}

impl Iterator for Compositions {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let m = self.m;
        self.walker
            .next_counts()
            .map(|c| Profile::new(m, c.to_vec()))
    }
}

pub fn compositions(n: usize, m: usize) -> Compositions {
    Compositions {
        m,
        walker: CompositionWalker::new(n, 1 << m),
    }
}

/// Binomial coefficient `C(a, b)`, exact.
pub fn binomial(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::from(0u8);
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= BigUint::from(a - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Number of compositions of `n` into `2^m` parts, `C(n + 2^m - 1, 2^m - 1)`.
pub fn composition_count(n: usize, m: usize) -> BigUint {
    let parts = 1usize << m;
    binomial(n + parts - 1, parts - 1)
}
