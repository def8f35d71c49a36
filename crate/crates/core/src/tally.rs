//! Arithmetic operation tallies for the formula evaluators.
//!
//! Every addition or multiplication on the count's value path reports here.
//! One big-integer operation counts as one, whatever the operand size.

use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Receives operation events during evaluation.
pub trait OpSink {
    fn add(&mut self, count: u64);
    /// Multiplications as actually performed, and as the naive-powering
    /// model would perform them.
    fn mul(&mut self, actual: u64, paper_model: u64);
    fn term(&mut self);
}

/// Accumulated operation counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTally {
    pub terms: u64,
    pub adds: u64,
    pub mults_actual: u64,
    pub mults_paper_model: u64,
}

impl OpSink for OpTally {
    fn add(&mut self, count: u64) {
        self.adds += count;
    }

    fn mul(&mut self, actual: u64, paper_model: u64) {
        self.mults_actual += actual;
        self.mults_paper_model += paper_model;
    }

    fn term(&mut self) {
        self.terms += 1;
    }
}

impl AddAssign for OpTally {
    fn add_assign(&mut self, rhs: Self) {
        self.terms += rhs.terms;
        self.adds += rhs.adds;
        self.mults_actual += rhs.mults_actual;
        self.mults_paper_model += rhs.mults_paper_model;
    }
}

/// Discards every event.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoOps;

impl OpSink for NoOps {
    #[inline]
    fn add(&mut self, _: u64) {}
    #[inline]
    fn mul(&mut self, _: u64, _: u64) {}
    #[inline]
    fn term(&mut self) {}
}

impl AddAssign for NoOps {
    fn add_assign(&mut self, _: Self) {}
}

/// Multiplications used by square-and-multiply to raise to `exp` (`exp ≥ 1`).
pub fn binary_pow_mults(exp: u64) -> u64 {
    if exp == 0 {
        return 0;
    }
    let bits = 64 - exp.leading_zeros() as u64;
    (bits - 1) + (exp.count_ones() as u64 - 1)
}

/// Multiplications used by repeated multiplication to raise to `exp`.
pub fn naive_pow_mults(exp: u64) -> u64 {
    exp.saturating_sub(1)
}
