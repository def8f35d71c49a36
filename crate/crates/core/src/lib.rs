//! Exact counts of `k × n` Latin rectangles.
//!
//! The reduced count `R_k(n)` (first row `1..n`) is evaluated as a signed sum
//! over floor-class profiles, generalizing Ryser's inclusion-exclusion
//! formula for derangements. Every formula is paired with a brute-force
//! oracle, and the same formula can be printed symbolically for any `k`.
//!
//! Counting strategies live behind [`CountMethod`] and are selected by name
//! from a [`MethodRegistry`]; expression renderers likewise sit in a
//! [`RendererRegistry`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

pub mod bench;
pub mod column_counts;
pub mod crosscheck;
pub mod enumerator;
pub mod error;
pub mod expression;
pub mod methods;
pub mod oracle;
pub mod partition;
pub mod profile;
pub mod render;
pub mod tally;

pub use enumerator::{
    derangements_classical, derangements_ryser, reduced_count, total_count, total_count_direct, CountResult,
};
pub use error::{Error, Result};
pub use methods::{CountMethod, MethodRegistry};
pub use render::{Renderer, RendererRegistry};

/// Default ceiling on the number of summation terms a formula may evaluate.
pub const DEFAULT_MAX_TERMS: u64 = 100_000_000;

/// Reduced (first row in order) or total count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Reduced,
    Total,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Reduced => "reduced",
            Variant::Total => "total",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(Variant::Reduced),
            "total" => Ok(Variant::Total),
            other => Err(Error::InvalidArgument(format!("unknown variant `{other}`"))),
        }
    }
}

/// Which bracket the two-row non-reduced formula raises to the `n`-th power.
///
/// `Derived` ends in `- s00`, as the partition-lattice inversion gives;
/// `Literal` ends in `- s11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Bracket {
    #[default]
    Derived,
    Literal,
}

impl Bracket {
    pub fn as_str(self) -> &'static str {
        match self {
            Bracket::Derived => "derived",
            Bracket::Literal => "literal",
        }
    }
}

impl FromStr for Bracket {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derived" => Ok(Bracket::Derived),
            "literal" => Ok(Bracket::Literal),
            other => Err(Error::InvalidArgument(format!("unknown bracket `{other}`"))),
        }
    }
}

/// Knobs shared by every counting method.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Refuse formula evaluations predicted to need more terms than this.
    pub max_terms: BigUint,
    /// Worker threads; `0` uses all available parallelism.
    pub threads: usize,
    pub bracket: Bracket,
    pub latin_limits: oracle::OracleLimits,
    pub lonely_hall_limits: oracle::OracleLimits,
    #[doc(hidden)]
    pub corrupt_g: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_terms: BigUint::from(DEFAULT_MAX_TERMS),
            threads: 0,
            bracket: Bracket::Derived,
            latin_limits: oracle::OracleLimits::LATIN,
            lonely_hall_limits: oracle::OracleLimits::LONELY_HALL,
            corrupt_g: false,
        }
    }
}

impl EvalOptions {
    pub fn single_threaded() -> Self {
        EvalOptions {
            threads: 1,
            ..Self::default()
        }
    }
}
