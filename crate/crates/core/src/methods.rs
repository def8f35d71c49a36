//! Counting strategies, registered by name.
//!
//! Each method answers the same question (how many `k × n` Latin rectangles,
//! reduced or total) by a different route, so any two can be played off
//! against each other from the command line.

use std::time::Instant;

use crate::enumerator::{reduced_count, total_count, total_count_direct, CountResult};
use crate::error::{Error, Result};
use crate::oracle::brute_force_count;
use crate::profile::FactorialTable;
use crate::tally::OpTally;
use crate::{EvalOptions, Variant};

pub trait CountMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn supports(&self, variant: Variant) -> bool;
    fn count(&self, k: usize, n: usize, variant: Variant, opts: &EvalOptions) -> Result<CountResult>;
}

fn unsupported(method: &'static str, variant: Variant) -> Error {
    Error::UnsupportedVariant {
        method,
        variant: variant.as_str(),
    }
}

/// The generalized Ryser sum for reduced rectangles.
pub struct Formula;

impl CountMethod for Formula {
    fn name(&self) -> &'static str {
        "formula"
    }

    fn summary(&self) -> &'static str {
        "signed sum over floor-class profiles (reduced only)"
    }

    fn supports(&self, variant: Variant) -> bool {
        variant == Variant::Reduced
    }

    fn count(&self, k: usize, n: usize, variant: Variant, opts: &EvalOptions) -> Result<CountResult> {
        if !self.supports(variant) {
            return Err(unsupported(self.name(), variant));
        }
        reduced_count(k, n, opts)
    }
}

/// `n!` times the reduced formula.
pub struct FactorialBridge;

impl CountMethod for FactorialBridge {
    fn name(&self) -> &'static str {
        "factorial-bridge"
    }

    fn summary(&self) -> &'static str {
        "n! times the reduced formula (total only)"
    }

    fn supports(&self, variant: Variant) -> bool {
        variant == Variant::Total
    }

    fn count(&self, k: usize, n: usize, variant: Variant, opts: &EvalOptions) -> Result<CountResult> {
        if !self.supports(variant) {
            return Err(unsupported(self.name(), variant));
        }
        total_count(k, n, opts)
    }
}

/// Inclusion-exclusion over all lonely-hall configurations, no reduction.
/// Reduced counts divide the total by `n!`.
pub struct DirectL;

impl CountMethod for DirectL {
    fn name(&self) -> &'static str {
        "direct-L"
    }

    fn summary(&self) -> &'static str {
        "non-reduced sum with g(s)^n brackets; reduced = total / n!"
    }

    fn supports(&self, _: Variant) -> bool {
        true
    }

    fn count(&self, k: usize, n: usize, variant: Variant, opts: &EvalOptions) -> Result<CountResult> {
        let mut res = total_count_direct(k, n, opts.bracket, opts)?;
        if variant == Variant::Reduced {
            let fact = FactorialTable::new(n).get(n).clone();
            if &res.value % &fact != num_bigint::BigUint::from(0u8) {
                return Err(Error::Inconsistent(format!(
                    "direct total {} is not divisible by {n}!",
                    res.value
                )));
            }
            res.value /= fact;
            res.stats.mults_actual += 1;
            res.stats.mults_paper_model += 1;
            res.variant = Variant::Reduced;
        }
        Ok(res)
    }
}

/// Backtracking enumeration.
pub struct Oracle;

impl CountMethod for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn summary(&self) -> &'static str {
        "brute-force backtracking enumeration"
    }

    fn supports(&self, _: Variant) -> bool {
        true
    }

    fn count(&self, k: usize, n: usize, variant: Variant, opts: &EvalOptions) -> Result<CountResult> {
        let start = Instant::now();
        let value = brute_force_count(k, n, variant, opts.latin_limits)?;
        Ok(CountResult {
            k,
            n,
            variant,
            method: self.name(),
            value,
            stats: OpTally::default(),
            elapsed: start.elapsed(),
            extrapolated: false,
        })
    }
}

/// Name-indexed collection of counting methods.
pub struct MethodRegistry {
    methods: Vec<Box<dyn CountMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        MethodRegistry { methods: Vec::new() }
    }

    /// `formula`, `factorial-bridge`, `direct-L` and `oracle`.
    pub fn with_builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Formula));
        r.register(Box::new(FactorialBridge));
        r.register(Box::new(DirectL));
        r.register(Box::new(Oracle));
        r
    }

    /// Adds a method, replacing any existing one with the same name.
    pub fn register(&mut self, method: Box<dyn CountMethod>) {
        self.methods.retain(|m| m.name() != method.name());
        self.methods.push(method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CountMethod> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }

    /// The method used when none is named.
    pub fn default_for(variant: Variant) -> &'static str {
        match variant {
            Variant::Reduced => "formula",
            Variant::Total => "factorial-bridge",
        }
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn every_method_agrees_where_supported() {
        let reg = MethodRegistry::with_builtin();
        let opts = EvalOptions::single_threaded();
        for variant in [Variant::Reduced, Variant::Total] {
            for (k, n) in [(1, 4), (2, 5), (3, 4), (3, 5)] {
                let mut values: Vec<BigUint> = Vec::new();
                for name in reg.names() {
                    let m = reg.get(name).unwrap();
                    if m.supports(variant) {
                        let res = m.count(k, n, variant, &opts).unwrap();
                        assert_eq!(res.variant, variant);
                        assert_eq!(res.method, name);
                        values.push(res.value);
                    }
                }
                assert!(values.len() >= 3);
                assert!(values.windows(2).all(|w| w[0] == w[1]), "{k}x{n} {variant}: {values:?}");
            }
        }
    }

    #[test]
    fn lookup_and_rejection() {
        let reg = MethodRegistry::with_builtin();
        assert_eq!(reg.names(), ["formula", "factorial-bridge", "direct-L", "oracle"]);
        assert!(matches!(reg.get("magic"), Err(Error::UnknownMethod(_))));
        let opts = EvalOptions::single_threaded();
        assert!(matches!(
            reg.get("formula").unwrap().count(2, 3, Variant::Total, &opts),
            Err(Error::UnsupportedVariant { .. })
        ));
    }

    #[test]
    fn oracle_method_echoes_name() {
        let reg = MethodRegistry::with_builtin();
        let res = reg
            .get("oracle")
            .unwrap()
            .count(2, 4, Variant::Reduced, &EvalOptions::default())
            .unwrap();
        assert_eq!(res.method, "oracle");
        assert_eq!(res.value, BigUint::from(9u8));
    }
}
