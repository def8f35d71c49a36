//! Symbolic expressions for `R_k(n)`.
//!
//! An [`Expression`] is a small AST: a sum over the class-count indices
//! (constrained to total `n`) of a sign, a multinomial coefficient and a
//! product of shifted g factors, together with g's expansion over set
//! partitions and the block sums it uses. Rendering and evaluation are
//! separate consumers of the same tree.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::partitions_of;
use crate::profile::{composition_count, ClassVector, CompositionWalker, FactorialTable};

/// Largest `k` accepted by [`generate_expression`] unless overridden.
pub const DEFAULT_MAX_EXPRESSION_K: usize = 8;

/// `g(s_v + offset_v, ...)^{s_exponent}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub exponent: ClassVector,
    /// One offset per summation index, in index order.
    pub offsets: Vec<i64>,
}

/// `coefficient · Π_B f_B`; blocks hold 1-based row labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GExpansionTerm {
    pub coefficient: i64,
    pub blocks: Vec<Vec<usize>>,
}

/// `f_B = Σ t_v` over the listed classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSum {
    pub block: Vec<usize>,
    pub classes: Vec<ClassVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    pub k: usize,
    /// Summation indices `s_v`, one per class vector, constrained to sum to `n`.
    pub indices: Vec<ClassVector>,
    /// `(weight, v)` pairs of the sign exponent `Σ weight(v)·s_v`, zero weights dropped.
    pub sign_exponent: Vec<(u32, ClassVector)>,
    pub factors: Vec<Factor>,
    pub g_expansion: Vec<GExpansionTerm>,
    pub block_sums: Vec<BlockSum>,
}

impl Expression {
    /// Rows under inclusion-exclusion, `k - 1`.
    pub fn m(&self) -> usize {
        self.k - 1
    }
}

/// Builds the expression for `R_k(n)`, `2 ≤ k ≤ max_k`.
pub fn generate_expression(k: usize, max_k: usize) -> Result<Expression> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "k must be at least 2; R_1(n) = 1 for every n, so there is no expression to print".into(),
        ));
    }
    if k > max_k {
        return Err(Error::GuardExceeded {
            what: "expression rows (k)",
            predicted: BigUint::from(k),
            ceiling: BigUint::from(max_k),
        });
    }
    let m = k - 1;
    let indices: Vec<ClassVector> = ClassVector::all(m).collect();
    let all_ones = ClassVector::all_ones(m);
    let sign_exponent = indices
        .iter()
        .filter(|v| v.weight() > 0)
        .map(|&v| (v.weight(), v))
        .collect();
    let factors = indices
        .iter()
        .map(|&v| {
            let mut offsets = vec![0i64; indices.len()];
            if v != all_ones {
                offsets[v.index()] -= 1;
                offsets[all_ones.index()] += 1;
            }
            Factor { exponent: v, offsets }
        })
        .collect();
    let mut block_sums: Vec<BlockSum> = Vec::new();
    let mut g_expansion = Vec::new();
    for p in partitions_of(m) {
        let blocks = p.blocks();
        for block in &blocks {
            if !block_sums.iter().any(|b| &b.block == block) {
                let classes = indices
                    .iter()
                    .copied()
                    .filter(|v| block.iter().all(|&row| !v.bit(row - 1)))
                    .collect();
                block_sums.push(BlockSum {
                    block: block.clone(),
                    classes,
                });
            }
        }
        g_expansion.push(GExpansionTerm {
            coefficient: p.mobius_coefficient(),
            blocks,
        });
    }
    block_sums.sort_by(|a, b| a.block.len().cmp(&b.block.len()).then_with(|| a.block.cmp(&b.block)));
    Ok(Expression {
        k,
        indices,
        sign_exponent,
        factors,
        g_expansion,
        block_sums,
    })
}

fn eval_g(e: &Expression, args: &[i64]) -> BigInt {
    let f = |block: &[usize]| -> i64 {
        let sum = e
            .block_sums
            .iter()
            .find(|b| b.block == block)
            .expect("every expansion block has a block sum");
        sum.classes.iter().map(|v| args[v.index()]).sum()
    };
    e.g_expansion
        .iter()
        .map(|term| {
            term.blocks
                .iter()
                .fold(BigInt::from(term.coefficient), |acc, b| acc * f(b))
        })
        .sum()
}

/// Evaluates the expression at `n` by walking the tree directly.
pub fn evaluate_expression(e: &Expression, n: usize, max_terms: &BigUint) -> Result<BigUint> {
    let m = e.m();
    let predicted = composition_count(n, m);
    if &predicted > max_terms {
        return Err(Error::GuardExceeded {
            what: "expression evaluation",
            predicted,
            ceiling: max_terms.clone(),
        });
    }
    let facts = FactorialTable::new(n);
    let mut total = BigInt::zero();
    let mut walker = CompositionWalker::new(n, e.indices.len());
    while let Some(s) = walker.next_counts() {
        let exponent: u64 = e
            .sign_exponent
            .iter()
            .map(|&(w, v)| w as u64 * s[v.index()] as u64)
            .sum();
        let denom: BigUint = s.iter().map(|&c| facts.get(c).clone()).product();
        let multinomial = BigInt::from(facts.get(n) / denom);
        let mut product = BigInt::one();
        for factor in &e.factors {
            let exp = s[factor.exponent.index()];
            if exp == 0 {
                continue;
            }
            let args: Vec<i64> = s
                .iter()
                .zip(&factor.offsets)
                .map(|(&c, &o)| c as i64 + o)
                .collect();
            product *= eval_g(e, &args).pow(exp as u32);
        }
        let term = multinomial * product;
        if exponent.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    match total.sign() {
        Sign::Minus => Err(Error::Inconsistent(format!("expression evaluated to {total}"))),
        _ => Ok(total.magnitude().clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::bell_number;

    fn expr(k: usize) -> Expression {
        generate_expression(k, DEFAULT_MAX_EXPRESSION_K).unwrap()
    }

    fn coeffs(e: &Expression) -> Vec<i64> {
        e.g_expansion.iter().map(|t| t.coefficient).collect()
    }

    #[test]
    fn k2_structure() {
        let e = expr(2);
        assert_eq!(e.indices.len(), 2);
        assert_eq!(coeffs(&e), [1]);
        assert_eq!(e.factors[0].offsets, [-1, 1]);
        assert_eq!(e.factors[1].offsets, [0, 0]);
    }

    #[test]
    fn k3_expansion() {
        let e = expr(3);
        assert_eq!(e.indices.len(), 4);
        assert_eq!(e.g_expansion.len(), 2);
        assert_eq!(e.g_expansion[0], GExpansionTerm { coefficient: 1, blocks: vec![vec![1], vec![2]] });
        assert_eq!(e.g_expansion[1], GExpansionTerm { coefficient: -1, blocks: vec![vec![1, 2]] });
    }

    #[test]
    fn k4_and_k5_expansions() {
        assert_eq!(coeffs(&expr(4)), [1, -1, -1, -1, 2]);
        assert_eq!(expr(5).g_expansion.len(), 15);
    }

    #[test]
    fn structural_invariants() {
        for k in 2..=DEFAULT_MAX_EXPRESSION_K {
            let e = expr(k);
            assert_eq!(BigUint::from(e.g_expansion.len()), bell_number(k - 1));
            assert_eq!(e.factors.len(), 1 << (k - 1));
            let last = e.factors.last().unwrap();
            assert!(last.exponent.is_all_ones());
            assert!(last.offsets.iter().all(|&o| o == 0));
            for (t, p) in e.g_expansion.iter().zip(partitions_of(k - 1)) {
                assert_eq!(t.coefficient, p.mobius_coefficient());
            }
        }
    }

    #[test]
    fn rejects_out_of_range_k() {
        assert!(generate_expression(1, 8).is_err());
        assert!(generate_expression(9, 8).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let cap = BigUint::from(1_000_000u32);
        assert_eq!(evaluate_expression(&expr(2), 4, &cap).unwrap(), BigUint::from(9u8));
        assert_eq!(evaluate_expression(&expr(3), 3, &cap).unwrap(), BigUint::from(2u8));
        for k in 2..=5 {
            assert_eq!(evaluate_expression(&expr(k), 0, &cap).unwrap(), BigUint::one());
        }
    }

    #[test]
    fn derived_k2_matches_ryser_sum() {
        let cap = BigUint::from(1_000_000u32);
        for n in 0..=10 {
            assert_eq!(
                evaluate_expression(&expr(2), n, &cap).unwrap(),
                crate::derangements_ryser(n)
            );
        }
    }
}
