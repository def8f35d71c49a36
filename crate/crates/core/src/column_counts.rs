//! Per-column choice counts.
//!
//! `g(t)` counts ordered `m`-tuples of distinct floors where coordinate `i`
//! may only use floors whose class leaves bit `i` clear. It is written as a
//! Möbius inversion over set partitions of the rows:
//!
//! ```text
//! g(t) = Σ_π μ(0̂, π) · Π_{B ∈ π} f_B(t),     f_B(t) = Σ_{v : v_i = 0 ∀ i ∈ B} t_v
//! ```
//!
//! `G(s)` is the number of reduced lonely-hall configurations avoiding a hall
//! set with profile `s`: a product over columns, where a column whose back
//! symbol sits on a floor of class `v` sees the profile with that floor moved
//! into the all-ones class.

use num_bigint::BigInt;
use num_traits::One;

use crate::partition::partitions_of;
use crate::profile::{ClassVector, Profile};
use crate::tally::{naive_pow_mults, NoOps, OpSink};

/// One signed product `coefficient · Π f_B` of the g expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTerm {
    pub coefficient: i64,
    /// Indices into [`GPolynomial::block_masks`].
    pub blocks: Vec<usize>,
}

/// The g polynomial for a fixed number of rows, with partitions and block
/// class lists precomputed.
#[derive(Debug, Clone)]
pub struct GPolynomial {
    m: usize,
    block_masks: Vec<u32>,
    block_classes: Vec<Vec<usize>>,
    terms: Vec<GTerm>,
}

impl GPolynomial {
    pub fn new(m: usize) -> Self {
        let mut block_masks: Vec<u32> = Vec::new();
        let mut terms = Vec::new();
        for p in partitions_of(m) {
            let blocks = p
                .block_masks()
                .into_iter()
                .map(|mask| match block_masks.iter().position(|&b| b == mask) {
                    Some(i) => i,
                    None => {
                        block_masks.push(mask);
                        block_masks.len() - 1
                    }
                })
                .collect();
            terms.push(GTerm {
                coefficient: p.mobius_coefficient(),
                blocks,
            });
        }
        let block_classes = block_masks
            .iter()
            .map(|&mask| (0..1usize << m).filter(|&v| v as u32 & mask == 0).collect())
            .collect();
        GPolynomial {
            m,
            block_masks,
            block_classes,
            terms,
        }
    }

    /// A deliberately wrong g (leading coefficient doubled for `m ≥ 1`),
    /// used to check that the cross-validation suites notice.
    ///
    /// Shifting g by a constant is not enough: for `m = 1` the sum with
    /// `g + 1` still returns the derangement numbers.
    #[doc(hidden)]
    pub fn corrupted(m: usize) -> Self {
        let mut g = Self::new(m);
        if m >= 1 {
            g.terms[0].coefficient *= 2;
        }
        g
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[GTerm] {
        &self.terms
    }

    /// Block bitmasks over 0-based rows.
    pub fn block_masks(&self) -> &[u32] {
        &self.block_masks
    }

    /// Evaluates g on arbitrary integer class counts.
    pub fn eval<S: OpSink>(&self, t: &[i64], ops: &mut S) -> BigInt {
        debug_assert_eq!(t.len(), 1 << self.m);
        let f: Vec<i64> = self
            .block_classes
            .iter()
            .map(|classes| {
                ops.add(classes.len().saturating_sub(1) as u64);
                classes.iter().map(|&v| t[v]).sum()
            })
            .collect();
        let mut total: Option<BigInt> = None;
        for term in &self.terms {
            let mut prod = BigInt::from(term.coefficient);
            let mut mults = term.blocks.len() as u64;
            if term.coefficient.abs() == 1 && mults > 0 {
                // a unit coefficient is a sign, not a multiplication
                mults -= 1;
            }
            for &b in &term.blocks {
                prod *= f[b];
            }
            ops.mul(mults, mults);
            total = Some(match total {
                None => prod,
                Some(acc) => {
                    ops.add(1);
                    acc + prod
                }
            });
        }
        total.unwrap_or_else(BigInt::one)
    }
}

/// `f_A(t)` for a nonempty block `A` of 1-based rows.
pub fn f_block(t: &Profile, block: &[usize]) -> i64 {
    assert!(!block.is_empty(), "block must be nonempty");
    let mask = block.iter().fold(0u32, |acc, &i| {
        assert!(i >= 1 && i <= t.m(), "row {i} outside 1..={}", t.m());
        acc | 1 << (i - 1)
    });
    t.counts()
        .iter()
        .enumerate()
        .filter(|&(v, _)| v as u32 & mask == 0)
        .map(|(_, &c)| c as i64)
        .sum()
}

/// g of a profile.
pub fn g(t: &Profile) -> BigInt {
    GPolynomial::new(t.m()).eval(&t.signed_counts(), &mut NoOps)
}

/// Moves one floor from class `v` into the all-ones class; identity when `v`
/// is itself all-ones.
pub fn shift_profile(s: &Profile, v: ClassVector) -> Profile {
    assert_eq!(s.m(), v.m());
    let mut out = s.clone();
    if !v.is_all_ones() {
        assert!(s.count(v) >= 1, "cannot shift from empty class {v}");
        *out.count_mut(v) -= 1;
        *out.count_mut(ClassVector::all_ones(s.m())) += 1;
    }
    out
}

/// `base^exp` by square-and-multiply, tallying each multiplication performed
/// alongside the `exp - 1` a naive evaluation would use.
pub fn pow_tallied<S: OpSink>(base: &BigInt, exp: u64, ops: &mut S) -> BigInt {
    if exp == 0 {
        return BigInt::one();
    }
    let mut actual = 0u64;
    let mut result: Option<BigInt> = None;
    let mut square = base.clone();
    let mut e = exp;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => square.clone(),
                Some(r) => {
                    actual += 1;
                    r * &square
                }
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        actual += 1;
        square = &square * &square;
    }
    ops.mul(actual, naive_pow_mults(exp));
    result.unwrap()
}

/// Evaluates `G` for profiles over a fixed number of rows.
#[derive(Debug, Clone)]
pub struct ColumnCounts {
    g: GPolynomial,
}

impl ColumnCounts {
    pub fn new(m: usize) -> Self {
        ColumnCounts {
            g: GPolynomial::new(m),
        }
    }

    pub fn with_polynomial(g: GPolynomial) -> Self {
        ColumnCounts { g }
    }

    pub fn polynomial(&self) -> &GPolynomial {
        &self.g
    }

    /// `Π_{v : s_v ≥ 1} g(shift(s, v))^{s_v}`; empty classes contribute no
    /// factor and are never shifted.
    pub fn big_g<S: OpSink>(&self, counts: &[usize], ops: &mut S) -> BigInt {
        let all_ones = counts.len() - 1;
        let mut shifted: Vec<i64> = counts.iter().map(|&c| c as i64).collect();
        let mut product: Option<BigInt> = None;
        for (v, &exp) in counts.iter().enumerate() {
            if exp == 0 {
                continue;
            }
            if v != all_ones {
                shifted[v] -= 1;
                shifted[all_ones] += 1;
            }
            let gv = self.g.eval(&shifted, ops);
            if v != all_ones {
                shifted[v] += 1;
                shifted[all_ones] -= 1;
            }
            let factor = pow_tallied(&gv, exp as u64, ops);
            product = Some(match product {
                None => factor,
                Some(p) => {
                    ops.mul(1, 1);
                    p * factor
                }
            });
        }
        product.unwrap_or_else(BigInt::one)
    }
}

/// `G(s)`.
pub fn big_g(s: &Profile) -> BigInt {
    ColumnCounts::new(s.m()).big_g(s.counts(), &mut NoOps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::compositions;
    use num_traits::Zero;
    use crate::tally::OpTally;

    fn p(m: usize, c: &[usize]) -> Profile {
        Profile::new(m, c.to_vec())
    }

    /// Ordered `m`-tuples of distinct floors, coordinate `i` restricted to
    /// floors whose class has bit `i` clear. Floors are laid out class by
    /// class.
    fn injective_tuples(t: &[usize], m: usize) -> u64 {
        let floors: Vec<usize> = t
            .iter()
            .enumerate()
            .flat_map(|(v, &c)| std::iter::repeat_n(v, c))
            .collect();
        fn go(floors: &[usize], m: usize, i: usize, used: &mut Vec<bool>) -> u64 {
            if i == m {
                return 1;
            }
            let mut total = 0;
            for (f, &class) in floors.iter().enumerate() {
                if used[f] || class >> i & 1 == 1 {
                    continue;
                }
                used[f] = true;
                total += go(floors, m, i + 1, used);
                used[f] = false;
            }
            total
        }
        go(&floors, m, 0, &mut vec![false; floors.len()])
    }

    #[test]
    fn f_block_examples() {
        // t000=2, t010=1, t001=1, t011=1; index = bit0 + 2 bit1 + 4 bit2
        let mut c = vec![0; 8];
        c[0b000] = 2;
        c[0b010] = 1;
        c[0b100] = 1;
        c[0b110] = 1;
        let t = p(3, &c);
        assert_eq!(f_block(&t, &[1]), 5);
        assert_eq!(f_block(&t, &[1, 2]), 3);
        assert_eq!(f_block(&t, &[1, 2, 3]), 2);
    }

    #[test]
    fn g_examples() {
        assert_eq!(g(&p(2, &[2, 1, 1, 0])), BigInt::from(7));
        assert_eq!(injective_tuples(&[2, 1, 1, 0], 2), 7);
        assert_eq!(g(&p(2, &[1, 0, 0, 0])), BigInt::from(0));
        assert_eq!(g(&p(1, &[3, 2])), BigInt::from(3));
        assert_eq!(g(&p(0, &[4])), BigInt::from(1));
    }

    #[test]
    fn g_on_all_zero_profile() {
        assert_eq!(g(&p(0, &[0])), BigInt::one());
        for m in 1..=4 {
            assert_eq!(g(&Profile::unrestricted(m, 0)), BigInt::zero());
        }
    }

    #[test]
    fn g_is_injective_count() {
        for m in 0..=3 {
            for n in 0..=5 {
                for t in compositions(n, m) {
                    let expected = injective_tuples(t.counts(), m);
                    assert_eq!(g(&t), BigInt::from(expected), "t={:?}", t.counts());
                }
            }
        }
    }

    #[test]
    fn g_falling_factorial() {
        for m in 0..=4 {
            for n in 0..=12usize {
                let ff: i64 = (0..m as i64).map(|i| n as i64 - i).product();
                assert_eq!(g(&Profile::unrestricted(m, n)), BigInt::from(ff), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn g_with_four_rows_uses_minus_six() {
        // m = 4 one-block coefficient is forced by the injective count
        for n in 0..=4 {
            for t in compositions(n, 4) {
                assert_eq!(g(&t), BigInt::from(injective_tuples(t.counts(), 4)));
            }
        }
        let poly = GPolynomial::new(4);
        assert_eq!(poly.terms().last().unwrap().coefficient, -6);
    }

    #[test]
    fn shift_examples() {
        let s = p(2, &[3, 1, 0, 1]);
        assert_eq!(shift_profile(&s, ClassVector::new(2, 0)), p(2, &[2, 1, 0, 2]));
        assert_eq!(shift_profile(&s, ClassVector::new(2, 3)), s);
        assert_eq!(shift_profile(&p(2, &[0, 2, 0, 0]), ClassVector::new(2, 1)), p(2, &[0, 1, 0, 1]));
    }

    #[test]
    #[should_panic]
    fn shift_from_empty_class_panics() {
        shift_profile(&p(2, &[3, 0, 0, 1]), ClassVector::new(2, 1));
    }

    #[test]
    fn big_g_examples() {
        assert_eq!(big_g(&p(1, &[3, 0])), BigInt::from(8));
        assert_eq!(big_g(&p(1, &[3, 1])), BigInt::from(24));
        assert_eq!(big_g(&p(1, &[2, 2])), BigInt::from(4));
    }

    #[test]
    fn big_g_matches_ryser_terms() {
        for n in 0..=10i64 {
            for r in 0..=n {
                let expected = BigInt::from(n - r).pow(r as u32) * BigInt::from(n - r - 1).pow((n - r) as u32);
                assert_eq!(big_g(&p(1, &[(n - r) as usize, r as usize])), expected, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn big_g_nonnegative() {
        for m in 0..=3 {
            for n in 0..=6 {
                for s in compositions(n, m) {
                    assert!(big_g(&s) >= BigInt::zero());
                }
            }
        }
    }

    #[test]
    fn pow_tally_counts() {
        let mut ops = OpTally::default();
        let v = pow_tallied(&BigInt::from(3), 13, &mut ops);
        assert_eq!(v, BigInt::from(3).pow(13));
        assert_eq!(ops.mults_actual, crate::tally::binary_pow_mults(13));
        assert_eq!(ops.mults_paper_model, 12);
        assert_eq!(pow_tallied(&BigInt::from(0), 0, &mut ops), BigInt::one());
    }
}
