//! Set partitions of `{1..m}` and their Möbius weights in the partition lattice.
//!
//! A partition is stored as its restricted growth string (RGS): entry `i`
//! names the block holding element `i + 1`, blocks numbered in order of first
//! appearance. Block lists are derived on demand.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A set partition of `{1..m}` in canonical restricted-growth form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<u8>,
}

impl SetPartition {
    /// Builds a partition from a restricted growth string, rejecting
    /// non-canonical input.
    pub fn from_rgs(rgs: Vec<u8>) -> Option<Self> {
        let mut max_seen: Option<u8> = None;
        for &b in &rgs {
            let limit = max_seen.map_or(0, |x| x + 1);
            if b > limit {
                return None;
            }
            max_seen = Some(max_seen.map_or(b, |x| x.max(b)));
        }
        Some(SetPartition { rgs })
    }

    /// Size of the ground set.
    pub fn ground_size(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().max().map_or(0, |&b| b as usize + 1)
    }

    /// Blocks as sorted lists of 1-based elements, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b as usize].push(i + 1);
        }
        blocks
    }

    /// Blocks as bitmasks over 0-based elements (bit `i` is element `i + 1`).
    pub fn block_masks(&self) -> Vec<u32> {
        let mut masks = vec![0u32; self.block_count()];
        for (i, &b) in self.rgs.iter().enumerate() {
            masks[b as usize] |= 1 << i;
        }
        masks
    }

    /// Möbius function μ(0̂, π) of the partition lattice: the product over
    /// blocks `B` of `(-1)^(|B|-1) (|B|-1)!`.
    pub fn mobius_coefficient(&self) -> i64 {
        self.blocks()
            .iter()
            .map(|block| {
                let d = block.len() as i64 - 1;
                let fact: i64 = (1..=d).product();
                if d % 2 == 0 {
                    fact
                } else {
                    -fact
                }
            })
            .product()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (bi, block) in self.blocks().iter().enumerate() {
            if bi > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (ei, e) in block.iter().enumerate() {
                if ei > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Every set partition of `{1..m}`, finest first.
///
/// The order is descending lexicographic on the restricted growth string, so
/// `{{1},{2},...,{m}}` comes first and the one-block partition last.
pub fn partitions_of(m: usize) -> Vec<SetPartition> {
    assert!(m <= 32, "ground set too large for block bitmasks");
    let mut out = Vec::new();
    let mut rgs = vec![0u8; m];
    extend_rgs(&mut rgs, 0, None, &mut out);
    out.reverse();
    out
}

fn extend_rgs(rgs: &mut Vec<u8>, pos: usize, max_seen: Option<u8>, out: &mut Vec<SetPartition>) {
    if pos == rgs.len() {
        out.push(SetPartition { rgs: rgs.clone() });
        return;
    }
    let limit = max_seen.map_or(0, |x| x + 1);
    for b in 0..=limit {
        rgs[pos] = b;
        let next_max = Some(max_seen.map_or(b, |x| x.max(b)));
        extend_rgs(rgs, pos + 1, next_max, out);
    }
}

/// Bell number `B(m)`, computed with the Bell triangle.
pub fn bell_number(m: usize) -> BigUint {
    if m == 0 {
        return BigUint::one();
    }
    let mut row = vec![BigUint::one()];
    for _ in 1..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap_or_else(BigUint::zero));
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row.last().cloned().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(ps: &[SetPartition]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn empty_ground_set_has_one_partition() {
        let ps = partitions_of(0);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].block_count(), 0);
        assert_eq!(ps[0].mobius_coefficient(), 1);
    }

    #[test]
    fn two_set() {
        assert_eq!(show(&partitions_of(2)), ["{{1},{2}}", "{{1,2}}"]);
    }

    #[test]
    fn three_set_matches_g4_expansion() {
        let ps = partitions_of(3);
        assert_eq!(
            show(&ps),
            ["{{1},{2},{3}}", "{{1},{2,3}}", "{{1,3},{2}}", "{{1,2},{3}}", "{{1,2,3}}"]
        );
        let coeffs: Vec<i64> = ps.iter().map(|p| p.mobius_coefficient()).collect();
        assert_eq!(coeffs, [1, -1, -1, -1, 2]);
    }

    #[test]
    fn one_block_of_four() {
        let p = SetPartition::from_rgs(vec![0, 0, 0, 0]).unwrap();
        assert_eq!(p.mobius_coefficient(), -6);
    }

    #[test]
    fn rejects_non_canonical_rgs() {
        assert!(SetPartition::from_rgs(vec![1, 0]).is_none());
        assert!(SetPartition::from_rgs(vec![0, 2]).is_none());
        assert!(SetPartition::from_rgs(vec![0, 1, 0, 2]).is_some());
    }

    #[test]
    fn bell_values() {
        let got: Vec<u64> = (0..=8)
            .map(|m| bell_number(m).try_into().unwrap())
            .collect();
        assert_eq!(got, [1, 1, 2, 5, 15, 52, 203, 877, 4140]);
    }

    #[test]
    fn counts_match_bell_and_are_deterministic() {
        for m in 0..=8 {
            let ps = partitions_of(m);
            assert_eq!(BigUint::from(ps.len()), bell_number(m));
            assert_eq!(ps, partitions_of(m));
            let mut sorted = ps.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), ps.len());
        }
    }

    #[test]
    fn blocks_cover_ground_set() {
        for m in 0..=6 {
            for p in partitions_of(m) {
                let masks = p.block_masks();
                let union = masks.iter().fold(0u32, |acc, &b| {
                    assert_eq!(acc & b, 0);
                    assert_ne!(b, 0);
                    acc | b
                });
                assert_eq!(union, (1u32 << m) - 1);
            }
        }
    }

    #[test]
    fn mobius_sums_vanish_above_one() {
        for m in 0..=8 {
            let total: i64 = partitions_of(m).iter().map(|p| p.mobius_coefficient()).sum();
            assert_eq!(total, if m <= 1 { 1 } else { 0 }, "m = {m}");
        }
    }
}
