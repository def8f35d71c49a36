//! Brute-force ground truth.
//!
//! Nothing here uses the inclusion-exclusion machinery: Latin rectangles and
//! lonely-hall configurations are enumerated cell by cell.
//!
//! In the cube-of-rooms picture a rectangle selects room `(i, j, l)` when
//! cell `(i, j)` holds symbol `l`. A shaft fixes `(i, j)`, a hall fixes
//! `(i, l)` and a corridor fixes `(j, l)`. Symbols double as floors.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::profile::{FactorialTable, Profile};
use crate::Variant;

/// A `k × n` matrix with entries in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Rectangle {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("rows have unequal lengths".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if value < 1 || value as usize > n {
                    return Err(Error::CellOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        value,
                        n,
                    });
                }
            }
        }
        Ok(Rectangle { n, rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// The characteristic tensor `S[i][j][l] = 1` iff cell `(i, j)` holds `l + 1`.
    pub fn tensor(&self) -> Vec<Vec<Vec<u8>>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| (1..=self.n as u32).map(|l| u8::from(l == x)).collect())
                    .collect()
            })
            .collect()
    }

    pub fn is_latin(&self) -> bool {
        let rows_ok = self.rows.iter().all(|row| distinct(row.iter().copied()));
        let cols_ok = (0..self.n).all(|j| distinct(self.rows.iter().map(|r| r[j])));
        rows_ok && cols_ok
    }

    pub fn is_reduced(&self) -> bool {
        self.rows
            .first()
            .is_none_or(|r| r.iter().enumerate().all(|(j, &x)| x as usize == j + 1))
    }

    /// Permutes columns so the first row reads `1..n`.
    pub fn reduce(&self) -> Result<Rectangle> {
        if !self.is_latin() {
            return Err(Error::NotLatin);
        }
        let Some(first) = self.rows.first() else {
            return Ok(self.clone());
        };
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&j| first[j]);
        let rows = self
            .rows
            .iter()
            .map(|row| order.iter().map(|&j| row[j]).collect())
            .collect();
        Ok(Rectangle { n: self.n, rows })
    }

    /// One room per shaft, at most one per corridor; rows may repeat.
    pub fn is_lonely_hall(&self) -> bool {
        (0..self.n).all(|j| distinct(self.rows.iter().map(|r| r[j])))
    }
}

pub type LonelyHallConfig = Rectangle;

fn distinct(values: impl Iterator<Item = u32>) -> bool {
    let mut seen = 0u128;
    for v in values {
        let bit = 1u128 << (v % 128);
        if seen & bit != 0 {
            return false;
        }
        seen |= bit;
    }
    true
}

/// A set of omitted halls `(row, floor)` with `row` in `2..=k` and `floor` in `1..=n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HallSet {
    halls: BTreeSet<(usize, usize)>,
}

impl HallSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(k: usize, n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut s = HallSet::new();
        for (row, floor) in pairs {
            if !(2..=k).contains(&row) || !(1..=n).contains(&floor) {
                return Err(Error::InvalidArgument(format!(
                    "hall ({row}, {floor}) outside rows 2..={k}, floors 1..={n}"
                )));
            }
            s.halls.insert((row, floor));
        }
        Ok(s)
    }

    /// Every hall set over rows `2..=k` and floors `1..=n`, by bitmask.
    pub fn all(k: usize, n: usize) -> impl Iterator<Item = HallSet> {
        let slots: Vec<(usize, usize)> = (2..=k)
            .flat_map(|row| (1..=n).map(move |floor| (row, floor)))
            .collect();
        assert!(slots.len() < 32, "too many halls to enumerate");
        (0u32..1 << slots.len()).map(move |mask| HallSet {
            halls: slots
                .iter()
                .enumerate()
                .filter(|&(b, _)| mask >> b & 1 == 1)
                .map(|(_, &h)| h)
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.halls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halls.is_empty()
    }

    pub fn contains(&self, row: usize, floor: usize) -> bool {
        self.halls.contains(&(row, floor))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.halls.iter().copied()
    }
}

/// Classifies every floor by which of its halls lie in `s`.
pub fn profile_of(s: &HallSet, k: usize, n: usize) -> Profile {
    assert!(k >= 1);
    let m = k - 1;
    let mut counts = vec![0usize; 1 << m];
    for floor in 1..=n {
        let class = (0..m)
            .filter(|&i| s.contains(i + 2, floor))
            .fold(0usize, |acc, i| acc | 1 << i);
        counts[class] += 1;
    }
    Profile::new(m, counts)
}

/// Size ceilings for brute-force searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_k: usize,
    pub max_n: usize,
}

impl OracleLimits {
    pub const LATIN: OracleLimits = OracleLimits { max_k: 4, max_n: 7 };
    pub const LONELY_HALL: OracleLimits = OracleLimits { max_k: 3, max_n: 6 };

    fn check(&self, what: &'static str, k: usize, n: usize) -> Result<()> {
        if k > self.max_k || n > self.max_n {
            let predicted = BigUint::from(n).pow(((k.max(1) - 1) * n) as u32);
            let ceiling = BigUint::from(self.max_n).pow(((self.max_k.max(1) - 1) * self.max_n) as u32);
            return Err(Error::GuardExceeded {
                what,
                predicted,
                ceiling,
            });
        }
        Ok(())
    }
}

/// Counts Latin rectangles by backtracking over rows `2..=k`, column by column.
///
/// The total is `n!` times the reduced count: every Latin rectangle reduces
/// to exactly one reduced rectangle by a unique column permutation.
pub fn brute_force_count(k: usize, n: usize, variant: Variant, limits: OracleLimits) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    limits.check("brute-force search", k, n)?;
    let reduced = BigUint::from(reduced_search(k, n));
    Ok(match variant {
        Variant::Reduced => reduced,
        Variant::Total => reduced * FactorialTable::new(n).get(n),
    })
}

fn reduced_search(k: usize, n: usize) -> u64 {
    struct Search {
        k: usize,
        n: usize,
        row_used: Vec<u64>,
        col_used: Vec<u64>,
    }
    impl Search {
        fn go(&mut self, pos: usize) -> u64 {
            let rows = self.k - 1;
            if pos == rows * self.n {
                return 1;
            }
            let (j, i) = (pos / rows, pos % rows);
            let blocked = self.row_used[i] | self.col_used[j];
            let mut total = 0;
            for sym in 0..self.n {
                let bit = 1u64 << sym;
                if blocked & bit != 0 {
                    continue;
                }
                self.row_used[i] |= bit;
                self.col_used[j] |= bit;
                total += self.go(pos + 1);
                self.row_used[i] &= !bit;
                self.col_used[j] &= !bit;
            }
            total
        }
    }
    if k == 1 || n == 0 {
        return 1;
    }
    let mut search = Search {
        k,
        n,
        row_used: vec![0; k - 1],
        col_used: (0..n).map(|j| 1u64 << j).collect(),
    };
    search.go(0)
}

/// Counts reduced lonely-hall configurations that leave every hall of `s`
/// empty.
pub fn lonely_hall_count(k: usize, n: usize, s: &HallSet, limits: OracleLimits) -> Result<BigUint> {
    let mut count = 0u64;
    visit_lonely_hall(k, n, s, limits, |_| count += 1)?;
    Ok(BigUint::from(count))
}

/// Calls `visit` with each reduced lonely-hall configuration avoiding `s`.
pub fn visit_lonely_hall<F: FnMut(&[Vec<u32>])>(
    k: usize,
    n: usize,
    s: &HallSet,
    limits: OracleLimits,
    mut visit: F,
) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    limits.check("lonely-hall search", k, n)?;
    if let Some((row, floor)) = s.iter().find(|&(r, f)| !(2..=k).contains(&r) || !(1..=n).contains(&f)) {
        return Err(Error::InvalidArgument(format!("hall ({row}, {floor}) out of range")));
    }
    let mut grid: Vec<Vec<u32>> = (0..k)
        .map(|i| if i == 0 { (1..=n as u32).collect() } else { vec![0; n] })
        .collect();
    let forbidden: Vec<u64> = (0..k)
        .map(|i| {
            (1..=n)
                .filter(|&floor| s.contains(i + 1, floor))
                .fold(0u64, |acc, floor| acc | 1 << (floor - 1))
        })
        .collect();
    let mut col_used: Vec<u64> = (0..n).map(|j| 1u64 << j).collect();
    fn go<F: FnMut(&[Vec<u32>])>(
        pos: usize,
        k: usize,
        n: usize,
        grid: &mut Vec<Vec<u32>>,
        forbidden: &[u64],
        col_used: &mut [u64],
        visit: &mut F,
    ) {
        let rows = k - 1;
        if pos == rows * n {
            visit(grid);
            return;
        }
        let (j, i) = (pos / rows, pos % rows + 1);
        let blocked = forbidden[i] | col_used[j];
        for sym in 0..n {
            let bit = 1u64 << sym;
            if blocked & bit != 0 {
                continue;
            }
            col_used[j] |= bit;
            grid[i][j] = sym as u32 + 1;
            go(pos + 1, k, n, grid, forbidden, col_used, visit);
            col_used[j] &= !bit;
        }
    }
    if k == 1 || n == 0 {
        visit(&grid);
        return Ok(());
    }
    go(0, k, n, &mut grid, &forbidden, &mut col_used, &mut visit);
    Ok(())
}
