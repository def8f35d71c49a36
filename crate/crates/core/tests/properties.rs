use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use latin_rect::column_counts::{big_g, g, shift_profile, ColumnCounts};
use latin_rect::expression::{evaluate_expression, generate_expression};
use latin_rect::oracle::{brute_force_count, lonely_hall_count, profile_of, HallSet, OracleLimits, Rectangle};
use latin_rect::partition::{partitions_of, SetPartition};
use latin_rect::profile::{multinomial, ClassVector, FactorialTable, Profile};
use latin_rect::tally::NoOps;
use latin_rect::{reduced_count, total_count, EvalOptions, Variant};

/// A restricted growth string of length `len`.
fn rgs(len: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(any::<u8>(), len).prop_map(|raw| {
        let mut out = Vec::with_capacity(raw.len());
        let mut max = 0u8;
        for (i, r) in raw.into_iter().enumerate() {
            let v = if i == 0 { 0 } else { r % (max + 2) };
            max = max.max(v);
            out.push(v);
        }
        out
    })
}

fn profile(m: usize, max_count: usize) -> impl Strategy<Value = Profile> {
    proptest::collection::vec(0..=max_count, 1 << m).prop_map(move |c| Profile::new(m, c))
}

/// Tuples over `0..n` with no repeated entry, drawn from the rows' allowed
/// sets; the brute-force meaning of `g`.
fn injective_tuples(t: &Profile) -> BigInt {
    let m = t.m();
    let mut floors = Vec::new();
    for v in ClassVector::all(m) {
        floors.extend(std::iter::repeat_n(v, t.count(v)));
    }
    fn go(row: usize, m: usize, floors: &[ClassVector], used: &mut Vec<bool>) -> u64 {
        if row == m {
            return 1;
        }
        let mut total = 0;
        for (j, v) in floors.iter().enumerate() {
            if !used[j] && !v.bit(row) {
                used[j] = true;
                total += go(row + 1, m, floors, used);
                used[j] = false;
            }
        }
        total
    }
    BigInt::from(go(0, m, &floors, &mut vec![false; floors.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_rgs_round_trips(r in (1usize..7).prop_flat_map(rgs)) {
        let p = SetPartition::from_rgs(r.clone()).unwrap();
        prop_assert_eq!(p.rgs(), &r[..]);
        let mut seen: Vec<usize> = p.blocks().concat();
        seen.sort_unstable();
        prop_assert_eq!(seen, (1..=r.len()).collect::<Vec<_>>());
        prop_assert!(partitions_of(r.len()).contains(&p));
    }

    #[test]
    fn g_counts_injective_tuples(t in (1usize..=3).prop_flat_map(|m| profile(m, 3))) {
        prop_assert_eq!(g(&t), injective_tuples(&t));
    }

    #[test]
    fn shift_keeps_total(t in (1usize..=3).prop_flat_map(|m| profile(m, 4)), pick in any::<usize>()) {
        let m = t.m();
        let nonempty: Vec<ClassVector> = ClassVector::all(m)
            .filter(|&v| !v.is_all_ones() && t.count(v) > 0)
            .collect();
        prop_assume!(!nonempty.is_empty());
        let v = nonempty[pick % nonempty.len()];
        let s = shift_profile(&t, v);
        prop_assert_eq!(s.n(), t.n());
        prop_assert_eq!(s.count(v) + 1, t.count(v));
        prop_assert_eq!(s.count(ClassVector::all_ones(m)), t.count(ClassVector::all_ones(m)) + 1);
    }

    #[test]
    fn big_g_is_nonnegative(t in (1usize..=3).prop_flat_map(|m| profile(m, 3))) {
        prop_assert!(big_g(&t) >= BigInt::from(0));
    }

    #[test]
    fn multinomial_is_order_free(mut counts in proptest::collection::vec(0usize..6, 4), seed in any::<u64>()) {
        let a = multinomial(&Profile::new(2, counts.clone()));
        counts.rotate_left((seed % 4) as usize);
        let b = multinomial(&Profile::new(2, counts.clone()));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn g_of_hall_profile_matches_lonely_halls(
        (k, n, mask) in (2usize..=3).prop_flat_map(|k| {
            let max_n: usize = if k == 2 { 5 } else { 4 };
            (Just(k), 0..=max_n).prop_flat_map(|(k, n)| (Just(k), Just(n), 0u64..(1u64 << ((k - 1) * n))))
        })
    ) {
        let pairs: Vec<(usize, usize)> = (0..(k - 1) * n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (2 + b / n, 1 + b % n))
            .collect();
        let s = HallSet::from_pairs(k, n, pairs).unwrap();
        let p = profile_of(&s, k, n);
        prop_assert_eq!(p.n(), n);
        let direct = lonely_hall_count(k, n, &s, OracleLimits::LONELY_HALL).unwrap();
        prop_assert_eq!(ColumnCounts::new(k - 1).big_g(p.counts(), &mut NoOps), BigInt::from(direct));
    }

    #[test]
    fn thread_count_does_not_change_values(k in 1usize..=4, n in 0usize..=9, threads in 1usize..=4) {
        let one = reduced_count(k, n, &EvalOptions::single_threaded()).unwrap();
        let many = reduced_count(k, n, &EvalOptions { threads, ..EvalOptions::default() }).unwrap();
        prop_assert_eq!(&one.value, &many.value);
        prop_assert_eq!(one.stats, many.stats);
    }

    #[test]
    fn expression_evaluates_to_formula(k in 2usize..=4, n in 0usize..=7) {
        let e = generate_expression(k, 8).unwrap();
        let cap = BigUint::from(latin_rect::DEFAULT_MAX_TERMS);
        prop_assert_eq!(evaluate_expression(&e, n, &cap).unwrap(), reduced_count(k, n, &EvalOptions::default()).unwrap().value);
    }

    #[test]
    fn total_is_factorial_times_reduced(k in 1usize..=3, n in 0usize..=5) {
        let o = EvalOptions::default();
        let total = total_count(k, n, &o).unwrap().value;
        prop_assert_eq!(&total, &(reduced_count(k, n, &o).unwrap().value * FactorialTable::new(n).get(n)));
        prop_assert_eq!(total, brute_force_count(k, n, Variant::Total, OracleLimits::LATIN).unwrap());
    }

    #[test]
    fn reducing_a_permuted_rectangle(
        (n, k, perm) in (2usize..=6).prop_flat_map(|n| {
            (Just(n), 1..=n, Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        }),
        shift in any::<usize>(),
    ) {
        // rows of a relabelled cyclic square are Latin
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|r| (0..n).map(|c| perm[(c + r + shift) % n]).collect())
            .collect();
        let rect = Rectangle::new(rows).unwrap();
        prop_assert!(rect.is_latin());
        let reduced = rect.reduce().unwrap();
        prop_assert!(reduced.is_reduced() && reduced.is_latin());
        prop_assert_eq!(reduced.reduce().unwrap(), reduced);
    }
}
