//! Property-based invariants over randomized small instances.

use proptest::collection::vec;
use proptest::prelude::*;

use uniformity_core::arrays::hamming_distance;
use uniformity_core::constructions::kron_extend;
use uniformity_core::matrix::{kron_sum, SymbolMatrix};
use uniformity_core::schemes::{ghm_from_prime, DifferenceScheme};
use uniformity_core::MixedArray;

fn symbol_rows(levels: Vec<u32>, rows: usize) -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    let n = levels.len();
    let cells: Vec<BoxedStrategy<u32>> = (0..rows)
        .flat_map(|_| levels.iter().map(|&l| (0..l).boxed()).collect::<Vec<_>>())
        .collect();
    (Just(levels), cells).prop_map(move |(levels, data)| {
        debug_assert_eq!(data.len(), rows * n);
        (levels, data)
    })
}

fn arbitrary_array() -> impl Strategy<Value = MixedArray> {
    (2usize..=8, 2usize..=12)
        .prop_flat_map(|(n, r)| {
            vec(2u32..=5, n).prop_flat_map(move |levels| symbol_rows(levels, r))
        })
        .prop_map(|(levels, data)| MixedArray::new(&levels, data, 1).unwrap())
}

proptest! {
    // Hamming distance is a metric on rows.
    #[test]
    fn hamming_is_a_metric(
        a in vec(0u32..5, 3..10),
        bc in vec((0u32..5, 0u32..5), 3..10),
    ) {
        let len = a.len().min(bc.len());
        let a = &a[..len];
        let b: Vec<u32> = bc[..len].iter().map(|p| p.0).collect();
        let c: Vec<u32> = bc[..len].iter().map(|p| p.1).collect();
        let dab = hamming_distance(a, &b).unwrap();
        let dba = hamming_distance(&b, a).unwrap();
        prop_assert_eq!(dab, dba);
        prop_assert_eq!(hamming_distance(a, a).unwrap(), 0);
        let dac = hamming_distance(a, &c).unwrap();
        let dbc = hamming_distance(&b, &c).unwrap();
        prop_assert!(dac <= dab + dbc);
    }

    // The distance criterion agrees with the definition-based check on
    // arbitrary arrays, for every k where both are defined.
    #[test]
    fn distance_criterion_matches_direct_irredundancy(m in arbitrary_array()) {
        let md = m.min_hamming_distance().unwrap();
        for k in 1..m.column_count().min(4) as u32 {
            let direct = m.is_irredundant_direct(k).unwrap();
            prop_assert_eq!(md >= k as usize + 1, direct, "k = {}", k);
        }
    }

    // Deleting c columns lowers the minimum distance by at most c and
    // keeps simplicity whenever md > c.
    #[test]
    fn deletion_bounds_distance(m in arbitrary_array(), cols in vec(0usize..8, 1..3)) {
        let n = m.column_count();
        let mut cols: Vec<usize> = cols.into_iter().map(|c| c % n).collect();
        cols.sort_unstable();
        cols.dedup();
        prop_assume!(cols.len() < n);
        let before = m.min_hamming_distance().unwrap();
        let after = m.delete_columns(&cols).unwrap().min_hamming_distance().unwrap();
        prop_assert!(after + cols.len() >= before);
        prop_assert!(after <= before);
    }

    // Splitting a column preserves the row count and never lowers the
    // minimum distance.
    #[test]
    fn split_preserves_rows_and_distance(m in arbitrary_array(), col in 0usize..8) {
        let col = col % m.column_count();
        let level = m.level(col);
        prop_assume!(level == 4); // only composite level in the 2..=5 range
        let split = m.split_column(col, 2, 2).unwrap();
        prop_assert_eq!(split.row_count(), m.row_count());
        prop_assert_eq!(split.column_count(), m.column_count() + 1);
        prop_assert!(
            split.min_hamming_distance().unwrap() >= m.min_hamming_distance().unwrap()
        );
    }

    // Kronecker sum is associative under the fixed block order.
    #[test]
    fn kron_sum_is_associative(
        a in vec(0u32..3, 1..5),
        b in vec(0u32..3, 1..5),
        c in vec(0u32..3, 1..5),
    ) {
        let mk = |data: &[u32]| SymbolMatrix::new(data.len(), 1, data.to_vec()).unwrap();
        let (a, b, c) = (mk(&a), mk(&b), mk(&c));
        let left = kron_sum(&kron_sum(&a, &b, 3), &c, 3);
        let right = kron_sum(&a, &kron_sum(&b, &c, 3), 3);
        prop_assert_eq!(left, right);
    }
}

#[test]
fn verification_passes_inherit_downward() {
    // strength k implies strength k' for all k' < k
    let a = uniformity_core::constructions::even_weight_oa(5).unwrap();
    for k in 1..=4 {
        assert!(a.verify_strength(k).unwrap().passed(), "k = {k}");
    }
}

#[test]
fn rectangular_scheme_extension_reports_distance_without_formula() {
    // stack the prime table on itself: a 6x3 strength-2 scheme over Z_3
    let g3 = ghm_from_prime(3).unwrap();
    let mut data = g3.matrix().data().to_vec();
    data.extend_from_slice(g3.matrix().data());
    let mut tall = DifferenceScheme::new(
        3,
        SymbolMatrix::new(6, 3, data).unwrap(),
        2,
    )
    .unwrap();
    tall.confirm().unwrap();
    assert!(!tall.is_square());

    let base = MixedArray::trivial(3).unwrap();
    let out = kron_extend(&base, &tall).unwrap();
    assert_eq!(out.predicted_md, None);
    assert_eq!(out.array.row_count(), 18);
    assert_eq!(out.array.signature().to_string(), "6^1 3^3");
    assert!(out.array.verify_strength(2).unwrap().passed());
    assert!(out.measured_md >= 1);
}
