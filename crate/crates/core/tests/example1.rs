use std::time::Instant;

use num_bigint::BigUint;
use relpress_core::experiments::example1::{
    example1_code, example1_point, example1_table, expected_count, n_k, validate_reconstruction, LIMIT,
};
use relpress_core::pressure::{count_preimage_blocks_exact, dn_count};
use relpress_core::symbolic::DEFAULT_ENUMERATION_CAP;

#[test]
fn reconstruction_matches_enumeration() {
    let report = validate_reconstruction(&example1_code(), 11).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.checks.len(), 12);
}

#[test]
fn counts_for_small_k() {
    let start = Instant::now();
    let table = example1_table(6, 6).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    for row in &table.rows {
        assert_eq!(row.count.as_ref(), Some(&expected_count(row.k)), "k = {}", row.k);
        assert_eq!(row.dn, BigUint::from(1u8));
    }
    assert!(table.dn_all_one);
    assert_eq!(table.dn_check_len, 200);
}

#[test]
fn counts_agree_with_enumeration() {
    // Independent oracle: materialize every preimage block for small k.
    let code = example1_code();
    let y = example1_point(3);
    for k in 1..=3 {
        let v = y.window(0, n_k(k) as i64 - 1);
        let blocks = code.preimage_blocks(v.symbols(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(BigUint::from(blocks.len()), expected_count(k));
        assert_eq!(count_preimage_blocks_exact(&code, v.symbols()).unwrap(), expected_count(k));
    }
}

#[test]
fn fiber_windows_are_unique() {
    let code = example1_code();
    let y = example1_point(5);
    for n in [1, 2, 3, 17, 50, 60] {
        assert_eq!(dn_count(&code, &y, n).unwrap(), BigUint::from(1u8));
    }
}

#[test]
fn divergence_at_k20() {
    let start = Instant::now();
    let table = example1_table(20, 6).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let last = table.rows.last().unwrap();
    assert_eq!(last.n, 2_097_190);
    assert!(last.distance_to_limit() < 1e-3, "{}", last.phi_estimate);
    assert!((last.phi_estimate - last.closed_form()).abs() < 1e-9);
    assert_eq!(table.theta_max_abs, 0.0);
    assert!((LIMIT - 0.173_286_795_139_986_3).abs() < 1e-15);
    assert!(secs < 10.0, "took {secs} s");
}
