use relpress_core::experiments::{lemma_harness, HarnessKind};

fn run(kind: HarnessKind, trials: u64, min_checks: usize) {
    let report = lemma_harness(kind, trials, 2024).unwrap();
    assert!(report.checks >= min_checks, "{kind}: only {} checks", report.checks);
    assert!(
        report.passed(),
        "{kind}: {} violations, first: {:?}",
        report.violations,
        report.counterexamples.first()
    );
}

#[test]
fn periodic_values_agree() {
    run(HarnessKind::Lemma2, 100, 300);
}

#[test]
fn gamma_supermultiplicative() {
    run(HarnessKind::Lemma4, 100, 500);
}

#[test]
fn shift_bound_and_fiber_monotonicity() {
    run(HarnessKind::Monotonicity, 100, 1000);
}

#[test]
fn fiber_sums_dominated() {
    run(HarnessKind::Domination, 100, 1000);
}

#[test]
fn cycle_sums_subadditive() {
    run(HarnessKind::Subadditivity, 100, 1000);
}

#[test]
fn pair_mode_gap_bounded() {
    run(HarnessKind::ModeGap, 100, 1000);
}

#[test]
fn recoding_preserves_periodic_values() {
    run(HarnessKind::Recoding, 50, 100);
}

#[test]
fn transfer_sums_match_enumeration() {
    run(HarnessKind::Oracle, 100, 1000);
}

#[test]
fn reports_are_deterministic() {
    let a = lemma_harness(HarnessKind::Oracle, 10, 5).unwrap();
    let b = lemma_harness(HarnessKind::Oracle, 10, 5).unwrap();
    assert_eq!(a, b);
}
