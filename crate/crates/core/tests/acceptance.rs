//! Acceptance suite: one test per headline criterion, each printing a
//! pass/fail line. Run with `cargo test -p taquin-core --test acceptance
//! -- --nocapture` to see the lines.

use taquin_core::selftest::{self, CheckOutcome};

const SEED: u64 = 0x7ab1eau64;

fn report(outcome: CheckOutcome) {
    println!(
        "criterion {:>2} ({}): {} — {}",
        outcome.id,
        outcome.name,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.detail
    );
    assert!(outcome.passed, "criterion {} failed", outcome.id);
}

#[test]
fn criterion_01_pair_identity() {
    report(selftest::check_pair_identity());
}

#[test]
fn criterion_02_row_count_formulas() {
    report(selftest::check_row_count_formulas());
}

#[test]
fn criterion_03_character_reduction() {
    report(selftest::check_character_reduction());
}

#[test]
fn criterion_04_three_cycle_formula() {
    report(selftest::check_three_cycle());
}

#[test]
fn criterion_05_four_cycle_formula() {
    report(selftest::check_four_cycle());
}

#[test]
fn criterion_06_square_class_column() {
    report(selftest::check_square_class_column());
}

#[test]
fn criterion_07_slide_round_trip() {
    report(selftest::check_slide_round_trip(SEED));
}

#[test]
fn criterion_08_separation_lemma() {
    report(selftest::check_separation(SEED));
}

#[test]
fn criterion_09_symbolic_layer() {
    report(selftest::check_symbolic_layer());
}

#[test]
fn criterion_10_per_tableau_refinement() {
    report(selftest::check_per_tableau_refinement());
}
