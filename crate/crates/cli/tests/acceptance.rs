//! One pass/fail line per acceptance criterion.
//!
//! The class-8 computation for two right 4-Engel elements runs only when
//! `NQ_INCLUDE_LONG=1`; set `NQ_ACCEPTANCE_DIR` to keep its checkpoints.

use nq_cli::harness::{right3_pair_checks, verify_paper, HarnessOptions, Status, RIGHT3_PAIR};
use nq_core::nq::{nilpotent_quotient, NqConfig};
use nq_core::parse::parse_input;

#[test]
fn acceptance() {
    let opts = HarnessOptions {
        include_long: std::env::var("NQ_INCLUDE_LONG").is_ok_and(|v| v == "1"),
        output: std::env::var_os("NQ_ACCEPTANCE_DIR").map(Into::into),
    };
    let rows = verify_paper(&opts, |row| {
        println!("criterion {} {}: {}", row.id, row.status(), row.title);
        if row.status() == Status::Fail {
            eprint!("{}", row.render());
        }
    });
    let failed: Vec<usize> = rows
        .iter()
        .filter(|r| r.status() == Status::Fail)
        .map(|r| r.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}

#[test]
fn tampered_presentation_fails_a_check() {
    let input = parse_input(RIGHT3_PAIR).unwrap();
    let mut r = nilpotent_quotient(&input, &NqConfig::default()).unwrap();
    assert!(right3_pair_checks(&r)
        .iter()
        .all(|c| c.status == Status::Pass));

    let p = &r.presentation;
    let last = p.len() - 1;
    assert_eq!(p.rel_order(last), 2);
    let mut b = p.builder();
    b.set_power(last, 4, Vec::new());
    r.presentation = b.build().unwrap();
    let failed: Vec<String> = right3_pair_checks(&r)
        .into_iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.name)
        .collect();
    assert!(
        failed.contains(&"exponent gamma_6".to_string()),
        "{:?}",
        failed
    );
}
