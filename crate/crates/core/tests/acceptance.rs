//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use rsdist_core::budget::Budget;
use rsdist_core::interval::DEFAULT_PRECISION;
use rsdist_core::verify::{self, CriterionReport, Scope};

fn budget() -> Budget {
    Budget::from_env().expect("budget from environment")
}

fn show(report: &CriterionReport) {
    println!("{}", report.line());
    if !report.passed() {
        println!("  details: {}", report.details);
    }
}

#[test]
fn acceptance() {
    let reports = verify::run_all(Scope::Full, DEFAULT_PRECISION, &budget()).unwrap();
    for r in &reports {
        show(r);
    }
    let red: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.criterion).collect();
    assert!(red.is_empty(), "criteria not certified: {red:?}");
}
