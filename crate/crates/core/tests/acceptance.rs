//! Acceptance criteria: one line per criterion followed by its checks, with measured
//! values, expectations and the tolerances pinned in `finlap::verify`.

use std::process::ExitCode;

use finlap::verify::{format_report, run_criterion, CRITERIA};

fn main() -> ExitCode {
    let filter: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let reports: Vec<_> = CRITERIA.iter().filter(|id| filter.is_none_or(|f| f == **id)).map(|&id| run_criterion(id)).collect();
    print!("{}", format_report(&reports));
    println!();
    for r in &reports {
        println!("criterion {:>2}: {}", r.id, if r.passed() { "pass" } else { "FAIL" });
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", reports.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
