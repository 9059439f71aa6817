//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed.

use fbms::verify::run_criterion;

fn main() {
    let scratch = tempfile::tempdir().unwrap();
    let mut failed = Vec::new();
    for id in 1..=14 {
        let c = run_criterion(id, scratch.path());
        println!("{}", c.line());
        for d in c.details() {
            println!("{d}");
        }
        if !c.passed() {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
