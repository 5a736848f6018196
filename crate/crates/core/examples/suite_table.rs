//! Runs one suite and prints a line per report.
//!
//! `cargo run --release -p qtfa-core --example suite_table -- all 32 8 7`

use std::time::Instant;

use qtfa_core::{run_suite, GridSpec, Suite, Summary};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let suite: Suite = args.first().map_or("all", String::as_str).parse().expect("suite name");
    let n = args.get(1).map_or(32, |s| s.parse().expect("N"));
    let l = args.get(2).map_or(8.0, |s| s.parse().expect("L"));
    let seed = args.get(3).map_or(7, |s| s.parse().expect("seed"));
    let grid = GridSpec::new(1, n, l).expect("grid");
    let start = Instant::now();
    let reports = run_suite(suite, &grid, seed).expect("suite");
    for r in &reports {
        let tag: Vec<String> = ["a", "b", "index", "p", "q", "tau", "lambda", "epsilon", "hx"]
            .iter()
            .filter_map(|k| r.parameters.get(*k).map(|v| format!("{k}={v}")))
            .collect();
        println!(
            "{} {:<32} lhs={:<12.6e} rhs={:<12.6e} margin={:<+12.4e} {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.lhs,
            r.rhs,
            r.margin,
            tag.join(" ")
        );
    }
    let s = Summary::of(&reports);
    println!("{} checks, {} passed, {} failed, {:.1?}", s.total, s.passed, s.failed, start.elapsed());
}
