//! Running the randomized checker suites from the library.
//!
//! ```bash
//! cargo run --release --example fuzz_suite
//! ```

use apxhom::fuzz::{run_suite, violation_count, Checker, FuzzConfig};

fn main() {
    for checker in [
        Checker::GraphGrowth,
        Checker::Bukh,
        Checker::Ruzsa,
        Checker::Petridis,
        Checker::KernelQuotient,
        Checker::Bsg,
    ] {
        // trimmed trial counts so the demo stays quick; the acceptance
        // suite runs the full sizes
        let cfg = FuzzConfig {
            trials: 200,
            seed: 0,
            ..FuzzConfig::for_checker(checker)
        };
        let records = run_suite(&cfg);
        let violations = violation_count(&records);
        println!(
            "{:<16} {:>5} trials, seed {}: {} violations",
            checker.as_str(),
            cfg.trials,
            cfg.seed,
            violations
        );
        for r in records.iter().filter(|r| !r.ok) {
            println!("  VIOLATION at trial {}: {}", r.index, r.detail);
        }
    }
}
