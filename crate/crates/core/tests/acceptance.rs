//! One line per acceptance criterion; exits nonzero if any fails.

use kgl_core::selftest::{run, Counts};

const SEED: u64 = 20240601;

fn main() {
    let results = run(SEED, &Counts::default());
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        if !r.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {} failed", results.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
