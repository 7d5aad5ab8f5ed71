// Running a verification suite from code.

use rmtm::verify::{run_suite, Suite};

fn run_example() {
    let checks = run_suite(Suite::Duality, 1, 0);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    for c in checks.iter().take(5) {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    println!("{} checks, {} failed", checks.len(), failed.len());
}

fn main() {
    run_example();
}
