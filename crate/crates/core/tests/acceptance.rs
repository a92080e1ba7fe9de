//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use ces_core::verify::{run_all, VerifyOptions};

fn main() {
    let rows = run_all(&VerifyOptions::default());
    for row in &rows {
        println!("{}", row.line());
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", rows.len() - failed, rows.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
