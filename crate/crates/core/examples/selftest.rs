//! The seeded invariant sweep, as a library call.

use thetakit::selftest::{run_selftest, SelftestConfig};

fn main() {
    let cfg = SelftestConfig { count: 100, seed: 1, ..SelftestConfig::default() };
    for r in run_selftest(&cfg) {
        println!("{} {:<45} {} cases", if r.passed() { "PASS" } else { "FAIL" }, r.name, r.cases);
    }
}
