//! Run every check suite on every catalog instance and print a summary.
//!
//! cargo run --release --example verify_catalog

use plectic_lab::instance::{catalog_names, load_catalog};
use plectic_lab::suite::{run_suite, Options, Status, SuiteName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = Options {
        timing: true,
        ..Options::default()
    };
    let mut ok = true;
    for name in catalog_names() {
        let inst = load_catalog(name)?;
        let start = std::time::Instant::now();
        let report = run_suite(&inst, name, SuiteName::All, &opts);
        println!(
            "{name:<18} {:>3} pass {:>3} fail {:>3} skip  {:?}",
            report.count(Status::Pass),
            report.count(Status::Fail),
            report.count(Status::Skipped),
            start.elapsed()
        );
        for c in report.checks.iter().filter(|c| c.status == Status::Fail) {
            println!("    {} : {}", c.name, c.detail.as_deref().unwrap_or(""));
        }
        ok &= report.passed();
    }
    std::process::exit(if ok { 0 } else { 1 });
}
