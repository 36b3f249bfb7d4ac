// Build the representation of a fair coin and verify it exactly.

use std::error::Error;
use std::path::Path;

use hms::hmsrep::{self, VerifyOptions};
use hms::measure::OutcomeSet;
use hms::rational;

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/coin.json");
    let ms = hms::document::load_system(&path)?;
    let rep = hms::build(&ms);
    for cell in rep.map(0, 0).cells() {
        println!("[{}, {}) -> {:?}", rational::format(&cell.start), rational::format(&cell.end), cell.target);
    }
    let heads = rep.delta_lambda("fair", "toss", &OutcomeSet::labels(["h"]))?;
    let pairs: Vec<String> = heads
        .to_pairs()
        .iter()
        .map(|(a, b)| format!("[{}, {})", rational::format(a), rational::format(b)))
        .collect();
    println!("contexts giving heads: {}, length {}", pairs.join(" ∪ "), rational::format(&heads.lebesgue()));

    let report = hmsrep::verify(&rep, &ms, VerifyOptions::default());
    println!("{} checks, all exact: {}", report.checks.len(), report.all_exact());
    assert!(report.all_exact());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
