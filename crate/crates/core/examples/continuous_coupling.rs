// Coupling uniform contexts to a measure with a continuous part: the target
// CDF x² on 64 pieces, and a half-atom, half-uniform dial.

use std::error::Error;

use hms::interval::IntervalSet;
use hms::measure::{OutcomeSet, PiecewiseLinearCdf, ProbabilityMeasure};
use hms::rational::{self, int, ratio};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cdf = PiecewiseLinearCdf::new((0..=64).map(|k| (ratio(k, 64), ratio(k * k, 4096))).collect())?;
    let map = hms::couple(&ProbabilityMeasure::continuous(cdf));
    for k in [8, 32, 48, 64] {
        let below = OutcomeSet::range(IntervalSet::interval(int(0), ratio(k, 64))?);
        println!("F({k}/64) = {}", rational::format(&map.preimage(&below).lebesgue()));
    }

    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/dial.json");
    let ms = hms::document::load_system(&path)?;
    let rep = hms::build(&ms);
    let dial = &ms.measurements()[0];
    let scale = dial.continuous.as_ref().expect("dial has a continuous outcome");
    for lambda in [ratio(1, 4), ratio(5, 8), ratio(7, 8)] {
        match rep.phi("sticky", "dial", &lambda)? {
            hms::hmsrep::Outcome::Continuous(u) => println!(
                "λ = {}: {} = {}",
                rational::format(&lambda),
                scale.name,
                rational::format(&scale.value_at(&u))
            ),
            other => println!("λ = {}: {other:?}", rational::format(&lambda)),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
