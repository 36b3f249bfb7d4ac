// Measure-space classes and the embedding order between them.

use std::error::Error;

use hms::measure::{ContinuousPart, MeasureClass, PiecewiseLinearCdf, ProbabilityMeasure};
use hms::order::{self, SearchBudget};
use hms::rational::ratio;

pub fn run() -> Result<(), Box<dyn Error>> {
    let three = ProbabilityMeasure::atomic([("a", ratio(1, 5)), ("b", ratio(1, 2)), ("c", ratio(3, 10))])?;
    let mixed = ProbabilityMeasure::new(
        [("u", ratio(1, 4)), ("v", ratio(1, 4))],
        Some(ContinuousPart {
            weight: ratio(1, 2),
            cdf: PiecewiseLinearCdf::uniform(),
        }),
    )?;
    println!("{}", hms::classify(&three));
    println!("{}", hms::classify(&mixed));

    let half = MeasureClass::Finite(vec![ratio(1, 2), ratio(1, 2)]);
    let quarters = MeasureClass::Finite(vec![ratio(1, 4); 4]);
    let budget = SearchBudget::default();
    for (a, b) in [(&half, &quarters), (&quarters, &half), (&half, &MeasureClass::Continuum)] {
        let witness = order::leq(a, b, budget)?;
        println!("{a} <= {b}: {}", serde_json::to_string(&witness)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
