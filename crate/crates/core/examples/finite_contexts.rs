// Smallest context measure on `n` points dominating several classes. The
// cumulative breakpoints need four points here; the exact search finds three.

use std::error::Error;

use hms::measure::MeasureClass;
use hms::order::{self, ClassSet, FiniteLambdaSearch};
use hms::rational::ratio;

pub fn run() -> Result<(), Box<dyn Error>> {
    let classes: ClassSet = [
        MeasureClass::Finite(vec![ratio(1, 2), ratio(1, 2)]),
        MeasureClass::Finite(vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)]),
        MeasureClass::Finite(vec![ratio(2, 3), ratio(1, 3)]),
    ]
    .into_iter()
    .collect();
    for n in 1..=4 {
        match order::exists_mu_for_finite_lambda(&classes, n)? {
            FiniteLambdaSearch::Found { mu, stage } => {
                println!("n = {n}: {} via {stage:?}", hms::classify(&mu));
            }
            other => println!("n = {n}: {other:?}"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
