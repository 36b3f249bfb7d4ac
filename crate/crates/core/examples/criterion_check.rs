// Is a system representable with a given context measure, or on a given
// number of contexts?

use std::error::Error;

use hms::hmsrep::{check_criterion, check_criterion_lambda, Answer, LambdaDescriptor};
use hms::measure::ProbabilityMeasure;
use hms::order::SearchBudget;
use hms::rational::ratio;

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/spin.json");
    let ms = hms::document::load_system(&path)?;

    let quarters = ProbabilityMeasure::atomic((0..4).map(|i| (format!("c{i}"), ratio(1, 4))))?;
    let with_quarters = check_criterion(&ms, &quarters, SearchBudget::default());
    println!("uniform on 4 contexts: {:?}", with_quarters.answer);

    for n in [2, 3, 4] {
        let report = check_criterion_lambda(&ms, LambdaDescriptor::Finite(n));
        println!("{n} contexts: {:?}", report.answer);
        for f in &report.per_measurement {
            println!("  {}: {}", f.measurement, serde_json::to_string(&f.search)?);
        }
    }
    assert_eq!(check_criterion_lambda(&ms, LambdaDescriptor::Continuum).answer, Answer::Yes);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
