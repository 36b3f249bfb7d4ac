// Draw contexts uniformly and compare outcome frequencies with the exact
// probabilities. The tally does not depend on the number of shards.

use std::error::Error;

use hms::quantum::{self, BornOptions};
use hms::rational::{int, ratio};
use hms::sim;

pub fn run() -> Result<(), Box<dyn Error>> {
    let (ms, rep) = quantum::aerts_sphere(&[int(0), ratio(1, 3), ratio(1, 2)], &[], BornOptions::default())?;
    let pairs: Vec<(String, String)> = ms.states().iter().map(|s| (s.clone(), "z".to_string())).collect();
    let reports = sim::sweep(&rep, &pairs, 100_000, 42)?;
    sim::write_csv(&reports, std::io::stdout())?;

    let one = sim::sample(&rep, &pairs[1].0, "z", 100_000, 42, 1)?;
    let eight = sim::sample(&rep, &pairs[1].0, "z", 100_000, 42, 8)?;
    assert_eq!(one.rows, eight.rows);
    assert!(reports.iter().all(|r| r.max_abs_z() <= 4.0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
