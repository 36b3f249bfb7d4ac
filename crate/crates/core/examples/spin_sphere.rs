// Spin-½ on the Bloch sphere: Born probabilities and where each map splits
// between `up` and `down`.

use std::error::Error;

use hms::quantum::{self, BornOptions};
use hms::rational::{self, int, ratio};

pub fn run() -> Result<(), Box<dyn Error>> {
    let thetas = [int(0), ratio(1, 3), ratio(1, 2), ratio(2, 3), int(1)];
    let axes = [(ratio(1, 2), int(0))];
    let (ms, rep) = quantum::aerts_sphere(&thetas, &axes, BornOptions::default())?;
    for (p, state) in ms.states().iter().enumerate() {
        for (e, m) in ms.measurements().iter().enumerate() {
            let split = quantum::split_point(rep.map(p, e));
            println!("{state:>12} along {:<12} P(up) = {:>20}", m.name, rational::format(&split));
        }
    }
    assert_eq!(quantum::split_point(rep.map(1, 0)), ratio(3, 4));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
