// Extend a representation of the z measurement to other bases by conjugating
// with the unitary that carries one eigenbasis to the other.

use std::error::Error;
use std::f64::consts::PI;

use hms::measure::OutcomeSet;
use hms::quantum::{self, ComplexVector, ReferenceRepresentation};
use hms::rational;

pub fn run() -> Result<(), Box<dyn Error>> {
    let reference = ReferenceRepresentation::new(quantum::spin_basis("z", 0.0, 0.0));
    let states = vec![
        ("zero".to_string(), ComplexVector::from_real(&[1.0, 0.0])?),
        ("tilted".to_string(), quantum::bloch_state(1.0, 0.5)),
    ];
    for basis in [quantum::spin_basis("x", PI / 2.0, 0.0), quantum::spin_basis("n", PI / 3.0, 0.0)] {
        let maps = quantum::unitary_extend(&reference, &basis, &states)?;
        for ((name, psi), (_, map)) in states.iter().zip(&maps) {
            let born = quantum::born_probabilities(psi, &basis)?;
            let up = map.preimage(&OutcomeSet::labels(["up"])).lebesgue();
            println!(
                "{name:>7} in {}: |up| = {:<24} Born {:.12}",
                basis.name,
                rational::format(&up),
                born[0]
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
