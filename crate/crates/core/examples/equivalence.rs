// Two systems that differ only in names are mathematically equivalent.

use std::error::Error;

use hms::msys::{self, EquivOptions, RawSystem};

const LAB: &str = r#"{
  "states": ["warm", "cold"],
  "measurements": [
    { "name": "colour", "outcomes": [{ "name": "red" }, { "name": "blue" }] },
    { "name": "size", "outcomes": [{ "name": "big" }, { "name": "small" }, { "name": "tiny" }] }
  ],
  "table": [
    { "state": "warm", "measurement": "colour", "measure": { "atoms": { "red": "3/4", "blue": "1/4" } } },
    { "state": "warm", "measurement": "size", "measure": { "atoms": { "big": "1/2", "small": "1/3", "tiny": "1/6" } } },
    { "state": "cold", "measurement": "colour", "measure": { "atoms": { "red": "1/4", "blue": "3/4" } } },
    { "state": "cold", "measurement": "size", "measure": { "atoms": { "big": "1/6", "small": "1/3", "tiny": "1/2" } } }
  ]
}"#;

pub fn run() -> Result<(), Box<dyn Error>> {
    let a = msys::validate(serde_json::from_str::<RawSystem>(LAB)?)?;
    let renamed = LAB
        .replace("warm", "p")
        .replace("cold", "q")
        .replace("colour", "A")
        .replace("size", "B")
        .replace("red", "x")
        .replace("blue", "y");
    let b = msys::validate(serde_json::from_str::<RawSystem>(&renamed)?)?;
    match msys::math_equiv(&a, &b, EquivOptions::default())? {
        Some(w) => println!("{}", serde_json::to_string_pretty(&w.named(&a, &b))?),
        None => println!("not equivalent"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
