//! Seeded sampling of the hidden context.
//!
//! Draw `i` of a run uses `λ_i = (h(seed, i) >> 11) · 2⁻⁵³`, where `h` is the
//! SplitMix64 finalizer applied to `seed + (i + 1)·γ` with γ the 64-bit golden
//! ratio constant. Because every draw is addressed by its index, shard `s` of
//! `k` simply takes the indices `i ≡ s (mod k)` and the merged tally does not
//! depend on `k`.
//!
//! `λ_i` is a multiple of `2⁻⁵³`, so the cell containing it is found exactly
//! by comparing the integer `λ_i·2⁵³` with the precomputed thresholds
//! `⌈end·2⁵³⌉` of the cells.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::hmsrep::{CellTarget, HiddenRepresentation, OutcomeMap, RepError};
use crate::rational::{self, Rational};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Row label used for draws landing on the continuous part of a measure.
pub const CONTINUOUS_ROW: &str = "<continuous>";

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Integer position `λ·2⁵³` of draw `index`.
pub fn draw_bits(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA))) >> 11
}

/// Context value of draw `index`, uniform on `[0, 1)`.
pub fn draw(seed: u64, index: u64) -> f64 {
    draw_bits(seed, index) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub outcome: String,
    #[serde(with = "rational::serde_text")]
    pub expected: Rational,
    pub count: u64,
    pub frequency: f64,
    /// `None` when the expected probability is 0 or 1.
    pub z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub state: String,
    pub measurement: String,
    pub n: u64,
    pub seed: u64,
    pub shards: usize,
    pub rows: Vec<SampleRow>,
}

impl SampleReport {
    pub fn row(&self, outcome: &str) -> Option<&SampleRow> {
        self.rows.iter().find(|r| r.outcome == outcome)
    }

    /// Adds rows with expected probability 0 for labels no cell produces.
    pub fn include_outcomes<'a>(&mut self, labels: impl IntoIterator<Item = &'a str>) {
        for l in labels {
            if self.row(l).is_none() {
                self.rows.push(SampleRow {
                    outcome: l.to_string(),
                    expected: Rational::zero(),
                    count: 0,
                    frequency: 0.0,
                    z: None,
                });
            }
        }
    }

    /// Largest `|z|` over the rows where it is defined.
    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.z).fold(0.0, |a, z| a.max(z.abs()))
    }
}

/// Rows of a map in first-appearance order, and the row of every cell.
fn rows_of(map: &OutcomeMap) -> (Vec<(String, Rational)>, Vec<usize>) {
    let mut rows: Vec<(String, Rational)> = Vec::new();
    let mut cell_row = Vec::with_capacity(map.cells().len());
    for c in map.cells() {
        let label = match &c.target {
            CellTarget::Outcome(l) => l.as_str(),
            CellTarget::Affine { .. } => CONTINUOUS_ROW,
        };
        let len = &c.end - &c.start;
        match rows.iter().position(|(l, _)| l == label) {
            Some(i) => {
                rows[i].1 += len;
                cell_row.push(i);
            }
            None => {
                rows.push((label.to_string(), len));
                cell_row.push(rows.len() - 1);
            }
        }
    }
    (rows, cell_row)
}

fn threshold(end: &Rational) -> u64 {
    let scaled = end * Rational::from_integer(BigInt::from(1u64 << 53));
    scaled.ceil().to_integer().to_u64().expect("cell end within [0, 1]")
}

fn tally(thresholds: &[u64], cell_row: &[usize], rows: usize, seed: u64, n: u64, shard: u64, shards: u64) -> Vec<u64> {
    let mut counts = vec![0u64; rows];
    let mut i = shard;
    while i < n {
        let k = draw_bits(seed, i);
        let cell = thresholds.partition_point(|&t| t <= k);
        counts[cell_row[cell]] += 1;
        i += shards;
    }
    counts
}

/// Samples `n` contexts and tallies the outcome of state `p` under `e`.
pub fn sample(
    rep: &HiddenRepresentation,
    state: &str,
    measurement: &str,
    n: u64,
    seed: u64,
    shards: usize,
) -> Result<SampleReport, RepError> {
    let (p, e) = rep.index(state, measurement)?;
    let map = rep.map(p, e);
    let (rows, cell_row) = rows_of(map);
    let thresholds: Vec<u64> = map.cells().iter().map(|c| threshold(&c.end)).collect();
    let shards = shards.max(1);
    let counts = if shards == 1 {
        tally(&thresholds, &cell_row, rows.len(), seed, n, 0, 1)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..shards as u64)
                .map(|s| {
                    let (t, c, r) = (&thresholds, &cell_row, rows.len());
                    scope.spawn(move || tally(t, c, r, seed, n, s, shards as u64))
                })
                .collect();
            let mut total = vec![0u64; rows.len()];
            for h in handles {
                for (a, b) in total.iter_mut().zip(h.join().expect("sampling shard panicked")) {
                    *a += b;
                }
            }
            total
        })
    };
    let nf = n as f64;
    let rows = rows
        .into_iter()
        .zip(counts)
        .map(|((outcome, expected), count)| {
            let frequency = if n == 0 { 0.0 } else { count as f64 / nf };
            let exp = rational::to_f64(&expected);
            let z = if exp <= 0.0 || exp >= 1.0 || n == 0 {
                None
            } else {
                Some((frequency - exp) / (exp * (1.0 - exp) / nf).sqrt())
            };
            SampleRow {
                outcome,
                expected,
                count,
                frequency,
                z,
            }
        })
        .collect();
    Ok(SampleReport {
        state: state.to_string(),
        measurement: measurement.to_string(),
        n,
        seed,
        shards,
        rows,
    })
}

/// Seed used for pair `index` of a sweep.
pub fn subseed(seed: u64, index: usize) -> u64 {
    mix(seed ^ mix((index as u64).wrapping_add(1).wrapping_mul(GAMMA)))
}

/// [`sample`] over several (state, measurement) pairs with derived seeds.
pub fn sweep(
    rep: &HiddenRepresentation,
    pairs: &[(String, String)],
    n: u64,
    seed: u64,
) -> Result<Vec<SampleReport>, RepError> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, (p, e))| sample(rep, p, e, n, subseed(seed, i), 1))
        .collect()
}

#[derive(Serialize)]
struct CsvRow<'a> {
    state: &'a str,
    measurement: &'a str,
    outcome: &'a str,
    expected: String,
    count: u64,
    frequency: f64,
    z: Option<f64>,
}

/// Writes reports as CSV with columns
/// `state,measurement,outcome,expected,count,frequency,z`.
pub fn write_csv<W: Write>(reports: &[SampleReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        for row in &r.rows {
            w.serialize(CsvRow {
                state: &r.state,
                measurement: &r.measurement,
                outcome: &row.outcome,
                expected: rational::format(&row.expected),
                count: row.count,
                frequency: row.frequency,
                z: row.z,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmsrep::build;
    use crate::measure::ProbabilityMeasure;
    use crate::msys::{Measurement, MeasurementSystem, OutcomeLabel};
    use crate::rational::{int, ratio};

    fn system(rows: Vec<Vec<(&str, Rational)>>) -> MeasurementSystem {
        let labels: Vec<&str> = rows[0].iter().map(|(l, _)| *l).collect();
        let m = Measurement {
            name: "e".into(),
            outcomes: labels
                .iter()
                .enumerate()
                .map(|(i, l)| OutcomeLabel {
                    name: l.to_string(),
                    value: int(i as i64),
                })
                .collect(),
            continuous: None,
        };
        let states = (0..rows.len()).map(|i| format!("p{i}")).collect();
        let table = rows
            .into_iter()
            .map(|r| vec![ProbabilityMeasure::atomic(r).unwrap()])
            .collect();
        MeasurementSystem::from_parts(states, vec![m], table).unwrap()
    }

    #[test]
    fn draws_are_uniform_and_reproducible() {
        assert_eq!(draw(42, 7), draw(42, 7));
        let mean = (0..10_000).map(|i| draw(1, i)).sum::<f64>() / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02);
        assert!((0..1000).all(|i| (0.0..1.0).contains(&draw(9, i))));
    }

    #[test]
    fn thresholds_are_exact() {
        assert_eq!(threshold(&ratio(1, 2)), 1 << 52);
        assert_eq!(threshold(&int(1)), 1 << 53);
        assert_eq!(threshold(&ratio(1, 3)), (1u64 << 53).div_ceil(3));
    }

    #[test]
    fn deterministic_outcome_takes_every_draw() {
        let ms = system(vec![vec![("a", int(1)), ("b", int(0))]]);
        let rep = build(&ms);
        let mut r = sample(&rep, "p0", "e", 1000, 3, 1).unwrap();
        r.include_outcomes(["a", "b"]);
        assert_eq!(r.row("a").unwrap().count, 1000);
        assert_eq!(r.row("a").unwrap().z, None);
        assert_eq!(r.row("b").unwrap().count, 0);
    }

    #[test]
    fn coin_within_four_sigma_and_shard_invariant() {
        let ms = system(vec![vec![("h", ratio(1, 2)), ("t", ratio(1, 2))]]);
        let rep = build(&ms);
        let one = sample(&rep, "p0", "e", 100_000, 42, 1).unwrap();
        let h = one.row("h").unwrap();
        assert!((h.frequency - 0.5).abs() <= 4.0 * (0.25f64 / 1e5).sqrt());
        assert_eq!(one.rows.iter().map(|r| r.count).sum::<u64>(), 100_000);
        for shards in [2, 8] {
            let other = sample(&rep, "p0", "e", 100_000, 42, shards).unwrap();
            assert_eq!(
                one.rows.iter().map(|r| r.count).collect::<Vec<_>>(),
                other.rows.iter().map(|r| r.count).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let ms = system(vec![
            vec![("h", ratio(1, 2)), ("t", ratio(1, 2))],
            vec![("h", ratio(1, 5)), ("t", ratio(4, 5))],
        ]);
        let rep = build(&ms);
        assert!(sweep(&rep, &[], 10, 1).unwrap().is_empty());
        let pairs = vec![("p0".to_string(), "e".to_string()), ("p1".to_string(), "e".to_string())];
        let a = sweep(&rep, &pairs, 5000, 11).unwrap();
        assert_eq!(a, sweep(&rep, &pairs, 5000, 11).unwrap());
        assert!(a.iter().all(|r| r.max_abs_z() <= 4.0));
        assert!(matches!(
            sample(&rep, "nobody", "e", 1, 1, 1),
            Err(RepError::UnknownStateOrMeasurement(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let ms = system(vec![vec![("h", ratio(1, 2)), ("t", ratio(1, 2))]]);
        let rep = build(&ms);
        let r = sample(&rep, "p0", "e", 10, 1, 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("state,measurement,outcome,expected,count,frequency,z\n"));
        assert!(text.contains("p0,e,h,1/2,"));
    }
}
