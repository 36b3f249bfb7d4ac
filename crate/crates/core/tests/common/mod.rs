//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hms::measure::{ContinuousPart, MeasureClass, OutcomeSet, PiecewiseLinearCdf, ProbabilityMeasure};
use hms::msys::{ContinuousOutcome, Measurement, MeasurementSystem, OutcomeLabel};
use hms::rational::{int, ratio};
use hms::{IntervalSet, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k` non-negative integers summing to `total`, zeros allowed.
pub fn composition(rng: &mut ChaCha8Rng, total: i64, k: usize) -> Vec<i64> {
    let mut cuts: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort();
    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

/// `k` rational weights with a common denominator at most `max_den`, summing to 1.
pub fn weights(rng: &mut ChaCha8Rng, k: usize, max_den: i64) -> Vec<Rational> {
    let den = rng.gen_range(1..=max_den);
    composition(rng, den, k).into_iter().map(|c| ratio(c, den)).collect()
}

/// CDF from (0,0) to (1,1) on a grid, with up to `pieces` pieces and
/// possibly flat stretches.
pub fn random_cdf(rng: &mut ChaCha8Rng, pieces: usize) -> PiecewiseLinearCdf {
    let n = rng.gen_range(1..=pieces) as i64;
    let grid = 4 * n;
    let mut xs: BTreeSet<i64> = (0..n - 1).map(|_| rng.gen_range(1..grid)).collect();
    xs.insert(0);
    xs.insert(grid);
    let mut fs: Vec<i64> = (0..xs.len() - 2).map(|_| rng.gen_range(0..=grid)).collect();
    fs.sort();
    let mut values = vec![0];
    values.extend(fs);
    values.push(grid);
    let points = xs.into_iter().zip(values).map(|(x, f)| (ratio(x, grid), ratio(f, grid))).collect();
    PiecewiseLinearCdf::new(points).expect("monotone points from 0 to 1")
}

pub fn outcome_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("o{i}")).collect()
}

/// Random finite system. With `mixed`, some measurements get a continuous
/// outcome and their measures a continuous part.
pub fn random_system(
    rng: &mut ChaCha8Rng,
    max_states: usize,
    max_measurements: usize,
    max_outcomes: usize,
    max_den: i64,
    mixed: bool,
) -> MeasurementSystem {
    let n_states = rng.gen_range(1..=max_states);
    let n_meas = rng.gen_range(1..=max_measurements);
    let mut measurements = Vec::new();
    for e in 0..n_meas {
        let k = rng.gen_range(1..=max_outcomes);
        let continuous = mixed && rng.gen_bool(0.5);
        measurements.push(Measurement {
            name: format!("e{e}"),
            outcomes: outcome_names(k)
                .into_iter()
                .enumerate()
                .map(|(i, name)| OutcomeLabel {
                    name,
                    value: int(i as i64),
                })
                .collect(),
            continuous: continuous.then(|| ContinuousOutcome {
                name: "x".into(),
                lo: int(0),
                hi: int(1),
            }),
        });
    }
    let table = (0..n_states)
        .map(|_| {
            measurements
                .iter()
                .map(|m| random_measure(rng, m, max_den))
                .collect()
        })
        .collect();
    MeasurementSystem::from_parts((0..n_states).map(|p| format!("p{p}")).collect(), measurements, table)
        .expect("generated system is valid")
}

pub fn random_measure(rng: &mut ChaCha8Rng, m: &Measurement, max_den: i64) -> ProbabilityMeasure {
    let labels: Vec<String> = m.outcomes.iter().map(|o| o.name.clone()).collect();
    if m.continuous.is_none() {
        let w = weights(rng, labels.len(), max_den);
        return ProbabilityMeasure::atomic(labels.into_iter().zip(w)).unwrap();
    }
    let mut w = weights(rng, labels.len() + 1, max_den);
    let cont = w.pop().unwrap();
    let continuous = (cont > int(0)).then(|| ContinuousPart {
        weight: cont.clone(),
        cdf: random_cdf(rng, 6),
    });
    if continuous.is_none() {
        // keep the total at one when the continuous share came out empty
        w[0] += cont;
    }
    ProbabilityMeasure::new(labels.into_iter().zip(w), continuous).unwrap()
}

/// Random subset of a measurement's outcome space.
pub fn random_outcome_set(rng: &mut ChaCha8Rng, m: &Measurement) -> OutcomeSet {
    let labels: BTreeSet<String> = m
        .outcomes
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|o| o.name.clone())
        .collect();
    let range = if m.continuous.is_some() {
        let k = rng.gen_range(0..3);
        let pairs = (0..k).map(|_| {
            let a = rng.gen_range(0..16);
            let b = rng.gen_range(a..=16);
            (ratio(a, 16), ratio(b, 16))
        });
        IntervalSet::normalize(pairs).unwrap()
    } else {
        IntervalSet::empty()
    };
    OutcomeSet { labels, range }
}

/// `O_e \ B`.
pub fn complement(m: &Measurement, set: &OutcomeSet) -> OutcomeSet {
    OutcomeSet {
        labels: m
            .outcomes
            .iter()
            .map(|o| o.name.clone())
            .filter(|n| !set.labels.contains(n))
            .collect(),
        range: if m.continuous.is_some() {
            set.range.complement()
        } else {
            IntervalSet::empty()
        },
    }
}

/// Subset-DP decision of `FINITE(source) ≤ FINITE(target)`: can the target
/// atoms be split into groups whose sums are the source weights?
pub fn partition_oracle(source: &[Rational], target: &[Rational]) -> bool {
    let n = target.len();
    let full = (1usize << n) - 1;
    let sums: Vec<Rational> = (0..=full)
        .map(|mask| {
            (0..n)
                .filter(|j| mask >> j & 1 == 1)
                .fold(int(0), |acc, j| acc + &target[j])
        })
        .collect();
    let mut prefix = vec![int(0)];
    for m in source {
        let next = prefix.last().unwrap() + m;
        prefix.push(next);
    }
    let mut reach = vec![false; full + 1];
    reach[0] = true;
    for mask in 0..=full {
        if !reach[mask] {
            continue;
        }
        let Some(k) = prefix.iter().position(|p| p == &sums[mask]) else {
            continue;
        };
        if k == source.len() {
            continue;
        }
        let free = full & !mask;
        let mut sub = free;
        while sub > 0 {
            if sums[sub] == source[k] {
                reach[mask | sub] = true;
            }
            sub = (sub - 1) & free;
        }
    }
    reach[full] && sums[full] == prefix[source.len()]
}

pub fn finite(weights: &[(i64, i64)]) -> MeasureClass {
    let mut w: Vec<Rational> = weights.iter().map(|&(n, d)| ratio(n, d)).collect();
    w.sort_by(|a, b| b.cmp(a));
    MeasureClass::Finite(w)
}

fn split_randomly(rng: &mut ChaCha8Rng, masses: &[Rational], max_atoms: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = masses.to_vec();
    while out.len() < max_atoms && rng.gen_bool(0.7) {
        let i = rng.gen_range(0..out.len());
        let parts = rng.gen_range(2..=3);
        let cut: Vec<i64> = composition(rng, 12, parts).into_iter().filter(|&c| c > 0).collect();
        if cut.len() < 2 || out.len() + cut.len() - 1 > max_atoms {
            continue;
        }
        let m = out.remove(i);
        out.extend(cut.iter().map(|&c| &m * ratio(c, 12)));
    }
    out
}

fn random_finite(rng: &mut ChaCha8Rng, max_atoms: usize) -> MeasureClass {
    let k = rng.gen_range(1..=max_atoms);
    let den = [8, 12, 24][rng.gen_range(0..3)];
    let mut w: Vec<Rational> = composition(rng, den - k as i64, k)
        .into_iter()
        .map(|c| ratio(c + 1, den))
        .filter(|r| r > &int(0))
        .collect();
    w.sort_by(|a, b| b.cmp(a));
    MeasureClass::Finite(w)
}

/// Fixed corpus of 50 FINITE×FINITE pairs with at most 8 atoms per side.
pub fn finite_pair_corpus() -> Vec<(MeasureClass, MeasureClass)> {
    let mut pairs = vec![
        (finite(&[(1, 2), (1, 2)]), finite(&[(1, 4), (1, 4), (1, 4), (1, 4)])),
        (finite(&[(1, 4), (1, 4), (1, 4), (1, 4)]), finite(&[(1, 2), (1, 2)])),
        (finite(&[(1, 2), (1, 2)]), finite(&[(1, 1)])),
        (finite(&[(1, 1)]), finite(&[(1, 2), (1, 2)])),
        (finite(&[(1, 2), (1, 2)]), finite(&[(2, 3), (1, 3)])),
        (finite(&[(1, 2), (1, 2)]), finite(&[(1, 2), (1, 3), (1, 6)])),
        (finite(&[(3, 4), (1, 4)]), finite(&[(1, 2), (1, 4), (1, 4)])),
        (finite(&[(1, 2), (1, 3), (1, 6)]), finite(&[(1, 3), (1, 6), (1, 6), (1, 6), (1, 6)])),
        (finite(&[(1, 2), (1, 2)]), finite(&[(3, 8), (3, 8), (1, 8), (1, 8)])),
        (finite(&[(1, 2), (1, 2)]), finite(&[(3, 8), (1, 4), (1, 4), (1, 8)])),
    ];
    let mut rng = rng(0x5eed_0006);
    while pairs.len() < 50 {
        let source = random_finite(&mut rng, 5);
        let target = if pairs.len() % 2 == 0 {
            let masses = source.atom_masses();
            let mut t = split_randomly(&mut rng, &masses, 8);
            t.sort_by(|a, b| b.cmp(a));
            MeasureClass::Finite(t)
        } else {
            random_finite(&mut rng, 8)
        };
        if target.atom_count() <= 8 {
            pairs.push((source, target));
        }
    }
    pairs
}
