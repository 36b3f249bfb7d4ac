//! Finite unions of half-open subintervals `[a, b)` of `[0, 1]` with exact
//! rational endpoints.
//!
//! Sets are kept in a canonical form: cells sorted ascending, pairwise
//! disjoint and non-touching, no empty cells. Two sets are equal as sets iff
//! their canonical cell lists are equal, so `==` is set equality.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, RatText, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("endpoint {0} lies outside [0, 1]")]
    EndpointOutOfRange(String),
    #[error("malformed cell [{0}, {1}): left endpoint exceeds right")]
    MalformedPair(String, String),
    #[error("point {0} lies outside [0, 1]")]
    PointOutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub start: Rational,
    pub end: Rational,
}

impl Cell {
    pub fn len(&self) -> Rational {
        &self.end - &self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    cells: Vec<Cell>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[0, 1)`.
    pub fn unit() -> Self {
        Self {
            cells: vec![Cell {
                start: Rational::zero(),
                end: Rational::one(),
            }],
        }
    }

    /// Canonicalizes an arbitrary list of `[a, b)` pairs.
    pub fn normalize<I>(pairs: I) -> Result<Self, IntervalError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut cells = Vec::new();
        for (a, b) in pairs {
            for x in [&a, &b] {
                if x < &Rational::zero() || x > &Rational::one() {
                    return Err(IntervalError::EndpointOutOfRange(rational::format(x)));
                }
            }
            if a > b {
                return Err(IntervalError::MalformedPair(
                    rational::format(&a),
                    rational::format(&b),
                ));
            }
            if a < b {
                cells.push(Cell { start: a, end: b });
            }
        }
        Ok(Self::from_unsorted(cells))
    }

    /// Single cell `[a, b)`; empty when `a == b`.
    pub fn interval(a: Rational, b: Rational) -> Result<Self, IntervalError> {
        Self::normalize([(a, b)])
    }

    fn from_unsorted(mut cells: Vec<Cell>) -> Self {
        cells.sort_by(|x, y| x.start.cmp(&y.start).then_with(|| x.end.cmp(&y.end)));
        let mut merged: Vec<Cell> = Vec::with_capacity(cells.len());
        for c in cells {
            match merged.last_mut() {
                Some(last) if c.start <= last.end => {
                    if c.end > last.end {
                        last.end = c.end;
                    }
                }
                _ => merged.push(c),
            }
        }
        Self { cells: merged }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_unsorted(self.cells.iter().chain(&other.cells).cloned().collect())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.cells.len() && j < other.cells.len() {
            let (x, y) = (&self.cells[i], &other.cells[j]);
            let start = std::cmp::max(&x.start, &y.start);
            let end = std::cmp::min(&x.end, &y.end);
            if start < end {
                out.push(Cell {
                    start: start.clone(),
                    end: end.clone(),
                });
            }
            if x.end < y.end {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Inputs are canonical, so the sweep output already is.
        Self { cells: out }
    }

    /// Complement within `[0, 1)`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.cells.len() + 1);
        let mut cursor = Rational::zero();
        for c in &self.cells {
            if cursor < c.start {
                out.push(Cell {
                    start: cursor,
                    end: c.start.clone(),
                });
            }
            cursor = c.end.clone();
        }
        if cursor < Rational::one() {
            out.push(Cell {
                start: cursor,
                end: Rational::one(),
            });
        }
        Self { cells: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Lebesgue measure.
    pub fn lebesgue(&self) -> Rational {
        self.cells
            .iter()
            .fold(Rational::zero(), |acc, c| acc + c.len())
    }

    /// Membership of an exact point.
    pub fn contains(&self, x: &Rational) -> Result<bool, IntervalError> {
        if x < &Rational::zero() || x > &Rational::one() {
            return Err(IntervalError::PointOutOfRange(rational::format(x)));
        }
        let idx = self.cells.partition_point(|c| &c.start <= x);
        Ok(idx > 0 && x < &self.cells[idx - 1].end)
    }

    /// Membership of a binary float, decided exactly.
    pub fn contains_f64(&self, x: f64) -> Result<bool, IntervalError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(IntervalError::PointOutOfRange(x.to_string()));
        }
        let exact = rational::from_f64_exact(x).expect("finite");
        self.contains(&exact)
    }

    /// Endpoint pairs in canonical order.
    pub fn to_pairs(&self) -> Vec<(Rational, Rational)> {
        self.cells
            .iter()
            .map(|c| (c.start.clone(), c.end.clone()))
            .collect()
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(RatText, RatText)> = self
            .cells
            .iter()
            .map(|c| (RatText(c.start.clone()), RatText(c.end.clone())))
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(RatText, RatText)>::deserialize(d)?;
        IntervalSet::normalize(pairs.into_iter().map(|(a, b)| (a.0, b.0)))
            .map_err(serde::de::Error::custom)
    }
}
