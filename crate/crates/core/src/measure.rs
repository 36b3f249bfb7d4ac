//! Probability measures made of finitely many labelled atoms plus an optional
//! atomless part given by a piecewise-linear CDF on `[0, 1]`.
//!
//! The continuous part lives on its own unit coordinate `u ∈ [0, 1]`; the
//! owning measurement decides how `u` is embedded in the real line. Queries
//! against it are expressed as [`IntervalSet`]s in that coordinate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::IntervalSet;
use crate::rational::{self, RatText, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("total mass is not one (deficit {})", rational::format(.deficit))]
    MassNotOne { deficit: Rational },
    #[error("outcome {0:?} listed more than once")]
    DuplicateOutcome(String),
    #[error("invalid cdf: {0}")]
    InvalidCdf(String),
    #[error("atom {0:?} has negative weight")]
    NegativeWeight(String),
    #[error("continuous weight must lie in (0, 1]")]
    ContinuousWeightOutOfRange,
    #[error("outcome {0:?} is not part of this measure")]
    UnknownOutcome(String),
    #[error("mixing weight must lie in [0, 1]")]
    WeightOutOfRange,
    #[error("countably many atoms are not supported (tail mass {})", rational::format(.0))]
    InfiniteTail(Rational),
}

/// Continuous, non-decreasing, piecewise-linear CDF from `(0,0)` to `(1,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseLinearCdf {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinearCdf {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, MeasureError> {
        let bad = |m: &str| Err(MeasureError::InvalidCdf(m.to_string()));
        if points.len() < 2 {
            return bad("need at least two breakpoints");
        }
        let (zero, one) = (Rational::zero(), Rational::one());
        if points[0] != (zero.clone(), zero.clone()) {
            return bad("first breakpoint must be (0, 0)");
        }
        if points[points.len() - 1] != (one.clone(), one.clone()) {
            return bad("last breakpoint must be (1, 1)");
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return bad("breakpoint abscissae must be strictly increasing");
            }
            if w[1].1 < w[0].1 {
                return bad("cdf values must be non-decreasing");
            }
        }
        Ok(Self { points })
    }

    /// The uniform CDF `F(u) = u`.
    pub fn uniform() -> Self {
        Self {
            points: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// `F(u)`, clamped outside `[0, 1]`.
    pub fn eval(&self, u: &Rational) -> Rational {
        if u <= &Rational::zero() {
            return Rational::zero();
        }
        if u >= &Rational::one() {
            return Rational::one();
        }
        let i = self.points.partition_point(|(x, _)| x <= u);
        let (x0, f0) = &self.points[i - 1];
        let (x1, f1) = &self.points[i];
        f0 + (f1 - f0) * (u - x0) / (x1 - x0)
    }

    /// Probability the CDF assigns to a set of `u`-values.
    pub fn mass(&self, set: &IntervalSet) -> Rational {
        set.cells()
            .iter()
            .fold(Rational::zero(), |acc, c| acc + self.eval(&c.end) - self.eval(&c.start))
    }
}

/// Atomless component: a share of the total mass spread by a CDF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuousPart {
    pub weight: Rational,
    pub cdf: PiecewiseLinearCdf,
}

/// Outcome subset: a finite set of atom labels plus a set of `u`-values of
/// the continuous part.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutcomeSet {
    pub labels: BTreeSet<String>,
    pub range: IntervalSet,
}

impl OutcomeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            labels: labels.into_iter().map(Into::into).collect(),
            range: IntervalSet::empty(),
        }
    }

    pub fn range(range: IntervalSet) -> Self {
        Self {
            labels: BTreeSet::new(),
            range,
        }
    }

    pub fn with_range(mut self, range: IntervalSet) -> Self {
        self.range = range;
        self
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            labels: self.labels.union(&other.labels).cloned().collect(),
            range: self.range.union(&other.range),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty() && self.range.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityMeasure {
    atoms: BTreeMap<String, Rational>,
    continuous: Option<ContinuousPart>,
}

impl ProbabilityMeasure {
    /// Validates atoms and optional continuous part; total mass must be exactly one.
    pub fn new<I, S>(atoms: I, continuous: Option<ContinuousPart>) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        let mut total = Rational::zero();
        for (label, weight) in atoms {
            let label = label.into();
            if weight.is_negative() {
                return Err(MeasureError::NegativeWeight(label));
            }
            total += &weight;
            if map.insert(label.clone(), weight).is_some() {
                return Err(MeasureError::DuplicateOutcome(label));
            }
        }
        if let Some(c) = &continuous {
            if !c.weight.is_positive() || c.weight > Rational::one() {
                return Err(MeasureError::ContinuousWeightOutOfRange);
            }
            total += &c.weight;
        }
        if !total.is_one() {
            return Err(MeasureError::MassNotOne {
                deficit: Rational::one() - total,
            });
        }
        Ok(Self {
            atoms: map,
            continuous,
        })
    }

    /// Purely atomic measure.
    pub fn atomic<I, S>(atoms: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::new(atoms, None)
    }

    /// Point mass on one label.
    pub fn dirac(label: impl Into<String>) -> Self {
        Self::atomic([(label.into(), Rational::one())]).expect("unit mass")
    }

    /// Purely continuous measure with the given CDF.
    pub fn continuous(cdf: PiecewiseLinearCdf) -> Self {
        Self {
            atoms: BTreeMap::new(),
            continuous: Some(ContinuousPart {
                weight: Rational::one(),
                cdf,
            }),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.atoms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn atom_weight(&self, label: &str) -> Option<&Rational> {
        self.atoms.get(label)
    }

    pub fn continuous_part(&self) -> Option<&ContinuousPart> {
        self.continuous.as_ref()
    }

    pub fn atomic_mass(&self) -> Rational {
        self.atoms.values().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn continuous_mass(&self) -> Rational {
        self.continuous
            .as_ref()
            .map_or_else(Rational::zero, |c| c.weight.clone())
    }

    /// Atoms in layout order: non-increasing weight, ties by label.
    pub fn atoms_by_weight(&self) -> Vec<(&str, &Rational)> {
        let mut v: Vec<_> = self.atoms().collect();
        v.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Measure of an outcome set. Every label must be an atom of this measure.
    pub fn eval(&self, set: &OutcomeSet) -> Result<Rational, MeasureError> {
        let mut total = Rational::zero();
        for label in &set.labels {
            match self.atoms.get(label) {
                Some(w) => total += w,
                None => return Err(MeasureError::UnknownOutcome(label.clone())),
            }
        }
        if let Some(c) = &self.continuous {
            total += &c.weight * c.cdf.mass(&set.range);
        }
        Ok(total)
    }

    /// The whole outcome space of this measure.
    pub fn full_space(&self) -> OutcomeSet {
        OutcomeSet {
            labels: self.atoms.keys().cloned().collect(),
            range: if self.continuous.is_some() {
                IntervalSet::unit()
            } else {
                IntervalSet::empty()
            },
        }
    }
}

/// Split into normalized continuous (`left`) and atomic (`right`) parts,
/// with `atomic_mass` the mass of the atomic support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub left: Option<ProbabilityMeasure>,
    pub right: Option<ProbabilityMeasure>,
    pub atomic_mass: Rational,
}

pub fn decompose(m: &ProbabilityMeasure) -> Decomposition {
    let a = m.atomic_mass();
    let left = m
        .continuous
        .as_ref()
        .map(|c| ProbabilityMeasure::continuous(c.cdf.clone()));
    let right = if a.is_zero() {
        None
    } else {
        Some(ProbabilityMeasure {
            atoms: m.atoms.iter().map(|(k, w)| (k.clone(), w / &a)).collect(),
            continuous: None,
        })
    };
    Decomposition {
        left,
        right,
        atomic_mass: a,
    }
}

/// Label used for `label` of the right operand when it clashes with `taken`.
fn fresh_label(label: &str, taken: &BTreeMap<String, Rational>) -> String {
    let mut candidate = format!("{label}#r");
    let mut k = 2;
    while taken.contains_key(&candidate) {
        candidate = format!("{label}#r{k}");
        k += 1;
    }
    candidate
}

/// Weighted direct union `(1-a)·l ⊕ a·r`.
///
/// Clashing right-hand labels get a `#r` suffix. When both operands carry a
/// continuous part, the left one is placed on `u ∈ [0, 1/2]` and the right one
/// on `[1/2, 1]` of the combined continuous coordinate.
pub fn weighted_union(
    l: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    a: &Rational,
) -> Result<ProbabilityMeasure, MeasureError> {
    if a.is_negative() || a > &Rational::one() {
        return Err(MeasureError::WeightOutOfRange);
    }
    if a.is_zero() {
        return Ok(l.clone());
    }
    if a.is_one() {
        return Ok(r.clone());
    }
    let la = Rational::one() - a;
    let mut atoms: BTreeMap<String, Rational> =
        l.atoms.iter().map(|(k, w)| (k.clone(), w * &la)).collect();
    for (k, w) in &r.atoms {
        let key = if atoms.contains_key(k) {
            fresh_label(k, &atoms)
        } else {
            k.clone()
        };
        atoms.insert(key, w * a);
    }
    let continuous = match (&l.continuous, &r.continuous) {
        (None, None) => None,
        (Some(c), None) => Some(ContinuousPart {
            weight: &c.weight * &la,
            cdf: c.cdf.clone(),
        }),
        (None, Some(c)) => Some(ContinuousPart {
            weight: &c.weight * a,
            cdf: c.cdf.clone(),
        }),
        (Some(cl), Some(cr)) => {
            let wl = &cl.weight * &la;
            let wr = &cr.weight * a;
            let total = &wl + &wr;
            let half = rational::ratio(1, 2);
            let mut points = Vec::new();
            for (x, f) in cl.cdf.points() {
                points.push((x * &half, &wl * f / &total));
            }
            for (x, f) in cr.cdf.points().iter().skip(1) {
                points.push((&half + x * &half, (&wl + &wr * f) / &total));
            }
            Some(ContinuousPart {
                weight: total,
                cdf: PiecewiseLinearCdf::new(points)?,
            })
        }
    };
    Ok(ProbabilityMeasure { atoms, continuous })
}

/// Isomorphism class of the measure space `(outcome algebra, measure)` after
/// quotienting by null sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureClass {
    /// Atomless (Lebesgue type).
    Continuum,
    /// Purely atomic; weights sorted non-increasing, all positive, summing to one.
    Finite(Vec<Rational>),
    /// Atomic part of total mass `atomic` (strictly between 0 and 1), its
    /// normalized weights, and an atomless part of mass `1 - atomic`.
    Mixed {
        atomic: Rational,
        weights: Vec<Rational>,
    },
}

impl MeasureClass {
    /// Canonical class from raw atom masses (absolute) and a continuous mass.
    /// Zero atoms are dropped; weights are normalized by the atomic mass.
    pub fn from_parts<'a, I>(atoms: I, continuous_mass: &Rational) -> Self
    where
        I: IntoIterator<Item = &'a Rational>,
    {
        let mut w: Vec<Rational> = atoms.into_iter().filter(|x| x.is_positive()).cloned().collect();
        w.sort_by(|x, y| y.cmp(x));
        let a: Rational = w.iter().fold(Rational::zero(), |acc, x| acc + x);
        if w.is_empty() {
            MeasureClass::Continuum
        } else if !continuous_mass.is_positive() {
            MeasureClass::Finite(w.into_iter().map(|x| x / &a).collect())
        } else {
            MeasureClass::Mixed {
                weights: w.into_iter().map(|x| x / &a).collect(),
                atomic: a,
            }
        }
    }

    /// Number of atoms.
    pub fn atom_count(&self) -> usize {
        match self {
            MeasureClass::Continuum => 0,
            MeasureClass::Finite(w) | MeasureClass::Mixed { weights: w, .. } => w.len(),
        }
    }

    /// Total atomic mass `a` (1 for finite, 0 for continuum).
    pub fn atomic_mass(&self) -> Rational {
        match self {
            MeasureClass::Continuum => Rational::zero(),
            MeasureClass::Finite(_) => Rational::one(),
            MeasureClass::Mixed { atomic, .. } => atomic.clone(),
        }
    }

    /// Absolute masses of the atoms, in canonical order.
    pub fn atom_masses(&self) -> Vec<Rational> {
        match self {
            MeasureClass::Continuum => Vec::new(),
            MeasureClass::Finite(w) => w.clone(),
            MeasureClass::Mixed { atomic, weights } => weights.iter().map(|x| x * atomic).collect(),
        }
    }

    pub fn continuous_mass(&self) -> Rational {
        Rational::one() - self.atomic_mass()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MeasureClass::Finite(_))
    }
}

impl fmt::Display for MeasureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |w: &[Rational]| {
            w.iter()
                .map(rational::format)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            MeasureClass::Continuum => f.write_str("CONTINUUM"),
            MeasureClass::Finite(w) => write!(f, "FINITE({}, [{}])", w.len(), list(w)),
            MeasureClass::Mixed { atomic, weights } => {
                write!(f, "MIXED({}, [{}])", rational::format(atomic), list(weights))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
enum ClassDoc {
    Continuum,
    Finite { n: usize, weights: Vec<RatText> },
    Mixed { a: RatText, weights: Vec<RatText> },
}

impl Serialize for MeasureClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let wrap = |w: &[Rational]| w.iter().cloned().map(RatText).collect::<Vec<_>>();
        let doc = match self {
            MeasureClass::Continuum => ClassDoc::Continuum,
            MeasureClass::Finite(w) => ClassDoc::Finite {
                n: w.len(),
                weights: wrap(w),
            },
            MeasureClass::Mixed { atomic, weights } => ClassDoc::Mixed {
                a: RatText(atomic.clone()),
                weights: wrap(weights),
            },
        };
        doc.serialize(s)
    }
}

pub fn classify(m: &ProbabilityMeasure) -> MeasureClass {
    MeasureClass::from_parts(m.atoms.values(), &m.continuous_mass())
}

// ---- JSON form ----------------------------------------------------------

/// Atom map that keeps document order and reports duplicate keys.
#[derive(Debug, Clone, Default)]
pub struct AtomList(pub Vec<(String, RatText)>);

impl Serialize for AtomList {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for AtomList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = AtomList;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from outcome labels to \"p/q\" weights")
            }
            fn visit_map<A: serde::de::MapAccess<'de>>(self, mut a: A) -> Result<AtomList, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, RatText>()? {
                    out.push((k, v));
                }
                Ok(AtomList(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuousDoc {
    pub weight: RatText,
    pub cdf: Vec<(RatText, RatText)>,
}

/// Unvalidated JSON form of a measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureDoc {
    #[serde(default)]
    pub atoms: AtomList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous: Option<ContinuousDoc>,
    /// Mass of the atoms left out of a truncated countable list; must be 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<RatText>,
}

impl MeasureDoc {
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.atoms.0.iter().map(|(k, _)| k.as_str())
    }
}

impl TryFrom<MeasureDoc> for ProbabilityMeasure {
    type Error = MeasureError;

    fn try_from(doc: MeasureDoc) -> Result<Self, MeasureError> {
        if let Some(RatText(tail)) = doc.tail {
            if !tail.is_zero() {
                return Err(MeasureError::InfiniteTail(tail));
            }
        }
        let continuous = match doc.continuous {
            Some(c) => Some(ContinuousPart {
                weight: c.weight.0,
                cdf: PiecewiseLinearCdf::new(c.cdf.into_iter().map(|(x, f)| (x.0, f.0)).collect())?,
            }),
            None => None,
        };
        ProbabilityMeasure::new(doc.atoms.0.into_iter().map(|(k, v)| (k, v.0)), continuous)
    }
}

impl From<&ProbabilityMeasure> for MeasureDoc {
    fn from(m: &ProbabilityMeasure) -> Self {
        MeasureDoc {
            atoms: AtomList(
                m.atoms
                    .iter()
                    .map(|(k, v)| (k.clone(), RatText(v.clone())))
                    .collect(),
            ),
            continuous: m.continuous.as_ref().map(|c| ContinuousDoc {
                weight: RatText(c.weight.clone()),
                cdf: c
                    .cdf
                    .points()
                    .iter()
                    .map(|(x, f)| (RatText(x.clone()), RatText(f.clone())))
                    .collect(),
            }),
            tail: None,
        }
    }
}

impl Serialize for ProbabilityMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MeasureDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProbabilityMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = MeasureDoc::deserialize(d)?;
        ProbabilityMeasure::try_from(doc).map_err(serde::de::Error::custom)
    }
}
