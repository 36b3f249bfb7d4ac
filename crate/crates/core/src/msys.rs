//! Measurement systems: states, measurements with their outcome spaces, and a
//! probability measure for every (state, measurement) pair.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measure::{self, MeasureDoc, MeasureError, OutcomeSet, ProbabilityMeasure};
use crate::rational::{self, RatText, Rational};

/// Default number of candidate (state map, measurement map) pairs
/// `math_equiv` may examine.
pub const DEFAULT_EQUIV_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("no probability given for state {state:?} under measurement {measurement:?}")]
    MissingTableEntry { state: String, measurement: String },
    #[error("probability for state {state:?} under measurement {measurement:?} given twice")]
    DuplicateTableEntry { state: String, measurement: String },
    #[error("state {state:?} under measurement {measurement:?}: total mass is not one (deficit {})", rational::format(.deficit))]
    MassNotOne {
        state: String,
        measurement: String,
        deficit: Rational,
    },
    #[error("measurement {measurement:?} has no outcome {outcome:?}")]
    UnknownOutcomeRef { measurement: String, outcome: String },
    #[error("unknown state or measurement {0:?}")]
    UnknownStateOrMeasurement(String),
    #[error("{0:?} declared twice")]
    Duplicate(String),
    #[error("measurement {measurement:?}: outcome value {value} used by more than one label")]
    DuplicateOutcomeValue { measurement: String, value: String },
    #[error("state {state:?} under measurement {measurement:?}: {source}")]
    Measure {
        state: String,
        measurement: String,
        source: MeasureError,
    },
    #[error("search budget of {0} candidate checks exceeded")]
    SearchBudgetExceeded(usize),
    #[error("unsupported document version {0}")]
    UnsupportedVersion(u32),
}

/// A point outcome with its position on the real line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeLabel {
    pub name: String,
    pub value: Rational,
}

/// Continuous outcome range `[lo, hi]`; the measure's unit coordinate `u`
/// sits at `lo + (hi - lo)·u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuousOutcome {
    pub name: String,
    pub lo: Rational,
    pub hi: Rational,
}

impl ContinuousOutcome {
    pub fn value_at(&self, u: &Rational) -> Rational {
        &self.lo + (&self.hi - &self.lo) * u
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    pub name: String,
    pub outcomes: Vec<OutcomeLabel>,
    pub continuous: Option<ContinuousOutcome>,
}

impl Measurement {
    pub fn outcome(&self, name: &str) -> Option<&OutcomeLabel> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// The full outcome space `O_e`.
    pub fn full_space(&self) -> OutcomeSet {
        let set = OutcomeSet::labels(self.outcomes.iter().map(|o| o.name.clone()));
        if self.continuous.is_some() {
            set.with_range(crate::interval::IntervalSet::unit())
        } else {
            set
        }
    }

    /// `B ∩ O_e`.
    pub fn restrict(&self, set: &OutcomeSet) -> OutcomeSet {
        OutcomeSet {
            labels: set
                .labels
                .iter()
                .filter(|l| self.outcome(l).is_some())
                .cloned()
                .collect(),
            range: if self.continuous.is_some() {
                set.range.clone()
            } else {
                crate::interval::IntervalSet::empty()
            },
        }
    }
}

/// A validated measurement system. Every `(state, measurement)` entry holds
/// a measure whose atoms are exactly that measurement's outcomes (missing
/// ones filled with weight zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementSystem {
    states: Vec<String>,
    measurements: Vec<Measurement>,
    /// `table[state][measurement]`
    table: Vec<Vec<ProbabilityMeasure>>,
}

impl MeasurementSystem {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn state_index(&self, name: &str) -> Result<usize, SystemError> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| SystemError::UnknownStateOrMeasurement(name.to_string()))
    }

    pub fn measurement_index(&self, name: &str) -> Result<usize, SystemError> {
        self.measurements
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| SystemError::UnknownStateOrMeasurement(name.to_string()))
    }

    pub fn measure(&self, state: usize, measurement: usize) -> &ProbabilityMeasure {
        &self.table[state][measurement]
    }

    /// All `(state, measurement, measure)` entries, state-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &ProbabilityMeasure)> {
        self.table
            .iter()
            .enumerate()
            .flat_map(|(p, row)| row.iter().enumerate().map(move |(e, m)| (p, e, m)))
    }

    /// `P_{p,e}(B) = P_{p,e}(B ∩ O_e)`; labels of other measurements are ignored.
    pub fn prob(&self, state: usize, measurement: usize, set: &OutcomeSet) -> Rational {
        let restricted = self.measurements[measurement].restrict(set);
        self.table[state][measurement]
            .eval(&restricted)
            .expect("restricted to the measurement's own outcomes")
    }

    /// Builds a system from already validated parts.
    pub fn from_parts(
        states: Vec<String>,
        measurements: Vec<Measurement>,
        table: Vec<Vec<ProbabilityMeasure>>,
    ) -> Result<Self, SystemError> {
        let mut raw = RawSystem {
            version: 1,
            states,
            measurements: measurements.iter().map(MeasurementDoc::from).collect(),
            table: Vec::new(),
        };
        for (p, row) in table.iter().enumerate() {
            for (e, m) in row.iter().enumerate() {
                raw.table.push(TableEntry {
                    state: raw.states.get(p).cloned().unwrap_or_default(),
                    measurement: measurements.get(e).map(|m| m.name.clone()).unwrap_or_default(),
                    measure: MeasureDoc::from(m),
                });
            }
        }
        validate(raw)
    }

    pub fn to_raw(&self) -> RawSystem {
        let mut table = Vec::new();
        for (p, e, m) in self.entries() {
            table.push(TableEntry {
                state: self.states[p].clone(),
                measurement: self.measurements[e].name.clone(),
                measure: MeasureDoc::from(m),
            });
        }
        RawSystem {
            version: 1,
            states: self.states.clone(),
            measurements: self.measurements.iter().map(MeasurementDoc::from).collect(),
            table,
        }
    }
}

// ---- documents ----------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<RatText>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuousOutcomeDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(RatText, RatText)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementDoc {
    pub name: String,
    pub outcomes: Vec<OutcomeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous: Option<ContinuousOutcomeDoc>,
}

impl From<&Measurement> for MeasurementDoc {
    fn from(m: &Measurement) -> Self {
        MeasurementDoc {
            name: m.name.clone(),
            outcomes: m
                .outcomes
                .iter()
                .map(|o| OutcomeDoc {
                    name: o.name.clone(),
                    value: Some(RatText(o.value.clone())),
                })
                .collect(),
            continuous: m.continuous.as_ref().map(|c| ContinuousOutcomeDoc {
                name: c.name.clone(),
                range: Some((RatText(c.lo.clone()), RatText(c.hi.clone()))),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntry {
    pub state: String,
    pub measurement: String,
    pub measure: MeasureDoc,
}

/// Unvalidated system description (the explicit-table form).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawSystem {
    #[serde(default = "default_version")]
    pub version: u32,
    pub states: Vec<String>,
    pub measurements: Vec<MeasurementDoc>,
    #[serde(default)]
    pub table: Vec<TableEntry>,
}

fn default_version() -> u32 {
    1
}

fn check_unique<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<(), SystemError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(SystemError::Duplicate(n.to_string()));
        }
    }
    Ok(())
}

fn validate_measurement(doc: &MeasurementDoc) -> Result<Measurement, SystemError> {
    let mut outcomes: Vec<OutcomeLabel> = Vec::new();
    for (i, o) in doc.outcomes.iter().enumerate() {
        let value = o
            .value
            .as_ref()
            .map_or_else(|| rational::int(i as i64), |v| v.0.clone());
        match outcomes.iter().find(|x| x.name == o.name) {
            Some(x) if x.value == value => continue,
            Some(_) => return Err(SystemError::Duplicate(format!("{}/{}", doc.name, o.name))),
            None => {}
        }
        if outcomes.iter().any(|x| x.value == value) {
            return Err(SystemError::DuplicateOutcomeValue {
                measurement: doc.name.clone(),
                value: rational::format(&value),
            });
        }
        outcomes.push(OutcomeLabel {
            name: o.name.clone(),
            value,
        });
    }
    let continuous = match &doc.continuous {
        Some(c) => {
            if outcomes.iter().any(|o| o.name == c.name) {
                return Err(SystemError::Duplicate(format!("{}/{}", doc.name, c.name)));
            }
            let (lo, hi) = c
                .range
                .as_ref()
                .map_or_else(|| (rational::zero(), rational::one()), |(a, b)| (a.0.clone(), b.0.clone()));
            Some(ContinuousOutcome {
                name: c.name.clone(),
                lo,
                hi,
            })
        }
        None => None,
    };
    Ok(Measurement {
        name: doc.name.clone(),
        outcomes,
        continuous,
    })
}

/// Checks a raw description and produces a [`MeasurementSystem`].
pub fn validate(raw: RawSystem) -> Result<MeasurementSystem, SystemError> {
    if raw.version != 1 {
        return Err(SystemError::UnsupportedVersion(raw.version));
    }
    check_unique(raw.states.iter().map(String::as_str))?;
    check_unique(raw.measurements.iter().map(|m| m.name.as_str()))?;
    let measurements = raw
        .measurements
        .iter()
        .map(validate_measurement)
        .collect::<Result<Vec<_>, _>>()?;

    let state_idx: HashMap<&str, usize> = raw
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let meas_idx: HashMap<&str, usize> = measurements
        .iter()
        .enumerate()
        .map(|(i, m)| (m.name.as_str(), i))
        .collect();

    let mut slots: Vec<Vec<Option<ProbabilityMeasure>>> =
        vec![vec![None; measurements.len()]; raw.states.len()];
    for entry in raw.table {
        let p = *state_idx
            .get(entry.state.as_str())
            .ok_or_else(|| SystemError::UnknownStateOrMeasurement(entry.state.clone()))?;
        let e = *meas_idx
            .get(entry.measurement.as_str())
            .ok_or_else(|| SystemError::UnknownStateOrMeasurement(entry.measurement.clone()))?;
        let meas = &measurements[e];
        for label in entry.measure.labels() {
            if meas.outcome(label).is_none() {
                return Err(SystemError::UnknownOutcomeRef {
                    measurement: meas.name.clone(),
                    outcome: label.to_string(),
                });
            }
        }
        if entry.measure.continuous.is_some() && meas.continuous.is_none() {
            return Err(SystemError::UnknownOutcomeRef {
                measurement: meas.name.clone(),
                outcome: "<continuous>".to_string(),
            });
        }
        // complete the atom list with the declared outcomes that were left out
        let mut doc = entry.measure;
        for o in &meas.outcomes {
            if !doc.atoms.0.iter().any(|(k, _)| k == &o.name) {
                doc.atoms.0.push((o.name.clone(), RatText(Rational::zero())));
            }
        }
        let m = ProbabilityMeasure::try_from(doc).map_err(|err| match err {
            MeasureError::MassNotOne { deficit } => SystemError::MassNotOne {
                state: entry.state.clone(),
                measurement: entry.measurement.clone(),
                deficit,
            },
            other => SystemError::Measure {
                state: entry.state.clone(),
                measurement: entry.measurement.clone(),
                source: other,
            },
        })?;
        if slots[p][e].replace(m).is_some() {
            return Err(SystemError::DuplicateTableEntry {
                state: entry.state,
                measurement: entry.measurement,
            });
        }
    }

    let mut table = Vec::with_capacity(slots.len());
    for (p, row) in slots.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (e, slot) in row.into_iter().enumerate() {
            out.push(slot.ok_or_else(|| SystemError::MissingTableEntry {
                state: raw.states[p].clone(),
                measurement: measurements[e].name.clone(),
            })?);
        }
        table.push(out);
    }
    Ok(MeasurementSystem {
        states: raw.states,
        measurements,
        table,
    })
}

// ---- mathematical equivalence --------------------------------------------

/// Bijections between two systems preserving every probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    /// `state_map[p]` is the index in the second system of state `p`.
    pub state_map: Vec<usize>,
    pub measurement_map: Vec<usize>,
    /// `outcome_maps[e][o]` is the outcome index in `measurement_map[e]`.
    pub outcome_maps: Vec<Vec<usize>>,
}

impl EquivalenceWitness {
    pub fn identity(ms: &MeasurementSystem) -> Self {
        EquivalenceWitness {
            state_map: (0..ms.states.len()).collect(),
            measurement_map: (0..ms.measurements.len()).collect(),
            outcome_maps: ms
                .measurements
                .iter()
                .map(|m| (0..m.outcomes.len()).collect())
                .collect(),
        }
    }

    /// The witness for the reverse direction.
    pub fn inverse(&self) -> Self {
        let invert = |v: &[usize]| {
            let mut out = vec![0; v.len()];
            for (i, &j) in v.iter().enumerate() {
                out[j] = i;
            }
            out
        };
        let mut outcome_maps = vec![Vec::new(); self.outcome_maps.len()];
        for (e, &e2) in self.measurement_map.iter().enumerate() {
            outcome_maps[e2] = invert(&self.outcome_maps[e]);
        }
        EquivalenceWitness {
            state_map: invert(&self.state_map),
            measurement_map: invert(&self.measurement_map),
            outcome_maps,
        }
    }

    /// Exact check that the maps are bijections preserving all probabilities.
    pub fn verify(&self, a: &MeasurementSystem, b: &MeasurementSystem) -> bool {
        let is_perm = |v: &[usize], n: usize| {
            let mut seen = vec![false; n];
            v.len() == n && v.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
        };
        if !is_perm(&self.state_map, b.states.len())
            || !is_perm(&self.measurement_map, b.measurements.len())
            || self.outcome_maps.len() != a.measurements.len()
        {
            return false;
        }
        for (e, &e2) in self.measurement_map.iter().enumerate() {
            if !is_perm(&self.outcome_maps[e], b.measurements[e2].outcomes.len())
                || a.measurements[e].outcomes.len() != b.measurements[e2].outcomes.len()
            {
                return false;
            }
            for (p, &p2) in self.state_map.iter().enumerate() {
                let (ma, mb) = (&a.table[p][e], &b.table[p2][e2]);
                if ma.continuous_part() != mb.continuous_part() {
                    return false;
                }
                for (o, &o2) in self.outcome_maps[e].iter().enumerate() {
                    let wa = ma.atom_weight(&a.measurements[e].outcomes[o].name);
                    let wb = mb.atom_weight(&b.measurements[e2].outcomes[o2].name);
                    if wa != wb {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Name-keyed form for reports.
    pub fn named(&self, a: &MeasurementSystem, b: &MeasurementSystem) -> NamedEquivalence {
        NamedEquivalence {
            states: self
                .state_map
                .iter()
                .enumerate()
                .map(|(p, &q)| (a.states[p].clone(), b.states[q].clone()))
                .collect(),
            measurements: self
                .measurement_map
                .iter()
                .enumerate()
                .map(|(e, &f)| (a.measurements[e].name.clone(), b.measurements[f].name.clone()))
                .collect(),
            outcomes: self
                .measurement_map
                .iter()
                .enumerate()
                .map(|(e, &f)| {
                    let map = self.outcome_maps[e]
                        .iter()
                        .enumerate()
                        .map(|(o, &o2)| {
                            (
                                a.measurements[e].outcomes[o].name.clone(),
                                b.measurements[f].outcomes[o2].name.clone(),
                            )
                        })
                        .collect();
                    (a.measurements[e].name.clone(), map)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedEquivalence {
    pub states: BTreeMap<String, String>,
    pub measurements: BTreeMap<String, String>,
    pub outcomes: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivOptions {
    pub budget: usize,
    /// Filter candidate maps by sorted-probability signatures first.
    pub prune: bool,
}

impl Default for EquivOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_EQUIV_BUDGET,
            prune: true,
        }
    }
}

/// Searches for a mathematical-equivalence witness, lexicographically first
/// in (measurement map, state map) order; outcome maps pair each outcome with
/// the first unused outcome that has the same probability in every state.
pub fn math_equiv(
    a: &MeasurementSystem,
    b: &MeasurementSystem,
    opts: EquivOptions,
) -> Result<Option<EquivalenceWitness>, SystemError> {
    if a.states.len() != b.states.len() || a.measurements.len() != b.measurements.len() {
        return Ok(None);
    }
    let mut search = EquivSearch {
        a,
        b,
        opts,
        checks: 0,
        meas_sig_a: a.measurements.iter().enumerate().map(|(e, _)| meas_signature(a, e)).collect(),
        meas_sig_b: b.measurements.iter().enumerate().map(|(e, _)| meas_signature(b, e)).collect(),
    };
    let mut eta = Vec::new();
    let mut used = vec![false; b.measurements.len()];
    search.measurements(&mut eta, &mut used)
}

type Signature = Vec<Vec<Rational>>;

fn sorted_row(m: &ProbabilityMeasure) -> Vec<Rational> {
    let mut row: Vec<Rational> = m.atoms().map(|(_, w)| w.clone()).collect();
    row.sort();
    row.push(m.continuous_mass());
    row
}

fn meas_signature(ms: &MeasurementSystem, e: usize) -> Signature {
    let mut rows: Signature = (0..ms.states.len()).map(|p| sorted_row(&ms.table[p][e])).collect();
    rows.sort();
    rows
}

struct EquivSearch<'a> {
    a: &'a MeasurementSystem,
    b: &'a MeasurementSystem,
    opts: EquivOptions,
    checks: usize,
    meas_sig_a: Vec<Signature>,
    meas_sig_b: Vec<Signature>,
}

impl EquivSearch<'_> {
    fn measurements(
        &mut self,
        eta: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Result<Option<EquivalenceWitness>, SystemError> {
        let e = eta.len();
        if e == self.a.measurements.len() {
            return self.states_for(eta);
        }
        for f in 0..self.b.measurements.len() {
            if used[f] || self.a.measurements[e].outcomes.len() != self.b.measurements[f].outcomes.len() {
                continue;
            }
            if self.opts.prune && self.meas_sig_a[e] != self.meas_sig_b[f] {
                continue;
            }
            used[f] = true;
            eta.push(f);
            let found = self.measurements(eta, used)?;
            eta.pop();
            used[f] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn states_for(&mut self, eta: &[usize]) -> Result<Option<EquivalenceWitness>, SystemError> {
        let (a, b) = (self.a, self.b);
        let sig = |ms: &MeasurementSystem, p: usize, es: &mut dyn Iterator<Item = usize>| -> Signature {
            es.map(|e| sorted_row(&ms.table[p][e])).collect()
        };
        let sig_a: Vec<Signature> = (0..a.states.len())
            .map(|p| sig(a, p, &mut (0..a.measurements.len())))
            .collect();
        let sig_b: Vec<Signature> = (0..b.states.len())
            .map(|q| sig(b, q, &mut eta.iter().copied()))
            .collect();
        let mut zeta = Vec::with_capacity(a.states.len());
        let mut used = vec![false; b.states.len()];
        self.assign_states(eta, &sig_a, &sig_b, &mut zeta, &mut used)
    }

    fn assign_states(
        &mut self,
        eta: &[usize],
        sig_a: &[Signature],
        sig_b: &[Signature],
        zeta: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Result<Option<EquivalenceWitness>, SystemError> {
        let p = zeta.len();
        if p == self.a.states.len() {
            self.checks += 1;
            if self.checks > self.opts.budget {
                return Err(SystemError::SearchBudgetExceeded(self.opts.budget));
            }
            return Ok(self.outcome_maps(eta, zeta));
        }
        for q in 0..self.b.states.len() {
            if used[q] || (self.opts.prune && sig_a[p] != sig_b[q]) {
                continue;
            }
            used[q] = true;
            zeta.push(q);
            let found = self.assign_states(eta, sig_a, sig_b, zeta, used)?;
            zeta.pop();
            used[q] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn outcome_maps(&self, eta: &[usize], zeta: &[usize]) -> Option<EquivalenceWitness> {
        let (a, b) = (self.a, self.b);
        let mut outcome_maps = Vec::with_capacity(eta.len());
        for (e, &f) in eta.iter().enumerate() {
            for (p, &q) in zeta.iter().enumerate() {
                if a.table[p][e].continuous_part() != b.table[q][f].continuous_part() {
                    return None;
                }
            }
            let column = |ms: &MeasurementSystem, m: usize, o: &str, states: &mut dyn Iterator<Item = usize>| {
                states
                    .map(|p| ms.table[p][m].atom_weight(o).cloned().unwrap_or_else(Rational::zero))
                    .collect::<Vec<_>>()
            };
            let cols_b: Vec<Vec<Rational>> = b.measurements[f]
                .outcomes
                .iter()
                .map(|o| column(b, f, &o.name, &mut zeta.iter().copied()))
                .collect();
            let mut taken = vec![false; cols_b.len()];
            let mut map = Vec::with_capacity(cols_b.len());
            for o in &a.measurements[e].outcomes {
                let col = column(a, e, &o.name, &mut (0..a.states.len()));
                let j = (0..cols_b.len()).find(|&j| !taken[j] && cols_b[j] == col)?;
                taken[j] = true;
                map.push(j);
            }
            outcome_maps.push(map);
        }
        Some(EquivalenceWitness {
            state_map: zeta.to_vec(),
            measurement_map: eta.to_vec(),
            outcome_maps,
        })
    }
}

/// Classes of a single entry, re-exported for convenience.
pub fn entry_class(ms: &MeasurementSystem, state: usize, measurement: usize) -> measure::MeasureClass {
    measure::classify(ms.measure(state, measurement))
}
