//! Hidden-measurement representations over `Λ = [0, 1]` with Lebesgue measure.
//!
//! For each (state, measurement) an [`OutcomeMap`] partitions `[0, 1)` into
//! cells. A cell either yields a fixed outcome label or, for the continuous
//! part of a measure, transports `λ` affinely onto the measure's unit
//! coordinate `u`. Evaluating the map at `λ` is the deterministic hidden
//! measurement selected by the context `λ`; the set of `λ` driving a state into
//! an outcome set `B` is an exact [`IntervalSet`], and its length equals the
//! probability of `B`.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{IntervalError, IntervalSet};
use crate::measure::{self, OutcomeSet, ProbabilityMeasure};
use crate::msys::{MeasurementSystem, SystemError};
use crate::order::{self, ClassSet, FiniteLambdaSearch, FiniteLambdaSummary, SearchBudget, SetComparison, WitnessLayout};
use crate::rational::{self, RatText, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("unknown state or measurement {0:?}")]
    UnknownStateOrMeasurement(String),
    #[error(transparent)]
    PointOutOfRange(#[from] IntervalError),
    #[error("cells do not partition [0, 1): {0}")]
    NotAPartition(String),
}

impl From<SystemError> for RepError {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::UnknownStateOrMeasurement(n) => RepError::UnknownStateOrMeasurement(n),
            other => RepError::UnknownStateOrMeasurement(other.to_string()),
        }
    }
}

/// What a cell of an outcome map produces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CellTarget {
    Outcome(String),
    /// `u = alpha·λ + beta` on the continuous part, `alpha > 0`.
    Affine { alpha: Rational, beta: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapCell {
    pub start: Rational,
    pub end: Rational,
    pub target: CellTarget,
}

/// Value of a hidden measurement at one context.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Label(String),
    /// Position on the continuous part's unit coordinate.
    Continuous(Rational),
}

/// Same as [`Outcome`] for a float context.
#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeF64 {
    Label(String),
    Continuous(f64),
}

/// Ordered partition of `[0, 1)` into outcome-producing cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeMap {
    cells: Vec<MapCell>,
}

impl OutcomeMap {
    /// Checks that the cells are non-empty, contiguous and cover `[0, 1)`.
    pub fn new(cells: Vec<MapCell>) -> Result<Self, RepError> {
        let bad = |m: String| Err(RepError::NotAPartition(m));
        let mut cursor = Rational::zero();
        for c in &cells {
            if c.start != cursor {
                return bad(format!("gap or overlap at {}", rational::format(&cursor)));
            }
            if c.end <= c.start {
                return bad(format!("empty cell at {}", rational::format(&c.start)));
            }
            if let CellTarget::Affine { alpha, .. } = &c.target {
                if !alpha.is_positive() {
                    return bad("affine slope must be positive".into());
                }
            }
            cursor = c.end.clone();
        }
        if !cursor.is_one() {
            return bad(format!("cells end at {}", rational::format(&cursor)));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[MapCell] {
        &self.cells
    }

    /// `{λ : φ_λ ∈ B}`.
    pub fn preimage(&self, set: &OutcomeSet) -> IntervalSet {
        let mut pairs = Vec::new();
        for c in &self.cells {
            match &c.target {
                CellTarget::Outcome(label) => {
                    if set.labels.contains(label) {
                        pairs.push((c.start.clone(), c.end.clone()));
                    }
                }
                CellTarget::Affine { alpha, beta } => {
                    for r in set.range.cells() {
                        let lo = (&r.start - beta) / alpha;
                        let hi = (&r.end - beta) / alpha;
                        let a = std::cmp::max(lo, c.start.clone());
                        let b = std::cmp::min(hi, c.end.clone());
                        if a < b {
                            pairs.push((a, b));
                        }
                    }
                }
            }
        }
        IntervalSet::normalize(pairs).expect("preimage pieces lie inside their cells")
    }

    fn cell_index(&self, lambda: &Rational) -> usize {
        // λ = 1 falls into the final cell
        self.cells
            .partition_point(|c| &c.start <= lambda)
            .saturating_sub(1)
    }

    pub fn eval(&self, lambda: &Rational) -> Result<Outcome, RepError> {
        if lambda.is_negative() || lambda > &Rational::one() {
            return Err(IntervalError::PointOutOfRange(rational::format(lambda)).into());
        }
        let cell = &self.cells[self.cell_index(lambda)];
        Ok(match &cell.target {
            CellTarget::Outcome(l) => Outcome::Label(l.clone()),
            CellTarget::Affine { alpha, beta } => Outcome::Continuous(alpha * lambda + beta),
        })
    }

    pub fn eval_f64(&self, lambda: f64) -> Result<OutcomeF64, RepError> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(IntervalError::PointOutOfRange(lambda.to_string()).into());
        }
        let exact = rational::from_f64_exact(lambda).expect("finite");
        let cell = &self.cells[self.cell_index(&exact)];
        Ok(match &cell.target {
            CellTarget::Outcome(l) => OutcomeF64::Label(l.clone()),
            CellTarget::Affine { alpha, beta } => {
                OutcomeF64::Continuous(rational::to_f64(alpha) * lambda + rational::to_f64(beta))
            }
        })
    }

    /// Replaces outcome labels through `rename`; continuous cells are kept.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Self {
        Self {
            cells: self
                .cells
                .iter()
                .map(|c| MapCell {
                    start: c.start.clone(),
                    end: c.end.clone(),
                    target: match &c.target {
                        CellTarget::Outcome(l) => CellTarget::Outcome(rename(l)),
                        t => t.clone(),
                    },
                })
                .collect(),
        }
    }
}

/// Order in which atoms are laid out from `λ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Layout {
    /// Non-increasing weight, ties broken by label.
    #[default]
    ByWeight,
    /// The given label order; atoms not listed follow by weight.
    Declared(Vec<String>),
}

/// Lebesgue-to-target coupling with the default layout.
pub fn couple(target: &ProbabilityMeasure) -> OutcomeMap {
    couple_with(target, &Layout::ByWeight)
}

/// Builds the outcome map whose pushforward of Lebesgue measure on `[0, 1)`
/// is `target`.
///
/// Atoms take consecutive intervals from 0. The continuous part takes the
/// tail `[a, 1)`, where `a` is the atomic mass, and is transported through
/// the generalized quantile of its CDF: each CDF piece with positive slope
/// gets a sub-interval of the tail of length `w·ΔF` mapped affinely onto the
/// piece's `u`-range. Flat CDF pieces receive no λ at all.
pub fn couple_with(target: &ProbabilityMeasure, layout: &Layout) -> OutcomeMap {
    let mut order = target.atoms_by_weight();
    if let Layout::Declared(labels) = layout {
        let rank = |l: &str| labels.iter().position(|x| x == l).unwrap_or(usize::MAX);
        order.sort_by_key(|(l, _)| rank(l));
    }
    let mut cells = Vec::new();
    let mut cursor = Rational::zero();
    for (label, w) in order {
        if w.is_zero() {
            continue;
        }
        let end = &cursor + w;
        cells.push(MapCell {
            start: cursor,
            end: end.clone(),
            target: CellTarget::Outcome(label.to_string()),
        });
        cursor = end;
    }
    if let Some(c) = target.continuous_part() {
        let tail = cursor.clone();
        for piece in c.cdf.points().windows(2) {
            let ((x0, f0), (x1, f1)) = (&piece[0], &piece[1]);
            let df = f1 - f0;
            if df.is_zero() {
                continue;
            }
            let start = &tail + &c.weight * f0;
            let end = &tail + &c.weight * f1;
            let alpha = (x1 - x0) / (&c.weight * &df);
            let beta = x0 - &alpha * &start;
            cells.push(MapCell {
                start,
                end: end.clone(),
                target: CellTarget::Affine { alpha, beta },
            });
            cursor = end;
        }
    }
    debug_assert!(cursor.is_one());
    OutcomeMap::new(cells).expect("coupling covers [0, 1)")
}

/// Descriptor of the context space used by every built representation.
pub const LEBESGUE_CONTEXT: &str = "lebesgue[0,1]";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenRepresentation {
    states: Vec<String>,
    measurements: Vec<String>,
    /// `maps[state][measurement]`
    maps: Vec<Vec<OutcomeMap>>,
}

impl HiddenRepresentation {
    pub fn new(
        states: Vec<String>,
        measurements: Vec<String>,
        maps: Vec<Vec<OutcomeMap>>,
    ) -> Result<Self, RepError> {
        if maps.len() != states.len() || maps.iter().any(|row| row.len() != measurements.len()) {
            return Err(RepError::NotAPartition("map table shape does not match names".into()));
        }
        Ok(Self {
            states,
            measurements,
            maps,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn measurements(&self) -> &[String] {
        &self.measurements
    }

    pub fn map(&self, state: usize, measurement: usize) -> &OutcomeMap {
        &self.maps[state][measurement]
    }

    pub fn map_mut(&mut self, state: usize, measurement: usize) -> &mut OutcomeMap {
        &mut self.maps[state][measurement]
    }

    pub fn index(&self, state: &str, measurement: &str) -> Result<(usize, usize), RepError> {
        let p = self
            .states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| RepError::UnknownStateOrMeasurement(state.to_string()))?;
        let e = self
            .measurements
            .iter()
            .position(|m| m == measurement)
            .ok_or_else(|| RepError::UnknownStateOrMeasurement(measurement.to_string()))?;
        Ok((p, e))
    }

    /// `ΔΛ_{p,e}^B`. Labels that no cell produces (in particular labels
    /// outside the measurement's outcome space) contribute nothing.
    pub fn delta_lambda(&self, state: &str, measurement: &str, set: &OutcomeSet) -> Result<IntervalSet, RepError> {
        let (p, e) = self.index(state, measurement)?;
        Ok(self.maps[p][e].preimage(set))
    }

    /// `φ_λ(p)` for measurement `e`.
    pub fn phi(&self, state: &str, measurement: &str, lambda: &Rational) -> Result<Outcome, RepError> {
        let (p, e) = self.index(state, measurement)?;
        self.maps[p][e].eval(lambda)
    }

    pub fn phi_f64(&self, state: &str, measurement: &str, lambda: f64) -> Result<OutcomeF64, RepError> {
        let (p, e) = self.index(state, measurement)?;
        self.maps[p][e].eval_f64(lambda)
    }

    pub fn cell_count(&self) -> usize {
        self.maps.iter().flatten().map(|m| m.cells.len()).sum()
    }
}

/// Representation of a whole system: one coupling per table entry.
pub fn build(ms: &MeasurementSystem) -> HiddenRepresentation {
    build_with(ms, &Layout::ByWeight)
}

pub fn build_with(ms: &MeasurementSystem, layout: &Layout) -> HiddenRepresentation {
    let n_meas = ms.measurements().len();
    let maps: Vec<Vec<OutcomeMap>> = (0..ms.states().len())
        .into_par_iter()
        .map(|p| (0..n_meas).map(|e| couple_with(ms.measure(p, e), layout)).collect())
        .collect();
    HiddenRepresentation {
        states: ms.states().to_vec(),
        measurements: ms.measurements().iter().map(|m| m.name.clone()).collect(),
        maps,
    }
}

// ---- verification ----------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Number of equal sub-ranges of the continuous coordinate checked.
    pub grid: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { grid: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub state: String,
    pub measurement: String,
    pub set: String,
    #[serde(with = "rational::serde_text")]
    pub expected: Rational,
    #[serde(with = "rational::serde_text")]
    pub got: Rational,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub failures: usize,
    /// Structural problems (missing states, measurements).
    pub errors: Vec<String>,
}

impl VerificationReport {
    pub fn all_exact(&self) -> bool {
        self.failures == 0 && self.errors.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }
}

fn describe(set: &OutcomeSet) -> String {
    let mut parts: Vec<String> = set.labels.iter().cloned().collect();
    for c in set.range.cells() {
        parts.push(format!("u∈[{},{})", rational::format(&c.start), rational::format(&c.end)));
    }
    format!("{{{}}}", parts.join(","))
}

/// Outcome sets checked for one measurement: ∅, singletons, pairwise unions,
/// the full space, and for a continuous part a grid of sub-ranges.
pub fn verification_sets(m: &crate::msys::Measurement, opts: VerifyOptions) -> Vec<OutcomeSet> {
    let names: Vec<&str> = m.outcomes.iter().map(|o| o.name.as_str()).collect();
    let mut sets = vec![OutcomeSet::empty()];
    sets.extend(names.iter().map(|n| OutcomeSet::labels([*n])));
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            sets.push(OutcomeSet::labels([names[i], names[j]]));
        }
    }
    if m.continuous.is_some() && opts.grid > 0 {
        let g = opts.grid as i64;
        for k in 0..g {
            let cell = IntervalSet::interval(rational::ratio(k, g), rational::ratio(k + 1, g)).expect("grid");
            sets.push(OutcomeSet::range(cell));
            let prefix = IntervalSet::interval(Rational::zero(), rational::ratio(k + 1, g)).expect("grid");
            sets.push(OutcomeSet::range(prefix));
        }
        if let Some(first) = names.first() {
            let half = IntervalSet::interval(Rational::zero(), rational::ratio(1, 2)).expect("half");
            sets.push(OutcomeSet::labels([*first]).with_range(half));
        }
    }
    sets.push(m.full_space());
    sets
}

/// Checks `λ-measure(ΔΛ_{p,e}^B) = P_{p,e}(B)` exactly for the standard family of sets.
pub fn verify(rep: &HiddenRepresentation, ms: &MeasurementSystem, opts: VerifyOptions) -> VerificationReport {
    let mut report = VerificationReport::default();
    for (p, state) in ms.states().iter().enumerate() {
        for (e, meas) in ms.measurements().iter().enumerate() {
            let map = match rep.index(state, &meas.name) {
                Ok((rp, re)) => &rep.maps[rp][re],
                Err(err) => {
                    report.errors.push(err.to_string());
                    continue;
                }
            };
            for set in verification_sets(meas, opts) {
                let expected = ms.prob(p, e, &set);
                let got = map.preimage(&set).lebesgue();
                let ok = expected == got;
                if !ok {
                    report.failures += 1;
                }
                report.checks.push(Check {
                    state: state.clone(),
                    measurement: meas.name.clone(),
                    set: describe(&set),
                    expected,
                    got,
                    ok,
                });
            }
        }
    }
    report
}

// ---- representability criteria ---------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    /// Process exit code: 0 yes, 1 no, 3 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasurementFinding {
    pub measurement: String,
    pub classes: ClassSet,
    pub search: FiniteLambdaSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayoutEntry {
    pub source: measure::MeasureClass,
    pub atoms: Vec<IntervalSet>,
    pub continuous: IntervalSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub answer: Answer,
    pub target: String,
    pub delta_m: ClassSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<SetComparison>,
    /// Regions of `[0, 1)` realizing each class inside the target measure.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub layouts: Vec<LayoutEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_measurement: Vec<MeasurementFinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Can the system be represented with contexts distributed by `mu`?
pub fn check_criterion(ms: &MeasurementSystem, mu: &ProbabilityMeasure, budget: SearchBudget) -> CriterionReport {
    let delta = order::delta_m(ms);
    let target_class = measure::classify(mu);
    let targets: ClassSet = [target_class.clone()].into_iter().collect();
    let base = CriterionReport {
        answer: Answer::Unknown,
        target: format!("mu: {target_class}"),
        delta_m: delta.clone(),
        comparison: None,
        layouts: Vec::new(),
        per_measurement: Vec::new(),
        detail: None,
    };
    match order::leq_sets(&delta, &targets, budget) {
        Ok(cmp) => {
            let layouts = cmp
                .matches
                .iter()
                .filter_map(|m| {
                    let w = m.witness.as_ref()?;
                    let WitnessLayout { atoms, continuous } = w.layout(m.target.as_ref()?);
                    Some(LayoutEntry {
                        source: m.source.clone(),
                        atoms,
                        continuous,
                    })
                })
                .collect();
            CriterionReport {
                answer: if cmp.holds { Answer::Yes } else { Answer::No },
                comparison: Some(cmp),
                layouts,
                ..base
            }
        }
        Err(e) => CriterionReport {
            detail: Some(e.to_string()),
            ..base
        },
    }
}

/// Context space for the second criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaDescriptor {
    Continuum,
    Finite(usize),
}

/// Can the system be represented over the given context space, with a
/// context measure chosen separately for each measurement?
pub fn check_criterion_lambda(ms: &MeasurementSystem, lambda: LambdaDescriptor) -> CriterionReport {
    let delta = order::delta_m(ms);
    let n = match lambda {
        LambdaDescriptor::Continuum => {
            return CriterionReport {
                answer: Answer::Yes,
                target: "lambda: continuum".into(),
                delta_m: delta,
                comparison: None,
                layouts: Vec::new(),
                per_measurement: Vec::new(),
                detail: Some("every class embeds in the continuum; `build` gives the representation".into()),
            }
        }
        LambdaDescriptor::Finite(n) => n,
    };
    let mut findings = Vec::new();
    let mut any_no = false;
    let mut any_unknown = false;
    for (e, meas) in ms.measurements().iter().enumerate() {
        let classes = order::delta_m_for_measurement(ms, e);
        let search = match order::exists_mu_for_finite_lambda(&classes, n) {
            Ok(s) => s,
            // an atomless part cannot live on finitely many contexts
            Err(_) => FiniteLambdaSearch::NotFound,
        };
        match search {
            FiniteLambdaSearch::Found { .. } => {}
            FiniteLambdaSearch::NotFound => any_no = true,
            FiniteLambdaSearch::Unknown => any_unknown = true,
        }
        findings.push(MeasurementFinding {
            measurement: meas.name.clone(),
            classes,
            search: FiniteLambdaSummary::from(&search),
        });
    }
    let answer = if any_no {
        Answer::No
    } else if any_unknown {
        Answer::Unknown
    } else {
        Answer::Yes
    };
    CriterionReport {
        answer,
        target: format!("lambda: finite({n})"),
        delta_m: delta,
        comparison: None,
        layouts: Vec::new(),
        per_measurement: findings,
        detail: None,
    }
}

// ---- JSON form -----------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellTargetDoc {
    Outcome(String),
    Affine { affine: (RatText, RatText) },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellDoc {
    pub interval: (RatText, RatText),
    pub outcome: CellTargetDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDoc {
    pub state: String,
    pub measurement: String,
    pub cells: Vec<CellDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationDoc {
    #[serde(default = "one_u32")]
    pub version: u32,
    pub context: String,
    pub maps: Vec<MapDoc>,
}

fn one_u32() -> u32 {
    1
}

impl From<&HiddenRepresentation> for RepresentationDoc {
    fn from(rep: &HiddenRepresentation) -> Self {
        let mut maps = Vec::new();
        for (p, state) in rep.states.iter().enumerate() {
            for (e, meas) in rep.measurements.iter().enumerate() {
                let cells = rep.maps[p][e]
                    .cells
                    .iter()
                    .map(|c| CellDoc {
                        interval: (RatText(c.start.clone()), RatText(c.end.clone())),
                        outcome: match &c.target {
                            CellTarget::Outcome(l) => CellTargetDoc::Outcome(l.clone()),
                            CellTarget::Affine { alpha, beta } => CellTargetDoc::Affine {
                                affine: (RatText(alpha.clone()), RatText(beta.clone())),
                            },
                        },
                    })
                    .collect();
                maps.push(MapDoc {
                    state: state.clone(),
                    measurement: meas.clone(),
                    cells,
                });
            }
        }
        RepresentationDoc {
            version: 1,
            context: LEBESGUE_CONTEXT.to_string(),
            maps,
        }
    }
}

impl TryFrom<RepresentationDoc> for HiddenRepresentation {
    type Error = RepError;

    fn try_from(doc: RepresentationDoc) -> Result<Self, RepError> {
        if doc.context != LEBESGUE_CONTEXT {
            return Err(RepError::NotAPartition(format!("unsupported context {:?}", doc.context)));
        }
        let mut states: Vec<String> = Vec::new();
        let mut measurements: Vec<String> = Vec::new();
        for m in &doc.maps {
            if !states.contains(&m.state) {
                states.push(m.state.clone());
            }
            if !measurements.contains(&m.measurement) {
                measurements.push(m.measurement.clone());
            }
        }
        let mut slots: Vec<Vec<Option<OutcomeMap>>> = vec![vec![None; measurements.len()]; states.len()];
        for m in doc.maps {
            let p = states.iter().position(|s| s == &m.state).expect("collected");
            let e = measurements.iter().position(|s| s == &m.measurement).expect("collected");
            let cells = m
                .cells
                .into_iter()
                .map(|c| MapCell {
                    start: c.interval.0 .0,
                    end: c.interval.1 .0,
                    target: match c.outcome {
                        CellTargetDoc::Outcome(l) => CellTarget::Outcome(l),
                        CellTargetDoc::Affine { affine } => CellTarget::Affine {
                            alpha: affine.0 .0,
                            beta: affine.1 .0,
                        },
                    },
                })
                .collect();
            let map = OutcomeMap::new(cells)?;
            if slots[p][e].replace(map).is_some() {
                return Err(RepError::NotAPartition(format!(
                    "duplicate map for {:?} / {:?}",
                    m.state, m.measurement
                )));
            }
        }
        let mut maps = Vec::with_capacity(states.len());
        for (p, row) in slots.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (e, slot) in row.into_iter().enumerate() {
                out.push(slot.ok_or_else(|| {
                    RepError::UnknownStateOrMeasurement(format!("{} / {}", states[p], measurements[e]))
                })?);
            }
            maps.push(out);
        }
        Ok(HiddenRepresentation {
            states,
            measurements,
            maps,
        })
    }
}
