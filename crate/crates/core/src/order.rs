//! The embedding order on measure-space classes.
//!
//! `c1 ≤ c2` holds when a representative of `c1` maps into a representative of
//! `c2` by a one-to-one, measure-preserving σ-morphism. For the classes this
//! crate can represent (finitely many atoms plus an atomless remainder) such a
//! map is determined by where each source atom goes: a group of whole target
//! atoms plus a slice of the target's atomless mass. Atomless source mass can
//! only land in atomless target mass, and every target atom must be hit.
//! That reduces the decision to a bin-packing question: pack the target atoms
//! into bins sized by the source atoms, with the atomless remainder of the
//! target large enough to hold the atomless part of the source.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::interval::IntervalSet;
use crate::measure::{self, MeasureClass, ProbabilityMeasure};
use crate::msys::MeasurementSystem;
use crate::rational::{self, RatText, Rational};

/// Default bound on the number of atoms on either side of a search.
pub const DEFAULT_ATOM_BOUND: usize = 16;

/// Node budget for the exact common-refinement search.
const REFINEMENT_NODE_BUDGET: usize = 2_000_000;

/// Largest `n` for which the exact finite-context search runs.
pub const EXACT_SEARCH_MAX_ATOMS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("search budget exceeded: {atoms} atoms exceeds bound {bound}")]
    SearchBudgetExceeded { atoms: usize, bound: usize },
    #[error("class {0} is not purely atomic")]
    MixedOrContinuumClassUnsupported(MeasureClass),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_atoms: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_atoms: DEFAULT_ATOM_BOUND,
        }
    }
}

/// Where one source atom goes in the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Allocation {
    #[serde(with = "rational::serde_text")]
    pub source_mass: Rational,
    /// Indices into the target's canonical atom list.
    pub target_atoms: Vec<usize>,
    /// Mass taken from the target's atomless part.
    #[serde(with = "rational::serde_text")]
    pub continuous_slice: Rational,
}

/// Constructive evidence for `c1 ≤ c2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LeqWitness {
    /// Target is atomless: source atoms become consecutive intervals of
    /// `[0, 1)` and the source's atomless part is coupled onto the tail.
    IntervalLayout {
        atoms: Vec<IntervalSet>,
        continuous: IntervalSet,
    },
    /// Target has atoms: each source atom takes a group of target atoms plus
    /// an atomless slice; the source's atomless mass embeds in what is left.
    AtomPartition {
        allocations: Vec<Allocation>,
        #[serde(with = "rational::serde_text")]
        continuous_embedding: Rational,
    },
}

/// Per-source-atom regions of `[0, 1)` realizing a witness, with the target
/// laid out canonically (target atoms first, in class order, then its
/// atomless tail).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessLayout {
    pub atoms: Vec<IntervalSet>,
    pub continuous: IntervalSet,
}

impl LeqWitness {
    /// Exact mass accounting of the witness against the two classes.
    pub fn is_consistent(&self, source: &MeasureClass, target: &MeasureClass) -> bool {
        let src = source.atom_masses();
        match self {
            LeqWitness::IntervalLayout { atoms, continuous } => {
                if !matches!(target, MeasureClass::Continuum) || atoms.len() != src.len() {
                    return false;
                }
                let masses_ok = atoms.iter().zip(&src).all(|(s, m)| &s.lebesgue() == m)
                    && continuous.lebesgue() == source.continuous_mass();
                let mut seen = IntervalSet::empty();
                for s in atoms.iter().chain(std::iter::once(continuous)) {
                    if !seen.intersect(s).is_empty() {
                        return false;
                    }
                    seen = seen.union(s);
                }
                masses_ok && seen == IntervalSet::unit()
            }
            LeqWitness::AtomPartition {
                allocations,
                continuous_embedding,
            } => {
                let tgt = target.atom_masses();
                if allocations.len() != src.len() {
                    return false;
                }
                let mut used = vec![false; tgt.len()];
                let mut slices = Rational::zero();
                for (alloc, m) in allocations.iter().zip(&src) {
                    if &alloc.source_mass != m || alloc.continuous_slice.is_negative() {
                        return false;
                    }
                    let mut sum = alloc.continuous_slice.clone();
                    for &j in &alloc.target_atoms {
                        if j >= tgt.len() || used[j] {
                            return false;
                        }
                        used[j] = true;
                        sum += &tgt[j];
                    }
                    if &sum != m {
                        return false;
                    }
                    slices += &alloc.continuous_slice;
                }
                used.iter().all(|&u| u)
                    && continuous_embedding == &source.continuous_mass()
                    && slices + continuous_embedding == target.continuous_mass()
            }
        }
    }

    /// Concrete regions of `[0, 1)` following the witness.
    pub fn layout(&self, target: &MeasureClass) -> WitnessLayout {
        match self {
            LeqWitness::IntervalLayout { atoms, continuous } => WitnessLayout {
                atoms: atoms.clone(),
                continuous: continuous.clone(),
            },
            LeqWitness::AtomPartition {
                allocations,
                continuous_embedding,
            } => {
                let tgt = target.atom_masses();
                let mut starts = Vec::with_capacity(tgt.len());
                let mut cursor = Rational::zero();
                for m in &tgt {
                    starts.push(cursor.clone());
                    cursor += m;
                }
                let interval = |a: Rational, b: Rational| {
                    IntervalSet::interval(a, b).expect("layout stays inside [0, 1]")
                };
                let mut atoms = Vec::with_capacity(allocations.len());
                for alloc in allocations {
                    let mut region = IntervalSet::empty();
                    for &j in &alloc.target_atoms {
                        region = region.union(&interval(starts[j].clone(), &starts[j] + &tgt[j]));
                    }
                    let end = &cursor + &alloc.continuous_slice;
                    region = region.union(&interval(cursor.clone(), end.clone()));
                    cursor = end;
                    atoms.push(region);
                }
                let end = &cursor + continuous_embedding;
                WitnessLayout {
                    atoms,
                    continuous: interval(cursor, end),
                }
            }
        }
    }
}

/// Decides `source ≤ target`, returning a witness when it holds.
pub fn leq(
    source: &MeasureClass,
    target: &MeasureClass,
    budget: SearchBudget,
) -> Result<Option<LeqWitness>, OrderError> {
    let src = source.atom_masses();
    if let MeasureClass::Continuum = target {
        let mut cursor = Rational::zero();
        let mut atoms = Vec::with_capacity(src.len());
        for m in &src {
            let end = &cursor + m;
            atoms.push(IntervalSet::interval(cursor, end.clone()).expect("within [0, 1]"));
            cursor = end;
        }
        let continuous = IntervalSet::interval(cursor, Rational::one()).expect("within [0, 1]");
        return Ok(Some(LeqWitness::IntervalLayout { atoms, continuous }));
    }
    // Atomless source mass must fit in atomless target mass.
    if source.continuous_mass() > target.continuous_mass() {
        return Ok(None);
    }
    let tgt = target.atom_masses();
    for count in [src.len(), tgt.len()] {
        if count > budget.max_atoms {
            return Err(OrderError::SearchBudgetExceeded {
                atoms: count,
                bound: budget.max_atoms,
            });
        }
    }
    let Some(assignment) = pack(&tgt, &src) else {
        return Ok(None);
    };
    let mut allocations: Vec<Allocation> = src
        .iter()
        .map(|m| Allocation {
            source_mass: m.clone(),
            target_atoms: Vec::new(),
            continuous_slice: m.clone(),
        })
        .collect();
    for (j, &bin) in assignment.iter().enumerate() {
        allocations[bin].target_atoms.push(j);
        allocations[bin].continuous_slice -= &tgt[j];
    }
    Ok(Some(LeqWitness::AtomPartition {
        allocations,
        continuous_embedding: source.continuous_mass(),
    }))
}

/// Assigns every item to a bin without exceeding capacities. Items are tried
/// in order, bins in index order, so the result is the lexicographically
/// first assignment.
fn pack(items: &[Rational], capacities: &[Rational]) -> Option<Vec<usize>> {
    struct Search<'a> {
        items: &'a [Rational],
        remaining: Vec<Rational>,
        assignment: Vec<usize>,
        failed: HashSet<(usize, Vec<Rational>)>,
    }

    impl Search<'_> {
        fn run(&mut self, j: usize) -> bool {
            if j == self.items.len() {
                return true;
            }
            let mut key_caps = self.remaining.clone();
            key_caps.sort();
            let key = (j, key_caps);
            if self.failed.contains(&key) {
                return false;
            }
            let mut tried: Vec<Rational> = Vec::new();
            for bin in 0..self.remaining.len() {
                if self.remaining[bin] < self.items[j] || tried.contains(&self.remaining[bin]) {
                    continue;
                }
                tried.push(self.remaining[bin].clone());
                self.remaining[bin] -= &self.items[j];
                self.assignment.push(bin);
                if self.run(j + 1) {
                    return true;
                }
                self.assignment.pop();
                self.remaining[bin] += &self.items[j];
            }
            self.failed.insert(key);
            false
        }
    }

    let mut s = Search {
        items,
        remaining: capacities.to_vec(),
        assignment: Vec::with_capacity(items.len()),
        failed: HashSet::new(),
    };
    s.run(0).then_some(s.assignment)
}

/// Deduplicated set of classes, in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ClassSet {
    classes: Vec<MeasureClass>,
}

impl ClassSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, class: MeasureClass) {
        if !self.classes.contains(&class) {
            self.classes.push(class);
        }
    }

    pub fn classes(&self) -> &[MeasureClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

impl FromIterator<MeasureClass> for ClassSet {
    fn from_iter<I: IntoIterator<Item = MeasureClass>>(iter: I) -> Self {
        let mut set = ClassSet::new();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

/// Witness for one source class against the first target class that dominates it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassMatch {
    pub source: MeasureClass,
    pub target: Option<MeasureClass>,
    pub witness: Option<LeqWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetComparison {
    pub holds: bool,
    pub matches: Vec<ClassMatch>,
}

/// `N ≤ N'`: every class of `N` is dominated by some class of `N'`.
///
/// A budget overrun is only reported when no other target settles the class.
pub fn leq_sets(
    sources: &ClassSet,
    targets: &ClassSet,
    budget: SearchBudget,
) -> Result<SetComparison, OrderError> {
    let mut matches = Vec::with_capacity(sources.len());
    let mut holds = true;
    for source in sources.classes() {
        let mut found = None;
        let mut overrun = None;
        for target in targets.classes() {
            match leq(source, target, budget) {
                Ok(Some(w)) => {
                    found = Some((target.clone(), w));
                    break;
                }
                Ok(None) => {}
                Err(e) => overrun = Some(e),
            }
        }
        match found {
            Some((target, witness)) => matches.push(ClassMatch {
                source: source.clone(),
                target: Some(target),
                witness: Some(witness),
            }),
            None => {
                if let Some(e) = overrun {
                    return Err(e);
                }
                holds = false;
                matches.push(ClassMatch {
                    source: source.clone(),
                    target: None,
                    witness: None,
                });
            }
        }
    }
    Ok(SetComparison { holds, matches })
}

/// Classes of every table entry of the system.
pub fn delta_m(ms: &MeasurementSystem) -> ClassSet {
    ms.entries().map(|(_, _, m)| measure::classify(m)).collect()
}

/// Classes of the entries of a single measurement.
pub fn delta_m_for_measurement(ms: &MeasurementSystem, e: usize) -> ClassSet {
    (0..ms.states().len())
        .map(|p| measure::classify(ms.measure(p, e)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStage {
    /// Union of cumulative breakpoints of all classes.
    Breakpoints,
    /// Exhaustive common-refinement search.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteLambdaSearch {
    Found {
        mu: ProbabilityMeasure,
        stage: SearchStage,
    },
    /// The exact search ran to completion without a solution.
    NotFound,
    /// Breakpoint construction failed and the exact search did not run or ran
    /// out of budget.
    Unknown,
}

fn mu_from_masses(masses: &[Rational]) -> ProbabilityMeasure {
    let mut sorted = masses.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    ProbabilityMeasure::atomic(
        sorted
            .into_iter()
            .enumerate()
            .map(|(i, m)| (format!("l{i}"), m)),
    )
    .expect("refinement masses sum to one")
}

/// Looks for a measure on at most `n` context points dominating every class.
pub fn exists_mu_for_finite_lambda(
    classes: &ClassSet,
    n: usize,
) -> Result<FiniteLambdaSearch, OrderError> {
    let mut weights = Vec::with_capacity(classes.len());
    for c in classes.classes() {
        match c {
            MeasureClass::Finite(w) => weights.push(w.clone()),
            other => return Err(OrderError::MixedOrContinuumClassUnsupported(other.clone())),
        }
    }
    if n == 0 {
        return Ok(FiniteLambdaSearch::NotFound);
    }

    let gaps = breakpoint_gaps(&weights);
    if gaps.len() <= n {
        return Ok(FiniteLambdaSearch::Found {
            mu: mu_from_masses(&gaps),
            stage: SearchStage::Breakpoints,
        });
    }
    if n > EXACT_SEARCH_MAX_ATOMS {
        return Ok(FiniteLambdaSearch::Unknown);
    }
    let mut search = Refinement::new(&weights);
    for k in 1..=n {
        match search.find(k) {
            Some(cells) => {
                return Ok(FiniteLambdaSearch::Found {
                    mu: mu_from_masses(&cells),
                    stage: SearchStage::Exact,
                })
            }
            None if search.exhausted => return Ok(FiniteLambdaSearch::Unknown),
            None => {}
        }
    }
    Ok(FiniteLambdaSearch::NotFound)
}

/// Gaps between the union of cumulative sums of every class.
fn breakpoint_gaps(weights: &[Vec<Rational>]) -> Vec<Rational> {
    let mut cuts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for w in weights {
        let mut acc = Rational::zero();
        for x in w {
            acc += x;
            cuts.push(acc.clone());
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts.windows(2).map(|p| &p[1] - &p[0]).collect()
}

/// Search for a common refinement of several finite distributions with a
/// given number of cells. Each cell picks one atom from every class and takes
/// the smallest remaining mass among them.
struct Refinement {
    start: Vec<Vec<Rational>>,
    failed: HashSet<(usize, Vec<Vec<Rational>>)>,
    nodes: usize,
    exhausted: bool,
}

impl Refinement {
    fn new(weights: &[Vec<Rational>]) -> Self {
        Self {
            start: weights.to_vec(),
            failed: HashSet::new(),
            nodes: 0,
            exhausted: false,
        }
    }

    fn find(&mut self, cells: usize) -> Option<Vec<Rational>> {
        let mut state = self.start.clone();
        let mut out = Vec::new();
        self.dfs(&mut state, cells, &mut out).then_some(out)
    }

    fn dfs(&mut self, state: &mut Vec<Vec<Rational>>, left: usize, out: &mut Vec<Rational>) -> bool {
        let need = state
            .iter()
            .map(|w| w.iter().filter(|x| x.is_positive()).count())
            .max()
            .unwrap_or(0);
        if need == 0 {
            return true;
        }
        if need > left || self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > REFINEMENT_NODE_BUDGET {
            self.exhausted = true;
            return false;
        }
        let key = (left, state.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let choices: Vec<Vec<usize>> = state
            .iter()
            .map(|w| (0..w.len()).filter(|&i| w[i].is_positive()).collect())
            .collect();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let mass = pick
                .iter()
                .enumerate()
                .map(|(c, &k)| &state[c][choices[c][k]])
                .min()
                .cloned()
                .expect("at least one class");
            for (c, &k) in pick.iter().enumerate() {
                state[c][choices[c][k]] -= &mass;
            }
            out.push(mass.clone());
            if self.dfs(state, left - 1, out) {
                return true;
            }
            out.pop();
            for (c, &k) in pick.iter().enumerate() {
                state[c][choices[c][k]] += &mass;
            }
            if self.exhausted {
                return false;
            }
            // odometer over the cartesian product of choices
            let mut c = 0;
            loop {
                if c == pick.len() {
                    self.failed.insert(key);
                    return false;
                }
                pick[c] += 1;
                if pick[c] < choices[c].len() {
                    break;
                }
                pick[c] = 0;
                c += 1;
            }
        }
    }
}

/// JSON-friendly summary of a finite-context search.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteLambdaSummary {
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<SearchStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<RatText>>,
}

impl From<&FiniteLambdaSearch> for FiniteLambdaSummary {
    fn from(s: &FiniteLambdaSearch) -> Self {
        match s {
            FiniteLambdaSearch::Found { mu, stage } => FiniteLambdaSummary {
                outcome: "found",
                stage: Some(*stage),
                mu: Some(mu.atoms_by_weight().into_iter().map(|(_, w)| RatText(w.clone())).collect()),
            },
            FiniteLambdaSearch::NotFound => FiniteLambdaSummary {
                outcome: "not_found",
                stage: None,
                mu: None,
            },
            FiniteLambdaSearch::Unknown => FiniteLambdaSummary {
                outcome: "unknown",
                stage: None,
                mu: None,
            },
        }
    }
}

/// Counts of target atoms per source atom, useful for compact display.
pub fn allocation_summary(w: &LeqWitness) -> BTreeMap<usize, Vec<usize>> {
    match w {
        LeqWitness::IntervalLayout { atoms, .. } => (0..atoms.len()).map(|i| (i, Vec::new())).collect(),
        LeqWitness::AtomPartition { allocations, .. } => allocations
            .iter()
            .enumerate()
            .map(|(i, a)| (i, a.target_atoms.clone()))
            .collect(),
    }
}
