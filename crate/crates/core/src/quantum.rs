//! Finite-dimensional quantum systems: Born-rule probability tables, the
//! extension of a representation from one measurement to all others by
//! unitary conjugation, and spin-½ states on the Bloch sphere.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hmsrep::{couple_with, HiddenRepresentation, Layout, OutcomeMap};
use crate::measure::ProbabilityMeasure;
use crate::msys::{Measurement, MeasurementSystem, OutcomeLabel, SystemError};
use crate::rational::{self, RatText, Rational};

pub const NORM_TOLERANCE: f64 = 1e-12;
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("basis {0:?} is not orthonormal")]
    NotOrthonormal(String),
    #[error("basis {0:?} has repeated eigenvalues")]
    DegenerateEigenvalues(String),
    #[error("bases {0:?} and {1:?} cannot be paired")]
    BasisMismatch(String, String),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    /// Unit vector of dimension at least 2.
    pub fn new(components: Vec<Complex64>) -> Result<Self, QuantumError> {
        if components.len() < 2 {
            return Err(QuantumError::DimensionMismatch {
                expected: 2,
                found: components.len(),
            });
        }
        let norm2: f64 = components.iter().map(|c| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuantumError::NotNormalized(norm2));
        }
        Ok(Self(components))
    }

    /// Scales an arbitrary nonzero vector to unit norm.
    pub fn normalized(components: Vec<Complex64>) -> Result<Self, QuantumError> {
        let norm = components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QuantumError::NotNormalized(norm * norm));
        }
        Self::new(components.into_iter().map(|c| c / norm).collect())
    }

    pub fn from_real(components: &[f64]) -> Result<Self, QuantumError> {
        Self::new(components.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self(self.0.iter().map(|c| c * z).collect())
    }
}

/// Orthonormal eigenbasis with one outcome (label, eigenvalue) per vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    pub name: String,
    pub labels: Vec<String>,
    pub vectors: Vec<ComplexVector>,
    pub eigenvalues: Vec<Rational>,
}

impl MeasurementBasis {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        vectors: Vec<ComplexVector>,
        eigenvalues: Vec<Rational>,
    ) -> Result<Self, QuantumError> {
        let name = name.into();
        let n = vectors.first().map_or(0, ComplexVector::dim);
        for count in [vectors.len(), labels.len(), eigenvalues.len()] {
            if count != n {
                return Err(QuantumError::DimensionMismatch {
                    expected: n,
                    found: count,
                });
            }
        }
        for v in &vectors {
            if v.dim() != n {
                return Err(QuantumError::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                if (vectors[i].inner(&vectors[j]) - target).norm() > ORTHONORMAL_TOLERANCE {
                    return Err(QuantumError::NotOrthonormal(name));
                }
            }
        }
        for i in 0..n {
            if eigenvalues[i + 1..].contains(&eigenvalues[i]) {
                return Err(QuantumError::DegenerateEigenvalues(name));
            }
        }
        Ok(Self {
            name,
            labels,
            vectors,
            eigenvalues,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The computational basis `|0⟩, …, |n-1⟩` with eigenvalues `0, …, n-1`.
    pub fn standard(name: impl Into<String>, n: usize) -> Self {
        let vectors = (0..n)
            .map(|i| {
                ComplexVector(
                    (0..n)
                        .map(|j| if i == j { Complex64::one() } else { Complex64::zero() })
                        .collect(),
                )
            })
            .collect();
        Self {
            name: name.into(),
            labels: (0..n).map(|i| format!("o{i}")).collect(),
            vectors,
            eigenvalues: (0..n).map(|i| rational::int(i as i64)).collect(),
        }
    }

    fn measurement(&self) -> Measurement {
        Measurement {
            name: self.name.clone(),
            outcomes: self
                .labels
                .iter()
                .zip(&self.eigenvalues)
                .map(|(l, v)| OutcomeLabel {
                    name: l.clone(),
                    value: v.clone(),
                })
                .collect(),
            continuous: None,
        }
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMap {
    matrix: Vec<Vec<Complex64>>,
}

impl UnitaryMap {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Complex64::one() } else { Complex64::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    /// `U = Σ_i |e_i⟩⟨e0_i|`, so that `U e0_i = e_i`.
    pub fn between(from: &MeasurementBasis, to: &MeasurementBasis) -> Result<Self, QuantumError> {
        if from.dim() != to.dim() {
            return Err(QuantumError::BasisMismatch(from.name.clone(), to.name.clone()));
        }
        let n = from.dim();
        let mut matrix = vec![vec![Complex64::zero(); n]; n];
        for (a, b) in from.vectors.iter().zip(&to.vectors) {
            for (r, row) in matrix.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    *entry += b.0[r] * a.0[c].conj();
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn adjoint(&self) -> Self {
        let n = self.matrix.len();
        Self {
            matrix: (0..n)
                .map(|r| (0..n).map(|c| self.matrix[c][r].conj()).collect())
                .collect(),
        }
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Largest entry deviation of `U·U†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.matrix.len();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let dot: Complex64 = (0..n).map(|k| self.matrix[r][k] * self.matrix[c][k].conj()).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornOptions {
    /// Snap a probability to a nearby simple fraction when within this distance.
    pub tolerance: f64,
    pub denominator_bound: u64,
}

impl Default for BornOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            denominator_bound: 1_000_000,
        }
    }
}

/// `|⟨e_i|ψ⟩|²` for every basis vector.
pub fn born_probabilities(state: &ComplexVector, basis: &MeasurementBasis) -> Result<Vec<f64>, QuantumError> {
    if state.dim() != basis.dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: basis.dim(),
            found: state.dim(),
        });
    }
    Ok(basis.vectors.iter().map(|v| v.inner(state).norm_sqr()).collect())
}

/// Converts float probabilities to an exact row summing to one. Each value is
/// snapped to the best fraction within the denominator bound when that is
/// within tolerance, otherwise taken at its exact binary value; the largest
/// entry then absorbs the residual.
pub fn snap_row(probs: &[f64], opts: BornOptions) -> Vec<Rational> {
    let mut row: Vec<Rational> = probs
        .iter()
        .map(|&p| {
            let p = p.clamp(0.0, 1.0);
            match rational::best_approximation(p, opts.denominator_bound) {
                Some(r) if (rational::to_f64(&r) - p).abs() <= opts.tolerance => r,
                _ => rational::from_f64_exact(p).expect("finite probability"),
            }
        })
        .collect();
    let total = row.iter().fold(Rational::zero(), |acc, x| acc + x);
    if let Some(big) = (0..row.len()).max_by(|&a, &b| row[a].cmp(&row[b]).then(b.cmp(&a))) {
        row[big] += Rational::one() - total;
    }
    row
}

/// Exact Born measure of one state in one basis.
pub fn born_measure(state: &ComplexVector, basis: &MeasurementBasis, opts: BornOptions) -> Result<ProbabilityMeasure, QuantumError> {
    let row = snap_row(&born_probabilities(state, basis)?, opts);
    Ok(ProbabilityMeasure::atomic(basis.labels.iter().cloned().zip(row)).expect("renormalized row"))
}

/// Measurement system with `P_{ψ,e}(o_i) = |⟨e_i|ψ⟩|²`.
pub fn born_system(
    states: &[(String, ComplexVector)],
    bases: &[MeasurementBasis],
    opts: BornOptions,
) -> Result<MeasurementSystem, QuantumError> {
    let mut table = Vec::with_capacity(states.len());
    for (_, psi) in states {
        let row = bases
            .iter()
            .map(|b| born_measure(psi, b, opts))
            .collect::<Result<Vec<_>, _>>()?;
        table.push(row);
    }
    Ok(MeasurementSystem::from_parts(
        states.iter().map(|(n, _)| n.clone()).collect(),
        bases.iter().map(MeasurementBasis::measurement).collect(),
        table,
    )?)
}

/// A representation of the reference measurement `e0`, defined for every
/// state: the Born measure of the state in `e0` coupled to Lebesgue measure.
#[derive(Debug, Clone)]
pub struct ReferenceRepresentation {
    pub basis: MeasurementBasis,
    pub opts: BornOptions,
    pub layout: Layout,
}

impl ReferenceRepresentation {
    pub fn new(basis: MeasurementBasis) -> Self {
        Self {
            basis,
            opts: BornOptions::default(),
            layout: Layout::ByWeight,
        }
    }

    pub fn map_for(&self, state: &ComplexVector) -> Result<OutcomeMap, QuantumError> {
        Ok(couple_with(&born_measure(state, &self.basis, self.opts)?, &self.layout))
    }

    /// The reference maps for a list of named states.
    pub fn maps(&self, states: &[(String, ComplexVector)]) -> Result<Vec<(String, OutcomeMap)>, QuantumError> {
        states
            .iter()
            .map(|(n, psi)| Ok((n.clone(), self.map_for(psi)?)))
            .collect()
    }
}

/// Maps for measurement `e` obtained from the reference by conjugation:
/// `φ_{e,λ}(ψ) = U_e φ_{0,λ}(U_e⁻¹ ψ)`, with `U_e` sending the reference
/// eigenvectors to those of `e`. The context measure is unchanged.
pub fn unitary_extend(
    reference: &ReferenceRepresentation,
    e: &MeasurementBasis,
    states: &[(String, ComplexVector)],
) -> Result<Vec<(String, OutcomeMap)>, QuantumError> {
    let e0 = &reference.basis;
    if e.dim() != e0.dim() {
        return Err(QuantumError::BasisMismatch(e0.name.clone(), e.name.clone()));
    }
    let same_vectors = e.vectors == e0.vectors;
    let inverse = if same_vectors {
        None
    } else {
        Some(UnitaryMap::between(e0, e)?.adjoint())
    };
    let rename = |l: &str| {
        let i = e0.labels.iter().position(|x| x == l).expect("reference label");
        e.labels[i].clone()
    };
    states
        .iter()
        .map(|(name, psi)| {
            let pulled = match &inverse {
                Some(u_inv) => u_inv.apply(psi),
                None => psi.clone(),
            };
            let map = reference.map_for(&pulled)?;
            let map = if e.labels == e0.labels { map } else { map.relabel(rename) };
            Ok((name.clone(), map))
        })
        .collect()
}

/// Orthonormalizes `vectors` (modified Gram-Schmidt).
pub fn gram_schmidt(vectors: Vec<Vec<Complex64>>) -> Result<Vec<ComplexVector>, QuantumError> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for u in &out {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-9 {
            return Err(QuantumError::NotOrthonormal("linearly dependent input".into()));
        }
        out.push(v.into_iter().map(|c| c / norm).collect());
    }
    out.into_iter().map(ComplexVector::new).collect()
}

// ---- spin-½ --------------------------------------------------------------

/// Spin-½ state pointing along polar angle `theta` and azimuth `phi` (radians).
pub fn bloch_state(theta: f64, phi: f64) -> ComplexVector {
    ComplexVector(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

/// Spin measurement along the axis `(theta, phi)`; outcomes `up` (+1/2) and `down` (-1/2).
pub fn spin_basis(name: impl Into<String>, theta: f64, phi: f64) -> MeasurementBasis {
    let up = bloch_state(theta, phi);
    let down = ComplexVector(vec![
        Complex64::new((theta / 2.0).sin(), 0.0),
        -Complex64::from_polar((theta / 2.0).cos(), phi),
    ]);
    MeasurementBasis::new(
        name,
        vec!["up".into(), "down".into()],
        vec![up, down],
        vec![rational::ratio(1, 2), rational::ratio(-1, 2)],
    )
    .expect("spin basis is orthonormal")
}

fn pi_multiple(r: &Rational) -> f64 {
    rational::to_f64(r) * std::f64::consts::PI
}

/// Name of the measurement along an axis given in multiples of π.
pub fn axis_name(theta: &Rational, phi: &Rational) -> String {
    if theta == &Rational::zero() {
        "z".into()
    } else {
        format!("n({}pi,{}pi)", rational::format(theta), rational::format(phi))
    }
}

/// Spin-½ system on the Bloch sphere together with its representation.
///
/// States sit at polar angles `thetas` (multiples of π, azimuth 0). The
/// measurements are `z` followed by the listed axes (`(polar, azimuth)`, also
/// multiples of π). Each cell layout puts `up` first, so on every map the
/// split point between `up` and `down` is `P(up)`: contexts below it yield
/// `up`, the rest `down`.
pub fn aerts_sphere(
    thetas: &[Rational],
    axes: &[(Rational, Rational)],
    opts: BornOptions,
) -> Result<(MeasurementSystem, HiddenRepresentation), QuantumError> {
    let states: Vec<(String, ComplexVector)> = thetas
        .iter()
        .map(|t| (format!("theta={}pi", rational::format(t)), bloch_state(pi_multiple(t), 0.0)))
        .collect();
    let mut bases = vec![spin_basis("z", 0.0, 0.0)];
    for (t, p) in axes {
        let name = axis_name(t, p);
        if bases.iter().any(|b| b.name == name) {
            continue;
        }
        bases.push(spin_basis(name, pi_multiple(t), pi_multiple(p)));
    }
    let ms = born_system(&states, &bases, opts)?;
    let rep = crate::hmsrep::build_with(&ms, &Layout::Declared(vec!["up".into(), "down".into()]));
    Ok((ms, rep))
}

/// Where `up` ends on a spin map: the Lebesgue measure of its context set.
pub fn split_point(map: &OutcomeMap) -> Rational {
    map.preimage(&crate::measure::OutcomeSet::labels(["up"])).lebesgue()
}

// ---- JSON form -----------------------------------------------------------

pub type ComplexDoc = (f64, f64);

/// Named states.
pub type StateList = Vec<(String, ComplexVector)>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDoc {
    pub name: String,
    pub vector: Vec<ComplexDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisOutcomeDoc {
    pub name: String,
    pub value: RatText,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisDoc {
    pub name: String,
    pub outcomes: Vec<BasisOutcomeDoc>,
    pub vectors: Vec<Vec<ComplexDoc>>,
}

/// Quantum probability source of a system document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumDoc {
    pub states: Vec<StateDoc>,
    pub bases: Vec<BasisDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator_bound: Option<u64>,
}

fn to_vector(doc: &[ComplexDoc]) -> Result<ComplexVector, QuantumError> {
    ComplexVector::new(doc.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
}

fn from_vector(v: &ComplexVector) -> Vec<ComplexDoc> {
    v.0.iter().map(|c| (c.re, c.im)).collect()
}

impl QuantumDoc {
    pub fn options(&self) -> BornOptions {
        let d = BornOptions::default();
        BornOptions {
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            denominator_bound: self.denominator_bound.unwrap_or(d.denominator_bound),
        }
    }

    pub fn parse(&self) -> Result<(StateList, Vec<MeasurementBasis>), QuantumError> {
        let states = self
            .states
            .iter()
            .map(|s| Ok((s.name.clone(), to_vector(&s.vector)?)))
            .collect::<Result<Vec<_>, QuantumError>>()?;
        let bases = self
            .bases
            .iter()
            .map(|b| {
                MeasurementBasis::new(
                    b.name.clone(),
                    b.outcomes.iter().map(|o| o.name.clone()).collect(),
                    b.vectors.iter().map(|v| to_vector(v)).collect::<Result<_, _>>()?,
                    b.outcomes.iter().map(|o| o.value.0.clone()).collect(),
                )
            })
            .collect::<Result<Vec<_>, QuantumError>>()?;
        Ok((states, bases))
    }

    pub fn to_system(&self) -> Result<MeasurementSystem, QuantumError> {
        let (states, bases) = self.parse()?;
        born_system(&states, &bases, self.options())
    }

    pub fn from_parts(states: &[(String, ComplexVector)], bases: &[MeasurementBasis], opts: BornOptions) -> Self {
        QuantumDoc {
            states: states
                .iter()
                .map(|(n, v)| StateDoc {
                    name: n.clone(),
                    vector: from_vector(v),
                })
                .collect(),
            bases: bases
                .iter()
                .map(|b| BasisDoc {
                    name: b.name.clone(),
                    outcomes: b
                        .labels
                        .iter()
                        .zip(&b.eigenvalues)
                        .map(|(l, v)| BasisOutcomeDoc {
                            name: l.clone(),
                            value: RatText(v.clone()),
                        })
                        .collect(),
                    vectors: b.vectors.iter().map(from_vector).collect(),
                })
                .collect(),
            tolerance: Some(opts.tolerance),
            denominator_bound: Some(opts.denominator_bound),
        }
    }
}

/// Quantum document for the spin-½ sphere at the given angles.
pub fn aerts_document(thetas: &[Rational], axes: &[(Rational, Rational)]) -> QuantumDoc {
    let states: Vec<(String, ComplexVector)> = thetas
        .iter()
        .map(|t| (format!("theta={}pi", rational::format(t)), bloch_state(pi_multiple(t), 0.0)))
        .collect();
    let mut bases = vec![spin_basis("z", 0.0, 0.0)];
    for (t, p) in axes {
        let name = axis_name(t, p);
        if !bases.iter().any(|b| b.name == name) {
            bases.push(spin_basis(name, pi_multiple(t), pi_multiple(p)));
        }
    }
    QuantumDoc::from_parts(&states, &bases, BornOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use std::f64::consts::PI;

    fn z() -> MeasurementBasis {
        spin_basis("z", 0.0, 0.0)
    }

    fn x() -> MeasurementBasis {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        MeasurementBasis::new(
            "x",
            vec!["plus".into(), "minus".into()],
            vec![
                ComplexVector::from_real(&[s, s]).unwrap(),
                ComplexVector::from_real(&[s, -s]).unwrap(),
            ],
            vec![int(1), int(-1)],
        )
        .unwrap()
    }

    fn ket0() -> ComplexVector {
        ComplexVector::from_real(&[1.0, 0.0]).unwrap()
    }

    #[test]
    fn born_examples() {
        let zero = born_measure(&ket0(), &z(), BornOptions::default()).unwrap();
        assert_eq!(zero.atom_weight("up"), Some(&int(1)));
        assert_eq!(zero.atom_weight("down"), Some(&int(0)));

        let tilted = born_measure(&bloch_state(PI / 3.0, 0.0), &z(), BornOptions::default()).unwrap();
        assert_eq!(tilted.atom_weight("up"), Some(&ratio(3, 4)));
        assert_eq!(tilted.atom_weight("down"), Some(&ratio(1, 4)));

        let in_x = born_measure(&ket0(), &x(), BornOptions::default()).unwrap();
        assert_eq!(in_x.atom_weight("plus"), Some(&ratio(1, 2)));
        assert_eq!(in_x.atom_weight("minus"), Some(&ratio(1, 2)));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            ComplexVector::from_real(&[1.0, 1.0]),
            Err(QuantumError::NotNormalized(_))
        ));
        assert!(matches!(
            ComplexVector::from_real(&[1.0]),
            Err(QuantumError::DimensionMismatch { .. })
        ));
        let skew = MeasurementBasis::new(
            "skew",
            vec!["a".into(), "b".into()],
            vec![ket0(), bloch_state(PI / 4.0, 0.0)],
            vec![int(0), int(1)],
        );
        assert!(matches!(skew, Err(QuantumError::NotOrthonormal(_))));
        let degenerate = MeasurementBasis::new(
            "deg",
            vec!["a".into(), "b".into()],
            z().vectors,
            vec![int(0), int(0)],
        );
        assert!(matches!(degenerate, Err(QuantumError::DegenerateEigenvalues(_))));
        let three = ComplexVector::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            born_probabilities(&three, &z()),
            Err(QuantumError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn snapping_keeps_unsnappable_values_exact_and_sums_to_one() {
        let row = snap_row(&[0.123456789123, 0.876543210877], BornOptions::default());
        assert_eq!(row.iter().fold(int(0), |a, x| a + x), int(1));
        assert_eq!(
            snap_row(&[0.75000000000001, 0.24999999999999], BornOptions::default()),
            vec![ratio(3, 4), ratio(1, 4)]
        );
    }

    #[test]
    fn unitary_extension_examples() {
        let reference = ReferenceRepresentation::new(z());
        let states = vec![("zero".to_string(), ket0())];
        let same = unitary_extend(&reference, &z(), &states).unwrap();
        assert_eq!(same, reference.maps(&states).unwrap());

        let in_x = unitary_extend(&reference, &x(), &states).unwrap();
        assert_eq!(in_x[0].1.cells()[0].end, ratio(1, 2));
        assert!(in_x[0].1.cells().iter().all(|c| matches!(
            &c.target, crate::hmsrep::CellTarget::Outcome(l) if l == "plus" || l == "minus"
        )));

        let tilted = spin_basis("t", PI / 3.0, 0.0);
        let ext = unitary_extend(&reference, &tilted, &states).unwrap();
        assert_eq!(split_point(&ext[0].1), ratio(3, 4));

        let three = MeasurementBasis::standard("e3", 3);
        assert!(matches!(
            unitary_extend(&reference, &three, &states),
            Err(QuantumError::BasisMismatch(..))
        ));
    }

    #[test]
    fn unitary_between_bases_is_unitary() {
        let u = UnitaryMap::between(&z(), &spin_basis("n", 0.7, 1.9)).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        assert!(UnitaryMap::identity(3).unitarity_defect() == 0.0);
    }

    #[test]
    fn global_phase_is_invisible() {
        let psi = bloch_state(1.1, 0.4);
        let rotated = psi.scale(Complex64::from_polar(1.0, 2.3));
        let a = born_probabilities(&psi, &z()).unwrap();
        let b = born_probabilities(&rotated, &z()).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_split_points() {
        let thetas = [int(0), ratio(1, 3), ratio(1, 2), ratio(2, 3), int(1)];
        let (ms, rep) = aerts_sphere(&thetas, &[], BornOptions::default()).unwrap();
        let expected = [int(1), ratio(3, 4), ratio(1, 2), ratio(1, 4), int(0)];
        for (p, want) in expected.iter().enumerate() {
            assert_eq!(&split_point(rep.map(p, 0)), want);
        }
        assert_eq!(ms.measurements()[0].name, "z");
        let cells = rep.map(0, 0).cells();
        assert_eq!(cells.len(), 1);
    }

    #[test]
    fn quantum_document_round_trip() {
        let doc = aerts_document(&[ratio(1, 3)], &[(ratio(1, 2), int(0))]);
        let json = serde_json::to_string(&doc).unwrap();
        let back: QuantumDoc = serde_json::from_str(&json).unwrap();
        let ms = back.to_system().unwrap();
        assert_eq!(ms.measurements().len(), 2);
        assert_eq!(ms.measure(0, 0).atom_weight("up"), Some(&ratio(3, 4)));
    }
}
