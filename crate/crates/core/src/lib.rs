//! Hidden-measurement representations of measurement systems.
//!
//! A measurement system assigns a probability measure to every pair of a
//! state and a measurement. This crate decides whether such a system can be
//! reproduced by deterministic measurements whose outcome depends on a hidden
//! context `λ`, and builds such a representation explicitly with `λ` uniform
//! on `[0, 1]`: for every (state, measurement) it lays out a partition of
//! `[0, 1)` into outcome-labelled cells whose Lebesgue measures are exactly
//! the prescribed probabilities. Everything is verified in exact rational
//! arithmetic; floats appear only when sampling `λ` or reading quantum states.
//!
//! Modules, bottom-up:
//!
//! - [`rational`], [`interval`]: exact numbers and finite unions of `[a, b)`.
//! - [`measure`]: atoms plus piecewise-linear continuous parts, decomposition
//!   and classification into measure-space classes.
//! - [`order`]: the embedding order on classes, with witnesses.
//! - [`msys`]: measurement systems, validation and equivalence.
//! - [`hmsrep`]: the coupling, the builder, the context-set map and the
//!   verifier, and the representability criteria.
//! - [`quantum`]: Born-rule systems, unitary extension, spin-½ on the sphere.
//! - [`sim`]: seeded sampling of `λ`.
//! - [`document`] and [`cli`]: JSON documents and the command surface.

pub mod cli;
pub mod document;
pub mod hmsrep;
pub mod interval;
pub mod measure;
pub mod msys;
pub mod order;
pub mod quantum;
pub mod rational;
pub mod sim;

pub use hmsrep::{build, couple, HiddenRepresentation, OutcomeMap};
pub use interval::IntervalSet;
pub use measure::{classify, MeasureClass, OutcomeSet, PiecewiseLinearCdf, ProbabilityMeasure};
pub use msys::{validate, MeasurementSystem};
pub use rational::Rational;
