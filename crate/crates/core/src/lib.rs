//! Numerical toolkit for predictive-power arguments about quantum theory:
//! chained correlation measures, hidden-variable model checking over finite
//! probability tables, embezzlement-based measurement constructions, and
//! wave-function onticity extraction.
//!
//! The crate is organized around a few carriers:
//!
//! - [`dist::Dist`], [`table::JointTable`], [`table::CondTable`] — finite
//!   discrete probability, the language every theory's predictions are
//!   written in;
//! - [`quantum`] — states, POVMs, Born-rule predictions, Schmidt
//!   decompositions, measurement purification;
//! - [`chained`] — the cyclic correlation measure `I_N` and the quantum
//!   strategy achieving `2N sin^2(pi/4N)`;
//! - [`model`] — deterministic strategies, local-polytope membership by
//!   linear programming, local causality, and the bound
//!   `<D(P_{X|abz}, uniform)>_z <= I_N / 2`;
//! - [`leggett`] — carried-vector outcome rules and their exclusion;
//! - [`embezzle`] — harmonic embezzling states and the controlled-isometry
//!   construction reducing arbitrary bipartite states to qubit pairs;
//! - [`onticity`] — deciding whether the quantum state is a function of an
//!   alternative theory's parameter.
//!
//! All numerics are generic over a scalar implementing [`real::Real`]
//! (`f32` or `f64`); the `*64` aliases below fix `f64`, which is what the
//! quoted tolerances and the acceptance suite assume.

pub mod causal;
pub mod chained;
pub mod compat;
pub mod dist;
pub mod embezzle;
pub mod error;
pub mod io;
pub mod leggett;
pub mod model;
pub mod nosig;
pub mod onticity;
pub mod quantum;
pub mod real;
pub mod sample;
pub mod selftest;
pub mod simplex;
pub mod table;

pub use error::{Error, Result};
pub use real::{Cplx, Real};

/// `f64` aliases for the main carrier types.
pub type Dist64 = dist::Dist<f64>;
pub type JointTable64 = table::JointTable<f64>;
pub type CondTable64 = table::CondTable<f64>;
pub type PureState64 = quantum::PureState<f64>;
pub type DensityOperator64 = quantum::DensityOperator<f64>;
pub type Povm64 = quantum::Povm<f64>;
pub type Extension64 = model::Extension<f64>;
pub type LocalModel64 = model::LocalModel<f64>;
pub type EmbezzlingState64 = embezzle::EmbezzlingState<f64>;
pub type Construction64 = embezzle::Construction<f64>;
pub type OnticJoint64 = onticity::OnticJoint<f64>;
