//! Discrete curvature, Poincaré–Hopf indices and Euler characteristics of
//! finite simple graphs.
//!
//! Every exact quantity (curvature, index expectations, survival integrals)
//! is computed through the [`Scalar`] abstraction, so the same code paths
//! run over exact rationals ([`Rational`]) or floats (`f64`, `f32`).
//! Monte Carlo estimators accumulate integers and only convert to floats
//! when a report is built.

pub mod clique;
pub mod corpus;
pub mod curvature;
pub mod error;
pub mod expectation;
pub mod generate;
pub mod graph;
pub mod io;
pub mod morse;
pub mod percolation;
pub mod scalar;
pub mod seeding;
pub mod stats;
pub mod verify;

pub use clique::{count_cliques, vertex_clique_degrees, CliqueCounter, FVector, VertexCliqueDegrees};
pub use curvature::{curvature, curvature_field, CurvatureField};
pub use error::{Error, Result};
pub use generate::{generate, GraphKind};
pub use graph::{Graph, VertexSet};
pub use morse::{IndexReport, VertexOrder};
pub use scalar::{Rational, Scalar};
pub use seeding::TrialPlan;

/// Curvature field with exact rational values.
pub type ExactCurvatureField = CurvatureField<Rational>;
/// Curvature field evaluated in double precision.
pub type CurvatureField64 = CurvatureField<f64>;
/// Curvature field evaluated in single precision.
pub type CurvatureField32 = CurvatureField<f32>;
/// Index report with exact symmetric indices.
pub type ExactIndexReport = IndexReport<Rational>;
/// Monte Carlo summary statistics in double precision.
pub type SampleStats64 = stats::SampleStats<f64>;
