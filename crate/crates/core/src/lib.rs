//! Feed-forward network surrogates for steady-state AC circuit response.
//!
//! The crate pairs an exact complex-impedance mesh-analysis solver (the
//! ground-truth oracle and data generator) with a from-scratch sigmoid
//! network, a normalization pipeline, and an experiment harness covering six
//! circuit classes, an Ohm's-law study, an electrical/electronic amplifier
//! pair, and a design-space sweep.

pub mod circuit;
pub mod config;
pub mod error;
pub mod experiment;
pub mod mlp;
pub mod pipeline;
pub mod report;
pub mod solver;

pub use circuit::{ArchitectureSpec, BranchElement, CircuitClass, CircuitInstance};
pub use error::{Error, Result};
pub use mlp::{NetworkWeights, TrainConfig, TrainReport};
pub use pipeline::{Dataset, NormalizationContext, SamplerConfig, ValueRange};
pub use solver::{BranchResponse, MeshSolution};
