//! Hybrid kinetic/fluid solver for the ES-BGK model in two space and two
//! velocity dimensions.
//!
//! The domain is split cell by cell into an Euler region and a kinetic
//! region using moment-realizability breakdown indicators. Both regions
//! are advanced with the same CWENO3 finite-volume discretization and an
//! ARS(2,3,3) IMEX Runge-Kutta pair, exchanging buffer data after every
//! stage so that the coupled scheme keeps its temporal order.

pub mod config;
pub mod convergence;
pub mod domain;
pub mod error;
pub mod imex;
pub mod indicators;
pub mod linalg;
pub mod mesh;
pub mod moments;
pub mod output;
pub mod riemann;
pub mod scalar;
pub mod scenarios;
pub mod solver;
pub mod spatial;

pub use config::{ScenarioConfig, ScenarioId, SolverMode};
pub use error::{Error, Result};
pub use scalar::Real;
pub use solver::Simulation;

pub type Simulation64 = solver::Simulation<f64>;
pub type Simulation32 = solver::Simulation<f32>;
pub type SpatialGrid64 = mesh::SpatialGrid<f64>;
pub type VelocityGrid64 = mesh::VelocityGrid<f64>;
pub type KineticField64 = mesh::KineticField<f64>;
pub type MacroField64 = mesh::MacroField<f64>;
