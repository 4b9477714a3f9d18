//! Arbitrary-order WENO reconstructions with Jiang-Shu, Yamaleev-Carpenter
//! and fast linear-cost smoothness indicators, plus a Shu-Osher
//! finite-difference solver for hyperbolic conservation laws.

pub mod coeffgen;
pub mod kernels;
pub mod models;
pub mod solver;

pub use coeffgen::{cached_table, generate_table, DiscretizationMode, ReconstructionTable};
pub use kernels::{OpCounter, Reconstructor, StencilWindow, WeightDesign, WenoVariant};
pub use models::{ConservationLaw, Direction, SplittingScheme};
pub use solver::{Boundaries, BoundaryCondition, DtRule, Field, Grid, RunResult, Solver, SolverConfig, SolverError};
