//! Construction and verification of small time-periodic solutions
//! (discrete breathers) of the nonlinear Klein-Gordon lattice
//!
//! ```text
//! u_tt + H u + m^2 u + u^p = 0,    H = -Δ + V  on  Z
//! ```
//!
//! The pipeline is: build `H` on a truncated lattice ([`lattice`]),
//! certify its single discrete eigenvalue and the nonresonance of all
//! harmonics ([`spectral`]), solve the harmonic-series fixed-point
//! problem ([`harmonics`], [`solver`]), then check the result against the
//! lattice equation itself ([`dynamics`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod harmonics;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use harmonics::{HarmonicSeries, SeriesNorm};
pub use lattice::{Grid, Potential, TridiagonalOperator};
pub use solver::{BreatherSolution, ModelParams, SolverOptions};
pub use spectral::{DecayReport, EigenPair, NonresonanceReport};
