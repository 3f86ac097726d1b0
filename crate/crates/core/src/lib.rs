//! Numerical toolkit for finite-dimensional quantum Markov semigroups in
//! detailed balance: generator construction and validation, quantum optimal
//! transport distances of order 1 and 2, the functional-inequality chain
//! (modified log-Sobolev, transportation cost, Poincaré), concentration
//! bounds for invariant states, and finite-blocklength parameter estimation.

pub mod error;
pub mod linalg;
pub mod rng;

pub mod entropy;
pub mod estimation;
pub mod generator;
pub mod inequalities;
pub mod io;
pub mod parallel;
pub mod reference;
pub mod wasserstein;

pub use error::{Error, Result};
pub use linalg::{CMat, DensityMatrix, HermitianOperator, Superoperator, C64};
