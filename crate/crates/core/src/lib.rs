//! Exact symbolic engine for the quantum superplane, its two families of
//! differential calculi and the graded Hopf structures on them.

pub mod algebra;
pub mod calculus;
pub mod cli;
pub mod coeffs;
pub mod forms;
pub mod hopf;
pub mod random;
pub mod report;
pub mod rmatrix;
