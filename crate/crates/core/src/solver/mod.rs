//! Linear optimization over spectrahedra.

mod admm;
mod maps;
mod program;

pub use admm::{solve, SolveReport, SolveStatus, SolverSettings};
pub use maps::LinMap;
pub use program::{Equality, PsdConstraint, Sense, SpectrahedronProgram, VarId, Variable};
