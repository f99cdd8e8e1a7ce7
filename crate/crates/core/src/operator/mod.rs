//! Hermitian operators on labelled tensor-product spaces.

pub mod classical;
mod hermitian;
mod io;
mod layout;
mod povm;

pub use classical::{binary_entropy, classical_kl, classical_tv, entropy_term};
pub use hermitian::{DensityState, HermitianOp, Schatten, MAX_DEFECT, STATE_TOL};
pub use io::OperatorJson;
pub use layout::{Cut, SystemLayout};
pub use povm::{apply_povm, MeasurementPOVM};
