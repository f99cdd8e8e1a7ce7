pub mod analysis;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod operator;
pub mod restricted;
pub mod scalar;
pub mod solver;
pub mod zoo;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type HermitianOp64 = operator::HermitianOp<f64>;
pub type HermitianOp32 = operator::HermitianOp<f32>;
pub type DensityState64 = operator::DensityState<f64>;
pub type DensityState32 = operator::DensityState<f32>;
pub type Povm64 = operator::MeasurementPOVM<f64>;
pub type Povm32 = operator::MeasurementPOVM<f32>;
pub type PrivateState64 = zoo::PrivateState<f64>;
pub type PrivateState32 = zoo::PrivateState<f32>;
pub type Program64 = solver::SpectrahedronProgram<f64>;
pub type Program32 = solver::SpectrahedronProgram<f32>;
