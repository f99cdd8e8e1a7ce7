//! Dense complex linear algebra.

mod eigen;
mod matrix;
mod qr;
pub mod tensor;

pub use eigen::{eigh, eigvalsh, spectral_map};
pub use matrix::CMatrix;
pub use qr::qr;
