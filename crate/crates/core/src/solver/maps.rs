use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{tensor, CMatrix};
use crate::scalar::{creal, Real};

/// Real-linear map between spaces of Hermitian matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "R: Real")]
pub enum LinMap<R> {
    Identity,
    Scale(R),
    /// Transpose of the masked factors.
    PartialTranspose { dims: Vec<usize>, mask: Vec<bool> },
    /// Trace over the masked factors.
    PartialTrace { dims: Vec<usize>, mask: Vec<bool> },
    /// `X -> V X V†`.
    Conjugate(CMatrix<R>),
    /// `X -> Tr(C X)` as a 1x1 matrix.
    Functional(CMatrix<R>),
    /// Applied left to right.
    Compose(Vec<LinMap<R>>),
}

impl<R: Real> LinMap<R> {
    pub fn partial_transpose(dims: Vec<usize>, mask: Vec<bool>) -> Self {
        Self::PartialTranspose { dims, mask }
    }

    pub fn partial_trace(dims: Vec<usize>, mask: Vec<bool>) -> Self {
        Self::PartialTrace { dims, mask }
    }

    /// Output dimension for an input of dimension `n`, or an error if the shapes do not fit.
    pub fn output_dim(&self, n: usize) -> Result<usize> {
        let check_dims = |dims: &[usize], mask: &[bool]| -> Result<()> {
            if dims.iter().product::<usize>() != n || dims.len() != mask.len() {
                return Err(Error::Dimension(format!("factor dims {dims:?} do not fit dimension {n}")));
            }
            Ok(())
        };
        match self {
            Self::Identity | Self::Scale(_) => Ok(n),
            Self::PartialTranspose { dims, mask } => {
                check_dims(dims, mask)?;
                Ok(n)
            }
            Self::PartialTrace { dims, mask } => {
                check_dims(dims, mask)?;
                Ok(dims.iter().zip(mask).filter(|(_, &m)| !m).map(|(d, _)| d).product())
            }
            Self::Conjugate(v) => {
                if v.cols() != n {
                    return Err(Error::Dimension(format!("conjugation by {}x{} on dimension {n}", v.rows(), v.cols())));
                }
                Ok(v.rows())
            }
            Self::Functional(c) => {
                if c.rows() != n || c.cols() != n {
                    return Err(Error::Dimension(format!("functional of size {} on dimension {n}", c.rows())));
                }
                Ok(1)
            }
            Self::Compose(maps) => maps.iter().try_fold(n, |k, m| m.output_dim(k)),
        }
    }

    pub fn apply(&self, x: &CMatrix<R>) -> CMatrix<R> {
        match self {
            Self::Identity => x.clone(),
            Self::Scale(c) => x.scale(*c),
            Self::PartialTranspose { dims, mask } => tensor::partial_transpose(x, dims, mask),
            Self::PartialTrace { dims, mask } => tensor::partial_trace(x, dims, mask),
            Self::Conjugate(v) => v.matmul(x).matmul_adj(v),
            Self::Functional(c) => CMatrix::from_vec(1, 1, vec![creal(c.hs_inner(x))]),
            Self::Compose(maps) => maps.iter().fold(x.clone(), |acc, m| m.apply(&acc)),
        }
    }

    pub fn adjoint(&self, y: &CMatrix<R>) -> CMatrix<R> {
        match self {
            Self::Identity => y.clone(),
            Self::Scale(c) => y.scale(*c),
            Self::PartialTranspose { dims, mask } => tensor::partial_transpose(y, dims, mask),
            Self::PartialTrace { dims, mask } => tensor::partial_trace_adjoint(y, dims, mask),
            Self::Conjugate(v) => v.adjoint().matmul(y).matmul(v),
            Self::Functional(c) => c.scale(y[(0, 0)].re),
            Self::Compose(maps) => maps.iter().rev().fold(y.clone(), |acc, m| m.adjoint(&acc)),
        }
    }

    /// `κ` with `M†∘M = κ·id`, if the map is a scaled isometry on dimension `n`.
    pub fn isometry_scale(&self, n: usize) -> Result<R> {
        match self {
            Self::Identity | Self::PartialTranspose { .. } => Ok(R::one()),
            Self::Scale(c) => Ok(*c * *c),
            Self::Conjugate(v) => {
                let gram = v.adjoint().matmul(v);
                let kappa = gram.trace().re / R::from_count(n);
                let dev = (&gram - &CMatrix::identity(n).scale(kappa)).max_abs();
                if !(kappa > R::zero()) || dev > R::tol(1e-10) * (R::one() + kappa) {
                    return Err(Error::Solver("conjugation in a PSD constraint must be a scaled isometry".into()));
                }
                Ok(kappa * kappa)
            }
            Self::Compose(maps) => {
                let mut k = n;
                let mut kappa = R::one();
                for m in maps {
                    kappa *= m.isometry_scale(k)?;
                    k = m.output_dim(k)?;
                }
                Ok(kappa)
            }
            Self::PartialTrace { .. } | Self::Functional(_) => {
                Err(Error::Solver("PSD constraints accept only scaled isometries".into()))
            }
        }
    }
}
