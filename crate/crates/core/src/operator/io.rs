use std::path::Path;

use serde::{Deserialize, Serialize};

use super::hermitian::HermitianOp;
use super::layout::SystemLayout;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cx, Real};

/// On-disk matrix format: layout plus row-major real and imaginary parts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub layout: SystemLayout,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl<R: Real> From<&HermitianOp<R>> for OperatorJson {
    fn from(op: &HermitianOp<R>) -> Self {
        let n = op.dim();
        let m = op.matrix();
        Self {
            layout: op.layout().clone(),
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re.as_f64()).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im.as_f64()).collect()).collect(),
        }
    }
}

impl OperatorJson {
    pub fn into_operator<R: Real>(self) -> Result<HermitianOp<R>> {
        let n = self.re.len();
        if self.im.len() != n || self.re.iter().chain(&self.im).any(|row| row.len() != n) {
            return Err(Error::Dimension("re/im must be square arrays of equal size".into()));
        }
        let m = CMatrix::from_fn(n, n, |i, j| cx(R::lit(self.re[i][j]), R::lit(self.im[i][j])));
        HermitianOp::new(self.layout, m)
    }
}

impl<R: Real> HermitianOp<R> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&OperatorJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<OperatorJson>(s)?.into_operator()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
