use super::hermitian::{DensityState, HermitianOp, STATE_TOL};
use super::layout::SystemLayout;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Positive operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPOVM<R> {
    layout: SystemLayout,
    elements: Vec<HermitianOp<R>>,
}

impl<R: Real> MeasurementPOVM<R> {
    pub fn new(elements: Vec<HermitianOp<R>>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let layout = first.layout().clone();
        let tol = R::tol(STATE_TOL);
        let mut sum = HermitianOp::zeros(layout.clone());
        for (i, e) in elements.iter().enumerate() {
            if e.layout() != &layout {
                return Err(Error::InvalidPovm(format!("element {i} has layout {}", e.layout())));
            }
            let min = e.min_eigenvalue()?;
            if !(min >= -tol) {
                return Err(Error::InvalidPovm(format!("element {i} has eigenvalue {min}")));
            }
            sum = &sum + e;
        }
        let dev = (sum.matrix() - HermitianOp::identity(layout.clone()).matrix()).max_abs();
        if !(dev <= tol) {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {dev}")));
        }
        Ok(Self { layout, elements })
    }

    /// Two-outcome measurement `(m, 𝟙 − m)`.
    pub fn binary(m: HermitianOp<R>) -> Result<Self> {
        let rest = &HermitianOp::identity(m.layout().clone()) - &m;
        Self::new(vec![m, rest])
    }

    /// Projective measurement in the computational basis.
    pub fn computational(layout: SystemLayout) -> Self {
        let n = layout.total_dim();
        let elements = (0..n)
            .map(|i| {
                let mut diag = vec![R::zero(); n];
                diag[i] = R::one();
                HermitianOp::from_real_diag(layout.clone(), &diag).expect("diagonal is Hermitian")
            })
            .collect();
        Self { layout, elements }
    }

    /// Single-outcome measurement `{𝟙}`.
    pub fn trivial(layout: SystemLayout) -> Self {
        Self { elements: vec![HermitianOp::identity(layout.clone())], layout }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn elements(&self) -> &[HermitianOp<R>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `𝟙_prefix ⊗ T_i` for every element.
    pub fn extend_left(&self, prefix: &SystemLayout) -> Result<Self> {
        let id = HermitianOp::identity(prefix.clone());
        let elements = self.elements.iter().map(|e| id.tensor(e)).collect::<Result<Vec<_>>>()?;
        Ok(Self { layout: prefix.concat(&self.layout)?, elements })
    }

    /// `T_i ⊗ 𝟙_suffix` for every element.
    pub fn extend_right(&self, suffix: &SystemLayout) -> Result<Self> {
        let id = HermitianOp::identity(suffix.clone());
        let elements = self.elements.iter().map(|e| e.tensor(&id)).collect::<Result<Vec<_>>>()?;
        Ok(Self { layout: self.layout.concat(suffix)?, elements })
    }

    /// `Tr(T_i x)` for arbitrary Hermitian `x`.
    pub fn expectations(&self, x: &HermitianOp<R>) -> Result<Vec<R>> {
        if x.layout() != &self.layout {
            return Err(Error::Dimension(format!("POVM on {} applied to {}", self.layout, x.layout())));
        }
        Ok(self.elements.iter().map(|e| e.inner(x)).collect())
    }

    /// Outcome distribution `p_i = Tr(T_i ϱ)`.
    pub fn apply(&self, state: &DensityState<R>) -> Result<Vec<R>> {
        self.expectations(state.op())
    }
}

/// Outcome distribution of `m` on `state`.
pub fn apply_povm<R: Real>(m: &MeasurementPOVM<R>, state: &DensityState<R>) -> Result<Vec<R>> {
    m.apply(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::hermitian::DensityState;

    #[test]
    fn computational_povm_on_maximally_mixed_is_uniform() {
        let layout = SystemLayout::single("A", 5).unwrap();
        let m = MeasurementPOVM::<f64>::computational(layout.clone());
        let p = apply_povm(&m, &DensityState::maximally_mixed(layout)).unwrap();
        assert!(p.iter().all(|&x| (x - 0.2).abs() < 1e-15));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_incomplete_or_negative_elements() {
        let layout = SystemLayout::single("A", 2).unwrap();
        let half = HermitianOp::<f64>::identity(layout.clone()).scale(0.5);
        assert!(MeasurementPOVM::new(vec![half.clone()]).is_err());
        let neg = HermitianOp::from_real_diag(layout.clone(), &[1.5, 0.5]).unwrap();
        assert!(MeasurementPOVM::binary(neg).is_err());
        assert!(MeasurementPOVM::new(vec![half.clone(), half]).is_ok());
    }

    #[test]
    fn layout_mismatch_is_error() {
        let m = MeasurementPOVM::<f64>::trivial(SystemLayout::single("A", 2).unwrap());
        let s = DensityState::maximally_mixed(SystemLayout::single("B", 2).unwrap());
        assert!(apply_povm(&m, &s).is_err());
    }
}
