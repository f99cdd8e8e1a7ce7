//! Measured relative entropies and the scalar bounds that feed on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{binary_entropy, classical_kl, entropy_term, DensityState, MeasurementPOVM};
use crate::scalar::Real;

/// `D(m(ρ) ‖ m(σ))` in bits.
pub fn measured_relent<R: Real>(rho: &DensityState<R>, sigma: &DensityState<R>, m: &MeasurementPOVM<R>) -> Result<R> {
    let p = m.apply(rho)?;
    let q = m.apply(sigma)?;
    // Probabilities below round-off are treated as exact zeros.
    let clip = |v: Vec<R>| -> Vec<R> {
        v.into_iter().map(|x| if x.abs() <= R::tol(1e-14) { R::zero() } else { x }).collect()
    };
    Ok(classical_kl(&clip(p), &clip(q)).max(R::zero()))
}

/// Umegaki relative entropy `Tr ρ(log₂ρ − log₂σ)`, `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy<R: Real>(rho: &DensityState<R>, sigma: &DensityState<R>) -> Result<R> {
    rho.same_layout(sigma)?;
    let cutoff = R::tol(1e-12);
    let neg_entropy: R = rho.eigenvalues()?.into_iter().map(|l| -entropy_term(l.max(R::zero()))).sum();
    let (mu, v) = sigma.eigh()?;
    let rv = rho.matrix().matmul(&v);
    let mut cross = R::zero();
    for (j, &m) in mu.iter().enumerate() {
        // ⟨v_j|ρ|v_j⟩
        let w: R = (0..v.rows()).map(|i| (v[(i, j)].conj() * rv[(i, j)]).re).sum();
        if w <= cutoff {
            continue;
        }
        if m <= cutoff {
            return Ok(R::infinity());
        }
        cross += w * m.log2();
    }
    Ok((neg_entropy - cross).max(R::zero()))
}

/// `x²/(2 ln 2)` for a trace-norm value `x ∈ [0, 2]`.
pub fn pinsker_lower<R: Real>(norm_value: R) -> Result<R> {
    let slack = R::tol(1e-9);
    if !(norm_value >= -slack && norm_value <= R::lit(2.0) + slack) {
        return Err(Error::InvalidArgument(format!("norm value {norm_value} outside [0, 2]")));
    }
    let x = norm_value.max(R::zero()).min(R::lit(2.0));
    Ok(x * x / (R::lit(2.0) * R::lit(2.0).ln()))
}

/// Continuity estimate `κ ε log₂d + g(ε)` with `κ = 10` and
/// `g(ε) = 5ε log₂3 + 2ν(2ε) + h(ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityBound {
    pub kappa: f64,
    pub epsilon: f64,
    pub d: usize,
    pub value: f64,
    /// False when `ε > 1/(2e)`, outside the range where the estimate is proven.
    pub valid: bool,
}

pub const CONTINUITY_KAPPA: f64 = 10.0;

pub fn continuity_bound(epsilon: f64, d: usize) -> Result<ContinuityBound> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("continuity parameter {epsilon} outside [0, 1]")));
    }
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let g = 5.0 * epsilon * 3f64.log2() + 2.0 * entropy_term(2.0 * epsilon) + binary_entropy(epsilon);
    let value = CONTINUITY_KAPPA * epsilon * (d as f64).log2() + g;
    let valid = epsilon <= 1.0 / (2.0 * std::f64::consts::E);
    Ok(ContinuityBound { kappa: CONTINUITY_KAPPA, epsilon, d, value, valid })
}

/// Relative-entropy cap `log₂(1+ε)` implied by `ρ ≤ (1+ε)σ` in a measurement order.
pub fn order_relent_bound(epsilon: f64) -> Result<f64> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("order parameter {epsilon} must be finite and non-negative")));
    }
    Ok(epsilon.ln_1p() / std::f64::consts::LN_2)
}

/// Restricted trace-distance cap `ε/(1−ε/2)`, for `0 ≤ ε < 1`.
pub fn order_trace_bound(epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("order parameter {epsilon} outside [0, 1)")));
    }
    Ok(epsilon / (1.0 - epsilon / 2.0))
}
