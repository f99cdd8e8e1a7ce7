use crate::error::Result;
use crate::linalg::CMatrix;
use crate::operator::{Cut, DensityState};
use crate::scalar::Real;
use crate::solver::{solve, LinMap, SolverSettings, SpectrahedronProgram};

/// Robustness of entanglement with the separable set relaxed to PPT:
/// `min Tr τ` over `τ ⪰ 0`, `τ^Γ ⪰ 0`, `(ρ + τ)^Γ ⪰ 0`.
///
/// The relaxation can only lower the value, so this is a lower bound on the
/// true robustness and must not be fed into certified upper bounds.
pub fn ppt_relaxed_robustness<R: Real>(rho: &DensityState<R>, cut: &Cut, settings: &SolverSettings<R>) -> Result<R> {
    let n = rho.dim();
    let mask = cut.right_mask(rho.layout())?;
    let dims = rho.layout().dims();
    let pt = LinMap::partial_transpose(dims, mask);
    let rho_pt = pt.apply(rho.matrix());
    let mut p = SpectrahedronProgram::minimize();
    let tau = p.add_variable("tau", n);
    p.add_objective(tau, CMatrix::identity(n));
    p.add_nonneg(tau);
    p.add_psd(tau, pt.clone(), CMatrix::zeros(n, n));
    p.add_psd(tau, pt, rho_pt);
    let r = solve(&p, settings)?.require_optimal()?;
    Ok(r.primal_value.max(R::zero()))
}
