use crate::error::Result;
use crate::linalg::CMatrix;
use crate::operator::{Cut, HermitianOp};
use crate::scalar::Real;
use crate::solver::{solve, LinMap, SolveReport, SolverSettings, SpectrahedronProgram};

/// PPT norm with its optimizer and a certified interval around the solver value.
#[derive(Clone, Debug)]
pub struct PptNorm<R> {
    /// Solver primal value.
    pub value: R,
    /// `Tr(T̃X)` for the optimizer rescaled into `B_∞ ∩ B_∞^Γ`.
    pub lower: R,
    /// `‖Y‖₁ + ‖(X−Y)^Γ‖₁` for `Y` read off the dual solution.
    pub upper: R,
    /// Optimal dual operator `T` with `±T ⪯ 𝟙`, `±T^Γ ⪯ 𝟙`.
    pub witness: HermitianOp<R>,
    pub iterations: usize,
    pub gap: R,
    pub primal_residual: R,
}

/// `max Tr(TX)` subject to `±T ⪯ 𝟙` and `±T^Γ ⪯ 𝟙`, `Γ` on the right side of `cut`.
pub fn ppt_norm_program<R: Real>(x: &HermitianOp<R>, cut: &Cut) -> Result<SpectrahedronProgram<R>> {
    let mask = cut.right_mask(x.layout())?;
    let dims = x.layout().dims();
    let mut p = SpectrahedronProgram::maximize();
    let t = p.add_variable("T", x.dim());
    p.add_objective(t, x.matrix().clone());
    p.add_upper_bound(t, LinMap::Identity, R::one())?;
    p.add_lower_bound(t, LinMap::Identity, R::one())?;
    let pt = LinMap::partial_transpose(dims, mask);
    p.add_upper_bound(t, pt.clone(), R::one())?;
    p.add_lower_bound(t, pt, R::one())?;
    Ok(p)
}

/// PPT-restricted norm of `x` across `cut`.
pub fn ppt_norm<R: Real>(x: &HermitianOp<R>, cut: &Cut) -> Result<R> {
    Ok(ppt_norm_certified(x, cut, &SolverSettings::default())?.value)
}

pub fn ppt_norm_certified<R: Real>(
    x: &HermitianOp<R>,
    cut: &Cut,
    settings: &SolverSettings<R>,
) -> Result<PptNorm<R>> {
    let prog = ppt_norm_program(x, cut)?;
    let report = solve(&prog, settings)?.require_optimal()?;
    certify(x, cut, report)
}

fn certify<R: Real>(x: &HermitianOp<R>, cut: &Cut, report: SolveReport<R>) -> Result<PptNorm<R>> {
    let layout = x.layout().clone();
    let t = HermitianOp::from_parts(layout.clone(), report.primal_solution[0].clone());
    let t_pt = t.partial_transpose(&cut.right)?;
    let scale = t
        .schatten_norm(crate::operator::Schatten::Inf)?
        .max(t_pt.schatten_norm(crate::operator::Schatten::Inf)?)
        .max(R::one());
    let witness = t.scale(R::one() / scale);
    let lower = witness.inner(x);

    // Duals in constraint order: 𝟙 − T, 𝟙 + T, 𝟙 − T^Γ, 𝟙 + T^Γ.
    let z = &report.psd_duals;
    let diff: CMatrix<R> = &z[2] - &z[3];
    let diff_pt = HermitianOp::from_parts(layout, diff).partial_transpose(&cut.right)?;
    let y = x - &diff_pt;
    let upper = y.trace_norm()? + (x - &y).partial_transpose(&cut.right)?.trace_norm()?;
    Ok(PptNorm {
        value: report.primal_value,
        lower,
        upper,
        witness,
        iterations: report.iterations,
        gap: report.gap,
        primal_residual: report.primal_residual,
    })
}
