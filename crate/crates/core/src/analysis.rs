//! Distance, entropy and repeater-rate bounds for private states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{DensityState, HermitianOp, MeasurementPOVM, SystemLayout};
use crate::restricted::{
    continuity_bound, measured_relent, order_relent_bound, pinsker_lower, ppt_norm_certified, sep_norm_bracket,
    sep_order_epsilon, BracketOptions, ContinuityBound, DpsLevel, NormBracket,
};
use crate::solver::SolverSettings;
use crate::zoo::{
    bell, iso_norm_to_sep, isotropic_twirl, max_entangled_on, BellSign, PrivateState, KEY_A, KEY_B, SHIELD_A,
    SHIELD_B,
};

fn require_separable_attacked(ps: &PrivateState<f64>) -> Result<()> {
    if ps.has_complementary_shields() {
        Ok(())
    } else {
        Err(Error::Precondition("key-attacked state is not certified separable: shields are not complementary".into()))
    }
}

/// Upper bound `(3/2)·upper(‖Δ‖_SEP)` on the SEP distance of `γ` to separable states.
#[derive(Clone, Debug)]
pub struct PbitSepUpper {
    pub value: f64,
    pub bracket: NormBracket<f64>,
}

pub fn pbit_sep_upper(ps: &PrivateState<f64>, level: DpsLevel, opts: &BracketOptions<f64>) -> Result<PbitSepUpper> {
    require_separable_attacked(ps)?;
    let bracket = sep_norm_bracket(&ps.delta(), &PrivateState::<f64>::shield_cut(), level, opts)?;
    Ok(PbitSepUpper { value: 1.5 * bracket.upper, bracket })
}

/// Output of the PPT distillation-and-twirl pipeline.
#[derive(Clone, Debug)]
pub struct PbitPptLower {
    /// Lower bound on the PPT distance of `γ` to separable states.
    pub value: f64,
    /// Bias `Tr M(ρ⁺ − ρ⁻)` of the binary PPT measurement.
    pub c: f64,
    /// `Tr ψ⁺ γ̃` after phase correction and twirl.
    pub fidelity: f64,
    pub ppt_norm_delta: f64,
    pub measurement: MeasurementPOVM<f64>,
    pub twirled: DensityState<f64>,
}

/// `Σ_o (U_o⊗𝟙) Tr_{A'B'}[(𝟙⊗√E_o) γ (𝟙⊗√E_o)] (U_o⊗𝟙)†` with `U_o` the phase correction for outcome `o`.
fn measure_and_correct(ps: &PrivateState<f64>, m: &MeasurementPOVM<f64>) -> Result<DensityState<f64>> {
    let gamma = ps.gamma().permute(&[KEY_A, KEY_B, SHIELD_A, SHIELD_B])?;
    let key_layout = SystemLayout::bipartite(KEY_A, 2, KEY_B, 2)?;
    let key_id = HermitianOp::<f64>::identity(key_layout.clone());
    let z_a = HermitianOp::from_real_diag(key_layout.clone(), &[1.0, 1.0, -1.0, -1.0])?;
    let mut out = HermitianOp::zeros(key_layout);
    for (o, e) in m.elements().iter().enumerate() {
        let root = key_id.tensor(&e.apply_fn(|x| x.max(0.0).sqrt())?)?;
        let branch = root.matrix().matmul(gamma.matrix()).matmul(root.matrix());
        let reduced = HermitianOp::new(gamma.layout().clone(), branch)?.partial_trace(&[SHIELD_A, SHIELD_B])?;
        let corrected = if o == 0 {
            reduced
        } else {
            let m = z_a.matrix().matmul(reduced.matrix()).matmul(z_a.matrix());
            HermitianOp::new(reduced.layout().clone(), m)?
        };
        out = &out + &corrected;
    }
    DensityState::new(out)
}

pub fn pbit_ppt_lower(ps: &PrivateState<f64>) -> Result<PbitPptLower> {
    pbit_ppt_lower_with(ps, &SolverSettings::default())
}

pub fn pbit_ppt_lower_with(ps: &PrivateState<f64>, settings: &SolverSettings<f64>) -> Result<PbitPptLower> {
    let delta = ps.delta();
    let norm = ppt_norm_certified(&delta, &PrivateState::<f64>::shield_cut(), settings)?;
    // Feasible (rescaled) witness, so the measurement below is a genuine PPT POVM.
    let id = HermitianOp::identity(delta.layout().clone());
    let m_plus = (&id + &norm.witness).scale(0.5);
    let measurement = MeasurementPOVM::binary(m_plus)?;
    let e = measurement.expectations(&delta)?;
    let c = e[0];

    let corrected = measure_and_correct(ps, &measurement)?;
    let twirled = DensityState::new(isotropic_twirl(corrected.op())?)?;
    let psi = bell::<f64>(BellSign::Plus);
    let fidelity = twirled.inner(psi.op());
    let value = iso_norm_to_sep(fidelity.clamp(0.5, 1.0), 2)?;
    Ok(PbitPptLower { value, c, fidelity, ppt_norm_delta: norm.value, measurement, twirled })
}

/// Log-negativity of a private state and the residual of the block identity
/// `‖γ^Γ‖₁ = ½‖(ρ⁺+ρ⁻)^Γ‖₁ + ½‖Δ^Γ‖₁`.
///
/// For complementary shields the right-hand side is `1 + ½‖Δ^Γ‖₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogNegativity {
    pub e_n: f64,
    pub gamma_pt_norm: f64,
    pub delta_pt_norm: f64,
    pub identity_gap: f64,
}

pub fn log_negativity(ps: &PrivateState<f64>) -> Result<LogNegativity> {
    let gamma_pt_norm = ps.gamma().partial_transpose(&[KEY_B, SHIELD_B])?.trace_norm()?;
    let delta_pt_norm = ps.delta().partial_transpose(&[SHIELD_B])?.trace_norm()?;
    let sum = ps.shield_plus().op() + ps.shield_minus().op();
    let sum_pt_norm = sum.partial_transpose(&[SHIELD_B])?.trace_norm()?;
    let identity_gap = (gamma_pt_norm - 0.5 * sum_pt_norm - 0.5 * delta_pt_norm).abs();
    Ok(LogNegativity { e_n: gamma_pt_norm.log2(), gamma_pt_norm, delta_pt_norm, identity_gap })
}

/// `log₂(1 + ε*)` from the separable-order certificate, with `ε*`.
pub fn relent_sep_upper(ps: &PrivateState<f64>, level: DpsLevel, opts: &BracketOptions<f64>) -> Result<(f64, f64)> {
    let eps = sep_order_epsilon(ps, level, opts)?;
    Ok((order_relent_bound(eps)?, eps))
}

/// Continuity route: `continuity_bound(v/2, 2d)` for a SEP-distance upper bound `v ∈ [0, 2]`.
pub fn relent_continuity_upper(ps: &PrivateState<f64>, sep_norm_upper_value: f64) -> Result<ContinuityBound> {
    if !(0.0..=2.0).contains(&sep_norm_upper_value) {
        return Err(Error::InvalidArgument(format!("SEP distance {sep_norm_upper_value} outside [0, 2]")));
    }
    continuity_bound(sep_norm_upper_value / 2.0, 2 * ps.d())
}

/// Pinsker bound applied to the PPT distance lower bound.
pub fn relent_ppt_lower(ps: &PrivateState<f64>) -> Result<f64> {
    pinsker_lower(pbit_ppt_lower(ps)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeaterBound {
    pub k: usize,
    pub epsilon: f64,
    /// Local dimension on either side of the `AA'B : CC'C̃` cut.
    pub d_eff: usize,
    pub value: f64,
    /// Set when `ε ≥ 1` and the value is the dimension cap `log₂ d_eff`.
    pub trivial: bool,
    /// Whether `ε` lies where the continuity estimate is proven.
    pub continuity_valid: bool,
    /// Set when a per-instance relaxed robustness replaced the worst-case factor.
    pub heuristic: bool,
}

/// Continuity bound at `ε`, falling back to `log₂ d_eff` once `ε ≥ 1`.
pub fn repeater_bound_from_epsilon(epsilon: f64, d_eff: usize, k: usize) -> Result<RepeaterBound> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative distance {epsilon}")));
    }
    if epsilon >= 1.0 {
        return Ok(RepeaterBound {
            k,
            epsilon,
            d_eff,
            value: (d_eff as f64).log2(),
            trivial: true,
            continuity_valid: false,
            heuristic: false,
        });
    }
    let b = continuity_bound(epsilon, d_eff)?;
    Ok(RepeaterBound { k, epsilon, d_eff, value: b.value, trivial: false, continuity_valid: b.valid, heuristic: false })
}

/// Single-copy one-way repeater bound for `γ` and any partner state on `C̃B` with `|C̃| = |B| = k`.
///
/// Uses `ε = k·upper(‖Δ‖_SEP)` and `d_eff = 2dk`.
pub fn repeater_bound_one_way(
    ps: &PrivateState<f64>,
    k: usize,
    level: DpsLevel,
    opts: &BracketOptions<f64>,
) -> Result<RepeaterBound> {
    let bracket = sep_norm_bracket(&ps.delta(), &PrivateState::<f64>::shield_cut(), level, opts)?;
    repeater_bound_from_sep_upper(bracket.upper, ps.d(), k, None)
}

/// Repeater bound from a SEP upper endpoint on `Δ`.
///
/// With `robustness = Some(r)` the worst-case factor `2k` is replaced by
/// `(2r + 1)/2`; relaxed robustness values only lower-bound the true one, so the
/// result is marked heuristic.
pub fn repeater_bound_from_sep_upper(
    sep_upper: f64,
    d: usize,
    k: usize,
    robustness: Option<f64>,
) -> Result<RepeaterBound> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("partner dimension {k} < 2")));
    }
    if !(sep_upper > 0.0) {
        return Err(Error::Precondition("shield difference is indistinguishable (zero SEP norm)".into()));
    }
    let factor = match robustness {
        None => k as f64,
        Some(r) => (2.0 * r + 1.0) / 4.0,
    };
    let mut b = repeater_bound_from_epsilon(factor * sep_upper, 2 * d * k, k)?;
    b.heuristic = robustness.is_some();
    Ok(b)
}

/// `ψ⁺_{AB} ⊗ ρ` laid out in the factor order of `layout`.
fn assisted(rho: &DensityState<f64>, layout: &SystemLayout) -> Result<DensityState<f64>> {
    let psi = max_entangled_on::<f64>(KEY_A, KEY_B, 2)?;
    let joint = psi.tensor(rho)?;
    joint.permute(&layout.labels())
}

/// `½ max_m D(ψ⊗ρ⁺‖ψ⊗ρ̄) + ½ max_m D(ψ⊗ρ⁻‖ψ⊗ρ̄)` over POVMs on `A, B, A', B'`.
pub fn keyattacked_divergence_bound(ps: &PrivateState<f64>, family: &[MeasurementPOVM<f64>]) -> Result<f64> {
    let avg = ps.shield_average();
    let mut best_plus = 0.0f64;
    let mut best_minus = 0.0f64;
    for m in family {
        let layout = m.layout();
        let mut labels = layout.labels();
        labels.sort_unstable();
        let mut expected = vec![KEY_A, KEY_B, SHIELD_A, SHIELD_B];
        expected.sort_unstable();
        if labels != expected {
            return Err(Error::Layout(format!("measurement acts on {layout}, expected factors A, B, A', B'")));
        }
        let avg_l = assisted(&avg, layout)?;
        best_plus = best_plus.max(measured_relent(&assisted(ps.shield_plus(), layout)?, &avg_l, m)?);
        best_minus = best_minus.max(measured_relent(&assisted(ps.shield_minus(), layout)?, &avg_l, m)?);
    }
    Ok(0.5 * best_plus + 0.5 * best_minus)
}

/// Every bound computed for one private state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub d: usize,
    pub k: usize,
    pub dps_level: u32,
    pub sep_lower_delta: f64,
    pub sep_upper_delta: f64,
    pub sep_upper: f64,
    pub ppt_norm_delta: f64,
    pub ppt_lower: f64,
    pub c: f64,
    pub trace_distance: f64,
    pub relent_sep_upper: f64,
    pub relent_continuity_upper: f64,
    pub relent_continuity_valid: bool,
    pub relent_ppt_lower: f64,
    pub log_negativity: f64,
    pub identity_gap: f64,
    pub repeater_bound: f64,
    pub repeater_trivial: bool,
    pub epsilon_star: f64,
}

/// Runs every pipeline on `ps`; level 2 falls back to level 1 above the extension cap.
pub fn analyze(ps: &PrivateState<f64>, k: usize, level: DpsLevel, opts: &BracketOptions<f64>) -> Result<AnalysisReport> {
    let d = ps.d();
    let level = level.capped(d, d, opts.extension_cap);
    let sep = pbit_sep_upper(ps, level, opts)?;
    let ppt = pbit_ppt_lower_with(ps, &opts.settings)?;
    let (relent_sep, eps) = relent_sep_upper(ps, level, opts)?;
    let cont = relent_continuity_upper(ps, sep.value.min(2.0))?;
    let logneg = log_negativity(ps)?;
    let rep = repeater_bound_from_sep_upper(sep.bracket.upper, d, k, None)?;
    let report = AnalysisReport {
        d,
        k,
        dps_level: level.number(),
        sep_lower_delta: sep.bracket.lower,
        sep_upper_delta: sep.bracket.upper,
        sep_upper: sep.value,
        ppt_norm_delta: ppt.ppt_norm_delta,
        ppt_lower: ppt.value,
        c: ppt.c,
        trace_distance: ps.gamma_minus_attacked().trace_norm()?,
        relent_sep_upper: relent_sep,
        relent_continuity_upper: cont.value,
        relent_continuity_valid: cont.valid,
        relent_ppt_lower: pinsker_lower(ppt.value)?,
        log_negativity: logneg.e_n,
        identity_gap: logneg.identity_gap,
        repeater_bound: rep.value,
        repeater_trivial: rep.trivial,
        epsilon_star: eps,
    };
    Ok(report)
}
