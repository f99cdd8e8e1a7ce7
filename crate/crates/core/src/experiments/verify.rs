use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::{fit_scaling, per_dim_medians, run_scan, Quantity, ScalingFit, ScanConfig};
use crate::analysis::{log_negativity, pbit_ppt_lower_with, relent_sep_upper, repeater_bound_one_way};
use crate::ensembles::{gue_traceless, random_density, random_pure, sample_private_state, SeedSpec};
use crate::error::{Error, Result};
use crate::operator::{Cut, DensityState, HermitianOp, SystemLayout};
use crate::restricted::{
    continuity_bound, measured_relent, ppt_norm_certified, ppt_relaxed_robustness, sep_norm_bracket,
    sep_order_slack, BracketOptions, DpsLevel,
};
use crate::solver::SolverSettings;
use crate::zoo::{
    extremal_isotropic_povm, iso_relent_dist, isotropic, max_entangled, max_entangled_on, sym_antisym,
    IsotropicParams, PrivateState, KEY_A, KEY_B, SHIELD_A, SHIELD_B,
};

const VERIFY_SEED: u64 = 0x7e57;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    ClosedForms,
    Inequalities,
    Scaling,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::ClosedForms, Suite::Inequalities, Suite::Scaling];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::ClosedForms => "closed_forms",
            Suite::Inequalities => "inequalities",
            Suite::Scaling => "scaling",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Reported only; never fails the suite.
    pub soft: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub fits: Vec<ScalingFit>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.soft)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub settings: SolverSettings<f64>,
    /// Private-state samples per dimension in the inequality suite.
    pub samples: u64,
    /// Campaign run by the scaling suite.
    pub scan: ScanConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { settings: SolverSettings::default(), samples: 20, scan: ScanConfig::default_campaign() }
    }
}

impl VerifyOptions {
    /// Comparison slack: `base`, widened when the solver tolerances are looser than their defaults.
    fn slack(&self, base: f64) -> f64 {
        base.max(10.0 * self.settings.gap_tol.max(self.settings.feas_tol))
    }

    fn bracket_options(&self) -> BracketOptions<f64> {
        BracketOptions { settings: self.settings.clone(), ..BracketOptions::default() }
    }
}

/// Collects `(ok, detail)` results; an `Err` counts as a failure.
struct Checks(Vec<Check>);

impl Checks {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.0.push(Check { name: name.into(), passed, soft: false, detail });
    }

    fn soft(&mut self, name: &str, passed: bool, detail: String) {
        self.0.push(Check { name: name.into(), passed, soft: true, detail });
    }
}

/// Worst violation tracker: `worst` is the largest amount by which a bound was exceeded.
struct Worst {
    worst: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self { worst: f64::NEG_INFINITY, at: String::new() }
    }

    fn see(&mut self, excess: f64, at: impl FnOnce() -> String) {
        if excess > self.worst || excess.is_nan() {
            self.worst = excess;
            self.at = at();
        }
    }

    fn within(&self, slack: f64) -> (bool, String) {
        (self.worst <= slack, format!("worst excess {:.3e} at {} (slack {slack:.1e})", self.worst, self.at))
    }
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> VerifyReport {
    let mut checks = Checks(Vec::new());
    let mut fits = Vec::new();
    match suite {
        Suite::ClosedForms => closed_forms(opts, &mut checks),
        Suite::Inequalities => inequalities(opts, &mut checks),
        Suite::Scaling => fits = scaling(opts, &mut checks),
    }
    VerifyReport { suite, checks: checks.0, fits }
}

fn cd() -> Cut {
    Cut::new(["C"], ["D"])
}

fn iso(d: usize, p: f64) -> Result<DensityState<f64>> {
    isotropic(IsotropicParams::new(d, p)?)
}

fn closed_forms(opts: &VerifyOptions, checks: &mut Checks) {
    let s = &opts.settings;
    let mut rng = ChaCha20Rng::seed_from_u64(VERIFY_SEED);
    let pairs: Vec<(f64, f64)> = (0..10).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();

    checks.run("isotropic_ppt_norm", || {
        let mut w = Worst::new();
        for d in [2, 3, 4] {
            for &(p, q) in &pairs {
                let x = iso(d, p)?.op() - iso(d, q)?.op();
                let v = ppt_norm_certified(&x, &cd(), s)?.value;
                let want = 2.0 * d as f64 / (d as f64 + 1.0) * (p - q).abs();
                w.see((v - want).abs(), || format!("d={d} p={p:.3} q={q:.3}"));
            }
        }
        Ok(w.within(opts.slack(1e-5)))
    });

    checks.run("isotropic_measured_relent", || {
        let mut w = Worst::new();
        for d in [2, 3, 4] {
            let m = extremal_isotropic_povm::<f64>(d)?;
            for &(p, q) in &pairs {
                let v = measured_relent(&iso(d, p)?, &iso(d, q)?, &m)?;
                let want = iso_relent_dist(p, q, d)?;
                w.see((v - want).abs(), || format!("d={d} p={p:.3} q={q:.3}"));
            }
        }
        Ok(w.within(1e-6))
    });

    checks.run("werner_ppt_norms", || {
        let mut w = Worst::new();
        for k in [2, 3] {
            let (sym, anti) = sym_antisym::<f64>(k)?;
            let x = sym.op() - anti.op();
            let v = ppt_norm_certified(&x, &cd(), s)?.value;
            w.see((v - 4.0 / (k as f64 + 1.0)).abs(), || format!("‖X‖ at k={k}"));
            let y = max_entangled_on::<f64>("E", "F", k)?.op().tensor(&x)?;
            let v = ppt_norm_certified(&y, &Cut::new(["E", "C"], ["F", "D"]), s)?.value;
            w.see((v - 2.0).abs(), || format!("‖ψ⊗X‖ at k={k}"));
        }
        Ok(w.within(opts.slack(1e-5)))
    });

    checks.run("maximally_entangled_pt_norms", || {
        let mut w = Worst::new();
        for k in 2..=5 {
            let psi = max_entangled::<f64>(k)?;
            let v = psi.op().partial_transpose(&["D"])?.trace_norm()?;
            w.see((v - k as f64).abs(), || format!("k={k}"));
        }
        Ok(w.within(1e-8))
    });

    checks.run("maximally_entangled_robustness", || {
        let mut w = Worst::new();
        for k in 2..=5 {
            let r = ppt_relaxed_robustness(&max_entangled::<f64>(k)?, &cd(), s)?;
            w.see((r - (k as f64 - 1.0)).abs(), || format!("k={k}"));
        }
        Ok(w.within(opts.slack(1e-5)))
    });

    checks.run("continuity_formula", || {
        let nu = |t: f64| if t <= 0.0 { 0.0 } else { -t * t.ln() / std::f64::consts::LN_2 };
        let top = 1.0 / (2.0 * std::f64::consts::E);
        let mut w = Worst::new();
        for i in 1..=20 {
            let eps = top * i as f64 / 20.0;
            let d = 2 + 2 * (i % 4);
            let want = 10.0 * eps * (d as f64).ln() / std::f64::consts::LN_2
                + 5.0 * eps * 3f64.ln() / std::f64::consts::LN_2
                + 2.0 * nu(2.0 * eps)
                + nu(eps)
                + nu(1.0 - eps);
            let got = continuity_bound(eps, d)?.value;
            w.see((got - want).abs() / want.abs().max(1.0), || format!("ε={eps:.4} d={d}"));
        }
        let zero = continuity_bound(0.0, 4)?.value;
        w.see(zero.abs(), || "ε=0".into());
        Ok(w.within(1e-6))
    });

    checks.run("log_negativity_identity", || {
        let mut w = Worst::new();
        for d in [2, 4] {
            for t in 0..opts.samples.min(10) {
                let ps = sample_private_state::<f64>(d, &SeedSpec::new(VERIFY_SEED, t))?;
                let ln = log_negativity(&ps)?;
                let gap = (ln.gamma_pt_norm - 1.0 - 0.5 * ln.delta_pt_norm).abs();
                w.see(gap, || format!("d={d} trial {t}"));
            }
        }
        Ok(w.within(1e-8))
    });
}

/// Random PSD operator on `(key, shield)`: rank one for even `i`, full rank otherwise.
fn random_local(i: usize, key: &str, shield: &str, d: usize, rng: &mut ChaCha20Rng) -> Result<HermitianOp<f64>> {
    let layout = SystemLayout::new([(key, 2), (shield, d)])?;
    let state = if i % 2 == 0 { random_pure(layout, rng)? } else { random_density(layout, rng)? };
    Ok(state.into_op())
}

fn inequalities(opts: &VerifyOptions, checks: &mut Checks) {
    let bopts = opts.bracket_options();
    let slack = opts.slack(1e-6);
    let cut = PrivateState::<f64>::shield_cut();
    let mut samples = Vec::new();
    for d in [2, 4] {
        for t in 0..opts.samples {
            match sample_private_state::<f64>(d, &SeedSpec::new(VERIFY_SEED, t)) {
                Ok(ps) => samples.push((t, ps)),
                Err(e) => checks.run("sampling", || Err(e)),
            }
        }
    }
    let level = |ps: &PrivateState<f64>| DpsLevel::Two.capped(ps.d(), ps.d(), bopts.extension_cap);

    checks.run("sandwich_chain", || {
        let mut w = Worst::new();
        for (t, ps) in &samples {
            let delta = ps.delta();
            let b = sep_norm_bracket(&delta, &cut, level(ps), &bopts)?;
            let ppt = ppt_norm_certified(&delta, &cut, &opts.settings)?.value;
            let tn = delta.trace_norm()?;
            let at = || format!("d={} trial {t}", ps.d());
            w.see(b.lower - b.upper, at);
            w.see(b.upper - ppt, at);
            w.see(ppt - tn, at);
        }
        Ok(w.within(slack))
    });

    checks.run("ppt_lower_pipeline", || {
        let mut w = Worst::new();
        for (t, ps) in &samples {
            let r = pbit_ppt_lower_with(ps, &opts.settings)?;
            let at = || format!("d={} trial {t}", ps.d());
            w.see((r.value - r.ppt_norm_delta / 3.0).abs(), at);
            w.see(0.5 - r.c, at);
        }
        Ok(w.within(slack))
    });

    checks.run("sep_order_certificate", || {
        let mut rng = ChaCha20Rng::seed_from_u64(VERIFY_SEED + 1);
        let mut w = Worst::new();
        for (t, ps) in &samples {
            let (relent, eps) = relent_sep_upper(ps, level(ps), &bopts)?;
            let ulps = 4.0 * f64::EPSILON * relent.abs().max(1.0);
            w.see((relent - (1.0 + eps).log2()).abs() - ulps, || format!("relent d={} trial {t}", ps.d()));
            for i in 0..100 {
                let m = random_local(i, KEY_A, SHIELD_A, ps.d(), &mut rng)?;
                let n = random_local(i / 2, KEY_B, SHIELD_B, ps.d(), &mut rng)?;
                let v = sep_order_slack(ps, eps, &m, &n)?;
                w.see(-v - 1e-8, || format!("product {i} d={} trial {t}", ps.d()));
            }
        }
        Ok(w.within(0.0))
    });

    checks.run("repeater_chain", || {
        let mut w = Worst::new();
        for (t, ps) in samples.iter().filter(|(_, ps)| ps.d() == 4).take(3) {
            let mut prev = f64::NEG_INFINITY;
            for k in 2..=4 {
                let r = repeater_bound_one_way(ps, k, level(ps), &bopts)?;
                let at = || format!("d=4 trial {t} k={k}");
                if !r.value.is_finite() {
                    return Ok((false, format!("non-finite bound at {}", at())));
                }
                w.see(prev - r.value, at);
                prev = r.value;
            }
        }
        Ok(w.within(0.0))
    });

    checks.run("tensoring_inequalities", || {
        let mut rng = ChaCha20Rng::seed_from_u64(VERIFY_SEED + 2);
        let big = Cut::new(["E", "C"], ["F", "D"]);
        let psi = max_entangled_on::<f64>("E", "F", 2)?;
        let mut w = Worst::new();
        for i in 0..20 {
            let rho = random_density::<f64>(SystemLayout::bipartite("E", 2, "F", 2)?, &mut rng)?;
            let x = gue_traceless::<f64>(SystemLayout::bipartite("C", 2, "D", 2)?, &mut rng)?;
            let px = ppt_norm_certified(&x, &cd(), &opts.settings)?.value;
            let pj = ppt_norm_certified(&rho.op().tensor(&x)?, &big, &opts.settings)?.value;
            let gamma = rho.op().partial_transpose(&["F"])?.trace_norm()?;
            w.see(pj - gamma * px, || format!("ppt pair {i}"));
            let sx = sep_norm_bracket(&x, &cd(), DpsLevel::Two, &bopts)?.upper;
            let sj = sep_norm_bracket(&psi.op().tensor(&x)?, &big, DpsLevel::Two, &bopts)?.upper;
            w.see(sj - 3.0 * sx, || format!("sep pair {i}"));
        }
        Ok(w.within(slack))
    });
}

fn scaling(opts: &VerifyOptions, checks: &mut Checks) -> Vec<ScalingFit> {
    let records = match run_scan(&opts.scan) {
        Ok(r) => r,
        Err(e) => {
            checks.run("scan", || Err(e));
            return Vec::new();
        }
    };
    let failed: usize = records.iter().map(|r| r.failures.len()).sum();
    checks.soft("scan_failures", failed == 0, format!("{failed} quantity failures over {} records", records.len()));

    let ppt = per_dim_medians(&records, Quantity::PptLower);
    let (lo, hi) = ppt.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
    checks.soft("ppt_lower_band", hi <= 2.0 * lo, format!("medians {ppt:?}"));
    for q in [Quantity::SepUpper, Quantity::EpsilonStar] {
        let m = per_dim_medians(&records, q);
        let decreasing = m.windows(2).all(|w| w[1].1 < w[0].1);
        checks.soft(&format!("{q}_decreasing"), decreasing, format!("medians {m:?}"));
    }
    let mut fits = Vec::new();
    for q in [Quantity::PptLower, Quantity::SepUpper, Quantity::EpsilonStar] {
        match fit_scaling(&records, q) {
            Ok(f) => {
                checks.soft(&format!("{q}_exponent"), true, format!("a = {:.4}, b = {:.4}", f.law.a, f.law.b));
                fits.push(f);
            }
            Err(e) => checks.soft(&format!("{q}_exponent"), false, e.to_string()),
        }
    }
    fits
}
