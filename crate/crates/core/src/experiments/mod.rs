//! Seeded Monte Carlo scans over the shield dimension, power-law fits of the
//! per-dimension medians, and the regression suites behind `qdh verify`.

mod fit;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{log_negativity, pbit_ppt_lower_with, repeater_bound_from_sep_upper};
use crate::ensembles::{sample_private_state, SeedSpec};
use crate::error::{Error, Result};
use crate::restricted::{order_relent_bound, sep_norm_bracket, sep_overlap_bracket, BracketOptions, DpsLevel};
use crate::solver::SolverSettings;
use crate::zoo::PrivateState;

pub use fit::{fit_power_law, fit_scaling, per_dim_medians, PowerLaw, ScalingFit};
pub use verify::{verify, Check, Suite, VerifyOptions, VerifyReport};

/// Environment variable fixing the size of the scan's worker pool.
pub const THREADS_ENV: &str = "QDH_THREADS";

/// Registry of quantities a scan can record. Declaration order fixes CSV column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `(3/2)·upper(‖Δ‖_SEP)`.
    SepUpper,
    /// PPT distance lower bound from the distill-and-twirl pipeline.
    PptLower,
    /// `d²` times the separable overlap of `Δ`.
    EpsilonStar,
    RelentSepUpper,
    LogNegativity,
    /// Residual of the block identity for `‖γ^Γ‖₁`; recorded alongside `log_negativity`.
    IdentityGap,
    RepeaterBound,
    /// `‖γ − γ̂‖₁`.
    TraceDistance,
}

impl Quantity {
    pub const REGISTRY: [Quantity; 8] = [
        Quantity::SepUpper,
        Quantity::PptLower,
        Quantity::EpsilonStar,
        Quantity::RelentSepUpper,
        Quantity::LogNegativity,
        Quantity::IdentityGap,
        Quantity::RepeaterBound,
        Quantity::TraceDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::SepUpper => "sep_upper",
            Quantity::PptLower => "ppt_lower",
            Quantity::EpsilonStar => "epsilon_star",
            Quantity::RelentSepUpper => "relent_sep_upper",
            Quantity::LogNegativity => "log_negativity",
            Quantity::IdentityGap => "identity_gap",
            Quantity::RepeaterBound => "repeater_bound",
            Quantity::TraceDistance => "trace_distance",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::REGISTRY
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown quantity `{s}`")))
    }
}

/// One recorded number with the interval that brackets it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantityValue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Short tag naming the object that certifies the value.
    pub certificate: String,
}

impl QuantityValue {
    fn exact(value: f64, certificate: impl Into<String>) -> Self {
        Self { value, lower: value, upper: value, certificate: certificate.into() }
    }
}

/// Solver tolerances used for a record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub dual_tol: f64,
    pub max_iter: usize,
}

impl From<&SolverSettings<f64>> for Tolerances {
    fn from(s: &SolverSettings<f64>) -> Self {
        Self { gap_tol: s.gap_tol, feas_tol: s.feas_tol, dual_tol: s.dual_tol, max_iter: s.max_iter }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub gap_tol: Option<f64>,
    pub feas_tol: Option<f64>,
    pub dual_tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl ToleranceOverrides {
    pub fn apply(&self, mut s: SolverSettings<f64>) -> SolverSettings<f64> {
        if let Some(v) = self.gap_tol {
            s.gap_tol = v;
        }
        if let Some(v) = self.feas_tol {
            s.feas_tol = v;
        }
        if let Some(v) = self.dual_tol {
            s.dual_tol = v;
        }
        if let Some(v) = self.max_iter {
            s.max_iter = v;
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub seed: SeedSpec,
    pub d: usize,
    pub k: usize,
    /// Relaxation level actually used after the extension cap.
    pub dps_level: u32,
    pub quantities: BTreeMap<Quantity, QuantityValue>,
    /// Error message per requested quantity that could not be computed.
    pub failures: BTreeMap<Quantity, String>,
    pub wall_ms: u64,
    pub tolerances: Tolerances,
}

impl ExperimentRecord {
    pub fn value(&self, q: Quantity) -> Option<f64> {
        self.quantities.get(&q).map(|v| v.value)
    }
}

fn default_level() -> u32 {
    2
}

fn default_k() -> usize {
    2
}

fn all_quantities() -> Vec<Quantity> {
    Quantity::REGISTRY.to_vec()
}

/// Scan description, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub dims: Vec<usize>,
    pub trials: u64,
    /// Requested level; lowered to 1 where the level-2 extension exceeds the cap.
    #[serde(default = "default_level")]
    pub dps_level: u32,
    /// Partner dimension for the repeater bound.
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "all_quantities")]
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub master_seed: u64,
    /// Directory receiving `records.csv` and `records.json`.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
}

impl ScanConfig {
    /// d ∈ {2, 4, 6}, 20 trials, level 2 (level 1 at d = 6 through the cap), every quantity.
    pub fn default_campaign() -> Self {
        Self {
            dims: vec![2, 4, 6],
            trials: 20,
            dps_level: 2,
            k: 2,
            quantities: all_quantities(),
            master_seed: 20_240_601,
            output: None,
            tolerances: ToleranceOverrides::default(),
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::Config("no dimensions given".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 2 || d % 2 != 0) {
            return Err(Error::Config(format!("dimension {d} must be even and at least 2")));
        }
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        DpsLevel::from_number(self.dps_level).map_err(|e| Error::Config(e.to_string()))?;
        if self.k < 2 {
            return Err(Error::Config(format!("partner dimension {} < 2", self.k)));
        }
        Ok(())
    }

    pub fn settings(&self) -> SolverSettings<f64> {
        self.tolerances.apply(SolverSettings::default())
    }

    pub fn bracket_options(&self) -> BracketOptions<f64> {
        BracketOptions { settings: self.settings(), ..BracketOptions::default() }
    }
}

/// Runs every `(dim, trial)` job and, when `cfg.output` is set, writes the CSV and JSON files.
///
/// Per-quantity failures land in the record; only configuration and I/O errors abort.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, u64)> = cfg.dims.iter().flat_map(|&d| (0..cfg.trials).map(move |t| (d, t))).collect();
    let work = || jobs.par_iter().map(|&(d, t)| evaluate(cfg, d, t)).collect::<Vec<_>>();
    let mut records = match thread_override()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    };
    records.sort_by_key(|r| (r.d, r.seed.trial_index));
    if let Some(dir) = &cfg.output {
        write_outputs(dir, &records)?;
    }
    Ok(records)
}

fn thread_override() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV}={s} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

/// Brackets shared between quantities of one record.
#[derive(Default)]
struct Shared {
    sep: Option<std::result::Result<(f64, f64, String), String>>,
    overlap: Option<std::result::Result<(f64, f64, String), String>>,
}

fn cert(level: DpsLevel, iterations: usize) -> String {
    format!("dps{}:it{}", level.number(), iterations)
}

impl Shared {
    fn sep(&mut self, ps: &PrivateState<f64>, level: DpsLevel, opts: &BracketOptions<f64>) -> Result<(f64, f64, String)> {
        let r = self.sep.get_or_insert_with(|| {
            sep_norm_bracket(&ps.delta(), &PrivateState::<f64>::shield_cut(), level, opts)
                .map(|b| (b.lower, b.upper, cert(level, b.upper_certificate.iterations)))
                .map_err(|e| e.to_string())
        });
        r.clone().map_err(Error::Solver)
    }

    fn overlap(
        &mut self,
        ps: &PrivateState<f64>,
        level: DpsLevel,
        opts: &BracketOptions<f64>,
    ) -> Result<(f64, f64, String)> {
        let r = self.overlap.get_or_insert_with(|| {
            sep_overlap_bracket(&ps.delta(), &PrivateState::<f64>::shield_cut(), level, opts)
                .map(|b| (b.lower, b.upper, cert(level, b.upper_certificate.iterations)))
                .map_err(|e| e.to_string())
        });
        r.clone().map_err(Error::Solver)
    }
}

fn compute(
    q: Quantity,
    ps: &PrivateState<f64>,
    k: usize,
    level: DpsLevel,
    opts: &BracketOptions<f64>,
    shared: &mut Shared,
) -> Result<Vec<(Quantity, QuantityValue)>> {
    let d = ps.d();
    let d2 = (d * d) as f64;
    let one = |v: QuantityValue| Ok(vec![(q, v)]);
    match q {
        Quantity::SepUpper => {
            let (lo, up, c) = shared.sep(ps, level, opts)?;
            one(QuantityValue { value: 1.5 * up, lower: 1.5 * lo, upper: 1.5 * up, certificate: c })
        }
        Quantity::RepeaterBound => {
            let (_, up, _) = shared.sep(ps, level, opts)?;
            let b = repeater_bound_from_sep_upper(up, d, k, None)?;
            one(QuantityValue::exact(b.value, if b.trivial { "dimension-cap" } else { "continuity" }))
        }
        Quantity::PptLower => {
            let r = pbit_ppt_lower_with(ps, &opts.settings)?;
            one(QuantityValue::exact(r.value, "ppt-twirl"))
        }
        Quantity::EpsilonStar => {
            let (lo, up, c) = shared.overlap(ps, level, opts)?;
            one(QuantityValue { value: d2 * up, lower: d2 * lo, upper: d2 * up, certificate: c })
        }
        Quantity::RelentSepUpper => {
            let (lo, up, c) = shared.overlap(ps, level, opts)?;
            let v = order_relent_bound(d2 * up)?;
            one(QuantityValue { value: v, lower: order_relent_bound(d2 * lo)?, upper: v, certificate: c })
        }
        Quantity::LogNegativity | Quantity::IdentityGap => {
            let ln = log_negativity(ps)?;
            Ok(vec![
                (Quantity::LogNegativity, QuantityValue::exact(ln.e_n, "spectrum")),
                (Quantity::IdentityGap, QuantityValue::exact(ln.identity_gap, "spectrum")),
            ])
        }
        Quantity::TraceDistance => one(QuantityValue::exact(ps.gamma_minus_attacked().trace_norm()?, "spectrum")),
    }
}

fn evaluate(cfg: &ScanConfig, d: usize, trial: u64) -> ExperimentRecord {
    let start = Instant::now();
    let opts = cfg.bracket_options();
    let seed = SeedSpec::new(cfg.master_seed, trial);
    let level = DpsLevel::from_number(cfg.dps_level).unwrap_or(DpsLevel::One).capped(d, d, opts.extension_cap);
    let mut quantities = BTreeMap::new();
    let mut failures = BTreeMap::new();
    let mut requested = cfg.quantities.clone();
    requested.sort();
    requested.dedup();
    match sample_private_state::<f64>(d, &seed) {
        Err(e) => {
            for q in requested {
                failures.insert(q, e.to_string());
            }
        }
        Ok(ps) => {
            let mut shared = Shared::default();
            for q in requested {
                if quantities.contains_key(&q) {
                    continue;
                }
                match compute(q, &ps, cfg.k, level, &opts, &mut shared) {
                    Ok(values) => {
                        for (name, v) in values {
                            if !(v.value.is_finite() && v.lower.is_finite() && v.upper.is_finite()) {
                                failures.entry(name).or_insert_with(|| format!("non-finite value {}", v.value));
                            } else {
                                quantities.entry(name).or_insert(v);
                            }
                        }
                    }
                    Err(e) => {
                        failures.insert(q, e.to_string());
                    }
                }
            }
        }
    }
    ExperimentRecord {
        seed,
        d,
        k: cfg.k,
        dps_level: level.number(),
        quantities,
        failures,
        wall_ms: start.elapsed().as_millis() as u64,
        tolerances: Tolerances::from(&opts.settings),
    }
}

/// One row per record with a fixed column set; wall-clock time is left out so reruns match byte for byte.
pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> =
        ["master_seed", "trial", "d", "k", "dps_level", "gap_tol", "feas_tol"].map(String::from).to_vec();
    for q in Quantity::REGISTRY {
        header.extend([q.name().to_string(), format!("{q}_lower"), format!("{q}_upper"), format!("{q}_certificate")]);
    }
    header.push("failures".into());
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.seed.master_seed.to_string(),
            r.seed.trial_index.to_string(),
            r.d.to_string(),
            r.k.to_string(),
            r.dps_level.to_string(),
            r.tolerances.gap_tol.to_string(),
            r.tolerances.feas_tol.to_string(),
        ];
        for q in Quantity::REGISTRY {
            match r.quantities.get(&q) {
                Some(v) => row.extend([v.value.to_string(), v.lower.to_string(), v.upper.to_string(), v.certificate.clone()]),
                None => row.extend(std::iter::repeat(String::new()).take(4)),
            }
        }
        let failures: Vec<String> = r.failures.iter().map(|(q, e)| format!("{q}: {e}")).collect();
        row.push(failures.join("; "));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

pub fn write_outputs(dir: &Path, records: &[ExperimentRecord]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("records.csv"), records_to_csv(records)?)?;
    fs::write(dir.join("records.json"), serde_json::to_string_pretty(records)?)?;
    Ok(())
}

pub fn read_records_json(path: &Path) -> Result<Vec<ExperimentRecord>> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
