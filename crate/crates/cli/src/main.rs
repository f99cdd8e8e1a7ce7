use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qdh_core::analysis::analyze;
use qdh_core::ensembles::{sample_private_state, SeedSpec};
use qdh_core::experiments::{
    fit_scaling, read_records_json, run_scan, verify, Quantity, ScanConfig, Suite, ToleranceOverrides,
    VerifyOptions,
};
use qdh_core::operator::{Cut, DensityState, HermitianOp};
use qdh_core::restricted::{ppt_norm_certified, sep_norm_bracket, sep_overlap_bracket, BracketOptions, DpsLevel};
use qdh_core::solver::{solve, SolverSettings, SpectrahedronProgram};
use qdh_core::zoo::{isotropic, max_entangled, private_state, sym_antisym, IsotropicParams, PrivateState};
use serde_json::json;

/// Restricted distinguishability norms and private-state bounds.
#[derive(Parser)]
#[command(name = "qdh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Tolerances {
    /// Relative duality-gap tolerance.
    #[arg(long)]
    gap_tol: Option<f64>,
    /// Relative feasibility tolerance.
    #[arg(long)]
    feas_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

impl Tolerances {
    fn overrides(self) -> ToleranceOverrides {
        ToleranceOverrides { gap_tol: self.gap_tol, feas_tol: self.feas_tol, dual_tol: None, max_iter: self.max_iter }
    }

    fn settings(self) -> SolverSettings<f64> {
        self.overrides().apply(SolverSettings::default())
    }

    fn bracket(self) -> BracketOptions<f64> {
        BracketOptions { settings: self.settings(), ..BracketOptions::default() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Random private state with complementary shields (needs --d, --seed, --trial).
    Private,
    /// Isotropic state (needs --d and --p).
    Isotropic,
    /// Maximally entangled state of local dimension --d.
    MaxEntangled,
    /// Symmetric minus antisymmetric Werner projector state, local dimension --d.
    WernerDiff,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    ClosedForms,
    Inequalities,
    Scaling,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state or operator as JSON.
    MakeState {
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Output file; a private state writes gamma/shield files into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a spectrahedral program stored as JSON.
    Solve {
        program: PathBuf,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Trace, PPT and SEP-bracket norms of a Hermitian operator.
    Norms {
        operator: PathBuf,
        /// Bipartition such as "C:D" or "A,A':B,B'".
        #[arg(long)]
        cut: String,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Every bound for one private state.
    Analyze {
        /// Shield state ρ⁺ (JSON); use with --shield-minus instead of sampling.
        #[arg(long, requires = "shield_minus")]
        shield_plus: Option<PathBuf>,
        #[arg(long, requires = "shield_plus")]
        shield_minus: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Partner dimension for the repeater bound.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Run a Monte Carlo scan described by a TOML file.
    Scan {
        config: PathBuf,
        /// Overrides the output directory from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fit value = a·d^b to per-dimension medians of scan records.
    Fit {
        records: PathBuf,
        #[arg(long = "quantity", default_values_t = ["ppt_lower".to_string(), "sep_upper".to_string(), "epsilon_star".to_string()])]
        quantities: Vec<String>,
    },
    /// Run regression suites; exits nonzero when a hard check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Private-state samples per dimension for the inequality suite.
        #[arg(long, default_value_t = 20)]
        samples: u64,
        /// Scan configuration for the scaling suite (default campaign otherwise).
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn write_op(op: &HermitianOp<f64>, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => op.save(p).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{}", op.to_json()?),
    }
    Ok(())
}

fn load_state(path: &Path) -> Result<DensityState<f64>> {
    let op = HermitianOp::load(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(DensityState::new(op)?)
}

fn make_state(kind: Kind, d: usize, p: Option<f64>, seed: u64, trial: u64, out: Option<&Path>) -> Result<()> {
    match kind {
        Kind::Private => {
            let ps = sample_private_state::<f64>(d, &SeedSpec::new(seed, trial))?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    ps.gamma().op().save(dir.join("gamma.json"))?;
                    ps.shield_plus().op().save(dir.join("shield_plus.json"))?;
                    ps.shield_minus().op().save(dir.join("shield_minus.json"))?;
                }
                None => println!("{}", ps.gamma().op().to_json()?),
            }
            Ok(())
        }
        Kind::Isotropic => {
            let Some(p) = p else { bail!("isotropic states need --p") };
            write_op(isotropic::<f64>(IsotropicParams::new(d, p)?)?.op(), out)
        }
        Kind::MaxEntangled => write_op(max_entangled::<f64>(d)?.op(), out),
        Kind::WernerDiff => {
            let (s, a) = sym_antisym::<f64>(d)?;
            write_op(&(s.op() - a.op()), out)
        }
    }
}

fn norms(path: &Path, cut: &str, level: u32, tol: Tolerances) -> Result<()> {
    let x = HermitianOp::<f64>::load(path).with_context(|| format!("reading {}", path.display()))?;
    let cut = Cut::parse(cut)?;
    let (da, db) = cut.party_dims(x.layout())?;
    let opts = tol.bracket();
    let level = DpsLevel::from_number(level)?.capped(da, db, opts.extension_cap);
    let ppt = ppt_norm_certified(&x, &cut, &opts.settings)?;
    let sep = sep_norm_bracket(&x, &cut, level, &opts)?;
    let overlap = sep_overlap_bracket(&x, &cut, level, &opts)?;
    emit(
        &json!({
            "trace_norm": x.trace_norm()?,
            "ppt_norm": ppt.value,
            "ppt_norm_certified": [ppt.lower, ppt.upper],
            "dps_level": level.number(),
            "sep_norm": [sep.lower, sep.upper],
            "sep_overlap": [overlap.lower, overlap.upper],
        }),
        None,
    )
}

fn run_verify(suite: SuiteArg, samples: u64, config: Option<&Path>, tol: Tolerances) -> Result<bool> {
    let mut opts = VerifyOptions { settings: tol.settings(), samples, ..VerifyOptions::default() };
    if let Some(c) = config {
        opts.scan = ScanConfig::from_path(c)?;
    }
    let suites = match suite {
        SuiteArg::ClosedForms => vec![Suite::ClosedForms],
        SuiteArg::Inequalities => vec![Suite::Inequalities],
        SuiteArg::Scaling => vec![Suite::Scaling],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut ok = true;
    for s in suites {
        let report = verify(s, &opts);
        for c in &report.checks {
            let tag = match (c.passed, c.soft) {
                (true, _) => "PASS",
                (false, true) => "FLAG",
                (false, false) => "FAIL",
            };
            println!("{tag} {s}/{}: {}", c.name, c.detail);
        }
        for f in &report.fits {
            println!("FIT  {s}/{}: a = {:.6}, b = {:.6}, residual = {:.3e}", f.quantity, f.law.a, f.law.b, f.law.residual);
        }
        ok &= report.passed();
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::MakeState { kind, d, p, seed, trial, out } => make_state(kind, d, p, seed, trial, out.as_deref())?,
        Command::Solve { program, tol } => {
            let text = std::fs::read_to_string(&program).with_context(|| format!("reading {}", program.display()))?;
            let prog = SpectrahedronProgram::<f64>::from_json(&text)?;
            let r = solve(&prog, &tol.settings())?;
            emit(
                &json!({
                    "status": format!("{:?}", r.status),
                    "primal_value": r.primal_value,
                    "dual_value": r.dual_value,
                    "gap": r.gap,
                    "primal_residual": r.primal_residual,
                    "dual_residual": r.dual_residual,
                    "iterations": r.iterations,
                }),
                None,
            )?;
        }
        Command::Norms { operator, cut, level, tol } => norms(&operator, &cut, level, tol)?,
        Command::Analyze { shield_plus, shield_minus, d, seed, trial, k, level, tol } => {
            let ps: PrivateState<f64> = match (shield_plus, shield_minus) {
                (Some(a), Some(b)) => private_state(load_state(&a)?, load_state(&b)?)?,
                _ => sample_private_state(d, &SeedSpec::new(seed, trial))?,
            };
            let report = analyze(&ps, k, DpsLevel::from_number(level)?, &tol.bracket())?;
            emit(&serde_json::to_value(report)?, None)?;
        }
        Command::Scan { config, output } => {
            let mut cfg = ScanConfig::from_path(&config)?;
            if output.is_some() {
                cfg.output = output;
            }
            let records = run_scan(&cfg)?;
            let failures: usize = records.iter().map(|r| r.failures.len()).sum();
            println!("{} records, {failures} quantity failures", records.len());
            if let Some(dir) = &cfg.output {
                println!("wrote {}/records.csv and records.json", dir.display());
            }
        }
        Command::Fit { records, quantities } => {
            let recs = read_records_json(&records)?;
            let mut out = Vec::new();
            for q in quantities {
                let q: Quantity = q.parse()?;
                let f = fit_scaling(&recs, q)?;
                out.push(json!({
                    "quantity": q.name(),
                    "a": f.law.a,
                    "b": f.law.b,
                    "residual": f.law.residual,
                    "medians": f.medians,
                }));
            }
            emit(&serde_json::Value::Array(out), None)?;
        }
        Command::Verify { suite, samples, config, tol } => return run_verify(suite, samples, config.as_deref(), tol),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
