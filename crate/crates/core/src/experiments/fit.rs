use serde::{Deserialize, Serialize};

use super::{ExperimentRecord, Quantity};
use crate::error::{Error, Result};

/// `value = a·d^b` with the RMS residual of the log–log fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub a: f64,
    pub b: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub quantity: Quantity,
    pub law: PowerLaw,
    /// `(d, median)` pairs the fit was run on.
    pub medians: Vec<(usize, f64)>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Median of `q` per dimension over records where it was computed, in increasing `d`.
pub fn per_dim_medians(records: &[ExperimentRecord], q: Quantity) -> Vec<(usize, f64)> {
    let mut dims: Vec<usize> = records.iter().map(|r| r.d).collect();
    dims.sort_unstable();
    dims.dedup();
    dims.into_iter()
        .filter_map(|d| {
            let xs: Vec<f64> = records.iter().filter(|r| r.d == d).filter_map(|r| r.value(q)).collect();
            (!xs.is_empty()).then(|| (d, median(xs)))
        })
        .collect()
}

/// Least squares of `ln y = ln a + b ln x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLaw> {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 distinct dimensions, got {}", xs.len())));
    }
    if let Some(p) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::InvalidArgument(format!("point ({}, {}) is not positive and finite", p.0, p.1)));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let ln_a = my - b * mx;
    let residual = (lx.iter().zip(&ly).map(|(x, y)| (y - ln_a - b * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(PowerLaw { a: ln_a.exp(), b, residual })
}

/// Power law through the per-dimension medians of `q`.
pub fn fit_scaling(records: &[ExperimentRecord], q: Quantity) -> Result<ScalingFit> {
    let medians = per_dim_medians(records, q);
    let points: Vec<(f64, f64)> = medians.iter().map(|&(d, y)| (d as f64, y)).collect();
    let law = fit_power_law(&points).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::InvalidArgument(format!("{q}: {m}")),
        other => other,
    })?;
    Ok(ScalingFit { quantity: q, law, medians })
}
