use crate::error::{Error, Result};

use super::record::NormRecord;

/// Fewest samples accepted by a decay fit.
pub const MIN_FIT_SAMPLES: usize = 8;

/// Least-squares fit of log y = intercept + slope log t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub samples: usize,
}

/// Fits a power law to positive samples spanning at least a decade in t.
pub fn fit_power_law(ts: &[f64], ys: &[f64]) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(ys)
        .filter(|(t, y)| **t > 0.0 && **y > 0.0 && y.is_finite())
        .map(|(t, y)| (t.ln(), y.ln()))
        .collect();
    let n = pts.len();
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    if n < MIN_FIT_SAMPLES || hi - lo < 10f64.ln() - 1e-12 {
        return Err(Error::InsufficientSamples { needed: MIN_FIT_SAMPLES, got: n });
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (sse / (nf - 2.0) / sxx).sqrt();
    Ok(DecayFit { slope, stderr, intercept, samples: n })
}

/// Power-law fit of column `norm_id` over records with t in `window`.
pub fn decay_fit(records: &[NormRecord], norm_id: &str, window: (f64, f64)) -> Result<DecayFit> {
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for r in records.iter().filter(|r| r.t >= window.0 && r.t <= window.1) {
        if let Some(y) = r.get(norm_id)? {
            ts.push(r.t);
            ys.push(y);
        }
    }
    if records.is_empty() {
        NormRecord::default().get(norm_id)?;
    }
    fit_power_law(&ts, &ys)
}
