use std::path::{Path, PathBuf};

use crate::diagnostics::{decay_fit, DecayFit};
use crate::error::Result;

use super::simulate::{read_norms, NORMS_FILE};

#[derive(Clone, Debug)]
pub struct FitReport {
    pub norm_id: String,
    pub window: (f64, f64),
    pub fit: DecayFit,
    /// Two-column (t, value) file written next to the series.
    pub series: PathBuf,
}

/// Power-law fit of one norm column of a finished run.
///
/// The window defaults to every sample with t > 0.
pub fn cmd_fit(dir: &Path, norm_id: &str, window: Option<(f64, f64)>) -> Result<FitReport> {
    let records = read_norms(&dir.join(NORMS_FILE))?;
    records.first().cloned().unwrap_or_default().get(norm_id)?;
    let window = window.unwrap_or((f64::MIN_POSITIVE, f64::INFINITY));
    let fit = decay_fit(&records, norm_id, window)?;
    let series = dir.join(format!("fit_{norm_id}.csv"));
    let mut w = csv::Writer::from_path(&series)?;
    w.write_record(["t", norm_id])?;
    for r in records.iter().filter(|r| r.t >= window.0 && r.t <= window.1) {
        if let Some(v) = r.get(norm_id)? {
            w.write_record([format!("{}", r.t), format!("{v:e}")])?;
        }
    }
    w.flush()?;
    Ok(FitReport { norm_id: norm_id.to_string(), window, fit, series })
}
