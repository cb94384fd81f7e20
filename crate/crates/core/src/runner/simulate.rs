use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagnostics::{control_norms, ell_hyp_split, weighted_energy, xsharp_norm, NormRecord};
use crate::error::{Error, Result};
use crate::normal_form::{para_nf, scaling_fields};
use crate::paradiff_calculus::ParaConfig;
use crate::spectral_core::serial::{read_field, write_field};
use crate::spectral_core::Grid;
use crate::waterwave_dynamics::{evolve, StepperConfig, WaveState};
use crate::wavepacket_testing::{GammaProfile, GAMMA_CSV_HEADER};

use super::config::RunConfig;

/// Environment variable overriding the directory that relative run directories live in.
pub const OUTPUT_ROOT_ENV: &str = "HOLOWW_OUTPUT_ROOT";

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const NORMS_FILE: &str = "norms.csv";
pub const GAMMA_FILE: &str = "gamma.csv";
pub const CHECKPOINT_DIR: &str = "checkpoints";
pub const FAILURE_DUMP: &str = "failure_state.txt";

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

/// Resolves the configured run directory against the output root.
pub fn run_dir(cfg: &RunConfig) -> PathBuf {
    let dir = Path::new(&cfg.output.dir);
    if dir.is_absolute() {
        dir.to_path_buf()
    } else {
        output_root().join(dir)
    }
}

/// Hex SHA-256 of the canonical TOML form of the config.
pub fn config_hash(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(cfg.to_toml().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub package: String,
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub grid: String,
    pub t_end: f64,
    pub completed_t: f64,
    pub records: usize,
    pub gamma_samples: usize,
    pub checkpoints: Vec<String>,
    pub resumed_from: Option<String>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Format { path: path.display().to_string(), reason: e.to_string() })
    }
}

/// Writes `t = ...` followed by the W and Q field blocks.
pub fn write_checkpoint(path: &Path, s: &WaveState) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "t = {:e}", s.t)?;
    write_field(&mut out, s.w.field())?;
    write_field(&mut out, s.q.field())?;
    out.flush()?;
    Ok(())
}

pub fn read_checkpoint(path: &Path, grid: Option<&Arc<Grid>>) -> Result<WaveState> {
    let name = path.display().to_string();
    let bad = |reason: &str| Error::Format { path: name.clone(), reason: reason.to_string() };
    let mut lines = BufReader::new(fs::File::open(path)?).lines();
    let first = lines.next().ok_or_else(|| bad("empty checkpoint"))??;
    let t: f64 = first
        .strip_prefix("t = ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| bad("missing time line"))?;
    let w = read_field(&mut lines, grid, &name)?;
    let q = read_field(&mut lines, Some(w.grid()), &name)?;
    WaveState::from_fields(t, &w, &q)
}

/// Control norms, Sobolev columns and, from t >= 1, the weighted and X-sharp norms.
pub fn norm_record(s: &WaveState, para: &ParaConfig, sigma: f64, orders: &[f64]) -> NormRecord {
    let mut rec = control_norms(s).with_sobolev(s, orders);
    if s.t >= 1.0 {
        let nf = para_nf(s, para);
        let sc = scaling_fields(s, &nf, para);
        rec.wh_sharp = Some(weighted_energy(s, &sc, sigma));
        if let Ok(split) = ell_hyp_split((nf.w.field(), nf.q.field()), s.t) {
            let xs = xsharp_norm(&split, sigma);
            rec.xsharp = Some(xs.total);
            rec.xsharp_ell = Some(xs.total_ell);
            rec.xsharp_hyp = Some(split.hyp_x_norm());
        }
    }
    rec
}

/// Series produced by a run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub records: Vec<NormRecord>,
    pub gamma: GammaProfile,
    /// (t, path) of every checkpoint written.
    pub checkpoints: Vec<(f64, PathBuf)>,
    pub final_state: WaveState,
}

/// Sample times k * every in [from, to], with k counted from zero.
fn schedule(every: f64, from: f64, to: f64) -> Vec<f64> {
    if every <= 0.0 {
        return Vec::new();
    }
    let k0 = (from / every - 1e-9).ceil().max(0.0) as u64;
    let mut out = Vec::new();
    let mut k = k0;
    loop {
        let t = k as f64 * every;
        if t > to + 1e-9 * every {
            break;
        }
        out.push(t);
        k += 1;
    }
    out
}

fn contains(list: &[f64], t: f64) -> bool {
    list.iter().any(|x| (x - t).abs() <= 1e-12 * t.abs().max(1.0))
}

/// Steps `start` to the configured end time, recording norms, gamma samples and checkpoints.
///
/// Event times are absolute multiples of the cadences, so a run resumed from
/// a checkpoint takes the same steps as the original.
pub fn simulate(cfg: &RunConfig, start: WaveState, dir: Option<&Path>) -> Result<RunOutput> {
    cfg.validate()?;
    let stepper: StepperConfig = cfg.stepper()?;
    let para = ParaConfig::default();
    let s_cfg = &cfg.sampling;
    let t0 = start.t;
    let t_end = cfg.run.t_end;
    let norm_times = schedule(s_cfg.norm_every, t0, t_end);
    let gamma_times =
        schedule(s_cfg.gamma_every, t0.max(s_cfg.gamma_start), t_end);
    let mut ckpt_times = schedule(s_cfg.checkpoint_every, t0, t_end);
    ckpt_times.retain(|t| *t > t0);
    if !contains(&ckpt_times, t_end) {
        ckpt_times.push(t_end);
    }
    let mut events: Vec<f64> =
        norm_times.iter().chain(&gamma_times).chain(&ckpt_times).copied().filter(|t| *t >= t0).collect();
    events.sort_by(f64::total_cmp);
    events.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));

    let mut out = RunOutput {
        records: Vec::new(),
        gamma: GammaProfile::new(cfg.velocities()),
        checkpoints: Vec::new(),
        final_state: start.clone(),
    };
    if let Some(d) = dir {
        fs::create_dir_all(d.join(CHECKPOINT_DIR))?;
    }
    let mut s = start;
    for &te in &events {
        if te > s.t {
            s = match evolve(&s, &stepper, te) {
                Ok(next) => next,
                Err(e) => return Err(fail(dir, &s, e)),
            };
        }
        if contains(&norm_times, te) {
            out.records.push(norm_record(&s, &para, cfg.data.sigma, &s_cfg.sobolev));
        }
        if contains(&gamma_times, te) {
            if let Err(e) = out.gamma.sample(&s, &para) {
                return Err(fail(dir, &s, e));
            }
        }
        if contains(&ckpt_times, te) {
            if let Some(d) = dir {
                let path = d.join(CHECKPOINT_DIR).join(checkpoint_name(te));
                write_checkpoint(&path, &s)?;
                out.checkpoints.push((te, path));
            }
        }
    }
    out.final_state = s;
    Ok(out)
}

pub fn checkpoint_name(t: f64) -> String {
    format!("t_{t:012.4}.txt")
}

fn fail(dir: Option<&Path>, s: &WaveState, e: Error) -> Error {
    let dump = match dir {
        Some(d) => {
            let path = d.join(FAILURE_DUMP);
            match write_checkpoint(&path, s) {
                Ok(()) => path.display().to_string(),
                Err(_) => "<unwritable>".to_string(),
            }
        }
        None => "<not written>".to_string(),
    };
    Error::RunFailed { t: s.t, dump, source: Box::new(e) }
}

pub fn write_norms(path: &Path, records: &[NormRecord], orders: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(NormRecord::csv_header(orders))?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_norms(path: &Path) -> Result<Vec<NormRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut out = Vec::new();
    for row in r.records() {
        let row: Vec<String> = row?.iter().map(str::to_string).collect();
        out.push(NormRecord::from_csv(&header, &row).map_err(|e| match e {
            Error::Format { reason, .. } => Error::Format { path: path.display().to_string(), reason },
            other => other,
        })?);
    }
    Ok(out)
}

pub fn write_gamma(path: &Path, rows: &[[f64; 6]]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(GAMMA_CSV_HEADER)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_gamma(path: &Path) -> Result<Vec<[f64; 6]>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let mut vals = [0.0; 6];
        if row.len() != 6 {
            return Err(Error::Format { path: path.display().to_string(), reason: "expected 6 columns".into() });
        }
        for (v, cell) in vals.iter_mut().zip(row.iter()) {
            *v = cell.parse().map_err(|_| Error::Format {
                path: path.display().to_string(),
                reason: format!("bad number `{cell}`"),
            })?;
        }
        out.push(vals);
    }
    Ok(out)
}

fn write_outputs(
    cfg: &RunConfig,
    dir: &Path,
    records: &[NormRecord],
    gamma_rows: &[[f64; 6]],
    out: &RunOutput,
    resumed_from: Option<String>,
) -> Result<()> {
    write_norms(&dir.join(NORMS_FILE), records, &cfg.sampling.sobolev)?;
    write_gamma(&dir.join(GAMMA_FILE), gamma_rows)?;
    let mut checkpoints: Vec<String> = match Manifest::load(dir) {
        Ok(m) if resumed_from.is_some() => m.checkpoints,
        _ => Vec::new(),
    };
    for (_, p) in &out.checkpoints {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if !checkpoints.contains(&name) {
            checkpoints.push(name);
        }
    }
    checkpoints.sort();
    let manifest = Manifest {
        package: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: config_hash(cfg),
        seed: cfg.run.seed,
        grid: cfg.grid_spec()?.to_string(),
        t_end: cfg.run.t_end,
        completed_t: out.final_state.t,
        records: records.len(),
        gamma_samples: gamma_rows.len(),
        checkpoints,
        resumed_from,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join(MANIFEST_FILE), text + "\n")?;
    Ok(())
}

/// Runs a configuration from its initial data and writes the run directory.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let dir = run_dir(cfg);
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(CONFIG_FILE), cfg.to_toml())?;
    let grid = Grid::new(cfg.grid_spec()?);
    let start = cfg.packet_data().state(&grid, 0.0)?;
    let out = simulate(cfg, start, Some(&dir))?;
    write_outputs(cfg, &dir, &out.records, &out.gamma.csv_rows(), &out, None)?;
    Ok(dir)
}

/// Continues a run from one of its checkpoints; rows after the checkpoint time are replaced.
pub fn cmd_resume(dir: &Path, checkpoint: &Path) -> Result<RunOutput> {
    let cfg = RunConfig::load(&dir.join(CONFIG_FILE))?;
    let grid = Grid::new(cfg.grid_spec()?);
    let start = read_checkpoint(checkpoint, Some(&grid))?;
    let t0 = start.t;
    let out = simulate(&cfg, start, Some(dir))?;
    let eps = 1e-12 * t0.abs().max(1.0);
    let mut records: Vec<NormRecord> = read_norms(&dir.join(NORMS_FILE))
        .unwrap_or_default()
        .into_iter()
        .filter(|r| r.t < t0 - eps)
        .collect();
    records.extend(out.records.iter().cloned());
    let mut rows: Vec<[f64; 6]> =
        read_gamma(&dir.join(GAMMA_FILE)).unwrap_or_default().into_iter().filter(|r| r[0] < t0 - eps).collect();
    rows.extend(out.gamma.csv_rows());
    write_outputs(&cfg, dir, &records, &rows, &out, Some(checkpoint.display().to_string()))?;
    Ok(out)
}
