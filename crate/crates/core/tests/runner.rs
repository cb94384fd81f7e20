use std::path::{Path, PathBuf};

use holoww::runner::{
    cmd_fit, cmd_resume, cmd_simulate, cmd_verify, config_hash, read_checkpoint, read_norms, run_dir,
    write_checkpoint, Manifest, RunConfig, VerifyOptions, CHECKPOINT_DIR, DEFAULT_SEED, NORMS_FILE, OUTPUT_ROOT_ENV,
};
use holoww::spectral_core::{Grid, GridSpec};
use holoww::waterwave_dynamics::PacketData;
use holoww::Error;

const SMALL: &str = r#"
[grid]
period = 314.1592653589793
modes = 256

[stepper]
dt = 0.05

[data]
eps = 1e-2
velocity = 1.0
width = 0.15

[run]
t_end = 5.0

[sampling]
norm_every = 0.5
checkpoint_every = 2.5
sobolev = [0.5]

[output]
dir = "DIR"
"#;

fn config(dir: &Path, edit: impl Fn(&mut RunConfig)) -> RunConfig {
    let mut cfg = RunConfig::from_toml(&SMALL.replace("DIR", &dir.display().to_string())).unwrap();
    edit(&mut cfg);
    cfg
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn zero_data_gives_zero_series() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(&tmp.path().join("zero"), |c| c.data.eps = 0.0);
    let dir = cmd_simulate(&cfg).unwrap();
    let recs = read_norms(&dir.join(NORMS_FILE)).unwrap();
    assert_eq!(recs.len(), 11);
    for r in &recs {
        assert_eq!(r.a0 + r.a_quarter + r.a_half + r.a_sharp + r.x + r.energy, 0.0);
        assert_eq!(r.wh_sharp, if r.t >= 1.0 { Some(0.0) } else { None });
        assert_eq!(r.hs[0].1, 0.0);
    }
}

#[test]
fn resumed_run_reproduces_its_series() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(&tmp.path().join("run"), |_| {});
    let dir = cmd_simulate(&cfg).unwrap();
    let first = read_norms(&dir.join(NORMS_FILE)).unwrap();
    let m = Manifest::load(&dir).unwrap();
    assert_eq!(m.config_sha256, config_hash(&cfg));
    assert_eq!(m.records, first.len());
    assert_eq!(m.completed_t, 5.0);
    let ckpt = dir.join(CHECKPOINT_DIR).join(&m.checkpoints[0]);
    let out = cmd_resume(&dir, &ckpt).unwrap();
    assert_eq!(out.records.first().unwrap().t, 2.5);
    let second = read_norms(&dir.join(NORMS_FILE)).unwrap();
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.t, b.t);
        for (x, y) in [(a.x, b.x), (a.energy, b.energy), (a.a0, b.a0), (a.wh_sharp.unwrap_or(0.0), b.wh_sharp.unwrap_or(0.0))] {
            assert!((x - y).abs() <= 1e-10 * x.abs(), "t {}: {x} vs {y}", a.t);
        }
    }
    assert!(Manifest::load(&dir).unwrap().resumed_from.is_some());
}

#[test]
fn checkpoints_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let g = Grid::new(GridSpec::new(50.0, 128, 2.0 / 3.0).unwrap());
    let s = PacketData::new(1e-2, 1.0, 0.3).state(&g, 1.25).unwrap();
    let path = tmp.path().join("c.txt");
    write_checkpoint(&path, &s).unwrap();
    let back = read_checkpoint(&path, Some(&g)).unwrap();
    assert_eq!(back.t, 1.25);
    assert!((back.w.field() - s.w.field()).max_coef() == 0.0);
    assert!((back.q.field() - s.q.field()).max_coef() == 0.0);
}

#[test]
fn fit_of_a_conserved_series_and_bad_requests() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(&tmp.path().join("fit"), |c| c.run.t_end = 12.0);
    let dir = cmd_simulate(&cfg).unwrap();
    let rep = cmd_fit(&dir, "energy", Some((1.0, 12.0))).unwrap();
    assert!(rep.fit.slope.abs() <= 1e-3, "{}", rep.fit.slope);
    assert!(rep.series.exists());
    assert!(matches!(cmd_fit(&dir, "bogus", None), Err(Error::Usage(_))));
    assert!(matches!(cmd_fit(&dir, "X", Some((1.0, 3.0))), Err(Error::InsufficientSamples { .. })));
    let h = cmd_fit(&dir, "H0.5", Some((1.0, 12.0))).unwrap();
    assert_eq!(h.fit.samples, 23);
}

#[test]
fn linear_run_decays_at_the_dispersive_rate() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::load(&configs_dir().join("decay_linear.toml")).unwrap();
    cfg.output.dir = tmp.path().join("lin").display().to_string();
    let dir = cmd_simulate(&cfg).unwrap();
    let rep = cmd_fit(&dir, "X", Some((10.0, 100.0))).unwrap();
    assert!((-0.6..=-0.4).contains(&rep.fit.slope), "{}", rep.fit.slope);
}

#[test]
fn shipped_configs_validate() {
    for name in ["small_packet.toml", "decay_linear.toml"] {
        RunConfig::load(&configs_dir().join(name)).unwrap();
    }
}

#[test]
fn config_rejects_unknown_keys_and_bad_values() {
    let with = |from: &str, to: &str| RunConfig::from_toml(&SMALL.replace(from, to));
    assert!(matches!(with("eps = 1e-2", "eps = 1e-2\namplitude = 3"), Err(Error::Config(_))));
    assert!(matches!(with("[run]", "[runs]"), Err(Error::Config(_))));
    assert!(matches!(with("eps = 1e-2", "eps = 1e-2\nsigma = 2.5"), Err(Error::Config(_))));
    assert!(matches!(with("dt = 0.05", "dt = 0.05\nscheme = \"euler\""), Err(Error::Config(_))));
    assert!(matches!(with("eps = 1e-2", "eps = -1e-2"), Err(Error::Config(_))));
    assert!(matches!(with("velocity = 1.0", "velocity = 0.01"), Err(Error::Config(_))));
    assert!(with("DIR", "ok").is_ok());
}

#[test]
fn output_root_comes_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    std::env::set_var(OUTPUT_ROOT_ENV, tmp.path());
    let cfg = config(Path::new("relative_run"), |c| c.run.t_end = 1.0);
    let dir = run_dir(&cfg);
    std::env::remove_var(OUTPUT_ROOT_ENV);
    assert_eq!(dir, tmp.path().join("relative_run"));
    let abs = config(&tmp.path().join("abs"), |_| {});
    assert_eq!(run_dir(&abs), tmp.path().join("abs"));
}

#[test]
fn verify_rejects_unknown_suites() {
    let opts = VerifyOptions { modes: Some(512), seed: DEFAULT_SEED };
    assert!(matches!(cmd_verify("nonsense", &opts), Err(Error::Usage(_))));
}

#[test]
fn identities_suite_passes_at_desk_size() {
    let reports = cmd_verify("identities", &VerifyOptions { modes: None, seed: DEFAULT_SEED }).unwrap();
    for r in &reports {
        for line in r.lines() {
            println!("{line}");
        }
        assert!(r.passed());
    }
}
