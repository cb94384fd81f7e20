use std::f64::consts::PI;
use std::sync::Arc;

use holoww::diagnostics::{
    control_norms, decay_fit, ell_hyp_split, fit_power_law, hyp_velocity_masked, spatial_cover, weighted_energy,
    x_norm, xsharp_exponents, xsharp_norm, NormRecord, Pair,
};
use holoww::normal_form::{para_nf, scaling_fields};
use holoww::paradiff_calculus::ParaConfig;
use holoww::spectral_core::{besov_norm, frac_derivative, project_neg, random_field, Field, Grid, GridSpec, C64};
use holoww::waterwave_dynamics::{PacketData, WaveState};
use holoww::wavepacket_testing::build_packet;
use holoww::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(period: f64, n: usize) -> Arc<Grid> {
    Grid::new(GridSpec::new(period, n, 2.0 / 3.0).unwrap())
}

fn desk() -> Arc<Grid> {
    grid(400.0 * PI, 2048)
}

/// Localized holomorphic profile A exp(-(a - a0)^2 / s^2) e^{-i k a}.
fn bump(g: &Arc<Grid>, amp: f64, a0: f64, s: f64, k: f64) -> Field {
    let f = Field::from_fn(g, |a| C64::from_polar(amp * (-((a - a0) / s).powi(2)).exp(), -k * a));
    project_neg(&f).into_field()
}

fn mass(p: &Pair) -> f64 {
    p.0.norm_l2().powi(2) + frac_derivative(&p.1.without_mean(), 0.5).unwrap().norm_l2().powi(2)
}

fn wh_sharp(s: &WaveState) -> f64 {
    let cfg = ParaConfig::default();
    let nf = para_nf(s, &cfg);
    weighted_energy(s, &scaling_fields(s, &nf, &cfg), 3.0)
}

#[test]
fn zero_state_has_zero_norms() {
    let g = grid(20.0 * PI, 128);
    let s = WaveState::zero(&g, 0.0);
    let r = control_norms(&s);
    assert_eq!(r.a0 + r.a_quarter + r.a_half + r.a_sharp + r.x + r.energy, 0.0);
    assert_eq!(wh_sharp(&s), 0.0);
    let z = Field::zeros(&g);
    let split = ell_hyp_split((&z, &z), 4.0).unwrap();
    assert_eq!(xsharp_norm(&split, 3.0).total, 0.0);
}

#[test]
fn single_mode_norms() {
    let l = 2.0 * PI * 8.0;
    let g = grid(l, 64);
    let a = 1e-3;
    let j = -4;
    let k = j as f64 * g.spec().dk();
    // W_alpha = a e^{ik alpha}
    let w = Field::mode(&g, j, C64::new(0.0, -a / k));
    let s = WaveState::from_fields(0.0, &w, &Field::zeros(&g)).unwrap();
    let bw = s.aux.bw.field();
    assert!((bw.norm_sup() - a).abs() < 1e-15);
    let x = x_norm(bw, &Field::zeros(&g)) - besov_norm(bw, 0.25);
    assert!((x - a / k.abs().sqrt()).abs() < 1e-12 * a);
    let r = control_norms(&s);
    assert!((r.a0 - (a + a / (1.0 - a))).abs() < 1e-12 * a, "{}", r.a0);
}

#[test]
fn quarter_norm_controls_fractional_sup() {
    let g = grid(100.0 * PI, 1024);
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jmax = g.spec().keep() / 2;
        let w = random_field(&g, &mut rng, jmax, true);
        let q = random_field(&g, &mut rng, jmax, true);
        let w = w.scale(1e-3 / w.dx().norm_sup());
        let q = q.scale(1e-3 / q.dx().norm_sup());
        let s = WaveState::from_fields(0.0, &w, &q).unwrap();
        let lhs = frac_derivative(s.aux.bw.field(), 0.25).unwrap().norm_sup()
            + frac_derivative(&s.aux.r.field().without_mean(), 0.75).unwrap().norm_sup();
        worst = worst.max(lhs / control_norms(&s).a_quarter);
    }
    println!("fractional sup over A_quarter: {worst}");
    assert!(worst <= 1.3, "{worst}");
}

#[test]
fn weighted_energy_third_term_at_initial_time() {
    let g = grid(100.0 * PI, 1024);
    let s = PacketData::new(1e-3, 0.5, 0.1).state(&g, 0.0).unwrap();
    let cfg = ParaConfig::default();
    let sf = scaling_fields(&s, &para_nf(&s, &cfg), &cfg);
    let third = holoww::spectral_core::sobolev_norm(sf.frak_w.field(), sf.frak_r.field(), 0.25, true).unwrap();
    let weighted = holoww::spectral_core::sobolev_norm(
        &s.aux.bw.field().mul_alpha(),
        &s.aux.r.field().mul_alpha(),
        0.25,
        true,
    )
    .unwrap();
    let ratio = third / weighted;
    println!("third term over weighted norm: {ratio}");
    assert!((0.5..=2.0).contains(&ratio), "{ratio}");
}

#[test]
fn weighted_energy_is_nearly_linear_in_amplitude() {
    let g = grid(100.0 * PI, 1024);
    let at = |eps: f64| wh_sharp(&PacketData::new(eps, 0.5, 0.1).state(&g, 0.0).unwrap());
    let ratio = at(1e-3) / at(5e-4);
    assert!((1.9..=2.1).contains(&ratio), "{ratio}");
}

#[test]
fn norms_follow_the_scaling_law() {
    let g = grid(100.0 * PI, 2048);
    let lam: f64 = 2.0;
    let l2 = lam * lam;
    let w1 = bump(&g, 1e-2, 0.0, 40.0, 0.5);
    let q1 = bump(&g, 5e-3, 0.0, 40.0, 0.5);
    let w2 = bump(&g, 1e-2 / l2, 0.0, 40.0 / l2, 0.5 * l2);
    let q2 = bump(&g, 5e-3 / lam.powi(3), 0.0, 40.0 / l2, 0.5 * l2);
    let orders = [0.25, 1.0];
    let r1 = control_norms(&WaveState::from_fields(0.0, &w1, &q1).unwrap())
        .with_sobolev(&WaveState::from_fields(0.0, &w1, &q1).unwrap(), &orders);
    let s2 = WaveState::from_fields(0.0, &w2, &q2).unwrap();
    let r2 = control_norms(&s2).with_sobolev(&s2, &orders);
    assert!((r2.a0 / r1.a0 - 1.0).abs() < 0.02, "{} {}", r1.a0, r2.a0);
    for (i, &o) in orders.iter().enumerate() {
        let want = lam.powf(2.0 * o - 3.0);
        let got = r2.hs[i].1 / r1.hs[i].1;
        assert!((got / want - 1.0).abs() < 0.02, "s {o}: {got} vs {want}");
    }
}

#[test]
fn spatial_cover_is_a_partition() {
    let g = desk();
    for t in [4.0, 16.0, 64.0] {
        let cover = spatial_cover(&g, t).unwrap();
        let worst = cover.total().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "t {t}: {worst}");
    }
    assert!(matches!(spatial_cover(&g, 0.5), Err(Error::TimeTooSmall(_))));
}

#[test]
fn split_reconstructs_its_input() {
    let g = desk();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let w = random_field(&g, &mut rng, 300, true);
    let q = random_field(&g, &mut rng, 300, true);
    let split = ell_hyp_split((&w, &q), 20.0).unwrap();
    let (a, b) = split.reconstruct();
    assert!((&a - &w).norm_l2() < 1e-10 * w.norm_l2());
    assert!((b.dx() - q.dx()).norm_l2() < 1e-10 * q.dx().norm_l2());
    assert!(matches!(ell_hyp_split((&w, &q), 0.9), Err(Error::TimeTooSmall(_))));
}

#[test]
fn packet_lands_in_its_hyperbolic_block() {
    let g = desk();
    let t = 64.0;
    let v = 1.0;
    let f = build_packet(t, v, &g).unwrap();
    let split = ell_hyp_split((&f.w, &f.q), t).unwrap();
    let blk = split
        .blocks
        .iter()
        .min_by(|a, b| (a.center - v * t).abs().total_cmp(&(b.center - v * t).abs()))
        .unwrap();
    let share = mass(&blk.hyp) / mass(&(f.w.clone(), f.q.clone()));
    println!("packet mass in block {}: {share}", blk.center);
    assert!(share >= 0.8, "{share}");
}

#[test]
fn high_frequency_bump_is_elliptic() {
    let g = desk();
    let t = 64.0;
    let a0 = 256.0;
    let xi0 = t * t / (4.0 * a0 * a0);
    let w = bump(&g, 1.0, a0, 20.0, 100.0 * xi0);
    let q = w.clone();
    let split = ell_hyp_split((&w, &q), t).unwrap();
    let share = mass(&split.ell) / mass(&(w, q));
    assert!(share > 0.99, "{share}");
}

#[test]
fn xsharp_exponents_track_sigma() {
    let (a, b) = xsharp_exponents(3.0);
    assert_eq!(a, 1.25);
    assert!((b - 0.0625).abs() < 1e-15);
    let (_, b2) = xsharp_exponents(3.8);
    assert!((b2 - b - 0.2).abs() < 1e-14);
}

#[test]
fn x_norm_of_hyp_part_is_controlled_by_xsharp() {
    let g = desk();
    let t = 16.0;
    let mut cs = Vec::new();
    for seed in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let w = random_field(&g, &mut rng, 200, true);
        let q = random_field(&g, &mut rng, 200, true);
        let split = ell_hyp_split((&w, &q), t).unwrap();
        cs.push(split.hyp_x_norm() / xsharp_norm(&split, 3.0).total);
    }
    let hi = cs.iter().cloned().fold(0.0, f64::max);
    let lo = cs.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("fitted constants {cs:?}");
    assert!(hi / lo < 2.0, "{cs:?}");
}

#[test]
fn velocity_mask_keeps_only_far_blocks() {
    let g = desk();
    let f = build_packet(64.0, 1.0, &g).unwrap();
    let split = ell_hyp_split((&f.w, &f.q), 64.0).unwrap();
    let all = mass(&split.hyp);
    let far = mass(&hyp_velocity_masked(&split, 0.5));
    let none = mass(&hyp_velocity_masked(&split, 10.0));
    assert!(far < 1e-6 * all, "{far} {all}");
    assert_eq!(none, 0.0);
}

fn series(ts: &[f64], f: impl Fn(f64) -> f64) -> Vec<NormRecord> {
    ts.iter().map(|&t| NormRecord { t, x: f(t), a0: 1.0, ..NormRecord::default() }).collect()
}

#[test]
fn decay_fit_recovers_power_laws() {
    let ts: Vec<f64> = (0..12).map(|i| 10f64 * 1.3f64.powi(i)).collect();
    let fit = decay_fit(&series(&ts, |t| 3.0 * t.powf(-0.5)), "X", (0.0, 1e9)).unwrap();
    assert!((fit.slope + 0.5).abs() < 1e-12);
    assert!(fit.stderr < 1e-10);
    let flat = decay_fit(&series(&ts, |_| 2.0), "A0", (0.0, 1e9)).unwrap();
    assert!(flat.slope.abs() < 1e-12);
    assert!(matches!(decay_fit(&series(&ts, |_| 1.0), "nope", (0.0, 1e9)), Err(Error::Usage(_))));
}

#[test]
fn decay_fit_needs_enough_samples() {
    let short: Vec<f64> = (0..5).map(|i| 10.0 * 2f64.powi(i)).collect();
    let r = fit_power_law(&short, &[1.0; 5]);
    assert!(matches!(r, Err(Error::InsufficientSamples { got: 5, .. })));
    let narrow: Vec<f64> = (0..10).map(|i| 10.0 + i as f64).collect();
    assert!(matches!(fit_power_law(&narrow, &[1.0; 10]), Err(Error::InsufficientSamples { .. })));
}
