use std::f64::consts::PI;
use std::sync::Arc;

use holoww::diagnostics::fit_power_law;
use holoww::spectral_core::{frac_derivative_nomean, random_field, Field, Grid, GridSpec, C64};
use holoww::waterwave_dynamics::{propagate_linear, PacketData};
use holoww::wavepacket_testing::{
    asymptotic_residual, build_packet, chi, cubic_term, eval_at, gamma_pair, gamma_rewrite, hatq_mismatch,
    packet_defect, packet_reconstruction_error, theta_functional, velocity_grid, xi_v, GammaProfile,
};
use holoww::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn desk() -> Arc<Grid> {
    Grid::new(GridSpec::new(400.0 * PI, 2048, 2.0 / 3.0).unwrap())
}

/// Fine enough to resolve alpha derivatives of the compact bump at t = 64.
fn fine() -> Arc<Grid> {
    Grid::new(GridSpec::new(200.0 * PI, 16384, 2.0 / 3.0).unwrap())
}

fn rel(a: &Field, b: &Field) -> f64 {
    (a - b).norm_l2() / b.norm_l2()
}

/// Richardson-extrapolated centered difference of a time-dependent field.
fn d_dt(f: impl Fn(f64) -> Field, t: f64, h: f64) -> Field {
    let c = |h: f64| (f(t + h) - f(t - h)).scale(0.5 / h);
    (c(h / 2.0).scale(4.0) - c(h)).scale(1.0 / 3.0)
}

#[test]
fn bump_has_unit_integral() {
    let n = 200_000;
    let h = 2.0 / n as f64;
    // Simpson on [-1, 1]
    let s: f64 = (0..=n)
        .map(|i| {
            let wgt = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            wgt * chi(-1.0 + i as f64 * h)
        })
        .sum::<f64>()
        * h
        / 3.0;
    assert!((s - 1.0).abs() < 1e-10, "{s}");
    assert_eq!(chi(1.0), 0.0);
}

#[test]
fn phase_on_the_ray() {
    let g = desk();
    let (t, v) = (64.0, 1.02);
    let f = build_packet(t, v, &g).unwrap();
    assert!((f.phase_on_ray() - t / (4.0 * v)).abs() < 1e-14);
    let i = g.alpha().iter().enumerate().min_by(|a, b| (a.1 - v * t).abs().total_cmp(&(b.1 - v * t).abs())).unwrap().0;
    let a = g.alpha()[i];
    assert!((f.phi[i] - t * t / (4.0 * a)).abs() < 1e-12);
}

#[test]
fn packet_is_supported_near_the_ray() {
    let g = desk();
    let f = build_packet(64.0, 1.0, &g).unwrap();
    let vals = f.u.values();
    let peak = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let outside = g
        .alpha()
        .iter()
        .zip(&vals)
        .filter(|(a, _)| (*a - 64.0).abs() > 10.0 * f.width)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    assert!(outside <= 1e-8 * peak, "{outside}");
}

#[test]
fn spectral_center_is_the_packet_frequency() {
    let g = desk();
    let dk = g.spec().dk();
    for v in [0.97, 1.0, 1.03] {
        let f = build_packet(64.0, v, &g).unwrap();
        let (num, den) = f
            .u
            .coef()
            .iter()
            .zip(g.k())
            .fold((0.0, 0.0), |(n, d), (c, &k)| (n + k * c.norm_sqr(), d + c.norm_sqr()));
        let center = num / den;
        assert!((center - xi_v(v)).abs() <= 2.0 * dk, "v {v}: {center} vs {}", xi_v(v));
        let width = 10.0 / (64f64.sqrt() * v.powf(1.5));
        let near: f64 = f
            .u
            .coef()
            .iter()
            .zip(g.k())
            .filter(|(_, &k)| (k - xi_v(v)).abs() <= width)
            .map(|(c, _)| c.norm_sqr())
            .sum();
        assert!(near >= 0.95 * den);
    }
}

#[test]
fn companion_w_is_the_time_derivative() {
    let g = fine();
    let (t, v) = (64.0, 1.0);
    let f = build_packet(t, v, &g).unwrap();
    let ut = d_dt(|s| build_packet(s, v, &g).unwrap().u, t, 0.005);
    let w_num = ut.scale_c(C64::new(0.0, -v));
    let e = rel(&f.w, &w_num);
    assert!(e < 1e-8, "{e:e}");
    assert!(rel(&f.u_t, &ut) < 1e-8);
    assert!(rel(&f.u_a, &f.u.dx()) < 1e-8);
}

#[test]
fn defect_matches_direct_assembly() {
    let g = fine();
    let (t, v) = (64.0, 1.0);
    let f = build_packet(t, v, &g).unwrap();
    let wt = d_dt(|s| build_packet(s, v, &g).unwrap().w, t, 0.005);
    let direct = wt + f.q.dx();
    let d = packet_defect(&f);
    let e = (&d.g - &direct).norm_l2() / f.w_t().norm_l2();
    println!("defect closed form vs direct, relative to w_t: {e:e}");
    assert!(e < 1e-8, "{e:e}");
}

#[test]
fn defect_decays_like_inverse_time() {
    let g = desk();
    let ts = [16.0, 32.0, 64.0, 128.0, 256.0];
    let mut size = Vec::new();
    let mut gain = Vec::new();
    for &t in &ts {
        let f = build_packet(t, 1.0, &g).unwrap();
        let d = packet_defect(&f);
        size.push(d.g.norm_l2() / f.w.norm_l2());
        gain.push(1.0 / d.subleading_ratio());
    }
    let s = slope(&ts, &size);
    let r = slope(&ts, &gain);
    println!("defect slope {s}, leading over subleading slope {r}");
    assert!((-1.2..=-0.8).contains(&s), "{s}");
    assert!((0.3..=0.7).contains(&r), "{r}");
}

fn slope(ts: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn gamma_of_zero_and_of_the_packet_itself() {
    let g = desk();
    let z = Field::zeros(&g);
    let f = build_packet(64.0, 1.0, &g).unwrap();
    assert_eq!(gamma_pair(&z, &z, &f).unwrap(), C64::new(0.0, 0.0));
    let chi2: f64 = {
        let n = 20_000;
        let h = 2.0 / n as f64;
        (1..n).map(|i| chi(-1.0 + i as f64 * h).powi(2)).sum::<f64>() * h
    };
    let mut dev = Vec::new();
    for t in [16.0, 64.0, 256.0] {
        let f = build_packet(t, 1.0, &g).unwrap();
        let gam = gamma_pair(&f.w, &f.q, &f).unwrap();
        // direct quadrature of |w|^2 + q conj(|D| q)
        let dx = g.spec().dx();
        let dq = frac_derivative_nomean(&f.q, 1.0).values();
        let oracle: C64 = f.w.values().iter().map(|w| w.norm_sqr()).sum::<f64>() * dx
            + f.q.values().iter().zip(&dq).map(|(q, d)| d * q.conj()).sum::<C64>() * dx;
        assert!((gam - oracle).norm() < 1e-10 * oracle.norm());
        dev.push((gam.norm() / (0.5 * t.sqrt() * chi2) - 1.0).abs());
    }
    println!("self-pairing deviation from 0.5 t^(1/2) |chi|^2: {dev:?}");
    assert!(dev[2] < dev[0] && dev[2] < 0.1, "{dev:?}");
}

#[test]
fn gamma_is_nearly_constant_along_the_linear_flow() {
    let g = desk();
    let (w0, q0) = PacketData::for_velocity(1e-3, 1.0, 0.3).fields(&g);
    let mut mags = Vec::new();
    for t in [20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0] {
        let (w, q) = propagate_linear(&w0, &q0, t);
        let f = build_packet(t, 1.0, &g).unwrap();
        let gam = gamma_pair(&w, &q, &f).unwrap();
        let red = gamma_rewrite(&w, &q, &f).unwrap();
        assert!((gam - red).norm() < 0.2 * gam.norm(), "{gam} {red}");
        mags.push(gam.norm());
    }
    let hi = mags.iter().cloned().fold(0.0, f64::max);
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!((hi - lo) / hi < 0.1, "{mags:?}");
}

#[test]
fn residual_of_frozen_profiles() {
    let vs = vec![0.98, 1.0, 1.02];
    let c = [C64::new(0.4, -0.1), C64::new(0.0, 0.0), C64::new(-1.0, 2.0)];
    let mut prof = GammaProfile::new(vs.clone());
    for t in [10.0, 20.0, 30.0] {
        prof.push(t, c.to_vec(), vec![C64::new(0.0, 0.0); 3]);
    }
    let res = asymptotic_residual(&prof).unwrap();
    for (i, &t) in res.times.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate() {
            let want = -cubic_term(t, v, c[j]);
            assert!((res.analytic[i][j] - want).norm() <= 1e-15 * want.norm().max(1e-300));
            let direct = -C64::new(0.0, 1.0) * c[j] * c[j].norm_sqr() / (2.0 * t * (2.0 * v).powi(5));
            assert!((want - direct).norm() <= 1e-15 * direct.norm().max(1e-300));
        }
    }
    assert!((res.centered[0][0] - res.analytic[1][0]).norm() < 1e-15);
    assert_eq!(res.analytic[0][1], C64::new(0.0, 0.0));
    prof.times.truncate(2);
    assert!(matches!(asymptotic_residual(&prof), Err(Error::InsufficientSamples { .. })));
}

#[test]
fn theta_pairs_the_packet_with_itself() {
    let g = desk();
    let t = 64.0;
    let vs = velocity_grid(t, 9);
    let zero = theta_functional(&Field::zeros(&g), t, &vs).unwrap();
    assert!(zero.theta.iter().all(|z| z.norm() == 0.0));
    let f = build_packet(t, vs[4], &g).unwrap();
    let th = theta_functional(&f.u.conj(), t, &vs).unwrap();
    let want = f.u.norm_l2().powi(2);
    assert!((th.theta[4] - want).norm() < 1e-10 * want);
}

#[test]
fn theta_bound_is_stable_over_random_data() {
    let g = desk();
    let t = 64.0;
    let vs = velocity_grid(t, 17);
    let window = Field::from_fn(&g, |a| C64::new((-((a - t) / 16.0).powi(2)).exp(), 0.0));
    let mut ratios = Vec::new();
    for seed in 0..5 {
        let f = random_field(&g, &mut ChaCha8Rng::seed_from_u64(seed), 200, false);
        let f = Field::from_values(&g, &f.values().iter().zip(window.values()).map(|(a, b)| a * b).collect::<Vec<_>>());
        ratios.push(theta_functional(&f, t, &vs).unwrap().ratio);
    }
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("theta ratios {ratios:?}");
    assert!(hi / lo <= 2.0, "{ratios:?}");
}

#[test]
fn reconstruction_of_linear_packet_data() {
    let g = desk();
    let t = 64.0;
    let (w0, q0) = PacketData::for_velocity(1e-3, 1.0, 0.3).fields(&g);
    let (w, q) = propagate_linear(&w0, &q0, t);
    let vs = velocity_grid(t, 9);
    let e0 = packet_reconstruction_error(&w, &q, t, &vs, 0.0).unwrap();
    let peak = e0.hyp_w.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let worst = e0.err.iter().map(|e| e.0.norm()).fold(0.0, f64::max);
    assert!(worst <= 0.2 * peak, "{worst} vs {peak}");
    let e1 = packet_reconstruction_error(&w, &q, t, &vs, 0.5).unwrap();
    for (j, &v) in vs.iter().enumerate() {
        let p0 = e0.hyp_w[j] - e0.err[j].0;
        let p1 = e1.hyp_w[j] - e1.err[j].0;
        assert!((p1 / p0 - xi_v(v).abs().sqrt()).norm() < 1e-10);
    }
}

#[test]
fn reconstruction_error_decays_along_the_linear_flow() {
    let g = desk();
    let (w0, q0) = PacketData::for_velocity(1e-3, 1.0, 0.3).fields(&g);
    let ts: Vec<f64> = (0..9).map(|i| 16.0 * 2f64.powf(i as f64 / 2.0)).collect();
    let mut l2 = Vec::new();
    for &t in &ts {
        let (w, q) = propagate_linear(&w0, &q0, t);
        l2.push(packet_reconstruction_error(&w, &q, t, &velocity_grid(t, 33), 0.0).unwrap().l2);
    }
    let fit = fit_power_law(&ts, &l2).unwrap();
    assert!((-1.3..=-0.7).contains(&fit.slope), "{}", fit.slope);
}

#[test]
fn spectrum_matches_the_stationary_phase_form() {
    let g = desk();
    let m = hatq_mismatch(&build_packet(64.0, 1.0, &g).unwrap());
    assert!(m < 0.05, "{m}");
}

#[test]
fn interpolant_reproduces_grid_values() {
    let g = desk();
    let f = build_packet(64.0, 1.0, &g).unwrap();
    let vals = f.u.values();
    for i in [1000usize, 1100, 1124] {
        assert!((eval_at(&f.u, g.alpha()[i]) - vals[i]).norm() < 1e-12);
    }
}

#[test]
fn packets_outside_the_domain_are_rejected() {
    let g = desk();
    assert!(matches!(build_packet(2.0, 1.0, &g), Err(Error::OutOfDomain { .. })));
    assert!(matches!(build_packet(64.0, 2.0, &g), Err(Error::OutOfDomain { .. })));
    assert!(matches!(build_packet(600.0, 1.0, &g), Err(Error::WrapAround { .. })));
}
