use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::diagnostics::{ell_hyp_split, flat_top};
use crate::error::{Error, Result};
use crate::spectral_core::{frac_derivative_nomean, project_neg, Field, Grid, HoloField};

use super::gamma::gamma_pair;
use super::packet::{build_packet, chi, PacketFrame};

/// Value of the trigonometric interpolant of `f` at an arbitrary point.
pub fn eval_at(f: &Field, alpha: f64) -> C64 {
    f.coef().iter().zip(f.grid().k()).map(|(c, &k)| c * C64::from_polar(1.0, k * alpha)).sum()
}

fn l2_v(vs: &[f64], vals: &[f64]) -> f64 {
    vs.windows(2)
        .zip(vals.windows(2))
        .map(|(v, f)| 0.5 * (v[1] - v[0]) * (f[0] * f[0] + f[1] * f[1]))
        .sum::<f64>()
        .sqrt()
}

/// theta(v) = int f u_v on a velocity grid.
#[derive(Clone, Debug)]
pub struct ThetaProfile {
    pub velocities: Vec<f64>,
    pub theta: Vec<C64>,
    /// |theta|_{L^2_v} / |f|_{L^2_alpha}.
    pub ratio: f64,
}

pub fn theta_functional(f: &Field, t: f64, velocities: &[f64]) -> Result<ThetaProfile> {
    let mut theta = Vec::with_capacity(velocities.len());
    for &v in velocities {
        let frame = build_packet(t, v, f.grid())?;
        theta.push(f.bilinear(&frame.u));
    }
    let mags: Vec<f64> = theta.iter().map(|z| z.norm()).collect();
    let fl = f.norm_l2();
    let ratio = if fl == 0.0 { 0.0 } else { l2_v(velocities, &mags) / fl };
    Ok(ThetaProfile { velocities: velocities.to_vec(), theta, ratio })
}

/// err_s along the ray grid for one order s.
#[derive(Clone, Debug)]
pub struct ReconstructionError {
    pub s: f64,
    pub velocities: Vec<f64>,
    /// (err for |D|^s W~, err for |D|^{s+1/2} Q~) at each velocity.
    pub err: Vec<(C64, C64)>,
    /// (|D|^s W~)_hyp at alpha = v t.
    pub hyp_w: Vec<C64>,
    pub gamma: Vec<C64>,
    /// |v^{2s-1} err_s|_{L^2_v}.
    pub l2: f64,
    /// |v^{2s-1/4} err_s|_{L^inf_v}.
    pub linf: f64,
}

/// Compares (|D|^s W~, |D|^{s+1/2} Q~)_hyp(t, v t) with |xi_v|^s t^{-1/2} e^{i phi} gamma (1, sgn v).
pub fn packet_reconstruction_error(w: &Field, q: &Field, t: f64, velocities: &[f64], s: f64) -> Result<ReconstructionError> {
    let split = ell_hyp_split((w, q), t)?;
    let hw = frac_derivative_nomean(&split.hyp.0, s);
    let hq = frac_derivative_nomean(&split.hyp.1, s + 0.5);
    let mut err = Vec::new();
    let mut hyp_w = Vec::new();
    let mut gammas = Vec::new();
    for &v in velocities {
        let frame = build_packet(t, v, w.grid())?;
        let g = gamma_pair(w, q, &frame)?;
        let a = v * t;
        let pred = C64::from_polar(frame.xi().abs().powf(s) / t.sqrt(), frame.phase_on_ray()) * g;
        let xw = eval_at(&hw, a);
        err.push((xw - pred, eval_at(&hq, a) - pred * v.signum()));
        hyp_w.push(xw);
        gammas.push(g);
    }
    let mag = |e: &(C64, C64)| (e.0.norm_sqr() + e.1.norm_sqr()).sqrt();
    let w2: Vec<f64> = velocities.iter().zip(&err).map(|(v, e)| v.abs().powf(2.0 * s - 1.0) * mag(e)).collect();
    let linf = velocities
        .iter()
        .zip(&err)
        .map(|(v, e)| v.abs().powf(2.0 * s - 0.25) * mag(e))
        .fold(0.0, f64::max);
    Ok(ReconstructionError { s, velocities: velocities.to_vec(), l2: l2_v(velocities, &w2), linf, err, hyp_w, gamma: gammas })
}

/// Spectrum of u predicted by stationary phase with the quadratic expansion of
/// the phase at xi_v, as Fourier coefficients of the grid convention.
pub fn hatq_reference(frame: &PacketFrame) -> Field {
    let (t, v, d) = (frame.t, frame.v, frame.width);
    let n = 800;
    let h = 2.0 / n as f64;
    let nodes: Vec<(f64, f64)> = (1..n).map(|i| -1.0 + i as f64 * h).map(|y| (y, chi(y) * h)).collect();
    let period = frame.grid().period();
    Field::from_spectrum(frame.grid(), |xi| {
        let eta = xi + 1.0 / (4.0 * v * v);
        let z = eta * d;
        let integral: C64 = nodes.iter().map(|&(y, wgt)| C64::from_polar(wgt, y * y / 4.0 - z * y)).sum();
        C64::from_polar(t.sqrt() / period, t / (2.0 * v) - v * t * eta) * integral
    })
}

/// Relative L^2 mismatch between the spectrum of u and [`hatq_reference`].
pub fn hatq_mismatch(frame: &PacketFrame) -> f64 {
    let r = hatq_reference(frame);
    (&frame.u - &r).norm_l2() / frame.u.norm_l2()
}

/// The monochromatic ansatz (W~^0, Q~^0) at time t for a velocity profile gamma(v):
/// (W~_a, Q~_a) = i xi_v P_{xi_0}[gamma t^{-1/2} e^{i phi} (1, |xi_v|^{-1/2} sgn v)],
/// with xi_v = -t^2/(4 alpha^2) pointwise and P_{xi_0} the flat-top projector at |xi_0| = `xi0`.
pub fn packet_ansatz(grid: &Arc<Grid>, t: f64, xi0: f64, profile: impl Fn(f64) -> C64) -> Result<(HoloField, HoloField)> {
    if !(t >= 1.0) {
        return Err(Error::TimeTooSmall(t));
    }
    let mut wa = Vec::with_capacity(grid.n());
    let mut qa = Vec::with_capacity(grid.n());
    for &a in grid.alpha() {
        let v = a / t;
        let g = if a == 0.0 { C64::new(0.0, 0.0) } else { profile(v) };
        if g == C64::new(0.0, 0.0) {
            wa.push(g);
            qa.push(g);
            continue;
        }
        let xi = -t * t / (4.0 * a * a);
        let base = g * C64::from_polar(t.powf(-0.5), t * t / (4.0 * a)) * C64::new(0.0, xi);
        wa.push(base);
        qa.push(base * (xi.abs().powf(-0.5) * v.signum()));
    }
    let sym = |k: f64| C64::new(flat_top(k, xi0), 0.0);
    let w = Field::from_values(grid, &wa).apply(sym).integrate();
    let q = Field::from_values(grid, &qa).apply(sym).integrate();
    Ok((project_neg(&w), project_neg(&q)))
}
