use num_complex::Complex64 as C64;

use crate::diagnostics::ell_hyp_split;
use crate::error::{Error, Result};
use crate::normal_form::{para_rate, NormalFormState};
use crate::paradiff_calculus::ParaConfig;
use crate::spectral_core::{frac_derivative_nomean, Field};
use crate::waterwave_dynamics::WaveState;

use super::packet::{omega0, PacketFrame};

/// Points on the velocity grid.
pub const VELOCITY_POINTS: usize = 33;

/// Log-spaced velocities filling Omega^0 at time t.
pub fn velocity_grid(t: f64, points: usize) -> Vec<f64> {
    let (lo, hi) = omega0(t);
    let n = points.max(2);
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// H^0 pairing <(w, q), (w', q')> = int w conj(w') + int |D|^{1/2} q conj(|D|^{1/2} q').
pub fn h0_pairing(w: &Field, q: &Field, wp: &Field, qp: &Field) -> C64 {
    w.inner(wp) + frac_derivative_nomean(q, 1.0).inner(qp)
}

/// gamma(t, v) = <(W~, Q~), (w, q)>_{H^0}.
pub fn gamma_pair(w: &Field, q: &Field, frame: &PacketFrame) -> Result<C64> {
    w.check_grid(&frame.u).map_err(|_| Error::OutOfDomain { t: frame.t, v: frame.v })?;
    Ok(h0_pairing(w, q, &frame.w, &frame.q))
}

pub fn gamma(nf: &NormalFormState, frame: &PacketFrame) -> Result<C64> {
    gamma_pair(nf.w.field(), nf.q.field(), frame)
}

/// The reduced form (1/2) int (w + sgn(v) r) conj(u) with (w, r) = (W~, |D|^{1/2} Q~)_hyp.
pub fn gamma_rewrite(w: &Field, q: &Field, frame: &PacketFrame) -> Result<C64> {
    w.check_grid(&frame.u).map_err(|_| Error::OutOfDomain { t: frame.t, v: frame.v })?;
    let split = ell_hyp_split((w, q), frame.t)?;
    let r = frac_derivative_nomean(&split.hyp.1, 0.5);
    let f = &split.hyp.0 + &r.scale(frame.v.signum());
    Ok(f.inner(&frame.u) * 0.5)
}

/// d gamma / dt by the analytic route: the flow derivative of (W~, Q~) paired
/// with the packet plus (W~, Q~) paired with the packet's time derivative.
pub fn gamma_rate(s: &WaveState, nf: &NormalFormState, frame: &PacketFrame, cfg: &ParaConfig) -> C64 {
    let (wt, qt) = para_rate(s, cfg);
    h0_pairing(&wt, &qt, &frame.w, &frame.q) + h0_pairing(nf.w.field(), nf.q.field(), &frame.w_t(), &frame.q_t())
}

/// The cubic term i gamma |gamma|^2 / (2 t (2 v)^5).
pub fn cubic_term(t: f64, v: f64, g: C64) -> C64 {
    C64::new(0.0, 1.0) * g * g.norm_sqr() / (2.0 * t * (2.0 * v).powi(5))
}

/// gamma sampled on a time series and a fixed velocity grid.
#[derive(Clone, Debug, Default)]
pub struct GammaProfile {
    pub times: Vec<f64>,
    pub velocities: Vec<f64>,
    /// gamma[i][j] at times[i], velocities[j].
    pub gamma: Vec<Vec<C64>>,
    /// Analytic d gamma / dt.
    pub rate: Vec<Vec<C64>>,
}

/// ODE residuals e = d gamma/dt - i gamma |gamma|^2 / (2 t (2 v)^5).
#[derive(Clone, Debug)]
pub struct AsymptoticResidual {
    pub times: Vec<f64>,
    pub velocities: Vec<f64>,
    /// With the analytic derivative, at every sample time.
    pub analytic: Vec<Vec<C64>>,
    /// With centered differences, at interior sample times (times[1..n-1]).
    pub centered: Vec<Vec<C64>>,
    /// |cubic term| at every sample.
    pub cubic: Vec<Vec<f64>>,
}

impl GammaProfile {
    pub fn new(velocities: Vec<f64>) -> Self {
        Self { velocities, ..Self::default() }
    }

    pub fn push(&mut self, t: f64, gamma: Vec<C64>, rate: Vec<C64>) {
        self.times.push(t);
        self.gamma.push(gamma);
        self.rate.push(rate);
    }

    /// Samples gamma and its analytic rate on every velocity of the grid.
    pub fn sample(&mut self, s: &WaveState, cfg: &ParaConfig) -> Result<()> {
        let nf = crate::normal_form::para_nf(s, cfg);
        let (wt, qt) = para_rate(s, cfg);
        let mut g = Vec::with_capacity(self.velocities.len());
        let mut r = Vec::with_capacity(self.velocities.len());
        for &v in &self.velocities {
            let frame = super::build_packet(s.t, v, s.w.grid())?;
            g.push(gamma(&nf, &frame)?);
            r.push(
                h0_pairing(&wt, &qt, &frame.w, &frame.q)
                    + h0_pairing(nf.w.field(), nf.q.field(), &frame.w_t(), &frame.q_t()),
            );
        }
        self.push(s.t, g, r);
        Ok(())
    }

    /// CSV rows (t, v, Re gamma, Im gamma, |e|, |cubic term|) with the analytic residual.
    pub fn csv_rows(&self) -> Vec<[f64; 6]> {
        let mut rows = Vec::new();
        for (i, &t) in self.times.iter().enumerate() {
            for (j, &v) in self.velocities.iter().enumerate() {
                let g = self.gamma[i][j];
                let c = cubic_term(t, v, g);
                rows.push([t, v, g.re, g.im, (self.rate[i][j] - c).norm(), c.norm()]);
            }
        }
        rows
    }
}

pub const GAMMA_CSV_HEADER: [&str; 6] = ["t", "v", "re_gamma", "im_gamma", "abs_e", "abs_cubic"];

/// e(t, v) from a sampled profile; needs at least three times.
pub fn asymptotic_residual(profile: &GammaProfile) -> Result<AsymptoticResidual> {
    let n = profile.times.len();
    if n < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: n });
    }
    let vs = &profile.velocities;
    let mut analytic = Vec::with_capacity(n);
    let mut cubic = Vec::with_capacity(n);
    for i in 0..n {
        let t = profile.times[i];
        let cs: Vec<C64> = vs.iter().zip(&profile.gamma[i]).map(|(&v, &g)| cubic_term(t, v, g)).collect();
        analytic.push(profile.rate[i].iter().zip(&cs).map(|(r, c)| r - c).collect());
        cubic.push(cs.iter().map(|c| c.norm()).collect());
    }
    let mut centered = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let (ta, t, tc) = (profile.times[i - 1], profile.times[i], profile.times[i + 1]);
        let row = (0..vs.len())
            .map(|j| {
                let (ga, g, gc) = (profile.gamma[i - 1][j], profile.gamma[i][j], profile.gamma[i + 1][j]);
                let (h1, h2) = (t - ta, tc - t);
                let d = (gc - g) * (h1 / (h2 * (h1 + h2))) + (g - ga) * (h2 / (h1 * (h1 + h2)));
                d - cubic_term(t, vs[j], g)
            })
            .collect();
        centered.push(row);
    }
    Ok(AsymptoticResidual { times: profile.times.clone(), velocities: vs.clone(), analytic, centered, cubic })
}
