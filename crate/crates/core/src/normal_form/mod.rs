//! Normal form variables for the holomorphic system, their cubic sources and
//! the scaling fields built from them.

mod intermediate;
mod scaling;
mod terms;

pub use intermediate::{intermediate_sources, SourceGroups};
pub use scaling::{scaling_fields, ts_relation, ScalingDerivatives, TsCheck};
pub use terms::{
    classify_cubic, cubic_sources, cubic_sources_on, term_table, term_table_dump, CubicClass,
    CubicGroup, CubicSources, CubicTerm, TermInputs,
};

use crate::error::{Error, Result};
use crate::paradiff_calculus::ParaConfig;
use crate::spectral_core::{project_neg, Field, HoloField};
use crate::waterwave_dynamics::{rhs_full, WaveState};

/// The normal form pair with its cubic sources and measured residuals.
#[derive(Clone, Debug)]
pub struct NormalFormState {
    pub t: f64,
    pub w: HoloField,
    pub q: HoloField,
    /// P[conj(Q_a) W_a - Q_a conj(W_a)] in the normal form variables.
    pub f2: HoloField,
    pub g3: HoloField,
    pub k3: HoloField,
    /// Sources measured from the flow with the analytic time derivative.
    pub resid_g: HoloField,
    pub resid_k: HoloField,
}

/// Time derivatives of W, Q and R along the full flow.
#[derive(Clone, Debug)]
pub struct Rates {
    pub w: Field,
    pub q: Field,
    pub r: Field,
}

/// (W_t, Q_t, R_t) from the right side of the full system, R_t by the chain rule.
pub fn rates(s: &WaveState) -> Rates {
    let rate = rhs_full(s);
    let w_t = rate.dw.into_field();
    let q_t = rate.dq.into_field();
    let one = crate::C64::new(1.0, 0.0);
    let r_t = Field::pointwise(&[&q_t.dx(), s.aux.r.field(), &w_t.dx(), s.aux.bw.field()], |v| {
        (v[0] - v[1] * v[2]) / (one + v[3])
    });
    Rates { w: w_t, q: q_t, r: project_neg(&r_t).into_field() }
}

/// W - P[2 Re W W_a], Q - P[2 Re W R].
pub fn classical_nf(s: &WaveState) -> (HoloField, HoloField) {
    let w = s.w.field();
    let rw = w.two_re();
    let wt = w - &rw.mul(&w.dx()).neg_part();
    let qt = s.q.field() - &rw.mul(s.aux.r.field()).neg_part();
    (project_neg(&wt), project_neg(&qt))
}

/// Time derivative of the classical normal form variables.
pub fn classical_nf_rate(s: &WaveState, d: &Rates) -> (Field, Field) {
    let w = s.w.field();
    let rw = w.two_re();
    let rwt = d.w.two_re();
    let wt = &d.w - &(rwt.mul(&w.dx()) + rw.mul(&d.w.dx())).neg_part();
    let qt = &d.q - &(rwt.mul(s.aux.r.field()) + rw.mul(&d.r)).neg_part();
    (wt, qt)
}

/// Sources of the classical normal form, (W~_t + Q~_a, Q~_t - i W~).
pub fn classical_sources(s: &WaveState) -> (HoloField, HoloField) {
    let d = rates(s);
    let (w, q) = classical_nf(s);
    let (wt, qt) = classical_nf_rate(s, &d);
    (project_neg(&(wt + q.dx())), project_neg(&(qt - w.times_i())))
}

/// Raw quadratic and higher sources of the original system, (W_t + Q_a, Q_t - i W).
pub fn raw_sources(s: &WaveState) -> (HoloField, HoloField) {
    let d = rates(s);
    (project_neg(&(d.w + s.q.dx())), project_neg(&(d.q - s.w.times_i())))
}

fn para_map(cfg: &ParaConfig, w: &Field, q: &Field, r: &Field) -> (Field, Field) {
    let wa = w.dx();
    let rw = w.two_re();
    let wt = w - &cfg.t(&wa, w) - cfg.pi(&wa, &rw);
    let qt = q - &cfg.t(r, w) - cfg.pi(r, &rw);
    (wt, qt)
}

pub(crate) fn para_map_rate(cfg: &ParaConfig, s: &WaveState, d: &Rates) -> (Field, Field) {
    let w = s.w.field();
    let r = s.aux.r.field();
    let wa = w.dx();
    let rw = w.two_re();
    let wat = d.w.dx();
    let rwt = d.w.two_re();
    let wt = &d.w - &cfg.t(&wat, w) - cfg.t(&wa, &d.w) - cfg.pi(&wat, &rw) - cfg.pi(&wa, &rwt);
    let qt = &d.q - &cfg.t(&d.r, w) - cfg.t(r, &d.w) - cfg.pi(&d.r, &rw) - cfg.pi(r, &rwt);
    (wt, qt)
}

/// W - T_{W_a} W - Pi(W_a, 2 Re W), Q - T_R W - Pi(R, 2 Re W).
pub fn para_variables(s: &WaveState, cfg: &ParaConfig) -> (HoloField, HoloField) {
    let (w, q) = para_map(cfg, s.w.field(), s.q.field(), s.aux.r.field());
    (project_neg(&w), project_neg(&q))
}

/// Time derivatives of (W~, Q~) along the full flow.
pub fn para_rate(s: &WaveState, cfg: &ParaConfig) -> (HoloField, HoloField) {
    let (wt, qt) = para_map_rate(cfg, s, &rates(s));
    (project_neg(&wt), project_neg(&qt))
}

/// Left sides of the paradifferential system given W~, Q~ and their time derivatives.
fn para_lhs(cfg: &ParaConfig, w: &Field, q: &Field, wt: &Field, qt: &Field) -> (HoloField, HoloField) {
    let wa = w.dx();
    let qa = q.dx();
    let rwa = wa.two_re();
    let rqa = qa.two_re();
    let g = wt + &qa - cfg.t(&rwa, &qa) + cfg.t(&rqa, &wa);
    let k = qt - &w.times_i() + cfg.t(&rqa, &qa);
    (project_neg(&g), project_neg(&k))
}

/// Sources (G~, K~) measured with the analytic time derivative.
pub fn flow_residual_analytic(s: &WaveState, cfg: &ParaConfig) -> (HoloField, HoloField) {
    let d = rates(s);
    let (w, q) = para_variables(s, cfg);
    let (wt, qt) = para_map_rate(cfg, s, &d);
    para_lhs(cfg, &w, &q, &wt, &qt)
}

/// Sources (G~, K~) at the middle snapshot, with a centered time difference.
pub fn flow_residual(traj: [&WaveState; 3], cfg: &ParaConfig) -> Result<(HoloField, HoloField)> {
    let [a, b, c] = traj;
    let h1 = b.t - a.t;
    let h2 = c.t - b.t;
    if !(h1 > 0.0 && h2 > 0.0) || (h1 - h2).abs() > 1e-9 * h1.max(h2) {
        return Err(Error::InconsistentTimes([a.t, b.t, c.t]));
    }
    a.w.check_grid(b.w.field())?;
    a.w.check_grid(c.w.field())?;
    let (wa, qa) = para_variables(a, cfg);
    let (wc, qc) = para_variables(c, cfg);
    let (w, q) = para_variables(b, cfg);
    let inv = 1.0 / (c.t - a.t);
    let wt = (wc.field() - wa.field()).scale(inv);
    let qt = (qc.field() - qa.field()).scale(inv);
    Ok(para_lhs(cfg, &w, &q, &wt, &qt))
}

/// The paradifferential normal form at one state, with cubic sources and analytic residuals.
pub fn para_nf(s: &WaveState, cfg: &ParaConfig) -> NormalFormState {
    let (w, q) = para_variables(s, cfg);
    let cubic = cubic_sources_on(&TermInputs::new(w.field(), q.field()), cfg);
    let (resid_g, resid_k) = flow_residual_analytic(s, cfg);
    NormalFormState {
        t: s.t,
        f2: cubic.f2.clone(),
        g3: cubic.g(),
        k3: cubic.k(),
        w,
        q,
        resid_g,
        resid_k,
    }
}
