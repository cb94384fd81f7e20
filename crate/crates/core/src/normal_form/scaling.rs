//! The scaling field S = t d_t + 2 alpha d_alpha and its normal form counterpart.

use crate::error::{Error, Result};
use crate::paradiff_calculus::ParaConfig;
use crate::spectral_core::{project_neg, sobolev_norm, Field, HoloField};
use crate::waterwave_dynamics::WaveState;

use super::{flow_residual, para_map_rate, para_variables, rates, NormalFormState};

#[derive(Clone, Debug)]
pub struct ScalingDerivatives {
    /// S W and S Q.
    pub sw: HoloField,
    pub sq: HoloField,
    /// (frak w, frak r) = A((S - 2) W, (S - 3) Q).
    pub frak_w: HoloField,
    pub frak_r: HoloField,
    /// S W~ and S Q~.
    pub sw_nf: HoloField,
    pub sq_nf: HoloField,
    /// The paradifferential scaling operator applied to (W~, Q~).
    pub tilde_w: HoloField,
    pub tilde_q: HoloField,
}

fn s_apply(t: f64, u: &Field, u_t: &Field) -> Field {
    u_t.scale(t) + u.dx().mul_alpha().scale(2.0)
}

/// The nonlinear scaling operator acting on a pair (w, q) at time t.
pub fn tilde_scaling(t: f64, w: &Field, q: &Field, cfg: &ParaConfig) -> (HoloField, HoloField) {
    let wa = w.dx();
    let qa = q.dx();
    let rwa = wa.two_re();
    let rqa = qa.two_re();
    let a = wa.mul_alpha().scale(2.0) - qa.scale(t) + (cfg.t(&rwa, &qa) - cfg.t(&rqa, &wa)).scale(t);
    let b = qa.mul_alpha().scale(2.0) + w.times_i().scale(t) - cfg.t(&rqa, &qa).scale(t);
    (project_neg(&a), project_neg(&b))
}

pub fn scaling_fields(s: &WaveState, nf: &NormalFormState, cfg: &ParaConfig) -> ScalingDerivatives {
    let t = s.t;
    let d = rates(s);
    let w = s.w.field();
    let q = s.q.field();
    let sw = s_apply(t, w, &d.w);
    let sq = s_apply(t, q, &d.q);
    let fw = &sw - &w.scale(2.0);
    let fq = &sq - &q.scale(3.0);
    let fr = &fq - &s.aux.r.mul(&fw);
    let (wt, qt) = para_map_rate(cfg, s, &d);
    let sw_nf = s_apply(t, nf.w.field(), &wt);
    let sq_nf = s_apply(t, nf.q.field(), &qt);
    let (tilde_w, tilde_q) = tilde_scaling(t, nf.w.field(), nf.q.field(), cfg);
    ScalingDerivatives {
        sw: project_neg(&sw),
        sq: project_neg(&sq),
        frak_w: project_neg(&fw),
        frak_r: project_neg(&fr),
        sw_nf: project_neg(&sw_nf),
        sq_nf: project_neg(&sq_nf),
        tilde_w,
        tilde_q,
    }
}

/// Outcome of checking S~(W~, Q~) = (S W~, S Q~) - t (G~, K~).
#[derive(Clone, Copy, Debug)]
pub struct TsCheck {
    /// Residual with S from the analytic time derivative and (G~, K~) from centered differences.
    pub residual: f64,
    /// Richardson estimate of the centered-difference error in t (G~, K~).
    pub disc_error: f64,
}

impl TsCheck {
    pub fn ratio(&self) -> f64 {
        self.residual / self.disc_error
    }
}

/// Checks the scaling relation at the common middle snapshot of two symmetric
/// triples with steps h and h/2. Norms are the homogeneous quarter-order pair norm.
pub fn ts_relation(coarse: [&WaveState; 3], fine: [&WaveState; 3], cfg: &ParaConfig) -> Result<TsCheck> {
    let mid = coarse[1];
    if (fine[1].t - mid.t).abs() > 1e-12 * mid.t.abs().max(1.0) {
        return Err(Error::InconsistentTimes([coarse[1].t, fine[1].t, mid.t]));
    }
    let t = mid.t;
    let (gc, kc) = flow_residual(coarse, cfg)?;
    let (gf, kf) = flow_residual(fine, cfg)?;
    let (w, q) = para_variables(mid, cfg);
    let d = rates(mid);
    let (wt, qt) = para_map_rate(cfg, mid, &d);
    let sw = s_apply(t, w.field(), &wt);
    let sq = s_apply(t, q.field(), &qt);
    let (tw, tq) = tilde_scaling(t, w.field(), q.field(), cfg);
    let ra = project_neg(&(tw.field() - &sw + gc.scale(t)));
    let rb = project_neg(&(tq.field() - &sq + kc.scale(t)));
    let residual = sobolev_norm(&ra, &rb, 0.25, true)?;
    let dg = (gc.field() - gf.field()).scale(t * 4.0 / 3.0);
    let dk = (kc.field() - kf.field()).scale(t * 4.0 / 3.0);
    let disc_error = sobolev_norm(&dg, &dk, 0.25, true)?;
    Ok(TsCheck { residual, disc_error })
}
