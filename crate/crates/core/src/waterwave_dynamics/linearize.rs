use crate::error::Result;
use crate::spectral_core::{project_neg, Field, HoloField};
use crate::waterwave_dynamics::rhs::{rhs_diff, rhs_full};
use crate::waterwave_dynamics::state::WaveState;

/// Perturbation in the good variables (w, r), r = q - R w.
#[derive(Clone, Debug)]
pub struct LinState {
    pub t: f64,
    pub w: HoloField,
    pub r: HoloField,
}

/// Size of the perturbation h * dir used by the difference quotients, in sup norm.
pub const FRECHET_STEP: f64 = 1e-5;

/// Finite-difference order of the Frechet derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdOrder {
    Second,
    Fourth,
}

fn perturbed(s: &WaveState, w: &Field, q: &Field, h: f64) -> Result<(Field, Field)> {
    let p = WaveState::new(
        s.t,
        project_neg(&(s.w.field() + &w.scale(h))),
        project_neg(&(s.q.field() + &q.scale(h))),
    )?;
    let r = rhs_full(&p);
    Ok((r.dw.into_field(), r.dq.into_field()))
}

/// Directional derivative of rhs_full at `s` in the direction (w, q).
///
/// The step is normalized by the size of the direction, so the result is
/// exactly homogeneous in the direction.
pub fn frechet(s: &WaveState, w: &Field, q: &Field, order: FdOrder) -> Result<(Field, Field)> {
    let size = w.norm_sup().max(q.dx().norm_sup()).max(q.norm_sup());
    if size == 0.0 {
        return Ok((Field::zeros(w.grid()), Field::zeros(w.grid())));
    }
    let h = FRECHET_STEP / size;
    let (pw, pq) = perturbed(s, w, q, h)?;
    let (mw, mq) = perturbed(s, w, q, -h)?;
    match order {
        FdOrder::Second => Ok(((pw - mw).scale(0.5 / h), (pq - mq).scale(0.5 / h))),
        FdOrder::Fourth => {
            let (pw2, pq2) = perturbed(s, w, q, 2.0 * h)?;
            let (mw2, mq2) = perturbed(s, w, q, -2.0 * h)?;
            let dw = ((pw - mw).scale(8.0) - (pw2 - mw2)).scale(1.0 / (12.0 * h));
            let dq = ((pq - mq).scale(8.0) - (pq2 - mq2)).scale(1.0 / (12.0 * h));
            Ok((dw, dq))
        }
    }
}

/// Linearized flow in the good variables: returns (w_t, r_t).
///
/// q = r + R w is recovered, rhs_full is differentiated along (w, q), and
/// r_t = q_t - R_t w - R w_t with R_t taken from the differentiated system.
pub fn linearize_with(s: &WaveState, dir: &LinState, order: FdOrder) -> Result<(HoloField, HoloField)> {
    let r = s.aux.r.field();
    let q = project_neg(&(dir.r.field() + &r.mul(&dir.w)));
    let (wt, qt) = frechet(s, &dir.w, &q, order)?;
    let rt = rhs_diff(s).dr;
    let good = &qt - rt.mul(&dir.w) - r.mul(&wt);
    Ok((project_neg(&wt), project_neg(&good)))
}

/// Linearized flow with the central second-order difference quotient.
pub fn linearize(s: &WaveState, dir: &LinState) -> Result<(HoloField, HoloField)> {
    linearize_with(s, dir, FdOrder::Second)
}
