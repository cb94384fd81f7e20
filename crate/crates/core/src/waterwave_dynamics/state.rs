use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral_core::{project_neg, Field, HoloField};

/// Lower bound on J = |1 + W_alpha|^2 below which a state is rejected.
pub const MIN_JACOBIAN: f64 = 0.25;

/// Auxiliary quantities of the holomorphic system.
#[derive(Clone, Debug)]
pub struct Aux {
    /// Bold W = W_alpha.
    pub bw: HoloField,
    /// R = Q_alpha / (1 + W_alpha).
    pub r: HoloField,
    /// Y = W_alpha / (1 + W_alpha).
    pub y: HoloField,
    /// J = |1 + W_alpha|^2, real.
    pub j: Field,
    pub min_j: f64,
    /// F = P[(Q_alpha - conj Q_alpha) / J].
    pub f: HoloField,
    /// F = R + P[conj(R) Y - R conj(Y)].
    pub f_alt: HoloField,
    /// Advection velocity b = F + conj(R)/(1 + W_alpha); real away from the mean.
    pub b: Field,
    /// a = i(Pbar[conj(R) R_alpha] - P[R conj(R)_alpha]) plus the mean i<conj(R) R_alpha>, real.
    pub a: Field,
    /// M = R_alpha/(1 + conj W) + conj(R)_alpha/(1 + W) - b_alpha.
    pub m: Field,
    /// M = Pbar[conj(R) Y_alpha - R_alpha conj(Y)] + P[R conj(Y)_alpha - conj(R)_alpha Y].
    pub m_alt: Field,
}

/// The pair (W, Q) at time t with its auxiliaries.
#[derive(Clone, Debug)]
pub struct WaveState {
    pub t: f64,
    pub w: HoloField,
    pub q: HoloField,
    pub aux: Aux,
}

impl WaveState {
    pub fn new(t: f64, w: HoloField, q: HoloField) -> Result<Self> {
        let aux = compute_aux(&w, &q, t)?;
        Ok(Self { t, w, q, aux })
    }

    /// Builds a state after projecting both components onto negative frequencies.
    pub fn from_fields(t: f64, w: &Field, q: &Field) -> Result<Self> {
        Self::new(t, project_neg(w), project_neg(q))
    }

    pub fn zero(grid: &std::sync::Arc<crate::spectral_core::Grid>, t: f64) -> Self {
        Self::new(t, HoloField::zeros(grid), HoloField::zeros(grid)).expect("zero state is regular")
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Computes every auxiliary field, with both forms of F and M.
pub fn compute_aux(w: &HoloField, q: &HoloField, t: f64) -> Result<Aux> {
    let bw = w.dx();
    let qa = q.dx();
    let jac = Field::pointwise(&[&bw], |v| C64::new((one() + v[0]).norm_sqr(), 0.0));
    let min_j = bw.values().iter().map(|v| (one() + v).norm_sqr()).fold(f64::INFINITY, f64::min);
    if min_j < MIN_JACOBIAN {
        return Err(Error::DegenerateJacobian { min_j, t });
    }
    let r = project_neg(&Field::pointwise(&[&qa, &bw], |v| v[0] / (one() + v[1])));
    let y = project_neg(&Field::pointwise(&[&bw], |v| v[0] / (one() + v[0])));
    let f = project_neg(&Field::pointwise(&[&qa, &bw], |v| {
        (v[0] - v[0].conj()) / (one() + v[1]).norm_sqr()
    }));
    let rc = r.conj();
    let yc = y.conj();
    let f_alt = project_neg(&(r.field() + &(rc.mul(&y) - r.mul(&yc)).neg_part()));
    let mut b = Field::pointwise(&[&r, &bw], |v| v[0] / (one() + v[1].conj())).neg_part().two_re();
    b.coef_mut()[0] = Field::pointwise(&[&r, &bw], |v| v[0].conj() / (one() + v[1])).mean();
    let ra = r.dx();
    let rca = rc.dx();
    let rc_ra = rc.mul(&ra);
    let mut a = (rc_ra.pos_part() - r.mul(&rca).neg_part()).times_i();
    a.coef_mut()[0] = C64::new(0.0, 1.0) * rc_ra.mean();
    let m = Field::pointwise(&[&ra, &bw], |v| v[0] / (one() + v[1].conj())).two_re() - b.dx();
    let ya = y.dx();
    let yca = yc.dx();
    let m_alt = (rc.mul(&ya) - ra.mul(&yc)).pos_part() + (r.mul(&yca) - rca.mul(&y)).neg_part();
    Ok(Aux { bw: project_neg(&bw), r, y, j: jac, min_j, f, f_alt, b, a, m, m_alt })
}
