use num_complex::Complex64 as C64;

use crate::spectral_core::{project_neg, Field, HoloField};
use crate::waterwave_dynamics::state::WaveState;

/// Time derivative of a pair of holomorphic fields.
#[derive(Clone, Debug)]
pub struct PairRate {
    pub dw: HoloField,
    pub dq: HoloField,
}

/// Right side of the differentiated system, with the parts removed by P.
#[derive(Clone, Debug)]
pub struct DiffRate {
    pub dbw: HoloField,
    pub dr: HoloField,
    /// L^2 norm of the nonnegative-frequency part of the unprojected right sides.
    pub leak_bw: f64,
    pub leak_r: f64,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// W_t = -F(1 + W_alpha), Q_t = -F Q_alpha + iW - P[conj(R) R].
pub fn rhs_full(s: &WaveState) -> PairRate {
    let a = &s.aux;
    let f = a.f.field();
    let dw = -(f + &f.mul(&a.bw));
    let dq = -f.mul(&s.q.dx()) + s.w.times_i() - a.r.conj().mul(&a.r);
    PairRate { dw: project_neg(&dw), dq: project_neg(&dq) }
}

/// The linear part (-Q_alpha, iW).
pub fn rhs_linear(s: &WaveState) -> PairRate {
    PairRate { dw: project_neg(&-s.q.dx()), dq: project_neg(&s.w.times_i()) }
}

/// rhs_full minus its linear part.
pub fn rhs_nonlinear(s: &WaveState) -> PairRate {
    let full = rhs_full(s);
    let lin = rhs_linear(s);
    PairRate {
        dw: project_neg(&(full.dw.field() - lin.dw.field())),
        dq: project_neg(&(full.dq.field() - lin.dq.field())),
    }
}

/// Differentiated system for (bold W, R) with the transport term on the right.
pub fn rhs_diff(s: &WaveState) -> DiffRate {
    let a = &s.aux;
    let bw = a.bw.field();
    let r = a.r.field();
    let ra = r.dx();
    let ratio = Field::pointwise(&[bw, &ra], |v| (one() + v[0]) * v[1] / (one() + v[0].conj()));
    let dbw = -a.b.mul(&bw.dx()) - ratio + &a.m + bw.mul(&a.m);
    let src = Field::pointwise(&[bw, &a.a], |v| C64::new(0.0, 1.0) * (v[0] - v[1]) / (one() + v[0]));
    let dr = -a.b.mul(&ra) + src;
    DiffRate {
        leak_bw: dbw.apply(|k| if k >= 0.0 { one() } else { C64::new(0.0, 0.0) }).norm_l2(),
        leak_r: dr.apply(|k| if k >= 0.0 { one() } else { C64::new(0.0, 0.0) }).norm_l2(),
        dbw: project_neg(&dbw),
        dr: project_neg(&dr),
    }
}
