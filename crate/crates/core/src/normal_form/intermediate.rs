//! Exact intermediate sources G~1..G~3, K~1..K~3 in the original variables.
//! Their sums equal the measured sources of the paradifferential system.

use crate::paradiff_calculus::ParaConfig;
use crate::spectral_core::{project_neg, HoloField, C64};
use crate::waterwave_dynamics::WaveState;

#[derive(Clone, Debug)]
pub struct SourceGroups {
    pub g1: HoloField,
    pub g2: HoloField,
    pub g3: HoloField,
    pub k1: HoloField,
    pub k2: HoloField,
    pub k3: HoloField,
}

impl SourceGroups {
    pub fn g(&self) -> HoloField {
        project_neg(&(self.g1.field() + self.g2.field() + self.g3.field()))
    }

    pub fn k(&self) -> HoloField {
        project_neg(&(self.k1.field() + self.k2.field() + self.k3.field()))
    }
}

pub fn intermediate_sources(s: &WaveState, cfg: &ParaConfig) -> SourceGroups {
    let p = cfg;
    let a = &s.aux;
    let w = s.w.field();
    let q = s.q.field();
    let wa = w.dx();
    let qa = q.dx();
    let rw = w.two_re();
    let r = a.r.field();
    let y = a.y.field();
    let f = a.f.field();
    let fw = f.mul(&wa);
    let wab = wa.conj();
    let rb = r.conj();
    let (nw, nq) = super::para_variables(s, cfg);
    let nwa = nw.dx();
    let nqa = nq.dx();

    let g1 = p.t(&wa, &fw) + p.t(&fw.dx(), w) + p.pi(&wa, &fw.two_re()) + p.pi(&fw.dx(), &rw);

    let rf = r - f;
    let fr = f - r;
    let g2 = rf.mul(&wa)
        + p.t(&fr.dx(), w)
        + p.pi(&fr.dx(), &rw)
        + p.pi(&fr, &wa)
        + p.pi(&(y.conj() - &wab), r)
        + (p.pi(&wa, &f.conj()) - p.pi(&rb, y)).neg_part()
        + (p.t(&y.conj(), r) - p.t(&wab, f))
        + (p.t(&rb, &wa) - p.t(&rb, y));

    let g3 = p.t(&wa.two_re(), f) - p.t(&nwa.two_re(), &nqa) + p.t(&nqa.two_re(), &nwa)
        - p.t(&r.two_re(), &wa);

    let i = C64::new(0.0, 1.0);
    let ia = a.a.scale_c(i);
    let sym = a.b.mul(&r.dx()) - ia.mul(y) + &ia;
    let k1 = p.t(&sym, w)
        + p.t(r, &(p.t(&wa, f) + p.pi(&wa, f)))
        + p.pi(&sym, &rw)
        + p.pi(r, &fw.two_re())
        + (p.pi(r, &f.two_re()) - p.pi(f, &qa) - p.pi(&rb, r))
        + p.t(&(r - &qa), f);

    let k2 = (p.t(&wa, w) - p.t(y, w)).times_i() + p.pi(&(&wa - y), &rw).times_i() + p.t(&rf, &qa);

    let k3 = p.t(&nqa.two_re(), &nqa) - p.t(&rb, r) - p.t(r, &(&qa - &p.t(f, &wa)));

    SourceGroups {
        g1: project_neg(&g1),
        g2: project_neg(&g2),
        g3: project_neg(&g3),
        k1: project_neg(&k1),
        k2: project_neg(&k2),
        k3: project_neg(&k3),
    }
}

