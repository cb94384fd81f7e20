use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::normal_form::{cubic_sources_on, term_table, CubicClass, TermInputs};
use crate::paradiff_calculus::ParaConfig;
use crate::spectral_core::{Field, HoloField};
use crate::wavepacket_testing::packet::PacketFrame;

/// Labels of the bilinear null expressions, in the order returned by [`null_expressions`].
pub const NULL_EXPRESSIONS: [&str; 3] =
    ["Wa conj(Qa) - conj(Wa) Qa", "(|Qa|^2)_a", "Qa Qaa + i Wa^2"];

/// L^2 size of each bilinear null expression relative to a non-cancelling
/// product of the same factors.
pub fn null_expressions(w: &HoloField, q: &HoloField, xi0: f64) -> [f64; 3] {
    let wa = w.dx();
    let qa = q.dx();
    let cross = wa.mul(&qa.conj());
    let n1 = (&cross - &wa.conj().mul(&qa)).norm_l2() / cross.norm_l2();
    let qq = qa.mul(&qa.conj());
    let n2 = qq.dx().norm_l2() / (qq.norm_l2() * xi0.abs());
    let wsq = wa.square();
    let n3 = (qa.mul(&qa.dx()) + wsq.times_i()).norm_l2() / wsq.norm_l2();
    [n1, n2, n3]
}

/// Pairing of a G-side source with w, or of a K-side source with |D| q.
fn pair_with(f: &Field, g_side: bool, frame: &PacketFrame) -> C64 {
    if g_side {
        f.inner(&frame.w)
    } else {
        f.apply(|k| C64::new(k.abs(), 0.0)).inner(&frame.q)
    }
}

/// Packet pairings of the cubic sources evaluated on an ansatz.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub t: f64,
    /// Summed pairing of the resonant terms.
    pub resonant: C64,
    /// L^2 size of the resonant terms together.
    pub resonant_size: f64,
    /// (term id, |pairing| / |resonant pairing|) for each nonresonant term.
    pub nonresonant: Vec<(&'static str, f64)>,
    /// (term id, L^2 size / resonant size) for each null term.
    pub null: Vec<(&'static str, f64)>,
    pub null_expressions: [f64; 3],
}

impl StructureReport {
    pub fn worst_nonresonant(&self) -> (&'static str, f64) {
        worst(&self.nonresonant)
    }

    pub fn worst_null(&self) -> (&'static str, f64) {
        worst(&self.null)
    }
}

fn worst(v: &[(&'static str, f64)]) -> (&'static str, f64) {
    v.iter().copied().fold(("", 0.0), |a, b| if b.1 > a.1 { b } else { a })
}

/// Evaluates every cubic source on the ansatz (w, q) and pairs it with the packet `frame`.
pub fn structure_report(
    w: &HoloField,
    q: &HoloField,
    xi0: f64,
    frame: &PacketFrame,
    cfg: &ParaConfig,
) -> Result<StructureReport> {
    w.check_grid(&frame.w)?;
    let src = cubic_sources_on(&TermInputs::new(w.field(), q.field()), cfg);
    let mut resonant = C64::new(0.0, 0.0);
    let mut res_field: Option<Field> = None;
    let mut nr = Vec::new();
    let mut null = Vec::new();
    for term in term_table() {
        let f = src.term(term.id)?.field();
        let p = pair_with(f, term.group.is_g(), frame);
        match term.class {
            CubicClass::Resonant => {
                resonant += p;
                res_field = Some(match res_field {
                    Some(acc) => acc + f,
                    None => f.clone(),
                });
            }
            CubicClass::Nonresonant => nr.push((term.id, p.norm())),
            CubicClass::Null => null.push((term.id, f.norm_l2())),
        }
    }
    let resonant_size = res_field.map(|f| f.norm_l2()).unwrap_or(0.0);
    let rp = resonant.norm();
    Ok(StructureReport {
        t: frame.t,
        resonant,
        resonant_size,
        nonresonant: nr.into_iter().map(|(id, p)| (id, p / rp)).collect(),
        null: null.into_iter().map(|(id, s)| (id, s / resonant_size)).collect(),
        null_expressions: null_expressions(w, q, xi0),
    })
}
