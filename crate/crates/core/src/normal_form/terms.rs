//! The explicit cubic sources (G~3, K~3), one entry per term.
//!
//! Notation in labels: Wa = W~_a, Qa = Q~_a, Qaa = Q~_aa, F2 = P[conj(Qa) Wa - Qa conj(Wa)],
//! T[a](b) the paraproduct, Pi(a, b) the balanced product, both followed by P.
//! Terms whose symbol mixes conjugated and unconjugated factors are split so that each
//! entry carries a single resonance class; the entries of a group sum to that group.

use std::fmt;

use crate::error::{Error, Result};
use crate::paradiff_calculus::ParaConfig;
use crate::spectral_core::{project_neg, Field, HoloField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubicGroup {
    G1,
    G2,
    G3,
    K1,
    K2,
    K3,
}

impl CubicGroup {
    pub const ALL: [CubicGroup; 6] =
        [CubicGroup::G1, CubicGroup::G2, CubicGroup::G3, CubicGroup::K1, CubicGroup::K2, CubicGroup::K3];

    pub fn is_g(&self) -> bool {
        matches!(self, CubicGroup::G1 | CubicGroup::G2 | CubicGroup::G3)
    }
}

impl fmt::Display for CubicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubicClass {
    Resonant,
    Nonresonant,
    Null,
}

impl fmt::Display for CubicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CubicClass::Resonant => "resonant",
            CubicClass::Nonresonant => "nonresonant",
            CubicClass::Null => "null",
        })
    }
}

/// The normal form pair and the derived fields every term draws from.
#[derive(Clone, Debug)]
pub struct TermInputs {
    pub w: Field,
    pub q: Field,
    pub wa: Field,
    pub qa: Field,
    pub qaa: Field,
    pub wb: Field,
    pub wab: Field,
    pub qab: Field,
    pub rw: Field,
    pub rwa: Field,
    pub rqa: Field,
    /// Qa Wa.
    pub qw: Field,
    pub f2: Field,
    pub f2b: Field,
    /// P[|Qa|^2].
    pub pqq: Field,
}

impl TermInputs {
    pub fn new(w: &Field, q: &Field) -> Self {
        let wa = w.dx();
        let qa = q.dx();
        let wab = wa.conj();
        let qab = qa.conj();
        let f2 = (qab.mul(&wa) - qa.mul(&wab)).neg_part();
        Self {
            w: w.clone(),
            q: q.clone(),
            qaa: qa.dx(),
            wb: w.conj(),
            rw: w.two_re(),
            rwa: wa.two_re(),
            rqa: qa.two_re(),
            qw: qa.mul(&wa),
            f2b: f2.conj(),
            pqq: qa.mul(&qab).neg_part(),
            f2,
            wa,
            qa,
            wab,
            qab,
        }
    }
}

type Eval = fn(&TermInputs, &ParaConfig) -> Field;

/// One entry of the term table.
#[derive(Clone, Copy)]
pub struct CubicTerm {
    pub id: &'static str,
    pub group: CubicGroup,
    pub class: CubicClass,
    pub label: &'static str,
    eval: Eval,
}

impl fmt::Debug for CubicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{} {}] {}", self.id, self.group, self.class, self.label)
    }
}

impl CubicTerm {
    pub fn eval(&self, x: &TermInputs, cfg: &ParaConfig) -> Field {
        (self.eval)(x, cfg)
    }
}

macro_rules! term {
    ($id:literal, $g:ident, $c:ident, $label:literal, |$x:ident, $p:ident| $body:expr) => {
        CubicTerm {
            id: $id,
            group: CubicGroup::$g,
            class: CubicClass::$c,
            label: $label,
            eval: |$x: &TermInputs, $p: &ParaConfig| $body,
        }
    };
}

fn t_w_plus_pi(x: &TermInputs, p: &ParaConfig, a: &Field, b: &Field) -> Field {
    p.t(a, &x.w) + p.pi(a, b)
}

static TABLE: [CubicTerm; 41] = [
    term!("G1.1", G1, Nonresonant, "T[Wa](Qa Wa)", |x, p| p.t(&x.wa, &x.qw)),
    term!("G1.2", G1, Nonresonant, "T[(Qa Wa)_a](W)", |x, p| p.t(&x.qw.dx(), &x.w)),
    term!("G1.3", G1, Nonresonant, "Pi(Wa, 2Re(Qa Wa))", |x, p| p.pi(&x.wa, &x.qw.two_re())),
    term!("G1.4", G1, Nonresonant, "Pi((Qa Wa)_a, W)", |x, p| p.pi(&x.qw.dx(), &x.w)),
    term!("G1.5", G1, Resonant, "Pi((Qa Wa)_a, conj W)", |x, p| p.pi(&x.qw.dx(), &x.wb)),
    term!("G2.1", G2, Null, "-Wa F2", |x, _p| -x.wa.mul(&x.f2)),
    term!("G2.2", G2, Null, "T[F2_a](W)", |x, p| p.t(&x.f2.dx(), &x.w)),
    term!("G2.3", G2, Null, "Pi(F2_a, 2Re W)", |x, p| p.pi(&x.f2.dx(), &x.rw)),
    term!("G2.4", G2, Null, "Pi(F2, Wa)", |x, p| p.pi(&x.f2, &x.wa)),
    term!("G2.5", G2, Null, "Pi(Wa, conj F2)", |x, p| p.pi(&x.wa, &x.f2b)),
    term!("G2.6", G2, Nonresonant, "-Pi(conj(Wa)^2, Qa)", |x, p| -p.pi(&x.wab.square(), &x.qa)),
    term!("G2.7", G2, Resonant, "Pi(conj Qa, Wa^2)", |x, p| p.pi(&x.qab, &x.wa.square())),
    term!("G2.8", G2, Nonresonant, "-T[conj(Wa)^2](Qa)", |x, p| -p.t(&x.wab.square(), &x.qa)),
    term!("G2.9", G2, Nonresonant, "-T[conj Wa](F2)", |x, p| -p.t(&x.wab, &x.f2)),
    term!("G2.10", G2, Nonresonant, "T[conj Qa](Wa^2)", |x, p| p.t(&x.qab, &x.wa.square())),
    term!("G3.1", G3, Nonresonant, "T[2Re(T[Wa](W) + Pi(Wa, W))_a](Qa)", |x, p| {
        p.t(&t_w_plus_pi(x, p, &x.wa, &x.w).dx().two_re(), &x.qa)
    }),
    term!("G3.2", G3, Null, "T[2Re(Pi(Wa, conj W))_a](Qa)", |x, p| {
        p.t(&p.pi(&x.wa, &x.wb).dx().two_re(), &x.qa)
    }),
    term!("G3.3", G3, Nonresonant, "-T[2Re Wa](Qa Wa)", |x, p| -p.t(&x.rwa, &x.qw)),
    term!("G3.4", G3, Null, "T[2Re Wa](F2)", |x, p| p.t(&x.rwa, &x.f2)),
    term!("G3.5", G3, Nonresonant, "T[2Re Wa]((T[Qa](W) + Pi(Qa, 2Re W))_a)", |x, p| {
        p.t(&x.rwa, &t_w_plus_pi(x, p, &x.qa, &x.rw).dx())
    }),
    term!("G3.6", G3, Nonresonant, "T[2Re(Qa Wa - (T[Qa](W) + Pi(Qa, W))_a)](Wa)", |x, p| {
        p.t(&(&x.qw - &t_w_plus_pi(x, p, &x.qa, &x.w).dx()).two_re(), &x.wa)
    }),
    term!("G3.7", G3, Null, "-T[2Re(Pi(Qa, conj W)_a)](Wa)", |x, p| {
        -p.t(&p.pi(&x.qa, &x.wb).dx().two_re(), &x.wa)
    }),
    term!("G3.8", G3, Nonresonant, "-T[2Re Qa]((T[Wa](W) + Pi(Wa, 2Re W))_a)", |x, p| {
        -p.t(&x.rqa, &t_w_plus_pi(x, p, &x.wa, &x.rw).dx())
    }),
    term!("K1.1", K1, Nonresonant, "T[Qa Qaa](W)", |x, p| p.t(&x.qa.mul(&x.qaa), &x.w)),
    term!("K1.2", K1, Null, "T[P[|Qa|^2]_a](W)", |x, p| p.t(&x.pqq.dx(), &x.w)),
    term!("K1.3", K1, Nonresonant, "T[Qa](T[Wa](Qa) + Pi(Wa, Qa))", |x, p| {
        p.t(&x.qa, &(p.t(&x.wa, &x.qa) + p.pi(&x.wa, &x.qa)))
    }),
    term!("K1.4", K1, Null, "Pi(Qa Qaa, 2Re W)", |x, p| p.pi(&x.qa.mul(&x.qaa), &x.rw)),
    term!("K1.5", K1, Null, "Pi(P[|Qa|^2]_a, 2Re W)", |x, p| p.pi(&x.pqq.dx(), &x.rw)),
    term!("K1.6", K1, Nonresonant, "Pi(Qa, 2Re(Qa Wa))", |x, p| p.pi(&x.qa, &x.qw.two_re())),
    term!("K1.7", K1, Nonresonant, "-Pi(Wa Qa, Qa)", |x, p| -p.pi(&x.qw, &x.qa)),
    term!("K1.8", K1, Null, "Pi(Qa, conj F2)", |x, p| p.pi(&x.qa, &x.f2b)),
    term!("K1.9", K1, Nonresonant, "-T[Qa Wa](Qa)", |x, p| -p.t(&x.qw, &x.qa)),
    term!("K2.1", K2, Nonresonant, "i T[Wa^2](W)", |x, p| p.t(&x.wa.square(), &x.w).times_i()),
    term!("K2.2", K2, Null, "i Pi(Wa^2, 2Re W)", |x, p| p.pi(&x.wa.square(), &x.rw).times_i()),
    term!("K2.3", K2, Null, "-T[F2](Qa)", |x, p| -p.t(&x.f2, &x.qa)),
    term!("K3.1", K3, Nonresonant, "-T[2Re(T[Qa](W) + Pi(Qa, W))_a](Qa)", |x, p| {
        -p.t(&t_w_plus_pi(x, p, &x.qa, &x.w).dx().two_re(), &x.qa)
    }),
    term!("K3.2", K3, Null, "-T[2Re(Pi(Qa, conj W))_a](Qa)", |x, p| {
        -p.t(&p.pi(&x.qa, &x.wb).dx().two_re(), &x.qa)
    }),
    term!("K3.3", K3, Nonresonant, "-T[2Re Qa]((T[Qa](W) + Pi(Qa, 2Re W))_a)", |x, p| {
        -p.t(&x.rqa, &t_w_plus_pi(x, p, &x.qa, &x.rw).dx())
    }),
    term!("K3.4", K3, Nonresonant, "T[2Re(Qa Wa)](Qa)", |x, p| p.t(&x.qw.two_re(), &x.qa)),
    term!("K3.5", K3, Nonresonant, "T[conj Qa](Qa Wa)", |x, p| p.t(&x.qab, &x.qw)),
    term!("K3.6", K3, Nonresonant, "T[Qa](T[Qa](Wa))", |x, p| p.t(&x.qa, &p.t(&x.qa, &x.wa))),
];

pub fn term_table() -> &'static [CubicTerm] {
    &TABLE
}

pub fn classify_cubic(term_id: &str) -> Result<CubicClass> {
    TABLE
        .iter()
        .find(|t| t.id == term_id)
        .map(|t| t.class)
        .ok_or_else(|| Error::UnknownTerm(term_id.to_string()))
}

/// Text listing of the table, one term per line: id, group, class, formula.
pub fn term_table_dump() -> String {
    let mut out = String::from("id\tgroup\tclass\tformula\n");
    for t in TABLE.iter() {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", t.id, t.group, t.class, t.label));
    }
    out
}

/// Every term evaluated, with group and class sums available.
#[derive(Clone, Debug)]
pub struct CubicSources {
    pub f2: HoloField,
    pub terms: Vec<HoloField>,
}

impl CubicSources {
    fn sum(&self, keep: impl Fn(&CubicTerm) -> bool) -> HoloField {
        let mut acc = Field::zeros(self.f2.grid());
        for (t, v) in TABLE.iter().zip(&self.terms) {
            if keep(t) {
                acc += v.field();
            }
        }
        project_neg(&acc)
    }

    pub fn group(&self, g: CubicGroup) -> HoloField {
        self.sum(|t| t.group == g)
    }

    /// G~3 = G~1 + G~2 + G~3.
    pub fn g(&self) -> HoloField {
        self.sum(|t| t.group.is_g())
    }

    pub fn k(&self) -> HoloField {
        self.sum(|t| !t.group.is_g())
    }

    /// Sum of the G or K terms of one resonance class.
    pub fn class(&self, g_side: bool, c: CubicClass) -> HoloField {
        self.sum(|t| t.group.is_g() == g_side && t.class == c)
    }

    pub fn term(&self, id: &str) -> Result<&HoloField> {
        TABLE
            .iter()
            .position(|t| t.id == id)
            .map(|i| &self.terms[i])
            .ok_or_else(|| Error::UnknownTerm(id.to_string()))
    }

    /// Group sums in the order G1, G2, G3, K1, K2, K3.
    pub fn groups(&self) -> [HoloField; 6] {
        CubicGroup::ALL.map(|g| self.group(g))
    }
}

pub fn cubic_sources_on(x: &TermInputs, cfg: &ParaConfig) -> CubicSources {
    let terms = TABLE.iter().map(|t| project_neg(&t.eval(x, cfg))).collect();
    CubicSources { f2: project_neg(&x.f2), terms }
}

/// (G~3, K~3) of a normal form state, term by term.
pub fn cubic_sources(nf: &super::NormalFormState, cfg: &ParaConfig) -> CubicSources {
    cubic_sources_on(&TermInputs::new(nf.w.field(), nf.q.field()), cfg)
}
