use crate::error::{Error, Result};
use crate::normal_form::ScalingDerivatives;
use crate::spectral_core::{besov_norm, frac_derivative_nomean, sobolev_norm, Field};
use crate::waterwave_dynamics::{hamiltonian, WaveState};

/// Scalar columns of a [`NormRecord`], in CSV order after `t`.
pub const NORM_IDS: [&str; 10] =
    ["A0", "A_quarter", "A_half", "A_sharp", "X", "energy", "WH_sharp", "Xsharp", "Xsharp_ell", "Xsharp_hyp"];

/// Norms of one snapshot. Optional entries need extra input (scaling fields or a split).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormRecord {
    pub t: f64,
    pub a0: f64,
    pub a_quarter: f64,
    pub a_half: f64,
    pub a_sharp: f64,
    pub x: f64,
    /// Hamiltonian.
    pub energy: f64,
    pub wh_sharp: Option<f64>,
    pub xsharp: Option<f64>,
    pub xsharp_ell: Option<f64>,
    /// X norm of the differentiated hyperbolic part.
    pub xsharp_hyp: Option<f64>,
    /// (s, |(W, Q)|_{H^s x H^{s+1/2}}) for each requested s.
    pub hs: Vec<(f64, f64)>,
}

fn lp_norm(f: &Field, p: f64) -> f64 {
    let vals = f.values();
    let dx = f.grid().spec().dx();
    (vals.iter().map(|v| v.norm().powf(p)).sum::<f64>() * dx).powf(1.0 / p)
}

/// |(bold W, R)|_X = ||D|^{-1/2} W|_inf + |R|_inf + |W|_{B^{1/4}} + |R|_{B^{3/4}}.
pub fn x_norm(bw: &Field, r: &Field) -> f64 {
    frac_derivative_nomean(bw, -0.5).norm_sup() + r.norm_sup() + besov_norm(bw, 0.25) + besov_norm(r, 0.75)
}

/// |(w, q)|_{X^0} = |w_alpha|_{B^{1/4}} + |q_alpha|_{B^{3/4}}.
pub fn x_zero_norm(w: &Field, q: &Field) -> f64 {
    besov_norm(&w.dx(), 0.25) + besov_norm(&q.dx(), 0.75)
}

/// A0, A_{1/4}, A_{1/2}, A-sharp, X and the Hamiltonian of a state.
pub fn control_norms(s: &WaveState) -> NormRecord {
    let bw = s.aux.bw.field();
    let r = s.aux.r.field();
    let dr = frac_derivative_nomean(r, 0.5);
    NormRecord {
        t: s.t,
        a0: bw.norm_sup() + s.aux.y.norm_sup() + dr.norm_sup().max(besov_norm(&dr, 0.0)),
        a_quarter: besov_norm(bw, 0.25) + besov_norm(r, 0.75),
        a_half: frac_derivative_nomean(bw, 0.5).norm_sup() + r.dx().norm_sup(),
        a_sharp: lp_norm(&frac_derivative_nomean(bw, 0.25), 4.0)
            + lp_norm(&frac_derivative_nomean(r, 0.75), 4.0),
        x: x_norm(bw, r),
        energy: hamiltonian(s),
        ..NormRecord::default()
    }
}

/// |(W, Q)|_{H^{1/4}} + |(bold W, R)|_{H^{sigma - 1}} + |(frak w, frak r)|_{H^{1/4}}.
pub fn weighted_energy(s: &WaveState, scaling: &ScalingDerivatives, sigma: f64) -> f64 {
    let h = |a: &Field, b: &Field, e: f64| sobolev_norm(a, b, e, true).expect("nonnegative order");
    h(s.w.field(), s.q.field(), 0.25)
        + h(s.aux.bw.field(), s.aux.r.field(), sigma - 1.0)
        + h(scaling.frak_w.field(), scaling.frak_r.field(), 0.25)
}

impl NormRecord {
    /// Appends homogeneous Sobolev norms of (W, Q) for each order in `orders`.
    pub fn with_sobolev(mut self, s: &WaveState, orders: &[f64]) -> Self {
        for &o in orders {
            let v = sobolev_norm(&s.w.field().without_mean(), &s.q.field().without_mean(), o, true)
                .expect("mean removed");
            self.hs.push((o, v));
        }
        self
    }

    /// Value of a named column; `H^s` columns are addressed as `H<s>`.
    pub fn get(&self, id: &str) -> Result<Option<f64>> {
        let v = match id {
            "t" => Some(self.t),
            "A0" => Some(self.a0),
            "A_quarter" => Some(self.a_quarter),
            "A_half" => Some(self.a_half),
            "A_sharp" => Some(self.a_sharp),
            "X" => Some(self.x),
            "energy" => Some(self.energy),
            "WH_sharp" => self.wh_sharp,
            "Xsharp" => self.xsharp,
            "Xsharp_ell" => self.xsharp_ell,
            "Xsharp_hyp" => self.xsharp_hyp,
            other => {
                let found = other
                    .strip_prefix('H')
                    .and_then(|s| s.parse::<f64>().ok())
                    .and_then(|o| self.hs.iter().find(|(s, _)| *s == o));
                match found {
                    Some((_, v)) => Some(*v),
                    None => return Err(Error::Usage(format!("unknown norm `{other}`"))),
                }
            }
        };
        Ok(v)
    }

    /// Column names for a series whose records carry Sobolev orders `orders`.
    pub fn csv_header(orders: &[f64]) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        h.extend(NORM_IDS.iter().map(|s| s.to_string()));
        h.extend(orders.iter().map(|o| format!("H{o}")));
        h
    }

    pub fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        let mut row = vec![format!("{}", self.t)];
        for id in NORM_IDS {
            row.push(opt(self.get(id).expect("known column")));
        }
        row.extend(self.hs.iter().map(|(_, v)| format!("{v:e}")));
        row
    }

    /// Inverse of [`NormRecord::csv_row`].
    pub fn from_csv(header: &[String], row: &[String]) -> Result<Self> {
        if header.len() != row.len() {
            return Err(Error::Format { path: "<csv>".into(), reason: "row length mismatch".into() });
        }
        let mut rec = NormRecord::default();
        for (h, cell) in header.iter().zip(row) {
            let v = if cell.is_empty() {
                None
            } else {
                Some(cell.parse::<f64>().map_err(|e| Error::Format {
                    path: "<csv>".into(),
                    reason: format!("column {h}: {e}"),
                })?)
            };
            let req = || {
                v.ok_or_else(|| Error::Format { path: "<csv>".into(), reason: format!("empty {h}") })
            };
            match h.as_str() {
                "t" => rec.t = req()?,
                "A0" => rec.a0 = req()?,
                "A_quarter" => rec.a_quarter = req()?,
                "A_half" => rec.a_half = req()?,
                "A_sharp" => rec.a_sharp = req()?,
                "X" => rec.x = req()?,
                "energy" => rec.energy = req()?,
                "WH_sharp" => rec.wh_sharp = v,
                "Xsharp" => rec.xsharp = v,
                "Xsharp_ell" => rec.xsharp_ell = v,
                "Xsharp_hyp" => rec.xsharp_hyp = v,
                other => match other.strip_prefix('H').and_then(|s| s.parse::<f64>().ok()) {
                    Some(o) => rec.hs.push((o, req()?)),
                    None => {
                        return Err(Error::Format {
                            path: "<csv>".into(),
                            reason: format!("unknown column {other}"),
                        })
                    }
                },
            }
        }
        Ok(rec)
    }
}
