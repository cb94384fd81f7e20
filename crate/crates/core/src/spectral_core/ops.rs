use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral_core::field::Field;
use crate::spectral_core::lp::LowPass;

/// Relative size of a mean that still counts as zero for negative powers.
pub const MEAN_TOL: f64 = 1e-12;

/// |D|^s; the zero mode is dropped for every s.
pub fn frac_derivative(u: &Field, s: f64) -> Result<Field> {
    if s < 0.0 {
        let mean = u.mean().norm();
        if mean > MEAN_TOL * u.max_coef().max(f64::MIN_POSITIVE) {
            return Err(Error::NegativePowerOnMean { power: s, mean });
        }
    }
    Ok(frac_derivative_nomean(u, s))
}

/// |D|^s with the mean discarded unconditionally.
pub fn frac_derivative_nomean(u: &Field, s: f64) -> Field {
    u.apply(|k| if k == 0.0 { C64::new(0.0, 0.0) } else { C64::new(k.abs().powf(s), 0.0) })
}

/// Japanese-bracket multiplier (1 + k^2)^{s/2}.
pub fn bracket_derivative(u: &Field, s: f64) -> Field {
    u.apply(|k| C64::new((1.0 + k * k).powf(0.5 * s), 0.0))
}

/// The dyadic block P_k u.
pub fn lp_project(u: &Field, k: i32) -> Result<Field> {
    let lp = u.grid().lp();
    match lp.block(k) {
        Some(sym) => Ok(u.apply_table(sym)),
        None => {
            let (lo, hi) = u.grid().spec().band();
            Err(Error::OutOfBand { index: k, lo, hi })
        }
    }
}

/// Low-pass S_n u, sum of the blocks up to index n plus the mean.
pub fn lowpass(u: &Field, n: i32) -> Field {
    match u.grid().lp().lowpass(n) {
        LowPass::MeanOnly => {
            let mut out = Field::zeros(u.grid());
            out.coef_mut()[0] = u.mean();
            out
        }
        LowPass::Symbol(sym) => u.apply_table(sym),
        LowPass::All => u.clone(),
    }
}

/// Homogeneous Besov norm with sup-norm blocks: sqrt(sum_k 2^{2ks} |P_k u|_inf^2).
pub fn besov_norm(u: &Field, s: f64) -> f64 {
    let lp = u.grid().lp();
    lp.indices()
        .map(|k| {
            let b = u.apply_table(lp.block(k).expect("index in range")).norm_sup();
            (2f64.powf(k as f64 * s) * b).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// Norm of the pair (w, r) in H^s x H^{s+1/2}, homogeneous or inhomogeneous.
pub fn sobolev_norm(w: &Field, r: &Field, s: f64, homogeneous: bool) -> Result<f64> {
    let (a, b) = if homogeneous {
        (frac_derivative(w, s)?, frac_derivative(r, s + 0.5)?)
    } else {
        (bracket_derivative(w, s), bracket_derivative(r, s + 0.5))
    };
    Ok((a.norm_l2().powi(2) + b.norm_l2().powi(2)).sqrt())
}

/// Homogeneous H^s norm of a single field.
pub fn hdot_norm(u: &Field, s: f64) -> f64 {
    frac_derivative_nomean(u, s).norm_l2()
}
