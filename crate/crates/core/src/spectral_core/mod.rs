//! Periodic grid, transforms, the negative-frequency projector, fractional
//! derivatives, Littlewood-Paley blocks and the basic norms.

mod field;
mod grid;
pub mod lp;
mod ops;
pub mod serial;

pub use field::{project_neg, Field, HoloField, C64, HOLO_TOL};
pub use grid::{Grid, GridSpec, SUP_OVERSAMPLE};
pub use ops::{
    besov_norm, bracket_derivative, frac_derivative, frac_derivative_nomean, hdot_norm,
    lowpass, lp_project, sobolev_norm, MEAN_TOL,
};

use std::sync::Arc;

use rand::Rng;

/// Random smooth field with modes |j| <= `jmax`, tapered by a Gaussian of width jmax/2.
///
/// With `holo` set only negative modes are filled; the mean is always zero.
pub fn random_field<R: Rng>(grid: &Arc<Grid>, rng: &mut R, jmax: usize, holo: bool) -> Field {
    let mut f = Field::zeros(grid);
    let width = (jmax as f64 / 2.0).max(1.0);
    let n = grid.n();
    for i in 0..n {
        let j = grid.j_of(i);
        if j == 0 || j.unsigned_abs() as usize > jmax || (holo && j > 0) {
            continue;
        }
        let env = (-(j as f64 / width).powi(2)).exp();
        let re: f64 = rng.random_range(-1.0..1.0);
        let im: f64 = rng.random_range(-1.0..1.0);
        f.coef_mut()[i] = C64::new(re, im) * env;
    }
    f
}

/// Rescales `f` so that its sup norm equals `target`.
pub fn with_sup(f: &Field, target: f64) -> Field {
    let s = f.norm_sup();
    if s == 0.0 {
        f.clone()
    } else {
        f.scale(target / s)
    }
}
