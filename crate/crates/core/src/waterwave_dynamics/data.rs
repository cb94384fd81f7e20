//! Small localized initial data.

use num_complex::Complex64 as C64;
use std::sync::Arc;

use crate::error::Result;
use crate::spectral_core::{project_neg, Field, Grid};
use crate::waterwave_dynamics::state::WaveState;

/// Gaussian-modulated packet on negative frequencies, centered at wavenumber -k0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketData {
    /// Sup norm of W_alpha.
    pub eps: f64,
    /// Carrier frequency magnitude.
    pub k0: f64,
    /// Spectral standard deviation.
    pub width: f64,
    /// Spatial center of the packet.
    pub center: f64,
}

impl PacketData {
    pub fn new(eps: f64, k0: f64, width: f64) -> Self {
        Self { eps, k0, width, center: 0.0 }
    }

    /// Packet whose carrier travels at group velocity v, k0 = 1 / (4 v^2).
    pub fn for_velocity(eps: f64, v: f64, width: f64) -> Self {
        Self::new(eps, 1.0 / (4.0 * v * v), width)
    }

    /// (W, Q) with Q = |D|^{-1/2} W, a right-moving linear wave.
    pub fn fields(&self, grid: &Arc<Grid>) -> (Field, Field) {
        let keep = grid.spec().keep() as f64 * grid.spec().dk();
        let spec = |k: f64| {
            if k < 0.0 && -k <= keep {
                let g = (-(-k - self.k0).powi(2) / (2.0 * self.width * self.width)).exp();
                C64::from_polar(g, -k * self.center)
            } else {
                C64::new(0.0, 0.0)
            }
        };
        let w = Field::from_spectrum(grid, spec);
        let wa_sup = w.dx().norm_sup();
        let scale = if wa_sup > 0.0 { self.eps / wa_sup } else { 0.0 };
        let w = w.scale(scale);
        let q = w.apply(|k| if k < 0.0 { C64::new((-k).sqrt().recip(), 0.0) } else { C64::new(0.0, 0.0) });
        (w, q)
    }

    pub fn state(&self, grid: &Arc<Grid>, t: f64) -> Result<WaveState> {
        let (w, q) = self.fields(grid);
        WaveState::new(t, project_neg(&w), project_neg(&q))
    }
}
