use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::spectral_core::lp::LpBank;

/// Oversampling factor used when evaluating sup norms.
pub const SUP_OVERSAMPLE: usize = 4;

/// Discretization of the line as a torus of period `period` with `modes` Fourier modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub period: f64,
    pub modes: usize,
    pub dealias: f64,
}

impl GridSpec {
    pub fn new(period: f64, modes: usize, dealias: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Config(format!("period must be positive, got {period}")));
        }
        if modes < 16 || !modes.is_power_of_two() {
            return Err(Error::Config(format!(
                "mode count must be a power of two >= 16, got {modes}"
            )));
        }
        if !(dealias > 0.0 && dealias <= 1.0) {
            return Err(Error::Config(format!("dealias fraction must lie in (0, 1], got {dealias}")));
        }
        Ok(Self { period, modes, dealias })
    }

    /// L = 400 pi, N = 2048, 2/3 rule.
    pub fn desk() -> Self {
        Self { period: 400.0 * PI, modes: 2048, dealias: 2.0 / 3.0 }
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn dx(&self) -> f64 {
        self.period / self.modes as f64
    }

    /// Largest |j| that survives dealiasing.
    pub fn keep(&self) -> usize {
        let k = (self.dealias * self.modes as f64 / 2.0 + 1e-9).floor() as usize;
        k.min(self.modes / 2)
    }

    /// Lowest and highest resolvable frequencies, 2 pi / L and pi N / L.
    pub fn band(&self) -> (f64, f64) {
        (self.dk(), PI * self.modes as f64 / self.period)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={} N={} rho={}", self.period, self.modes, self.dealias)
    }
}

/// Transform plans, wavenumbers and Littlewood-Paley symbols for one [`GridSpec`].
pub struct Grid {
    spec: GridSpec,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    inv_fine: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    alpha: Vec<f64>,
    lp: LpBank,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("spec", &self.spec).finish()
    }
}

impl Grid {
    pub fn new(spec: GridSpec) -> Arc<Self> {
        let n = spec.modes;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let inv_fine = planner.plan_fft_inverse(n * SUP_OVERSAMPLE);
        let k = (0..n).map(|i| spec.dk() * index_to_j(i, n) as f64).collect();
        let alpha = (0..n).map(|m| -spec.period / 2.0 + m as f64 * spec.dx()).collect();
        let lp = LpBank::new(&spec);
        Arc::new(Self { spec, fwd, inv, inv_fine, k, alpha, lp })
    }

    pub fn desk() -> Arc<Self> {
        Self::new(GridSpec::desk())
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.modes
    }

    pub fn period(&self) -> f64 {
        self.spec.period
    }

    /// Wavenumbers in FFT order.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    /// Collocation points, alpha_m = -L/2 + m L / N.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn lp(&self) -> &LpBank {
        &self.lp
    }

    pub fn j_of(&self, i: usize) -> i64 {
        index_to_j(i, self.spec.modes)
    }

    pub fn index_of(&self, j: i64) -> usize {
        j.rem_euclid(self.spec.modes as i64) as usize
    }

    pub fn same(&self, other: &Grid) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }

    /// Spectral coefficients to grid values.
    pub fn to_values(&self, coef: &[Complex64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = coef
            .iter()
            .enumerate()
            .map(|(i, c)| if self.j_of(i) % 2 == 0 { *c } else { -*c })
            .collect();
        self.inv.process(&mut buf);
        buf
    }

    /// Grid values to spectral coefficients, u(alpha) = sum_j c_j exp(i k_j alpha).
    pub fn to_coef(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.spec.modes as f64;
        for (i, c) in buf.iter_mut().enumerate() {
            *c *= if self.j_of(i) % 2 == 0 { scale } else { -scale };
        }
        buf
    }

    /// Values on the grid refined by [`SUP_OVERSAMPLE`] (spectral interpolation).
    pub fn to_fine_values(&self, coef: &[Complex64]) -> Vec<Complex64> {
        let n = self.spec.modes;
        let nf = n * SUP_OVERSAMPLE;
        let mut buf = vec![Complex64::new(0.0, 0.0); nf];
        for (i, c) in coef.iter().enumerate() {
            let j = self.j_of(i);
            let s = if j % 2 == 0 { *c } else { -*c };
            buf[j.rem_euclid(nf as i64) as usize] = s;
        }
        self.inv_fine.process(&mut buf);
        buf
    }
}

pub(crate) fn index_to_j(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
