//! Smooth dyadic Littlewood-Paley symbols.
//!
//! The bump is psi(x) = cos^2(pi x / 2) on |x| < 1 with x = log2|xi| - k, so
//! neighbouring blocks sum to one exactly. The lowest and highest resolvable
//! blocks are flattened to one below and above their centers, which makes the
//! family an exact partition of unity on every nonzero grid frequency.

use std::f64::consts::PI;

use crate::spectral_core::grid::{index_to_j, GridSpec};

/// Raised-cosine bump in octave units.
pub fn psi(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        let c = (0.5 * PI * x).cos();
        c * c
    }
}

/// Symbol of block `k` within the range `[k_lo, k_hi]` at frequency `xi`.
pub fn block_symbol(k: i32, k_lo: i32, k_hi: i32, xi: f64) -> f64 {
    let a = xi.abs();
    if a == 0.0 {
        return 0.0;
    }
    let x = a.log2() - k as f64;
    if (k == k_lo && x <= 0.0) || (k == k_hi && x >= 0.0) {
        1.0
    } else {
        psi(x)
    }
}

/// Precomputed block and low-pass symbols on one grid.
#[derive(Debug, Clone)]
pub struct LpBank {
    k_lo: i32,
    k_hi: i32,
    blocks: Vec<Vec<f64>>,
    lowpass: Vec<Vec<f64>>,
}

impl LpBank {
    pub fn new(spec: &GridSpec) -> Self {
        let (lo, hi) = spec.band();
        let k_lo = lo.log2().ceil() as i32;
        let k_hi = (hi.log2().floor() as i32).max(k_lo);
        let n = spec.modes;
        let xi: Vec<f64> = (0..n).map(|i| spec.dk() * index_to_j(i, n) as f64).collect();
        let blocks: Vec<Vec<f64>> = (k_lo..=k_hi)
            .map(|k| xi.iter().map(|&x| block_symbol(k, k_lo, k_hi, x)).collect())
            .collect();
        let mut lowpass = Vec::with_capacity(blocks.len());
        let mut acc: Vec<f64> = xi.iter().map(|&x| if x == 0.0 { 1.0 } else { 0.0 }).collect();
        for b in &blocks {
            for (a, s) in acc.iter_mut().zip(b) {
                *a += s;
            }
            lowpass.push(acc.clone());
        }
        Self { k_lo, k_hi, blocks, lowpass }
    }

    pub fn k_lo(&self) -> i32 {
        self.k_lo
    }

    pub fn k_hi(&self) -> i32 {
        self.k_hi
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        self.k_lo..=self.k_hi
    }

    pub fn contains(&self, k: i32) -> bool {
        (self.k_lo..=self.k_hi).contains(&k)
    }

    /// Symbol of P_k in FFT order; `None` outside the resolvable range.
    pub fn block(&self, k: i32) -> Option<&[f64]> {
        if self.contains(k) {
            Some(&self.blocks[(k - self.k_lo) as usize])
        } else {
            None
        }
    }

    /// Symbol of the low-pass S_n = sum over i <= n of P_i, plus the zero mode.
    pub fn lowpass(&self, n: i32) -> LowPass<'_> {
        if n < self.k_lo {
            LowPass::MeanOnly
        } else if n >= self.k_hi {
            LowPass::All
        } else {
            LowPass::Symbol(&self.lowpass[(n - self.k_lo) as usize])
        }
    }
}

/// Low-pass multiplier, with the two degenerate ends kept symbolic.
#[derive(Debug, Clone, Copy)]
pub enum LowPass<'a> {
    MeanOnly,
    Symbol(&'a [f64]),
    All,
}
