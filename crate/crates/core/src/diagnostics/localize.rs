//! Spatial dyadic cover, the elliptic/hyperbolic split and the X-sharp norm.
//!
//! Spatial bumps are psi(COVER_PER_OCTAVE * log2|alpha| - m) on each sign of alpha,
//! with alpha_0 = 2^{m / COVER_PER_OCTAVE} between alpha_lo = t^{3/4} and
//! min(t^2, L/2). When t^2 exceeds L/2 the outermost block is flattened up to
//! the edge of the torus and the high region is empty. The block frequency is
//! |xi_0| = t^2 / (4 alpha_0^2).

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral_core::lp::psi;
use crate::spectral_core::{frac_derivative_nomean, sobolev_norm, Field, Grid};

use super::record::{x_norm, x_zero_norm};

/// Bumps per octave of |alpha|; neighbouring bumps overlap by half.
pub const COVER_PER_OCTAVE: f64 = 2.0;

pub type Pair = (Field, Field);

fn add(a: &Pair, b: &Pair) -> Pair {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn sub(a: &Pair, b: &Pair) -> Pair {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn zero_pair(grid: &Arc<Grid>) -> Pair {
    (Field::zeros(grid), Field::zeros(grid))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// |alpha| below alpha_lo, including alpha = 0.
    Low,
    /// |alpha| beyond the last block.
    High,
    /// Bump centered at the signed position `center`.
    Block { center: f64 },
}

/// A spatial bump chi and its action (w, q) -> (chi w, d^{-1}(chi q_alpha)).
#[derive(Clone, Debug)]
pub struct Localizer {
    pub region: Region,
    /// Bump values on the collocation grid.
    pub chi: Vec<f64>,
}

impl Localizer {
    pub fn apply(&self, w: &Field, q: &Field) -> Pair {
        let grid = w.grid();
        let mul = |f: &Field| {
            let v: Vec<C64> = f.values().iter().zip(&self.chi).map(|(x, c)| x * c).collect();
            Field::from_values(grid, &v)
        };
        (mul(w), mul(&q.dx()).integrate())
    }
}

/// Partition of unity on the torus adapted to time t.
#[derive(Clone, Debug)]
pub struct SpatialCover {
    pub t: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub localizers: Vec<Localizer>,
}

impl SpatialCover {
    /// Sum of all bumps at every grid point.
    pub fn total(&self) -> Vec<f64> {
        let n = self.localizers[0].chi.len();
        (0..n).map(|i| self.localizers.iter().map(|l| l.chi[i]).sum()).collect()
    }
}

/// Dyadic cover for time t >= 1.
pub fn spatial_cover(grid: &Arc<Grid>, t: f64) -> Result<SpatialCover> {
    if !(t >= 1.0) {
        return Err(Error::TimeTooSmall(t));
    }
    let p = COVER_PER_OCTAVE;
    let alpha_lo = t.powf(0.75);
    let alpha_hi = t * t;
    let top = alpha_hi.min(grid.period() / 2.0);
    let m_lo = (p * alpha_lo.log2()).ceil() as i32;
    let truncated = alpha_hi >= grid.period() / 2.0;
    let m_hi = (p * top.log2()).floor() as i32 - if truncated { 0 } else { 1 };
    let xs: Vec<f64> = grid.alpha().iter().map(|a| p * a.abs().log2()).collect();
    let low: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let y = x - (m_lo - 1) as f64;
            if y <= 0.0 {
                1.0
            } else {
                psi(y)
            }
        })
        .collect();
    let mut localizers = vec![Localizer { region: Region::Low, chi: low.clone() }];
    let mut used = low;
    for m in m_lo..=m_hi {
        let a0 = 2f64.powf(m as f64 / p);
        for sign in [-1.0, 1.0] {
            let chi: Vec<f64> = xs
                .iter()
                .zip(grid.alpha())
                .map(|(&x, &a)| {
                    let y = x - m as f64;
                    if a * sign <= 0.0 {
                        0.0
                    } else if truncated && m == m_hi && y >= 0.0 {
                        1.0
                    } else {
                        psi(y)
                    }
                })
                .collect();
            for (u, c) in used.iter_mut().zip(&chi) {
                *u += c;
            }
            localizers.push(Localizer { region: Region::Block { center: sign * a0 }, chi });
        }
    }
    let high = used.iter().map(|u| (1.0 - u).max(0.0)).collect();
    localizers.push(Localizer { region: Region::High, chi: high });
    Ok(SpatialCover { t, alpha_lo, alpha_hi, localizers })
}

/// Flat-top symbol around |xi_0|: one within two octaves, zero beyond three.
pub fn flat_top(xi: f64, xi0: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    let y = (xi.abs() / xi0).log2();
    (-2..=2).map(|i| psi(y - i as f64)).sum()
}

/// One spatial block and its hyperbolic frequency part.
#[derive(Clone, Debug)]
pub struct HypBlock {
    /// Signed center alpha_0.
    pub center: f64,
    /// |xi_0| = t^2 / (4 alpha_0^2).
    pub xi0: f64,
    /// chi_{alpha_0}(w, q).
    pub local: Pair,
    /// P_{xi_0} chi_{alpha_0}(w, q).
    pub hyp: Pair,
}

impl HypBlock {
    /// Share of the H^0 x H^{1/2} mass of the hyperbolic part with |xi| within one octave of xi_0.
    pub fn concentration(&self) -> f64 {
        let mass = |f: &Field, g: &Field, near: bool| -> f64 {
            let sel = |k: f64| {
                let inside = k != 0.0 && (k.abs() / self.xi0).log2().abs() <= 1.0;
                if inside == near {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            };
            f.apply(sel).norm_l2().powi(2) + frac_derivative_nomean(&g.apply(sel), 0.5).norm_l2().powi(2)
        };
        let near = mass(&self.hyp.0, &self.hyp.1, true);
        let far = mass(&self.hyp.0, &self.hyp.1, false);
        if near + far == 0.0 {
            1.0
        } else {
            near / (near + far)
        }
    }

    /// Group velocity of the block, alpha_0 / t.
    pub fn velocity(&self, t: f64) -> f64 {
        self.center / t
    }
}

/// (w, q) = ell + hyp with hyp = sum over blocks of P_{xi_0} chi_{alpha_0}(w, q).
#[derive(Clone, Debug)]
pub struct EllHypSplit {
    pub t: f64,
    pub low: Pair,
    pub high: Pair,
    pub blocks: Vec<HypBlock>,
    pub ell: Pair,
    pub hyp: Pair,
}

pub fn ell_hyp_split(pair: (&Field, &Field), t: f64) -> Result<EllHypSplit> {
    let (w, q) = pair;
    w.check_grid(q)?;
    let grid = w.grid();
    let cover = spatial_cover(grid, t)?;
    let mut low = zero_pair(grid);
    let mut high = zero_pair(grid);
    let mut blocks = Vec::new();
    let mut ell = zero_pair(grid);
    let mut hyp = zero_pair(grid);
    for loc in &cover.localizers {
        let local = loc.apply(w, q);
        match loc.region {
            Region::Low => low = local,
            Region::High => high = local,
            Region::Block { center } => {
                let xi0 = t * t / (4.0 * center * center);
                let sym = |k: f64| C64::new(flat_top(k, xi0), 0.0);
                let h = (local.0.apply(sym), local.1.apply(sym));
                ell = add(&ell, &sub(&local, &h));
                hyp = add(&hyp, &h);
                blocks.push(HypBlock { center, xi0, local, hyp: h });
            }
        }
    }
    ell = add(&add(&ell, &low), &high);
    Ok(EllHypSplit { t, low, high, blocks, ell, hyp })
}

/// The exponents (a, b) = (5/4, (sigma - 11/4)/4) of the block norms.
pub fn xsharp_exponents(sigma: f64) -> (f64, f64) {
    (1.25, 0.25 * (sigma - 2.75))
}

/// Components of the X-sharp norm.
#[derive(Clone, Debug, PartialEq)]
pub struct XsharpParts {
    /// t^{1/2} |chi_lo (w, q)|_{H^{3/4}}.
    pub lo: f64,
    /// t^{3/2} |chi_hi (w, q)_alpha|_{H^{1/4}}.
    pub hi: f64,
    /// (alpha_0, xi_0, block norm) for every block.
    pub blocks: Vec<(f64, f64, f64)>,
    /// (alpha_0, elliptic block norm).
    pub blocks_ell: Vec<(f64, f64)>,
    pub total: f64,
    pub total_ell: f64,
}

fn hnorm(p: &Pair, s: f64) -> f64 {
    let a = frac_derivative_nomean(&p.0, s);
    let b = frac_derivative_nomean(&p.1, s + 0.5);
    (a.norm_l2().powi(2) + b.norm_l2().powi(2)).sqrt()
}

fn deriv(p: &Pair) -> Pair {
    (p.0.dx(), p.1.dx())
}

fn split_by(p: &Pair, xi0: f64, above: bool) -> Pair {
    let sym = |k: f64| {
        let side = if above { k.abs() > xi0 } else { k != 0.0 && k.abs() < xi0 };
        C64::new(if side { 1.0 - flat_top(k, xi0) } else { 0.0 }, 0.0)
    };
    (p.0.apply(sym), p.1.apply(sym))
}

/// Evaluates the X-sharp norm and its elliptic variant on a split.
pub fn xsharp_norm(split: &EllHypSplit, sigma: f64) -> XsharpParts {
    let t = split.t;
    let (a, b) = xsharp_exponents(sigma);
    let st = t.sqrt();
    let lo = st * sobolev_norm(&split.low.0, &split.low.1.without_mean(), 0.75, true).expect("mean removed");
    let hi = t.powf(1.5) * hnorm(&deriv(&split.high), 0.25);
    let mut blocks = Vec::new();
    let mut blocks_ell = Vec::new();
    for blk in &split.blocks {
        let x0 = blk.xi0;
        let above = deriv(&split_by(&blk.local, x0, true));
        let below = deriv(&split_by(&blk.local, x0, false));
        let gain = if x0 < 1.0 { x0.powf(-a) } else { x0.powf(b) };
        let v = st / x0.sqrt() * hnorm(&above, 0.25)
            + st * hnorm(&below, -0.25)
            + gain * x_zero_norm(&blk.hyp.0, &blk.hyp.1);
        blocks.push((blk.center, x0, v));
        let e = sub(&blk.local, &blk.hyp);
        let de = deriv(&e);
        blocks_ell.push((blk.center, st / x0.sqrt() * hnorm(&de, 0.25) + st * hnorm(&de, -0.25)));
    }
    let sup = blocks.iter().map(|b| b.2).fold(0.0, f64::max);
    let sup_ell = blocks_ell.iter().map(|b| b.1).fold(0.0, f64::max);
    XsharpParts { lo, hi, blocks, blocks_ell, total: lo + hi + sup, total_ell: lo + hi + sup_ell }
}

/// Hyperbolic part restricted to blocks with velocity outside [t^{-delta}, t^delta].
pub fn hyp_velocity_masked(split: &EllHypSplit, delta: f64) -> Pair {
    let t = split.t;
    let grid = split.hyp.0.grid();
    let mut out = zero_pair(grid);
    for blk in &split.blocks {
        let v = blk.velocity(t).abs();
        if v < t.powf(-delta) || v > t.powf(delta) {
            out = add(&out, &blk.hyp);
        }
    }
    out
}

impl EllHypSplit {
    /// X norm of (w, q)_{hyp, alpha}.
    pub fn hyp_x_norm(&self) -> f64 {
        x_norm(&self.hyp.0.dx(), &self.hyp.1.dx())
    }

    /// ell + hyp.
    pub fn reconstruct(&self) -> Pair {
        add(&self.ell, &self.hyp)
    }
}
