//! Paraproducts, balanced products and the trichotomy ab = T_a b + T_b a + Pi(a, b).
//!
//! T_a b = sum_j (S_{j-m} a)(P_j b), with the smooth blocks of
//! [`crate::spectral_core::lp`]. The symmetric quantization averages T_a with
//! the operator b -> sum_j P_j((S_{j-m} a) b), which is the adjoint of T_{conj a}.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::spectral_core::{lowpass, Field};

/// Choice of quantization for the paraproduct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantization {
    Plain,
    SymmetricAverage,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParaConfig {
    /// Octaves between the symbol's low-pass and the block of the argument.
    pub separation: i32,
    pub quantization: Quantization,
    /// Project every output onto negative frequencies.
    pub implicit_p: bool,
}

impl Default for ParaConfig {
    fn default() -> Self {
        Self { separation: 4, quantization: Quantization::SymmetricAverage, implicit_p: true }
    }
}

impl ParaConfig {
    pub fn new(separation: i32, quantization: Quantization, implicit_p: bool) -> Self {
        assert!(separation >= 2, "separation must be at least two octaves");
        Self { separation, quantization, implicit_p }
    }

    pub fn without_p(self) -> Self {
        Self { implicit_p: false, ..self }
    }

    fn finish(&self, f: Field) -> Field {
        if self.implicit_p {
            f.neg_part()
        } else {
            f
        }
    }

    /// T_a b.
    pub fn t(&self, a: &Field, b: &Field) -> Field {
        let out = match self.quantization {
            Quantization::Plain => low_high(a, b, self.separation),
            Quantization::SymmetricAverage => {
                (low_high(a, b, self.separation) + high_low_dual(a, b, self.separation)).scale(0.5)
            }
        };
        self.finish(out)
    }

    /// Adjoint of T_a for the pairing integral of u conj(v).
    pub fn t_adjoint(&self, a: &Field, v: &Field) -> Field {
        let ac = a.conj();
        let out = match self.quantization {
            Quantization::Plain => high_low_dual(&ac, v, self.separation),
            Quantization::SymmetricAverage => {
                (high_low_dual(&ac, v, self.separation) + low_high(&ac, v, self.separation))
                    .scale(0.5)
            }
        };
        self.finish(out)
    }

    /// Pi(a, b) = ab - T_a b - T_b a.
    pub fn pi(&self, a: &Field, b: &Field) -> Field {
        let raw = self.without_p();
        let out = a.mul(b) - raw.t(a, b) - raw.t(b, a);
        self.finish(out)
    }
}

/// sum_j (S_{j-m} a)(P_j b), dealiased, without projection.
fn low_high(a: &Field, b: &Field, m: i32) -> Field {
    let grid = a.grid().clone();
    let lp = grid.lp();
    let n = grid.n();
    let mut acc = vec![C64::new(0.0, 0.0); n];
    let mut any = false;
    for j in lp.indices() {
        let pb = b.apply_table(lp.block(j).expect("index in range"));
        if pb.max_coef() == 0.0 {
            continue;
        }
        let sa = lowpass(a, j - m);
        if sa.max_coef() == 0.0 {
            continue;
        }
        any = true;
        let x = sa.values();
        let y = pb.values();
        for ((o, p), q) in acc.iter_mut().zip(&x).zip(&y) {
            *o += p * q;
        }
    }
    if !any {
        return Field::zeros(&grid);
    }
    Field::from_values(&grid, &acc).dealias()
}

/// sum_j P_j((S_{j-m} a) b), dealiased, without projection.
fn high_low_dual(a: &Field, b: &Field, m: i32) -> Field {
    let grid = a.grid().clone();
    let lp = grid.lp();
    let mut out = Field::zeros(&grid);
    let bv = b.values();
    for j in lp.indices() {
        let sa = lowpass(a, j - m);
        if sa.max_coef() == 0.0 {
            continue;
        }
        let prod: Vec<C64> = sa.values().iter().zip(&bv).map(|(x, y)| x * y).collect();
        let block = Field::from_values(&grid, &prod).apply_table(lp.block(j).expect("in range"));
        out += &block;
    }
    out.dealias()
}

/// T_a b, checking that both fields share a grid.
pub fn para(a: &Field, b: &Field, cfg: &ParaConfig) -> Result<Field> {
    a.check_grid(b)?;
    Ok(cfg.t(a, b))
}

/// T_a^* v.
pub fn para_adjoint(a: &Field, v: &Field, cfg: &ParaConfig) -> Result<Field> {
    a.check_grid(v)?;
    Ok(cfg.t_adjoint(a, v))
}

/// Pi(a, b).
pub fn balanced(a: &Field, b: &Field, cfg: &ParaConfig) -> Result<Field> {
    a.check_grid(b)?;
    Ok(cfg.pi(a, b))
}

/// |ab - T_a b - T_b a - B(a, b)|_2 / |ab|_2 for the plain quantization at the
/// separation of `cfg`, where B(a, b) = sum_{|j - k| < m} P_j a P_k b + <a><b> is
/// assembled block by block, independently of [`ParaConfig::pi`].
pub fn trichotomy_residual(a: &Field, b: &Field, cfg: &ParaConfig) -> Result<f64> {
    a.check_grid(b)?;
    let c = ParaConfig { quantization: Quantization::Plain, implicit_p: false, ..*cfg };
    let ab = a.mul(b);
    let r = &ab - c.t(a, b) - c.t(b, a) - balanced_blocks(a, b, c.separation);
    let scale = ab.norm_l2();
    Ok(if scale == 0.0 { r.norm_l2() } else { r.norm_l2() / scale })
}

fn balanced_blocks(a: &Field, b: &Field, m: i32) -> Field {
    let grid = a.grid().clone();
    let lp = grid.lp();
    let blocks = |u: &Field| -> Vec<(i32, Vec<C64>)> {
        lp.indices().map(|j| (j, u.apply_table(lp.block(j).expect("in range")).values())).collect()
    };
    let pa = blocks(a);
    let pb = blocks(b);
    let mut acc = vec![C64::new(0.0, 0.0); grid.n()];
    for (j, x) in &pa {
        for (_, y) in pb.iter().filter(|(k, _)| (k - j).abs() < m) {
            for ((o, p), q) in acc.iter_mut().zip(x).zip(y) {
                *o += p * q;
            }
        }
    }
    let mut out = Field::from_values(&grid, &acc).dealias();
    out.coef_mut()[0] += a.mean() * b.mean();
    out
}

/// Empirical norm of u -> [chi, T_a] u_alpha on probes living in block `band`.
///
/// Probes are the negative modes closest to 2^band * {2^-1/2, 1, 2^1/2}.
pub fn commutator_norm(a: &Field, chi: &Field, band: i32, cfg: &ParaConfig) -> Result<f64> {
    a.check_grid(chi)?;
    let grid = a.grid().clone();
    let dk = grid.spec().dk();
    let keep = grid.spec().keep() as i64;
    let mut worst: f64 = 0.0;
    for f in [0.5f64.sqrt(), 1.0, 2.0f64.sqrt()] {
        let j = -((2f64.powi(band) * f / dk).round() as i64).clamp(1, keep);
        let u = Field::mode(&grid, j, C64::new(1.0, 0.0));
        let ua = u.dx();
        let c = chi.mul(&cfg.t(a, &ua)) - cfg.t(a, &chi.mul(&ua));
        worst = worst.max(c.norm_l2() / u.norm_l2());
    }
    Ok(worst)
}
