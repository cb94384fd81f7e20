use std::ops::{Add, AddAssign, Deref, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_core::grid::Grid;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A complex periodic function stored by its Fourier coefficients (FFT order).
#[derive(Clone)]
pub struct Field {
    grid: Arc<Grid>,
    coef: Vec<C64>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("grid", self.grid.spec())
            .field("l2", &self.norm_l2())
            .finish()
    }
}

impl Field {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { grid: grid.clone(), coef: vec![ZERO; grid.n()] }
    }

    pub fn from_coef(grid: &Arc<Grid>, coef: Vec<C64>) -> Self {
        assert_eq!(coef.len(), grid.n(), "coefficient count does not match the grid");
        Self { grid: grid.clone(), coef }
    }

    /// From grid values; no dealiasing is applied.
    pub fn from_values(grid: &Arc<Grid>, values: &[C64]) -> Self {
        assert_eq!(values.len(), grid.n(), "value count does not match the grid");
        Self { grid: grid.clone(), coef: grid.to_coef(values) }
    }

    /// Samples `f` at the collocation points; no dealiasing is applied.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> C64) -> Self {
        let values: Vec<C64> = grid.alpha().iter().map(|&a| f(a)).collect();
        Self::from_values(grid, &values)
    }

    /// The single mode exp(i k_j alpha) with amplitude `amp`.
    pub fn mode(grid: &Arc<Grid>, j: i64, amp: C64) -> Self {
        let mut f = Self::zeros(grid);
        let i = grid.index_of(j);
        f.coef[i] = amp;
        f
    }

    /// Builds a field from a symbol m(k) in spectral space.
    pub fn from_spectrum(grid: &Arc<Grid>, m: impl Fn(f64) -> C64) -> Self {
        let coef = grid.k().iter().map(|&k| m(k)).collect();
        Self { grid: grid.clone(), coef }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coef(&self) -> &[C64] {
        &self.coef
    }

    pub fn coef_mut(&mut self) -> &mut [C64] {
        &mut self.coef
    }

    pub fn into_coef(self) -> Vec<C64> {
        self.coef
    }

    /// Coefficient of exp(i k_j alpha).
    pub fn at(&self, j: i64) -> C64 {
        self.coef[self.grid.index_of(j)]
    }

    pub fn values(&self) -> Vec<C64> {
        self.grid.to_values(&self.coef)
    }

    pub fn check_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn assert_grid(&self, other: &Field) {
        assert!(self.grid.same(&other.grid), "fields live on different grids");
    }

    /// Zeroes every mode with |j| above the dealiasing threshold.
    pub fn dealias(mut self) -> Self {
        self.dealias_in_place();
        self
    }

    pub fn dealias_in_place(&mut self) {
        let keep = self.grid.spec().keep() as i64;
        for i in 0..self.coef.len() {
            if self.grid.j_of(i).abs() > keep {
                self.coef[i] = ZERO;
            }
        }
    }

    /// Applies a Fourier multiplier m(k).
    pub fn apply(&self, m: impl Fn(f64) -> C64) -> Self {
        let coef = self.coef.iter().zip(self.grid.k()).map(|(c, &k)| c * m(k)).collect();
        Self { grid: self.grid.clone(), coef }
    }

    /// Applies a real multiplier given as a table in FFT order.
    pub fn apply_table(&self, table: &[f64]) -> Self {
        let coef = self.coef.iter().zip(table).map(|(c, s)| c * s).collect();
        Self { grid: self.grid.clone(), coef }
    }

    pub fn dx(&self) -> Self {
        self.apply(|k| C64::new(0.0, k))
    }

    /// Antiderivative with the mean dropped.
    pub fn integrate(&self) -> Self {
        self.apply(|k| if k == 0.0 { ZERO } else { C64::new(0.0, -1.0 / k) })
    }

    /// Complex conjugate in physical space.
    pub fn conj(&self) -> Self {
        let n = self.coef.len();
        let coef = (0..n).map(|i| self.coef[(n - i) % n].conj()).collect();
        Self { grid: self.grid.clone(), coef }
    }

    /// Real part in physical space, returned as a field.
    pub fn re(&self) -> Self {
        (self + &self.conj()).scale(0.5)
    }

    /// 2 Re u.
    pub fn two_re(&self) -> Self {
        self + &self.conj()
    }

    /// Keeps the strictly negative frequencies.
    pub fn neg_part(&self) -> Self {
        self.apply(|k| if k < 0.0 { C64::new(1.0, 0.0) } else { ZERO })
    }

    /// Keeps the strictly positive frequencies.
    pub fn pos_part(&self) -> Self {
        self.apply(|k| if k > 0.0 { C64::new(1.0, 0.0) } else { ZERO })
    }

    pub fn mean(&self) -> C64 {
        self.coef[0]
    }

    pub fn without_mean(&self) -> Self {
        let mut f = self.clone();
        f.coef[0] = ZERO;
        f
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_c(C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self { grid: self.grid.clone(), coef: self.coef.iter().map(|c| c * s).collect() }
    }

    pub fn times_i(&self) -> Self {
        self.scale_c(C64::new(0.0, 1.0))
    }

    /// Dealiased pointwise product.
    pub fn mul(&self, other: &Field) -> Self {
        self.assert_grid(other);
        let a = self.values();
        let b = other.values();
        let prod: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Field::from_values(&self.grid, &prod).dealias()
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Evaluates `f` pointwise on the values of `fields` and dealiases the result.
    pub fn pointwise(fields: &[&Field], f: impl Fn(&[C64]) -> C64) -> Self {
        let grid = fields[0].grid.clone();
        for g in &fields[1..] {
            fields[0].assert_grid(g);
        }
        let vals: Vec<Vec<C64>> = fields.iter().map(|g| g.values()).collect();
        let mut args = vec![ZERO; fields.len()];
        let out: Vec<C64> = (0..grid.n())
            .map(|m| {
                for (a, v) in args.iter_mut().zip(&vals) {
                    *a = v[m];
                }
                f(&args)
            })
            .collect();
        Field::from_values(&grid, &out).dealias()
    }

    /// Dealiased product with the coordinate alpha.
    pub fn mul_alpha(&self) -> Self {
        let v = self.values();
        let out: Vec<C64> = v.iter().zip(self.grid.alpha()).map(|(x, a)| x * a).collect();
        Field::from_values(&self.grid, &out).dealias()
    }

    /// L^2 norm over one period.
    pub fn norm_l2(&self) -> f64 {
        (self.grid.period() * self.coef.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Sup norm of the spectral interpolant, sampled on the refined grid.
    pub fn norm_sup(&self) -> f64 {
        self.grid.to_fine_values(&self.coef).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest value on the collocation grid.
    pub fn grid_max(&self) -> f64 {
        self.values().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Complex pairing, integral of u times conj(v).
    pub fn inner(&self, other: &Field) -> C64 {
        self.assert_grid(other);
        let s: C64 = self.coef.iter().zip(&other.coef).map(|(a, b)| a * b.conj()).sum();
        s * self.grid.period()
    }

    /// Integral of u times v (no conjugation).
    pub fn bilinear(&self, other: &Field) -> C64 {
        self.assert_grid(other);
        let n = self.coef.len();
        let s: C64 = (0..n).map(|i| self.coef[i] * other.coef[(n - i) % n]).sum();
        s * self.grid.period()
    }

    pub fn integral(&self) -> C64 {
        self.coef[0] * self.grid.period()
    }

    pub fn max_coef(&self) -> f64 {
        self.coef.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude on the modes with k >= 0.
    pub fn nonneg_leakage(&self) -> f64 {
        self.coef
            .iter()
            .zip(self.grid.k())
            .filter(|(_, &k)| k >= 0.0)
            .map(|(c, _)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coef.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&Field> for &Field {
            type Output = Field;
            fn $f(self, rhs: &Field) -> Field {
                self.assert_grid(rhs);
                let coef = self.coef.iter().zip(&rhs.coef).map(|(a, b)| a $op b).collect();
                Field { grid: self.grid.clone(), coef }
            }
        }
        impl $tr<Field> for &Field {
            type Output = Field;
            fn $f(self, rhs: Field) -> Field {
                self $op &rhs
            }
        }
        impl $tr<&Field> for Field {
            type Output = Field;
            fn $f(self, rhs: &Field) -> Field {
                &self $op rhs
            }
        }
        impl $tr<Field> for Field {
            type Output = Field;
            fn $f(self, rhs: Field) -> Field {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);

impl AddAssign<&Field> for Field {
    fn add_assign(&mut self, rhs: &Field) {
        self.assert_grid(rhs);
        for (a, b) in self.coef.iter_mut().zip(&rhs.coef) {
            *a += b;
        }
    }
}

impl SubAssign<&Field> for Field {
    fn sub_assign(&mut self, rhs: &Field) {
        self.assert_grid(rhs);
        for (a, b) in self.coef.iter_mut().zip(&rhs.coef) {
            *a -= b;
        }
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scale(-1.0)
    }
}

impl Neg for Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, s: f64) -> Field {
        self.scale(s)
    }
}

impl Mul<f64> for Field {
    type Output = Field;
    fn mul(self, s: f64) -> Field {
        self.scale(s)
    }
}

impl Mul<C64> for &Field {
    type Output = Field;
    fn mul(self, s: C64) -> Field {
        self.scale_c(s)
    }
}

impl Mul<C64> for Field {
    type Output = Field;
    fn mul(self, s: C64) -> Field {
        self.scale_c(s)
    }
}

/// Relative threshold below which a nonnegative-frequency coefficient counts as zero.
pub const HOLO_TOL: f64 = 1e-13;

/// A field whose spectrum lives on strictly negative wavenumbers.
#[derive(Clone, Debug)]
pub struct HoloField(Field);

impl HoloField {
    /// Accepts `f` if its nonnegative modes are negligible, then zeroes them.
    pub fn try_new(f: Field) -> std::result::Result<Self, Field> {
        let max = f.max_coef();
        if f.nonneg_leakage() <= HOLO_TOL * max || max == 0.0 {
            Ok(Self(f.neg_part()))
        } else {
            Err(f)
        }
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self(Field::zeros(grid))
    }

    pub fn field(&self) -> &Field {
        &self.0
    }

    pub fn into_field(self) -> Field {
        self.0
    }
}

impl Deref for HoloField {
    type Target = Field;
    fn deref(&self) -> &Field {
        &self.0
    }
}

impl From<HoloField> for Field {
    fn from(h: HoloField) -> Field {
        h.0
    }
}

/// The projector P onto negative frequencies; the zero mode is dropped.
pub fn project_neg(u: &Field) -> HoloField {
    HoloField(u.neg_part())
}
