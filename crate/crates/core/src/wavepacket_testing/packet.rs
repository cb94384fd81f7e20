use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral_core::{Field, Grid};

/// Support margin, in packet widths, required on each side of the packet.
pub const SUPPORT_MARGIN: f64 = 5.0;

/// Smallest time at which packets are built.
pub const MIN_PACKET_TIME: f64 = 4.0;

fn raw_bump(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - y * y)).exp()
    }
}

fn bump_scale() -> f64 {
    static SCALE: OnceLock<f64> = OnceLock::new();
    *SCALE.get_or_init(|| {
        let n = 20_000;
        let h = 2.0 / n as f64;
        let s: f64 = (1..n).map(|i| raw_bump(-1.0 + i as f64 * h)).sum();
        1.0 / (s * h)
    })
}

/// chi(y) = c exp(1 - 1/(1 - y^2)) on |y| < 1 with unit integral.
pub fn chi(y: f64) -> f64 {
    bump_scale() * raw_bump(y)
}

/// chi and its first two derivatives.
pub fn chi_derivs(y: f64) -> (f64, f64, f64) {
    if y.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let c = chi(y);
    let d = 1.0 - y * y;
    let g1 = -2.0 * y / (d * d);
    let g2 = -2.0 / (d * d) - 8.0 * y * y / (d * d * d);
    (c, c * g1, c * (g1 * g1 + g2))
}

/// Omega^0 = [t^{-1/100}, t^{1/100}].
pub fn omega0(t: f64) -> (f64, f64) {
    (t.powf(-0.01), t.powf(0.01))
}

/// Packet frequency xi_v = -1/(4 v^2).
pub fn xi_v(v: f64) -> f64 {
    -1.0 / (4.0 * v * v)
}

/// The wave packet u on the ray alpha = v t and its companions (w, q) = (-i v u_t, v u).
#[derive(Clone, Debug)]
pub struct PacketFrame {
    pub t: f64,
    pub v: f64,
    /// Spatial scale t^{1/2} v^{3/2}.
    pub width: f64,
    /// phi = t^2 / (4 alpha) on the grid, set to zero off the packet support.
    pub phi: Vec<f64>,
    pub u: Field,
    pub w: Field,
    pub q: Field,
    /// Analytic time derivative of u.
    pub u_t: Field,
    /// Analytic alpha derivative of u.
    pub u_a: Field,
}

struct Local {
    y: f64,
    chi: (f64, f64, f64),
    /// v^{-3/2} e^{i phi}.
    amp: C64,
}

impl PacketFrame {
    pub fn grid(&self) -> &Arc<Grid> {
        self.u.grid()
    }

    /// phi at alpha = v t, equal to t / (4 v).
    pub fn phase_on_ray(&self) -> f64 {
        self.t / (4.0 * self.v)
    }

    pub fn xi(&self) -> f64 {
        xi_v(self.v)
    }

    fn locals(&self) -> impl Iterator<Item = (f64, Option<Local>)> + '_ {
        let (t, v, d) = (self.t, self.v, self.width);
        self.grid().alpha().iter().map(move |&a| {
            let y = (a - v * t) / d;
            if y.abs() >= 1.0 {
                (a, None)
            } else {
                let amp = C64::from_polar(v.powf(-1.5), t * t / (4.0 * a));
                (a, Some(Local { y, chi: chi_derivs(y), amp }))
            }
        })
    }

    fn assemble(&self, f: impl Fn(f64, &Local) -> C64) -> Field {
        let vals: Vec<C64> =
            self.locals().map(|(a, l)| l.map_or(C64::new(0.0, 0.0), |l| f(a, &l))).collect();
        Field::from_values(self.grid(), &vals)
    }

    /// The two pieces of (d_alpha - i d_t^2) u in closed form: the leading
    /// d_alpha[...] term and the remainder.
    pub fn defect_parts(&self) -> (Field, Field) {
        let (t, v, d) = (self.t, self.v, self.width);
        let k = 1.0 / d;
        let c = 4.0 * v.powf(1.5) * t.powf(2.5);
        let lead = self.assemble(|a, l| {
            let (x, x1, x2) = l.chi;
            let re = v * t / (2.0 * a * a) * x + (a - v * t) / (2.0 * a) * x1 * k;
            let im = 2.0 * (a + v * t) / c * x1 + (a + v * t).powi(2) / c * x2 * k;
            C64::new(re, -im) * l.amp
        });
        let sub = self.assemble(|a, l| {
            let (x, x1, _) = l.chi;
            C64::new((a - v * t) / (2.0 * a * a) * x, -(a - v * t) / c * x1) * l.amp
        });
        (lead, sub)
    }

    /// d_t w = -i v u_tt, with u_tt = i((d_alpha - i d_t^2) u - u_alpha).
    pub fn w_t(&self) -> Field {
        let (lead, sub) = self.defect_parts();
        (lead + sub - &self.u_a).scale(self.v)
    }

    /// d_t q = v u_t.
    pub fn q_t(&self) -> Field {
        self.u_t.scale(self.v)
    }
}

/// Builds the packet frame at time t and velocity v.
pub fn build_packet(t: f64, v: f64, grid: &Arc<Grid>) -> Result<PacketFrame> {
    let (lo, hi) = omega0(t);
    if !(t >= MIN_PACKET_TIME) || !(v >= lo * (1.0 - 1e-12) && v <= hi * (1.0 + 1e-12)) {
        return Err(Error::OutOfDomain { t, v });
    }
    let width = t.sqrt() * v.powf(1.5);
    let half = grid.period() / 2.0;
    let reach = (1.0 + SUPPORT_MARGIN) * width;
    if v * t - width <= 0.0 {
        return Err(Error::OutOfDomain { t, v });
    }
    if v * t + reach > half || v * t - reach < -half {
        return Err(Error::WrapAround { t, v });
    }
    let mut frame = PacketFrame {
        t,
        v,
        width,
        phi: Vec::new(),
        u: Field::zeros(grid),
        w: Field::zeros(grid),
        q: Field::zeros(grid),
        u_t: Field::zeros(grid),
        u_a: Field::zeros(grid),
    };
    frame.phi = frame.locals().map(|(a, l)| if l.is_some() { t * t / (4.0 * a) } else { 0.0 }).collect();
    let k = 1.0 / width;
    frame.u = frame.assemble(|_, l| l.amp * l.chi.0);
    frame.u_t = frame.assemble(|a, l| {
        let (x, x1, _) = l.chi;
        let yt = -1.0 / (v * t).sqrt() - l.y / (2.0 * t);
        l.amp * C64::new(x1 * yt, x * t / (2.0 * a))
    });
    frame.u_a = frame.assemble(|a, l| {
        let (x, x1, _) = l.chi;
        l.amp * C64::new(x1 * k, -x * t * t / (4.0 * a * a))
    });
    frame.w = frame.assemble(|a, l| {
        let (x, x1, _) = l.chi;
        let lead = 0.5 * x + (v * t - a) / (2.0 * a) * x;
        let corr = (v * t + a) / (2.0 * t.powf(1.5) * v.sqrt()) * x1;
        l.amp * C64::new(lead, corr)
    });
    frame.q = frame.u.scale(v);
    Ok(frame)
}
