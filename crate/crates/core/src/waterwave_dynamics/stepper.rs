use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral_core::{project_neg, Field, Grid};
use crate::waterwave_dynamics::rhs::{rhs_full, rhs_linear, rhs_nonlinear, PairRate};
use crate::waterwave_dynamics::state::WaveState;

/// Explicit RK4 stability margin on the imaginary axis for the bound dt * max omega.
pub const STABILITY_BOUND: f64 = 2.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    Rk4IntegratingFactor,
}

impl Scheme {
    pub fn tag(&self) -> &'static str {
        match self {
            Scheme::Rk4 => "rk4",
            Scheme::Rk4IntegratingFactor => "rk4_integrating_factor",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "rk4" => Some(Scheme::Rk4),
            "rk4_integrating_factor" => Some(Scheme::Rk4IntegratingFactor),
            _ => None,
        }
    }
}

/// Which right side is integrated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dynamics {
    Full,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    pub dynamics: Dynamics,
}

impl StepperConfig {
    pub fn new(dt: f64, scheme: Scheme) -> Self {
        Self { dt, scheme, dealias: true, dynamics: Dynamics::Full }
    }

    pub fn linear(self) -> Self {
        Self { dynamics: Dynamics::Linear, ..self }
    }

    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    /// Largest linear frequency carried by the grid.
    pub fn max_omega(&self, grid: &Grid) -> f64 {
        let spec = grid.spec();
        let jmax = if self.dealias { spec.keep() } else { spec.modes / 2 };
        (jmax as f64 * spec.dk()).sqrt()
    }

    /// The explicit scheme must resolve the fastest linear oscillation.
    pub fn check(&self, grid: &Grid) -> Result<()> {
        let max_omega = self.max_omega(grid);
        let explicit = self.scheme == Scheme::Rk4;
        if !(self.dt.is_finite() && self.dt > 0.0)
            || (explicit && self.dt.abs() * max_omega >= STABILITY_BOUND)
        {
            return Err(Error::StabilityViolation { dt: self.dt, max_omega, bound: STABILITY_BOUND });
        }
        Ok(())
    }
}

#[derive(Clone)]
struct Pair {
    w: Field,
    q: Field,
}

impl Pair {
    fn of(s: &WaveState) -> Self {
        Self { w: s.w.field().clone(), q: s.q.field().clone() }
    }

    fn rate(r: PairRate) -> Self {
        Self { w: r.dw.into_field(), q: r.dq.into_field() }
    }

    fn axpy(&self, h: f64, k: &Pair) -> Pair {
        Pair { w: &self.w + &k.w.scale(h), q: &self.q + &k.q.scale(h) }
    }

    fn state(&self, t: f64, dealias: bool) -> Result<WaveState> {
        let (w, q) = if dealias {
            (self.w.clone().dealias(), self.q.clone().dealias())
        } else {
            (self.w.clone(), self.q.clone())
        };
        WaveState::new(t, project_neg(&w), project_neg(&q))
    }
}

/// Exact flow of W_t = -Q_alpha, Q_t = iW over time h, mode by mode.
pub fn propagate_linear(w: &Field, q: &Field, h: f64) -> (Field, Field) {
    let grid = w.grid().clone();
    let k = grid.k();
    let mut wo = Field::zeros(&grid);
    let mut qo = Field::zeros(&grid);
    for (i, &kk) in k.iter().enumerate() {
        if kk >= 0.0 {
            continue;
        }
        let om = (-kk).sqrt();
        let (s, c) = (om * h).sin_cos();
        let sw = s / om;
        let a = w.coef()[i];
        let b = q.coef()[i];
        wo.coef_mut()[i] = a * c + C64::new(0.0, -kk) * b * sw;
        qo.coef_mut()[i] = b * c + C64::new(0.0, 1.0) * a * sw;
    }
    (wo, qo)
}

fn expo(p: &Pair, h: f64) -> Pair {
    let (w, q) = propagate_linear(&p.w, &p.q, h);
    Pair { w, q }
}

fn nonlinear(p: &Pair, t: f64, cfg: &StepperConfig) -> Result<Pair> {
    let s = p.state(t, cfg.dealias)?;
    Ok(match cfg.dynamics {
        Dynamics::Full => Pair::rate(rhs_nonlinear(&s)),
        Dynamics::Linear => Pair { w: Field::zeros(s.w.grid()), q: Field::zeros(s.w.grid()) },
    })
}

fn full(p: &Pair, t: f64, cfg: &StepperConfig) -> Result<Pair> {
    let s = p.state(t, cfg.dealias)?;
    Ok(match cfg.dynamics {
        Dynamics::Full => Pair::rate(rhs_full(&s)),
        Dynamics::Linear => Pair::rate(rhs_linear(&s)),
    })
}

/// Advances the state by one step of size `cfg.dt` (negative steps integrate backwards).
pub fn step(state: &WaveState, cfg: &StepperConfig) -> Result<WaveState> {
    step_by(state, cfg, cfg.dt)
}

fn step_by(state: &WaveState, cfg: &StepperConfig, h: f64) -> Result<WaveState> {
    let grid = state.w.grid().clone();
    cfg.with_dt(h.abs()).check(&grid)?;
    let t = state.t;
    let u = Pair::of(state);
    let next = match cfg.scheme {
        Scheme::Rk4 => {
            let k1 = full(&u, t, cfg)?;
            let k2 = full(&u.axpy(h / 2.0, &k1), t + h / 2.0, cfg)?;
            let k3 = full(&u.axpy(h / 2.0, &k2), t + h / 2.0, cfg)?;
            let k4 = full(&u.axpy(h, &k3), t + h, cfg)?;
            let mut w = u.w.clone();
            let mut q = u.q.clone();
            w += &(&k1.w + &k2.w.scale(2.0) + k3.w.scale(2.0) + &k4.w).scale(h / 6.0);
            q += &(&k1.q + &k2.q.scale(2.0) + k3.q.scale(2.0) + &k4.q).scale(h / 6.0);
            Pair { w, q }
        }
        Scheme::Rk4IntegratingFactor => {
            let half = expo(&u, h / 2.0);
            let whole = expo(&u, h);
            let k1 = nonlinear(&u, t, cfg)?;
            let k2 = nonlinear(&expo(&u.axpy(h / 2.0, &k1), h / 2.0), t + h / 2.0, cfg)?;
            let k3 = nonlinear(&half.axpy(h / 2.0, &k2), t + h / 2.0, cfg)?;
            let k4 = nonlinear(&whole.axpy(h, &expo(&k3, h / 2.0)), t + h, cfg)?;
            let e1 = expo(&k1, h);
            let mid = expo(&Pair { w: &k2.w + &k3.w, q: &k2.q + &k3.q }, h / 2.0);
            let w = &whole.w + &(&e1.w + &mid.w.scale(2.0) + &k4.w).scale(h / 6.0);
            let q = &whole.q + &(&e1.q + &mid.q.scale(2.0) + &k4.q).scale(h / 6.0);
            Pair { w, q }
        }
    };
    next.state(t + h, cfg.dealias)
}

/// Steps from `state.t` to `t_end` with equal steps no longer than `cfg.dt`.
pub fn evolve(state: &WaveState, cfg: &StepperConfig, t_end: f64) -> Result<WaveState> {
    evolve_with(state, cfg, t_end, |_| Ok(()))
}

/// As [`evolve`], calling `observe` after every step.
pub fn evolve_with(
    state: &WaveState,
    cfg: &StepperConfig,
    t_end: f64,
    mut observe: impl FnMut(&WaveState) -> Result<()>,
) -> Result<WaveState> {
    let span = t_end - state.t;
    if span == 0.0 {
        return Ok(state.clone());
    }
    let steps = (span.abs() / cfg.dt - 1e-9).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let t0 = state.t;
    let mut s = state.clone();
    for n in 0..steps {
        s = step_by(&s, cfg, h)?;
        s.t = if n + 1 == steps { t_end } else { t0 + (n + 1) as f64 * h };
        observe(&s)?;
    }
    Ok(s)
}
