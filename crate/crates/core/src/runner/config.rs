use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral_core::GridSpec;
use crate::waterwave_dynamics::{Dynamics, PacketData, Scheme, StepperConfig};
use crate::wavepacket_testing::{build_packet, velocity_grid, MIN_PACKET_TIME};

/// Smallest admissible regularity index sigma.
pub const SIGMA_MIN: f64 = 11.0 / 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Period L of the torus.
    pub period: f64,
    pub modes: usize,
    #[serde(default = "default_dealias")]
    pub dealias: f64,
}

fn default_dealias() -> f64 {
    2.0 / 3.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperSection {
    pub dt: f64,
    /// "rk4" or "rk4_integrating_factor".
    #[serde(default = "default_scheme")]
    pub scheme: String,
    /// Integrate only the linear part.
    #[serde(default)]
    pub linear: bool,
}

fn default_scheme() -> String {
    Scheme::Rk4IntegratingFactor.tag().to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    /// Sup norm of W_alpha at t = 0.
    pub eps: f64,
    /// Group velocity of the carrier, k0 = 1 / (4 v^2).
    pub velocity: f64,
    /// Spectral width of the Gaussian envelope.
    pub width: f64,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_sigma() -> f64 {
    3.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_end: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    /// Time between norm records.
    pub norm_every: f64,
    /// Time between gamma samples; zero disables the profile.
    #[serde(default)]
    pub gamma_every: f64,
    #[serde(default = "default_gamma_start")]
    pub gamma_start: f64,
    #[serde(default = "default_velocities")]
    pub velocities: usize,
    /// Time between checkpoints; zero keeps only the final state.
    #[serde(default)]
    pub checkpoint_every: f64,
    /// Sobolev orders recorded as extra columns.
    #[serde(default)]
    pub sobolev: Vec<f64>,
}

fn default_gamma_start() -> f64 {
    16.0
}

fn default_velocities() -> usize {
    crate::wavepacket_testing::VELOCITY_POINTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Run directory, relative to the output root unless absolute.
    pub dir: String,
}

/// A simulation run as read from a TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSection,
    pub stepper: StepperSection,
    pub data: DataSection,
    pub run: RunSection,
    pub sampling: SamplingSection,
    pub output: OutputSection,
}

fn bad(msg: String) -> Error {
    Error::Config(msg)
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is representable in TOML")
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.period, self.grid.modes, self.grid.dealias)
    }

    pub fn stepper(&self) -> Result<StepperConfig> {
        let scheme = Scheme::from_tag(&self.stepper.scheme)
            .ok_or_else(|| bad(format!("unknown scheme `{}`", self.stepper.scheme)))?;
        let mut s = StepperConfig::new(self.stepper.dt, scheme);
        if self.stepper.linear {
            s.dynamics = Dynamics::Linear;
        }
        Ok(s)
    }

    pub fn packet_data(&self) -> PacketData {
        let mut d = PacketData::for_velocity(self.data.eps, self.data.velocity, self.data.width);
        d.center = self.data.center;
        d
    }

    /// Velocity grid of the gamma profile, fixed at the first sample time.
    pub fn velocities(&self) -> Vec<f64> {
        velocity_grid(self.sampling.gamma_start, self.sampling.velocities)
    }

    /// Checks every precondition that can be decided before stepping.
    pub fn validate(&self) -> Result<()> {
        let spec = self.grid_spec()?;
        let grid = crate::spectral_core::Grid::new(spec);
        self.stepper()?.check(&grid)?;
        let d = &self.data;
        if !(d.eps.is_finite() && d.eps >= 0.0 && d.eps < 0.5) {
            return Err(bad(format!("eps must lie in [0, 0.5), got {}", d.eps)));
        }
        if !(d.velocity.is_finite() && d.velocity > 0.0) {
            return Err(bad(format!("velocity must be positive, got {}", d.velocity)));
        }
        let k0 = 1.0 / (4.0 * d.velocity * d.velocity);
        let kmax = spec.keep() as f64 * spec.dk();
        if k0 > kmax {
            return Err(bad(format!("carrier |k0| = {k0} exceeds the resolved band {kmax}")));
        }
        if !(d.width.is_finite() && d.width > 0.0) {
            return Err(bad(format!("width must be positive, got {}", d.width)));
        }
        if !(d.sigma > SIGMA_MIN) {
            return Err(bad(format!("sigma must exceed 11/4, got {}", d.sigma)));
        }
        if !(self.run.t_end.is_finite() && self.run.t_end > 0.0) {
            return Err(bad(format!("t_end must be positive, got {}", self.run.t_end)));
        }
        let s = &self.sampling;
        if !(s.norm_every > 0.0) {
            return Err(bad(format!("norm_every must be positive, got {}", s.norm_every)));
        }
        if !(s.gamma_every >= 0.0 && s.checkpoint_every >= 0.0) {
            return Err(bad("cadences must be nonnegative".into()));
        }
        if s.sobolev.iter().any(|o| !(o.is_finite() && *o >= 0.0)) {
            return Err(bad("Sobolev orders must be nonnegative".into()));
        }
        if s.gamma_every > 0.0 {
            if s.gamma_start < MIN_PACKET_TIME {
                return Err(bad(format!("gamma_start must be at least {MIN_PACKET_TIME}")));
            }
            if s.velocities < 2 {
                return Err(bad("need at least two velocities".into()));
            }
            if s.gamma_start <= self.run.t_end {
                let vs = self.velocities();
                for t in [s.gamma_start, self.run.t_end] {
                    for v in [vs[0], vs[vs.len() - 1]] {
                        build_packet(t, v, &grid)?;
                    }
                }
            }
        }
        if self.output.dir.trim().is_empty() {
            return Err(bad("output dir is empty".into()));
        }
        Ok(())
    }
}
