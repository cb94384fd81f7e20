//! Pseudospectral simulation and analysis of two-dimensional gravity water
//! waves in holomorphic coordinates.

pub mod diagnostics;
pub mod error;
pub mod normal_form;
pub mod paradiff_calculus;
pub mod runner;
pub mod spectral_core;
pub mod waterwave_dynamics;
pub mod wavepacket_testing;

pub use error::{Error, Result};
pub use spectral_core::{Field, Grid, GridSpec, HoloField, C64};
