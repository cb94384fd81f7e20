//! The holomorphic water-wave system, its differentiated and linearized forms,
//! the Hamiltonian, and time stepping.

pub mod data;
mod energy;
mod linearize;
mod rhs;
mod state;
mod stepper;

pub use data::PacketData;
pub use energy::{hamiltonian, hamiltonian_complex, quadratic_energy};
pub use linearize::{frechet, linearize, linearize_with, FdOrder, LinState, FRECHET_STEP};
pub use rhs::{rhs_diff, rhs_full, rhs_linear, rhs_nonlinear, DiffRate, PairRate};
pub use state::{compute_aux, Aux, WaveState, MIN_JACOBIAN};
pub use stepper::{
    evolve, evolve_with, propagate_linear, step, Dynamics, Scheme, StepperConfig, STABILITY_BOUND,
};
