//! Wave packets along rays alpha = v t, the asymptotic profile gamma(t, v)
//! and the packet-level error terms.
//!
//! Velocities are taken positive. The packet frequency is xi_v = -1/(4 v^2)
//! and the bump chi is exp(1 - 1/(1 - y^2)) normalized to unit integral.

mod analysis;
mod gamma;
mod packet;
mod structure;

pub use analysis::{
    eval_at, hatq_mismatch, hatq_reference, packet_ansatz, packet_reconstruction_error,
    theta_functional, ReconstructionError, ThetaProfile,
};
pub use gamma::{
    asymptotic_residual, cubic_term, gamma, gamma_pair, gamma_rate, gamma_rewrite, h0_pairing,
    velocity_grid, AsymptoticResidual, GammaProfile, GAMMA_CSV_HEADER, VELOCITY_POINTS,
};
pub use packet::{
    build_packet, chi, chi_derivs, omega0, xi_v, PacketFrame, MIN_PACKET_TIME, SUPPORT_MARGIN,
};

pub use structure::{null_expressions, structure_report, StructureReport, NULL_EXPRESSIONS};

use crate::spectral_core::Field;

/// The packet defect g = d_t w + d_alpha q = v (d_alpha - i d_t^2) u, split
/// into the leading d_alpha[...] part and the remainder.
#[derive(Clone, Debug)]
pub struct PacketDefect {
    pub g: Field,
    pub leading: Field,
    pub subleading: Field,
}

impl PacketDefect {
    /// |subleading| / |leading| in L^2.
    pub fn subleading_ratio(&self) -> f64 {
        self.subleading.norm_l2() / self.leading.norm_l2()
    }
}

pub fn packet_defect(frame: &PacketFrame) -> PacketDefect {
    let (lead, sub) = frame.defect_parts();
    let leading = lead.scale(frame.v);
    let subleading = sub.scale(frame.v);
    PacketDefect { g: &leading + &subleading, leading, subleading }
}
