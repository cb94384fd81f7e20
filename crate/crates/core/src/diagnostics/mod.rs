//! Control norms, the weighted energy, the elliptic/hyperbolic phase-space
//! split, the X-sharp norm and power-law fits of norm time series.
//!
//! BMO norms are evaluated as sup norms throughout.

mod fit;
mod localize;
mod record;

pub use fit::{decay_fit, fit_power_law, DecayFit, MIN_FIT_SAMPLES};
pub use localize::{
    ell_hyp_split, flat_top, hyp_velocity_masked, spatial_cover, xsharp_exponents, xsharp_norm,
    EllHypSplit, HypBlock, Localizer, Pair, Region, SpatialCover, XsharpParts, COVER_PER_OCTAVE,
};
pub use record::{control_norms, weighted_energy, x_norm, x_zero_norm, NormRecord, NORM_IDS};
