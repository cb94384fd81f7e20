//! Run configuration, simulation driver, persistence, and the verification suites.

mod config;
mod fit;
mod simulate;
mod suites;

pub use config::{
    DataSection, GridSection, OutputSection, RunConfig, RunSection, SamplingSection, StepperSection,
    SIGMA_MIN,
};
pub use fit::{cmd_fit, FitReport};
pub use simulate::{
    checkpoint_name, cmd_resume, cmd_simulate, config_hash, norm_record, output_root, read_checkpoint,
    read_gamma, read_norms, run_dir, simulate, write_checkpoint, write_gamma, write_norms, Manifest,
    RunOutput, CHECKPOINT_DIR, CONFIG_FILE, FAILURE_DUMP, GAMMA_FILE, MANIFEST_FILE, NORMS_FILE,
    OUTPUT_ROOT_ENV,
};
pub use suites::{
    cmd_verify, decay_slope, hyp_concentration, ladder_sizes, residual_slopes, run_suite,
    structure_profile, Bound, Check, Report, VerifyOptions, DEFAULT_SEED, SUITES,
};
