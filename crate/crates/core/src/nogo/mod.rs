//! Noncontextuality assumptions as exact pointwise constraint systems, the
//! feasibility certifier, and the drivers for each no-go argument.

mod certify;
mod drivers;
pub mod exact;
mod system;

pub use certify::{
    check_witness, extreme_rays, pointwise_feasibility, verify_case, zero_patterns, CaseRow, Certificate, Conclusion,
    PremiseCheck, Verdict, MAX_DISJOINT_PAIRS, MAX_VARIABLES,
};
pub use drivers::{
    build_prep_system, build_transf_system, gleason_contradiction, gleason_named, image_variable, meas_nogo,
    od_unsharp_contradiction, prep_nogo, prep_premises, transf_nogo, trivial_povm_forced_indicator, zx_grid,
    ForcedIndicator, GleasonReport, OdUnsharpReport, TRANSF_GRID_POINTS, TRANSF_STEP_FOR_STATE,
};
pub use system::{ConstraintSystem, LinearForm};
