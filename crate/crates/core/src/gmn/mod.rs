//! The instanton-corrected twistor family of the Ooguri-Vafa space.
//!
//! Darboux coordinates `chi_e`, `chi_m` on the fibres, the Cauchy integral along rays,
//! the correction of `chi_m` by the electric instanton sum, the Bessel identities that
//! connect it to the Gibbons-Hawking data, and the metric read off the family.

mod contour;
mod correction;
mod extract;
mod forms;
mod identities;
mod twistor;

pub use contour::{cps_solve, CpsValue, RayContour, NEAR_CONTOUR_ANGLE};
pub use correction::{
    gmn_correction, gmn_correction_differential, gmn_correction_on, GmnContours, GmnCorrection, GmnOptions,
    JUMP_EXPONENT,
};
pub use extract::{
    angles_from_ov_jacobian, extract_metric, gibbons_hawking_reference, laurent_fit, twistor_samples, ExtractedMetric,
    LaurentFit, LAURENT_FIT_TOL,
};
pub use forms::{corrected_twistor_form, corrected_twistor_form_gmn, twistor_identity_residual, TwistorForm};
pub use identities::{contour_bessel_identities, BesselIdentityReport, IDENTITY_NAMES};
pub use twistor::{
    chi_e, darboux_sf, dlog_chi_e, dlog_chi_e_components, semiflat_kahler_angles, semiflat_twistor_form,
    twistor_form_from_darboux, DarbouxPair, TwistorParameter,
};
