use std::f64::consts::PI;

use num_complex::Complex64;

use super::correction::{gmn_correction_differential, GmnContours, GmnOptions};
use super::twistor::{darboux_sf, dlog_chi_e, TwistorParameter};
use crate::geometry::{FormAtPoint, Frame};
use crate::ooguri_vafa::{matched_invariant, ov_connection, potential_lattice, OVPoint};
use crate::scalar_kernels::{BasePoint, HarmonicInvariant, ModelParams, Truncation};
use crate::{Error, Result};

/// A corrected twistor 2-form with its quadrature cost.
#[derive(Debug, Clone)]
pub struct TwistorForm {
    pub form: FormAtPoint,
    pub evaluations: usize,
}

fn check_zeta(c: &BasePoint, params: &ModelParams, zeta: &TwistorParameter, opts: &GmnOptions) -> Result<()> {
    let contours = GmnContours::standard(c, params)?;
    let z = zeta.zeta();
    let d = contours.plus.angular_distance(z).min(contours.minus.angular_distance(z));
    if d < opts.angular_margin {
        return Err(Error::ContourTooClose(d));
    }
    Ok(())
}

/// `(1/2pi R) xi_m ^ xi_e` with
/// `xi_m = -i dtheta_m + 2pi i A + pi i V (dc/zeta - zeta dc_bar)` and `xi_e = dlog chi_e`.
///
/// `V` and `A` are the Ooguri-Vafa data of the invariant matched to `s`, whose fibre
/// coordinate is `-theta_m`.
pub fn corrected_twistor_form(
    c: &BasePoint,
    theta_m: f64,
    theta_e: f64,
    s: &HarmonicInvariant,
    params: &ModelParams,
    zeta: &TwistorParameter,
    opts: &GmnOptions,
) -> Result<FormAtPoint> {
    c.require_regular(params.epsilon)?;
    check_zeta(c, params, zeta, opts)?;
    let z = zeta.zeta();
    let r = params.r;
    let s_ov = matched_invariant(s, r);
    let p = OVPoint { c1: c.c1, c2: c.c2, theta_e, theta_m: -theta_m, chart: c.chart };
    let v = potential_lattice(&p, &s_ov, params)?;
    let a = ov_connection(&p, &s_ov, params, &Truncation::default())?.real_components();
    let i = Complex64::i();
    let pv = i * PI * v;
    let (dc, dcb) = (1.0 / z, -z);
    let xi_m =
        [2.0 * PI * i * a[0] + pv * (dc + dcb), 2.0 * PI * i * a[1] + pv * i * (dc - dcb), -i, 2.0 * PI * i * a[2]];
    let xi_m = FormAtPoint::one_form(Frame::ANGLES, xi_m);
    Ok(xi_m.wedge(&dlog_chi_e(r, z))?.scale_real(1.0 / (2.0 * PI * r)))
}

/// `(1/2pi R) dlog chi_m ^ dlog chi_e` with `chi_m` the semi-flat coordinate times the
/// correction factor, differentiated under the integral sign.
pub fn corrected_twistor_form_gmn(
    c: &BasePoint,
    theta_m: f64,
    theta_e: f64,
    s: &HarmonicInvariant,
    params: &ModelParams,
    zeta: &TwistorParameter,
    opts: &GmnOptions,
) -> Result<TwistorForm> {
    c.require_regular(params.epsilon)?;
    let pair = darboux_sf(c, theta_m, theta_e, s, params, zeta)?;
    let (dcorr, evaluations) = gmn_correction_differential(c, theta_e, params, zeta, opts)?;
    let dlog_m = pair.dlog_chi_m.add(&dcorr)?;
    let form = dlog_m.wedge(&pair.dlog_chi_e)?.scale_real(1.0 / (2.0 * PI * params.r));
    Ok(TwistorForm { form, evaluations })
}

/// Coefficientwise gap between the two routes.
pub fn twistor_identity_residual(
    c: &BasePoint,
    theta_m: f64,
    theta_e: f64,
    s: &HarmonicInvariant,
    params: &ModelParams,
    zeta: &TwistorParameter,
    opts: &GmnOptions,
) -> Result<f64> {
    let a = corrected_twistor_form(c, theta_m, theta_e, s, params, zeta, opts)?;
    let b = corrected_twistor_form_gmn(c, theta_m, theta_e, s, params, zeta, opts)?;
    a.max_diff(&b.form)
}
