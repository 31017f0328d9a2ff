use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::geometry::{FormAtPoint, Frame};
use crate::holomorphic::{central_charge_derivative, central_charges, holomorphic_form_angles};
use crate::scalar_kernels::{BasePoint, HarmonicInvariant, ModelParams};
use crate::{Error, Result};

/// Angle between `a` and `b`, in `[0, pi]`.
pub(crate) fn angle_between(a: Complex64, b: Complex64) -> f64 {
    (a * b.conj()).arg().abs()
}

/// A point `zeta` of `C*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistorParameter {
    zeta: Complex64,
}

impl TwistorParameter {
    pub fn new(zeta: Complex64) -> Result<Self> {
        if !(zeta.norm() > 0.0 && zeta.norm().is_finite()) {
            return Err(Error::InvalidParameter(format!("twistor parameter {zeta} must be in C*")));
        }
        Ok(Self { zeta })
    }

    pub fn polar(r: f64, phi: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, phi))
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    /// Angular distance to the nearer BPS ray `Re(c / zeta) = 0`.
    pub fn bps_distance(&self, c: &BasePoint) -> f64 {
        (angle_between(self.zeta, c.c()) - FRAC_PI_2).abs()
    }

    /// Angular distance to the nearer of the rays through `c / |c|` and `-c / |c|`.
    pub fn contour_distance(&self, c: &BasePoint) -> f64 {
        let a = angle_between(self.zeta, c.c());
        a.min(PI - a)
    }

    /// `-1 / conj(zeta)`, the antipodal point.
    pub fn antipode(&self) -> Self {
        Self { zeta: -1.0 / self.zeta.conj() }
    }
}

/// Semi-flat Darboux coordinates with their logarithmic differentials in [`Frame::ANGLES`].
#[derive(Debug, Clone)]
pub struct DarbouxPair {
    pub chi_e: Complex64,
    pub chi_m: Complex64,
    pub dlog_chi_e: FormAtPoint,
    pub dlog_chi_m: FormAtPoint,
}

/// `chi_e = exp[pi R (c / zeta + zeta conj(c)) + i theta_e]`.
pub fn chi_e(c: Complex64, theta_e: f64, r: f64, zeta: Complex64) -> Complex64 {
    (PI * r * (c / zeta + zeta * c.conj()) + Complex64::new(0.0, theta_e)).exp()
}

/// Components of `d log chi_e` at `zeta` on `(dc1, dc2, dtheta_m, dtheta_e)`.
pub fn dlog_chi_e_components(r: f64, zeta: Complex64) -> [Complex64; 4] {
    let i = Complex64::i();
    let (a, b) = (1.0 / zeta, zeta);
    [PI * r * (a + b), PI * r * i * (a - b), Complex64::new(0.0, 0.0), i]
}

pub fn dlog_chi_e(r: f64, zeta: Complex64) -> FormAtPoint {
    FormAtPoint::one_form(Frame::ANGLES, dlog_chi_e_components(r, zeta))
}

/// `chi_m = exp[i pi R Z_m / zeta - i theta_m - i pi R zeta conj(Z_m)]`, `chi_e` as in [`chi_e`].
pub fn darboux_sf(
    c: &BasePoint,
    theta_m: f64,
    theta_e: f64,
    s: &HarmonicInvariant,
    params: &ModelParams,
    zeta: &TwistorParameter,
) -> Result<DarbouxPair> {
    let z = zeta.zeta();
    let r = params.r;
    let i = Complex64::i();
    let zc = central_charges(c, s, params)?;
    let chi_m = (i * PI * r * zc.z_m / z - i * theta_m - i * PI * r * z * zc.z_m.conj()).exp();
    let zp = central_charge_derivative(c, s)?;
    // d Z_m = Z' dc, d conj(Z_m) = conj(Z') dc_bar
    let a = i * PI * r * zp / z;
    let b = -i * PI * r * z * zp.conj();
    let dlog_chi_m = FormAtPoint::one_form(Frame::ANGLES, [a + b, i * (a - b), -i, 0.0.into()]);
    Ok(DarbouxPair { chi_e: chi_e(c.c(), theta_e, r, z), chi_m, dlog_chi_e: dlog_chi_e(r, z), dlog_chi_m })
}

/// `(1 / 2pi R) dlog chi_m ^ dlog chi_e`.
pub fn twistor_form_from_darboux(pair: &DarbouxPair, r: f64) -> Result<FormAtPoint> {
    Ok(pair.dlog_chi_m.wedge(&pair.dlog_chi_e)?.scale_real(1.0 / (2.0 * PI * r)))
}

/// `omega_sf = pi R Re(dZ_m ^ conj dZ_e) + (1/2pi R) dtheta_m ^ dtheta_e` in [`Frame::ANGLES`].
pub fn semiflat_kahler_angles(c: &BasePoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<FormAtPoint> {
    let r = params.r;
    let zp = central_charge_derivative(c, s)?;
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let dzm = FormAtPoint::one_form(Frame::ANGLES, [zp, i * zp, zero, zero]);
    // conj(dZ_e) = i dc_bar
    let dze_bar = FormAtPoint::one_form(Frame::ANGLES, [i, 1.0.into(), zero, zero]);
    let first = dzm.wedge(&dze_bar)?.re().scale_real(PI * r);
    let dthm = FormAtPoint::basis(Frame::ANGLES, &[2])?;
    let dthe = FormAtPoint::basis(Frame::ANGLES, &[3])?;
    first.add(&dthm.wedge(&dthe)?.scale_real(1.0 / (2.0 * PI * r)))
}

/// `-Omega / 2 zeta + omega_sf + zeta conj(Omega) / 2`.
pub fn semiflat_twistor_form(
    c: &BasePoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
    zeta: &TwistorParameter,
) -> Result<FormAtPoint> {
    c.require_regular(params.epsilon)?;
    let z = zeta.zeta();
    let big = holomorphic_form_angles(c, s)?;
    let w = semiflat_kahler_angles(c, s, params)?;
    big.scale(-0.5 / z).add(&w)?.add(&big.conj().scale(0.5 * z))
}
