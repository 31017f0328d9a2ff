//! Central charges and the holomorphic 2-form `Omega = dz1 ^ dz2` (the `h = 0` case).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::geometry::{exterior_derivative_fd, laplacian_2d, partial, FdOptions, FormAtPoint, Frame};
use crate::local_model::{action_coordinates, lattice_data};
use crate::scalar_kernels::{BasePoint, HarmonicInvariant, ModelParams};
use crate::{Error, Result};

/// `Z_m = (c - c ln c + f(c)) / 2pi`, `Z_e = -i c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralCharge {
    pub z_m: Complex64,
    pub z_e: Complex64,
}

pub fn central_charges(c: &BasePoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<CentralCharge> {
    c.require_regular(params.epsilon)?;
    let cc = c.c();
    let f = s.holomorphic(cc)?[0];
    Ok(CentralCharge { z_m: (cc - cc * c.ln() + f) / (2.0 * PI), z_e: Complex64::new(0.0, -1.0) * cc })
}

/// `dZ_m / dc = (f'(c) - ln c) / 2pi = (lambda - i mu) / 2pi`.
pub fn central_charge_derivative(c: &BasePoint, s: &HarmonicInvariant) -> Result<Complex64> {
    let d = lattice_data(c, s)?;
    Ok(Complex64::new(d.lambda, -d.mu) / (2.0 * PI))
}

/// `Omega = (dc1 + i dc2) ^ (dt1 - i dt2)` in the `(c, t)` frame.
pub fn holomorphic_form() -> FormAtPoint {
    let i = Complex64::i();
    let dc = FormAtPoint::one_form(Frame::CT, [1.0.into(), i, 0.0.into(), 0.0.into()]);
    let dt = FormAtPoint::one_form(Frame::CT, [0.0.into(), 0.0.into(), 1.0.into(), -i]);
    dc.wedge(&dt).expect("same frame")
}

/// `Omega = dZ_m ^ dtheta_e + dZ_e ^ dtheta_m` in the `(c, theta_m, theta_e)` frame.
pub fn holomorphic_form_angles(c: &BasePoint, s: &HarmonicInvariant) -> Result<FormAtPoint> {
    let zp = central_charge_derivative(c, s)?;
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let dzm = FormAtPoint::one_form(Frame::ANGLES, [zp, i * zp, zero, zero]);
    let dze = FormAtPoint::one_form(Frame::ANGLES, [-i, 1.0.into(), zero, zero]);
    let dthm = FormAtPoint::basis(Frame::ANGLES, &[2])?;
    let dthe = FormAtPoint::basis(Frame::ANGLES, &[3])?;
    dzm.wedge(&dthe)?.add(&dze.wedge(&dthm)?)
}

/// Coefficient of `Omega ^ conj(Omega)` on `dc1 ^ dc2 ^ dtheta_m ^ dtheta_e`; equals `(2/pi) lambda`.
pub fn volume_density_angles(c: &BasePoint, s: &HarmonicInvariant) -> Result<f64> {
    let om = holomorphic_form_angles(c, s)?;
    Ok(om.wedge(&om.conj())?.volume_coefficient().re)
}

/// Residuals of the compatibility conditions over a set of base points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    pub points: usize,
    /// Largest coefficient of `d Omega` (angle frame, finite differences).
    pub d_omega: f64,
    /// Largest `|Omega ^ Omega|`.
    pub omega_wedge_omega: f64,
    /// Largest `|dZ / d conj(c)|` for both central charges.
    pub holomorphy: f64,
    /// `min (S1 - ln|c|)`; positive iff `Omega ^ conj(Omega)` is positive everywhere.
    pub positivity_margin: f64,
    pub laplacian_z_m: f64,
    pub laplacian_z_e: f64,
}

impl CompatibilityReport {
    pub fn max_residual(&self) -> f64 {
        [self.d_omega, self.omega_wedge_omega, self.holomorphy, self.laplacian_z_m, self.laplacian_z_e]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn verify_compatibility(
    s: &HarmonicInvariant,
    params: &ModelParams,
    grid: &[BasePoint],
) -> Result<CompatibilityReport> {
    let mut rep = CompatibilityReport {
        points: grid.len(),
        d_omega: 0.0,
        omega_wedge_omega: 0.0,
        holomorphy: 0.0,
        positivity_margin: f64::INFINITY,
        laplacian_z_m: 0.0,
        laplacian_z_e: 0.0,
    };
    let fd = FdOptions::richardson(1e-3);
    for c in grid {
        if c.modulus() == 0.0 {
            return Err(Error::Domain("compatibility grid contains c = 0".into()));
        }
        let chart = c.chart;
        let at = |c1: f64, c2: f64| BasePoint::with_chart(c1, c2, chart);

        let field = |y: &[f64; 4]| holomorphic_form_angles(&at(y[0], y[1]), s);
        let d = exterior_derivative_fd(field, &[c.c1, c.c2, 0.0, 0.0], fd)?;
        rep.d_omega = rep.d_omega.max(d.max_abs());

        let om = holomorphic_form_angles(c, s)?;
        rep.omega_wedge_omega = rep.omega_wedge_omega.max(om.wedge(&om)?.max_abs());

        let d = lattice_data(c, s)?;
        rep.positivity_margin = rep.positivity_margin.min(d.lambda);

        let charges = |y: &[f64; 4]| -> Result<Vec<Complex64>> {
            let z = central_charges(&at(y[0], y[1]), s, params)?;
            Ok(vec![z.z_m, z.z_e])
        };
        let x = [c.c1, c.c2, 0.0, 0.0];
        let dx = partial(&charges, &x, 0, fd)?;
        let dy = partial(&charges, &x, 1, fd)?;
        for k in 0..2 {
            rep.holomorphy = rep.holomorphy.max((0.5 * (dx[k] + Complex64::i() * dy[k])).norm());
        }

        let zm = |c1: f64, c2: f64| action_coordinates(&at(c1, c2), s).map(|z| z.0);
        let ze = |c1: f64, c2: f64| action_coordinates(&at(c1, c2), s).map(|z| z.1);
        rep.laplacian_z_m = rep.laplacian_z_m.max(laplacian_2d(zm, c.c1, c.c2, fd)?.abs());
        rep.laplacian_z_e = rep.laplacian_z_e.max(laplacian_2d(ze, c.c1, c.c2, fd)?.abs());
    }
    Ok(rep)
}
