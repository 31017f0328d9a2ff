use std::f64::consts::PI;

use num_complex::Complex64;

use super::correction::GmnContours;
use super::twistor::chi_e;
use crate::quadrature::trapezoid;
use crate::scalar_kernels::{bessel_k0_k1, BasePoint, ModelParams, Truncation};
use crate::{Error, Result};

/// The six contour integrals, in the order
/// `l+: 1, z', 1/z'` then `l-: 1, z', 1/z'`, each against `(dz'/z') w` with
/// `w = chi_e / (1 - chi_e)` on `l+` and `w = chi_e^{-1} / (1 - chi_e^{-1})` on `l-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselIdentityReport {
    pub quadrature: [Complex64; 6],
    pub series: [Complex64; 6],
    pub residual: f64,
    pub evaluations: usize,
}

pub const IDENTITY_NAMES: [&str; 6] = ["l+ K0", "l+ zeta K1", "l+ zeta^-1 K1", "l- K0", "l- zeta K1", "l- zeta^-1 K1"];

/// `sum_{n>=1} 2 e^{i n theta} (K0, K1)(n x)`.
fn bessel_sums(x: f64, theta: f64, trunc: &Truncation) -> Result<(Complex64, Complex64)> {
    let (mut s0, mut s1) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for n in 1..=trunc.max_terms {
        let (k0, k1) = bessel_k0_k1(n as f64 * x)?;
        let e = Complex64::from_polar(2.0, n as f64 * theta);
        s0 += e * k0;
        s1 += e * k1;
        if n >= Truncation::MIN_TERMS && k1 < trunc.series_tol {
            return Ok((s0, s1));
        }
    }
    Err(Error::SeriesNonConvergence(trunc.max_terms))
}

/// Quadrature of the six integrals with the geometric series left unexpanded, against
/// their Bessel series.
pub fn contour_bessel_identities(
    c: &BasePoint,
    theta_e: f64,
    params: &ModelParams,
    tol: f64,
) -> Result<BesselIdentityReport> {
    let contours = GmnContours::standard(c, params)?;
    let (cc, r) = (c.c(), params.r);
    let w = |x: Complex64| x / (1.0 - x);
    let on = |contour: &super::RayContour, sign: f64| {
        let f = |s: f64| {
            let t = contour.point(s);
            let v = w(chi_e(sign * cc, sign * theta_e, r, t));
            [v, t * v, v / t]
        };
        trapezoid(f, contour.s_min, contour.s_max, tol)
    };
    let qp = on(&contours.plus, 1.0)?;
    let qm = on(&contours.minus, -1.0)?;

    let x = 2.0 * PI * r * c.modulus();
    let trunc = Truncation::default();
    let (p0, p1) = bessel_sums(x, theta_e, &trunc)?;
    let (m0, m1) = bessel_sums(x, -theta_e, &trunc)?;
    let u = cc / c.modulus();
    let series = [p0, -u * p1, -u.conj() * p1, m0, u * m1, u.conj() * m1];
    let quadrature = [qp.value[0], qp.value[1], qp.value[2], qm.value[0], qm.value[1], qm.value[2]];
    let residual = quadrature.iter().zip(&series).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(BesselIdentityReport { quadrature, series, residual, evaluations: qp.evaluations + qm.evaluations })
}
