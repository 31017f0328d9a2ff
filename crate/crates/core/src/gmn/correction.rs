use std::f64::consts::PI;

use num_complex::Complex64;

use super::contour::{cauchy_integral, RayContour};
use super::twistor::{chi_e, dlog_chi_e_components, TwistorParameter};
use crate::geometry::{FormAtPoint, Frame};
use crate::quadrature::trapezoid;
use crate::scalar_kernels::{BasePoint, ModelParams};
use crate::{Error, Result};

/// Exponent `s` in `factor(zeta e^{+i delta}) / factor(zeta e^{-i delta}) -> (1 - chi_e(zeta))^s`
/// across `l+`. Fixed against [`super::cps_solve`]; see the jump regression test.
pub const JUMP_EXPONENT: f64 = -1.0;

/// Integrands are dropped once `exp(-x cosh s) < exp(-DECAY_CUTOFF - |s|)`.
const DECAY_CUTOFF: f64 = 45.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmnOptions {
    /// Smallest admissible angle between `zeta` and either contour.
    pub angular_margin: f64,
    pub target_tol: f64,
}

impl Default for GmnOptions {
    fn default() -> Self {
        Self { angular_margin: 0.2, target_tol: 1e-10 }
    }
}

/// Half-width of the `s`-range on which `exp(-x cosh s)` still matters.
pub(crate) fn decay_range(x: f64) -> f64 {
    let mut s: f64 = 1.0;
    for _ in 0..60 {
        let next = ((DECAY_CUTOFF + s) / x).max(1.0).acosh();
        if (next - s).abs() < 1e-9 {
            break;
        }
        s = next;
    }
    s.max(1.0)
}

/// The two contours `l+` (decay of `chi_e`) and `l-` (decay of `1 / chi_e`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmnContours {
    pub plus: RayContour,
    pub minus: RayContour,
}

impl GmnContours {
    /// `l+` through `-c / |c|` and `l-` through `c / |c|`.
    pub fn standard(c: &BasePoint, params: &ModelParams) -> Result<Self> {
        let u = unit(c)?;
        Self::with_directions(c, params, -u, u)
    }

    /// Rays through arbitrary directions; each must keep its integrand decaying.
    pub fn with_directions(c: &BasePoint, params: &ModelParams, plus: Complex64, minus: Complex64) -> Result<Self> {
        let u = unit(c)?;
        let x = 2.0 * PI * params.r * c.modulus();
        // |chi_e(d e^s)| = exp(x cos(arg d - arg c) cosh s)
        let rate = |d: Complex64| (d / d.norm() * u.conj()).re;
        let (rp, rm) = (rate(plus), rate(minus));
        if !(rp < 0.0) {
            return Err(Error::DivergentContour);
        }
        if !(rm > 0.0) {
            return Err(Error::DivergentContour);
        }
        let sp = decay_range(x * -rp);
        let sm = decay_range(x * rm);
        Ok(Self { plus: RayContour::new(plus, -sp, sp)?, minus: RayContour::new(minus, -sm, sm)? })
    }

    fn check(&self, zeta: Complex64, margin: f64) -> Result<()> {
        let d = self.plus.angular_distance(zeta).min(self.minus.angular_distance(zeta));
        if d < margin {
            return Err(Error::ContourTooClose(d));
        }
        Ok(())
    }
}

fn unit(c: &BasePoint) -> Result<Complex64> {
    let r = c.modulus();
    if r == 0.0 {
        return Err(Error::Singular("the correction needs c != 0".into()));
    }
    Ok(c.c() / r)
}

/// `int ds K(zeta', zeta) g(zeta')` along a ray with `K = (zeta' + zeta) / (zeta' - zeta)`.
///
/// Uses `K = 2 zeta' / (zeta' - zeta) - 1`, so the singular part is a Cauchy integral.
fn kernel_integral<const N: usize, G>(
    contour: &RayContour,
    g: G,
    zeta: Complex64,
    tol: f64,
) -> Result<([Complex64; N], usize)>
where
    G: Fn(Complex64) -> [Complex64; N],
{
    let (cauchy, _) = cauchy_integral(contour, &g, zeta, 0.25 * tol)?;
    let plain = trapezoid(|s| g(contour.point(s)), contour.s_min, contour.s_max, 0.25 * tol)?;
    let out = std::array::from_fn(|k| 2.0 * cauchy.value[k] - plain.value[k]);
    Ok((out, cauchy.evaluations + plain.evaluations))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmnCorrection {
    /// Multiplicative correction of `chi_m`.
    pub factor: Complex64,
    pub log: Complex64,
    pub evaluations: usize,
}

/// `exp[(i/4pi) int_{l+} (dz'/z') K ln(1 - chi_e) - (i/4pi) int_{l-} (dz'/z') K ln(1 - 1/chi_e)]`.
pub fn gmn_correction(
    c: &BasePoint,
    theta_e: f64,
    params: &ModelParams,
    zeta: &TwistorParameter,
    opts: &GmnOptions,
) -> Result<GmnCorrection> {
    let contours = GmnContours::standard(c, params)?;
    gmn_correction_on(&contours, c, theta_e, params, zeta, opts)
}

pub fn gmn_correction_on(
    contours: &GmnContours,
    c: &BasePoint,
    theta_e: f64,
    params: &ModelParams,
    zeta: &TwistorParameter,
    opts: &GmnOptions,
) -> Result<GmnCorrection> {
    let z = zeta.zeta();
    contours.check(z, opts.angular_margin)?;
    let (cc, r) = (c.c(), params.r);
    let plus = |t: Complex64| [(1.0 - chi_e(cc, theta_e, r, t)).ln()];
    let minus = |t: Complex64| [(1.0 - chi_e(-cc, -theta_e, r, t)).ln()];
    let (ip, ep) = kernel_integral(&contours.plus, plus, z, opts.target_tol)?;
    let (im, em) = kernel_integral(&contours.minus, minus, z, opts.target_tol)?;
    let log = Complex64::new(0.0, 1.0 / (4.0 * PI)) * (ip[0] - im[0]);
    Ok(GmnCorrection { factor: log.exp(), log, evaluations: ep + em })
}

/// `d log(correction)` in [`Frame::ANGLES`], differentiating under the integral:
/// `-(i/4pi) [int_{l+} K w(chi_e) dlog chi_e(z') + int_{l-} K w(1/chi_e) dlog chi_e(z')]`
/// with `w(x) = x / (1 - x)`.
pub fn gmn_correction_differential(
    c: &BasePoint,
    theta_e: f64,
    params: &ModelParams,
    zeta: &TwistorParameter,
    opts: &GmnOptions,
) -> Result<(FormAtPoint, usize)> {
    let contours = GmnContours::standard(c, params)?;
    let z = zeta.zeta();
    contours.check(z, opts.angular_margin)?;
    let (cc, r) = (c.c(), params.r);
    let w = |x: Complex64| x / (1.0 - x);
    let plus = |t: Complex64| {
        let k = w(chi_e(cc, theta_e, r, t));
        dlog_chi_e_components(r, t).map(|v| v * k)
    };
    let minus = |t: Complex64| {
        let k = w(chi_e(-cc, -theta_e, r, t));
        dlog_chi_e_components(r, t).map(|v| v * k)
    };
    let (ip, ep) = kernel_integral(&contours.plus, plus, z, opts.target_tol)?;
    let (im, em) = kernel_integral(&contours.minus, minus, z, opts.target_tol)?;
    let pre = Complex64::new(0.0, -1.0 / (4.0 * PI));
    let comps = [0, 1, 2, 3].map(|k| pre * (ip[k] + im[k]));
    Ok((FormAtPoint::one_form(Frame::ANGLES, comps), ep + em))
}
