use std::f64::consts::PI;

use num_complex::Complex64;

use super::twistor::angle_between;
use crate::quadrature::{gauss_kronrod, trapezoid};
use crate::{Error, Result};

/// Below this angle from the ray the Cauchy kernel is treated by singularity subtraction.
pub const NEAR_CONTOUR_ANGLE: f64 = 0.2;

/// Closer than this the evaluation point counts as on the contour.
const ON_CONTOUR_ANGLE: f64 = 1e-12;

/// The ray `{ d e^s : s_min <= s <= s_max }` with `|d| = 1`, oriented outward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayContour {
    pub direction: Complex64,
    pub s_min: f64,
    pub s_max: f64,
}

impl RayContour {
    pub fn new(direction: Complex64, s_min: f64, s_max: f64) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter("ray direction must be nonzero".into()));
        }
        if !(s_max > s_min) {
            return Err(Error::InvalidParameter(format!("empty ray range [{s_min}, {s_max}]")));
        }
        Ok(Self { direction: direction / n, s_min, s_max })
    }

    pub fn point(&self, s: f64) -> Complex64 {
        self.direction * s.exp()
    }

    /// Angle between `z` and the ray.
    pub fn angular_distance(&self, z: Complex64) -> f64 {
        angle_between(z, self.direction)
    }

    /// Whether `z` is close enough to need the subtraction treatment.
    pub fn is_near(&self, z: Complex64) -> bool {
        let s0 = z.norm().ln();
        self.angular_distance(z) < NEAR_CONTOUR_ANGLE && s0 > self.s_min - 1.0 && s0 < self.s_max + 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpsValue {
    pub value: Complex64,
    pub near_contour: bool,
    pub error_bound: f64,
    pub evaluations: usize,
}

/// `int_ray g(t) / (t - z) dt` for a vector of analytic densities.
///
/// Away from the ray this is a plain trapezoid rule in `s`. Near it the part on
/// `s in [s0 - 1, s0 + 1]`, `s0 = ln|z|`, is rewritten as
/// `int (g(t) - g(z)) / (t - z) dt + g(z) ln((b - z) / (a - z))`, which needs `g` at `z`
/// itself; `g` must therefore be analytic in a neighbourhood of the ray.
pub(crate) fn cauchy_integral<const N: usize, G>(
    contour: &RayContour,
    g: G,
    z: Complex64,
    tol: f64,
) -> Result<(crate::quadrature::Quadrature<N>, bool)>
where
    G: Fn(Complex64) -> [Complex64; N],
{
    if contour.angular_distance(z) < ON_CONTOUR_ANGLE {
        return Err(Error::ContourTooClose(contour.angular_distance(z)));
    }
    let kernel = |s: f64| {
        let t = contour.point(s);
        let w = t / (t - z);
        g(t).map(|v| v * w)
    };
    let (a, b) = (contour.s_min, contour.s_max);
    if !contour.is_near(z) {
        return Ok((trapezoid(kernel, a, b, tol)?, false));
    }
    let s0 = z.norm().ln();
    let (lo, hi) = ((s0 - 1.0).max(a), (s0 + 1.0).min(b));
    let gz = g(z);
    let subtracted = |s: f64| {
        let t = contour.point(s);
        let gt = g(t);
        let w = t / (t - z);
        let mut out = [Complex64::new(0.0, 0.0); N];
        for k in 0..N {
            out[k] = (gt[k] - gz[k]) * w;
        }
        out
    };
    let mut total = [Complex64::new(0.0, 0.0); N];
    let mut error = 0.0;
    let mut evaluations = 1;
    if hi > lo {
        let breaks = if s0 > lo && s0 < hi { vec![lo, s0, hi] } else { vec![lo, hi] };
        let q = gauss_kronrod(subtracted, &breaks, tol)?;
        let log = ((contour.point(hi) - z) / (contour.point(lo) - z)).ln();
        for k in 0..N {
            total[k] += q.value[k] + gz[k] * log;
        }
        error += q.error;
        evaluations += q.evaluations;
    }
    for (x, y) in [(a, lo), (hi, b)] {
        if y - x > 1e-12 {
            let q = gauss_kronrod(kernel, &[x, y], tol)?;
            for (t, v) in total.iter_mut().zip(q.value.iter()) {
                *t += *v;
            }
            error += q.error;
            evaluations += q.evaluations;
        }
    }
    Ok((crate::quadrature::Quadrature { value: total, error, evaluations }, true))
}

/// `f(z) = (1 / 2pi i) int_ray phi(t) / (t - z) dt`.
///
/// Near the ray the result carries `near_contour = true` and an error bound inflated by
/// `NEAR_CONTOUR_ANGLE / angle`.
pub fn cps_solve(
    contour: &RayContour,
    jump: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    tol: f64,
) -> Result<CpsValue> {
    let (q, near) = cauchy_integral(contour, |t| [jump(t)], z, tol)?;
    let scale = 1.0 / (2.0 * PI);
    let inflation = if near { (NEAR_CONTOUR_ANGLE / contour.angular_distance(z)).max(1.0) } else { 1.0 };
    Ok(CpsValue {
        value: q.value[0] / Complex64::new(0.0, 2.0 * PI),
        near_contour: near,
        error_bound: q.error * scale * inflation,
        evaluations: q.evaluations,
    })
}
