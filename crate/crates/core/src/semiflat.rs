//! The semi-flat Kahler form
//! `omega_sf = pi R Re(dZ_m ^ conj dZ_e) + (1/2pi R) dtheta_m ^ dtheta_e`
//! in the `(c1, c2, t1, t2)` frame, its metric and the `i d dbar` potential.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::geometry::{hessian_fd, jacobian_fd, FdOptions, FormAtPoint, Frame, MetricAtPoint};
use crate::holomorphic::{central_charges, holomorphic_form};
use crate::local_model::{action_angle, angles_jacobian, lattice_data, FiberPoint, LatticeData};
use crate::scalar_kernels::{BasePoint, HarmonicInvariant, ModelParams};
use crate::{Error, Result};

/// Explicit coefficients of `omega_sf`.
///
/// `omega_sf = a dc1^dc2 - b (n dc1 - m dc2)^dt1 + b (m dc1 + n dc2)^dt2 - d dt1^dt2`
/// with `a = R lam + t1^2 (m^2 + n^2) / (R lam^3)`, `b = t1 / (R lam^2)`, `d = 1 / (R lam)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiflatCoefficients {
    pub m: f64,
    pub n: f64,
    pub lam: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl SemiflatCoefficients {
    fn from_lattice(data: &LatticeData, t1: f64, r: f64) -> Result<Self> {
        let lam = data.lambda;
        if lam == 0.0 {
            return Err(Error::DegenerateLattice(lam));
        }
        let (m, n) = (data.m, data.n);
        Ok(Self {
            m,
            n,
            lam,
            a: r * lam + t1 * t1 * (m * m + n * n) / (r * lam.powi(3)),
            b: t1 / (r * lam * lam),
            d: 1.0 / (r * lam),
        })
    }

    /// Components on `dc1^dc2, dc1^dt1, dc1^dt2, dc2^dt1, dc2^dt2, dt1^dt2`.
    pub fn components(&self) -> [f64; 6] {
        let (b, m, n) = (self.b, self.m, self.n);
        [self.a, -b * n, b * m, b * m, b * n, -self.d]
    }

    pub fn form(&self) -> FormAtPoint {
        let mut w = FormAtPoint::zero(2, Frame::CT).expect("degree 2");
        let idx: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        for (ij, v) in idx.iter().zip(self.components()) {
            w.set(ij, Complex64::new(v, 0.0));
        }
        w
    }
}

pub fn semiflat_coefficients(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<SemiflatCoefficients> {
    c.require_regular(params.epsilon)?;
    SemiflatCoefficients::from_lattice(&lattice_data(c, s)?, t.t1, params.r)
}

pub fn semiflat_form(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<FormAtPoint> {
    Ok(semiflat_coefficients(c, t, s, params)?.form())
}

/// `omega_sf` with a position-dependent scale `R(c)`.
///
/// Pointwise the formula is unchanged, but the result is no longer closed, so none of the
/// Kahler identities are claimed for it.
pub fn semiflat_form_with_scale(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    epsilon: f64,
    scale: &dyn Fn(&BasePoint) -> f64,
) -> Result<FormAtPoint> {
    let params = ModelParams::new(scale(c), epsilon)?;
    semiflat_form(c, t, s, &params)
}

/// `omega_sf` assembled from its definition, with finite-difference differentials of
/// `Z_m, Z_e, theta_m, theta_e`.
pub fn semiflat_form_from_definition(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
    opts: FdOptions,
) -> Result<FormAtPoint> {
    let chart = c.chart;
    let map = |y: &[f64; 4]| -> Result<[f64; 6]> {
        let p = BasePoint::with_chart(y[0], y[1], chart);
        let z = central_charges(&p, s, params)?;
        let a = action_angle(&p, &FiberPoint::new(y[2], y[3]), s, params)?;
        Ok([z.z_m.re, z.z_m.im, z.z_e.re, z.z_e.im, a.theta_m, a.theta_e])
    };
    let j = jacobian_fd::<6, _>(map, &[c.c1, c.c2, t.t1, t.t2], opts)?;
    let row = |k: usize| [0, 1, 2, 3].map(|b| j[(k, b)]);
    let i = Complex64::i();
    let complex_row = |re: usize, im: usize, sign: f64| {
        let (a, b) = (row(re), row(im));
        FormAtPoint::one_form(Frame::CT, [0, 1, 2, 3].map(|k| a[k] + sign * i * b[k]))
    };
    let dzm = complex_row(0, 1, 1.0);
    let dze_bar = complex_row(2, 3, -1.0);
    let dthm = FormAtPoint::real_one_form(Frame::CT, row(4));
    let dthe = FormAtPoint::real_one_form(Frame::CT, row(5));
    let r = params.r;
    let first = dzm.wedge(&dze_bar)?.re().scale_real(PI * r);
    first.add(&dthm.wedge(&dthe)?.scale_real(1.0 / (2.0 * PI * r)))
}

/// Complex structure used to turn `omega_sf` into a metric:
/// `d/dc1 -> d/dc2 -> -d/dc1`, `d/dt1 -> -d/dt2`, `d/dt2 -> d/dt1`.
pub fn semiflat_complex_structure() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(1, 0)] = 1.0;
    j[(0, 1)] = -1.0;
    j[(3, 2)] = -1.0;
    j[(2, 3)] = 1.0;
    j
}

/// `g(X, Y) = omega_sf(X, J Y)`.
pub fn semiflat_metric_matrix(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<MetricAtPoint> {
    let w = semiflat_form(c, t, s, params)?.to_real_matrix();
    MetricAtPoint::new(Frame::CT, w * semiflat_complex_structure(), 1e-10)
}

/// The three 4-form residuals of `omega^omega = Omega^conj(Omega) / 2` and `omega^Omega = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma52Residuals {
    pub square: f64,
    pub with_omega: f64,
    pub with_omega_bar: f64,
}

impl Lemma52Residuals {
    pub fn max(&self) -> f64 {
        self.square.max(self.with_omega).max(self.with_omega_bar)
    }
}

pub fn lemma52_residuals(omega_sf: &FormAtPoint) -> Result<Lemma52Residuals> {
    let big = holomorphic_form();
    let half = big.wedge(&big.conj())?.scale_real(0.5);
    Ok(Lemma52Residuals {
        square: omega_sf.wedge(omega_sf)?.max_diff(&half)?,
        with_omega: omega_sf.wedge(&big)?.max_abs(),
        with_omega_bar: omega_sf.wedge(&big.conj())?.max_abs(),
    })
}

pub fn verify_lemma52(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<Lemma52Residuals> {
    lemma52_residuals(&semiflat_form(c, t, s, params)?)
}

/// `phi = t1^2 / (R lambda)`.
pub fn decomposition_potential(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<f64> {
    c.require_regular(params.epsilon)?;
    let d = lattice_data(c, s)?;
    if d.lambda == 0.0 {
        return Err(Error::DegenerateLattice(0.0));
    }
    Ok(t.t1 * t.t1 / (params.r * d.lambda))
}

/// `(1/2pi R) dtheta_m ^ dtheta_e` in the `(c, t)` frame, from the analytic angle Jacobian.
pub fn angular_part(c: &BasePoint, t: &FiberPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<FormAtPoint> {
    let j = angles_jacobian(c, t, s)?;
    let row = |k: usize| FormAtPoint::real_one_form(Frame::CT, [0, 1, 2, 3].map(|b| j[(k, b)]));
    Ok(row(2).wedge(&row(3))?.scale_real(1.0 / (2.0 * PI * params.r)))
}

/// `i d dbar phi` by a finite-difference Hessian, in the complex coordinates
/// `u1 = c1 + i c2`, `u2 = t1 - i t2`.
pub fn i_ddbar_potential(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
    h: f64,
) -> Result<FormAtPoint> {
    let chart = c.chart;
    let phi = |y: &[f64; 4]| {
        decomposition_potential(&BasePoint::with_chart(y[0], y[1], chart), &FiberPoint::new(y[2], y[3]), s, params)
    };
    let hess = hessian_fd(phi, &[c.c1, c.c2, t.t1, t.t2], h)?;
    // u_j = x_a + i sigma x_b
    let coords: [(usize, usize, f64); 2] = [(0, 1, 1.0), (2, 3, -1.0)];
    let i = Complex64::i();
    let mut out = FormAtPoint::zero(2, Frame::CT)?;
    for &(a, b, sa) in &coords {
        let mut du = [Complex64::new(0.0, 0.0); 4];
        du[a] = 1.0.into();
        du[b] = i * sa;
        let du = FormAtPoint::one_form(Frame::CT, du);
        for &(a2, b2, sb) in &coords {
            let mut dub = [Complex64::new(0.0, 0.0); 4];
            dub[a2] = 1.0.into();
            dub[b2] = -i * sb;
            let dub = FormAtPoint::one_form(Frame::CT, dub);
            let mixed =
                0.25 * (hess[(a, a2)] + i * sb * hess[(a, b2)] - i * sa * hess[(b, a2)] + sa * sb * hess[(b, b2)]);
            out = out.add(&du.wedge(&dub)?.scale(i * mixed))?;
        }
    }
    Ok(out)
}

/// Largest coefficient difference between `i d dbar phi` and `(1/2pi R) dtheta_m ^ dtheta_e`.
pub fn verify_decomposition(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
    h: f64,
) -> Result<f64> {
    i_ddbar_potential(c, t, s, params, h)?.max_diff(&angular_part(c, t, s, params)?)
}

/// Compare `omega_sf` at `(c, t)` with its pullback from `(c, t + gen1(c))`.
///
/// The translation `t -> t + (lambda(c), mu(c))` has Jacobian rows
/// `dt1' = dt1 + m dc1 + n dc2`, `dt2' = dt2 + n dc1 - m dc2`.
pub fn gluing_invariance_residual(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<f64> {
    let d = lattice_data(c, s)?;
    let shifted = FiberPoint::new(t.t1 + d.lambda, t.t2 + d.mu);
    let mut jac = Matrix4::identity();
    jac[(2, 0)] = d.m;
    jac[(2, 1)] = d.n;
    jac[(3, 0)] = d.n;
    jac[(3, 1)] = -d.m;
    let moved = semiflat_form(c, &shifted, s, params)?.pullback(&jac, Frame::CT);
    moved.max_diff(&semiflat_form(c, t, s, params)?)
}
