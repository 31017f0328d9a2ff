//! The generalized Ooguri-Vafa space: a Gibbons-Hawking metric over `R^2 x S^1`
//! with potential
//!
//! `V = (R/4pi) [ sum_n ((R|c|)^2 + (theta_e/2pi + n)^2)^(-1/2) - kappa(n) ) + 2 S1 ]`.
//!
//! Poisson resummation splits `V` into a zero mode and exponentially small
//! instanton terms. The zero mode of the regularized lattice sum is
//! `-2 ln(R|c|/2) - 2 gamma`, so
//!
//! `V_sf = (R/2pi) (S1 - ln|c| + delta(R))`, `delta(R) = ln 2 - gamma - ln R`.
//!
//! The constant `delta(R)` is a linear shift of the invariant: the local model with
//! invariant `S + delta(R) c1` carries exactly the semi-flat data of this potential
//! (see [`local_invariant`]).

use std::f64::consts::{LN_2, PI};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::geometry::{
    coordinate_jacobian_fd, exterior_derivative_fd, laplacian_3d, partial, FdOptions, FormAtPoint, Frame, MetricAtPoint,
};
use crate::local_model::{action_coordinates, angles_jacobian, canonical_form, lattice_data, ActionAngle, FiberPoint};
use crate::scalar_kernels::{
    bessel_k0_k1, regularized_theta_sum, BasePoint, Chart, HarmonicInvariant, ModelParams, Truncation, EULER_GAMMA,
};
use crate::{Error, Result};

/// A point `(c, theta_e, theta_m)` of the Ooguri-Vafa space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OVPoint {
    pub c1: f64,
    pub c2: f64,
    pub theta_e: f64,
    pub theta_m: f64,
    pub chart: Chart,
}

impl OVPoint {
    pub fn new(c1: f64, c2: f64, theta_e: f64, theta_m: f64) -> Self {
        Self { c1, c2, theta_e, theta_m, chart: Chart::Principal }
    }

    pub fn base(&self) -> BasePoint {
        BasePoint::with_chart(self.c1, self.c2, self.chart)
    }

    /// Coordinates in [`Frame::OV`] order.
    pub fn coords(&self) -> [f64; 4] {
        [self.c1, self.c2, self.theta_e, self.theta_m]
    }

    fn from_coords(y: &[f64; 4], chart: Chart) -> Self {
        Self { c1: y[0], c2: y[1], theta_e: y[2], theta_m: y[3], chart }
    }

    pub fn modulus(&self) -> f64 {
        self.c1.hypot(self.c2)
    }

    fn require_off_axis(&self) -> Result<()> {
        if self.modulus() == 0.0 {
            Err(Error::Singular("c = 0 (the theta_e-axis)".into()))
        } else {
            Ok(())
        }
    }
}

/// `ln 2 - gamma - ln R`.
pub fn zero_mode_shift(r: f64) -> f64 {
    LN_2 - EULER_GAMMA - r.ln()
}

/// Local-model invariant whose semi-flat data matches the potential built from `s`.
pub fn local_invariant(s: &HarmonicInvariant, r: f64) -> HarmonicInvariant {
    s.add_linear(zero_mode_shift(r))
}

/// Inverse of [`local_invariant`].
pub fn matched_invariant(s_local: &HarmonicInvariant, r: f64) -> HarmonicInvariant {
    s_local.add_linear(-zero_mode_shift(r))
}

/// Connection `A = A_sf + A_inst`.
///
/// `A_sf` is a multiple of `dtheta_e`; `A_inst = alpha dc + beta dc_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvConnection {
    pub a_sf: Complex64,
    pub a_inst_dc: Complex64,
    pub a_inst_dcbar: Complex64,
}

impl OvConnection {
    /// Real components on `(dc1, dc2, dtheta_e)`.
    pub fn real_components(&self) -> [f64; 3] {
        let (a, b) = (self.a_inst_dc, self.a_inst_dcbar);
        [(a + b).re, (Complex64::i() * (a - b)).re, self.a_sf.re]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OoguriVafaField {
    /// Lattice-sum potential.
    pub v: f64,
    /// Zero mode and instanton part; `None` on the `theta_e`-axis.
    pub v_sf: Option<f64>,
    pub v_inst: Option<f64>,
    pub connection: Option<OvConnection>,
    pub sigma: Option<f64>,
}

fn s1_at(s: &HarmonicInvariant, p: &OVPoint) -> Result<f64> {
    Ok(s.eval(Complex64::new(p.c1, p.c2))?.s1)
}

/// `V` by the regularized lattice sum.
pub fn potential_lattice(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<f64> {
    let r = params.r;
    let sum = regularized_theta_sum(r * p.modulus(), p.theta_e / (2.0 * PI))?;
    Ok(r / (4.0 * PI) * (sum + 2.0 * s1_at(s, p)?))
}

/// `V_sf = (R/2pi)(S1 - ln|c| + delta(R))`.
pub fn potential_semiflat(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<f64> {
    p.require_off_axis()?;
    let r = params.r;
    Ok(r / (2.0 * PI) * (s1_at(s, p)? - p.modulus().ln() + zero_mode_shift(r)))
}

/// Sum `sum_{n>=1} w(n) f(2 pi R n |c|)` stopped once `|term| < tol` past the minimum count.
fn bessel_series(x: f64, trunc: &Truncation, term: impl Fn(usize, f64, f64) -> f64) -> Result<f64> {
    let mut acc = 0.0;
    for n in 1..=trunc.max_terms {
        let (k0, k1) = bessel_k0_k1(n as f64 * x)?;
        let t = term(n, k0, k1);
        acc += t;
        if n >= Truncation::MIN_TERMS && k0.max(k1) < trunc.series_tol {
            return Ok(acc);
        }
    }
    Err(Error::SeriesNonConvergence(trunc.max_terms))
}

/// `V_inst = (R/pi) sum_{n>=1} cos(n theta_e) K0(2 pi R n |c|)`.
pub fn potential_instanton(p: &OVPoint, params: &ModelParams, trunc: &Truncation) -> Result<f64> {
    p.require_off_axis()?;
    let x = 2.0 * PI * params.r * p.modulus();
    let sum = bessel_series(x, trunc, |n, k0, _| (n as f64 * p.theta_e).cos() * k0)?;
    Ok(params.r / PI * sum)
}

pub fn ov_connection(
    p: &OVPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
    trunc: &Truncation,
) -> Result<OvConnection> {
    p.require_off_axis()?;
    let c = Complex64::new(p.c1, p.c2);
    let jet = s.eval(c)?;
    // (i / 8 pi^2)(ln c - ln c_bar + 2 i S2) = -(arg c + S2) / 4 pi^2
    let a_sf = Complex64::i() / (8.0 * PI * PI) * Complex64::new(0.0, 2.0 * p.base().arg() + 2.0 * jet.s2);
    let r = params.r;
    let modulus = p.modulus();
    let x = 2.0 * PI * r * modulus;
    // sum_{n != 0} sign(n) e^{i n theta} |c| K1 = 2 i |c| sum_{n>=1} sin(n theta) K1
    let sines = bessel_series(x, trunc, |n, _, k1| (n as f64 * p.theta_e).sin() * k1)?;
    let t = Complex64::new(0.0, 2.0 * modulus * sines);
    let k = -r / (4.0 * PI);
    Ok(OvConnection { a_sf, a_inst_dc: k * t / c, a_inst_dcbar: -k * t / c.conj() })
}

/// `sigma = (1 / pi R) sum_{n>=1} sin(n theta_e) K0(2 pi R n |c|) / n`, so that
/// `d sigma / d theta_e = V_inst / R^2`.
pub fn sigma_correction(p: &OVPoint, params: &ModelParams, trunc: &Truncation) -> Result<f64> {
    p.require_off_axis()?;
    let x = 2.0 * PI * params.r * p.modulus();
    let sum = bessel_series(x, trunc, |n, k0, _| {
        let nf = n as f64;
        (nf * p.theta_e).sin() * k0 / nf
    })?;
    Ok(sum / (PI * params.r))
}

/// All fields at `p`. On the `theta_e`-axis only the lattice potential is available.
pub fn ov_potential(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<OoguriVafaField> {
    ov_potential_with(p, s, params, &Truncation::default())
}

pub fn ov_potential_with(
    p: &OVPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
    trunc: &Truncation,
) -> Result<OoguriVafaField> {
    let v = potential_lattice(p, s, params)?;
    if p.modulus() == 0.0 {
        return Ok(OoguriVafaField { v, v_sf: None, v_inst: None, connection: None, sigma: None });
    }
    Ok(OoguriVafaField {
        v,
        v_sf: Some(potential_semiflat(p, s, params)?),
        v_inst: Some(potential_instanton(p, params, trunc)?),
        connection: Some(ov_connection(p, s, params, trunc)?),
        sigma: Some(sigma_correction(p, params, trunc)?),
    })
}

/// `dA - *dV` on `R^2 x S^1` with coordinates `(c1, c2, theta_e / 2pi R)`, by finite differences.
///
/// Returns the largest of the three 2-form components.
pub fn connection_residual(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams, opts: FdOptions) -> Result<f64> {
    let trunc = Truncation::default();
    let scale = 2.0 * PI * params.r;
    // Work in x3 = theta_e / (2 pi R); A_x3 = scale * A_theta.
    let a_field = |y: &[f64; 4]| -> Result<Vec<f64>> {
        let q = OVPoint { c1: y[0], c2: y[1], theta_e: y[2] * scale, ..*p };
        let a = ov_connection(&q, s, params, &trunc)?.real_components();
        Ok(vec![a[0], a[1], a[2] * scale])
    };
    let v_field = |y: &[f64; 4]| -> Result<Vec<f64>> {
        let q = OVPoint { c1: y[0], c2: y[1], theta_e: y[2] * scale, ..*p };
        Ok(vec![potential_lattice(&q, s, params)?])
    };
    let x = [p.c1, p.c2, p.theta_e / scale, 0.0];
    let da: Vec<Vec<f64>> = (0..3).map(|k| partial(&a_field, &x, k, opts)).collect::<Result<_>>()?;
    let dv: Vec<f64> = (0..3).map(|k| partial(&v_field, &x, k, opts).map(|v| v[0])).collect::<Result<_>>()?;
    // (dA)_{ij} = d_i A_j - d_j A_i ;  *dV = V_1 dx2^dx3 + V_2 dx3^dx1 + V_3 dx1^dx2
    let r12 = da[0][1] - da[1][0] - dv[2];
    let r13 = da[0][2] - da[2][0] + dv[1];
    let r23 = da[1][2] - da[2][1] - dv[0];
    Ok(r12.abs().max(r13.abs()).max(r23.abs()))
}

/// Seven-point Laplacian of `V` in `(c1, c2, theta_e / 2pi R)`.
pub fn potential_laplacian(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams, opts: FdOptions) -> Result<f64> {
    let scale = 2.0 * PI * params.r;
    let f = |y: [f64; 3]| {
        let q = OVPoint { c1: y[0], c2: y[1], theta_e: y[2] * scale, ..*p };
        potential_lattice(&q, s, params)
    };
    laplacian_3d(f, [p.c1, p.c2, p.theta_e / scale], opts)
}

/// `(z_m, z_e, theta_e~, theta_m~)` with
/// `theta_e~ = theta_e + 2pi R sigma / lambda`, `theta_m~ = -theta_m - R sigma mu / lambda`,
/// where `lambda`, `mu` and `z_m` are those of [`local_invariant`]`(s)`.
pub fn ov_action_angle(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<ActionAngle> {
    p.require_off_axis()?;
    let base = p.base();
    let local = local_invariant(s, params.r);
    let d = lattice_data(&base, &local)?;
    if !(d.lambda > 0.0) {
        return Err(Error::DegenerateLattice(d.lambda));
    }
    let (z_m, z_e) = action_coordinates(&base, &local)?;
    let sigma = sigma_correction(p, params, &Truncation::default())?;
    let r = params.r;
    Ok(ActionAngle {
        z_m,
        z_e,
        theta_e: p.theta_e + 2.0 * PI * r * sigma / d.lambda,
        theta_m: -p.theta_m - r * sigma * d.mu / d.lambda,
    })
}

/// `-dc2 ^ dtheta_m - 2pi dc2 ^ A - (V/R) dtheta_e ^ dc1` in [`Frame::OV`].
fn omega_from(v: f64, a: [f64; 3], r: f64) -> Result<FormAtPoint> {
    let f = Frame::OV;
    let dc1 = FormAtPoint::basis(f, &[0])?;
    let dc2 = FormAtPoint::basis(f, &[1])?;
    let dthe = FormAtPoint::basis(f, &[2])?;
    let dthm = FormAtPoint::basis(f, &[3])?;
    let a_form = FormAtPoint::real_one_form(f, [a[0], a[1], a[2], 0.0]);
    let one = dc2.wedge(&dthm)?.scale_real(-1.0);
    let two = dc2.wedge(&a_form)?.scale_real(-2.0 * PI);
    let three = dthe.wedge(&dc1)?.scale_real(-v / r);
    one.add(&two)?.add(&three)
}

/// The symplectic form `omega_0` built from `V` and `A`.
pub fn omega0(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<FormAtPoint> {
    let trunc = Truncation::default();
    let v = potential_lattice(p, s, params)?;
    let a = ov_connection(p, s, params, &trunc)?.real_components();
    omega_from(v, a, params.r)
}

/// Semi-flat part of `omega_0` (built from `V_sf`, `A_sf`).
pub fn omega0_semiflat(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<FormAtPoint> {
    let trunc = Truncation::default();
    let v = potential_semiflat(p, s, params)?;
    let a = ov_connection(p, s, params, &trunc)?;
    omega_from(v, [0.0, 0.0, a.a_sf.re], params.r)
}

/// `|omega_0 - (dz_m ^ dtheta_e~ + dz_e ^ dtheta_m~)|` with the right side from
/// finite-difference Jacobians of [`ov_action_angle`].
pub fn verify_action_angle(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams, opts: FdOptions) -> Result<f64> {
    let chart = p.chart;
    let map = |y: &[f64; 4]| -> Result<[f64; 4]> {
        let a = ov_action_angle(&OVPoint::from_coords(y, chart), s, params)?;
        Ok([a.z_m, a.z_e, a.theta_e, a.theta_m])
    };
    let j = coordinate_jacobian_fd(map, &p.coords(), opts)?;
    let row = |k: usize| FormAtPoint::real_one_form(Frame::OV, [0, 1, 2, 3].map(|b| j[(k, b)]));
    let rhs = row(0).wedge(&row(2))?.add(&row(1).wedge(&row(3))?)?;
    omega0(p, s, params)?.max_diff(&rhs)
}

/// Largest coefficient of `d omega_0` by finite differences.
pub fn omega0_closedness(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams, opts: FdOptions) -> Result<f64> {
    let chart = p.chart;
    let field = |y: &[f64; 4]| omega0(&OVPoint::from_coords(y, chart), s, params);
    Ok(exterior_derivative_fd(field, &p.coords(), opts)?.max_abs())
}

/// `d(c1, c2, theta_e, theta_m) / d(c1, c2, theta_gm, theta_ge)` for the identification
/// `theta_e = theta_ge`, `theta_m = -theta_gm`.
pub fn ov_from_angles_jacobian() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 0)] = 1.0;
    j[(1, 1)] = 1.0;
    j[(2, 3)] = 1.0;
    j[(3, 2)] = -1.0;
    j
}

/// Pull the semi-flat part of `omega_0` back to the local model and compare with
/// `omega_can = dc1 ^ dt1 + dc2 ^ dt2`.
///
/// `s_local` is the local-model invariant; the potential uses [`matched_invariant`].
pub fn embedding_residual(
    c: &BasePoint,
    t: &FiberPoint,
    s_local: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<f64> {
    let s_ov = matched_invariant(s_local, params.r);
    let d = lattice_data(c, s_local)?;
    let theta_e = 2.0 * PI * t.t1 / d.lambda;
    let theta_gm = t.t2 - t.t1 * d.mu / d.lambda;
    let p = OVPoint { c1: c.c1, c2: c.c2, theta_e, theta_m: -theta_gm, chart: c.chart };
    let form = omega0_semiflat(&p, &s_ov, params)?;
    let jac = ov_from_angles_jacobian() * angles_jacobian(c, t, s_local)?;
    form.pullback(&jac, Frame::CT).max_diff(&canonical_form())
}

/// `V (dc1^2 + dc2^2 + (dtheta_e / 2pi R)^2) + V^{-1} (dtheta_m / 2pi + A)^2` in [`Frame::OV`].
pub fn gibbons_hawking_from(v: f64, a: [f64; 3], r: f64) -> Result<MetricAtPoint> {
    let mut g = Matrix4::zeros();
    g[(0, 0)] = v;
    g[(1, 1)] = v;
    g[(2, 2)] = v / (2.0 * PI * r).powi(2);
    let eta = [a[0], a[1], a[2], 1.0 / (2.0 * PI)];
    for i in 0..4 {
        for j in 0..4 {
            g[(i, j)] += eta[i] * eta[j] / v;
        }
    }
    MetricAtPoint::new(Frame::OV, g, 1e-12)
}

pub fn gibbons_hawking_metric(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<MetricAtPoint> {
    let v = potential_lattice(p, s, params)?;
    if !(v > 0.0) {
        return Err(Error::PositivityViolation(v));
    }
    let a = ov_connection(p, s, params, &Truncation::default())?.real_components();
    gibbons_hawking_from(v, a, params.r)
}

/// Gibbons-Hawking metric built from `V_sf` and `A_sf` alone.
pub fn gibbons_hawking_semiflat(p: &OVPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<MetricAtPoint> {
    let v = potential_semiflat(p, s, params)?;
    if !(v > 0.0) {
        return Err(Error::PositivityViolation(v));
    }
    let a = ov_connection(p, s, params, &Truncation::default())?;
    gibbons_hawking_from(v, [0.0, 0.0, a.a_sf.re], params.r)
}

/// `S1(0) + min_theta (1/2) sum(0, theta / 2pi)` over the grid; positive iff `V > 0` on the
/// `theta_e`-axis. Grid points where the sum is singular are skipped.
pub fn positivity_margin(s: &HarmonicInvariant, theta_grid: &[f64]) -> Result<f64> {
    let s1 = s.eval(Complex64::new(0.0, 0.0))?.s1;
    let mut min = f64::INFINITY;
    for &theta in theta_grid {
        match regularized_theta_sum(0.0, theta / (2.0 * PI)) {
            Ok(v) => min = min.min(0.5 * v),
            Err(Error::Singular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if !min.is_finite() {
        return Err(Error::InvalidParameter("theta grid has no regular point".into()));
    }
    Ok(s1 + min)
}
