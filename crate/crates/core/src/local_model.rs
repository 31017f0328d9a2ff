//! The local model `(W, omega_can, S)`: fibration `c = z1 z2`, the two Hamiltonian
//! flows, the gluing map, the period lattice and action-angle coordinates.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::geometry::{jacobian_fd, FdOptions, FormAtPoint, Frame};
use crate::scalar_kernels::{BasePoint, HarmonicInvariant, InvariantJet, ModelParams, ScalarInvariant};
use crate::{Error, Result};

/// Flow times `(t1, t2)` from the section `c -> (c, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FiberPoint {
    pub t1: f64,
    pub t2: f64,
}

impl FiberPoint {
    pub fn new(t1: f64, t2: f64) -> Self {
        Self { t1, t2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodLattice {
    pub gen1: (f64, f64),
    pub gen2: (f64, f64),
}

/// Action-angle coordinates. Angles are not reduced mod 2pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionAngle {
    pub z_m: f64,
    pub z_e: f64,
    pub theta_e: f64,
    pub theta_m: f64,
}

/// `lambda = S1 - ln|c|`, `mu = S2 + arg c` and their `c1`-derivatives `m`, `n`.
///
/// By harmonicity `d lambda = m dc1 + n dc2` and `d mu = n dc1 - m dc2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeData {
    pub lambda: f64,
    pub mu: f64,
    pub m: f64,
    pub n: f64,
    pub jet: InvariantJet,
}

pub fn lattice_data(c: &BasePoint, s: &HarmonicInvariant) -> Result<LatticeData> {
    let r2 = c.c1 * c.c1 + c.c2 * c.c2;
    if r2 == 0.0 {
        return Err(Error::Domain("c = 0".into()));
    }
    let jet = s.eval(c.c())?;
    Ok(LatticeData {
        lambda: jet.s1 - 0.5 * r2.ln(),
        mu: jet.s2 + c.arg(),
        m: jet.s11 - c.c1 / r2,
        n: jet.s12 - c.c2 / r2,
        jet,
    })
}

pub fn fibration(z1: Complex64, z2: Complex64) -> BasePoint {
    BasePoint::from_complex(z1 * z2, Default::default())
}

/// Joint time-`(t1, t2)` flow: `(e^{t1 - i t2} z1, e^{-t1 + i t2} z2)`.
pub fn flow(z1: Complex64, z2: Complex64, t1: f64, t2: f64) -> (Complex64, Complex64) {
    let w = Complex64::new(t1, -t2).exp();
    (w * z1, z2 / w)
}

/// `e^{S1 - i S2}` at `c`.
pub fn gluing_factor(s: &dyn ScalarInvariant, c: Complex64) -> Result<Complex64> {
    let (s1, s2) = s.gradient(c.re, c.im)?;
    Ok(Complex64::new(s1, -s2).exp())
}

/// `psi(z1, z2) = (e^{S1 - i S2} / z2, e^{-S1 + i S2} z1 z2^2)`.
pub fn glue_map(
    z1: Complex64,
    z2: Complex64,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<(Complex64, Complex64)> {
    if z2 == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("glue map needs z2 != 0".into()));
    }
    let c = z1 * z2;
    if !(c.norm() < params.epsilon) {
        return Err(Error::Domain(format!("|z1 z2| = {} >= epsilon", c.norm())));
    }
    let g = gluing_factor(s, c)?;
    Ok((g / z2, z1 * z2 * z2 / g))
}

/// Largest `|d G / d conj(z_k)|` of the gluing factor `G(z1 z2)`, by central differences.
///
/// Vanishes (up to truncation) exactly when `S1 - i S2` is holomorphic, i.e. `S` harmonic.
pub fn gluing_cr_residual(s: &dyn ScalarInvariant, z1: Complex64, z2: Complex64, h: f64) -> Result<f64> {
    let g = |a: Complex64, b: Complex64| gluing_factor(s, a * b);
    let mut worst = 0.0f64;
    for k in 0..2 {
        let bump = |d: Complex64| if k == 0 { (z1 + d, z2) } else { (z1, z2 + d) };
        let (xp, xq) = bump(Complex64::new(h, 0.0));
        let (xm, xn) = bump(Complex64::new(-h, 0.0));
        let (yp, yq) = bump(Complex64::new(0.0, h));
        let (ym, yn) = bump(Complex64::new(0.0, -h));
        let dx = (g(xp, xq)? - g(xm, xn)?) / (2.0 * h);
        let dy = (g(yp, yq)? - g(ym, yn)?) / (2.0 * h);
        let dbar = 0.5 * (dx + Complex64::i() * dy);
        worst = worst.max(dbar.norm());
    }
    Ok(worst)
}

/// `T(c; t) = (c e^{-t1 + i t2}, e^{t1 - i t2})`.
pub fn parametrize(c: &BasePoint, t: &FiberPoint, params: &ModelParams) -> Result<(Complex64, Complex64)> {
    c.require_regular(params.epsilon)?;
    let w = Complex64::new(t.t1, -t.t2).exp();
    Ok((c.c() / w, w))
}

pub fn period_lattice(c: &BasePoint, s: &HarmonicInvariant) -> Result<PeriodLattice> {
    let d = lattice_data(c, s)?;
    Ok(PeriodLattice { gen1: (d.lambda, d.mu), gen2: (0.0, 2.0 * PI) })
}

/// `(z_m, z_e)`; unlike [`action_angle`] this needs no positivity of the lattice.
pub fn action_coordinates(c: &BasePoint, s: &HarmonicInvariant) -> Result<(f64, f64)> {
    let jet = s.eval(c.c())?;
    let r = c.modulus();
    if r == 0.0 {
        return Err(Error::Domain("c = 0".into()));
    }
    let z_m = (-r.ln() * c.c1 + c.arg() * c.c2 + c.c1 + jet.s) / (2.0 * PI);
    Ok((z_m, c.c2))
}

pub fn action_angle(c: &BasePoint, t: &FiberPoint, s: &HarmonicInvariant, params: &ModelParams) -> Result<ActionAngle> {
    c.require_regular(params.epsilon)?;
    let d = lattice_data(c, s)?;
    if !(d.lambda > 0.0) {
        return Err(Error::DegenerateLattice(d.lambda));
    }
    let (z_m, z_e) = action_coordinates(c, s)?;
    Ok(ActionAngle { z_m, z_e, theta_e: 2.0 * PI * t.t1 / d.lambda, theta_m: t.t2 - t.t1 * d.mu / d.lambda })
}

/// Inverse of the angle map at fixed `c`: `t1 = lambda theta_e / 2pi`, `t2 = theta_m + mu theta_e / 2pi`.
pub fn fiber_from_angles(c: &BasePoint, theta_m: f64, theta_e: f64, s: &HarmonicInvariant) -> Result<FiberPoint> {
    let d = lattice_data(c, s)?;
    Ok(FiberPoint { t1: d.lambda * theta_e / (2.0 * PI), t2: theta_m + d.mu * theta_e / (2.0 * PI) })
}

/// Analytic `d(c1, c2, theta_m, theta_e) / d(c1, c2, t1, t2)`.
pub fn angles_jacobian(c: &BasePoint, t: &FiberPoint, s: &HarmonicInvariant) -> Result<Matrix4<f64>> {
    let d = lattice_data(c, s)?;
    if d.lambda == 0.0 {
        return Err(Error::DegenerateLattice(0.0));
    }
    let (l, l2) = (d.lambda, d.lambda * d.lambda);
    let t1 = t.t1;
    let mut j = Matrix4::identity();
    // theta_m = t2 - t1 mu / lambda, with d mu = (n, -m).
    j[(2, 0)] = -t1 * (d.n * l - d.mu * d.m) / l2;
    j[(2, 1)] = -t1 * (-d.m * l - d.mu * d.n) / l2;
    j[(2, 2)] = -d.mu / l;
    j[(2, 3)] = 1.0;
    // theta_e = 2 pi t1 / lambda.
    j[(3, 0)] = -2.0 * PI * t1 * d.m / l2;
    j[(3, 1)] = -2.0 * PI * t1 * d.n / l2;
    j[(3, 2)] = 2.0 * PI / l;
    j[(3, 3)] = 0.0;
    Ok(j)
}

/// `omega_can = dc1 ^ dt1 + dc2 ^ dt2` in the `(c, t)` frame.
pub fn canonical_form() -> FormAtPoint {
    let mut w = FormAtPoint::zero(2, Frame::CT).expect("degree 2");
    w.set(&[0, 2], Complex64::new(1.0, 0.0));
    w.set(&[1, 3], Complex64::new(1.0, 0.0));
    w
}

/// Both sides of the action-angle identity at one point.
#[derive(Debug, Clone)]
pub struct SymplecticCheck {
    /// `T^*(Re dz1 ^ dz2)` from the Jacobian of [`parametrize`].
    pub pullback: FormAtPoint,
    /// `dz_m ^ dtheta_e + dz_e ^ dtheta_m` from the Jacobian of [`action_angle`].
    pub action_angle_form: FormAtPoint,
    pub residual: f64,
}

pub fn verify_symplectic_identity(
    c: &BasePoint,
    t: &FiberPoint,
    s: &HarmonicInvariant,
    params: &ModelParams,
    opts: FdOptions,
) -> Result<SymplecticCheck> {
    let x = [c.c1, c.c2, t.t1, t.t2];
    let point = |y: &[f64; 4]| BasePoint::with_chart(y[0], y[1], c.chart);

    let tmap = |y: &[f64; 4]| -> Result<[f64; 4]> {
        let (z1, z2) = parametrize(&point(y), &FiberPoint::new(y[2], y[3]), params)?;
        Ok([z1.re, z1.im, z2.re, z2.im])
    };
    let jt = jacobian_fd::<4, _>(tmap, &x, opts)?;
    // Re(dz1 ^ dz2) = dx1 ^ dx2 - dy1 ^ dy2 in (x1, y1, x2, y2).
    let mut re_dz = FormAtPoint::zero(2, Frame(["re z1", "im z1", "re z2", "im z2"]))?;
    re_dz.set(&[0, 2], Complex64::new(1.0, 0.0));
    re_dz.set(&[1, 3], Complex64::new(-1.0, 0.0));
    let pullback = re_dz.pullback(&jt, Frame::CT);

    let aa = |y: &[f64; 4]| -> Result<[f64; 4]> {
        let a = action_angle(&point(y), &FiberPoint::new(y[2], y[3]), s, params)?;
        Ok([a.z_m, a.z_e, a.theta_e, a.theta_m])
    };
    let ja = jacobian_fd::<4, _>(aa, &x, opts)?;
    let row = |i: usize| FormAtPoint::real_one_form(Frame::CT, [ja[(i, 0)], ja[(i, 1)], ja[(i, 2)], ja[(i, 3)]]);
    let action_angle_form = row(0).wedge(&row(2))?.add(&row(1).wedge(&row(3))?)?;
    let residual = pullback.max_diff(&action_angle_form)?;
    Ok(SymplecticCheck { pullback, action_angle_form, residual })
}
