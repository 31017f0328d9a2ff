use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;

use super::correction::GmnOptions;
use super::forms::corrected_twistor_form_gmn;
use super::twistor::TwistorParameter;
use crate::geometry::{subsets, triple_to_metric, FormAtPoint, Frame, MetricAtPoint, TripleMetric};
use crate::local_model::lattice_data;
use crate::ooguri_vafa::{gibbons_hawking_metric, matched_invariant, OVPoint};
use crate::scalar_kernels::{BasePoint, HarmonicInvariant, ModelParams};
use crate::{Error, Result};

/// Largest admissible least-squares residual of the Laurent model.
pub const LAURENT_FIT_TOL: f64 = 1e-6;

/// `varpi(zeta) = p / zeta + q + zeta t`, coefficientwise.
#[derive(Debug, Clone)]
pub struct LaurentFit {
    pub p: FormAtPoint,
    pub q: FormAtPoint,
    pub t: FormAtPoint,
    pub residual: f64,
}

impl LaurentFit {
    /// `Omega_c = -2 p`.
    pub fn big_omega(&self) -> FormAtPoint {
        self.p.scale_real(-2.0)
    }

    pub fn omega(&self) -> FormAtPoint {
        self.q.clone()
    }
}

/// Twistor samples at angles `pi/4 + k pi/2` from `arg c` on the unit circle, plus four
/// more at radii 0.7 and 1.4; all stay `pi/4` or more away from the contours.
pub fn twistor_samples(c: &BasePoint) -> Vec<TwistorParameter> {
    let a = c.c().arg();
    let mut out: Vec<_> =
        (0..4).map(|k| TwistorParameter::polar(1.0, a + FRAC_PI_4 + k as f64 * PI / 2.0).expect("unit")).collect();
    for (r, phi) in [(0.7, PI / 3.0), (1.4, 2.0 * PI / 3.0), (0.7, 4.0 * PI / 3.0), (1.4, 5.0 * PI / 3.0)] {
        out.push(TwistorParameter::polar(r, a + phi).expect("nonzero"));
    }
    out
}

/// Least-squares fit of 2-form samples to the Laurent model.
pub fn laurent_fit(samples: &[(TwistorParameter, FormAtPoint)]) -> Result<LaurentFit> {
    if samples.len() < 3 {
        return Err(Error::InvalidParameter("Laurent fit needs at least three samples".into()));
    }
    let frame = samples[0].1.frame();
    let n = samples.len();
    let design = DMatrix::from_fn(n, 3, |i, j| {
        let z = samples[i].0.zeta();
        match j {
            0 => 1.0 / z,
            1 => Complex64::new(1.0, 0.0),
            _ => z,
        }
    });
    let svd = design.clone().svd(true, true);
    let mut p = FormAtPoint::zero(2, frame)?;
    let mut q = p.clone();
    let mut t = p.clone();
    let mut residual = 0.0f64;
    for ij in subsets(2) {
        let y = DVector::from_iterator(n, samples.iter().map(|(_, w)| w.coeff(ij)));
        let x = svd.solve(&y, 1e-14).map_err(|_| Error::SingularMatrix("Laurent design matrix".into()))?;
        residual = (&design * &x - &y).iter().map(|v| v.norm()).fold(residual, f64::max);
        p.set(ij, x[0]);
        q.set(ij, x[1]);
        t.set(ij, x[2]);
    }
    Ok(LaurentFit { p, q, t, residual })
}

/// `d(c1, c2, theta_m, theta_e) / d(c1, c2, theta_e', theta_m')` for the Gibbons-Hawking
/// frame, where `theta_m' = -theta_m`.
pub fn angles_from_ov_jacobian() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 0)] = 1.0;
    j[(1, 1)] = 1.0;
    j[(2, 3)] = -1.0;
    j[(3, 2)] = 1.0;
    j
}

#[derive(Debug, Clone)]
pub struct ExtractedMetric {
    /// The metric in [`Frame::OV`] with `theta_m` reversed.
    pub metric: MetricAtPoint,
    pub triple: TripleMetric,
    /// `(Re Omega_c, Im Omega_c, omega_c)` in [`Frame::OV`].
    pub forms: [FormAtPoint; 3],
    pub fit: LaurentFit,
    pub evaluations: usize,
}

impl ExtractedMetric {
    /// Largest `|omega_i ^ omega_j - delta_ij vol|` with `vol = omega_3 ^ omega_3`.
    pub fn triple_residual(&self) -> Result<f64> {
        let vol = self.forms[2].wedge(&self.forms[2])?.volume_coefficient().re;
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in i..3 {
                let v = self.forms[i].wedge(&self.forms[j])?.volume_coefficient().re;
                let target = if i == j { vol } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        Ok(worst)
    }
}

/// The metric `2pi g` read off the corrected twistor family.
///
/// Samples `varpi` at [`twistor_samples`], fits the Laurent model, and hands the triple
/// `(Re Omega_c, Im Omega_c, omega_c)` with `Omega_c = -2 p`, `omega_c = q` to
/// [`triple_to_metric`].
pub fn extract_metric(
    c: &BasePoint,
    theta_m: f64,
    theta_e: f64,
    s: &HarmonicInvariant,
    params: &ModelParams,
    opts: &GmnOptions,
) -> Result<ExtractedMetric> {
    let d = lattice_data(c, s)?;
    if !(d.lambda > 0.0) {
        return Err(Error::DegenerateLattice(d.lambda));
    }
    let mut samples = Vec::new();
    let mut evaluations = 0;
    for zeta in twistor_samples(c) {
        let w = corrected_twistor_form_gmn(c, theta_m, theta_e, s, params, &zeta, opts)?;
        evaluations += w.evaluations;
        samples.push((zeta, w.form));
    }
    let fit = laurent_fit(&samples)?;
    if !(fit.residual <= LAURENT_FIT_TOL) {
        return Err(Error::LaurentFit(fit.residual));
    }
    let jac = angles_from_ov_jacobian();
    let big = fit.big_omega();
    let forms = [big.re(), big.im(), fit.omega().re()].map(|w| w.pullback(&jac, Frame::OV));
    let triple = triple_to_metric(&forms[0], &forms[1], &forms[2])?;
    let sylvester = triple.metric.sylvester();
    if !sylvester.positive {
        return Err(Error::NotPositiveDefinite(sylvester.minors));
    }
    Ok(ExtractedMetric { metric: triple.metric.clone(), triple, forms, fit, evaluations })
}

/// `2pi g_GH` at the same point, for the invariant matched to `s` and `theta_m' = -theta_m`.
pub fn gibbons_hawking_reference(
    c: &BasePoint,
    theta_m: f64,
    theta_e: f64,
    s: &HarmonicInvariant,
    params: &ModelParams,
) -> Result<MetricAtPoint> {
    let p = OVPoint { c1: c.c1, c2: c.c2, theta_e, theta_m: -theta_m, chart: c.chart };
    Ok(gibbons_hawking_metric(&p, &matched_invariant(s, params.r), params)?.scale(2.0 * PI))
}
