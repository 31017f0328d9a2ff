use nalgebra::Matrix4;

use super::form::FormAtPoint;
use super::metric::MetricAtPoint;
use crate::{Error, Result};

/// Sign in `g = s * J^T W3`, `J = W1^{-1} W2`.
///
/// Calibrated once: `+1` turns the flat quaternionic triple into the identity and the
/// semi-flat triple `(Re Omega, Im Omega, omega_sf)` into the positive semi-flat metric.
pub const TRIPLE_ORIENTATION: f64 = 1.0;

const J_SQUARED_TOL: f64 = 1e-6;
const SYMMETRY_TOL: f64 = 1e-8;

/// Metric of a hyperkahler triple with the complex structures that go with it.
#[derive(Debug, Clone)]
pub struct TripleMetric {
    pub metric: MetricAtPoint,
    /// `J = W1^{-1} W2`.
    pub pairing: Matrix4<f64>,
    /// `J_i` with `omega_i(X, Y) = g(J_i X, Y)`.
    pub complex_structures: [Matrix4<f64>; 3],
    /// Worst relative `|J^2 + Id|` over the three structures and the pairing.
    pub j_squared_residual: f64,
    /// Condition numbers of `W1, W2, W3`.
    pub conditions: [f64; 3],
}

/// `|J^2 + Id|` relative to `|J|^2`, so that badly scaled frames are not penalized.
fn square_residual(j: &Matrix4<f64>) -> f64 {
    (j * j + Matrix4::identity()).amax() / j.amax().powi(2).max(1.0)
}

fn condition(w: &Matrix4<f64>) -> f64 {
    let sv = w.singular_values();
    let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    hi / lo
}

/// Metric from three real 2-forms; the forms' real parts are used.
pub fn triple_to_metric(w1: &FormAtPoint, w2: &FormAtPoint, w3: &FormAtPoint) -> Result<TripleMetric> {
    for w in [w2, w3] {
        if w.frame() != w1.frame() {
            return Err(Error::frame_mismatch(w1.frame(), w.frame()));
        }
    }
    if [w1, w2, w3].iter().any(|w| w.degree() != 2) {
        return Err(Error::InvalidParameter("triple_to_metric needs 2-forms".into()));
    }
    let m = [w1.to_real_matrix(), w2.to_real_matrix(), w3.to_real_matrix()];
    let inv1 = m[0].try_inverse().ok_or_else(|| Error::SingularMatrix("first form of the triple".into()))?;
    let pairing = inv1 * m[1];
    let pairing_residual = square_residual(&pairing);
    if pairing_residual > J_SQUARED_TOL {
        return Err(Error::NotHyperkahler(pairing_residual));
    }
    let g = TRIPLE_ORIENTATION * pairing.transpose() * m[2];
    let metric = MetricAtPoint::new(w1.frame(), g, SYMMETRY_TOL)?;
    let ginv = metric.matrix().try_inverse().ok_or_else(|| Error::SingularMatrix("extracted metric".into()))?;
    // W = J^T g  =>  J = -g^{-1} W for antisymmetric W.
    let complex_structures = m.map(|w| -ginv * w);
    let j_squared_residual = complex_structures.iter().map(square_residual).fold(pairing_residual, f64::max);
    if j_squared_residual > J_SQUARED_TOL {
        return Err(Error::NotHyperkahler(j_squared_residual));
    }
    Ok(TripleMetric { metric, pairing, complex_structures, j_squared_residual, conditions: m.map(|w| condition(&w)) })
}
