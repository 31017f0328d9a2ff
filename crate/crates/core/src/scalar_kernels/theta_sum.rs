use std::f64::consts::LN_2;

use crate::{Error, Result};

/// `sum_n [ (rho^2 + (tau+n)^2)^(-1/2) - kappa(n) ]`, `kappa(0) = 0`, `kappa(n) = 1/|n|`.
///
/// The sum is taken symmetrically in `n`, so it is 1-periodic and even in `tau`.
/// Direct summation over `|n| <= N` plus an Euler-Maclaurin tail.
pub fn regularized_theta_sum(rho: f64, tau: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() || !tau.is_finite() {
        return Err(Error::Domain(format!("regularized sum at rho = {rho}, tau = {tau}")));
    }
    let t = (tau - tau.round()).abs();
    if rho == 0.0 && t == 0.0 {
        return Err(Error::Singular(format!("regularized sum at rho = 0, tau = {tau}")));
    }
    let r2 = rho * rho;
    let h = |u: f64| 1.0 / (r2 + u * u).sqrt();

    let n_direct = 50usize.max((10.0 * (rho + t)).ceil() as usize);
    // Small terms first.
    let mut sum = 0.0;
    for n in (1..=n_direct).rev() {
        let x = n as f64;
        sum += h(x + t) + h(x - t) - 2.0 / x;
    }
    sum += h(t);

    // Tail sum_{n >= M} g(n), g(x) = h(x+t) + h(x-t) - 2/x.
    let m = (n_direct + 1) as f64;
    let root = |u: f64| (r2 + u * u).sqrt();
    let integral = 2.0 * LN_2 - (m + t + root(m + t)).ln() - (m - t + root(m - t)).ln() + 2.0 * m.ln();
    let d1 = |u: f64| -u * (r2 + u * u).powf(-1.5);
    let d3 = |u: f64| u * (9.0 * r2 - 6.0 * u * u) * (r2 + u * u).powf(-3.5);
    let g = h(m + t) + h(m - t) - 2.0 / m;
    let g1 = d1(m + t) + d1(m - t) + 2.0 / (m * m);
    let g3 = d3(m + t) + d3(m - t) + 12.0 / (m * m * m * m);
    Ok(sum + integral + 0.5 * g - g1 / 12.0 + g3 / 720.0)
}
