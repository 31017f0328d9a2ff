//! Modified Bessel functions of the second kind, orders 0 and 1.
//!
//! Power series below `x = 2`, Steed's continued fraction (CF2, Temme's
//! normalization) above.

use std::f64::consts::PI;

use crate::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SEAM: f64 = 2.0;
const EPS: f64 = 1e-17;
const MAX_ITER: usize = 10_000;

/// `K0(x)`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k0_k1(x).map(|(k0, _)| k0)
}

/// `K1(x)`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    bessel_k0_k1(x).map(|(_, k1)| k1)
}

/// `(K0(x), K1(x))` in one pass.
pub fn bessel_k0_k1(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain(format!("Bessel K needs x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok((0.0, 0.0));
    }
    Ok(if x <= SEAM { series(x) } else { steed(x) })
}

pub(crate) fn series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let l = (0.5 * x).ln();

    // term_k = y^k / (k!)^2, pterm_k = y^k / (k! (k+1)!)
    let mut term = 1.0;
    let mut pterm = 1.0;
    let mut i0 = 1.0;
    let mut i1s = 1.0;
    let mut harm = 0.0; // H_k
    let mut k0tail = 0.0;
    // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
    let mut k1tail = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..200 {
        let kf = k as f64;
        term *= y / (kf * kf);
        pterm *= y / (kf * (kf + 1.0));
        harm += 1.0 / kf;
        i0 += term;
        i1s += pterm;
        k0tail += harm * term;
        k1tail += (2.0 * harm + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * pterm;
        if term < EPS * i0 {
            break;
        }
    }
    let i1 = 0.5 * x * i1s;
    let k0 = -(l + EULER_GAMMA) * i0 + k0tail;
    let k1 = 1.0 / x + l * i1 - 0.25 * x * k1tail;
    (k0, k1)
}

pub(crate) fn steed(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree_at_seam() {
        for x in [1.9, 2.0, 2.1] {
            let (a0, a1) = series(x);
            let (b0, b1) = steed(x);
            assert!((a0 / b0 - 1.0).abs() < 1e-13, "K0 seam at {x}");
            assert!((a1 / b1 - 1.0).abs() < 1e-13, "K1 seam at {x}");
        }
    }

    #[test]
    fn domain() {
        assert!(bessel_k0(0.0).is_err());
        assert!(bessel_k1(-1.0).is_err());
        assert_eq!(bessel_k0(800.0).unwrap(), 0.0);
    }
}
