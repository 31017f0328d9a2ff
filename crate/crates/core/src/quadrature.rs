//! Quadrature on the real line for complex vector integrands.
//!
//! [`trapezoid`] is spectrally accurate for the analytic, double-exponentially
//! decaying integrands met along the twistor contours. [`gauss_kronrod`] is an
//! adaptive G7/K15 rule for integrands with nearby (but not on-axis) structure.

use num_complex::Complex64;

use crate::{Error, Result};

/// Result of a quadrature together with its cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [Complex64; N],
    pub error: f64,
    pub evaluations: usize,
}

fn max_norm<const N: usize>(v: &[Complex64; N]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn axpy<const N: usize>(acc: &mut [Complex64; N], k: f64, v: &[Complex64; N]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b * k;
    }
}

/// Trapezoid rule on `[a, b]` with step halving until two successive estimates agree to `tol`.
///
/// The integrand must be negligible at both ends.
pub fn trapezoid<const N: usize, F>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature<N>>
where
    F: Fn(f64) -> [Complex64; N],
{
    if !(b > a) {
        return Err(Error::Quadrature(format!("empty interval [{a}, {b}]")));
    }
    let mut n = ((b - a) / 0.25).ceil().max(8.0) as usize;
    let mut h = (b - a) / n as f64;
    let mut sum = [Complex64::new(0.0, 0.0); N];
    axpy(&mut sum, 0.5, &f(a));
    axpy(&mut sum, 0.5, &f(b));
    for k in 1..n {
        axpy(&mut sum, 1.0, &f(a + k as f64 * h));
    }
    let mut evaluations = n + 1;
    let mut prev = sum.map(|z| z * h);
    for _ in 0..14 {
        // Odd nodes of the refined grid.
        for k in 0..n {
            axpy(&mut sum, 1.0, &f(a + (k as f64 + 0.5) * h));
        }
        evaluations += n;
        n *= 2;
        h *= 0.5;
        let next = sum.map(|z| z * h);
        let mut diff = next;
        axpy(&mut diff, -1.0, &prev);
        let err = max_norm(&diff);
        if !err.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
        if err <= tol {
            return Ok(Quadrature { value: next, error: err, evaluations });
        }
        prev = next;
    }
    Err(Error::Quadrature(format!("trapezoid rule stalled on [{a}, {b}]")))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn kronrod<const N: usize, F>(f: &F, a: f64, b: f64) -> ([Complex64; N], f64)
where
    F: Fn(f64) -> [Complex64; N],
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut k = [Complex64::new(0.0, 0.0); N];
    let mut g = [Complex64::new(0.0, 0.0); N];
    let fc = f(mid);
    axpy(&mut k, WGK[7], &fc);
    axpy(&mut g, WG[3], &fc);
    for i in 0..7 {
        let x = half * XGK[i];
        let f1 = f(mid - x);
        let f2 = f(mid + x);
        axpy(&mut k, WGK[i], &f1);
        axpy(&mut k, WGK[i], &f2);
        if i % 2 == 1 {
            axpy(&mut g, WG[i / 2], &f1);
            axpy(&mut g, WG[i / 2], &f2);
        }
    }
    let k = k.map(|z| z * half);
    let g = g.map(|z| z * half);
    let mut d = k;
    axpy(&mut d, -1.0, &g);
    (k, max_norm(&d))
}

/// Adaptive Gauss-Kronrod quadrature over consecutive panels `[breaks[i], breaks[i+1]]`.
pub fn gauss_kronrod<const N: usize, F>(f: F, breaks: &[f64], tol: f64) -> Result<Quadrature<N>>
where
    F: Fn(f64) -> [Complex64; N],
{
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Quadrature("breakpoints must increase".into()));
    }
    let mut panels: Vec<(f64, f64, [Complex64; N], f64)> = breaks
        .windows(2)
        .map(|w| {
            let (v, e) = kronrod(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    let mut evaluations = 15 * panels.len();
    for _ in 0..2000 {
        let total: f64 = panels.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
        if total <= tol {
            let mut value = [Complex64::new(0.0, 0.0); N];
            for p in &panels {
                axpy(&mut value, 1.0, &p.2);
            }
            return Ok(Quadrature { value, error: total, evaluations });
        }
        let worst =
            panels.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).map(|(i, _)| i).expect("non-empty");
        let (a, b, _, _) = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        let (v1, e1) = kronrod(&f, a, m);
        let (v2, e2) = kronrod(&f, m, b);
        evaluations += 30;
        panels.push((a, m, v1, e1));
        panels.push((m, b, v2, e2));
    }
    Err(Error::Quadrature("adaptive Gauss-Kronrod exhausted its subdivisions".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gaussian_integrals() {
        let exact = std::f64::consts::PI.sqrt();
        let t = trapezoid(|s| [c((-s * s).exp())], -9.0, 9.0, 1e-14).unwrap();
        assert!((t.value[0].re - exact).abs() < 1e-13);
        let g = gauss_kronrod(|s| [c((-s * s).exp())], &[-9.0, 0.0, 9.0], 1e-13).unwrap();
        assert!((g.value[0].re - exact).abs() < 1e-12);
    }

    #[test]
    fn kronrod_polynomial_exact() {
        let g = gauss_kronrod(|s| [c(s.powi(9) + s * s)], &[0.0, 1.0], 1e-14).unwrap();
        assert!((g.value[0].re - (0.1 + 1.0 / 3.0)).abs() < 1e-15);
    }
}
