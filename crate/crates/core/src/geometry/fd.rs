use nalgebra::{Matrix4, SMatrix};
use num_complex::Complex64;

use super::form::{subsets, FormAtPoint};
use crate::{Error, Result};

/// Central-difference settings. Richardson combines steps `h` and `h/2` for O(h^4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    pub h: f64,
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self { h: 1e-4, richardson: false }
    }
}

impl FdOptions {
    pub fn richardson(h: f64) -> Self {
        Self { h, richardson: true }
    }

    fn check(&self) -> Result<()> {
        if self.h > 0.0 && self.h.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("finite-difference step {}", self.h)))
        }
    }
}

fn shifted(x: &[f64; 4], axis: usize, d: f64) -> [f64; 4] {
    let mut y = *x;
    y[axis] += d;
    y
}

fn central<T, F>(f: &F, x: &[f64; 4], axis: usize, h: f64) -> Result<Vec<T>>
where
    F: Fn(&[f64; 4]) -> Result<Vec<T>>,
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let p = f(&shifted(x, axis, h))?;
    let m = f(&shifted(x, axis, -h))?;
    Ok(p.iter().zip(&m).map(|(&a, &b)| (a - b) * (0.5 / h)).collect())
}

/// Partial derivative along `axis` of every output component.
pub fn partial<T, F>(f: &F, x: &[f64; 4], axis: usize, opts: FdOptions) -> Result<Vec<T>>
where
    F: Fn(&[f64; 4]) -> Result<Vec<T>>,
    T: Copy + std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    opts.check()?;
    let coarse = central(f, x, axis, opts.h)?;
    if !opts.richardson {
        return Ok(coarse);
    }
    let fine = central(f, x, axis, 0.5 * opts.h)?;
    Ok(fine.iter().zip(&coarse).map(|(&a, &b)| a * (4.0 / 3.0) - b * (1.0 / 3.0)).collect())
}

/// Jacobian `J[(a, b)] = d f_a / d x_b` of a map from four real coordinates.
pub fn jacobian_fd<const N: usize, F>(f: F, x: &[f64; 4], opts: FdOptions) -> Result<SMatrix<f64, N, 4>>
where
    F: Fn(&[f64; 4]) -> Result<[f64; N]>,
{
    let g = |y: &[f64; 4]| f(y).map(|v| v.to_vec());
    let mut j = SMatrix::<f64, N, 4>::zeros();
    for b in 0..4 {
        let col = partial(&g, x, b, opts)?;
        for a in 0..N {
            j[(a, b)] = col[a];
        }
    }
    Ok(j)
}

/// 4x4 Jacobian of a coordinate change, ready for [`FormAtPoint::pullback`].
pub fn coordinate_jacobian_fd<F>(f: F, x: &[f64; 4], opts: FdOptions) -> Result<Matrix4<f64>>
where
    F: Fn(&[f64; 4]) -> Result<[f64; 4]>,
{
    jacobian_fd::<4, _>(f, x, opts)
}

/// Exterior derivative of a form-valued field by central differences.
///
/// `(d a)_I = sum_{j in I} (-1)^{pos(j)} d_j a_{I \ j}`.
pub fn exterior_derivative_fd<F>(field: F, at: &[f64; 4], opts: FdOptions) -> Result<FormAtPoint>
where
    F: Fn(&[f64; 4]) -> Result<FormAtPoint>,
{
    let base = field(at)?;
    let k = base.degree();
    let frame = base.frame();
    let mut out = FormAtPoint::zero(k + 1, frame)?;
    let comps = |y: &[f64; 4]| -> Result<Vec<Complex64>> {
        let f = field(y)?;
        if f.frame() != frame {
            return Err(Error::frame_mismatch(f.frame(), frame));
        }
        Ok(f.components().to_vec())
    };
    let derivs: Vec<Vec<Complex64>> = (0..4).map(|axis| partial(&comps, at, axis, opts)).collect::<Result<_>>()?;
    for target in subsets(k + 1) {
        let mut acc = Complex64::new(0.0, 0.0);
        for (pos, &j) in target.iter().enumerate() {
            let rest: Vec<usize> = target.iter().copied().filter(|&i| i != j).collect();
            let idx = subsets(k).iter().position(|s| *s == rest.as_slice()).expect("subset");
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            acc += derivs[j][idx] * sign;
        }
        out.set(target, acc);
    }
    Ok(out)
}

/// Five-point Laplacian of a function of two variables.
pub fn laplacian_2d<F>(f: F, x: f64, y: f64, opts: FdOptions) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    opts.check()?;
    let stencil = |h: f64| -> Result<f64> {
        Ok((f(x + h, y)? + f(x - h, y)? + f(x, y + h)? + f(x, y - h)? - 4.0 * f(x, y)?) / (h * h))
    };
    let coarse = stencil(opts.h)?;
    if !opts.richardson {
        return Ok(coarse);
    }
    Ok((4.0 * stencil(0.5 * opts.h)? - coarse) / 3.0)
}

/// Seven-point Laplacian in three variables.
pub fn laplacian_3d<F>(f: F, x: [f64; 3], opts: FdOptions) -> Result<f64>
where
    F: Fn([f64; 3]) -> Result<f64>,
{
    opts.check()?;
    let stencil = |h: f64| -> Result<f64> {
        let mut acc = -6.0 * f(x)?;
        for axis in 0..3 {
            for d in [h, -h] {
                let mut y = x;
                y[axis] += d;
                acc += f(y)?;
            }
        }
        Ok(acc / (h * h))
    };
    let coarse = stencil(opts.h)?;
    if !opts.richardson {
        return Ok(coarse);
    }
    Ok((4.0 * stencil(0.5 * opts.h)? - coarse) / 3.0)
}

/// Hessian of a scalar function of four variables.
pub fn hessian_fd<F>(f: F, x: &[f64; 4], h: f64) -> Result<Matrix4<f64>>
where
    F: Fn(&[f64; 4]) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h}")));
    }
    let mut hess = Matrix4::zeros();
    let f0 = f(x)?;
    for i in 0..4 {
        let fp = f(&shifted(x, i, h))?;
        let fm = f(&shifted(x, i, -h))?;
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in (i + 1)..4 {
            let pp = f(&shifted(&shifted(x, i, h), j, h))?;
            let pm = f(&shifted(&shifted(x, i, h), j, -h))?;
            let mp = f(&shifted(&shifted(x, i, -h), j, h))?;
            let mm = f(&shifted(&shifted(x, i, -h), j, -h))?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok(hess)
}

/// The constant form `a` viewed as a field.
pub fn constant_field(a: FormAtPoint) -> impl Fn(&[f64; 4]) -> Result<FormAtPoint> {
    move |_| Ok(a.clone())
}
