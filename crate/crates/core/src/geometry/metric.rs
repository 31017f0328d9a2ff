use nalgebra::{Matrix4, SymmetricEigen};

use super::form::Frame;
use crate::{Error, Result};

/// A symmetric bilinear form at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricAtPoint {
    frame: Frame,
    g: Matrix4<f64>,
}

/// Leading principal minors and the verdict of Sylvester's criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sylvester {
    pub minors: [f64; 4],
    pub positive: bool,
}

impl MetricAtPoint {
    /// Symmetrizes `g`; fails if it was asymmetric by more than `tol` (relative to its size).
    pub fn new(frame: Frame, g: Matrix4<f64>, tol: f64) -> Result<Self> {
        let scale = g.amax().max(1.0);
        let asym = (g - g.transpose()).amax() / scale;
        if asym > tol {
            return Err(Error::Asymmetric(asym));
        }
        Ok(Self { frame, g: 0.5 * (g + g.transpose()) })
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.g
    }

    pub fn sylvester(&self) -> Sylvester {
        sylvester_positive(self)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.g).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2], ev[3]]
    }

    /// Pullback `J^T g J` with `J[(a, b)] = d x_a / d y_b`.
    pub fn pullback(&self, jacobian: &Matrix4<f64>, new_frame: Frame) -> Self {
        let g = jacobian.transpose() * self.g * jacobian;
        Self { frame: new_frame, g: 0.5 * (g + g.transpose()) }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { frame: self.frame, g: self.g * k }
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        if self.frame != other.frame {
            return Err(Error::frame_mismatch(self.frame, other.frame));
        }
        Ok((self.g - other.g).amax())
    }

    /// `g_ij` for `i >= j`, row by row.
    pub fn lower_triangle(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        let mut k = 0;
        for i in 0..4 {
            for j in 0..=i {
                out[k] = self.g[(i, j)];
                k += 1;
            }
        }
        out
    }
}

pub fn sylvester_positive(g: &MetricAtPoint) -> Sylvester {
    let m = &g.g;
    let minors = [
        m[(0, 0)],
        m.fixed_view::<2, 2>(0, 0).determinant(),
        m.fixed_view::<3, 3>(0, 0).determinant(),
        m.determinant(),
    ];
    Sylvester { minors, positive: minors.iter().all(|&d| d > 0.0) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetry() {
        let mut g = Matrix4::identity();
        g[(0, 1)] = 1e-3;
        assert!(matches!(MetricAtPoint::new(Frame::CT, g, 1e-8), Err(Error::Asymmetric(_))));
    }
}
