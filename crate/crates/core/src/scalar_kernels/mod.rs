//! Special functions, the semi-global invariant and the regularized lattice sum.

mod bessel;
mod invariant;
mod theta_sum;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

pub use bessel::{bessel_k0, bessel_k0_k1, bessel_k1, EULER_GAMMA};
pub use invariant::{invariant_eval, HarmonicInvariant, InvariantJet, RawInvariant, ScalarInvariant};
pub use theta_sum::regularized_theta_sum;

/// Branch of `arg c`. The principal chart uses `(-pi, pi]`, the shifted one `(0, 2pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chart {
    #[default]
    Principal,
    Shifted,
}

/// A point `c = c1 + i c2` of the base disc together with a branch choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasePoint {
    pub c1: f64,
    pub c2: f64,
    pub chart: Chart,
}

impl BasePoint {
    pub fn new(c1: f64, c2: f64) -> Self {
        Self { c1, c2, chart: Chart::Principal }
    }

    pub fn with_chart(c1: f64, c2: f64, chart: Chart) -> Self {
        Self { c1, c2, chart }
    }

    pub fn from_complex(c: Complex64, chart: Chart) -> Self {
        Self { c1: c.re, c2: c.im, chart }
    }

    pub fn polar(modulus: f64, arg: f64) -> Self {
        Self::new(modulus * arg.cos(), modulus * arg.sin())
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(self.c1, self.c2)
    }

    pub fn modulus(&self) -> f64 {
        self.c1.hypot(self.c2)
    }

    /// `arg c` on this point's chart. The cut itself belongs to the half-open interval.
    pub fn arg(&self) -> f64 {
        let a = self.c2.atan2(self.c1);
        match self.chart {
            Chart::Principal => {
                if a == -PI {
                    PI
                } else {
                    a
                }
            }
            Chart::Shifted => {
                if a <= 0.0 {
                    a + 2.0 * PI
                } else {
                    a
                }
            }
        }
    }

    /// `ln c` on this point's chart.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.modulus().ln(), self.arg())
    }

    /// Same point moved by `(d1, d2)`, keeping the chart.
    pub fn offset(&self, d1: f64, d2: f64) -> Self {
        Self { c1: self.c1 + d1, c2: self.c2 + d2, chart: self.chart }
    }

    pub(crate) fn require_regular(&self, epsilon: f64) -> Result<()> {
        let r = self.modulus();
        if r == 0.0 {
            return Err(Error::Domain("c = 0".into()));
        }
        if !(r < epsilon) {
            return Err(Error::Domain(format!("|c| = {r} is not below epsilon = {epsilon}")));
        }
        Ok(())
    }
}

/// The semi-flat scale `R` and the base disc radius `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub r: f64,
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(r: f64, epsilon: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("R must be positive, got {r}")));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { r, epsilon })
    }

    /// `R` with the default disc radius 0.5.
    pub fn with_r(r: f64) -> Result<Self> {
        Self::new(r, 0.5)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { r: 1.0, epsilon: 0.5 }
    }
}

/// Stopping rule for the exponentially convergent Bessel series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Stop once a term falls below this (after at least five terms).
    pub series_tol: f64,
    pub max_terms: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { series_tol: 1e-16, max_terms: 100_000 }
    }
}

impl Truncation {
    pub const MIN_TERMS: usize = 5;
}
