use num_complex::Complex64;

use super::BasePoint;
use crate::{Error, Result};

/// `S = Re f` for a polynomial `f(c) = sum_{k>=1} a_k c^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicInvariant {
    coefficients: Vec<Complex64>,
    radius: f64,
}

/// Value and derivatives of the invariant at one point.
///
/// `s1 - i s2 = f'(c)` and `s11 - i s12 = f''(c)`; `s22 = -s11`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InvariantJet {
    pub s: f64,
    pub s_tilde: f64,
    pub s1: f64,
    pub s2: f64,
    pub s11: f64,
    pub s12: f64,
}

impl HarmonicInvariant {
    /// `coefficients[k]` multiplies `c^(k+1)`.
    pub fn new(coefficients: Vec<Complex64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        if coefficients.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite series coefficient".into()));
        }
        Ok(Self { coefficients, radius })
    }

    pub fn zero(radius: f64) -> Self {
        Self { coefficients: Vec::new(), radius }
    }

    /// `f(c) = a c`, so `S = a c1`.
    pub fn linear(a: f64, radius: f64) -> Self {
        Self { coefficients: vec![Complex64::new(a, 0.0)], radius }
    }

    pub fn from_pairs(pairs: &[(f64, f64)], radius: f64) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect(), radius)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    /// `f + delta * c`, i.e. `S + delta * c1`.
    pub fn add_linear(&self, delta: f64) -> Self {
        let mut coefficients = self.coefficients.clone();
        if coefficients.is_empty() {
            coefficients.push(Complex64::new(0.0, 0.0));
        }
        coefficients[0] += delta;
        Self { coefficients, radius: self.radius }
    }

    /// `(f, f', f'')` by Horner.
    pub fn holomorphic(&self, c: Complex64) -> Result<[Complex64; 3]> {
        let r = c.norm();
        if !(r < self.radius) {
            return Err(Error::Domain(format!("|c| = {r} outside the invariant's disc of radius {}", self.radius)));
        }
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut dp, mut ddp) = (zero, zero, zero);
        // Coefficients of c^K ... c^1, then the vanishing constant term.
        for a in self.coefficients.iter().rev().chain(std::iter::once(&zero)) {
            ddp = ddp * c + dp;
            dp = dp * c + p;
            p = p * c + a;
        }
        Ok([p, dp, 2.0 * ddp])
    }

    pub fn eval(&self, c: Complex64) -> Result<InvariantJet> {
        let [f, df, ddf] = self.holomorphic(c)?;
        Ok(InvariantJet { s: f.re, s_tilde: f.im, s1: df.re, s2: -df.im, s11: ddf.re, s12: -ddf.im })
    }
}

pub fn invariant_eval(s: &HarmonicInvariant, c: &BasePoint) -> Result<InvariantJet> {
    s.eval(c.c())
}

/// Anything that can serve as `S` in the gluing map: a value and a gradient.
pub trait ScalarInvariant: Send + Sync {
    fn value(&self, c1: f64, c2: f64) -> Result<f64>;
    fn gradient(&self, c1: f64, c2: f64) -> Result<(f64, f64)>;
}

impl ScalarInvariant for HarmonicInvariant {
    fn value(&self, c1: f64, c2: f64) -> Result<f64> {
        Ok(self.eval(Complex64::new(c1, c2))?.s)
    }

    fn gradient(&self, c1: f64, c2: f64) -> Result<(f64, f64)> {
        let j = self.eval(Complex64::new(c1, c2))?;
        Ok((j.s1, j.s2))
    }
}

/// An arbitrary smooth `S(c1, c2)` given as a closure; derivatives by central differences.
///
/// Only meant for exercising the harmonicity gate of the gluing map.
pub struct RawInvariant {
    field: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    step: f64,
}

impl RawInvariant {
    pub fn new(field: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { field: Box::new(field), step: 1e-5 }
    }
}

impl std::fmt::Debug for RawInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RawInvariant").field("step", &self.step).finish_non_exhaustive()
    }
}

impl ScalarInvariant for RawInvariant {
    fn value(&self, c1: f64, c2: f64) -> Result<f64> {
        Ok((self.field)(c1, c2))
    }

    fn gradient(&self, c1: f64, c2: f64) -> Result<(f64, f64)> {
        let h = self.step;
        let f = &self.field;
        let d1 = (f(c1 + h, c2) - f(c1 - h, c2)) / (2.0 * h);
        let d2 = (f(c1, c2 + h) - f(c1, c2 - h)) / (2.0 * h);
        Ok((d1, d2))
    }
}
