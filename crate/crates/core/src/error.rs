use thiserror::Error;

use crate::geometry::Frame;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("degenerate period lattice (S1 - ln|c| = {0})")]
    DegenerateLattice(f64),
    #[error("frame mismatch: {0} vs {1}")]
    FrameMismatch(String, String),
    #[error("form degree {0} exceeds the dimension")]
    DegreeOverflow(usize),
    #[error("not a hyperkahler triple at this point (|J^2 + Id| = {0:.3e})")]
    NotHyperkahler(f64),
    #[error("metric is asymmetric by {0:.3e}")]
    Asymmetric(f64),
    #[error("singular coefficient matrix: {0}")]
    SingularMatrix(String),
    #[error("potential is not positive (V = {0})")]
    PositivityViolation(f64),
    #[error("metric is not positive definite, leading minors {0:?}")]
    NotPositiveDefinite([f64; 4]),
    #[error("zeta lies {0:.3e} rad from an integration contour")]
    ContourTooClose(f64),
    #[error("integrand does not decay along the contour")]
    DivergentContour,
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("series did not converge within {0} terms")]
    SeriesNonConvergence(usize),
    #[error("Laurent fit residual {0:.3e} exceeds tolerance")]
    LaurentFit(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn frame_mismatch(a: Frame, b: Frame) -> Self {
        Error::FrameMismatch(a.to_string(), b.to_string())
    }

    /// Quadrature or series failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature(_) | Error::SeriesNonConvergence(_) | Error::LaurentFit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
