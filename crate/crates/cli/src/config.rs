use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use ffhk::gmn::GmnOptions;
use ffhk::scalar_kernels::{HarmonicInvariant, ModelParams, Truncation};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, reason: reason.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub c_modulus_range: [f64; 2],
    pub c_arg_range: [f64; 2],
    pub n_c: usize,
    pub fiber_samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { c_modulus_range: [0.05, 0.45], c_arg_range: [-3.0, 3.0], n_c: 12, fiber_samples: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub target_tol: f64,
    pub angular_margin_delta: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let o = GmnOptions::default();
        Self { target_tol: o.target_tol, angular_margin_delta: o.angular_margin }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationConfig {
    pub series_tol: f64,
    pub max_terms: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        let t = Truncation::default();
        Self { series_tol: t.series_tol, max_terms: t.max_terms }
    }
}

/// Everything a run needs. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "R")]
    pub r: f64,
    pub epsilon: f64,
    /// `(re, im)` of `a_1, a_2, ...` in `f(c) = sum a_k c^k`.
    #[serde(rename = "S_coefficients")]
    pub s_coefficients: Vec<(f64, f64)>,
    pub grid: GridConfig,
    pub quadrature: QuadratureConfig,
    pub truncation: TruncationConfig,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            r: 1.0,
            epsilon: 0.5,
            s_coefficients: Vec::new(),
            grid: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            truncation: TruncationConfig::default(),
            seed: 7,
            output_dir: PathBuf::from("ffhk-out"),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(invalid("R", format!("must be positive, got {}", self.r)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.s_coefficients.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(invalid("S_coefficients", "non-finite entry"));
        }
        let [lo, hi] = self.grid.c_modulus_range;
        if !(lo > 0.0 && lo <= hi && hi < self.epsilon) {
            return Err(invalid("grid.c_modulus_range", format!("need 0 < lo <= hi < epsilon, got [{lo}, {hi}]")));
        }
        let [a, b] = self.grid.c_arg_range;
        if !(a.is_finite() && b.is_finite() && a <= b && b - a <= 2.0 * PI) {
            return Err(invalid("grid.c_arg_range", format!("need a <= b <= a + 2pi, got [{a}, {b}]")));
        }
        if self.grid.n_c == 0 {
            return Err(invalid("grid.n_c", "must be at least 1"));
        }
        if self.grid.fiber_samples == 0 {
            return Err(invalid("grid.fiber_samples", "must be at least 1"));
        }
        if !(self.quadrature.target_tol > 0.0) {
            return Err(invalid("quadrature.target_tol", "must be positive"));
        }
        let m = self.quadrature.angular_margin_delta;
        if !(m > 0.0 && m < PI / 4.0) {
            return Err(invalid("quadrature.angular_margin_delta", format!("must lie in (0, pi/4), got {m}")));
        }
        if !(self.truncation.series_tol > 0.0) {
            return Err(invalid("truncation.series_tol", "must be positive"));
        }
        if self.truncation.max_terms == 0 {
            return Err(invalid("truncation.max_terms", "must be at least 1"));
        }
        Ok(())
    }

    pub fn params(&self) -> ModelParams {
        ModelParams::new(self.r, self.epsilon).expect("validated")
    }

    /// `S = Re f` on the unit disc.
    pub fn invariant(&self) -> HarmonicInvariant {
        HarmonicInvariant::from_pairs(&self.s_coefficients, 1.0).expect("validated")
    }

    pub fn truncation(&self) -> Truncation {
        Truncation { series_tol: self.truncation.series_tol, max_terms: self.truncation.max_terms }
    }

    pub fn gmn_options(&self) -> GmnOptions {
        GmnOptions { angular_margin: self.quadrature.angular_margin_delta, target_tol: self.quadrature.target_tol }
    }
}
