//! Plain Gaussians, used as references and as deBruijn smoothing inputs.

use super::Density;
use crate::support::Support;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Gaussian {
    mean: f64,
    sigma: f64,
    ln_norm: f64,
    support: Support,
    label: String,
}

/// Builds `N(mean, sigma²)`.
pub fn make_gaussian(mean: f64, sigma: f64) -> Result<Gaussian> {
    if !mean.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gaussian needs finite mean and sigma > 0, got mean={mean}, sigma={sigma}"
        )));
    }
    Ok(Gaussian {
        mean,
        sigma,
        ln_norm: (sigma * (2.0 * std::f64::consts::PI).sqrt()).ln(),
        support: Support::real_line(Vec::new()),
        label: format!("gaussian:mean={mean},sigma={sigma}"),
    })
}

impl Gaussian {
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Density for Gaussian {
    fn support(&self) -> &Support {
        &self.support
    }

    fn log_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sigma;
        -0.5 * z * z - self.ln_norm
    }

    fn log_pdf_derivative(&self, x: f64) -> f64 {
        -(x - self.mean) / (self.sigma * self.sigma)
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn integration_window(&self) -> (f64, f64) {
        // exp underflows past |z| ≈ 38.6
        (self.mean - 39.0 * self.sigma, self.mean + 39.0 * self.sigma)
    }
}
