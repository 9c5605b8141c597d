//! The density abstraction and the concrete families built on it.
//!
//! All evaluation happens in the log domain: `H_n²(x) e^{-x²}` underflows
//! catastrophically for n ≳ 40 if computed linearly, and the divergence
//! integrands only ever need `log ρ` and `(log ρ)'`.

use std::sync::Arc;

use crate::support::Support;
use crate::{Error, Result};

mod gamma_like;
mod gaussian;
mod grid;
mod hermite;
pub(crate) mod mixture;
mod sinusoidal;

pub use gamma_like::{make_gamma_like, GammaLike, GammaLikeParams};
pub use gaussian::{make_gaussian, Gaussian};
pub use grid::{load_grid_density, GridDensity};
pub use hermite::{
    hermite_log_abs, hermite_zeros, make_rakhmanov_hermite, HermiteParams, RakhmanovHermite,
};
pub use mixture::{mixture, MixtureDensity};
pub use sinusoidal::{make_sinusoidal, Sinusoidal, SinusoidalParams};

/// A probability density over a real interval, evaluable in the log domain.
///
/// Implementations guarantee:
/// * `exp(log_pdf)` integrates to 1 over the support,
/// * `log_pdf` returns `-inf` exactly at density zeros and outside the
///   support,
/// * `log_pdf_derivative` equals `d/dx log_pdf` wherever `log_pdf` is finite
///   (its value elsewhere is unspecified).
pub trait Density: Send + Sync {
    fn support(&self) -> &Support;

    fn log_pdf(&self, x: f64) -> f64;

    fn log_pdf_derivative(&self, x: f64) -> f64;

    fn label(&self) -> &str;

    fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    /// Finite interval that carries all the support's mass at working
    /// precision. Densities on unbounded supports truncate where
    /// `log_pdf < -745`, past the reach of double-precision `exp`.
    fn integration_window(&self) -> (f64, f64) {
        let s = self.support();
        debug_assert!(
            s.lower().is_finite() && s.upper().is_finite(),
            "densities on unbounded supports must override integration_window"
        );
        (s.lower(), s.upper())
    }

    /// Whether Fisher-based functionals of this density are defined and
    /// numerically trustworthy. The gamma-like family rejects the exponent
    /// range with divergent Fisher information; grid densities reject grids
    /// that do not resolve their zero neighborhoods.
    fn fisher_readiness(&self) -> Result<()> {
        Ok(())
    }
}

/// Shared handle to a density; mixtures and the CLI own components this way.
pub type DensityRef = Arc<dyn Density>;

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates that every weight is non-negative and the sum is 1 within
    /// 1e-12.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(weights))
    }

    /// `n` equal weights.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// log(Σ exp(terms)) with the max factored out; -inf terms drop out.
pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|t| (t - m).exp()).sum();
    m + sum.ln()
}

/// Derivative of `log Σ wᵢ ρᵢ` from per-component `(log wᵢ + log ρᵢ, dᵢ)`
/// pairs, where `dᵢ = (log ρᵢ)'`. Components at their zeros contribute
/// nothing: every family here has zeros of order ≥ 2, so `wᵢ ρᵢ'` vanishes
/// there.
pub(crate) fn mixture_log_derivative(terms: &[(f64, f64)]) -> f64 {
    let m = terms
        .iter()
        .map(|(lw, _)| *lw)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NAN;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for &(lw, d) in terms {
        if lw == f64::NEG_INFINITY {
            continue;
        }
        let w = (lw - m).exp();
        num += w * d;
        den += w;
    }
    num / den
}
