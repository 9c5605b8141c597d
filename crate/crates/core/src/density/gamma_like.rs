//! Generalized gamma-like densities `γ_β(x) ∝ |x|^β exp(-x²/2)` on the real
//! line.
//!
//! The normalization constant is `√2 · 2^{β/2} · Γ((1+β)/2)`. For `β = 0`
//! this is the standard normal; for `β > 0` the density has a single zero of
//! multiplicity `β` at the origin. The Fisher information is finite only for
//! `β = 0` or `β > 1`: it equals `(2β-1)/(β-1)`, with a vertical asymptote at
//! `β = 1`, and is undefined on `0 < β ≤ 1`.

use statrs::function::gamma::ln_gamma;

use super::Density;
use crate::support::Support;
use crate::{Error, Result};

/// Margin above the `β = 1` asymptote below which Fisher-based functionals
/// are rejected rather than evaluated to huge, meaningless numbers.
const BETA_FISHER_FLOOR: f64 = 1.0 + 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLikeParams {
    /// Zero-multiplicity exponent, `β ≥ 0`.
    pub beta: f64,
}

#[derive(Debug, Clone)]
pub struct GammaLike {
    beta: f64,
    ln_norm: f64,
    support: Support,
    window: (f64, f64),
    label: String,
}

/// Builds `γ_β`. Any `β ≥ 0` is accepted; Shannon-based functionals work on
/// the whole range, Fisher-based ones reject `0 < β ≤ 1` (see
/// [`Density::fisher_readiness`]).
pub fn make_gamma_like(params: GammaLikeParams) -> Result<GammaLike> {
    let beta = params.beta;
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma-like density needs beta >= 0, got {beta}"
        )));
    }
    let ln_norm = 0.5 * std::f64::consts::LN_2
        + 0.5 * beta * std::f64::consts::LN_2
        + ln_gamma((1.0 + beta) / 2.0);
    let zeros = if beta > 0.0 { vec![0.0] } else { Vec::new() };
    // Truncate where log_pdf = -745: x² = 2(745 + β ln x - ln Z). A few
    // fixed-point rounds converge for every β in range.
    let mut edge: f64 = 40.0;
    for _ in 0..32 {
        edge = (2.0 * (745.0 + beta * edge.ln() - ln_norm)).sqrt();
    }
    edge += 1.0;
    Ok(GammaLike {
        beta,
        ln_norm,
        support: Support::real_line(zeros),
        window: (-edge, edge),
        label: format!("gamma:beta={beta}"),
    })
}

impl GammaLike {
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Density for GammaLike {
    fn support(&self) -> &Support {
        &self.support
    }

    fn log_pdf(&self, x: f64) -> f64 {
        if self.beta == 0.0 {
            return -0.5 * x * x - self.ln_norm;
        }
        if x == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.beta * x.abs().ln() - 0.5 * x * x - self.ln_norm
    }

    fn log_pdf_derivative(&self, x: f64) -> f64 {
        if self.beta == 0.0 {
            -x
        } else {
            self.beta / x - x
        }
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn integration_window(&self) -> (f64, f64) {
        self.window
    }

    fn fisher_readiness(&self) -> Result<()> {
        if self.beta > 0.0 && self.beta <= BETA_FISHER_FLOOR {
            return Err(Error::InvalidParameter(format!(
                "Fisher information of gamma:beta={} is undefined: divergent for 0 < beta <= 1 \
                 with a vertical asymptote at beta = 1",
                self.beta
            )));
        }
        Ok(())
    }
}
