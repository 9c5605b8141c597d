//! Sinusoidal densities `ρ_n(x) = 2 sin²(π n x)` on `(0, 1)`.
//!
//! These are the stationary-state densities of a particle in a unit box; the
//! quantum number `n` counts the half-wavelengths, so `ρ_n` vanishes at
//! `k/n` for `k = 1..n-1`. Their Fisher information is `4π²n²` and their
//! Shannon entropy is `ln 2 - 1` independently of `n` (the profile is the
//! same, compressed and tiled).

use std::f64::consts::PI;

use super::Density;
use crate::support::Support;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SinusoidalParams {
    /// Quantum number, `n ≥ 1`.
    pub n: u32,
}

#[derive(Debug, Clone)]
pub struct Sinusoidal {
    n: u32,
    support: Support,
    label: String,
}

/// Builds `ρ_n(x) = 2 sin²(π n x)` on `(0, 1)`.
pub fn make_sinusoidal(params: SinusoidalParams) -> Result<Sinusoidal> {
    if params.n < 1 {
        return Err(Error::InvalidParameter(
            "sinusoidal density needs n >= 1".into(),
        ));
    }
    let n = params.n;
    let zeros = (1..n).map(|k| k as f64 / n as f64).collect();
    Ok(Sinusoidal {
        n,
        support: Support::new(0.0, 1.0, zeros)?,
        label: format!("sinusoidal:n={n}"),
    })
}

impl Sinusoidal {
    pub fn n(&self) -> u32 {
        self.n
    }
}

impl Density for Sinusoidal {
    fn support(&self) -> &Support {
        &self.support
    }

    fn log_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < 1.0) {
            return f64::NEG_INFINITY;
        }
        let u = self.n as f64 * x;
        // the zeros k/n are representable only up to rounding; snap so the
        // density is exactly zero at the points its support lists
        if (u - u.round()).abs() <= 1e-12 {
            return f64::NEG_INFINITY;
        }
        let s = (PI * u).sin();
        std::f64::consts::LN_2 + 2.0 * s.abs().ln()
    }

    fn log_pdf_derivative(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < 1.0) {
            return f64::NAN;
        }
        let t = PI * self.n as f64 * x;
        2.0 * PI * self.n as f64 * t.cos() / t.sin()
    }

    fn label(&self) -> &str {
        &self.label
    }
}
