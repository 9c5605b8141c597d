//! Supports: the interval a density lives on, plus its interior zeros.

use crate::{Error, Result};

/// A real interval, possibly unbounded, together with the points strictly
/// inside it where a density vanishes.
///
/// The interior zeros matter numerically: quadrature injects them as panel
/// breakpoints, and the divergence layer uses them to decide where relative
/// functionals may blow up.
#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    lower: f64,
    upper: f64,
    interior_zeros: Vec<f64>,
}

impl Support {
    /// Builds a support, validating that `lower < upper` and that the zeros
    /// are strictly increasing, duplicate-free, and strictly inside the
    /// interval.
    pub fn new(lower: f64, upper: f64, interior_zeros: Vec<f64>) -> Result<Self> {
        if !(lower < upper) {
            return Err(Error::InvalidParameter(format!(
                "support requires lower < upper, got [{lower}, {upper}]"
            )));
        }
        for pair in interior_zeros.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidParameter(format!(
                    "interior zeros must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if let (Some(first), Some(last)) = (interior_zeros.first(), interior_zeros.last()) {
            if !(*first > lower && *last < upper) {
                return Err(Error::InvalidParameter(format!(
                    "interior zeros must lie strictly inside ({lower}, {upper})"
                )));
            }
        }
        Ok(Self {
            lower,
            upper,
            interior_zeros,
        })
    }

    /// Support with no interior zeros.
    pub fn plain(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, Vec::new())
    }

    /// The whole real line.
    pub fn real_line(interior_zeros: Vec<f64>) -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY, interior_zeros)
            .expect("real line support is always valid")
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn interior_zeros(&self) -> &[f64] {
        &self.interior_zeros
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    /// Interior zeros restricted to `(lo, hi)`.
    pub fn zeros_within(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.interior_zeros
            .iter()
            .copied()
            .filter(|z| *z > lo && *z < hi)
            .collect()
    }
}
