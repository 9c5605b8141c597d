//! Weighted mixtures, evaluated by log-sum-exp.

use super::{log_sum_exp, mixture_log_derivative, Density, DensityRef, WeightVector};
use crate::support::Support;
use crate::{Error, Result};

/// Two interior zeros closer than this count as the same point when
/// intersecting component zero sets.
const ZERO_MATCH_TOL: f64 = 1e-9;

/// A handle that can stand in as a mixture component: shared ownership for
/// library users, plain borrows for the short-lived mixtures the divergence
/// layer builds internally.
pub trait MixPart: Send + Sync {
    fn density(&self) -> &dyn Density;
}

impl MixPart for DensityRef {
    fn density(&self) -> &dyn Density {
        &**self
    }
}

impl<'a> MixPart for &'a dyn Density {
    fn density(&self) -> &dyn Density {
        *self
    }
}

impl<P: MixPart> std::fmt::Debug for MixtureDensity<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MixtureDensity")
            .field("label", &self.label)
            .field("weights", &self.weights)
            .finish_non_exhaustive()
    }
}

/// A pointwise weighted sum of densities.
pub struct MixtureDensity<P: MixPart = DensityRef> {
    parts: Vec<P>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
    support: Support,
    window: (f64, f64),
    label: String,
}

/// Builds the mixture `Σ wᵢ ρᵢ`. The support is the union of the component
/// supports; the interior zeros are the common zeros of all components with
/// nonzero weight (a mixture vanishes only where every contributing part
/// does).
pub fn mixture(densities: Vec<DensityRef>, weights: &WeightVector) -> Result<MixtureDensity> {
    MixtureDensity::from_parts(densities, weights)
}

pub(crate) fn borrowed_pair<'a>(
    a: &'a dyn Density,
    b: &'a dyn Density,
) -> MixtureDensity<&'a dyn Density> {
    MixtureDensity::from_parts(vec![a, b], &WeightVector::uniform(2))
        .expect("two densities with equal weights always form a valid mixture")
}

pub(crate) fn borrowed_weighted<'a>(
    parts: &[&'a dyn Density],
    weights: &WeightVector,
) -> Result<MixtureDensity<&'a dyn Density>> {
    MixtureDensity::from_parts(parts.to_vec(), weights)
}

impl<P: MixPart> MixtureDensity<P> {
    pub fn from_parts(parts: Vec<P>, weights: &WeightVector) -> Result<Self> {
        if parts.len() != weights.len() {
            return Err(Error::LengthMismatch(parts.len(), weights.len()));
        }
        if parts.is_empty() {
            return Err(Error::InvalidParameter("empty mixture".into()));
        }
        let weights = weights.as_slice().to_vec();

        let active: Vec<&dyn Density> = parts
            .iter()
            .zip(&weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(p, _)| p.density())
            .collect();
        if active.is_empty() {
            return Err(Error::InvalidParameter(
                "mixture needs at least one positive weight".into(),
            ));
        }

        let lower = active
            .iter()
            .map(|p| p.support().lower())
            .fold(f64::INFINITY, f64::min);
        let upper = active
            .iter()
            .map(|p| p.support().upper())
            .fold(f64::NEG_INFINITY, f64::max);

        // common zeros: a zero of the first active part that every other
        // active part also lists
        let mut zeros = Vec::new();
        'candidates: for &z in active[0].support().interior_zeros() {
            for other in &active[1..] {
                let found = other
                    .support()
                    .interior_zeros()
                    .iter()
                    .any(|oz| (oz - z).abs() <= ZERO_MATCH_TOL);
                if !found {
                    continue 'candidates;
                }
            }
            zeros.push(z);
        }

        let win_lo = active
            .iter()
            .map(|p| p.integration_window().0)
            .fold(f64::INFINITY, f64::min);
        let win_hi = active
            .iter()
            .map(|p| p.integration_window().1)
            .fold(f64::NEG_INFINITY, f64::max);

        let label = {
            let body: Vec<String> = parts
                .iter()
                .zip(&weights)
                .map(|(p, w)| format!("{}*{}", w, p.density().label()))
                .collect();
            format!("mix[{}]", body.join("+"))
        };

        let log_weights = weights
            .iter()
            .map(|w| if *w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
            .collect();

        Ok(Self {
            parts,
            weights,
            log_weights,
            support: Support::new(lower, upper, zeros)?,
            window: (win_lo, win_hi),
            label,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl<P: MixPart> Density for MixtureDensity<P> {
    fn support(&self) -> &Support {
        &self.support
    }

    fn log_pdf(&self, x: f64) -> f64 {
        let terms: Vec<f64> = self
            .parts
            .iter()
            .zip(&self.log_weights)
            .filter(|(_, lw)| **lw != f64::NEG_INFINITY)
            .map(|(p, lw)| lw + p.density().log_pdf(x))
            .collect();
        log_sum_exp(&terms)
    }

    fn log_pdf_derivative(&self, x: f64) -> f64 {
        let terms: Vec<(f64, f64)> = self
            .parts
            .iter()
            .zip(&self.log_weights)
            .filter(|(_, lw)| **lw != f64::NEG_INFINITY)
            .map(|(p, lw)| {
                let p = p.density();
                let l = lw + p.log_pdf(x);
                let d = if l == f64::NEG_INFINITY {
                    0.0
                } else {
                    p.log_pdf_derivative(x)
                };
                (l, d)
            })
            .collect();
        mixture_log_derivative(&terms)
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn integration_window(&self) -> (f64, f64) {
        self.window
    }

    fn fisher_readiness(&self) -> Result<()> {
        for (p, w) in self.parts.iter().zip(&self.weights) {
            if *w > 0.0 {
                p.density().fisher_readiness()?;
            }
        }
        Ok(())
    }
}
