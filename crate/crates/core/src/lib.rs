//! Divergence measures for one-dimensional probability densities.
//!
//! The crate centers on two Jensen-type divergences:
//!
//! * the Jensen-Shannon divergence `JSD[p, q] = S[(p+q)/2] - (S[p]+S[q])/2`,
//!   built from the Shannon entropy `S[p] = -∫ p ln p`, and
//! * the Jensen-Fisher divergence `JFD[p, q] = (F[p]+F[q])/2 - F[(p+q)/2]`,
//!   built from the Fisher information `F[p] = ∫ p (d/dx ln p)²`.
//!
//! JSD reacts to where probability mass sits; JFD reacts to how the density
//! oscillates, because the Fisher information is a gradient functional. The
//! library also provides the Kullback-Leibler divergence, the relative Fisher
//! information and its symmetrization, the directed divergence against the
//! equal-weight mixture (which stays finite at non-common zeros), weighted
//! N-density generalizations, and numerical checks of the deBruijn identities
//! that connect entropy/JSD slopes under Gaussian smoothing to Fisher
//! quantities.
//!
//! Everything is evaluated in the log domain on top of an adaptive
//! Gauss-Kronrod engine ([`quadrature`]) that treats density zeros as panel
//! breakpoints and classifies non-integrable singularities as divergent
//! instead of returning garbage.
//!
//! ```
//! use jenfi::density::{make_sinusoidal, SinusoidalParams};
//! use jenfi::divergence::{jfd, jsd};
//! use jenfi::quadrature::QuadConfig;
//!
//! let ground = make_sinusoidal(SinusoidalParams { n: 1 }).unwrap();
//! let excited = make_sinusoidal(SinusoidalParams { n: 7 }).unwrap();
//! let cfg = QuadConfig::default();
//! let shannon = jsd(&ground, &excited, &cfg).unwrap();
//! let fisher = jfd(&ground, &excited, &cfg).unwrap();
//! assert!(fisher.value > 100.0 * shannon.value);
//! ```

use thiserror::Error;

pub mod density;
pub mod divergence;
pub mod experiments;
pub mod quadrature;
pub mod support;

pub use density::{Density, DensityRef, WeightVector};
pub use divergence::{DivergenceReport, DivergenceStatus};
pub use quadrature::{QuadConfig, QuadResult, QuadStatus};
pub use support::Support;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} densities but {1} weights")]
    LengthMismatch(usize, usize),

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error_estimate:e}) while computing {context}")]
    NotConverged {
        context: String,
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("negative density value {value} at x = {x}")]
    NegativeDensity { x: f64, value: f64 },

    #[error("grid abscissae not strictly increasing at index {0}")]
    UnsortedAbscissae(usize),

    #[error("grid needs at least 4 points, got {0}")]
    TooFewPoints(usize),

    #[error("grid integrates to {0}, more than 1% away from 1 (pass renormalize to rescale)")]
    NotNormalized(f64),

    #[error("grid file line {line}: {message}")]
    GridParse { line: usize, message: String },

    #[error("grid too coarse for Fisher-based functionals: {0}")]
    GridTooCoarse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
