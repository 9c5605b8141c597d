//! Entropy- and Fisher-based functionals and divergences.
//!
//! Divergent is a first-class outcome here, not an error: the relative
//! Fisher information and the Fisher divergence G are genuinely undefined
//! between densities with non-common zeros, and reporting that honestly is
//! half the point. Only a quadrature that fails to settle (`NotConverged`)
//! surfaces as an [`Error`].

mod debruijn;

pub use debruijn::{
    classic_debruijn_check, debruijn_check, gaussian_smooth, DebruijnReport, SmoothingParam,
};

use crate::density::mixture::{borrowed_pair, borrowed_weighted};
use crate::density::{Density, WeightVector};
use crate::quadrature::{
    fisher_integrand, integrate, relative_fisher_integrand, QuadConfig, QuadResult, QuadStatus,
};
use crate::{Error, Result};

/// Which formula produced a Jensen-Fisher value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComputePath {
    /// Direct evaluation of the defining integrals.
    DefinitionForm,
    /// The Fisher-functional combination `(F[p]+F[q])/2 - F[(p+q)/2]`.
    FunctionalForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceStatus {
    Finite,
    Divergent,
}

/// A divergence (or information functional) value with its numerical error
/// estimate and the computation path used.
#[derive(Debug, Clone)]
pub struct DivergenceReport {
    /// `+inf` when divergent.
    pub value: f64,
    pub error_estimate: f64,
    pub path: ComputePath,
    pub status: DivergenceStatus,
}

impl DivergenceReport {
    fn finite(value: f64, error_estimate: f64, path: ComputePath) -> Self {
        Self {
            value,
            error_estimate,
            path,
            status: DivergenceStatus::Finite,
        }
    }

    fn divergent(path: ComputePath) -> Self {
        Self {
            value: f64::INFINITY,
            error_estimate: f64::INFINITY,
            path,
            status: DivergenceStatus::Divergent,
        }
    }

    pub fn is_divergent(&self) -> bool {
        self.status == DivergenceStatus::Divergent
    }
}

/// Entropy integrand guard: below this log-pdf the contribution of
/// `-ρ ln ρ` is under 1e-300 and the limit at a zero is 0.
const ENTROPY_LOG_GUARD: f64 = -700.0;

fn not_converged(context: &str, q: &QuadResult) -> Error {
    Error::NotConverged {
        context: context.to_string(),
        subdivisions: q.subdivisions,
        error_estimate: q.error_estimate,
    }
}

/// Converged → value/error; Divergent and NotConverged → error. For
/// functionals that cannot legitimately diverge.
fn expect_finite(context: &str, q: QuadResult) -> Result<(f64, f64)> {
    match q.status {
        QuadStatus::Converged => Ok((q.value, q.error_estimate)),
        _ => Err(not_converged(context, &q)),
    }
}

fn zeros_of_within(d: &dyn Density, lo: f64, hi: f64) -> Vec<f64> {
    d.support().zeros_within(lo, hi)
}

/// Entropy integral `-∫ ρ ln ρ` as a raw quadrature result, with optional
/// extra breakpoints (mixture components' zeros).
fn entropy_quad(rho: &dyn Density, extra_breaks: &[f64], cfg: &QuadConfig) -> QuadResult {
    let window = rho.integration_window();
    let mut breaks = zeros_of_within(rho, window.0, window.1);
    breaks.extend_from_slice(extra_breaks);
    integrate(
        |x| {
            let l = rho.log_pdf(x);
            if l <= ENTROPY_LOG_GUARD {
                0.0
            } else {
                -l.exp() * l
            }
        },
        window,
        &breaks,
        cfg,
    )
}

fn fisher_quad(rho: &dyn Density, extra_breaks: &[f64], cfg: &QuadConfig) -> QuadResult {
    let window = rho.integration_window();
    let mut breaks = zeros_of_within(rho, window.0, window.1);
    breaks.extend_from_slice(extra_breaks);
    integrate(fisher_integrand(rho), window, &breaks, cfg)
}

/// Shannon entropy `S[ρ] = -∫ ρ ln ρ`.
pub fn shannon_entropy(rho: &dyn Density, cfg: &QuadConfig) -> Result<DivergenceReport> {
    let q = entropy_quad(rho, &[], cfg);
    let (v, e) = expect_finite(&format!("S[{}]", rho.label()), q)?;
    Ok(DivergenceReport::finite(v, e, ComputePath::DefinitionForm))
}

/// Fisher information `F[ρ] = ∫ ρ (d/dx ln ρ)²`, with the density's zeros as
/// quadrature breakpoints. Divergent when the integral does not exist (for
/// example gamma-like densities reject 0 < β ≤ 1 outright).
pub fn fisher_information(rho: &dyn Density, cfg: &QuadConfig) -> Result<DivergenceReport> {
    rho.fisher_readiness()?;
    let q = fisher_quad(rho, &[], cfg);
    match q.status {
        QuadStatus::Converged => Ok(DivergenceReport::finite(
            q.value,
            q.error_estimate,
            ComputePath::DefinitionForm,
        )),
        QuadStatus::Divergent => Ok(DivergenceReport::divergent(ComputePath::DefinitionForm)),
        QuadStatus::NotConverged => Err(not_converged(&format!("F[{}]", rho.label()), &q)),
    }
}

/// Kullback-Leibler divergence `KL[ρ₁, ρ₂] = ∫ ρ₁ ln(ρ₁/ρ₂)`. Divergent when
/// `ρ₂` vanishes where `ρ₁` carries mass (beyond an integrable log
/// singularity).
pub fn kl_divergence(
    rho1: &dyn Density,
    rho2: &dyn Density,
    cfg: &QuadConfig,
) -> Result<DivergenceReport> {
    let window = rho1.integration_window();
    let mut breaks = zeros_of_within(rho1, window.0, window.1);
    breaks.extend(zeros_of_within(rho2, window.0, window.1));
    let q = integrate(
        |x| {
            let l1 = rho1.log_pdf(x);
            if l1 <= ENTROPY_LOG_GUARD {
                return 0.0;
            }
            let l2 = rho2.log_pdf(x);
            if l2 == f64::NEG_INFINITY {
                return f64::INFINITY;
            }
            l1.exp() * (l1 - l2)
        },
        window,
        &breaks,
        cfg,
    );
    match q.status {
        QuadStatus::Converged => Ok(DivergenceReport::finite(
            q.value,
            q.error_estimate,
            ComputePath::DefinitionForm,
        )),
        QuadStatus::Divergent => Ok(DivergenceReport::divergent(ComputePath::DefinitionForm)),
        QuadStatus::NotConverged => Err(not_converged(
            &format!("KL[{}, {}]", rho1.label(), rho2.label()),
            &q,
        )),
    }
}

/// Relative Fisher information `F_rel[ρ₁, ρ₂] = ∫ ρ₁ (d/dx ln(ρ₁/ρ₂))²`.
/// Divergent at non-common zeros.
pub fn relative_fisher(
    rho1: &dyn Density,
    rho2: &dyn Density,
    cfg: &QuadConfig,
) -> Result<DivergenceReport> {
    rho1.fisher_readiness()?;
    rho2.fisher_readiness()?;
    let window = rho1.integration_window();
    let mut breaks = zeros_of_within(rho1, window.0, window.1);
    breaks.extend(zeros_of_within(rho2, window.0, window.1));
    let q = integrate(relative_fisher_integrand(rho1, rho2), window, &breaks, cfg);
    match q.status {
        QuadStatus::Converged => Ok(DivergenceReport::finite(
            q.value,
            q.error_estimate,
            ComputePath::DefinitionForm,
        )),
        QuadStatus::Divergent => Ok(DivergenceReport::divergent(ComputePath::DefinitionForm)),
        QuadStatus::NotConverged => Err(not_converged(
            &format!("F_rel[{}, {}]", rho1.label(), rho2.label()),
            &q,
        )),
    }
}

/// Fisher divergence `G[ρ₁, ρ₂] = F_rel[ρ₁,ρ₂] + F_rel[ρ₂,ρ₁]`: the
/// symmetrization that is undefined unless the densities are mutually
/// absolutely continuous. It exists to demonstrate the defect the
/// Jensen-Fisher divergence fixes.
pub fn fisher_divergence_g(
    rho1: &dyn Density,
    rho2: &dyn Density,
    cfg: &QuadConfig,
) -> Result<DivergenceReport> {
    let a = relative_fisher(rho1, rho2, cfg)?;
    if a.is_divergent() {
        return Ok(DivergenceReport::divergent(ComputePath::DefinitionForm));
    }
    let b = relative_fisher(rho2, rho1, cfg)?;
    if b.is_divergent() {
        return Ok(DivergenceReport::divergent(ComputePath::DefinitionForm));
    }
    Ok(DivergenceReport::finite(
        a.value + b.value,
        a.error_estimate.hypot(b.error_estimate),
        ComputePath::DefinitionForm,
    ))
}

/// Directed divergence against the equal-weight mixture,
/// `F̄_rel[ρ₁, ρ₂] = F_rel[ρ₁, (ρ₁+ρ₂)/2]`. Finite even at non-common zeros,
/// as long as each input's own Fisher information exists.
pub fn directed_jfd(
    rho1: &dyn Density,
    rho2: &dyn Density,
    cfg: &QuadConfig,
) -> Result<DivergenceReport> {
    rho1.fisher_readiness()?;
    rho2.fisher_readiness()?;
    let mix = borrowed_pair(rho1, rho2);
    let window = rho1.integration_window();
    let mut breaks = zeros_of_within(rho1, window.0, window.1);
    breaks.extend(zeros_of_within(rho2, window.0, window.1));
    let q = integrate(relative_fisher_integrand(rho1, &mix), window, &breaks, cfg);
    match q.status {
        QuadStatus::Converged => Ok(DivergenceReport::finite(
            q.value,
            q.error_estimate,
            ComputePath::DefinitionForm,
        )),
        QuadStatus::Divergent => Ok(DivergenceReport::divergent(ComputePath::DefinitionForm)),
        QuadStatus::NotConverged => Err(not_converged(
            &format!("F̄_rel[{}, {}]", rho1.label(), rho2.label()),
            &q,
        )),
    }
}

/// Jensen-Shannon divergence `S[(ρ₁+ρ₂)/2] - (S[ρ₁]+S[ρ₂])/2`; always finite
/// and bounded by ln 2.
pub fn jsd(rho1: &dyn Density, rho2: &dyn Density, cfg: &QuadConfig) -> Result<DivergenceReport> {
    let mix = borrowed_pair(rho1, rho2);
    let window = mix.integration_window();
    let mut component_zeros = zeros_of_within(rho1, window.0, window.1);
    component_zeros.extend(zeros_of_within(rho2, window.0, window.1));

    let (sm, em) = expect_finite(
        &format!("S[mix({}, {})]", rho1.label(), rho2.label()),
        entropy_quad(&mix, &component_zeros, cfg),
    )?;
    let (s1, e1) = expect_finite(&format!("S[{}]", rho1.label()), entropy_quad(rho1, &[], cfg))?;
    let (s2, e2) = expect_finite(&format!("S[{}]", rho2.label()), entropy_quad(rho2, &[], cfg))?;

    Ok(DivergenceReport::finite(
        sm - 0.5 * (s1 + s2),
        (em * em + 0.25 * (e1 * e1 + e2 * e2)).sqrt(),
        ComputePath::DefinitionForm,
    ))
}

/// Jensen-Fisher divergence in its Fisher-functional form,
/// `(F[ρ₁]+F[ρ₂])/2 - F[(ρ₁+ρ₂)/2]`. This is the normative path; see
/// [`jfd_via_directed`] for the definition-form cross-check. Non-negative by
/// convexity of the Fisher information.
pub fn jfd(rho1: &dyn Density, rho2: &dyn Density, cfg: &QuadConfig) -> Result<DivergenceReport> {
    rho1.fisher_readiness()?;
    rho2.fisher_readiness()?;
    let mix = borrowed_pair(rho1, rho2);
    let window = mix.integration_window();
    let mut component_zeros = zeros_of_within(rho1, window.0, window.1);
    component_zeros.extend(zeros_of_within(rho2, window.0, window.1));

    let f1 = fisher_quad(rho1, &[], cfg);
    let f2 = fisher_quad(rho2, &[], cfg);
    let fm = fisher_quad(&mix, &component_zeros, cfg);
    for (q, d) in [(&f1, rho1.label()), (&f2, rho2.label())] {
        match q.status {
            QuadStatus::Divergent => {
                return Ok(DivergenceReport::divergent(ComputePath::FunctionalForm))
            }
            QuadStatus::NotConverged => return Err(not_converged(&format!("F[{d}]"), q)),
            QuadStatus::Converged => {}
        }
    }
    let (fm_v, fm_e) = expect_finite(
        &format!("F[mix({}, {})]", rho1.label(), rho2.label()),
        fm,
    )?;
    Ok(DivergenceReport::finite(
        0.5 * (f1.value + f2.value) - fm_v,
        (0.25 * (f1.error_estimate.powi(2) + f2.error_estimate.powi(2)) + fm_e * fm_e).sqrt(),
        ComputePath::FunctionalForm,
    ))
}

/// Jensen-Fisher divergence computed from its definition as the half-sum of
/// the two directed divergences, `½(F̄_rel[ρ₁,ρ₂] + F̄_rel[ρ₂,ρ₁])`. Agrees
/// with [`jfd`] up to quadrature error.
pub fn jfd_via_directed(
    rho1: &dyn Density,
    rho2: &dyn Density,
    cfg: &QuadConfig,
) -> Result<DivergenceReport> {
    let a = directed_jfd(rho1, rho2, cfg)?;
    let b = directed_jfd(rho2, rho1, cfg)?;
    if a.is_divergent() || b.is_divergent() {
        return Ok(DivergenceReport::divergent(ComputePath::DefinitionForm));
    }
    Ok(DivergenceReport {
        value: 0.5 * (a.value + b.value),
        error_estimate: 0.5 * a.error_estimate.hypot(b.error_estimate),
        path: ComputePath::DefinitionForm,
        status: DivergenceStatus::Finite,
    })
}

fn check_weighted_args(parts: &[&dyn Density], weights: &WeightVector) -> Result<()> {
    if parts.len() != weights.len() {
        return Err(Error::LengthMismatch(parts.len(), weights.len()));
    }
    if parts.len() < 2 {
        return Err(Error::InvalidParameter(
            "weighted divergences need at least two densities".into(),
        ));
    }
    Ok(())
}

/// Weighted Jensen-Shannon divergence `S[Σ wᵢ ρᵢ] - Σ wᵢ S[ρᵢ]`; reduces to
/// [`jsd`] for two densities with equal weights.
pub fn jsd_weighted(
    parts: &[&dyn Density],
    weights: &WeightVector,
    cfg: &QuadConfig,
) -> Result<DivergenceReport> {
    check_weighted_args(parts, weights)?;
    let mix = borrowed_weighted(parts, weights)?;
    let window = mix.integration_window();
    let mut component_zeros = Vec::new();
    for p in parts {
        component_zeros.extend(zeros_of_within(*p, window.0, window.1));
    }
    let (sm, em) = expect_finite("S[weighted mix]", entropy_quad(&mix, &component_zeros, cfg))?;
    let mut value = sm;
    let mut err_sq = em * em;
    for (p, w) in parts.iter().zip(weights.as_slice()) {
        if *w == 0.0 {
            continue;
        }
        let (s, e) = expect_finite(&format!("S[{}]", p.label()), entropy_quad(*p, &[], cfg))?;
        value -= w * s;
        err_sq += (w * e) * (w * e);
    }
    Ok(DivergenceReport::finite(
        value,
        err_sq.sqrt(),
        ComputePath::DefinitionForm,
    ))
}

/// Weighted Jensen-Fisher divergence `Σ wᵢ F[ρᵢ] - F[Σ wᵢ ρᵢ]`; non-negative
/// by convexity, reduces to [`jfd`] for two equal weights.
pub fn jfd_weighted(
    parts: &[&dyn Density],
    weights: &WeightVector,
    cfg: &QuadConfig,
) -> Result<DivergenceReport> {
    check_weighted_args(parts, weights)?;
    for (p, w) in parts.iter().zip(weights.as_slice()) {
        if *w > 0.0 {
            p.fisher_readiness()?;
        }
    }
    let mix = borrowed_weighted(parts, weights)?;
    let window = mix.integration_window();
    let mut component_zeros = Vec::new();
    for p in parts {
        component_zeros.extend(zeros_of_within(*p, window.0, window.1));
    }
    let mut value = 0.0;
    let mut err_sq = 0.0;
    for (p, w) in parts.iter().zip(weights.as_slice()) {
        if *w == 0.0 {
            continue;
        }
        let q = fisher_quad(*p, &[], cfg);
        match q.status {
            QuadStatus::Converged => {
                value += w * q.value;
                err_sq += (w * q.error_estimate) * (w * q.error_estimate);
            }
            QuadStatus::Divergent => {
                return Ok(DivergenceReport::divergent(ComputePath::FunctionalForm))
            }
            QuadStatus::NotConverged => {
                return Err(not_converged(&format!("F[{}]", p.label()), &q))
            }
        }
    }
    let (fm, em) = expect_finite("F[weighted mix]", fisher_quad(&mix, &component_zeros, cfg))?;
    Ok(DivergenceReport::finite(
        value - fm,
        (err_sq + em * em).sqrt(),
        ComputePath::FunctionalForm,
    ))
}
