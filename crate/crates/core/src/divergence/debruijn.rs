//! Gaussian smoothing and numerical verification of the deBruijn identities.
//!
//! Adding independent Gaussian noise of variance ε to a random variable
//! convolves its density with the kernel `G_ε`. The classical deBruijn
//! identity says `d/dε S[ρ * G_ε] |₀ = ½ F[ρ]`; the Jensen counterpart says
//! `d/dε JSD[ρ₁ * G_ε, ρ₂ * G_ε] |₀ = -½ JFD[ρ₁, ρ₂]`. Both are checked by
//! smoothing at a ladder of ε values and Richardson-extrapolating the
//! one-sided difference quotients to ε = 0.

use super::{fisher_information, jfd, jsd, shannon_entropy};
use crate::density::{Density, GridDensity};
use crate::quadrature::{integrate, QuadConfig, QuadStatus};
use crate::{Error, Result};

/// Noise variance for [`gaussian_smooth`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParam {
    epsilon: f64,
}

impl SmoothingParam {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "smoothing variance must be positive, got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Scans inward from the window edges for the region where `log_pdf ≥ -60`;
/// mass outside is ~1e-26 and irrelevant to any functional computed here.
fn core_region(rho: &dyn Density) -> (f64, f64) {
    let (wlo, whi) = rho.integration_window();
    let step = (whi - wlo) / 4096.0;
    let mut lo = wlo;
    while lo < whi && rho.log_pdf(lo) < -60.0 {
        lo += step;
    }
    let mut hi = whi;
    while hi > wlo && rho.log_pdf(hi) < -60.0 {
        hi -= step;
    }
    ((lo - step).max(wlo), (hi + step).min(whi))
}

/// Convolution `ρ * G_ε`, evaluated by quadrature against the Gaussian
/// kernel on a grid and wrapped as a grid-backed density. Mass is preserved
/// within 1e-6 (checked) before the final renormalization.
pub fn gaussian_smooth(
    rho: &dyn Density,
    eps: SmoothingParam,
    cfg: &QuadConfig,
) -> Result<GridDensity> {
    let sigma = eps.epsilon().sqrt();
    let (wlo, whi) = rho.integration_window();
    let (clo, chi) = core_region(rho);
    // kernel reach for the per-point integrals; the grid stops half a sigma
    // short of it so edge intervals never collapse and edge values stay
    // positive
    let reach = 8.5 * sigma;
    let glo = clo - 8.0 * sigma;
    let ghi = chi + 8.0 * sigma;

    let npts = (((ghi - glo) / (sigma / 6.0)).ceil() as usize + 1).clamp(801, 24_001);
    let h = (ghi - glo) / (npts - 1) as f64;

    let kernel_norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let point_cfg = QuadConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-10,
        ..cfg.clone()
    };

    let zeros = rho.support().interior_zeros();
    let mut xs = Vec::with_capacity(npts);
    let mut vs = Vec::with_capacity(npts);
    for i in 0..npts {
        let y = glo + i as f64 * h;
        let lo = (y - reach).max(wlo);
        let hi = (y + reach).min(whi);
        let breaks: Vec<f64> = zeros.iter().copied().filter(|z| *z > lo && *z < hi).collect();
        let q = integrate(
            |x| {
                let z = (y - x) / sigma;
                rho.pdf(x) * kernel_norm * (-0.5 * z * z).exp()
            },
            (lo, hi),
            &breaks,
            &point_cfg,
        );
        if q.status != QuadStatus::Converged {
            return Err(Error::NotConverged {
                context: format!("convolution of {} at x = {y}", rho.label()),
                subdivisions: q.subdivisions,
                error_estimate: q.error_estimate,
            });
        }
        xs.push(y);
        vs.push(q.value.max(0.0));
    }

    let mass: f64 = xs
        .windows(2)
        .zip(vs.windows(2))
        .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
        .sum();
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "smoothing of {} lost mass: grid integrates to {mass}",
            rho.label()
        )));
    }
    GridDensity::from_points(xs, vs, true)
}

/// Outcome of a deBruijn-identity verification.
#[derive(Debug, Clone, Copy)]
pub struct DebruijnReport {
    /// Richardson-extrapolated derivative at ε = 0.
    pub lhs_slope: f64,
    /// The identity's right-hand side (`½F` or `-½JFD`).
    pub rhs: f64,
    pub relative_gap: f64,
}

fn validate_eps_list(eps_list: &[f64]) -> Result<()> {
    if eps_list.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 smoothing variances for extrapolation, got {}",
            eps_list.len()
        )));
    }
    for w in eps_list.windows(2) {
        if !(w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "smoothing variances must be strictly decreasing".into(),
            ));
        }
    }
    if eps_list.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidParameter(
            "smoothing variances must be positive".into(),
        ));
    }
    Ok(())
}

/// Polynomial extrapolation of `(x, y)` samples to x = 0 (Neville's scheme).
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    let mut p = ys.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let xj = xs[i + level];
            p[i] = p[i + 1] + (p[i + 1] - p[i]) * xj / (xs[i] - xj);
        }
    }
    p[0]
}

fn gap(lhs: f64, rhs: f64) -> f64 {
    let diff = (lhs - rhs).abs();
    if diff < 1e-12 {
        0.0
    } else if rhs.abs() < 1e-12 {
        f64::INFINITY
    } else {
        diff / rhs.abs()
    }
}

fn slope_at_zero<F: FnMut(f64) -> Result<f64>>(
    f0: f64,
    eps_list: &[f64],
    mut f: F,
) -> Result<f64> {
    let mut quotients = Vec::with_capacity(eps_list.len());
    for &e in eps_list {
        quotients.push((f(e)? - f0) / e);
    }
    Ok(extrapolate_to_zero(eps_list, &quotients))
}

/// Verifies `d/dε JSD[ρ₁*G_ε, ρ₂*G_ε]|₀ = -½ JFD[ρ₁, ρ₂]`.
pub fn debruijn_check(
    rho1: &dyn Density,
    rho2: &dyn Density,
    eps_list: &[f64],
    cfg: &QuadConfig,
) -> Result<DebruijnReport> {
    validate_eps_list(eps_list)?;
    let jf = jfd(rho1, rho2, cfg)?;
    if jf.is_divergent() {
        return Err(Error::InvalidParameter(
            "deBruijn check needs inputs with finite Fisher information".into(),
        ));
    }
    let rhs = -0.5 * jf.value;

    let f0 = jsd(rho1, rho2, cfg)?.value;
    let lhs = slope_at_zero(f0, eps_list, |e| {
        let p = SmoothingParam::new(e)?;
        let g1 = gaussian_smooth(rho1, p, cfg)?;
        let g2 = gaussian_smooth(rho2, p, cfg)?;
        Ok(jsd(&g1, &g2, cfg)?.value)
    })?;

    Ok(DebruijnReport {
        lhs_slope: lhs,
        rhs,
        relative_gap: gap(lhs, rhs),
    })
}

/// Verifies the classical identity `d/dε S[ρ*G_ε]|₀ = ½ F[ρ]`.
pub fn classic_debruijn_check(
    rho: &dyn Density,
    eps_list: &[f64],
    cfg: &QuadConfig,
) -> Result<DebruijnReport> {
    validate_eps_list(eps_list)?;
    let fi = fisher_information(rho, cfg)?;
    if fi.is_divergent() {
        return Err(Error::InvalidParameter(
            "deBruijn check needs inputs with finite Fisher information".into(),
        ));
    }
    let rhs = 0.5 * fi.value;

    let f0 = shannon_entropy(rho, cfg)?.value;
    let lhs = slope_at_zero(f0, eps_list, |e| {
        let g = gaussian_smooth(rho, SmoothingParam::new(e)?, cfg)?;
        Ok(shannon_entropy(&g, cfg)?.value)
    })?;

    Ok(DebruijnReport {
        lhs_slope: lhs,
        rhs,
        relative_gap: gap(lhs, rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrapolation_recovers_a_derivative() {
        // (e^x - 1)/x extrapolated to 0 is exp'(0) = 1
        let xs = [1e-2_f64, 5e-3, 2.5e-3];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| (x.exp() - 1.0) / x).collect();
        let d = extrapolate_to_zero(&xs, &ys);
        // three points leave an O(e1*e2*e3) residual
        assert!((d - 1.0).abs() < 1e-7, "got {d}");
    }

    #[test]
    fn eps_list_validation() {
        assert!(validate_eps_list(&[1e-2, 5e-3, 2.5e-3]).is_ok());
        assert!(validate_eps_list(&[1e-2, 5e-3]).is_err());
        assert!(validate_eps_list(&[5e-3, 1e-2, 2e-2]).is_err());
        assert!(validate_eps_list(&[1e-2, 5e-3, 0.0]).is_err());
    }

    #[test]
    fn smoothing_param_rejects_nonpositive() {
        assert!(SmoothingParam::new(0.0).is_err());
        assert!(SmoothingParam::new(-1.0).is_err());
        assert!(SmoothingParam::new(f64::NAN).is_err());
        assert!(SmoothingParam::new(0.5).is_ok());
    }
}
