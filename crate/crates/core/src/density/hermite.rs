//! Hermite polynomials in log-scaled form and the Rakhmanov-Hermite
//! densities `ρ_n(x) = e^{-x²} H_n²(x) / (2ⁿ n! √π)`.
//!
//! These are the harmonic-oscillator stationary-state densities; `ρ_n` has
//! exactly `n` interior zeros, the zeros of `H_n`. `H_n(x)` itself overflows
//! f64 around `n ≈ 150` for moderate `x`, so the three-term recurrence
//! `H_{k+1} = 2x H_k - 2k H_{k-1}` is carried with a running power-of-two
//! scale and only `log|H_n|` and the sign ever leave this module.

use statrs::function::gamma::ln_gamma;

use super::Density;
use crate::support::Support;
use crate::Result;

const RESCALE_ABOVE: f64 = 1e250;
const LN_2_POW_512: f64 = 512.0 * std::f64::consts::LN_2;

/// Runs the recurrence up to degree `n ≥ 1`, returning `(H_{n-1}, H_n,
/// log_scale)` where the true values are the returned ones times
/// `exp(log_scale)`. Both members share the scale, so their ratio is exact.
fn hermite_scaled(n: u32, x: f64) -> (f64, f64, f64) {
    debug_assert!(n >= 1);
    let mut prev = 1.0_f64; // H_0
    let mut cur = 2.0 * x; // H_1
    let mut log_scale = 0.0_f64;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        if cur.abs().max(prev.abs()) > RESCALE_ABOVE {
            let down = 2.0_f64.powi(-512);
            cur *= down;
            prev *= down;
            log_scale += LN_2_POW_512;
        }
    }
    (prev, cur, log_scale)
}

/// Evaluates `H_n(x)` as `(log|H_n(x)|, sign)` with sign in `{-1, 0, +1}`.
///
/// The scaled recurrence never overflows; degrees beyond 200 are fine.
pub fn hermite_log_abs(n: u32, x: f64) -> (f64, i8) {
    if n == 0 {
        return (0.0, 1);
    }
    let (_, cur, log_scale) = hermite_scaled(n, x);
    if cur == 0.0 {
        (f64::NEG_INFINITY, 0)
    } else {
        (cur.abs().ln() + log_scale, if cur > 0.0 { 1 } else { -1 })
    }
}

/// The `n` real zeros of `H_n`, strictly increasing, antisymmetric about 0,
/// accurate to 1e-12.
///
/// Bisection on sign changes of [`hermite_log_abs`] over a grid of `8(n+1)`
/// points: the grid spacing is several times smaller than the minimal zero
/// gap `≈ π/√(2n+1)`, so no bracket is missed. The positive and negative
/// halves are averaged afterwards so the returned list is exactly
/// antisymmetric (odd `n` gets an exact 0).
pub fn hermite_zeros(n: u32) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let edge = (2.0 * (2.0 * n as f64 + 1.0)).sqrt() + 10.0;
    let points = 8 * (n as usize + 1);
    let sign_at = |x: f64| hermite_log_abs(n, x).1;

    let mut zeros = Vec::with_capacity(n as usize);
    let step = 2.0 * edge / points as f64;
    let mut prev_x = -edge;
    let mut prev_s = sign_at(prev_x);
    for i in 1..=points {
        let x = -edge + i as f64 * step;
        let s = sign_at(x);
        if s == 0 {
            zeros.push(x);
        } else if prev_s != 0 && s != prev_s {
            let (mut lo, mut hi) = (prev_x, x);
            let lo_s = prev_s;
            while hi - lo > 1e-13 {
                let mid = 0.5 * (lo + hi);
                let ms = sign_at(mid);
                if ms == 0 {
                    lo = mid;
                    hi = mid;
                } else if ms == lo_s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_s = s;
    }
    assert_eq!(
        zeros.len(),
        n as usize,
        "hermite zero scan lost a bracket for n = {n}"
    );

    // H_n(-x) = (-1)^n H_n(x): enforce the symmetry exactly.
    let m = zeros.len();
    for i in 0..m / 2 {
        let z = 0.5 * (zeros[m - 1 - i] - zeros[i]);
        zeros[m - 1 - i] = z;
        zeros[i] = -z;
    }
    if m % 2 == 1 {
        zeros[m / 2] = 0.0;
    }
    zeros
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteParams {
    /// Oscillator level, `n ≥ 0`.
    pub n: u32,
}

#[derive(Debug, Clone)]
pub struct RakhmanovHermite {
    n: u32,
    ln_norm: f64,
    support: Support,
    window: (f64, f64),
    label: String,
}

/// Builds `ρ_n(x) = e^{-x²} H_n²(x) / (2ⁿ n! √π)`.
pub fn make_rakhmanov_hermite(params: HermiteParams) -> Result<RakhmanovHermite> {
    let n = params.n;
    let ln_norm = n as f64 * std::f64::consts::LN_2
        + ln_gamma(n as f64 + 1.0)
        + 0.5 * std::f64::consts::PI.ln();
    // Past the classical turning point ~ sqrt(2n+1) the density decays like a
    // squared Gaussian; +10 leaves tail mass far below working precision.
    let edge = (2.0 * (2.0 * n as f64 + 1.0)).sqrt() + 10.0;
    Ok(RakhmanovHermite {
        n,
        ln_norm,
        support: Support::real_line(hermite_zeros(n)),
        window: (-edge, edge),
        label: format!("hermite:n={n}"),
    })
}

impl RakhmanovHermite {
    pub fn n(&self) -> u32 {
        self.n
    }
}

impl Density for RakhmanovHermite {
    fn support(&self) -> &Support {
        &self.support
    }

    fn log_pdf(&self, x: f64) -> f64 {
        let (mag, sign) = hermite_log_abs(self.n, x);
        if sign == 0 {
            f64::NEG_INFINITY
        } else {
            -x * x + 2.0 * mag - self.ln_norm
        }
    }

    fn log_pdf_derivative(&self, x: f64) -> f64 {
        // d/dx ln(e^{-x²} H_n²) = -2x + 2 H_n'/H_n with H_n' = 2n H_{n-1}
        if self.n == 0 {
            return -2.0 * x;
        }
        let (prev, cur, _) = hermite_scaled(self.n, x);
        -2.0 * x + 4.0 * self.n as f64 * prev / cur
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn integration_window(&self) -> (f64, f64) {
        self.window
    }
}
