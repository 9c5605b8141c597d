//! Tabulated densities: `(x, value)` pairs interpolated in the log domain.
//!
//! Log values are interpolated with a monotone cubic (Fritsch-Carlson
//! limited Hermite, node slopes from central differences); segments touching
//! a zero value fall back to linear interpolation of the pdf itself, whose
//! log and log-derivative stay well defined up to the zero.

use std::fs;
use std::path::Path;

use super::Density;
use crate::support::Support;
use crate::{Error, Result};

/// Minimum number of grid points between consecutive zeros (and between a
/// zero and the grid edge) for Fisher-based functionals to be trusted:
/// `(ρ')²/ρ` is hypersensitive to interpolation error near zeros.
const MIN_LOBE_POINTS: usize = 8;

pub struct GridDensity {
    xs: Vec<f64>,
    vs: Vec<f64>,
    log_vs: Vec<f64>,
    slopes: Vec<f64>,
    support: Support,
    min_lobe_points: usize,
    label: String,
}

/// Loads a two-column `x,value` text file (UTF-8, `#` comments ignored,
/// abscissae strictly increasing, no header).
///
/// The stored values are always rescaled by the trapezoid mass so the result
/// integrates to 1; `renormalize` only controls whether a file more than 1%
/// away from normalized is accepted or rejected.
pub fn load_grid_density(path: &Path, renormalize: bool) -> Result<GridDensity> {
    let text = fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',');
        let (x, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(x), Some(v), None) => (x.trim(), v.trim()),
            _ => {
                return Err(Error::GridParse {
                    line: idx + 1,
                    message: format!("expected two comma-separated fields, got `{raw}`"),
                })
            }
        };
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| Error::GridParse {
                line: idx + 1,
                message: format!("bad number `{s}`: {e}"),
            })
        };
        xs.push(parse(x)?);
        vs.push(parse(v)?);
    }
    let mut grid = GridDensity::from_points(xs, vs, renormalize)?;
    grid.label = format!("grid:path={}", path.display());
    Ok(grid)
}

impl GridDensity {
    /// Builds a grid density from in-memory points. Same validation and
    /// renormalization behavior as [`load_grid_density`].
    pub fn from_points(xs: Vec<f64>, vs: Vec<f64>, renormalize: bool) -> Result<Self> {
        if xs.len() != vs.len() {
            return Err(Error::LengthMismatch(xs.len(), vs.len()));
        }
        if xs.len() < 4 {
            return Err(Error::TooFewPoints(xs.len()));
        }
        for (i, pair) in xs.windows(2).enumerate() {
            if !(pair[0] < pair[1]) {
                return Err(Error::UnsortedAbscissae(i + 1));
            }
        }
        for (x, v) in xs.iter().zip(&vs) {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::NegativeDensity { x: *x, value: *v });
            }
        }

        let mass = trapezoid(&xs, &vs);
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter(
                "grid density has zero total mass".into(),
            ));
        }
        if !renormalize && (mass - 1.0).abs() > 0.01 {
            return Err(Error::NotNormalized(mass));
        }
        let vs: Vec<f64> = vs.iter().map(|v| v / mass).collect();

        let log_vs: Vec<f64> = vs
            .iter()
            .map(|v| if *v > 0.0 { v.ln() } else { f64::NEG_INFINITY })
            .collect();
        let slopes = log_slopes(&xs, &log_vs);

        let n = xs.len();
        let zeros: Vec<f64> = (1..n - 1).filter(|i| vs[*i] == 0.0).map(|i| xs[i]).collect();
        let min_lobe_points = min_lobe(&vs);

        let support = Support::new(xs[0], xs[n - 1], zeros)?;
        Ok(Self {
            xs,
            vs,
            log_vs,
            slopes,
            support,
            min_lobe_points,
            label: "grid".to_string(),
        })
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }
}

fn trapezoid(xs: &[f64], vs: &[f64]) -> f64 {
    xs.windows(2)
        .zip(vs.windows(2))
        .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
        .sum()
}

/// Node derivatives of the log values: central differences in the interior,
/// one-sided at the ends and next to zero nodes, then Fritsch-Carlson
/// limiting so the cubic never overshoots between nodes.
fn log_slopes(xs: &[f64], ls: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let sec: Vec<f64> = (0..n - 1)
        .map(|i| {
            if ls[i].is_finite() && ls[i + 1].is_finite() {
                (ls[i + 1] - ls[i]) / (xs[i + 1] - xs[i])
            } else {
                f64::NAN
            }
        })
        .collect();

    let mut m = vec![0.0; n];
    for i in 0..n {
        let left = if i > 0 { sec[i - 1] } else { f64::NAN };
        let right = if i < n - 1 { sec[i] } else { f64::NAN };
        m[i] = match (left.is_finite(), right.is_finite()) {
            (true, true) => {
                let hl = xs[i] - xs[i - 1];
                let hr = xs[i + 1] - xs[i];
                (left * hr + right * hl) / (hl + hr)
            }
            (true, false) => left,
            (false, true) => right,
            (false, false) => 0.0,
        };
    }

    for i in 0..n - 1 {
        let d = sec[i];
        if !d.is_finite() {
            continue;
        }
        if d == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let a = m[i] / d;
        let b = m[i + 1] / d;
        if a < 0.0 {
            m[i] = 0.0;
        }
        if b < 0.0 {
            m[i + 1] = 0.0;
        }
        let hyp = (a.max(0.0).powi(2) + b.max(0.0).powi(2)).sqrt();
        if hyp > 3.0 {
            let tau = 3.0 / hyp;
            m[i] = tau * a.max(0.0) * d;
            m[i + 1] = tau * b.max(0.0) * d;
        }
    }
    m
}

fn min_lobe(vs: &[f64]) -> usize {
    let mut min_run = usize::MAX;
    let mut run = 0usize;
    for v in vs {
        if *v > 0.0 {
            run += 1;
        } else {
            if run > 0 {
                min_run = min_run.min(run);
            }
            run = 0;
        }
    }
    if run > 0 {
        min_run = min_run.min(run);
    }
    if min_run == usize::MAX {
        0
    } else {
        min_run
    }
}

impl Density for GridDensity {
    fn support(&self) -> &Support {
        &self.support
    }

    fn log_pdf(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > *self.xs.last().unwrap() {
            return f64::NEG_INFINITY;
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        if self.vs[i] > 0.0 && self.vs[i + 1] > 0.0 {
            let (l0, l1) = (self.log_vs[i], self.log_vs[i + 1]);
            let (m0, m1) = (self.slopes[i], self.slopes[i + 1]);
            let t2 = t * t;
            let t3 = t2 * t;
            l0 * (2.0 * t3 - 3.0 * t2 + 1.0)
                + h * m0 * (t3 - 2.0 * t2 + t)
                + l1 * (-2.0 * t3 + 3.0 * t2)
                + h * m1 * (t3 - t2)
        } else {
            let v = self.vs[i] + (self.vs[i + 1] - self.vs[i]) * t;
            if v > 0.0 {
                v.ln()
            } else {
                f64::NEG_INFINITY
            }
        }
    }

    fn log_pdf_derivative(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > *self.xs.last().unwrap() {
            return f64::NAN;
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        if self.vs[i] > 0.0 && self.vs[i + 1] > 0.0 {
            let (l0, l1) = (self.log_vs[i], self.log_vs[i + 1]);
            let (m0, m1) = (self.slopes[i], self.slopes[i + 1]);
            let t2 = t * t;
            (l0 * (6.0 * t2 - 6.0 * t)
                + h * m0 * (3.0 * t2 - 4.0 * t + 1.0)
                + l1 * (6.0 * t - 6.0 * t2)
                + h * m1 * (3.0 * t2 - 2.0 * t))
                / h
        } else {
            let dv = self.vs[i + 1] - self.vs[i];
            let v = self.vs[i] + dv * t;
            dv / (h * v)
        }
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn fisher_readiness(&self) -> Result<()> {
        if !self.support.interior_zeros().is_empty() && self.min_lobe_points < MIN_LOBE_POINTS {
            return Err(Error::GridTooCoarse(format!(
                "a sign lobe has only {} grid points (need {MIN_LOBE_POINTS})",
                self.min_lobe_points
            )));
        }
        Ok(())
    }
}
