//! Figure-reproduction sweeps over the three density families.
//!
//! A sweep evaluates JSD and JFD for a family of density pairs and collects
//! the results into an ordered [`SweepTable`]. Records are independent, so
//! they are computed data-parallel (rayon) when the `parallel` feature is
//! enabled; tables come out in index order either way and repeated runs are
//! bit-identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::density::{
    make_gamma_like, make_rakhmanov_hermite, make_sinusoidal, Density, GammaLikeParams,
    HermiteParams, SinusoidalParams,
};
use crate::divergence::{jfd, jsd, DivergenceReport};
use crate::quadrature::QuadConfig;
use crate::{Error, Result};

/// One sweep record: the index parameters and the two divergences against
/// the record's partner density.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    /// Series label when a table interleaves several pairing rules.
    pub series: Option<String>,
    /// Index parameters, matching [`SweepTable::index_columns`].
    pub index: Vec<f64>,
    pub jsd: f64,
    pub jfd: f64,
    pub jsd_err: f64,
    pub jfd_err: f64,
}

/// Ordered sweep results plus metadata.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub family: String,
    /// Human-readable description of the reference/pairing.
    pub reference: String,
    pub timestamp: String,
    pub index_columns: Vec<String>,
    pub records: Vec<SweepRecord>,
}

impl SweepTable {
    fn new(family: &str, reference: String, index_columns: &[&str]) -> Self {
        Self {
            family: family.to_string(),
            reference,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            index_columns: index_columns.iter().map(|c| c.to_string()).collect(),
            records: Vec::new(),
        }
    }

    pub fn has_series(&self) -> bool {
        self.records.iter().any(|r| r.series.is_some())
    }
}

/// How a sweep pairs the running index `n` with a partner quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingRule {
    /// `(n, m)` for a fixed reference `m`.
    FixedReference(u32),
    /// `(n, n+k)`.
    Offset(u32),
    /// `(n, c·n)`.
    Multiple(u32),
    /// `(n, c·n+k)`.
    MultipleOffset(u32, u32),
}

impl PairingRule {
    pub fn partner(&self, n: u32) -> u32 {
        match *self {
            PairingRule::FixedReference(m) => m,
            PairingRule::Offset(k) => n + k,
            PairingRule::Multiple(c) => c * n,
            PairingRule::MultipleOffset(c, k) => c * n + k,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            PairingRule::FixedReference(m) => format!("(n,{m})"),
            PairingRule::Offset(k) => format!("(n,n+{k})"),
            PairingRule::Multiple(c) => format!("(n,{c}n)"),
            PairingRule::MultipleOffset(c, k) => format!("(n,{c}n+{k})"),
        }
    }
}

/// Applies `f` to each item, on the rayon pool when the `parallel` feature
/// is enabled. Output order always matches input order.
#[cfg(feature = "parallel")]
pub fn parallel_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    items.par_iter().map(&f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn parallel_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    sequential_map(items, f)
}

/// Always-sequential counterpart of [`parallel_map`], kept callable with the
/// feature on so benchmarks can compare the two paths.
pub fn sequential_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

fn divergence_pair(
    d: &dyn Density,
    reference: &dyn Density,
    cfg: &QuadConfig,
) -> Result<(DivergenceReport, DivergenceReport)> {
    let js = jsd(d, reference, cfg)?;
    let jf = jfd(d, reference, cfg)?;
    if js.is_divergent() || jf.is_divergent() {
        return Err(Error::InvalidParameter(format!(
            "sweep produced a divergent record for {} vs {}",
            d.label(),
            reference.label()
        )));
    }
    Ok((js, jf))
}

fn record(
    series: Option<String>,
    index: Vec<f64>,
    js: DivergenceReport,
    jf: DivergenceReport,
) -> SweepRecord {
    SweepRecord {
        series,
        index,
        jsd: js.value,
        jfd: jf.value,
        jsd_err: js.error_estimate,
        jfd_err: jf.error_estimate,
    }
}

/// `(n, JSD[ρ_n, ρ_ref], JFD[ρ_n, ρ_ref])` for the sinusoidal family,
/// `n = 1..=n_max`.
pub fn sweep_sinusoidal_vs_reference(
    reference_n: u32,
    n_max: u32,
    cfg: &QuadConfig,
) -> Result<SweepTable> {
    if reference_n < 1 || n_max < reference_n {
        return Err(Error::InvalidParameter(format!(
            "sinusoidal sweep needs 1 <= reference_n <= n_max, got reference_n={reference_n}, n_max={n_max}"
        )));
    }
    let reference = make_sinusoidal(SinusoidalParams { n: reference_n })?;
    let ns: Vec<u32> = (1..=n_max).collect();
    let rows = parallel_map(&ns, |&n| -> Result<SweepRecord> {
        let d = make_sinusoidal(SinusoidalParams { n })?;
        let (js, jf) = divergence_pair(&d, &reference, cfg)?;
        Ok(record(None, vec![n as f64], js, jf))
    });
    let mut table = SweepTable::new("sinusoidal", reference.label().to_string(), &["n"]);
    table.records = rows.into_iter().collect::<Result<_>>()?;
    Ok(table)
}

/// `(β, JSD[γ_β, γ_0], JFD[γ_β, γ_0])` on a grid log-spaced in `β - 1`,
/// which resolves the Fisher asymptote region near `β = 1`.
pub fn sweep_gamma(
    beta_min: f64,
    beta_max: f64,
    steps: usize,
    cfg: &QuadConfig,
) -> Result<SweepTable> {
    if !(beta_min > 1.0) || !(beta_max >= beta_min) || steps == 0 {
        return Err(Error::InvalidParameter(format!(
            "gamma sweep needs 1 < beta_min <= beta_max and steps >= 1, got [{beta_min}, {beta_max}] x {steps}"
        )));
    }
    let betas: Vec<f64> = if steps == 1 || beta_max == beta_min {
        vec![beta_min]
    } else {
        let (t0, t1) = ((beta_min - 1.0).ln(), (beta_max - 1.0).ln());
        (0..steps)
            .map(|i| 1.0 + (t0 + (t1 - t0) * i as f64 / (steps - 1) as f64).exp())
            .collect()
    };
    let reference = make_gamma_like(GammaLikeParams { beta: 0.0 })?;
    let rows = parallel_map(&betas, |&beta| -> Result<SweepRecord> {
        let d = make_gamma_like(GammaLikeParams { beta })?;
        let (js, jf) = divergence_pair(&d, &reference, cfg)?;
        Ok(record(None, vec![beta], js, jf))
    });
    let mut table = SweepTable::new("gamma", reference.label().to_string(), &["beta"]);
    table.records = rows.into_iter().collect::<Result<_>>()?;
    Ok(table)
}

const HERMITE_SWEEP_MAX_N: u32 = 100;

/// `(n, JSD[ρ_n, ρ_ref], JFD[ρ_n, ρ_ref])` for the Rakhmanov-Hermite
/// family, `n = 0..=n_max` (capped at 100 to bound zero-finding cost).
pub fn sweep_hermite_vs_reference(
    reference_n: u32,
    n_max: u32,
    cfg: &QuadConfig,
) -> Result<SweepTable> {
    if n_max > HERMITE_SWEEP_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "hermite sweeps are capped at n = {HERMITE_SWEEP_MAX_N}, got n_max = {n_max}"
        )));
    }
    let reference = make_rakhmanov_hermite(HermiteParams { n: reference_n })?;
    let ns: Vec<u32> = (0..=n_max).collect();
    let rows = parallel_map(&ns, |&n| -> Result<SweepRecord> {
        let d = make_rakhmanov_hermite(HermiteParams { n })?;
        let (js, jf) = divergence_pair(&d, &reference, cfg)?;
        Ok(record(None, vec![n as f64], js, jf))
    });
    let mut table = SweepTable::new("hermite", reference.label().to_string(), &["n"]);
    table.records = rows.into_iter().collect::<Result<_>>()?;
    Ok(table)
}

/// `(n, m)` pairs under one [`PairingRule`], sweeping `n` upward until
/// `n_max` or until the JFD exceeds `jfd_cap` (records past the cap are
/// dropped and the sweep stops).
pub fn sweep_hermite_pairs(
    rule: PairingRule,
    n_max: u32,
    jfd_cap: f64,
    cfg: &QuadConfig,
) -> Result<SweepTable> {
    if n_max > HERMITE_SWEEP_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "hermite sweeps are capped at n = {HERMITE_SWEEP_MAX_N}, got n_max = {n_max}"
        )));
    }
    let mut table = SweepTable::new("hermite", rule.label(), &["n", "m"]);
    table.records = pair_rule_records(rule, n_max, jfd_cap, cfg)?;
    Ok(table)
}

/// Several pairing rules in one table, one record group per rule with the
/// rule label in the series column.
pub fn sweep_hermite_pair_rules(
    rules: &[PairingRule],
    n_max: u32,
    jfd_cap: f64,
    cfg: &QuadConfig,
) -> Result<SweepTable> {
    if n_max > HERMITE_SWEEP_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "hermite sweeps are capped at n = {HERMITE_SWEEP_MAX_N}, got n_max = {n_max}"
        )));
    }
    let labels: Vec<String> = rules.iter().map(|r| r.label()).collect();
    let mut table = SweepTable::new("hermite", labels.join(" "), &["n", "m"]);
    for rule in rules {
        let mut rows = pair_rule_records(*rule, n_max, jfd_cap, cfg)?;
        for r in &mut rows {
            r.series = Some(rule.label());
        }
        table.records.extend(rows);
    }
    Ok(table)
}

/// Chunked evaluation so the cap can stop the sweep without computing (and
/// paying for) every high-n pair first.
fn pair_rule_records(
    rule: PairingRule,
    n_max: u32,
    jfd_cap: f64,
    cfg: &QuadConfig,
) -> Result<Vec<SweepRecord>> {
    const CHUNK: u32 = 16;
    let mut records = Vec::new();
    let mut start = 0u32;
    'sweep: while start <= n_max {
        let end = n_max.min(start + CHUNK - 1);
        let ns: Vec<u32> = (start..=end).collect();
        let rows = parallel_map(&ns, |&n| -> Result<SweepRecord> {
            let m = rule.partner(n);
            let d = make_rakhmanov_hermite(HermiteParams { n })?;
            let partner = make_rakhmanov_hermite(HermiteParams { n: m })?;
            let (js, jf) = divergence_pair(&d, &partner, cfg)?;
            Ok(record(None, vec![n as f64, m as f64], js, jf))
        });
        for row in rows {
            let row = row?;
            if row.jfd > jfd_cap {
                break 'sweep;
            }
            records.push(row);
        }
        start = end + 1;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> QuadConfig {
        QuadConfig {
            abs_tol: 1e-8,
            rel_tol: 1e-7,
            ..Default::default()
        }
    }

    #[test]
    fn pairing_rules_generate_partners_and_labels() {
        assert_eq!(PairingRule::FixedReference(10).partner(3), 10);
        assert_eq!(PairingRule::Offset(10).partner(3), 13);
        assert_eq!(PairingRule::Multiple(2).partner(3), 6);
        assert_eq!(PairingRule::MultipleOffset(2, 10).partner(3), 16);
        assert_eq!(PairingRule::Offset(1).label(), "(n,n+1)");
        assert_eq!(PairingRule::Multiple(4).label(), "(n,4n)");
    }

    #[test]
    fn sinusoidal_sweep_shape_and_self_record() {
        let t = sweep_sinusoidal_vs_reference(2, 5, &quick_cfg()).unwrap();
        assert_eq!(t.records.len(), 5);
        assert_eq!(t.index_columns, vec!["n"]);
        // n runs 1..=5 in order
        let ns: Vec<f64> = t.records.iter().map(|r| r.index[0]).collect();
        assert_eq!(ns, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        // the self-pair record is numerically zero
        let self_rec = &t.records[1];
        assert!(self_rec.jsd.abs() <= 1e-9 && self_rec.jfd.abs() <= 1e-9);
        assert!(t.records.iter().all(|r| r.jsd >= -1e-12 && r.jfd >= -1e-9));
    }

    #[test]
    fn sinusoidal_sweep_validates_range() {
        assert!(sweep_sinusoidal_vs_reference(0, 5, &quick_cfg()).is_err());
        assert!(sweep_sinusoidal_vs_reference(6, 5, &quick_cfg()).is_err());
    }

    #[test]
    fn gamma_sweep_degenerate_single_step() {
        let t = sweep_gamma(2.5, 2.5, 1, &quick_cfg()).unwrap();
        assert_eq!(t.records.len(), 1);
        assert!((t.records[0].index[0] - 2.5).abs() < 1e-15);
        assert!(t.records[0].jsd.is_finite() && t.records[0].jfd.is_finite());
    }

    #[test]
    fn gamma_sweep_needs_beta_above_one() {
        assert!(sweep_gamma(1.0, 10.0, 5, &quick_cfg()).is_err());
        assert!(sweep_gamma(0.5, 10.0, 5, &quick_cfg()).is_err());
    }

    #[test]
    fn gamma_grid_is_log_spaced_within_range() {
        let t = sweep_gamma(1.05, 9.0, 7, &quick_cfg()).unwrap();
        let betas: Vec<f64> = t.records.iter().map(|r| r.index[0]).collect();
        assert_eq!(betas.len(), 7);
        assert!((betas[0] - 1.05).abs() < 1e-12);
        assert!((betas[6] - 9.0).abs() < 1e-12);
        assert!(betas.windows(2).all(|w| w[0] < w[1]));
        // log-spacing in beta-1: constant ratio between successive beta-1
        let r0 = (betas[1] - 1.0) / (betas[0] - 1.0);
        let r4 = (betas[5] - 1.0) / (betas[4] - 1.0);
        assert!((r0 - r4).abs() < 1e-9);
    }

    #[test]
    fn hermite_pair_sweep_respects_cap() {
        let t = sweep_hermite_pairs(PairingRule::Offset(1), 12, 25.0, &quick_cfg()).unwrap();
        assert!(!t.records.is_empty());
        assert!(t.records.iter().all(|r| r.jfd <= 25.0));
        // (n,n+1) JFD grows roughly linearly, so the cap must bite before 12
        assert!(t.records.len() < 13, "cap did not stop the sweep");
        let last = t.records.last().unwrap();
        assert_eq!(last.index[1], last.index[0] + 1.0);
    }

    #[test]
    fn hermite_sweep_rejects_over_cap_n() {
        assert!(sweep_hermite_vs_reference(0, 101, &quick_cfg()).is_err());
        assert!(sweep_hermite_pairs(PairingRule::Offset(1), 101, 1e9, &quick_cfg()).is_err());
    }

    #[test]
    fn sweeps_are_deterministic() {
        let a = sweep_sinusoidal_vs_reference(1, 6, &quick_cfg()).unwrap();
        let b = sweep_sinusoidal_vs_reference(1, 6, &quick_cfg()).unwrap();
        assert_eq!(a.records, b.records);
        let g1 = sweep_gamma(1.2, 5.0, 4, &quick_cfg()).unwrap();
        let g2 = sweep_gamma(1.2, 5.0, 4, &quick_cfg()).unwrap();
        assert_eq!(g1.records, g2.records);
    }

    #[test]
    fn parallel_and_sequential_maps_agree() {
        let items: Vec<u32> = (0..40).collect();
        let f = |n: &u32| (*n as f64).sqrt().sin();
        let par = parallel_map(&items, f);
        let seq = sequential_map(&items, f);
        assert_eq!(par, seq);
    }

    #[test]
    fn multi_rule_table_gets_series_labels() {
        let rules = [PairingRule::Offset(1), PairingRule::FixedReference(0)];
        let t = sweep_hermite_pair_rules(&rules, 3, 1e9, &quick_cfg()).unwrap();
        assert!(t.has_series());
        let labels: std::collections::BTreeSet<&str> = t
            .records
            .iter()
            .map(|r| r.series.as_deref().unwrap())
            .collect();
        assert_eq!(labels.len(), 2);
        assert!(labels.contains("(n,n+1)") && labels.contains("(n,0)"));
    }
}
