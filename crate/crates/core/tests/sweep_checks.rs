//! Cross-checks of sweep output against the divergence layer.

use jenfi::density::{
    make_rakhmanov_hermite, make_sinusoidal, HermiteParams, SinusoidalParams,
};
use jenfi::divergence::jfd_via_directed;
use jenfi::experiments::{sweep_hermite_vs_reference, sweep_sinusoidal_vs_reference};
use jenfi::QuadConfig;

/// Against the ground state both divergences grow with the level: each
/// 5-record block average exceeds the previous one.
#[test]
fn hermite_ground_reference_is_trend_increasing() {
    let cfg = QuadConfig::default();
    let table = sweep_hermite_vs_reference(0, 30, &cfg).unwrap();
    let block = |lo: usize, field: fn(&jenfi::experiments::SweepRecord) -> f64| {
        table.records[lo..lo + 5].iter().map(field).sum::<f64>() / 5.0
    };
    for start in (1..=21).step_by(5) {
        assert!(
            block(start + 5, |r| r.jsd) > block(start, |r| r.jsd),
            "jsd blocks at {start}"
        );
        assert!(
            block(start + 5, |r| r.jfd) > block(start, |r| r.jfd),
            "jfd blocks at {start}"
        );
    }
}

/// Every tenth sweep record's JFD is recomputed through the directed
/// (definition-form) path at tightened tolerance.
#[test]
fn sweep_jfd_dual_path_spot_check() {
    let cfg = QuadConfig::default();
    let tight = QuadConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        ..Default::default()
    };

    let table = sweep_sinusoidal_vs_reference(1, 20, &cfg).unwrap();
    let reference = make_sinusoidal(SinusoidalParams { n: 1 }).unwrap();
    for r in table.records.iter().skip(1).step_by(10) {
        let n = r.index[0] as u32;
        let d = make_sinusoidal(SinusoidalParams { n }).unwrap();
        let other = jfd_via_directed(&d, &reference, &tight).unwrap().value;
        assert!(
            ((r.jfd - other) / other.max(1e-12)).abs() < 1e-6,
            "n = {n}: sweep {} vs directed {other}",
            r.jfd
        );
    }

    let table = sweep_hermite_vs_reference(4, 10, &cfg).unwrap();
    let reference = make_rakhmanov_hermite(HermiteParams { n: 4 }).unwrap();
    for r in table.records.iter().step_by(10) {
        let n = r.index[0] as u32;
        if n == 4 {
            continue;
        }
        let d = make_rakhmanov_hermite(HermiteParams { n }).unwrap();
        let other = jfd_via_directed(&d, &reference, &tight).unwrap().value;
        assert!(
            ((r.jfd - other) / other.max(1e-12)).abs() < 1e-6,
            "n = {n}: sweep {} vs directed {other}",
            r.jfd
        );
    }
}
