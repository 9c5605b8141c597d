//! Value-level checks of the divergence layer against closed forms and
//! independently computed (30-digit quadrature) reference numbers.

use std::f64::consts::{LN_2, PI};

use jenfi::density::{
    load_grid_density, make_gamma_like, make_gaussian, make_rakhmanov_hermite, make_sinusoidal,
    mixture, GammaLikeParams, GridDensity, HermiteParams, SinusoidalParams, WeightVector,
};
use jenfi::divergence::{
    classic_debruijn_check, debruijn_check, directed_jfd, fisher_divergence_g, fisher_information,
    gaussian_smooth, jfd, jfd_via_directed, jsd, jsd_weighted, jfd_weighted, kl_divergence,
    relative_fisher, shannon_entropy, SmoothingParam,
};
use jenfi::{Density, DensityRef, Error, QuadConfig};

// Reference values computed with 30-digit adaptive quadrature on the
// defining integrals, independent of this crate.
const S_STANDARD_NORMAL: f64 = 1.4189385332046727;
const DIRECTED_JFD_SIN_1_2: f64 = 18.639180397505505;
const DIRECTED_JFD_SIN_2_1: f64 = 63.877421505912528;
const JFD_SIN_1_2: f64 = 41.258300951709016;
const JSD_SIN_1_2: f64 = 0.13523202762821213;
const JSDW_THREE_GAUSSIANS: f64 = 0.25380598464389457;
const KL_GAMMA0_GAMMA2: f64 = 1.2703628454614782;

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn sinusoidal(n: u32) -> jenfi::density::Sinusoidal {
    make_sinusoidal(SinusoidalParams { n }).unwrap()
}

fn hermite(n: u32) -> jenfi::density::RakhmanovHermite {
    make_rakhmanov_hermite(HermiteParams { n }).unwrap()
}

fn gamma(beta: f64) -> jenfi::density::GammaLike {
    make_gamma_like(GammaLikeParams { beta }).unwrap()
}

fn unit_uniform_grid(lo: f64, hi: f64) -> GridDensity {
    let n = 64;
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vs = vec![1.0 / (hi - lo); xs.len()];
    GridDensity::from_points(xs, vs, false).unwrap()
}

#[test]
fn entropy_of_uniform_is_zero() {
    let u = unit_uniform_grid(0.0, 1.0);
    let r = shannon_entropy(&u, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10, "S[uniform] = {}", r.value);
}

#[test]
fn entropy_of_standard_normal() {
    let g = make_gaussian(0.0, 1.0).unwrap();
    let r = shannon_entropy(&g, &cfg()).unwrap();
    assert!((r.value - S_STANDARD_NORMAL).abs() < 1e-9);
}

#[test]
fn sinusoidal_entropy_is_level_independent() {
    let s1 = shannon_entropy(&sinusoidal(1), &cfg()).unwrap().value;
    assert!((s1 - (LN_2 - 1.0)).abs() < 1e-9);
    for n in [7, 25, 50] {
        let sn = shannon_entropy(&sinusoidal(n), &cfg()).unwrap().value;
        assert!((sn - s1).abs() < 1e-8, "n = {n}: {sn} vs {s1}");
    }
}

#[test]
fn fisher_information_closed_forms() {
    let r = fisher_information(&sinusoidal(1), &cfg()).unwrap();
    assert!((r.value - 4.0 * PI * PI).abs() / (4.0 * PI * PI) < 1e-9);

    // harmonic oscillator: F = 2(2n+1)
    let r = fisher_information(&hermite(0), &cfg()).unwrap();
    assert!((r.value - 2.0).abs() < 1e-8);
    let r = fisher_information(&hermite(5), &cfg()).unwrap();
    assert!((r.value - 22.0).abs() / 22.0 < 1e-6);

    // gamma-like: F = (2β-1)/(β-1), huge near the asymptote yet finite
    let r = fisher_information(&gamma(1.05), &cfg()).unwrap();
    let expected = (2.0 * 1.05 - 1.0) / 0.05;
    assert!(!r.is_divergent());
    assert!((r.value - expected).abs() / expected < 1e-6, "{}", r.value);

    // at the asymptote the computation is rejected, not attempted
    assert!(matches!(
        fisher_information(&gamma(1.0), &cfg()),
        Err(Error::InvalidParameter(_))
    ));

    let u = unit_uniform_grid(0.0, 1.0);
    let r = fisher_information(&u, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10, "F[uniform] = {}", r.value);
}

#[test]
fn kl_divergence_values() {
    let g = make_gaussian(0.0, 1.0).unwrap();
    let r = kl_divergence(&g, &g, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10);

    // KL[N(0,1), N(1,1)] = 1/2
    let g1 = make_gaussian(1.0, 1.0).unwrap();
    let r = kl_divergence(&g, &g1, &cfg()).unwrap();
    assert!((r.value - 0.5).abs() < 1e-9);

    // isolated order-2 zero of the second argument: integrable log singularity
    let r = kl_divergence(&gamma(0.0), &gamma(2.0), &cfg()).unwrap();
    assert!(!r.is_divergent());
    assert!((r.value - KL_GAMMA0_GAMMA2).abs() < 1e-8, "{}", r.value);

    // disjoint supports: genuinely divergent
    let a = unit_uniform_grid(0.0, 1.0);
    let b = unit_uniform_grid(2.0, 3.0);
    let r = kl_divergence(&a, &b, &cfg()).unwrap();
    assert!(r.is_divergent());
    assert_eq!(r.value, f64::INFINITY);
}

#[test]
fn relative_fisher_values() {
    let g = make_gaussian(0.0, 1.0).unwrap();
    let r = relative_fisher(&g, &g, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10);

    // constant log-ratio slope μ = 1
    let g1 = make_gaussian(1.0, 1.0).unwrap();
    let r = relative_fisher(&g, &g1, &cfg()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-8);

    // non-common zero at the origin: ~ 4/x² locally, divergent
    let r = relative_fisher(&gamma(0.0), &gamma(2.0), &cfg()).unwrap();
    assert!(r.is_divergent());
}

#[test]
fn fisher_divergence_g_values() {
    let g0 = make_gaussian(0.0, 1.0).unwrap();
    let g1 = make_gaussian(1.0, 1.0).unwrap();
    let r = fisher_divergence_g(&g0, &g0, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10);
    let r = fisher_divergence_g(&g0, &g1, &cfg()).unwrap();
    assert!((r.value - 2.0).abs() < 1e-8);

    // the defect the directed form fixes: non-common zeros kill G
    let r = fisher_divergence_g(&sinusoidal(1), &sinusoidal(2), &cfg()).unwrap();
    assert!(r.is_divergent());
}

#[test]
fn directed_jfd_values() {
    let s1 = sinusoidal(1);
    let s2 = sinusoidal(2);
    let r = directed_jfd(&s1, &s1, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10);

    let d12 = directed_jfd(&s1, &s2, &cfg()).unwrap();
    assert!(!d12.is_divergent(), "finite at non-common zeros");
    assert!(
        (d12.value - DIRECTED_JFD_SIN_1_2).abs() < 1e-6,
        "{}",
        d12.value
    );
    let d21 = directed_jfd(&s2, &s1, &cfg()).unwrap();
    assert!((d21.value - DIRECTED_JFD_SIN_2_1).abs() < 1e-6);

    // definitional identity: F̄[p, q] = F_rel[p, (p+q)/2]
    let refs: Vec<DensityRef> = vec![
        std::sync::Arc::new(sinusoidal(1)),
        std::sync::Arc::new(sinusoidal(2)),
    ];
    let mix = mixture(refs, &WeightVector::uniform(2)).unwrap();
    let via_frel = relative_fisher(&s1, &mix, &cfg()).unwrap();
    let budget = (d12.error_estimate + via_frel.error_estimate).max(1e-9);
    assert!((d12.value - via_frel.value).abs() <= budget);
}

#[test]
fn jsd_values() {
    let s3 = sinusoidal(3);
    let r = jsd(&s3, &s3, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10);

    let r = jsd(&sinusoidal(1), &sinusoidal(2), &cfg()).unwrap();
    assert!((r.value - JSD_SIN_1_2).abs() < 1e-8);

    // disjoint supports saturate the ln 2 bound
    let a = unit_uniform_grid(0.0, 1.0);
    let b = unit_uniform_grid(2.0, 3.0);
    let r = jsd(&a, &b, &cfg()).unwrap();
    assert!((r.value - LN_2).abs() < 1e-9, "{}", r.value);

    // the plateau the sinusoidal family is known for
    let j20 = jsd(&sinusoidal(20), &sinusoidal(1), &cfg()).unwrap().value;
    let j50 = jsd(&sinusoidal(50), &sinusoidal(1), &cfg()).unwrap().value;
    assert!((j50 - j20).abs() / j20 < 0.02);
}

#[test]
fn jfd_values_and_dual_path() {
    let s1 = sinusoidal(1);
    let s2 = sinusoidal(2);
    let r = jfd(&s1, &s1, &cfg()).unwrap();
    assert!(r.value.abs() < 1e-10);

    let functional = jfd(&s1, &s2, &cfg()).unwrap();
    assert!((functional.value - JFD_SIN_1_2).abs() < 1e-6);
    let definition = jfd_via_directed(&s1, &s2, &cfg()).unwrap();
    assert!(
        (functional.value - definition.value).abs() / functional.value < 1e-6,
        "functional {} vs definition {}",
        functional.value,
        definition.value
    );

    // local maxima flank the reference level
    let h10 = hermite(10);
    let j9 = jfd(&hermite(9), &h10, &cfg()).unwrap().value;
    let j8 = jfd(&hermite(8), &h10, &cfg()).unwrap().value;
    assert!(j9 > j8);
}

#[test]
fn weighted_forms_reduce_and_pin() {
    let s2 = sinusoidal(2);
    let s5 = sinusoidal(5);
    let half = WeightVector::uniform(2);

    let w = jsd_weighted(&[&s2, &s5], &half, &cfg()).unwrap();
    let plain = jsd(&s2, &s5, &cfg()).unwrap();
    assert!((w.value - plain.value).abs() < 1e-10);

    let w = jfd_weighted(&[&s2, &s5], &half, &cfg()).unwrap();
    let plain = jfd(&s2, &s5, &cfg()).unwrap();
    assert!((w.value - plain.value).abs() < 1e-8);

    // all densities equal => 0
    let w = jsd_weighted(&[&s2, &s2, &s2], &WeightVector::uniform(3), &cfg()).unwrap();
    assert!(w.value.abs() < 1e-10);

    // three equal-weight unit Gaussians at means 0, 1, 2
    let g0 = make_gaussian(0.0, 1.0).unwrap();
    let g1 = make_gaussian(1.0, 1.0).unwrap();
    let g2 = make_gaussian(2.0, 1.0).unwrap();
    let w = jsd_weighted(&[&g0, &g1, &g2], &WeightVector::uniform(3), &cfg()).unwrap();
    assert!(
        (w.value - JSDW_THREE_GAUSSIANS).abs() < 1e-8,
        "{}",
        w.value
    );

    // joint permutation invariance
    let wv = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
    let wv_perm = WeightVector::new(vec![0.5, 0.2, 0.3]).unwrap();
    let a = jfd_weighted(&[&g0, &g1, &g2], &wv, &cfg()).unwrap();
    let b = jfd_weighted(&[&g2, &g0, &g1], &wv_perm, &cfg()).unwrap();
    assert!((a.value - b.value).abs() < 1e-10);

    // mismatched lengths are rejected
    assert!(matches!(
        jsd_weighted(&[&g0, &g1], &WeightVector::uniform(3), &cfg()),
        Err(Error::LengthMismatch(2, 3))
    ));
}

#[test]
fn gaussian_012_smoothing_matches_closed_form() {
    let g = make_gaussian(0.0, 1.0).unwrap();
    let smoothed = gaussian_smooth(&g, SmoothingParam::new(0.5).unwrap(), &cfg()).unwrap();

    // N(0,1) * G_{0.5} = N(0, 1.5)
    let target = make_gaussian(0.0, 1.5_f64.sqrt()).unwrap();
    for &x in &[-3.0, -1.2, 0.0, 0.4, 2.7] {
        assert!(
            (smoothed.pdf(x) - target.pdf(x)).abs() < 1e-6,
            "x = {x}: {} vs {}",
            smoothed.pdf(x),
            target.pdf(x)
        );
    }

    // unit-mass kernel preserves mass
    let mass = jenfi::quadrature::integrate(
        |x| smoothed.pdf(x),
        smoothed.integration_window(),
        &[],
        &cfg(),
    );
    assert!((mass.value - 1.0).abs() < 1e-6);

    // smoothing always increases entropy
    for d in [&sinusoidal(3) as &dyn jenfi::Density, &gamma(2.0), &g] {
        let s0 = shannon_entropy(d, &cfg()).unwrap().value;
        let sm = gaussian_smooth(d, SmoothingParam::new(0.1).unwrap(), &cfg()).unwrap();
        let s1 = shannon_entropy(&sm, &cfg()).unwrap().value;
        assert!(s1 > s0, "{}: {s1} <= {s0}", d.label());
    }
}

#[test]
fn debruijn_identity_for_gaussian_pair() {
    let g0 = make_gaussian(0.0, 1.0).unwrap();
    let g1 = make_gaussian(1.0, 1.0).unwrap();
    let eps = [1e-2, 5e-3, 2.5e-3];

    let r = debruijn_check(&g0, &g1, &eps, &cfg()).unwrap();
    assert!(
        r.relative_gap < 0.05,
        "lhs {} rhs {} gap {}",
        r.lhs_slope,
        r.rhs,
        r.relative_gap
    );

    // identical inputs: both sides zero, gap defined as zero
    let r = debruijn_check(&g0, &g0, &eps, &cfg()).unwrap();
    assert!(r.lhs_slope.abs() < 1e-8 && r.rhs.abs() < 1e-10);
    assert_eq!(r.relative_gap, 0.0);

    // fewer than three variances cannot extrapolate
    assert!(matches!(
        debruijn_check(&g0, &g1, &[1e-2], &cfg()),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn classic_debruijn_for_gaussians() {
    let eps = [1e-2, 5e-3, 2.5e-3];
    // F[N(0,σ²)] = 1/σ², slope should be half that
    for (sigma, want) in [(1.0, 0.5), (2.0, 0.125)] {
        let g = make_gaussian(0.0, sigma).unwrap();
        let r = classic_debruijn_check(&g, &eps, &cfg()).unwrap();
        assert!(
            (r.lhs_slope - want).abs() / want < 0.05,
            "sigma {sigma}: slope {} want {want}",
            r.lhs_slope
        );
        assert!(r.relative_gap < 0.05);
    }
}

#[test]
fn grid_density_from_file_reproduces_entropy() {
    let dir = std::env::temp_dir().join("jenfi_value_tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gauss_half.csv");
    let mut body = String::from("# exp(-x^2)/sqrt(pi) sampled on [-6, 6]\n");
    for i in 0..=2000 {
        let x = -6.0 + 12.0 * i as f64 / 2000.0;
        let v = (-x * x).exp() / PI.sqrt();
        body.push_str(&format!("{x:.12e},{v:.12e}\n"));
    }
    std::fs::write(&path, body).unwrap();

    let g = load_grid_density(&path, true).unwrap();
    let s = shannon_entropy(&g, &cfg()).unwrap().value;
    // S[N(0, 1/2)] = ln(pi e)/2
    let exact = 0.5 * (PI * std::f64::consts::E).ln();
    assert!((s - exact).abs() < 1e-4, "{s} vs {exact}");

    let bad = dir.join("negative.csv");
    std::fs::write(&bad, "0,1\n1,-0.5\n2,1\n3,1\n").unwrap();
    assert!(matches!(
        load_grid_density(&bad, true),
        Err(Error::NegativeDensity { .. })
    ));
}
