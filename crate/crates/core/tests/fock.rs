use std::f64::consts::{FRAC_PI_2, PI};

use debranges::evaluator::SpaceElement;
use debranges::fock::*;
use debranges::spectral::{SpectralData, TailModel};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lacunary(k: usize) -> SpectralData {
    let t: Vec<f64> = (1..=k).map(|n| 2f64.powi(n as i32)).collect();
    SpectralData::new(t.clone(), t, TailModel::none()).unwrap()
}

fn linear(k: usize) -> SpectralData {
    let t: Vec<f64> = (1..=k).map(|n| n as f64).collect();
    SpectralData::new(t, vec![1.0; k], TailModel::none()).unwrap()
}

fn a_direct(t: &[f64], z: Complex64) -> Complex64 {
    t.iter().map(|&x| 1.0 - z / x).product()
}

#[test]
fn zero_rotation_is_identity() {
    let r = rotation_matrix(&lacunary(6), 0.0).unwrap();
    for (m, row) in r.entries.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            assert_eq!(*v, Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0));
        }
    }
    assert_eq!(r.bound(), 1.0);
}

#[test]
fn rotated_columns_reproduce_rotated_functions() {
    let d = lacunary(8);
    for theta in [FRAC_PI_2, 1.0, 2.5] {
        let r = rotation_matrix(&d, theta).unwrap();
        let rot = Complex64::from_polar(1.0, theta);
        for n in [0, 3, 7] {
            let col: Vec<Complex64> = r.entries.iter().map(|row| row[n]).collect();
            let f = SpaceElement::new(&d, col).unwrap();
            for z in [Complex64::new(3.0, 1.0), Complex64::new(-50.0, 20.0), Complex64::new(0.5, -7.0)] {
                let w = rot * z;
                let expect = a_direct(&d.t, w) * d.mu[n].sqrt() / (w - d.t[n]);
                let got = f.f_eval(z).to_complex();
                assert!((got - expect).norm() <= 1e-10 * expect.norm(), "θ={theta} n={n} z={z}");
            }
        }
    }
}

#[test]
fn column_norms_match_the_rotated_norm_sum() {
    // ‖R(column n)‖² = Σ_k |A(it_k)|² μ_n / (|A′(t_k)|² μ_k |it_k − t_n|²)
    let d = lacunary(10);
    let r = rotation_matrix(&d, FRAC_PI_2).unwrap();
    for n in 0..10 {
        let mut s = 0.0;
        for k in 0..10 {
            let tk = d.t[k];
            let ap: f64 = -1.0 / tk * d.t.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| 1.0 - tk / x).product::<f64>();
            let it = Complex64::new(0.0, tk);
            s += a_direct(&d.t, it).norm_sqr() * d.mu[n] / (ap * ap * d.mu[k] * (it - d.t[n]).norm_sqr());
        }
        let got = r.column_norms()[n];
        assert!((got * got - s).abs() <= 1e-10 * s);
    }
}

#[test]
fn rotated_node_collision() {
    let d = SpectralData::new(vec![-2.0, -1.0, 1.0, 2.0], vec![1.0; 4], TailModel::none()).unwrap();
    assert!(matches!(rotation_matrix(&d, PI), Err(FockError::RotatedNodeCollision { .. })));
}

#[test]
fn lacunary_rotation_bounded_and_stable() {
    let tr = rotation_trend(lacunary, FRAC_PI_2, &[16, 32]).unwrap();
    assert!(tr.bounds.iter().all(|&b| b <= 1e2), "{:?}", tr.bounds);
    assert!(tr.growth <= 1.5, "{}", tr.growth);
}

#[test]
fn linear_rotation_grows() {
    let tr = rotation_trend(linear, FRAC_PI_2, &[16, 32]).unwrap();
    assert!(tr.growth > 3.0, "{}", tr.growth);
}

#[test]
fn decay_check_examples() {
    let geo: Vec<f64> = (1..=40).map(|n| 2f64.powi(n)).collect();
    let r = lemma_decay_check(&geo);
    assert!(r.hypothesis_i);
    assert!(r.prefix_constant <= 1.0);
    assert!((r.delta - 1.0).abs() < 1e-12);

    let inv: Vec<f64> = (1..=40).map(|n| 2f64.powi(-n)).collect();
    let r = lemma_decay_check(&inv);
    assert!(r.hypothesis_ii);
    assert!((r.delta + 1.0).abs() < 1e-12);

    let sq: Vec<f64> = (1..=64).map(|n| 1.0 / (n * n) as f64).collect();
    let r = lemma_decay_check(&sq);
    assert!(!r.hypothesis_ii, "{r:?}");
}

#[test]
fn weight_bands() {
    let d = lacunary(12);
    let w = build_fock_weight(&d, 0.1).unwrap();
    assert_eq!(w.bands.len(), 12);
    assert!(w.bands.windows(2).all(|b| b[0].outer < b[1].inner));
    assert!(w.bands.iter().all(|b| b.table.iter().all(|(_, p)| p.is_finite())));
    assert!(w.mass_ratio_bound <= 20.0, "{}", w.mass_ratio_bound);
    assert!(matches!(build_fock_weight(&d, 0.6), Err(FockError::BandOverlap { .. })));
    assert!(matches!(build_fock_weight(&d, 0.0), Err(FockError::InvalidEpsilon { .. })));
    let w = build_fock_weight(&linear(8), 0.01).unwrap();
    assert!(!w.warnings.is_empty());
}

#[test]
fn phi_table_matches_definition() {
    let d = lacunary(5);
    let w = build_fock_weight(&d, 0.2).unwrap();
    let b = &w.bands[2];
    for &(r, p) in &b.table {
        let expect = 2.0 * a_direct(&d.t, Complex64::new(0.0, r)).norm().ln() + d.mu[b.node].ln();
        assert!((p - expect).abs() <= 1e-12 * expect.abs().max(1.0));
    }
}

#[test]
fn weighted_norm_matches_brute_force() {
    let d = lacunary(5);
    let w = build_fock_weight(&d, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = sample_coefficients(5, &mut rng);
    let q = weighted_norm(&d, &w, &a, Quadrature::default());
    // midpoint in r, trapezoid in angle, F from the evaluator
    let f = SpaceElement::new(&d, a.clone()).unwrap();
    let mut brute = 0.0;
    for b in &w.bands {
        let (nr, na) = (400, 256);
        let dr = (b.outer - b.inner) / nr as f64;
        for i in 0..nr {
            let r = b.inner + (i as f64 + 0.5) * dr;
            let phi = 2.0 * a_direct(&d.t, Complex64::new(0.0, r)).norm().ln() + b.log_mu;
            for j in 0..na {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / na as f64);
                brute += f.f_eval(z).to_complex().norm_sqr() * (-phi).exp() * r * dr * 2.0 * PI / na as f64;
            }
        }
    }
    assert!((q - brute).abs() <= 1e-4 * brute, "{q} vs {brute}");
}

#[test]
fn basis_element_within_global_band() {
    let d = lacunary(10);
    let w = build_fock_weight(&d, 0.1).unwrap();
    let r = norm_compare(&d, &w, &CompareConfig::default()).unwrap();
    for &b in &r.basis_ratios {
        assert!(b.is_finite() && b > 0.0);
        assert!(b >= r.eigen_min * (1.0 - 1e-9) && b <= r.eigen_max * (1.0 + 1e-9));
    }
    assert!(r.min_ratio >= r.eigen_min * (1.0 - 1e-9) && r.max_ratio <= r.eigen_max * (1.0 + 1e-9));
    assert!(r.refinement_change <= 0.01);
    assert!(r.spread <= 1e3);
}

#[test]
fn lacunary_compare_stable() {
    let rs: Vec<CompareReport> = [12, 16]
        .iter()
        .map(|&k| {
            let d = lacunary(k);
            norm_compare(&d, &build_fock_weight(&d, 0.1).unwrap(), &CompareConfig::default()).unwrap()
        })
        .collect();
    let within = |a: f64, b: f64| (a / b).max(b / a) <= 2.0;
    assert!(within(rs[0].min_ratio, rs[1].min_ratio));
    assert!(within(rs[0].max_ratio, rs[1].max_ratio));
    assert!(within(rs[0].spread, rs[1].spread));
}

#[test]
fn linear_compare_bound_grows() {
    let rs: Vec<CompareReport> = [12, 16]
        .iter()
        .map(|&k| {
            let d = linear(k);
            let eps = 0.5 * max_disjoint_epsilon(&d);
            norm_compare(&d, &build_fock_weight(&d, eps).unwrap(), &CompareConfig::default()).unwrap()
        })
        .collect();
    assert!(rs[1].bound() >= 3.0 * rs[0].bound(), "{} {}", rs[0].bound(), rs[1].bound());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn enlarging_bands_never_decreases(seed in 0u64..1000, drop in 0usize..6) {
        let d = lacunary(6);
        let w = build_fock_weight(&d, 0.15).unwrap();
        let keep: Vec<usize> = (0..6).filter(|&i| i != drop).collect();
        let sub = w.subset(&keep);
        let a = sample_coefficients(6, &mut ChaCha8Rng::seed_from_u64(seed));
        let q = Quadrature { radial: 8, angular: 16 };
        prop_assert!(weighted_norm(&d, &sub, &a, q) <= weighted_norm(&d, &w, &a, q));
    }

    #[test]
    fn ratio_invariant_under_scaling(seed in 0u64..1000, re in -3.0f64..3.0, im in 0.1f64..3.0) {
        let d = lacunary(6);
        let w = build_fock_weight(&d, 0.15).unwrap();
        let a = sample_coefficients(6, &mut ChaCha8Rng::seed_from_u64(seed));
        let c = Complex64::new(re, im);
        let ca: Vec<Complex64> = a.iter().map(|x| x * c).collect();
        let q = Quadrature { radial: 8, angular: 16 };
        let r1 = weighted_norm(&d, &w, &a, q) / a.iter().map(|x| x.norm_sqr()).sum::<f64>();
        let r2 = weighted_norm(&d, &w, &ca, q) / ca.iter().map(|x| x.norm_sqr()).sum::<f64>();
        prop_assert!((r1 - r2).abs() <= 1e-12 * r1);
    }

    #[test]
    fn inverse_rotation_composes_to_identity(k in 2usize..10, theta in 0.1f64..3.0) {
        let d = lacunary(k);
        let r = rotation_matrix(&d, theta).unwrap();
        let s = rotation_matrix(&d, -theta).unwrap();
        let scale = r.bound() * s.bound();
        for m in 0..k {
            for n in 0..k {
                let v: Complex64 = (0..k).map(|j| s.entries[m][j] * r.entries[j][n]).sum();
                let e = if m == n { 1.0 } else { 0.0 };
                prop_assert!((v - Complex64::new(e, 0.0)).norm() <= 1e-10 * scale);
            }
        }
    }
}
