use debranges::forge::*;
use debranges::spectral::{restrict, SpectralData, TailModel};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn data(t: Vec<f64>, mu: Vec<f64>) -> SpectralData {
    SpectralData::new(t, mu, TailModel::none()).unwrap()
}

/// Pairs `(c, c + gap(c))` after an optional leading node.
fn paired(lead: Option<(f64, f64)>, centers: &[f64], gap: impl Fn(f64) -> f64, mass: impl Fn(usize) -> (f64, f64)) -> SpectralData {
    let mut t = Vec::new();
    let mut mu = Vec::new();
    if let Some((t0, m0)) = lead {
        t.push(t0);
        mu.push(m0);
    }
    for (k, &c) in centers.iter().enumerate() {
        let (ml, mr) = mass(k);
        t.push(c);
        t.push(c + gap(c));
        mu.push(ml);
        mu.push(mr);
    }
    data(t, mu)
}

fn ii_toy() -> SpectralData {
    // t_{n_k} = 10^k, d_{n_k} = 10^k k^-6, μ = t
    let mut t = Vec::new();
    for k in 1..=3 {
        let c = 10f64.powi(k);
        t.push(c);
        t.push(c + c * (k as f64).powi(-6));
    }
    let mu = t.clone();
    data(t, mu)
}

fn iii_toy() -> SpectralData {
    let centers: Vec<f64> = (2..=4).map(|k| 10f64.powi(2 * k)).collect();
    paired(Some((1.0, 1.0)), &centers, |_| 1e-6, |_| (1.0, 2.0))
}

fn iv_toy() -> SpectralData {
    let t: Vec<f64> = (1..=12).map(|n| 2f64.powi(n)).collect();
    data(t, vec![1.0; 12])
}

fn dense_solve(system: &BlockSystem) -> Vec<f64> {
    let m: DMatrix<f64> = system.matrix.clone();
    let x = m.lu().solve(&system.rhs).expect("non-singular block system");
    x.iter().copied().collect()
}

fn max_rel_diff(x: &[f64], y: &[f64]) -> f64 {
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    x.iter().zip(y).map(|(a, b)| (a - b).abs() / scale).fold(0.0, f64::max)
}

fn assert_oracle(cert: &Certificate, tol: f64) {
    let (system, x) = certificate_system(cert).unwrap();
    let dense = dense_solve(&system);
    assert!(x.iter().all(|v| v.is_finite()));
    let diff = max_rel_diff(&x, &dense);
    assert!(diff <= tol, "fixed point differs from dense solve by {diff:e}");
}

#[test]
fn case_ii_toy_matches_dense_solve() {
    let d = ii_toy();
    let cert = case_ii_with_blocks(&d, &[0, 2, 4], &ForgeConfig::default()).unwrap();
    assert_eq!(cert.case, CaseTag::II);
    assert_eq!(certificate_system(&cert).unwrap().1.len(), 6);
    assert_oracle(&cert, 1e-12);
    assert!(cert.a.iter().chain(&cert.b).all(|&v| v > 0.0));
    assert!(cert.checks.dot_ab > 0.0);
    assert!(cert.max_residual() <= 1e-10);
}

#[test]
fn case_ii_masked_blocks_are_unperturbed() {
    let d = ii_toy();
    let cfg = ForgeConfig { mask_cross_terms: true, ..Default::default() };
    let cert = case_ii_with_blocks(&d, &[0, 2, 4], &cfg).unwrap();
    assert!(cert.masked);
    for p in &cert.parameters {
        assert!((p.r - 1.0).abs() <= 1e-14, "r_{} = {}", p.k, p.r);
        assert!((p.q - 1.0).abs() <= 1e-14, "q_{} = {}", p.k, p.q);
    }
}

#[test]
fn case_ii_greedy_on_integer_nodes() {
    let t: Vec<f64> = (1..=5000).map(|n| n as f64).collect();
    let d = SpectralData::new(t, vec![1.0; 5000], TailModel::power(1.0, 0.0)).unwrap();
    let cert = forge_case_ii(&d, 4, &ForgeConfig::default()).unwrap();
    assert_eq!(cert.blocks.len(), 4);
    assert!(cert.solver.contraction_factor <= 0.125);
    assert!(cert.sub_residual.is_some());
    let report = verify(&cert, 1e-8);
    assert!(report.passed, "{:?}", report.failures);
    assert_oracle(&cert, 1e-10);
}

#[test]
fn case_ii_residuals_relative_to_local_scale() {
    let d = ii_toy();
    let cert = case_ii_with_blocks(&d, &[0, 2, 4], &ForgeConfig::default()).unwrap();
    for r in &cert.checks.residuals {
        assert!(r.h <= 1e-10 && r.s <= 1e-10, "{r:?}");
    }
}

#[test]
fn case_iii_toy_matches_dense_solve() {
    let d = iii_toy();
    let cert = case_iii_with_blocks(&d, 0, &[1, 3, 5], &ForgeConfig::default()).unwrap();
    assert_oracle(&cert, 1e-12);
    assert_eq!(cert.anchor, Some(0));
    assert_eq!((cert.a[0], cert.b[0]), (10.0, 10.0));
    assert!(cert.checks.dot_ab > 0.0);
    // a_0 b_0 = 100 dominates the remaining products
    let rest: f64 = cert.a[1..].iter().zip(&cert.b[1..]).map(|(a, b)| (a * b).abs()).sum();
    assert!(rest < 100.0);
    let report = verify(&cert, 1e-8);
    assert!(report.passed, "{:?}", report.failures);
}

#[test]
fn case_iii_zeros_sit_one_unit_from_near_node() {
    let d = iii_toy();
    let cert = case_iii_with_blocks(&d, 0, &[1, 3, 5], &ForgeConfig::default()).unwrap();
    for (z, blk) in cert.zeros.iter().zip(&cert.blocks) {
        let BlockSpec::NearFar { near, .. } = *blk else { panic!("near/far block expected") };
        assert!((z.minus_node(&cert.data, near).abs() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn case_iii_masked_blocks_are_unperturbed() {
    let d = iii_toy();
    let cfg = ForgeConfig { mask_cross_terms: true, ..Default::default() };
    let cert = case_iii_with_blocks(&d, 0, &[1, 3, 5], &cfg).unwrap();
    for p in &cert.parameters {
        assert!((p.r - 1.0).abs() <= 1e-12 && (p.q - 1.0).abs() <= 1e-12, "{p:?}");
    }
}

#[test]
fn case_iii_mirrored_pair_places_zero_outside() {
    let centers = [1e4, 1e7];
    let d = paired(Some((1.0, 1.0)), &centers, |_| 1e-6, |k| if k == 0 { (2.0, 1.0) } else { (1.0, 2.0) });
    let cert = case_iii_with_blocks(&d, 0, &[1, 3], &ForgeConfig::default()).unwrap();
    // lighter node on the right: the zero sits to its right
    assert!(cert.zeros[0].value > d.t[2]);
    assert!(cert.zeros[1].value < d.t[3]);
    assert!(verify(&cert, 1e-8).passed);
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn case_iv_toy_roots_interlace() {
    let d = iv_toy();
    let cfg = ForgeConfig { iv_mass_exponent: 2.0, ..Default::default() };
    let clusters = [(0, 3, 4), (5, 9, 10)];
    let cert = case_iv_with_blocks(&d, &clusters, &cfg).unwrap();
    assert!(cert.relaxations.iter().any(|r| r.name == "mass-exponent" && r.used == 2.0));
    assert_eq!(cert.checks.root_counts.as_deref(), Some(&[1, 1][..]));
    let w = cert.h_weights();
    let h = |x: f64| w.iter().zip(&cert.data.t).map(|(w, t)| w / (x - t)).sum::<f64>();
    for (z, blk) in cert.zeros.iter().zip(&cert.blocks) {
        let BlockSpec::Cluster { pivot, .. } = *blk else { panic!("cluster block expected") };
        let (lo, hi) = (cert.data.t[pivot - 1], cert.data.t[pivot]);
        assert!(z.value > lo && z.value < hi);
        let oracle = bisect(h, lo * (1.0 + 1e-12), hi * (1.0 - 1e-12));
        assert!((oracle - z.value).abs() <= 1e-10 * z.value, "{oracle} vs {}", z.value);
    }
    assert!(cert.b.iter().all(|&b| b > 0.0));
    assert_oracle(&cert, 1e-12);
    let report = verify(&cert, 1e-8);
    assert!(report.passed, "{:?}", report.failures);
}

#[test]
fn case_iv_roots_helper_agrees_with_certificate() {
    let d = iv_toy();
    let cfg = ForgeConfig { iv_mass_exponent: 2.0, ..Default::default() };
    let cert = case_iv_with_blocks(&d, &[(0, 3, 4), (5, 9, 10)], &cfg).unwrap();
    let roots = case_iv_roots(&cert.data, &cert.blocks).unwrap();
    for (r, z) in roots.iter().zip(&cert.zeros) {
        assert_eq!(r.value, z.value);
    }
}

fn iv_lacunary() -> SpectralData {
    let t: Vec<f64> = (1..=120).map(|n| 2f64.powi(n)).collect();
    let mu: Vec<f64> = (1..=120).map(|n| if n % 8 == 0 { 1.0 } else { 2f64.powi(n) }).collect();
    data(t, mu)
}

#[test]
fn case_iv_greedy_with_full_exponent() {
    let d = iv_lacunary();
    let cert = forge_case_iv(&d, 3, &ForgeConfig::default()).unwrap();
    assert!(cert.relaxations.is_empty());
    let dom = cert.checks.dominance.as_ref().unwrap();
    assert!(dom.total_off_diagonal <= 0.01);
    assert!(dom.margin >= 100.0);
    let report = verify(&cert, 1e-8);
    assert!(report.passed, "{:?}", report.failures);
    assert_oracle(&cert, 1e-10);
    // {b_{n_k}} summable and the free terms obey |u_k| ≲ k²Δ/t
    let u = cert.checks.u.as_ref().unwrap();
    assert!(u.iter().all(|&(_, ratio)| ratio.is_finite() && ratio < 10.0));
    let pivots: f64 = cert
        .blocks
        .iter()
        .map(|b| match *b {
            BlockSpec::Cluster { pivot, .. } => cert.b[pivot],
            _ => unreachable!(),
        })
        .sum();
    assert!(pivots.is_finite() && pivots > 0.0);
}

#[test]
fn case_iv_corrupted_certificate_fails_verify() {
    let d = iv_lacunary();
    let mut cert = forge_case_iv(&d, 2, &ForgeConfig::default()).unwrap();
    let BlockSpec::Cluster { pivot, .. } = cert.blocks[0] else { unreachable!() };
    cert.b[pivot] = -cert.b[pivot];
    let report = verify(&cert, 1e-8);
    assert!(!report.passed);
}

#[test]
fn verify_rejects_negative_dot_product() {
    let d = ii_toy();
    let mut cert = case_ii_with_blocks(&d, &[0, 2, 4], &ForgeConfig::default()).unwrap();
    for b in cert.b.iter_mut() {
        *b = -*b;
    }
    let report = verify(&cert, 1e-8);
    assert!(!report.passed);
    assert!(report.failures.iter().any(|f| f.contains("not positive")));
}

#[test]
fn lift_pads_with_zeros_and_keeps_dot_product() {
    let t: Vec<f64> = (1..=5000).map(|n| n as f64).collect();
    let d = SpectralData::new(t, vec![1.0; 5000], TailModel::power(1.0, 0.0)).unwrap();
    let (sub, r) = forge_case_ii_restricted(&d, 3, &ForgeConfig::default()).unwrap();
    let lifted = lift_via_submu(&sub, &d, &r.support).unwrap();
    assert_eq!(lifted.a.len(), d.len());
    assert_eq!(lifted.checks.dot_ab, sub.checks.dot_ab);
    for &i in &r.complement {
        assert_eq!((lifted.a[i], lifted.b[i]), (0.0, 0.0));
    }
    assert!(lifted.max_residual() <= 10.0 * sub.max_residual().max(1e-16));
    assert_eq!(lifted.sub_residual, Some(sub.max_residual()));
}

#[test]
fn lift_with_full_support_is_identity() {
    let d = ii_toy();
    let cert = case_ii_with_blocks(&d, &[0, 2, 4], &ForgeConfig::default()).unwrap();
    let support: Vec<usize> = (0..d.len()).collect();
    let lifted = lift_via_submu(&cert, &d, &support).unwrap();
    assert_eq!(lifted.a, cert.a);
    assert_eq!(lifted.b, cert.b);
    assert_eq!(lifted.checks.dot_ab, cert.checks.dot_ab);
}

#[test]
fn lift_rejects_mismatched_support() {
    let d = ii_toy();
    let r = restrict(&d, &[0, 1]).unwrap();
    let cert = case_ii_with_blocks(&r.data, &[0], &ForgeConfig::default()).unwrap();
    let err = lift_via_submu(&cert, &d, &[2, 3]).unwrap_err();
    assert!(matches!(err, ForgeError::IndexMismatch(_)));
}

fn pair_ladder() -> SpectralData {
    paired(None, &[10.0, 1e5, 1e8, 1e11, 1e14], |_| 1.0, |_| (1.0, 1.0))
}

#[test]
fn generating_pair_spacing_and_bounds() {
    let d = pair_ladder();
    let cert = case_ii_with_blocks(&d, &[0, 2, 4, 6, 8], &ForgeConfig::default()).unwrap();
    let p = build_generating_pair(&cert).unwrap();
    assert!(p.s.len() >= 3);
    for k in 1..p.s.len() {
        assert!(p.s_tilde[k] > 10.0 * p.s[k - 1]);
        assert!(p.s[k] > 10.0 * p.s_tilde[k]);
    }
    assert_eq!(p.samples.len(), 10);
    assert!(p.lower_bound_holds);
    assert!(p.upper_constant.is_finite());
    for s in &p.samples {
        assert!(s.s2 <= s.g1 * (1.0 + 1e-14));
        assert!(s.g1 <= p.upper_constant * s.y_s2 * (1.0 + 1e-12));
    }
    assert!(p.lambda1_residuals.iter().all(|&r| r <= 1e-8), "{:?}", p.lambda1_residuals);
}

#[test]
fn beta_is_decreasing_with_linear_lower_bound() {
    let d = pair_ladder();
    let ys: Vec<f64> = (0..40).map(|j| 10f64.powf(j as f64 * 0.4)).collect();
    let b: Vec<f64> = ys.iter().map(|&y| beta(&d, y)).collect();
    assert!(b.windows(2).all(|w| w[1] < w[0]));
    let floor = ys.iter().zip(&b).map(|(y, b)| y * b).fold(f64::INFINITY, f64::min);
    assert!(floor > 0.0);
}

#[test]
fn generating_pair_needs_three_zeros() {
    let d = ii_toy();
    let cert = case_ii_with_blocks(&d, &[0, 2], &ForgeConfig::default()).unwrap();
    assert!(matches!(
        build_generating_pair(&cert),
        Err(ForgeError::SubsequenceNeeded { .. })
    ));
}

#[test]
fn bior_single_moment_on_two_nodes() {
    let d = data(vec![1.0, 2.0], vec![1.0, 1.0]);
    let r = bior_construct(&d, 1).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((r.a[0].abs() - s).abs() <= 1e-15 && (r.a[1].abs() - s).abs() <= 1e-15);
    assert!((r.a[0] + r.a[1]).abs() <= 1e-15);
}

fn bior_data(k: usize) -> SpectralData {
    let t: Vec<f64> = (1..=k).map(|i| i as f64).collect();
    let mu: Vec<f64> = t.iter().map(|x| x.powi(-6)).collect();
    SpectralData::new(t, mu, TailModel::power(1.0, -6.0)).unwrap()
}

#[test]
fn bior_moment_residuals_and_zeros() {
    for n in 1..=3 {
        let d = bior_data(48);
        let r = bior_construct(&d, n).unwrap();
        let norm: f64 = r.a.iter().map(|x| x * x).sum::<f64>().sqrt();
        for l in 0..n {
            let s: f64 = (0..d.len()).map(|i| r.a[i] * d.t[i].powi(l as i32) * d.mu[i].sqrt()).sum();
            let m = (0..d.len()).map(|i| d.t[i].powi(l as i32) * d.mu[i].sqrt()).fold(0.0, f64::max);
            assert!(s.abs() <= 1e-12 * norm * m, "N={n} l={l}: {s:e}");
        }
        assert_eq!(r.generating_function.degree(), d.len() - n);
        assert_eq!(r.zeros_on_nodes, 0);
        assert!(r.representation_error <= 1e-9, "{}", r.representation_error);
    }
}

#[test]
fn bior_rejects_divergent_hypothesis() {
    let t: Vec<f64> = (1..=16).map(|i| i as f64).collect();
    let d = SpectralData::new(t, vec![1.0; 16], TailModel::power(1.0, 0.0)).unwrap();
    assert!(matches!(bior_construct(&d, 2), Err(ForgeError::HypothesisFailure(_))));
}

#[test]
fn seed_identity_small_example() {
    let s = infinite_defect_seed(&[1.0, 2.0, 4.0, 8.0, 16.0], &[3.0, 12.0]).unwrap();
    assert!(s.identity_error <= 1e-12);
    let z = Complex64::new(0.0, 5.0);
    let g = &s.generating_function.residues;
    let sum: Complex64 = g.iter().zip(&s.data.t).map(|(g, t)| g / (z - t)).sum();
    let a: Complex64 = s.data.t.iter().map(|t| 1.0 - z / t).product();
    let d = (1.0 - z / 3.0) * (1.0 - z / 12.0);
    assert!((a * sum - z * d).norm() <= 1e-12 * (z * d).norm());
}

#[test]
fn seed_with_trivial_d_is_lagrange_interpolation() {
    let s = infinite_defect_seed(&[1.0, 2.0], &[]).unwrap();
    for &z in &[Complex64::new(0.3, 1.0), Complex64::new(-4.0, 0.5)] {
        let sum: Complex64 = s.generating_function.residues.iter().zip(&s.data.t).map(|(g, t)| g / (z - t)).sum();
        let a = (1.0 - z) * (1.0 - z / 2.0);
        assert!((a * sum - z).norm() <= 1e-14 * z.norm());
    }
}

#[test]
fn seed_rejects_collision_and_high_degree() {
    assert!(matches!(
        infinite_defect_seed(&[1.0, 2.0, 4.0, 8.0], &[2.0]),
        Err(ForgeError::NodeCollision { node: 1, .. })
    ));
    assert!(matches!(
        infinite_defect_seed(&[1.0, 2.0, 4.0], &[3.0, 5.0]),
        Err(ForgeError::DegreeTooHigh { .. })
    ));
}

#[test]
fn seed_masses_follow_the_rule() {
    let t0: Vec<f64> = (1..=24).map(|i| 2f64.powi(i)).collect();
    let dz: Vec<f64> = (0..8).map(|j| 3.0 * 8f64.powi(j)).collect();
    let s = infinite_defect_seed(&t0, &dz).unwrap();
    assert!(s.identity_error <= 1e-10);
    // tail of the masses decays
    assert!(s.data.mu[12..].iter().all(|&m| m <= 1.0));
    let n = 3;
    let tn = t0[n];
    let dv: f64 = dz.iter().map(|d| 1.0 - tn / d).product();
    let ap: f64 = -(1.0 / tn) * t0.iter().enumerate().filter(|&(k, _)| k != n).map(|(_, tk)| 1.0 - tn / tk).product::<f64>();
    let expect = ((n + 1) as f64 * dv / ap).powi(2);
    assert!((s.data.mu[n] - expect).abs() <= 1e-12 * expect);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn forge_is_deterministic(m in prop::collection::vec(0.5f64..4.0, 10)) {
        let d = paired(None, &[10.0, 1e5, 1e8, 1e11, 1e14], |_| 1.0, |k| (m[2 * k], m[2 * k + 1]));
        let cfg = ForgeConfig::default();
        let a = case_ii_with_blocks(&d, &[0, 2, 4, 6, 8], &cfg).unwrap();
        let b = case_ii_with_blocks(&d, &[0, 2, 4, 6, 8], &cfg).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn emitted_certificates_verify(m in prop::collection::vec(0.5f64..4.0, 10), gap in 0.25f64..4.0) {
        let d = paired(None, &[10.0, 1e5, 1e8, 1e11, 1e14], |_| gap, |k| (m[2 * k], m[2 * k + 1]));
        let cert = case_ii_with_blocks(&d, &[0, 2, 4, 6, 8], &ForgeConfig::default()).unwrap();
        let report = verify(&cert, 1e-8);
        prop_assert!(report.passed, "{:?}", report.failures);
        prop_assert!(report.contraction_factor < 0.5);
        let (system, x) = certificate_system(&cert).unwrap();
        prop_assert!(max_rel_diff(&x, &dense_solve(&system)) <= 1e-10);
    }

    #[test]
    fn iii_sign_alternation_keeps_dot_positive(m in prop::collection::vec(0.5f64..3.0, 6)) {
        let centers = [1e4, 1e7, 1e10];
        let d = paired(Some((1.0, 1.0)), &centers, |_| 1e-4, |k| (m[2 * k], m[2 * k + 1]));
        let cert = case_iii_with_blocks(&d, 0, &[1, 3, 5], &ForgeConfig::default()).unwrap();
        prop_assert!(cert.checks.dot_ab > 0.0);
        prop_assert!(verify(&cert, 1e-8).passed);
    }
}
