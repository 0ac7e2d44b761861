use std::f64::consts::{FRAC_PI_2, PI};

use debranges::evaluator::*;
use debranges::spectral::{SpectralData, TailModel};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn data(t: Vec<f64>, mu: Vec<f64>) -> SpectralData {
    SpectralData::new(t, mu, TailModel::none()).unwrap()
}

/// Error-free product of two doubles as a double-double.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn dd_mul(x: (f64, f64), y: f64) -> (f64, f64) {
    let (p, e) = two_prod(x.0, y);
    let e = e + x.1 * y;
    let s = p + e;
    (s, e - (s - p))
}

#[test]
fn log_a_matches_double_double_product() {
    // |1 − i·2^10/2^k|² = 1 + 4^{10−k}, exact in double precision for k = 1..20
    let t: Vec<f64> = (1..=20).map(|k| 2f64.powi(k)).collect();
    let d = data(t, vec![1.0; 20]);
    let mut prod = (1.0, 0.0);
    for k in 1..=20 {
        prod = dd_mul(prod, 1.0 + 4f64.powi(10 - k));
    }
    let oracle = 0.5 * (prod.0.ln() + prod.1 / prod.0);
    let got = log_a(&d, c(0.0, 1024.0)).unwrap().log_abs;
    assert!((got - oracle).abs() <= 1e-12 * oracle.abs(), "{got} vs {oracle}");
}

#[test]
fn a_prime_matches_central_difference() {
    let d = data(vec![1.0, 2.0, 4.0], vec![1.0; 3]);
    let h = 1e-6;
    let a = |x: f64| log_a(&d, c(x, 0.0)).unwrap().to_complex().re;
    let fd = (a(2.0 + h) - a(2.0 - h)) / (2.0 * h);
    let exact = a_prime_at_node(&d, 1).value();
    assert!((fd - exact).abs() <= 1e-8 * exact.abs());
}

#[test]
fn residue_identity_agrees_with_limit_evaluation() {
    let d = data(vec![-3.0, 0.5, 2.0, 7.0], vec![0.3, 2.0, 1.0, 5.0]);
    for n in 0..d.len() {
        let bn = b_at_node(&d, n).value();
        let eps = 1e-8;
        let tn = d.t[n];
        // B = A·(B/A); the product is smooth through the node
        let b_near = |x: f64| {
            let a = log_a(&d, c(x, 0.0)).unwrap().to_complex().re;
            a * b_over_a(&d, 0.0, c(x, 0.0)).unwrap().re
        };
        let avg = 0.5 * (b_near(tn - eps) + b_near(tn + eps));
        assert!((avg - bn).abs() <= 1e-6 * bn.abs(), "{n}: {avg} vs {bn}");
    }
}

#[test]
fn phase_jump_across_a_node_counts_pi() {
    let d = data(vec![1.0, 2.0, 4.0], vec![1.0, 0.5, 2.0]);
    for (n, &t) in d.t.iter().enumerate() {
        for e in [1e-2, 1e-5, 1e-9] {
            let raw_lo = m_real(&d, 0.0, t - e).atan();
            let raw_hi = m_real(&d, 0.0, t + e).atan();
            // raw arctangent drops by about π; the branch count restores it
            assert!((raw_hi - raw_lo + PI).abs() < 0.05 * (1.0 + 1e3 * e), "{n} {e}");
            let jump = (phase(&d, 0.0, t + e) - raw_hi) - (phase(&d, 0.0, t - e) - raw_lo);
            assert!((jump - PI).abs() < 1e-12);
        }
    }
}

#[test]
fn phase_monotone_on_dense_grid() {
    let d = data(vec![-2.0, 1.0, 1.5, 4.0, 10.0], vec![1.0, 0.2, 3.0, 1.0, 0.7]);
    let mut prev = f64::NEG_INFINITY;
    for i in 0..10_000 {
        let x = -5.0 + 20.0 * i as f64 / 10_000.0;
        let p = phase(&d, 0.3, x);
        assert!(p > prev, "at {x}");
        prev = p;
    }
}

#[test]
fn phase_derivative_is_half_theta_prime_and_matches_differences() {
    let d = data(vec![-2.0, 1.0, 1.5, 4.0, 10.0], vec![1.0, 0.2, 3.0, 1.0, 0.7]);
    let mut rng = 12345u64;
    for _ in 0..100 {
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let x = -4.0 + 16.0 * ((rng >> 11) as f64 / (1u64 << 53) as f64);
        if d.t.iter().any(|t| (t - x).abs() < 1e-3) {
            continue;
        }
        let dp = phase_derivative(&d, 0.0, x);
        let tp = theta_prime_on_r(&d, 0.0, x);
        assert!((dp - 0.5 * tp).abs() <= 1e-9 * dp, "{x}");
        let h = 1e-6 * (1.0 + x.abs());
        let fd = (phase(&d, 0.0, x + h) - phase(&d, 0.0, x - h)) / (2.0 * h);
        assert!((fd - dp).abs() <= 1e-6 * dp, "{x}: {fd} vs {dp}");
    }
}

#[test]
fn theta_prime_scales_inversely_with_masses() {
    let d = data(vec![1.0, 2.0, 5.0], vec![1.0, 2.0, 3.0]);
    let s = d.scaled_masses(4.0);
    for n in 0..3 {
        let a = theta_prime_on_r(&d, 0.0, d.t[n]);
        let b = theta_prime_on_r(&s, 0.0, d.t[n]);
        assert!((a / b - 4.0).abs() < 1e-14);
    }
}

#[test]
fn kernel_coeffs_real_for_real_point() {
    let d = data(vec![1.0, 2.0, 4.0, 8.0], vec![1.0, 2.0, 1.0, 3.0]);
    let k = kernel_coeffs(&d, c(3.3, 0.0));
    assert!(k.iter().all(|a| a.im.abs() <= 1e-15 * a.norm()));
}

#[test]
fn kernel_matches_representation_formula() {
    // k_w(z) = (conj A(w) B(z) − conj B(w) A(z)) / (π (z − conj w)) with B = A·(B/A)
    let d = data(vec![-1.0, 0.5, 2.0, 3.0, 9.0], vec![0.4, 1.0, 2.0, 0.1, 4.0]);
    let w = c(1.3, 0.7);
    let z = c(-0.4, 2.1);
    let a = |p: Complex64| log_a(&d, p).unwrap().to_complex();
    let b = |p: Complex64| a(p) * b_over_a(&d, 0.9, p).unwrap();
    let repr = (a(w).conj() * b(z) - b(w).conj() * a(z)) / (PI * (z - w.conj()));
    let coeffs = kernel_coeffs(&d, w);
    let f = SpaceElement::new(&d, coeffs).unwrap();
    let via_coeffs = f.f_eval(z).to_complex();
    assert!((repr - via_coeffs).norm() <= 1e-12 * repr.norm());
    assert!((kernel_eval(&d, w, z) - repr).norm() <= 1e-12 * repr.norm());
}

#[test]
fn kernel_at_node_is_scaled_basis_vector() {
    let d = data(vec![1.0, 2.0, 4.0], vec![1.0, 2.0, 3.0]);
    let k = kernel_coeffs(&d, c(2.0, 0.0));
    assert_eq!(k[0], c(0.0, 0.0));
    assert_eq!(k[2], c(0.0, 0.0));
    let kv = kernel_value(&d, c(2.0, 0.0));
    let n2 = norm(&k).powi(2);
    assert!((kv - n2).abs() <= 1e-13 * kv);
    // nearby off-node kernels converge to it
    let near = kernel_coeffs(&d, c(2.0 + 1e-9, 0.0));
    assert!((near[1] - k[1]).norm() <= 1e-7 * k[1].norm());
}

#[test]
fn partial_fraction_oracle_for_polynomials() {
    let t = vec![-3.0, -1.0, 0.5, 2.0, 3.5, 6.0];
    let d = data(t.clone(), vec![1.0; 6]);
    let p = |z: Complex64| c(2.0, 0.0) - z * 3.0 + z * z * z * 0.5 + z.powi(5) * 0.01;
    for z in [c(1.0, 1.0), c(-2.2, 0.3), c(7.0, -4.0)] {
        let w: Vec<Complex64> = (0..6)
            .map(|n| p(c(t[n], 0.0)) / a_prime_at_node(&d, n).value())
            .collect();
        let s = cauchy_transform(&d, &w, z).unwrap();
        let got = log_a(&d, z).unwrap().to_complex() * s;
        assert!((got - p(z)).norm() <= 1e-12 * p(z).norm());
    }
}

#[test]
fn clark_alpha_minus_one_recovers_data() {
    let d = data(vec![-2.0, 1.0, 1.5, 4.0, 10.0], vec![1.0, 0.2, 3.0, 1.0, 0.7]);
    let cd = clark_data(&d, 0.0, c(-1.0, 0.0)).unwrap();
    assert_eq!(cd.nodes.len(), d.len());
    for n in 0..d.len() {
        assert!((cd.nodes[n] - d.t[n]).abs() <= 1e-10);
        assert!((cd.masses[n] - d.mu[n]).abs() <= 1e-8 * d.mu[n]);
    }
}

#[test]
fn clark_alpha_plus_one_interlaces() {
    let d = data(vec![-2.0, 1.0, 1.5, 4.0, 10.0], vec![1.0, 0.2, 3.0, 1.0, 0.7]);
    let cd = clark_data(&d, 0.0, c(1.0, 0.0)).unwrap();
    for w in d.t.windows(2) {
        let inside = cd.nodes.iter().filter(|&&x| x > w[0] && x < w[1]).count();
        assert_eq!(inside, 1);
    }
    for (x, m) in cd.nodes.iter().zip(&cd.masses) {
        let law = 2.0 * PI / theta_prime_on_r(&d, 0.0, *x);
        assert!((m - law).abs() <= 1e-8 * m);
        assert!(*m > 0.0);
    }
}

#[test]
fn exceptional_value_flagged_for_finite_mass() {
    let t: Vec<f64> = (1..=10).map(|k| 2f64.powi(k)).collect();
    let mu: Vec<f64> = (1..=10).map(|k| 2f64.powi(-k)).collect();
    let d = SpectralData::new(t, mu, TailModel::geometric(2.0, 0.5)).unwrap();
    let a0 = exceptional_alpha(&d, 0.0).unwrap();
    assert!((a0.norm() - 1.0).abs() < 1e-15);
    let cd = clark_data(&d, 0.0, a0).unwrap();
    assert!(cd.exceptional);
    let other = clark_data(&d, 0.0, c(0.0, 1.0)).unwrap();
    assert!(!other.exceptional);
    let no_tail = SpectralData::new(d.t.clone(), d.mu.clone(), TailModel::none()).unwrap();
    assert!(exceptional_alpha(&no_tail, 0.0).is_none());
}

#[test]
fn f_eval_at_node_uses_residue() {
    let d = data(vec![1.0, 2.0, 4.0], vec![1.0, 2.0, 3.0]);
    let f = SpaceElement::new(&d, vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.3, 0.3)]).unwrap();
    for n in 0..3 {
        let at = f.f_eval(c(d.t[n], 0.0)).to_complex();
        let near: Complex64 = [1e-7, -1e-7]
            .iter()
            .map(|e| f.f_eval(c(d.t[n] + e, 0.0)).to_complex())
            .sum::<Complex64>()
            / 2.0;
        assert!((at - near).norm() <= 1e-9 * at.norm());
        let back = f.coefficient_from_value(n);
        assert!((back - f.coeffs[n]).norm() <= 1e-13 * f.coeffs[n].norm());
    }
}

fn arb_data() -> impl Strategy<Value = SpectralData> {
    (2usize..20).prop_flat_map(|k| {
        (
            proptest::collection::vec(0.05f64..3.0, k),
            proptest::collection::vec(-3.0f64..3.0, k),
            -20.0f64..20.0,
        )
            .prop_map(|(gaps, logm, start)| {
                let mut t = Vec::with_capacity(gaps.len());
                let mut x = start;
                for g in gaps {
                    x += g;
                    if x.abs() < 1e-3 {
                        x += 0.01;
                    }
                    t.push(x);
                }
                let mu = logm.iter().map(|l| l.exp()).collect();
                SpectralData::new(t, mu, TailModel::none()).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reproducing_property(d in arb_data(), re in -10.0f64..10.0, im in 0.1f64..5.0, seed in 0u64..1000) {
        let w = c(re, im);
        let a: Vec<Complex64> = (0..d.len())
            .map(|n| {
                let s = (seed as f64 + n as f64 * 1.7).sin();
                c(s, (s * 3.1).cos())
            })
            .collect();
        let f = SpaceElement::new(&d, a.clone()).unwrap();
        let lhs = inner_product(&a, &kernel_coeffs(&d, w));
        let rhs = f.f_eval(w).to_complex();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1e-300));
    }

    #[test]
    fn kernel_norm_equals_diagonal_value(d in arb_data(), re in -10.0f64..10.0, im in -5.0f64..5.0) {
        prop_assume!(im.abs() > 1e-3);
        let w = c(re, im);
        let k = kernel_coeffs(&d, w);
        let n2 = norm(&k).powi(2);
        let kv = kernel_value(&d, w);
        prop_assert!((n2 - kv).abs() <= 1e-10 * kv);
    }

    #[test]
    fn residue_identity_b(d in arb_data()) {
        for n in 0..d.len() {
            let b = b_at_node(&d, n);
            let ap = a_prime_at_node(&d, n);
            let expect = -d.mu[n] * ap.value() / PI;
            prop_assert!((b.value() - expect).abs() <= 1e-12 * expect.abs());
        }
    }

    #[test]
    fn phase_nodes_and_monotonicity(d in arb_data(), r in -2.0f64..2.0) {
        for n in 0..d.len() {
            prop_assert_eq!(phase(&d, r, d.t[n]), FRAC_PI_2 + PI * n as f64);
        }
        let lo = d.t[0] - 2.0;
        let hi = d.t[d.len() - 1] + 2.0;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..500 {
            let x = lo + (hi - lo) * i as f64 / 500.0;
            let p = phase(&d, r, x);
            prop_assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn positive_coefficients_interlace(d in arb_data(), seed in 0u64..100) {
        let cs: Vec<f64> = (0..d.len()).map(|n| 0.1 + ((seed + n as u64) % 7) as f64).collect();
        let roots = find_real_roots(&d, &cs, d.t[0], d.t[d.len() - 1]).unwrap();
        prop_assert_eq!(roots.len(), d.len() - 1);
        for (k, p) in roots.iter().enumerate() {
            prop_assert!(p.value > d.t[k] && p.value < d.t[k + 1]);
            let (v, s) = cauchy_real(&d, &cs, p).unwrap();
            prop_assert!(v.abs() <= 1e-12 * s);
        }
    }

    #[test]
    fn parseval_round_trip(d in arb_data(), seed in 0u64..1000) {
        let a: Vec<Complex64> = (0..d.len())
            .map(|n| c(((seed + n as u64) as f64).sin(), ((seed * 3 + n as u64) as f64).cos()))
            .collect();
        let f = SpaceElement::new(&d, a.clone()).unwrap();
        let rec: Vec<Complex64> = (0..d.len()).map(|n| f.coefficient_from_value(n)).collect();
        let n1 = norm(&a);
        let n2 = norm(&rec);
        prop_assert!((n1 - n2).abs() <= 1e-10 * n1);
        prop_assert!((inner_product(&a, &a).re - n1 * n1).abs() <= 1e-12 * n1 * n1);
    }
}
