use nalgebra::{DMatrix, SymmetricEigen};
use replica_calculus::numerics::{
    all_configurations, deformed_expect, effective_beta_check, overlap_kernel, quenched_expect, KernelMode,
    QuadratureSpec, SpinModel,
};
use replica_calculus::{parse, Polynomial};

fn kernel_matrix(n: usize, mode: KernelMode) -> DMatrix<f64> {
    let c = all_configurations(n);
    DMatrix::from_fn(c.len(), c.len(), |i, j| overlap_kernel(&c[i], &c[j], mode).unwrap())
}

#[test]
fn kernels_are_positive_semidefinite() {
    for n in 2..=3 {
        for mode in [KernelMode::Idealized, KernelMode::Exact] {
            let eig = SymmetricEigen::new(kernel_matrix(n, mode));
            let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-10, "N = {n}, {mode:?}: {min}");
        }
        let m = kernel_matrix(n, KernelMode::Exact);
        for i in 0..m.nrows() {
            assert_eq!(m[(i, i)], (1.0 - 1.0 / n as f64) / 2.0);
        }
    }
}

#[test]
fn gibbs_weights_are_normalized() {
    for n in 2..=6 {
        let couplings = (0..n * (n - 1) / 2).map(|i| (i as f64 * 0.37).sin() * 2.0).collect();
        let w = SpinModel::new(n, couplings, 1.3).unwrap().gibbs_state().weights;
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

/// `E_2(q²)` by a fine trapezoid rule over the single coupling: the two
/// flip classes are aligned with probability `p = 1/(1 + e^{-2a})`,
/// `a = βJ/√2`, and `q² = 1` when both replicas share a class.
fn two_spin_overlap(beta: f64) -> f64 {
    let (lo, hi, steps) = (-12.0, 12.0, 200_000);
    let h = (hi - lo) / steps as f64;
    let mut total = 0.0;
    for i in 0..=steps {
        let j = lo + i as f64 * h;
        let a = beta * j / 2f64.sqrt();
        let p = 1.0 / (1.0 + (-2.0 * a).exp());
        let f = (p * p + (1.0 - p) * (1.0 - p)) * (-j * j / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        total += if i == 0 || i == steps { f / 2.0 } else { f };
    }
    total * h
}

#[test]
fn two_spin_quenched_overlap_matches_direct_integral() {
    let edge = Polynomial::parse_monomial("(1,2)").unwrap();
    // the integrand has poles near the real axis at large β; 20 nodes
    // are only good to ~1e-5 at β = 1.2
    let q = QuadratureSpec::with_nodes(80);
    for beta in [0.0, 0.5, 1.2] {
        let got = quenched_expect(&edge, 2, beta, &q, KernelMode::Idealized).unwrap();
        let want = two_spin_overlap(beta);
        assert!((got - want).abs() < 1e-9, "β = {beta}: {got} vs {want}");
    }
}

#[test]
fn infinite_temperature_overlap_is_inverse_size() {
    let edge = Polynomial::parse_monomial("(1,2)").unwrap();
    for n in 2..=4 {
        let v = quenched_expect(&edge, n, 0.0, &QuadratureSpec::with_nodes(4), KernelMode::Idealized).unwrap();
        assert!((v - 1.0 / n as f64).abs() < 1e-13);
    }
}

#[test]
fn deformed_state_is_even_in_lambda() {
    let p = Polynomial::from_text_terms([(1, "(1,2)^2(2,3)"), (-2, "(1,2)(3,4)")]).unwrap();
    let model = SpinModel::new(3, vec![1.1, -0.2, 0.5], 0.9).unwrap();
    let q = QuadratureSpec::with_nodes(9);
    for lambda in [0.1, 0.6, 1.5] {
        let a = deformed_expect(&p, lambda, &model, &q, KernelMode::Exact).unwrap();
        let b = deformed_expect(&p, -lambda, &model, &q, KernelMode::Exact).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn effective_temperature_at_zero_deformation() {
    let r = effective_beta_check(&parse("(1,2)(2,3)").unwrap(), 2, 0.7, 0.0, &QuadratureSpec::with_nodes(10)).unwrap();
    assert!(r.rel_error.unwrap() < 1e-13);
}
