//! Quenched and deformed expectations of overlap polynomials.

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::numerics::model::{coupling_count, KernelMode, SpinModel};
use crate::numerics::observable::{softmax_in_place, CompiledPolynomial, StateSpace};
use crate::numerics::quadrature::{GaussianRule, NeumaierSum, QuadratureSpec};

/// `E_N(P)` at inverse temperature `β`.
pub fn quenched_expect(
    p: &Polynomial,
    n: usize,
    beta: f64,
    quad: &QuadratureSpec,
    kernel: KernelMode,
) -> Result<f64> {
    Ok(quenched_expect_many(&[p], n, beta, quad, kernel)?[0])
}

/// [`quenched_expect`] for several polynomials sharing one pass over the
/// disorder.
pub fn quenched_expect_many(
    ps: &[&Polynomial],
    n: usize,
    beta: f64,
    quad: &QuadratureSpec,
    kernel: KernelMode,
) -> Result<Vec<f64>> {
    check_finite("inverse temperature", beta)?;
    let space = StateSpace::new(n)?;
    let mut compiled = compile_all(ps, &space, kernel)?;
    let rule = GaussianRule::new(coupling_count(n), quad)?;
    let scale = beta / (n as f64).sqrt();
    let mut w = vec![0.0; space.len()];
    let mut acc = vec![NeumaierSum::default(); ps.len()];
    rule.for_each(|j, weight| {
        space.pair_sums(j, &mut w);
        w.iter_mut().for_each(|x| *x *= scale);
        softmax_in_place(&mut w);
        for (c, a) in compiled.iter_mut().zip(acc.iter_mut()) {
            a.add(weight * c.evaluate(&w));
        }
    });
    Ok(acc.iter().map(NeumaierSum::value).collect())
}

/// Disorder average over `J′` of the product of per-replica deformed
/// states `⟨· e^{λK}⟩/⟨e^{λK}⟩` for the fixed couplings of `model`.
pub fn deformed_expect(
    p: &Polynomial,
    lambda: f64,
    model: &SpinModel,
    quad: &QuadratureSpec,
    kernel: KernelMode,
) -> Result<f64> {
    check_finite("λ", lambda)?;
    let n = model.spins();
    let space = StateSpace::new(n)?;
    let mut compiled = CompiledPolynomial::new(p, &space, kernel)?;
    let rule = GaussianRule::new(coupling_count(n), quad)?;
    let mut base = vec![0.0; space.len()];
    space.pair_sums(model.couplings(), &mut base);
    let scale = model.beta() / (n as f64).sqrt();
    let mut w = vec![0.0; space.len()];
    Ok(rule.expect(|jp| {
        space.pair_sums(jp, &mut w);
        for (x, b) in w.iter_mut().zip(&base) {
            *x = scale * b + lambda * *x / n as f64;
        }
        softmax_in_place(&mut w);
        compiled.evaluate(&w)
    }))
}

/// `Av_J` of [`deformed_expect`] for every `λ` in `lambdas` and every
/// polynomial, indexed `[λ][polynomial]`.
pub fn averaged_deformed_expect_many(
    ps: &[&Polynomial],
    n: usize,
    beta: f64,
    lambdas: &[f64],
    quad: &QuadratureSpec,
    kernel: KernelMode,
) -> Result<Vec<Vec<f64>>> {
    check_finite("inverse temperature", beta)?;
    for &l in lambdas {
        check_finite("λ", l)?;
    }
    let space = StateSpace::new(n)?;
    let s = space.len();
    let mut compiled = compile_all(ps, &space, kernel)?;
    let rule = GaussianRule::new(coupling_count(n), quad)?;

    // e^{λK(s)} per (J′ node, λ), shifted for stability
    let mut deform: Vec<f64> = Vec::with_capacity(rule.len() * lambdas.len() * s);
    let mut inner_weights = Vec::with_capacity(rule.len());
    let mut sums = vec![0.0; s];
    rule.for_each(|jp, weight| {
        inner_weights.push(weight);
        space.pair_sums(jp, &mut sums);
        for &l in lambdas {
            let max = sums.iter().map(|x| l * x / n as f64).fold(f64::NEG_INFINITY, f64::max);
            deform.extend(sums.iter().map(|x| (l * x / n as f64 - max).exp()));
        }
    });

    let scale = beta / (n as f64).sqrt();
    let mut acc = vec![vec![NeumaierSum::default(); ps.len()]; lambdas.len()];
    let mut boltz = vec![0.0; s];
    let mut w = vec![0.0; s];
    rule.for_each(|j, outer| {
        space.pair_sums(j, &mut boltz);
        boltz.iter_mut().for_each(|x| *x *= scale);
        softmax_in_place(&mut boltz);
        let mut inner = vec![vec![NeumaierSum::default(); ps.len()]; lambdas.len()];
        for (node, &iw) in inner_weights.iter().enumerate() {
            for li in 0..lambdas.len() {
                let d = &deform[(node * lambdas.len() + li) * s..][..s];
                let mut z = 0.0;
                for k in 0..s {
                    w[k] = boltz[k] * d[k];
                    z += w[k];
                }
                w.iter_mut().for_each(|x| *x /= z);
                for (pi, c) in compiled.iter_mut().enumerate() {
                    inner[li][pi].add(iw * c.evaluate(&w));
                }
            }
        }
        for li in 0..lambdas.len() {
            for pi in 0..ps.len() {
                acc[li][pi].add(outer * inner[li][pi].value());
            }
        }
    });
    Ok(acc
        .iter()
        .map(|row| row.iter().map(NeumaierSum::value).collect())
        .collect())
}

fn compile_all(ps: &[&Polynomial], space: &StateSpace, kernel: KernelMode) -> Result<Vec<CompiledPolynomial>> {
    ps.iter().map(|p| CompiledPolynomial::new(p, space, kernel)).collect()
}

fn check_finite(what: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mono(s: &str) -> Polynomial {
        Polynomial::parse_monomial(s).unwrap()
    }

    #[test]
    fn normalization_and_infinite_temperature() {
        let q = QuadratureSpec::with_nodes(8);
        assert_relative_eq!(quenched_expect(&mono("1"), 3, 0.7, &q, KernelMode::Exact).unwrap(), 1.0, epsilon = 1e-13);
        let v = quenched_expect(&mono("(1,2)"), 3, 0.0, &q, KernelMode::Idealized).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn undeformed_limit_and_parity() {
        let q = QuadratureSpec::with_nodes(10);
        let model = SpinModel::new(3, vec![0.4, -1.1, 0.8], 0.6).unwrap();
        let p = Polynomial::from_text_terms([(1, "(1,2)"), (2, "(1,2)(2,3)")]).unwrap();
        let space = StateSpace::new(3).unwrap();
        let mut w = vec![0.0; space.len()];
        space.pair_sums(model.couplings(), &mut w);
        w.iter_mut().for_each(|x| *x *= 0.6 / 3f64.sqrt());
        softmax_in_place(&mut w);
        let direct = CompiledPolynomial::new(&p, &space, KernelMode::Exact).unwrap().evaluate(&w);
        let at0 = deformed_expect(&p, 0.0, &model, &q, KernelMode::Exact).unwrap();
        assert_relative_eq!(at0, direct, epsilon = 1e-14);
        let plus = deformed_expect(&p, 0.7, &model, &q, KernelMode::Exact).unwrap();
        let minus = deformed_expect(&p, -0.7, &model, &q, KernelMode::Exact).unwrap();
        assert_relative_eq!(plus, minus, epsilon = 1e-14);
    }

    #[test]
    fn averaged_deformed_matches_single_disorder_loop() {
        let q = QuadratureSpec::with_nodes(5);
        let p = mono("(1,2)");
        let got = averaged_deformed_expect_many(&[&p], 3, 0.5, &[0.4], &q, KernelMode::Exact).unwrap()[0][0];
        let rule = GaussianRule::new(3, &q).unwrap();
        let want = rule.expect(|j| {
            let model = SpinModel::new(3, j.to_vec(), 0.5).unwrap();
            deformed_expect(&p, 0.4, &model, &q, KernelMode::Exact).unwrap()
        });
        assert_relative_eq!(got, want, epsilon = 1e-13);
    }

    #[test]
    fn relabeling_is_invisible() {
        let q = QuadratureSpec::with_nodes(8);
        let a = quenched_expect(&mono("(1,2)(2,3)"), 3, 0.5, &q, KernelMode::Exact).unwrap();
        let b = quenched_expect(&mono("(7,3)(3,9)"), 3, 0.5, &q, KernelMode::Exact).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn capacity_without_monte_carlo() {
        let q = QuadratureSpec::default();
        assert!(matches!(
            quenched_expect(&mono("(1,2)"), 5, 0.5, &q, KernelMode::Exact),
            Err(Error::Capacity { .. })
        ));
    }
}
