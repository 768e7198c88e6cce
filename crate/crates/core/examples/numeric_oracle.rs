// Finite-N SK checks of the symbolic identities, on a coarse grid so it
// runs in a few seconds. The acceptance suite uses 20 nodes per axis.
//
//     cargo run --release --example numeric_oracle

use replica_calculus::cli::report_line;
use replica_calculus::numerics::{
    beta_derivative_check, beta_second_derivative_ratio, effective_beta_check, lambda_derivative_check,
    quenched_expect, KernelMode, QuadratureSpec, SpinModel,
};
use replica_calculus::{parse, Polynomial, Result};

pub fn run_example() -> Result<()> {
    let model = SpinModel::new(3, vec![0.3, -1.1, 0.6], 0.8)?;
    let state = model.gibbs_state();
    println!("one disorder sample: (1/N) log Z = {:.6}", state.free_energy_density);

    let quad = QuadratureSpec::with_nodes(10);
    let edge = parse("(1,2)")?;
    let e = quenched_expect(&Polynomial::monomial(&edge)?, 3, 0.5, &quad, KernelMode::Idealized)?;
    println!("E_3(q²) at β = 0.5: {e:.8}");

    let reports = [
        beta_derivative_check(&edge, 3, 0.5, 1e-3, &quad)?,
        beta_second_derivative_ratio(&edge, 3, 0.5, 1e-3, &quad)?,
        effective_beta_check(&edge, 2, 0.4, 0.3, &quad)?,
        lambda_derivative_check(&edge, 2, 0.6, 2, 0.05, &quad)?,
        lambda_derivative_check(&edge, 2, 0.6, 4, 0.05, &quad)?,
    ];
    for r in &reports {
        println!("{}", report_line(r));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
