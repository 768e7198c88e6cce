// Enumerates overlap monomials up to three edges and prints the zero-mean
// families ΔM.
//
//     cargo run --example identity_catalog

use replica_calculus::identities::{enumerate_monomials, generate_identities, verify_catalog};
use replica_calculus::Result;

pub fn run_example() -> Result<()> {
    let catalog = enumerate_monomials(3, 12)?;
    println!("{} monomials with at most 3 edges", catalog.len());
    for record in generate_identities(&catalog)? {
        println!("Δ{} = {}", record.monomial, record.delta);
        assert!(record.zero_sum_ok);
    }
    let report = verify_catalog(&catalog);
    println!("Cδ⁴ = 3Δ²: {}/{} pass", report.passed, report.checked);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
