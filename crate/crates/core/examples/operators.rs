// δ, Wick contraction and Δ on small graphs.
//
//     cargo run --example operators

use replica_calculus::operators::{big_delta, closed_form_delta, delta, wick, DiagonalMode};
use replica_calculus::{parse, Polynomial, Result};

pub fn run_example() -> Result<()> {
    let edge = Polynomial::parse_monomial("(1,2)")?;

    let once = delta(&edge)?;
    println!("δ(1,2)    = {once}");
    let twice = delta(&once)?;
    println!("δ²(1,2)   has {} terms", twice.len());

    for legs in ["(1)(2)(3)(4)", "(1)^2(2)(3)", "(1)^2(2)^2", "(1)^3(2)"] {
        let p = Polynomial::parse_monomial(legs)?;
        println!("C{legs:<13} = {}", wick(&p, DiagonalMode::Unit)?);
    }

    let d = big_delta(&edge, DiagonalMode::Unit)?;
    println!("Δ(1,2)    = {d}");
    let closed = closed_form_delta(&parse("(1,2)")?)?;
    println!("closed ½Δ = {closed}");

    for mode in [DiagonalMode::Unit, DiagonalMode::Symbol, DiagonalMode::Kernel] {
        println!("C(1)^2(2)^2 [{mode:?}] = {}", wick(&Polynomial::parse_monomial("(1)^2(2)^2")?, mode)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
