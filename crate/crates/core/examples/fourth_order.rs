// The fourth-order identity Cδ⁴M = 3Δ²M on a few monomials, with addend
// bookkeeping.
//
//     cargo run --example fourth_order

use replica_calculus::operators::fourth_order_check;
use replica_calculus::{parse, Result};

pub fn run_example() -> Result<()> {
    for text in ["(1,2)", "(1,2)^2", "(1,2)(2,3)", "(1,2)(3,4)", "(1,2)(2,3)(3,4)(4,5)"] {
        let r = fourth_order_check(&parse(text)?)?;
        println!(
            "{:<24} {} lhs {:>3} terms ({} raw addends)  rhs {:>3} terms  {:?}",
            r.monomial,
            if r.pass { "pass" } else { "FAIL" },
            r.lhs_addends.merged,
            r.lhs_addends.raw,
            r.rhs_addends.merged,
            r.elapsed
        );
        assert!(r.pass, "residual {}", r.residual);
    }
    let r = fourth_order_check(&parse("(1,2)")?)?;
    println!("¼·3Δ²(1,2) = {}", r.rhs.scale(&replica_calculus::Rational::new(1.into(), 12.into())));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
