// Compares Cδ^{2k}M with (2k-1)!! Δ^k M beyond the proven orders.
//
//     cargo run --release --example higher_order

use replica_calculus::operators::higher_order_explore;
use replica_calculus::{parse, Result};

pub fn run_example() -> Result<()> {
    for k in 1..=3 {
        let r = higher_order_explore(&parse("(1,2)")?, k)?;
        println!(
            "k = {k}: Cδ^{} vs {}Δ^{k}: {} lhs terms, {} rhs terms, residual {}{}",
            2 * k,
            r.multiplier,
            r.lhs_terms,
            r.rhs_terms,
            r.residual,
            if r.asserted { "" } else { " (no verdict)" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
