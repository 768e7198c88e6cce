// Recomputes published expansion tables and lists every coefficient that
// disagrees with the engine.
//
//     cargo run --example table_adjudication

use replica_calculus::reference_tables::adjudication_report;
use replica_calculus::Result;

pub fn run_example() -> Result<()> {
    for v in adjudication_report()? {
        if v.matches {
            println!("{}: matches", v.label);
            continue;
        }
        match &v.proportional_factor {
            Some(f) => println!("{}: published = {f} × derived", v.label),
            None => println!("{}: {} deviating coefficients", v.label, v.deviations.len()),
        }
        for d in &v.deviations {
            println!("    {:<22} published {:>6}  derived {:>6}", d.graph, d.published, d.derived);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
