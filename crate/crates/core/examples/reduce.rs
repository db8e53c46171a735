//! Leftmost reduction, with the individual rewrite steps.
//!
//! cargo run --example reduce -- sr_q "(21|21)"

use qmm::{Expression, ReductionSystem, SystemName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let system: SystemName = args.next().as_deref().unwrap_or("sh").parse()?;
    let input: Expression = args.next().as_deref().unwrap_or("(321|213)").parse()?;
    let sys = ReductionSystem::new(system);
    println!("{input} under {system}");
    for step in sys.leftmost_trace(&input)? {
        println!("  {} at {} (rule {}) -> {}", step.biword, step.position, step.rule, step.result);
    }
    println!("= {}", sys.leftmost_reduce(&input)?);
    Ok(())
}
