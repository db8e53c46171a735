//! Reduction-uniqueness harness over every biword up to a given length.

use qmm::rewrite::check_reduction_unique;
use qmm::{ReductionSystem, SystemName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in SystemName::ALL {
        let rep = check_reduction_unique(&ReductionSystem::new(name), 3, 4, 0, 1)?;
        print!("{name:<5} {} one-step violations, {} factor violations", rep.violation_count, rep.factor_violation_count);
        if let Some(v) = rep.violations.first() {
            print!(" e.g. {}: {} vs {}", v.biword, v.leftmost, v.alternative);
        }
        println!();
    }
    Ok(())
}
