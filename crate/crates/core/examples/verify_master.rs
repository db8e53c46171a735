//! Strong Master Theorems: every product slice of positive degree reduces to 0.

use qmm::series::{default_variant, verify_master};
use qmm::{ReductionSystem, SystemName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = 3;
    for name in SystemName::ALL {
        let Some(variant) = default_variant(name) else { continue };
        let rep = verify_master(&ReductionSystem::new(name), r, 6, variant)?;
        let residuals: Vec<String> = rep.degrees.iter().map(|d| d.residual.to_string()).collect();
        println!(
            "{name:<5} weights {variant:<2} r={r}: [{}] {} ({:.1} ms)",
            residuals.join(", "),
            if rep.pass { "pass" } else { "FAIL" },
            rep.elapsed_ms
        );
    }
    Ok(())
}
