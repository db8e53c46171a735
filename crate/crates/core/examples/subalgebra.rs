//! Relations of SR (resp. SR_q) reduce to zero modulo each smaller system.

use qmm::series::check_subalgebra;
use qmm::{ReductionSystem, SystemName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    use SystemName::*;
    for (sys, target) in [(Sm, Sr), (Sf, Sr), (Sh, Sr), (SfQ, SrQ), (SqQ, SrQ)] {
        let rep = check_subalgebra(&ReductionSystem::new(sys), target, 3)?;
        println!("{sys} -> {target}: {} relations, {} not implied", rep.relations, rep.failures.len());
    }
    Ok(())
}
