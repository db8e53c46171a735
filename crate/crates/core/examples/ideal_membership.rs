//! Weak Master Theorem for SH: the product slices lie in the ideal even
//! though leftmost reduction does not send them to zero.

use qmm::idealcheck::{graded_generators, member, verify_weak_master};
use qmm::{Expression, ReductionSystem, SystemName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sh = ReductionSystem::new(SystemName::Sh);
    let rep = verify_weak_master(&sh, 3, 4)?;
    for d in &rep.degrees {
        println!("degree {}: {} terms, in ideal {}", d.degree, d.residual.len(), d.in_ideal.unwrap());
    }
    let g = graded_generators(&sh, 3, 3);
    let residual: Expression = "(123|132) + (123|213) - (123|312) - (123|321)".parse()?;
    println!("{} generators in degree 3", g.len());
    println!("SH residual in ideal: {}", member(&residual, &g)?);
    println!("(123|132) alone in ideal: {}", member(&"(123|132)".parse()?, &g)?);
    Ok(())
}
