//! Two different SH normal forms reachable from one biword.

use qmm::rewrite::DEFAULT_NODE_BUDGET;
use qmm::{Biword, ReductionSystem, SystemName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start: Biword = "(321|213)".parse()?;
    let sh = ReductionSystem::new(SystemName::Sh);
    let set = sh.enumerate_normal_forms(&start.into(), DEFAULT_NODE_BUDGET)?;
    for form in &set.forms {
        let positions: Vec<String> = form.trace.iter().map(|s| s.position.to_string()).collect();
        println!("{} via positions {}", form.expression, positions.join(","));
        for s in &form.trace {
            println!("  {} -> {} (rule {})", s.biword, s.result, s.rule);
        }
    }
    Ok(())
}
