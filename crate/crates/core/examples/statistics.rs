//! exc and den on a few biwords, and their invariance on SH classes.

use qmm::series::check_denert_invariance;
use qmm::stats::{den, exc, is_circuit};
use qmm::Biword;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for s in ["(123|213)", "(123|321)", "(123|132)", "(1123|3121)", "(1233|3312)"] {
        let b: Biword = s.parse()?;
        println!("{b}: exc={} den={} circuit={}", exc(&b), den(&b)?, is_circuit(&b));
    }
    let rep = check_denert_invariance(3, 5, 300, 42)?;
    println!("{}: {} random circuits, {} failures", rep.identity, rep.samples, rep.failures);
    Ok(())
}
