//! Commuting rational values: Ferm times truncated Bos is within the
//! geometric tail of 1.

use qmm::series::numeric_oracle;

fn main() {
    for r in 1..=3 {
        let rep = numeric_oracle(r, 6, 3, 2024);
        for t in &rep.trials {
            println!("r={r}: |error| = {} <= {}: {}", t.error, t.bound, t.pass);
        }
    }
}
