//! The Fermion, Boson slices and product slices in each weighting.

use qmm::series::{bos_slice, ferm, product_slice, Variant};

fn main() {
    for v in [Variant::One, Variant::Q, Variant::TQ] {
        println!("Ferm, r=2, weights {v}: {}", ferm(2, v));
        println!("Bos_2, r=2, weights {v}: {}", bos_slice(2, 2, v));
        println!("(Ferm x Bos)_2, r=2, weights {v}: {}", product_slice(2, 2, v));
        println!();
    }
}
