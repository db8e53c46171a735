//! Golden files for the displayed computations.

use qmm::rewrite::{ReductionSystem, SystemName};
use qmm::series::{product_slice, Variant};
use qmm::{Biword, Expression};

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn sh_residuals_match_display() {
    let sh = ReductionSystem::new(SystemName::Sh);
    for (n, file) in [(3, "sh_residual_r3_degree3.txt"), (4, "sh_residual_r3_degree4.txt")] {
        let want: Expression = read(file).trim().parse().unwrap();
        let got = sh.leftmost_reduce(&product_slice(3, n, Variant::One)).unwrap();
        assert_eq!(got, want, "degree {n}");
    }
}

#[test]
fn srq_single_step() {
    let golden = read("srq_single_step.txt");
    let (lhs, rhs) = golden.trim().split_once(" -> ").unwrap();
    let b: Biword = lhs.parse().unwrap();
    let srq = ReductionSystem::new(SystemName::SrQ);
    let step = srq.reduce_at(&b, 1).unwrap();
    assert_eq!(step.to_string(), rhs);
    assert_eq!(step, rhs.parse().unwrap());
}

#[test]
fn counterexample_chains() {
    let out = qmm::cli::run(["qmm", "counterexample"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, read("sh_counterexample.txt"));
}
