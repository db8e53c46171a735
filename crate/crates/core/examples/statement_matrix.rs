//! Status of the 26 statements of the results table.

use qmm::cli::matrix_report;

fn main() {
    let rep = matrix_report(3, 6, 1);
    for c in &rep.cells {
        println!("({:>2}) {:<4} {:<6} {:?}", c.statement_id, c.algebra, c.theorem, c.status);
    }
    println!("all cells as expected: {}", rep.pass);
}
