//! SH leaves nonzero residuals, yet their images under psi cancel.

use qmm::series::verify_semi_strong;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rep = verify_semi_strong(3, 5)?;
    for d in &rep.degrees {
        println!("degree {}: {} terms, psi image {}", d.degree, d.residual.len(), d.psi_image.as_ref().unwrap());
    }
    println!("degree 3 residual: {}", rep.residual(3).unwrap().render_signed());
    println!("semi-strong identity holds: {}", rep.pass);
    Ok(())
}
