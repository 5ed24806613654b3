//! Exterior calculus on the Kodaira-Thurston coframe and on a polynomial chart.

use gencx::catalog;
use gencx::coeff::GaussRational;
use gencx::document::parse_expr;
use gencx::exterior::{Form, VectorField};

fn main() -> gencx::Result<()> {
    let kt = catalog::kodaira_thurston();
    let e4 = Form::by_name(&kt, "e4")?;
    println!("d e4 = {}", e4.d());
    let omega = parse_expr("e1^e3 + e2^e4", &kt)?;
    println!("omega = {omega}, d omega = {}", omega.d());
    println!("omega^2 = {}", omega.wedge(&omega)?);

    let chart = catalog::complex_chart(1);
    let a = parse_expr("i*z*zb*dz", &chart)?;
    let twist = &a - &a.conj();
    println!("A - conj(A) = {twist}");
    println!("d(A - conj(A)) = {}", twist.d());
    let x = VectorField::by_name(&chart, "dz")?;
    println!("L_X (A - conj A) with X dual to dz: {}", twist.lie_derivative(&x)?);
    println!("reversal of dz^dzb: {}", parse_expr("dz^dzb", &chart)?.reversal());
    println!("(3/4 + 2i)^2 = {}", GaussRational::from_parts((3, 4), (2, 1)).pow(2));
    Ok(())
}
