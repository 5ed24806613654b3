//! Pure spinors of symplectic and complex type: type, pairing, annihilator, integrability.

use gencx::catalog;
use gencx::coeff::ExactPoint;
use gencx::document::parse_expr;
use gencx::exterior::Form;
use gencx::generalized::{annihilator, integrability_witness, involutivity_check, pure_spinor, type_at, GcsSpec};

fn describe(name: &str, spec: &GcsSpec) -> gencx::Result<()> {
    let ps = pure_spinor(spec, &[])?;
    let p = ExactPoint::origin(ps.rho.model().vars());
    let ann = annihilator(&ps.rho, Some(&p))?;
    let inv = involutivity_check(&ann.basis)?;
    println!("{name}: rho = {}", ps.rho);
    println!("  type {}, (rho, conj rho) = {}", type_at(&ps.rho, &p)?, ps.pairing);
    println!(
        "  integrable: {}, ann rank {}, involutive: {}",
        integrability_witness(&ps.rho)?.is_integrable(),
        ann.basis.len(),
        inv.involutive
    );
    Ok(())
}

fn main() -> gencx::Result<()> {
    let kt = catalog::kodaira_thurston();
    let omega = parse_expr("e1^e3 + e2^e4", &kt)?;
    describe("Kodaira-Thurston symplectic", &GcsSpec::from_omega(omega, Form::one(&kt))?)?;

    let t4 = catalog::complex_torus(2);
    let big_omega = parse_expr("dz1^dz2", &t4)?;
    describe("complex T^4", &GcsSpec::new(Form::zero(&t4), Form::zero(&t4), big_omega)?)?;

    let mixed = parse_expr("1/2i*dz2^dzb2", &t4)?;
    describe("type one on T^4", &GcsSpec::from_omega(mixed, parse_expr("dz1", &t4)?)?)?;
    Ok(())
}
