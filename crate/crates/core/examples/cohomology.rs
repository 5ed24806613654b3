//! Generalized Dolbeault cohomology tables and their invariance under B-fields.

use gencx::catalog;
use gencx::document::parse_expr;
use gencx::dolbeault::{compare_b_transform, gh_cohomology};
use gencx::suites::closed_b_fields;

fn main() -> gencx::Result<()> {
    let t2 = catalog::flat_t2();
    let rho = parse_expr("exp(i*dx^dy)", &t2)?;
    println!("symplectic T^2: {:?}", gh_cohomology(&rho)?.dims);

    let t4 = catalog::complex_torus(2);
    let rho = parse_expr("dz1^dz2", &t4)?;
    println!("complex T^4: {:?}", gh_cohomology(&rho)?.dims);

    let kt = catalog::kodaira_thurston();
    let rho = parse_expr("exp(i*(e1^e3 + e2^e4))", &kt)?;
    let table = gh_cohomology(&rho)?;
    println!("Kodaira-Thurston: {:?} (total {})", table.dims, table.total());

    for b in closed_b_fields(&kt, 1, 3) {
        let (same, _, after) = compare_b_transform(&rho, &b)?;
        println!("  B = {b}: unchanged {same}, {:?}", after.dims);
    }
    Ok(())
}
