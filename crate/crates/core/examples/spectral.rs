//! Pages of the spectral sequence for a hand-built complex and for a product bundle.

use gencx::bundle::{build_bundle, construct_rho};
use gencx::catalog;
use gencx::exterior::Form;
use gencx::spectral::{build_filtration, e2_identification, fiber_null_space, pages, six_dimensional_example};

fn main() -> gencx::Result<()> {
    let rep = pages(&six_dimensional_example(), 4)?;
    print!("{rep}");

    let base = catalog::complex_torus(1);
    let bundle = build_bundle(&base, 1, &[Form::zero(&base), Form::zero(&base)])?;
    let rho = construct_rho(&bundle, None)?;
    let lf = build_filtration(&rho, &fiber_null_space(&bundle)?)?;
    let rep = pages(&lf.complex, 3)?;
    print!("{}", rep.grid(2));
    println!("E_2 from the factors: {:?}", e2_identification(&bundle)?);
    println!("stabilizes at {}", rep.stabilization_index);
    Ok(())
}
