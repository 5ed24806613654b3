//! GH of a product with a symplectic torus from the tables of the factors.

use gencx::catalog;
use gencx::spectral::kunneth_check;

fn main() -> gencx::Result<()> {
    for (n, l) in [(1, 1), (2, 1), (1, 2)] {
        let v = kunneth_check(&catalog::complex_torus(n), l)?;
        println!("T^{}_C x T^{}: {:?}", 2 * n, 2 * l, v.lhs.dims);
        println!("  base {:?} fiber {:?}", v.base.dims, v.fiber.dims);
        println!("  matches sum over a+b=c: {}", v.holds);
    }
    Ok(())
}
