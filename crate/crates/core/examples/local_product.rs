//! A flat chart bundle is locally a B-transform of the product; a curved one is obstructed.

use gencx::bundle::{build_bundle, local_product_b, ProductOutcome};
use gencx::catalog;
use gencx::document::parse_expr;

fn main() -> gencx::Result<()> {
    let base = catalog::complex_chart(1);
    let beta = vec![parse_expr("d(z^2*zb^2 + z + zb)", &base)?, parse_expr("d(z^2 + zb^2 + z*zb)", &base)?];
    let flat = build_bundle(&base, 1, &beta)?;
    match local_product_b(&flat, None)? {
        ProductOutcome::Certificate(c) => {
            println!("flat: B-hat = {}", c.bhat);
            println!("gauge = {:?}", c.gauge.iter().map(|g| g.display(base.vars()).to_string()).collect::<Vec<_>>());
            for (k, v) in &c.checks {
                println!("  {k}: {v}");
            }
        }
        ProductOutcome::Obstructed(o) => println!("unexpected obstruction: {o:?}"),
    }

    let beta = vec![parse_expr("dz + dzb", &base)?, parse_expr("1/4i*(z*dzb - zb*dz)", &base)?];
    let curved = build_bundle(&base, 1, &beta)?;
    if let ProductOutcome::Obstructed(o) = local_product_b(&curved, None)? {
        println!("curved: fails {}", o.predicate);
        for (j, r) in o.residuals {
            println!("  beta_{j}: {r}");
        }
    }
    Ok(())
}
