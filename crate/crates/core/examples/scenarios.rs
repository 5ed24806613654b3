//! The twisted chart that is not locally a product, and two curved fibers that are.

use gencx::bundle::{curved_product_chart, nonproduct_chart};

fn main() -> gencx::Result<()> {
    let s = nonproduct_chart()?;
    println!("A = {}", s.a);
    println!("d(A - conj A) = {}", s.d_a_twist);
    println!("d omega = {}", s.d_omega);
    println!("obstruction coefficient on dt1: {}", s.rhs.display(s.a.model().vars()));
    println!("solvable with sigma = dt1: {}", s.obstruction.solvable);
    println!("solvable with sigma exact: {}", s.exact_variant.solvable);
    for (k, v) in &s.checks {
        println!("  {k}: {v}");
    }

    let c = curved_product_chart()?;
    for (a, b) in c.a.iter().zip(&c.b) {
        println!("A = {a}  ->  B = {b}");
    }
    for (k, v) in &c.checks {
        println!("  {k}: {v}");
    }
    Ok(())
}
