//! Standard models used by examples, fixtures and tests.

use crate::coeff::{GaussRational, Var, VariableTable};
use crate::exterior::{Form, Grade, ModelBuilder, ModelRef};

fn chart_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["z".to_string()]
    } else {
        (1..=n).map(|a| format!("z{a}")).collect()
    }
}

/// Flat real 2-torus with invariant coframe `dx, dy`.
pub fn flat_t2() -> ModelRef {
    let mut b = ModelBuilder::new(VariableTable::empty());
    b.add_generator("dx", Grade::R);
    b.add_generator("dy", Grade::R);
    b.build().expect("flat torus model")
}

/// Real torus `T^{2l}` with invariant coframe `t1, …, t2l` tagged as fiber directions.
pub fn fiber_torus(l: usize) -> ModelRef {
    let mut b = ModelBuilder::new(VariableTable::empty());
    for j in 1..=2 * l {
        b.add_generator(&format!("t{j}"), Grade::F);
    }
    b.build().expect("fiber torus model")
}

/// Complex torus of complex dimension `n` with invariant coframe `dz_a, dzb_a`.
pub fn complex_torus(n: usize) -> ModelRef {
    let mut b = ModelBuilder::new(VariableTable::empty());
    for name in chart_names(n) {
        let h = b.add_generator(&format!("d{name}"), Grade::H);
        let a = b.add_generator(&format!("d{}", crate::coeff::conjugate_name(&name)), Grade::A);
        b.set_conj(h, a);
    }
    b.build().expect("complex torus model")
}

/// Kodaira–Thurston nilmanifold in a real coframe: `de4 = e1^e2`.
pub fn kodaira_thurston() -> ModelRef {
    let mut b = ModelBuilder::new(VariableTable::empty());
    b.add_generator("e1", Grade::R);
    b.add_generator("e2", Grade::R);
    b.add_generator("e3", Grade::F);
    let e4 = b.add_generator("e4", Grade::F);
    let sk = b.skeleton().expect("skeleton");
    let d4 = Form::generator(&sk, 0) ^ Form::generator(&sk, 1);
    b.set_diff(e4, &d4).expect("degree two");
    b.build().expect("Kodaira-Thurston model")
}

/// Kodaira–Thurston as a circle-squared bundle over `T²_ℂ`: base coframe `dz, dzb`,
/// fiber `t1, t2` with `dt2 = (i/2) dz^dzb` (equal to `e1^e2` for `dz = e1 + i e2`).
pub fn kodaira_thurston_complex() -> ModelRef {
    let mut b = ModelBuilder::new(VariableTable::empty());
    let h = b.add_generator("dz", Grade::H);
    let a = b.add_generator("dzb", Grade::A);
    b.set_conj(h, a);
    b.add_generator("t1", Grade::F);
    let t2 = b.add_generator("t2", Grade::F);
    let sk = b.skeleton().expect("skeleton");
    let d = (Form::generator(&sk, h) ^ Form::generator(&sk, a)).scale_c(&GaussRational::from_parts((0, 1), (1, 2)));
    b.set_diff(t2, &d).expect("degree two");
    b.build().expect("Kodaira-Thurston complex model")
}

/// Polynomial chart `ℂ^n` with exact coframe `dz_a, dzb_a`.
pub fn complex_chart(n: usize) -> ModelRef {
    chart_bundle(n, 0)
}

/// Chart `ℂ^n × T^{2l}` with exact coframe `dz_a, dzb_a, dt_j`.
pub fn chart_bundle(n: usize, l: usize) -> ModelRef {
    let angles: Vec<String> = (1..=2 * l).map(|j| format!("t{j}")).collect();
    let vars = VariableTable::new(chart_names(n), angles).expect("chart variables");
    let mut b = ModelBuilder::new(vars.clone());
    for a in 0..n {
        b.add_exact(&format!("d{}", vars.name(Var::Z(a))), Var::Z(a));
        b.add_exact(&format!("d{}", vars.name(Var::Zb(a))), Var::Zb(a));
    }
    for j in 0..2 * l {
        b.add_exact(&format!("d{}", vars.name(Var::T(j))), Var::T(j));
    }
    b.build().expect("chart model")
}

/// The six-model corpus used for algebraic identity checks.
pub fn corpus() -> Vec<(&'static str, ModelRef)> {
    vec![
        ("flat T^2", flat_t2()),
        ("T^2_C", complex_torus(1)),
        ("T^4_C", complex_torus(2)),
        ("Kodaira-Thurston", kodaira_thurston()),
        ("C-chart", complex_chart(1)),
        ("C^2-chart", complex_chart(2)),
    ]
}
