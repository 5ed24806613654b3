#![allow(dead_code)]

use std::collections::BTreeMap;

use gencx::catalog;
use gencx::coeff::{CoeffFn, GaussRational, Monomial};
use gencx::exterior::{Blade, Form, Grade, ModelRef, VectorField};
use gencx::generalized::GenVector;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use gencx::suites::rng;

/// Corpus for identity checks, plus a chart with angles and a nonabelian bundle.
pub fn models() -> Vec<(&'static str, ModelRef)> {
    let mut out = catalog::corpus();
    out.push(("C x T^2 chart", catalog::chart_bundle(1, 1)));
    out.push(("KT over T^2_C", catalog::kodaira_thurston_complex()));
    out
}

pub fn gauss(rng: &mut ChaCha8Rng) -> GaussRational {
    GaussRational::from_parts((rng.random_range(-4..=4), rng.random_range(1..=3)), (rng.random_range(-4..=4), 1))
}

pub fn coeff(rng: &mut ChaCha8Rng, model: &ModelRef) -> CoeffFn {
    let vars = model.vars();
    let (n, t) = (vars.chart_len(), vars.angle_len());
    let mut f = CoeffFn::zero();
    for _ in 0..rng.random_range(1..=2) {
        let a = (0..n).map(|_| rng.random_range(0..=2)).collect();
        let b = (0..n).map(|_| rng.random_range(0..=1)).collect();
        let k = (0..t).map(|_| rng.random_range(-1..=1)).collect();
        f.add_term(Monomial::new(a, b, k), gauss(rng));
    }
    f
}

pub fn blade(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Blade {
    let mut idx: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        idx.swap(i, rng.random_range(0..=i));
    }
    idx.truncate(k);
    Blade::from_indices(&idx)
}

/// Homogeneous form of degree `k` with up to three terms.
pub fn form(rng: &mut ChaCha8Rng, model: &ModelRef, k: usize) -> Form {
    let m = model.rank();
    if k > m {
        return Form::zero(model);
    }
    let terms: Vec<(Blade, CoeffFn)> =
        (0..rng.random_range(1..=3)).map(|_| (blade(rng, m, k), coeff(rng, model))).collect();
    let mut f = Form::zero(model);
    for (b, c) in terms {
        f = &f + &Form::from_terms(model, [(b, c)]);
    }
    f
}

pub fn mixed_form(rng: &mut ChaCha8Rng, model: &ModelRef) -> Form {
    let m = model.rank();
    let a = rng.random_range(0..=m);
    let b = rng.random_range(0..=m);
    &form(rng, model, a) + &form(rng, model, b)
}

pub fn field(rng: &mut ChaCha8Rng, model: &ModelRef) -> VectorField {
    let m = model.rank();
    let mut comps = Vec::new();
    for i in 0..m {
        if rng.random_bool(0.6) {
            let c = if model.is_invariant() { CoeffFn::constant(gauss(rng)) } else { coeff(rng, model) };
            comps.push((i, c));
        }
    }
    VectorField::from_components(model, comps)
}

pub fn genvector(rng: &mut ChaCha8Rng, model: &ModelRef) -> GenVector {
    let cov = form(rng, model, 1);
    GenVector::new(field(rng, model), cov).expect("1-form covector")
}

pub fn sign(odd: bool) -> GaussRational {
    GaussRational::from_int(if odd { -1 } else { 1 })
}

/// Rank by plain row reduction.
pub fn rank(mut rows: Vec<Vec<GaussRational>>) -> usize {
    let mut r = 0;
    let width = rows.first().map_or(0, Vec::len);
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = &GaussRational::from_int(1) / &rows[r][c];
        let pivot: Vec<GaussRational> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &(&f * y);
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

pub fn blades_of(m: usize, k: usize) -> Vec<Blade> {
    (0u64..1 << m).map(Blade).filter(|b| b.degree() == k).collect()
}

/// Matrix (as rows) of the linear map `f` between spans of constant blades.
fn matrix_of(model: &ModelRef, from: &[Blade], to: &[Blade], f: impl Fn(&Form) -> Form) -> Vec<Vec<GaussRational>> {
    let cols: Vec<Vec<GaussRational>> = from
        .iter()
        .map(|&b| {
            let img = f(&Form::from_terms(model, [(b, CoeffFn::one())]));
            to.iter().map(|&t| img.coefficient(t).constant_value().expect("constant image")).collect()
        })
        .collect();
    (0..to.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Betti numbers of the invariant de Rham complex of a nilpotent model.
pub fn de_rham_betti(model: &ModelRef) -> Vec<usize> {
    let m = model.rank();
    let ranks: Vec<usize> = (0..=m)
        .map(|k| if k == m { 0 } else { rank(matrix_of(model, &blades_of(m, k), &blades_of(m, k + 1), Form::d)) })
        .collect();
    (0..=m).map(|k| blades_of(m, k).len() - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }).collect()
}

fn bidegree(model: &ModelRef, b: Blade) -> (usize, usize) {
    let h = b.indices().into_iter().filter(|&i| model.generator(i).grade == Grade::H).count();
    (h, b.degree() - h)
}

/// `h^{p,q}` of the invariant Dolbeault complex of a complex model (`H`/`A` generators only).
pub fn dolbeault_numbers(model: &ModelRef) -> BTreeMap<(usize, usize), usize> {
    let m = model.rank();
    let n = m / 2;
    let cell = |p: usize, q: usize| -> Vec<Blade> {
        (0..=m).flat_map(|k| blades_of(m, k)).filter(|&b| bidegree(model, b) == (p, q)).collect()
    };
    let dbar_rank = |p: usize, q: usize| -> usize {
        if q >= n {
            return 0;
        }
        let to = cell(p, q + 1);
        rank(matrix_of(model, &cell(p, q), &to, |f| f.d().filter(|b| bidegree(model, b) == (p, q + 1))))
    };
    let mut out = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            let inc = if q == 0 { 0 } else { dbar_rank(p, q - 1) };
            out.insert((p, q), cell(p, q).len() - dbar_rank(p, q) - inc);
        }
    }
    out
}

/// Generalized cohomology of a complex structure: `GH^k = ⊕_{q−p=k} h^{p,q}`.
pub fn complex_gh(model: &ModelRef) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for ((p, q), h) in dolbeault_numbers(model) {
        *out.entry(q as i32 - p as i32).or_insert(0) += h;
    }
    out
}

/// Generalized cohomology of a symplectic structure on a `2n`-manifold: `GH^k = H^{n−k}`.
pub fn symplectic_gh(model: &ModelRef) -> BTreeMap<i32, usize> {
    let b = de_rham_betti(model);
    let n = (b.len() - 1) as i32 / 2;
    b.iter().enumerate().map(|(d, &v)| (n - d as i32, v)).collect()
}

pub fn convolve(a: &BTreeMap<i32, usize>, b: &BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for (x, u) in a {
        for (y, v) in b {
            *out.entry(x + y).or_insert(0) += u * v;
        }
    }
    out
}

pub fn nonzero(t: &BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    t.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (*k, *v)).collect()
}
