//! Seeded generators for randomized bundle and B-field suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::{build_bundle, build_curved_bundle, BundleModel};
use crate::catalog;
use crate::coeff::{CoeffFn, GaussRational, Monomial};
use crate::error::Result;
use crate::exterior::{Blade, Form, ModelRef};
use crate::linalg::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(rng: &mut ChaCha8Rng) -> GaussRational {
    loop {
        let c = GaussRational::from_parts((rng.random_range(-3..=3), 1), (rng.random_range(-3..=3), 1));
        if c != GaussRational::from_int(0) {
            return c;
        }
    }
}

fn real_part(f: &Form) -> Form {
    (f + &f.conj()).scale_c(&GaussRational::from_frac(1, 2))
}

fn pair(m: &ModelRef, a: usize, b: usize) -> Form {
    Form::generator(m, a) ^ Form::generator(m, b)
}

/// `Re(Σ c_ab dz_a ∧ dz̄_b)` with random Gaussian-integer `c`.
fn random_11(m: &ModelRef, n: usize, rng: &mut ChaCha8Rng) -> Form {
    let mut x = Form::zero(m);
    for a in 0..n {
        for b in 0..n {
            if rng.random_bool(0.6) {
                x = &x + &pair(m, 2 * a, 2 * b + 1).scale_c(&gauss(rng));
            }
        }
    }
    real_part(&x)
}

fn random_real_constant_1form(m: &ModelRef, n: usize, rng: &mut ChaCha8Rng) -> Form {
    let mut x = Form::zero(m);
    for a in 0..n {
        if rng.random_bool(0.7) {
            x = &x + &Form::generator(m, 2 * a).scale_c(&gauss(rng));
        }
    }
    real_part(&x)
}

/// A generated invariant bundle and whether its curvature was built to be of type (1,1).
#[derive(Clone, Debug)]
pub struct InvariantCase {
    pub label: String,
    pub bundle: BundleModel,
    pub built_11: bool,
}

/// Bundles over `T²_ℂ` and `T⁴_ℂ` with constant connection forms and invariant curvature;
/// every third one carries a `(2,0) + (0,2)` part.
pub fn invariant_bundles(seed: u64, count: usize) -> Result<Vec<InvariantCase>> {
    let mut rng = rng(seed);
    let t2 = catalog::complex_torus(1);
    let t4 = catalog::complex_torus(2);
    let mut out = Vec::new();
    for k in 0..count {
        let (base, n, mixed) = match k % 3 {
            0 => (&t2, 1, false),
            1 => (&t4, 2, false),
            _ => (&t4, 2, true),
        };
        let mut structure = Vec::new();
        let mut beta = Vec::new();
        for j in 0..2 {
            let mut s = if rng.random_bool(0.8) || j == 1 { random_11(base, n, &mut rng) } else { Form::zero(base) };
            if mixed && j == 1 {
                s = &s + &real_part(&pair(base, 0, 2).scale_c(&gauss(&mut rng)));
            }
            structure.push(s);
            beta.push(random_real_constant_1form(base, n, &mut rng));
        }
        let bundle = build_curved_bundle(base, &structure, &beta)?;
        let label = format!("{}#{k}{}", if n == 1 { "T2C" } else { "T4C" }, if mixed { " mixed" } else { "" });
        out.push(InvariantCase { label, bundle, built_11: !mixed });
    }
    Ok(out)
}

/// `P + P̄` for a random polynomial `P` in `z, z̄` of total degree at most 3;
/// `holomorphic` restricts `P` to powers of `z`.
fn random_potential(rng: &mut ChaCha8Rng, holomorphic: bool) -> CoeffFn {
    let mut p = CoeffFn::zero();
    while p.is_zero() {
        for a in 0..=3u32 {
            for b in 0..=(3 - a) {
                if (holomorphic && b > 0) || a + b == 0 || !rng.random_bool(0.5) {
                    continue;
                }
                p.add_term(Monomial::new(vec![a], vec![b], vec![]), gauss(rng));
            }
        }
        p = &p + &p.conj();
    }
    p
}

/// Flat chart bundles `β_j = dφ_j` over `ℂ` with `l = 1`; even-indexed ones have
/// pluriharmonic potentials.
pub fn flat_charts(seed: u64, count: usize) -> Result<Vec<BundleModel>> {
    let mut rng = rng(seed);
    let base = catalog::complex_chart(1);
    (0..count)
        .map(|k| {
            let beta: Vec<Form> =
                (0..2).map(|_| Form::function(&base, random_potential(&mut rng, k % 2 == 0)).d()).collect();
            build_bundle(&base, 1, &beta)
        })
        .collect()
}

/// Chart bundles over `ℂ` with `β_2 = c z^a z̄^b dz + conj` chosen so that `dβ_2 ≠ 0`.
pub fn nonflat_charts(seed: u64, count: usize) -> Result<Vec<BundleModel>> {
    let mut rng = rng(seed);
    let base = catalog::complex_chart(1);
    let dz = Form::by_name(&base, "dz")?;
    let mut out = Vec::new();
    while out.len() < count {
        let a = rng.random_range(0..=2u32);
        let b = rng.random_range(1..=2u32);
        let f = CoeffFn::term(Monomial::new(vec![a], vec![b], vec![]), gauss(&mut rng));
        let x = dz.scale(&f);
        let beta2 = &x + &x.conj();
        let beta1 = Form::function(&base, random_potential(&mut rng, false)).d();
        let bundle = build_bundle(&base, 1, &[beta1, beta2])?;
        if !bundle.is_flat() {
            out.push(bundle);
        }
    }
    Ok(out)
}

/// Random closed real constant 2-forms on `model`.
pub fn closed_b_fields(model: &ModelRef, seed: u64, count: usize) -> Vec<Form> {
    let mut rng = rng(seed);
    let m = model.rank();
    let blades2: Vec<Blade> = (0..m).flat_map(|i| (i + 1..m).map(move |j| Blade::from_indices(&[i, j]))).collect();
    let mut blades3 = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                blades3.push(Blade::from_indices(&[i, j, k]));
            }
        }
    }
    let cols: Vec<Vec<GaussRational>> = blades2
        .iter()
        .map(|&b| {
            let d = Form::from_terms(model, [(b, CoeffFn::one())]).d();
            d.constant_vector(&blades3).expect("constant structure")
        })
        .collect();
    let kernel = if blades3.is_empty() {
        (0..blades2.len())
            .map(|i| (0..blades2.len()).map(|j| GaussRational::from_int((i == j) as i64)).collect())
            .collect()
    } else {
        Matrix::from_cols(blades3.len(), &cols).nullspace()
    };
    let mut out = Vec::new();
    if kernel.is_empty() {
        return out;
    }
    while out.len() < count {
        let mut x = Form::zero(model);
        for v in &kernel {
            let c = GaussRational::from_parts((rng.random_range(-2..=2), 1), (rng.random_range(-2..=2), 1));
            let f = Form::from_terms(model, blades2.iter().zip(v).map(|(&b, vc)| (b, CoeffFn::constant(vc * &c))));
            x = &x + &f;
        }
        let b = real_part(&x);
        if !b.is_zero() {
            out.push(b);
        }
    }
    out
}
