use std::collections::BTreeMap;

use crate::bundle::{build_bundle, construct_rho, BundleModel};
use crate::catalog;
use crate::coeff::GaussRational;
use crate::dolbeault::{gh_cohomology, CohomologyTable};
use crate::error::{Error, Result};
use crate::exterior::{Form, Grade, ModelRef};

fn base_table(base: &ModelRef) -> Result<CohomologyTable> {
    let mut omega = Form::one(base);
    for i in base.indices_with_grade(Grade::H) {
        omega = omega.wedge_generator(i);
    }
    gh_cohomology(&omega)
}

fn fiber_table(l: usize) -> Result<CohomologyTable> {
    if l == 0 {
        return Ok(CohomologyTable { dims: BTreeMap::from([(0, 1)]) });
    }
    let t = catalog::fiber_torus(l);
    let mut w = Form::zero(&t);
    for j in 0..l {
        w = &w + &(Form::generator(&t, 2 * j) ^ Form::generator(&t, 2 * j + 1));
    }
    gh_cohomology(&w.scale_c(&GaussRational::i()).exp()?)
}

/// `E_2^{p,q}` for a flat invariant bundle with trivialized fiber cohomology:
/// `GH^{n−p}(M) ⊗ GH^{l−q}(T^{2l})`.
pub fn e2_identification(bundle: &BundleModel) -> Result<BTreeMap<(i64, i64), usize>> {
    if bundle.is_chart() {
        return Err(Error::Unsupported("E_2 identification is implemented for invariant bundles".into()));
    }
    if !bundle.is_flat() || bundle.structure.iter().any(|s| !s.is_zero()) {
        return Err(Error::Unsupported("E_2 identification needs a flat bundle with trivial fiber cohomology".into()));
    }
    let n = bundle.n() as i32;
    let l = bundle.l as i32;
    let gm = base_table(&bundle.base)?;
    let gt = fiber_table(bundle.l)?;
    let mut out = BTreeMap::new();
    for p in 0..=2 * n {
        for q in 0..=2 * l {
            let d = gm.get(n - p) * gt.get(l - q);
            if d > 0 {
                out.insert((p as i64, q as i64), d);
            }
        }
    }
    Ok(out)
}

/// Both sides of the product formula for `E = M × T^{2l}`.
#[derive(Clone, Debug)]
pub struct KunnethVerdict {
    pub holds: bool,
    /// `GH^c(E)` computed on the product complex.
    pub lhs: CohomologyTable,
    /// `⊕_{a+b=c} GH^a(M) ⊗ GH^b(T^{2l})`.
    pub rhs: CohomologyTable,
    pub base: CohomologyTable,
    pub fiber: CohomologyTable,
    /// The right side placed at `c = n + l − m` with `m = p + q`, `q` the fiber
    /// degree and `n − p` the base degree; agrees with `lhs` only after a shift by `l`.
    pub shifted_rhs: CohomologyTable,
    pub shifted_holds: bool,
}

impl KunnethVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "holds": self.holds,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "base": self.base.to_json(),
            "fiber": self.fiber.to_json(),
            "shifted_rhs": self.shifted_rhs.to_json(),
            "shifted_holds": self.shifted_holds,
        })
    }
}

/// Compare `GH(M × T^{2l})` (with `ρ = e^{iω_T} ∧ Ω`) with the convolution of the factor tables.
pub fn kunneth_check(base: &ModelRef, l: usize) -> Result<KunnethVerdict> {
    let n = base.indices_with_grade(Grade::H).len() as i32;
    let li = l as i32;
    let gm = base_table(base)?;
    let gt = fiber_table(l)?;
    let lhs = if l == 0 {
        base_table(base)?
    } else {
        let zero = vec![Form::zero(base); 2 * l];
        let bundle = build_bundle(base, l, &zero)?;
        gh_cohomology(&construct_rho(&bundle, None)?)?
    };
    let mut rhs = BTreeMap::new();
    let mut shifted = BTreeMap::new();
    for c in -(n + li)..=(n + li) {
        let mut s = 0;
        for a in -n..=n {
            s += gm.get(a) * gt.get(c - a);
        }
        rhs.insert(c, s);
        // m = p + q with base degree n − p and fiber degree q
        let m = n + li - c;
        let mut t = 0;
        for p in -n..=n {
            t += gt.get(m - p) * gm.get(n - p);
        }
        shifted.insert(c, t);
    }
    let rhs = CohomologyTable { dims: rhs };
    let shifted_rhs = CohomologyTable { dims: shifted };
    let eq = |a: &CohomologyTable, b: &CohomologyTable| (-(n + li)..=(n + li)).all(|c| a.get(c) == b.get(c));
    Ok(KunnethVerdict {
        holds: eq(&lhs, &rhs),
        shifted_holds: eq(&lhs, &shifted_rhs),
        lhs,
        rhs,
        base: gm,
        fiber: gt,
        shifted_rhs,
    })
}
