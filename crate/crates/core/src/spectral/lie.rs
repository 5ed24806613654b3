use std::collections::BTreeMap;

use crate::bundle::BundleModel;
use crate::coeff::GaussRational;
use crate::dolbeault::ui_decomposition;
use crate::error::{Error, Result};
use crate::exterior::{Form, VectorField};
use crate::generalized::{annihilator, subsets_of, GenVector};
use crate::linalg::Matrix;

use super::FilteredComplex;

/// The Lie algebroid complex `Λ^k L* ≅ Λ^k L̄ · ρ = U^{n−k}` filtered by an involutive `S ⊆ L`.
#[derive(Clone, Debug)]
pub struct LieFiltration {
    pub complex: FilteredComplex,
    /// Basis of `L`: `S` first, then the chosen complement.
    pub l_basis: Vec<GenVector>,
    pub s_rank: usize,
    /// Complex dimension `n` of the structure; degree `k` carries `GH^{n−k}`.
    pub n: i32,
}

fn coords(u: &GenVector) -> Result<Vec<GaussRational>> {
    u.constant_coordinates().ok_or_else(|| Error::Unsupported("S must have constant coefficients".into()))
}

/// Filtration `F^p Λ^k L*` = forms vanishing whenever `k − p + 1` arguments lie in `S`.
///
/// `s_basis` must lie in `ann(ρ)` and be closed under the Courant bracket; a violating
/// pair is reported otherwise.
pub fn build_filtration(rho: &Form, s_basis: &[GenVector]) -> Result<LieFiltration> {
    let model = rho.model().clone();
    let m = model.rank();
    for (i, s) in s_basis.iter().enumerate() {
        let img = s.act(rho)?;
        if !img.is_zero() {
            return Err(Error::Precondition(format!("S basis element {i} does not annihilate rho: u.rho = {img}")));
        }
    }
    let s_coords: Vec<Vec<GaussRational>> = s_basis.iter().map(coords).collect::<Result<_>>()?;
    if !s_coords.is_empty() && Matrix::from_cols(2 * m, &s_coords).rank() != s_coords.len() {
        return Err(Error::Precondition("S basis is linearly dependent".into()));
    }
    for i in 0..s_basis.len() {
        for j in i + 1..s_basis.len() {
            let br = s_basis[i].courant(&s_basis[j])?;
            let mut cols = s_coords.clone();
            cols.push(coords(&br)?);
            if Matrix::from_cols(2 * m, &cols).rank() != s_coords.len() {
                return Err(Error::Precondition(format!("S is not Courant involutive: [s{i}, s{j}] leaves S")));
            }
        }
    }
    let ann = annihilator(rho, None)?;
    let mut all = s_basis.to_vec();
    all.extend(ann.basis.iter().cloned());
    let all_coords: Vec<Vec<GaussRational>> = all.iter().map(coords).collect::<Result<_>>()?;
    let piv = Matrix::from_cols(2 * m, &all_coords).column_basis();
    let l_basis: Vec<GenVector> = piv.iter().map(|&i| all[i].clone()).collect();
    if l_basis.len() != m {
        return Err(Error::NotPure("annihilator has the wrong rank".into()));
    }
    let r = s_basis.len();

    // dual basis of L̄: ⟨w_a, u_b⟩ = δ_ab
    let lbar: Vec<GenVector> = l_basis.iter().map(GenVector::conj).collect();
    let mut pm = Matrix::zeros(m, m);
    for (c, x) in lbar.iter().enumerate() {
        for (b, u) in l_basis.iter().enumerate() {
            pm[(c, b)] = x.pairing(u)?.constant_value().expect("constant pairing");
        }
    }
    let x = pm.inverse()?.transpose();
    let dual: Vec<GenVector> = (0..m)
        .map(|a| {
            let mut w = GenVector::zero(&model);
            for (c, xc) in lbar.iter().enumerate() {
                w = &w + &xc.scale_c(&x[(c, a)]);
            }
            w
        })
        .collect();

    let ud = ui_decomposition(rho)?;
    let n = ud.n;
    let mut weights = BTreeMap::new();
    let mut change: BTreeMap<i32, Matrix> = BTreeMap::new();
    let mut basis_forms: BTreeMap<i32, Vec<Form>> = BTreeMap::new();
    for k in 0..=m {
        let mut forms = Vec::new();
        let mut ws = Vec::new();
        for s in subsets_of(m, k) {
            let mut f = rho.clone();
            for &j in s.iter().rev() {
                f = dual[j].act(&f)?;
            }
            ws.push(s.iter().filter(|&&j| j >= r).count());
            forms.push(f);
        }
        let i = n - k as i32;
        let cols: Vec<Vec<GaussRational>> =
            forms.iter().map(|f| Ok(ud.block(&ud.coordinates(f)?, i))).collect::<Result<_>>()?;
        let t = Matrix::from_cols(cols.first().map_or(0, Vec::len), &cols);
        weights.insert(k as i32, ws);
        change.insert(k as i32, t);
        basis_forms.insert(k as i32, forms);
    }
    let mut diffs = BTreeMap::new();
    for k in 0..m as i32 {
        let t_next = change[&(k + 1)].inverse()?;
        let i = n - k - 1;
        let cols: Vec<Vec<GaussRational>> = basis_forms[&k]
            .iter()
            .map(|f| {
                let c = ud.coordinates(&f.d())?;
                for &j in ud.bases.keys() {
                    if j != i && j != i + 2 && ud.block(&c, j).iter().any(|x| !num_traits::Zero::is_zero(x)) {
                        return Err(Error::NotIntegrable(format!("d maps U^{} into U^{j}", i + 1)));
                    }
                }
                Ok(t_next.apply(&ud.block(&c, i)))
            })
            .collect::<Result<_>>()?;
        diffs.insert(k, Matrix::from_cols(t_next.rows(), &cols));
    }
    let complex = FilteredComplex::new(weights, diffs)?;
    Ok(LieFiltration { complex, l_basis, s_rank: r, n })
}

/// `S = {X − i ι_X ω : X vertical}` for the bundle's `ω`.
pub fn fiber_null_space(bundle: &BundleModel) -> Result<Vec<GenVector>> {
    let i = GaussRational::i();
    bundle
        .fiber
        .iter()
        .map(|&f| {
            let x = VectorField::basis(&bundle.total, f);
            let xi = bundle.omega.interior(&x)?.scale_c(&-i.clone());
            GenVector::new(x, xi)
        })
        .collect()
}
