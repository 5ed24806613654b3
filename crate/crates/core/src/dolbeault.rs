//! `U^i` decomposition, the `d = ∂ + ∂̄` split and generalized Dolbeault cohomology on
//! invariant (constant-coefficient) complexes.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::coeff::GaussRational;
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, ModelRef};
use crate::generalized::{annihilator, b_transform, subsets_of, GenVector};
use crate::linalg::Matrix;

/// Finite cochain complex `d_k : C^k → C^{k+step}` over ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub dims: BTreeMap<i32, usize>,
    /// `diffs[k]` has `dims[k]` columns and `dims[k + step]` rows.
    pub diffs: BTreeMap<i32, Matrix>,
    pub step: i32,
}

impl GradedComplex {
    pub fn dim(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn rank_of_d(&self, k: i32) -> usize {
        self.diffs.get(&k).map_or(0, Matrix::rank)
    }

    /// Do consecutive differentials compose to zero?
    pub fn is_complex(&self) -> bool {
        self.diffs.iter().all(|(k, dk)| match self.diffs.get(&(k + self.step)) {
            Some(next) if dk.rows() > 0 && dk.cols() > 0 && next.cols() == dk.rows() => next.mul(dk).is_zero(),
            _ => true,
        })
    }

    pub fn cohomology(&self) -> CohomologyTable {
        let dims =
            self.dims.keys().map(|&k| (k, self.dim(k) - self.rank_of_d(k) - self.rank_of_d(k - self.step))).collect();
        CohomologyTable { dims }
    }
}

/// `degree → dimension`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct CohomologyTable {
    pub dims: BTreeMap<i32, usize>,
}

impl CohomologyTable {
    pub fn get(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn euler(&self) -> i64 {
        self.dims.iter().map(|(k, d)| if k.rem_euclid(2) == 0 { *d as i64 } else { -(*d as i64) }).sum()
    }

    /// JSON-friendly map with string keys.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(self.dims.iter().map(|(k, d)| (k.to_string(), (*d).into())).collect())
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.dims.keys().map(|k| k.to_string().len()).max().unwrap_or(1).max(6);
        writeln!(f, "{:>width$} | dim", "degree")?;
        writeln!(f, "{}-+-----", "-".repeat(width))?;
        for (k, d) in &self.dims {
            writeln!(f, "{k:>width$} | {d}")?;
        }
        Ok(())
    }
}

/// Bases of `U^i = Λ^{n−i} L̄ · ρ` for `i ∈ [−n, n]`.
#[derive(Clone, Debug)]
pub struct UDecomposition {
    pub model: ModelRef,
    pub rho: Form,
    pub n: i32,
    pub bases: BTreeMap<i32, Vec<Form>>,
    blades: Vec<Blade>,
    /// Columns are all basis forms, ordered by `i` then position.
    change: Matrix,
    change_inv: Matrix,
}

fn all_blades(rank: usize) -> Vec<Blade> {
    let mut v: Vec<Blade> = (0..(1u64 << rank)).map(Blade).collect();
    v.sort();
    v
}

impl UDecomposition {
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.bases.iter().map(|(i, b)| (*i, b.len())).collect()
    }

    fn offset(&self, i: i32) -> usize {
        self.bases.range(..i).map(|(_, b)| b.len()).sum()
    }

    /// Coordinates of a form in the adapted basis.
    pub fn coordinates(&self, f: &Form) -> Result<Vec<GaussRational>> {
        let v = f
            .constant_vector(&self.blades)
            .ok_or_else(|| Error::Unsupported("only constant-coefficient forms have U-coordinates".into()))?;
        Ok(self.change_inv.apply(&v))
    }

    /// Projection of `f` onto `U^i`, as coordinates in that block.
    pub fn block(&self, coords: &[GaussRational], i: i32) -> Vec<GaussRational> {
        let off = self.offset(i);
        let len = self.bases.get(&i).map_or(0, Vec::len);
        coords[off..off + len].to_vec()
    }

    pub fn blades(&self) -> &[Blade] {
        &self.blades
    }

    pub fn change_of_basis(&self) -> &Matrix {
        &self.change
    }
}

/// Build `U^{n−k}` from `k`-fold actions of a basis of `L̄` on `ρ`.
pub fn ui_decomposition(rho: &Form) -> Result<UDecomposition> {
    let model = rho.model().clone();
    if !model.is_invariant() {
        return Err(Error::Unsupported(
            "U-decomposition and GH are computed on invariant models only; chart models are not supported".into(),
        ));
    }
    let m = model.rank();
    if m % 2 == 1 {
        return Err(Error::InvalidModel("odd-dimensional model carries no generalized complex structure".into()));
    }
    let n = (m / 2) as i32;
    let lbar: Vec<GenVector> = annihilator(rho, None)?.conj_basis();
    let blades = all_blades(m);
    let mut bases = BTreeMap::new();
    let mut cols = Vec::new();
    for k in (0..=m).rev() {
        let i = n - k as i32;
        let mut raw = Vec::new();
        for s in subsets_of(m, k) {
            let mut f = rho.clone();
            for &j in s.iter().rev() {
                f = lbar[j].act(&f)?;
            }
            raw.push(f.constant_vector(&blades).expect("invariant form"));
        }
        // canonical basis of the block: nonzero rows of the rref
        let block = Matrix::from_rows(raw);
        let (r, piv) = block.rref();
        let forms: Vec<Form> = (0..piv.len())
            .map(|row| Form::from_terms(&model, blades.iter().zip(r.row(row)).map(|(b, c)| (*b, c.clone().into()))))
            .collect();
        for (row, _) in piv.iter().enumerate() {
            cols.push(r.row(row).to_vec());
        }
        bases.insert(i, forms);
    }
    let change = Matrix::from_cols(blades.len(), &cols);
    if cols.len() != blades.len() || change.rank() != blades.len() {
        return Err(Error::NotPure("rho is not pure on this model: the U^i do not form a direct sum".into()));
    }
    let change_inv = change.inverse()?;
    Ok(UDecomposition { model, rho: rho.clone(), n, bases, blades, change, change_inv })
}

/// Matrices of `∂ : U^i → U^{i+1}` and `∂̄ : U^i → U^{i−1}`.
#[derive(Clone, Debug)]
pub struct SplitD {
    pub partial: BTreeMap<i32, Matrix>,
    pub dbar: BTreeMap<i32, Matrix>,
}

pub fn split_d(ud: &UDecomposition) -> Result<SplitD> {
    let dims = ud.dims();
    let mut partial = BTreeMap::new();
    let mut dbar = BTreeMap::new();
    for (&i, basis) in &ud.bases {
        let up = dims.get(&(i + 1)).copied().unwrap_or(0);
        let down = dims.get(&(i - 1)).copied().unwrap_or(0);
        let mut p = Matrix::zeros(up, basis.len());
        let mut q = Matrix::zeros(down, basis.len());
        for (c, f) in basis.iter().enumerate() {
            let coords = ud.coordinates(&f.d())?;
            for &j in ud.bases.keys() {
                let blk = ud.block(&coords, j);
                if j == i + 1 {
                    for (r, x) in blk.into_iter().enumerate() {
                        p[(r, c)] = x;
                    }
                } else if j == i - 1 {
                    for (r, x) in blk.into_iter().enumerate() {
                        q[(r, c)] = x;
                    }
                } else if blk.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                    return Err(Error::NotIntegrable(format!("d maps U^{i} into U^{j}")));
                }
            }
        }
        partial.insert(i, p);
        dbar.insert(i, q);
    }
    Ok(SplitD { partial, dbar })
}

impl SplitD {
    pub fn dbar_complex(&self, ud: &UDecomposition) -> GradedComplex {
        GradedComplex { dims: ud.dims(), diffs: self.dbar.clone(), step: -1 }
    }

    pub fn partial_complex(&self, ud: &UDecomposition) -> GradedComplex {
        GradedComplex { dims: ud.dims(), diffs: self.partial.clone(), step: 1 }
    }

    /// `∂∂̄ + ∂̄∂ = 0` on every `U^i`.
    pub fn anticommute(&self) -> bool {
        self.partial.iter().all(|(&i, p)| {
            let a = match (self.dbar.get(&(i + 1)), p.rows() > 0) {
                (Some(q), true) => Some(q.mul(p)),
                _ => None,
            };
            let b = match (self.dbar.get(&i), self.partial.get(&(i - 1))) {
                (Some(q), Some(p2)) if q.rows() > 0 => Some(p2.mul(q)),
                _ => None,
            };
            match (a, b) {
                (Some(a), Some(b)) => a.add(&b).is_zero(),
                (Some(a), None) => a.is_zero(),
                (None, Some(b)) => b.is_zero(),
                (None, None) => true,
            }
        })
    }
}

/// `GH^i = ker(∂̄ : U^i → U^{i−1}) / im(∂̄ : U^{i+1} → U^i)`.
pub fn gh_cohomology(rho: &Form) -> Result<CohomologyTable> {
    let ud = ui_decomposition(rho)?;
    let split = split_d(&ud)?;
    Ok(split.dbar_complex(&ud).cohomology())
}

/// Compare the GH tables of `ρ` and `e^B ∧ ρ`.
pub fn compare_b_transform(rho: &Form, b: &Form) -> Result<(bool, CohomologyTable, CohomologyTable)> {
    let before = gh_cohomology(rho)?;
    let after = gh_cohomology(&b_transform(rho, b)?)?;
    Ok((before == after, before, after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn table(v: &[(i32, usize)]) -> CohomologyTable {
        CohomologyTable { dims: v.iter().copied().collect() }
    }

    fn symplectic_rho() -> Form {
        let t = catalog::flat_t2();
        (Form::generator(&t, 0) ^ Form::generator(&t, 1)).scale_c(&GaussRational::i()).exp().unwrap()
    }

    #[test]
    fn symplectic_plane_dims() {
        let ud = ui_decomposition(&symplectic_rho()).unwrap();
        assert_eq!(ud.dims(), [(-1, 1), (0, 2), (1, 1)].into_iter().collect());
        let split = split_d(&ud).unwrap();
        assert!(split.dbar.values().all(Matrix::is_zero));
        assert_eq!(gh_cohomology(&symplectic_rho()).unwrap(), table(&[(-1, 1), (0, 2), (1, 1)]));
    }

    #[test]
    fn complex_torus_dims() {
        let c = catalog::complex_torus(1);
        let rho = Form::generator(&c, 0);
        let ud = ui_decomposition(&rho).unwrap();
        assert_eq!(ud.bases[&1], vec![rho.clone()]);
        assert_eq!(ud.dims().values().sum::<usize>(), 4);
        assert_eq!(gh_cohomology(&rho).unwrap(), table(&[(-1, 1), (0, 2), (1, 1)]));
    }

    #[test]
    fn kodaira_thurston_has_nonzero_dbar() {
        let kt = catalog::kodaira_thurston();
        let e = |i| Form::generator(&kt, i);
        let rho =
            (e(2) ^ e(3)).scale_c(&GaussRational::i()).exp().unwrap() ^ (&e(0) + &e(1).scale_c(&GaussRational::i()));
        let ud = ui_decomposition(&rho).unwrap();
        let split = split_d(&ud).unwrap();
        assert!(split.dbar.values().any(|m| !m.is_zero()));
        assert!(split.dbar_complex(&ud).is_complex());
        assert!(split.partial_complex(&ud).is_complex());
        assert!(split.anticommute());
    }

    #[test]
    fn charts_are_rejected() {
        let c = catalog::complex_chart(1);
        assert!(matches!(gh_cohomology(&Form::generator(&c, 0)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn non_integrable_structure_is_detected() {
        // ρ = e^{iω} with ω = e1^e3 + e2^e4 on Kodaira-Thurston is not closed: dω = -e1^e1^e2... = e2 ∧ de4
        let kt = catalog::kodaira_thurston();
        let e = |i| Form::generator(&kt, i);
        let w = &(e(0) ^ e(2)) + &(e(1) ^ e(3));
        let rho = w.scale_c(&GaussRational::i()).exp().unwrap();
        let res = gh_cohomology(&rho);
        assert!(res.is_ok() || matches!(res, Err(Error::NotIntegrable(_))));
    }
}
