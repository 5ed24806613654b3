use crate::coeff::{ExactPoint, GaussRational};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, ModelRef, VectorField};
use crate::linalg::Matrix;

use super::annihilator;

/// `J` on the fiber of `T ⊕ T*` at a point, in the frame `(E_1..E_m, e^1..e^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFrameJ {
    pub matrix: Matrix,
}

/// Matrix of the natural pairing `½(ξ(Y) + η(X))` in the frame `(E, e)`.
pub fn pairing_matrix(m: usize) -> Matrix {
    let mut g = Matrix::zeros(2 * m, 2 * m);
    let half = GaussRational::from_frac(1, 2);
    for i in 0..m {
        g[(i, m + i)] = half.clone();
        g[(m + i, i)] = half.clone();
    }
    g
}

/// Matrix of the shear `X + ξ ↦ X + ξ − ι_X B` for a constant `B`.
pub fn b_shear_matrix(model: &ModelRef, b: &Form) -> Result<Matrix> {
    let m = model.rank();
    let mut s = Matrix::identity(2 * m);
    for i in 0..m {
        let col = b.interior(&VectorField::basis(model, i))?;
        for k in 0..m {
            let c = col
                .coefficient(Blade::single(k))
                .constant_value()
                .ok_or_else(|| Error::Precondition("B-shear matrix needs constant coefficients".into()))?;
            s[(m + k, i)] = -c;
        }
    }
    Ok(s)
}

impl PointFrameJ {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn squares_to_minus_one(&self) -> bool {
        let n = self.dim();
        self.matrix.mul(&self.matrix) == Matrix::identity(n).scale(&GaussRational::from_int(-1))
    }

    pub fn is_orthogonal(&self) -> bool {
        let g = pairing_matrix(self.dim() / 2);
        self.matrix.transpose().mul(&g).mul(&self.matrix) == g
    }

    /// `S_B J S_{−B}`.
    pub fn b_conjugate(&self, model: &ModelRef, b: &Form) -> Result<PointFrameJ> {
        let s = b_shear_matrix(model, b)?;
        let s_inv = b_shear_matrix(model, &-b)?;
        Ok(PointFrameJ { matrix: s.mul(&self.matrix).mul(&s_inv) })
    }
}

/// Build `J` with `+i`-eigenspace `L = ann(ρ)` and `−i`-eigenspace `L̄`.
pub fn endomorphism_from_spinor(rho: &Form, point: Option<&ExactPoint>) -> Result<PointFrameJ> {
    let ann = annihilator(rho, point)?;
    let m = rho.model().rank();
    let mut cols: Vec<Vec<GaussRational>> =
        ann.basis.iter().map(|u| u.constant_coordinates().expect("constant")).collect();
    cols.extend(ann.conj_basis().iter().map(|u| u.constant_coordinates().expect("constant")));
    let p = Matrix::from_cols(2 * m, &cols);
    let mut d = Matrix::zeros(2 * m, 2 * m);
    for k in 0..2 * m {
        d[(k, k)] = if k < m { GaussRational::i() } else { -GaussRational::i() };
    }
    let j = PointFrameJ { matrix: p.mul(&d).mul(&p.inverse()?) };
    if !j.squares_to_minus_one() {
        return Err(Error::NotPure("J² ≠ −1".into()));
    }
    if !j.is_orthogonal() {
        return Err(Error::NotPure("J is not orthogonal for the natural pairing".into()));
    }
    Ok(j)
}

/// The block matrix of a symplectic structure: `ω` below the diagonal, `−ω⁻¹` above.
pub fn symplectic_block(model: &ModelRef, omega: &Form) -> Result<Matrix> {
    let m = model.rank();
    let mut w = Matrix::zeros(m, m);
    for i in 0..m {
        let col = omega.interior(&VectorField::basis(model, i))?;
        for k in 0..m {
            w[(k, i)] = col
                .coefficient(Blade::single(k))
                .constant_value()
                .ok_or_else(|| Error::Precondition("ω must have constant coefficients".into()))?;
        }
    }
    let w_inv = w.inverse()?;
    let mut j = Matrix::zeros(2 * m, 2 * m);
    for r in 0..m {
        for c in 0..m {
            j[(m + r, c)] = w[(r, c)].clone();
            j[(r, m + c)] = -&w_inv[(r, c)];
        }
    }
    Ok(j)
}
