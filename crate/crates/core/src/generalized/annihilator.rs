use num_traits::Zero;
use serde::Serialize;

use crate::coeff::{ExactPoint, GaussRational};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form};
use crate::linalg::{rank_of, Matrix};

use super::GenVector;

/// A basis of `L = ann(ρ)` at a point (or globally for constant `ρ`).
#[derive(Clone, Debug)]
pub struct Annihilator {
    pub basis: Vec<GenVector>,
    pub point: Option<ExactPoint>,
}

impl Annihilator {
    pub fn conj_basis(&self) -> Vec<GenVector> {
        self.basis.iter().map(GenVector::conj).collect()
    }
}

fn blade_list(forms: &[Form]) -> Vec<Blade> {
    let mut all: Vec<Blade> = forms.iter().flat_map(|f| f.terms().keys().copied()).collect();
    all.sort();
    all.dedup();
    all
}

/// Solve `u·ρ = 0` for constant `u`.
///
/// Non-constant `ρ` is first evaluated at `point`. The result is checked for rank
/// `rank(model)`, isotropy, and `L ∩ L̄ = 0`.
pub fn annihilator(rho: &Form, point: Option<&ExactPoint>) -> Result<Annihilator> {
    let model = rho.model();
    let m = model.rank();
    let rho0 = if rho.is_constant() {
        rho.clone()
    } else {
        let p = point.ok_or_else(|| {
            Error::Precondition("ρ has non-constant coefficients; an evaluation point is required".into())
        })?;
        rho.at_point(p)?
    };
    if rho0.is_zero() {
        return Err(Error::ZeroSpinor(point.map_or("(constant)".to_string(), |p| p.to_string())));
    }
    // covector slots first, so the free unknowns are vector components where possible
    let order: Vec<usize> = (m..2 * m).chain(0..m).collect();
    let images: Vec<Form> = order.iter().map(|&s| GenVector::slot(model, s).act(&rho0)).collect::<Result<_>>()?;
    let blades = blade_list(&images);
    let cols: Vec<Vec<GaussRational>> =
        images.iter().map(|f| f.constant_vector(&blades).expect("constant image")).collect();
    let a = Matrix::from_cols(blades.len(), &cols);
    let null = a.nullspace();
    let basis: Vec<GenVector> = null
        .iter()
        .map(|v| {
            let mut coords = vec![GaussRational::zero(); 2 * m];
            for (k, &s) in order.iter().enumerate() {
                coords[s] = v[k].clone();
            }
            GenVector::from_constants(model, &coords)
        })
        .collect();
    if basis.len() != m {
        return Err(Error::NotPure(format!("annihilator has rank {} instead of {m}", basis.len())));
    }
    for (i, u) in basis.iter().enumerate() {
        for w in &basis[i..] {
            if !u.pairing(w)?.is_zero() {
                return Err(Error::NotPure(format!("⟨{u}, {w}⟩ ≠ 0")));
            }
        }
    }
    let mut rows: Vec<Vec<GaussRational>> = basis.iter().map(|u| u.constant_coordinates().expect("constant")).collect();
    rows.extend(basis.iter().map(|u| u.conj().constant_coordinates().expect("constant")));
    if rank_of(&rows, 2 * m) != 2 * m {
        return Err(Error::NotPure("L ∩ L̄ ≠ 0".into()));
    }
    Ok(Annihilator { basis, point: point.cloned() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutivityMethod {
    /// Constant coefficients: exact linear membership test.
    ConstantSolve,
    /// Maximal isotropic basis: `[u,v] ∈ L ⟺ ⟨[u,v], w⟩ = 0` for all `w ∈ L`, exactly over the ring.
    LagrangianPairing,
    /// Pointwise membership on the sample grid; not a certificate.
    Sampled,
}

#[derive(Clone, Debug)]
pub struct InvolutivityFailure {
    pub pair: (usize, usize),
    pub bracket: GenVector,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct Involutivity {
    pub involutive: bool,
    pub method: InvolutivityMethod,
    pub failure: Option<InvolutivityFailure>,
}

impl Involutivity {
    pub fn certified(&self) -> bool {
        self.method != InvolutivityMethod::Sampled
    }
}

fn in_span(basis: &[Vec<GaussRational>], v: &[GaussRational]) -> bool {
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero);
    }
    Matrix::from_cols(v.len(), basis).solve(v).is_some()
}

/// Is every pairwise Courant bracket of `basis` in its span?
pub fn involutivity_check(basis: &[GenVector]) -> Result<Involutivity> {
    let Some(first) = basis.first() else {
        return Ok(Involutivity { involutive: true, method: InvolutivityMethod::ConstantSolve, failure: None });
    };
    let model = first.model().clone();
    let mut brackets = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            brackets.push(((i, j), basis[i].courant(&basis[j])?));
        }
    }
    let fail = |pair, bracket: GenVector, residual: String| Some(InvolutivityFailure { pair, bracket, residual });

    if basis.iter().all(GenVector::is_constant) && brackets.iter().all(|(_, b)| b.is_constant()) {
        let cols: Vec<Vec<GaussRational>> = basis.iter().map(|u| u.constant_coordinates().expect("constant")).collect();
        for (pair, br) in brackets {
            let v = br.constant_coordinates().expect("constant");
            if !in_span(&cols, &v) {
                let residual = format!("[{}, {}] = {br} is outside the span", basis[pair.0], basis[pair.1]);
                return Ok(Involutivity {
                    involutive: false,
                    method: InvolutivityMethod::ConstantSolve,
                    failure: fail(pair, br, residual),
                });
            }
        }
        return Ok(Involutivity { involutive: true, method: InvolutivityMethod::ConstantSolve, failure: None });
    }

    let mut isotropic = basis.len() == model.rank();
    'outer: for i in 0..basis.len() {
        for j in i..basis.len() {
            if !basis[i].pairing(&basis[j])?.is_zero() {
                isotropic = false;
                break 'outer;
            }
        }
    }
    if isotropic {
        // independence at one sample point makes the basis maximal isotropic generically
        let grid = ExactPoint::sample_grid(model.vars());
        let p = &grid[0];
        let rows: Vec<Vec<GaussRational>> = basis
            .iter()
            .map(|u| u.at_point(p).map(|v| v.constant_coordinates().expect("constant")))
            .collect::<Result<_>>()?;
        isotropic = rank_of(&rows, 2 * model.rank()) == model.rank();
    }
    if isotropic {
        for (pair, br) in brackets {
            for w in basis {
                let val = br.pairing(w)?;
                if !val.is_zero() {
                    let residual =
                        format!("⟨[{}, {}], {w}⟩ = {}", basis[pair.0], basis[pair.1], val.display(model.vars()));
                    return Ok(Involutivity {
                        involutive: false,
                        method: InvolutivityMethod::LagrangianPairing,
                        failure: fail(pair, br, residual),
                    });
                }
            }
        }
        return Ok(Involutivity { involutive: true, method: InvolutivityMethod::LagrangianPairing, failure: None });
    }

    for p in ExactPoint::sample_grid(model.vars()) {
        let cols: Vec<Vec<GaussRational>> = basis
            .iter()
            .map(|u| u.at_point(&p).map(|v| v.constant_coordinates().expect("constant")))
            .collect::<Result<_>>()?;
        for (pair, br) in &brackets {
            let v = br.at_point(&p)?.constant_coordinates().expect("constant");
            if !in_span(&cols, &v) {
                let residual = format!("bracket leaves the span at {p}");
                return Ok(Involutivity {
                    involutive: false,
                    method: InvolutivityMethod::Sampled,
                    failure: fail(*pair, br.clone(), residual),
                });
            }
        }
    }
    Ok(Involutivity { involutive: true, method: InvolutivityMethod::Sampled, failure: None })
}
