use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::coeff::{CoeffFn, ExactPoint, GaussRational, Monomial};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, ModelRef, VectorField};
use crate::linalg::Matrix;

use super::GenVector;

/// Pure-spinor datum `ρ = e^{B + iω} ∧ Ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcsSpec {
    pub b: Form,
    pub omega: Form,
    pub big_omega: Form,
}

fn check_real_two_form(name: &str, f: &Form) -> Result<()> {
    if !f.is_zero() && !f.is_homogeneous_of(2) {
        return Err(Error::Degree(format!("{name} must be a 2-form, got {f}")));
    }
    if !f.is_real() {
        return Err(Error::NotReal(format!("{name} = {f}")));
    }
    Ok(())
}

/// Plücker test: `(ι_ξ Ω) ∧ Ω = 0` for every `(k−1)`-fold frame contraction `ξ`.
pub fn is_decomposable(omega: &Form) -> Result<bool> {
    let Some(k) = omega.degree() else {
        return Ok(false);
    };
    if k <= 1 {
        return Ok(true);
    }
    let m = omega.model();
    let subsets = subsets_of(m.rank(), k - 1);
    for s in subsets {
        let mut c = omega.clone();
        for &i in &s {
            c = c.interior(&VectorField::basis(m, i))?;
        }
        if !c.is_zero() && !c.wedge(omega)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl GcsSpec {
    pub fn new(b: Form, omega: Form, big_omega: Form) -> Result<Self> {
        if !crate::exterior::same_model_ref(b.model(), omega.model())
            || !crate::exterior::same_model_ref(b.model(), big_omega.model())
        {
            return Err(Error::ModelMismatch("B, ω and Ω must share a model".into()));
        }
        check_real_two_form("B", &b)?;
        check_real_two_form("ω", &omega)?;
        if big_omega.is_zero() || big_omega.degree().is_none() {
            return Err(Error::NotPure(format!("Ω must be a nonzero homogeneous form, got {big_omega}")));
        }
        if !is_decomposable(&big_omega)? {
            return Err(Error::NotPure(format!("Ω = {big_omega} is not decomposable")));
        }
        Ok(GcsSpec { b, omega, big_omega })
    }

    /// `ρ = e^{iω} ∧ Ω` with `B = 0`.
    pub fn from_omega(omega: Form, big_omega: Form) -> Result<Self> {
        let b = Form::zero(omega.model());
        GcsSpec::new(b, omega, big_omega)
    }

    pub fn model(&self) -> &ModelRef {
        self.b.model()
    }

    /// Expanded spinor, without the nondegeneracy check.
    pub fn rho(&self) -> Result<Form> {
        let exponent = &self.b + &self.omega.scale_c(&GaussRational::i());
        let e = if exponent.is_zero() { Form::one(self.model()) } else { exponent.exp()? };
        e.wedge(&self.big_omega)
    }
}

/// How nonvanishing of `(ρ, ρ̄)` was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nondegeneracy {
    /// The top coefficient is this nonzero constant.
    Certified { constant: String },
    /// Nonzero at every listed sample point; no global certificate.
    Sampled { points: usize },
}

#[derive(Clone, Debug)]
pub struct PureSpinor {
    pub spec: GcsSpec,
    pub rho: Form,
    pub pairing: Form,
    pub nondegeneracy: Nondegeneracy,
}

/// Expand `ρ` and check that the Mukai pairing `(ρ, ρ̄)` vanishes nowhere.
///
/// Non-constant top coefficients are sampled exactly on the fixed grid plus `extra` points.
pub fn pure_spinor(spec: &GcsSpec, extra: &[ExactPoint]) -> Result<PureSpinor> {
    let rho = spec.rho()?;
    let pairing = rho.mukai(&rho.conj())?;
    let top = pairing.top_coefficient();
    let vars = spec.model().vars();
    let nondegeneracy = match top.constant_value() {
        Some(c) if c.is_zero() => {
            return Err(Error::DegeneratePairing { witness: "every point".into() });
        }
        Some(c) => Nondegeneracy::Certified { constant: c.to_string() },
        None => {
            let mut points = ExactPoint::sample_grid(vars);
            points.extend(extra.iter().cloned());
            for p in &points {
                if top.evaluate_exact(p)?.is_zero() {
                    return Err(Error::DegeneratePairing { witness: p.to_string() });
                }
            }
            Nondegeneracy::Sampled { points: points.len() }
        }
    };
    Ok(PureSpinor { spec: spec.clone(), rho, pairing, nondegeneracy })
}

/// Lowest nonzero degree of `ρ` at a point.
pub fn type_at(rho: &Form, point: &ExactPoint) -> Result<usize> {
    let at = rho.at_point(point)?;
    at.terms().keys().map(|b| b.degree()).min().ok_or_else(|| Error::ZeroSpinor(point.to_string()))
}

/// `e^B ∧ ρ` for a closed real 2-form `B`.
pub fn b_transform(rho: &Form, b: &Form) -> Result<Form> {
    check_real_two_form("B", b)?;
    if !b.is_closed() {
        return Err(Error::BFieldNotClosed);
    }
    if b.is_zero() {
        return Ok(rho.clone());
    }
    let out = b.exp()?.wedge(rho)?;
    if rho.is_closed() && !out.is_closed() {
        return Err(Error::NotClosed(format!("d(e^B ∧ ρ) = {}", out.d())));
    }
    Ok(out)
}

/// Outcome of searching `u` with `dρ = u·ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `dρ = 0`, so `u = 0`.
    Closed,
    Found(GenVector),
    /// No `u` with ring coefficients of the searched shape; not a proof of non-integrability.
    NoWitnessInRing {
        d_rho: Form,
    },
}

impl Witness {
    pub fn is_integrable(&self) -> bool {
        !matches!(self, Witness::NoWitnessInRing { .. })
    }
}

type FlatTerms = BTreeMap<(Blade, Monomial), GaussRational>;

/// Solve `dρ = u·ρ` over ring elements whose monomials are quotients of those of `dρ` by
/// those of `ρ`.
pub fn integrability_witness(rho: &Form) -> Result<Witness> {
    let d_rho = rho.d();
    if d_rho.is_zero() {
        return Ok(Witness::Closed);
    }
    let model = rho.model();
    let rho_monos: BTreeSet<Monomial> = rho.terms().values().flat_map(|c| c.terms().map(|(m, _)| m.clone())).collect();
    let mut ansatz: BTreeSet<Monomial> = BTreeSet::new();
    ansatz.insert(Monomial::one());
    for c in d_rho.terms().values() {
        for (md, _) in c.terms() {
            for mr in &rho_monos {
                if let Some(q) = md.checked_div(mr) {
                    ansatz.insert(q);
                }
            }
        }
    }
    let mut columns: Vec<(usize, Monomial, FlatTerms)> = Vec::new();
    let mut rows: BTreeSet<(Blade, Monomial)> = d_rho.flat_terms().into_keys().collect();
    for s in 0..2 * model.rank() {
        for q in &ansatz {
            let u = GenVector::slot(model, s).scale(&CoeffFn::term(q.clone(), GaussRational::from_int(1)));
            let img = u.act(rho)?.flat_terms();
            rows.extend(img.keys().cloned());
            columns.push((s, q.clone(), img));
        }
    }
    let rows: Vec<(Blade, Monomial)> = rows.into_iter().collect();
    let index: BTreeMap<&(Blade, Monomial), usize> = rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut a = Matrix::zeros(rows.len(), columns.len());
    for (j, (_, _, img)) in columns.iter().enumerate() {
        for (key, x) in img {
            a[(index[key], j)] = x.clone();
        }
    }
    let rhs_map = d_rho.flat_terms();
    let rhs: Vec<GaussRational> =
        rows.iter().map(|r| rhs_map.get(r).cloned().unwrap_or_else(GaussRational::zero)).collect();
    let Some(x) = a.solve(&rhs) else {
        return Ok(Witness::NoWitnessInRing { d_rho });
    };
    let mut coords = vec![CoeffFn::zero(); 2 * model.rank()];
    for ((s, q, _), c) in columns.iter().zip(x) {
        coords[*s].add_term(q.clone(), c);
    }
    let u = GenVector::from_coordinates(model, &coords);
    debug_assert_eq!(u.act(rho)?, d_rho);
    Ok(Witness::Found(u))
}
