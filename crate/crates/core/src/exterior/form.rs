use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coeff::{CoeffFn, ExactPoint, GaussRational, Monomial, Var};
use crate::error::{Error, Result};

use super::model::{GeneratorKind, Grade, ModelRef};
use super::VectorField;

/// A sorted set of generator indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(pub u64);

impl Blade {
    pub fn empty() -> Self {
        Blade(0)
    }

    pub fn single(i: usize) -> Self {
        Blade(1 << i)
    }

    pub fn full(n: usize) -> Self {
        Blade(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        Blade(idx.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn shifted(self, n: usize) -> Blade {
        Blade(self.0 << n)
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << i))
    }

    /// Sign and blade of `self ∧ other`, or `None` when they share an index.
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs i in self, j in other with i > j
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            let above = if j == 63 { 0 } else { self.0 >> (j + 1) };
            swaps += above.count_ones();
        }
        Some((swaps % 2 == 1, Blade(self.0 | other.0)))
    }

    /// Position of generator `i` among the blade's indices (number of smaller indices).
    pub fn position(self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Blade{:?}", self.indices())
    }
}

pub type Terms = BTreeMap<Blade, CoeffFn>;

fn add_to(terms: &mut Terms, b: Blade, c: CoeffFn) {
    if c.is_zero() {
        return;
    }
    match terms.entry(b) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A sparse exterior form on a coframe model.
#[derive(Clone)]
pub struct Form {
    model: ModelRef,
    terms: Terms,
}

pub fn same_model(a: &ModelRef, b: &ModelRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model) && self.terms == other.terms
    }
}

impl Eq for Form {}

impl Form {
    pub fn zero(model: &ModelRef) -> Self {
        Form { model: model.clone(), terms: Terms::new() }
    }

    pub fn one(model: &ModelRef) -> Self {
        Form::function(model, CoeffFn::one())
    }

    pub fn function(model: &ModelRef, f: CoeffFn) -> Self {
        Form::from_terms(model, [(Blade::empty(), f)])
    }

    pub fn constant(model: &ModelRef, c: GaussRational) -> Self {
        Form::function(model, CoeffFn::constant(c))
    }

    pub fn generator(model: &ModelRef, i: usize) -> Self {
        assert!(i < model.rank(), "generator index out of range");
        Form::from_terms(model, [(Blade::single(i), CoeffFn::one())])
    }

    pub fn by_name(model: &ModelRef, name: &str) -> Result<Self> {
        model.index_of(name).map(|i| Form::generator(model, i)).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// The exact 1-form `dv`.
    pub fn dvar(model: &ModelRef, v: Var) -> Result<Self> {
        model
            .exact_generator(v)
            .map(|i| Form::generator(model, i))
            .ok_or_else(|| Error::UnknownVariable(model.vars().name(v)))
    }

    pub fn from_terms(model: &ModelRef, terms: impl IntoIterator<Item = (Blade, CoeffFn)>) -> Self {
        let mut t = Terms::new();
        for (b, c) in terms {
            assert!(b.max_index().is_none_or(|m| m < model.rank()), "blade outside model");
            add_to(&mut t, b, c);
        }
        Form { model: model.clone(), terms: t }
    }

    pub fn model(&self) -> &ModelRef {
        &self.model
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: Blade) -> CoeffFn {
        self.terms.get(&b).cloned().unwrap_or_default()
    }

    /// Move the same terms onto another model of equal rank (used for skeleton models).
    pub fn rebased(&self, model: &ModelRef) -> Result<Form> {
        if model.rank() < self.model.rank() {
            return Err(Error::ModelMismatch("target model has fewer generators".into()));
        }
        Ok(Form { model: model.clone(), terms: self.terms.clone() })
    }

    fn check(&self, other: &Form) -> Result<()> {
        if same_model(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch(format!("{:?} vs {:?}", self.model, other.model)))
        }
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check(other)?;
        let mut t = self.terms.clone();
        for (b, c) in &other.terms {
            add_to(&mut t, *b, c.clone());
        }
        Ok(Form { model: self.model.clone(), terms: t })
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.try_add(&-other)
    }

    pub fn scale(&self, f: &CoeffFn) -> Form {
        let mut t = Terms::new();
        for (b, c) in &self.terms {
            add_to(&mut t, *b, c * f);
        }
        Form { model: self.model.clone(), terms: t }
    }

    pub fn scale_c(&self, c: &GaussRational) -> Form {
        self.scale(&CoeffFn::constant(c.clone()))
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check(other)?;
        let mut t = Terms::new();
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                if let Some((neg, b)) = b1.wedge(*b2) {
                    let c = c1 * c2;
                    add_to(&mut t, b, if neg { -c } else { c });
                }
            }
        }
        Ok(Form { model: self.model.clone(), terms: t })
    }

    /// Wedge with generator indices given directly (no model check needed).
    pub fn wedge_generator(&self, i: usize) -> Form {
        self.wedge(&Form::generator(&self.model, i)).expect("same model")
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|b| b.degree()).collect();
        d.dedup();
        d
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.degree() == k)
    }

    /// Degree when homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn component(&self, k: usize) -> Form {
        self.filter(|b| b.degree() == k)
    }

    pub fn top_component(&self) -> Form {
        self.component(self.model.rank())
    }

    /// Coefficient of the volume blade.
    pub fn top_coefficient(&self) -> CoeffFn {
        self.coefficient(self.model.top_blade())
    }

    pub fn filter(&self, mut keep: impl FnMut(Blade) -> bool) -> Form {
        Form {
            model: self.model.clone(),
            terms: self.terms.iter().filter(|(b, _)| keep(**b)).map(|(b, c)| (*b, c.clone())).collect(),
        }
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&CoeffFn) -> CoeffFn) -> Form {
        let mut t = Terms::new();
        for (b, c) in &self.terms {
            add_to(&mut t, *b, f(c));
        }
        Form { model: self.model.clone(), terms: t }
    }

    fn d_blade(&self, b: Blade) -> Terms {
        let mut out = Terms::new();
        for (m, i) in b.indices().into_iter().enumerate() {
            let GeneratorKind::Structure(dg) = &self.model.generator(i).kind else {
                continue;
            };
            // (-1)^m · prefix ∧ dg ∧ suffix, and prefix/suffix split is the blade minus i
            let rest = b.without(i);
            let prefix = Blade(rest.0 & ((1u64 << i) - 1));
            let suffix = Blade(rest.0 & !((1u64 << i) - 1));
            for (db, dc) in dg {
                let Some((s1, pb)) = prefix.wedge(*db) else { continue };
                let Some((s2, full)) = pb.wedge(suffix) else { continue };
                let neg = (m % 2 == 1) ^ s1 ^ s2;
                add_to(&mut out, full, if neg { -dc } else { dc.clone() });
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let model = &self.model;
        let mut t = Terms::new();
        for (b, c) in &self.terms {
            for v in model.vars().vars() {
                let dc = c.partial(v);
                if dc.is_zero() {
                    continue;
                }
                let g = model.exact_generator(v).expect("validated model");
                if let Some((neg, nb)) = Blade::single(g).wedge(*b) {
                    add_to(&mut t, nb, if neg { -dc } else { dc });
                }
            }
            for (nb, dc) in self.d_blade(*b) {
                add_to(&mut t, nb, c * &dc);
            }
        }
        Form { model: model.clone(), terms: t }
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Interior product with a vector field (graded derivation of degree −1).
    pub fn interior(&self, x: &VectorField) -> Result<Form> {
        if !same_model(&self.model, x.model()) {
            return Err(Error::ModelMismatch("vector field from another model".into()));
        }
        let mut t = Terms::new();
        for (b, c) in &self.terms {
            for (pos, i) in b.indices().into_iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let v = c * &xi;
                add_to(&mut t, b.without(i), if pos % 2 == 1 { -v } else { v });
            }
        }
        Ok(Form { model: self.model.clone(), terms: t })
    }

    /// Lie derivative by Cartan's formula `L_X = d ι_X + ι_X d`.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Form> {
        Ok(self.interior(x)?.d() + self.d().interior(x)?)
    }

    /// Reversal `α`: degree-`k` part times `(−1)^{k(k−1)/2}`.
    pub fn reversal(&self) -> Form {
        self.map_terms(|b, c| {
            let k = b.degree();
            if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                -c
            } else {
                c.clone()
            }
        })
    }

    fn map_terms(&self, mut f: impl FnMut(Blade, &CoeffFn) -> CoeffFn) -> Form {
        let mut t = Terms::new();
        for (b, c) in &self.terms {
            add_to(&mut t, *b, f(*b, c));
        }
        Form { model: self.model.clone(), terms: t }
    }

    /// Complex conjugation: conjugate coefficients and swap generators with their partners.
    pub fn conj(&self) -> Form {
        let mut t = Terms::new();
        for (b, c) in &self.terms {
            let mut acc: Option<(bool, Blade)> = Some((false, Blade::empty()));
            for i in b.indices() {
                acc = acc.and_then(|(neg, cur)| {
                    cur.wedge(Blade::single(self.model.generator(i).conj)).map(|(s, nb)| (neg ^ s, nb))
                });
            }
            if let Some((neg, nb)) = acc {
                let cc = c.conj();
                add_to(&mut t, nb, if neg { -cc } else { cc });
            }
        }
        Form { model: self.model.clone(), terms: t }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `(a + ā)/2`.
    pub fn real_part(&self) -> Form {
        (self + &self.conj()).scale_c(&GaussRational::from_frac(1, 2))
    }

    /// `e^a` for an even form without degree-0 part; the series is finite.
    pub fn exp(&self) -> Result<Form> {
        if self.terms.keys().any(|b| b.degree() % 2 == 1 || b.degree() == 0) {
            return Err(Error::Degree("exp needs an even form without scalar part".into()));
        }
        let mut total = Form::one(&self.model);
        let mut power = Form::one(&self.model);
        let mut k = 1i64;
        loop {
            power = power.wedge(self)?.scale_c(&GaussRational::from_frac(1, k));
            if power.is_zero() {
                break;
            }
            total = &total + &power;
            k += 1;
        }
        Ok(total)
    }

    /// Tri-degree `(r, p, q)` of a blade from generator grades.
    pub fn blade_tridegree(&self, b: Blade) -> Result<(usize, usize, usize)> {
        let mut deg = (0, 0, 0);
        for i in b.indices() {
            match self.model.generator(i).grade {
                Grade::F => deg.0 += 1,
                Grade::H => deg.1 += 1,
                Grade::A => deg.2 += 1,
                Grade::R => {
                    return Err(Error::Unsupported(format!(
                        "generator `{}` has no complex type; tri-grading needs F/H/A tags",
                        self.model.generator(i).name
                    )))
                }
            }
        }
        Ok(deg)
    }

    /// Components of multi-degree `(r, p, q)`; they sum to `self`.
    pub fn trigrade(&self) -> Result<BTreeMap<(usize, usize, usize), Form>> {
        let mut out: BTreeMap<(usize, usize, usize), Form> = BTreeMap::new();
        for (b, c) in &self.terms {
            let key = self.blade_tridegree(*b)?;
            let entry = out.entry(key).or_insert_with(|| Form::zero(&self.model));
            add_to(&mut entry.terms, *b, c.clone());
        }
        Ok(out)
    }

    pub fn tri_component(&self, r: usize, p: usize, q: usize) -> Result<Form> {
        Ok(self.trigrade()?.remove(&(r, p, q)).unwrap_or_else(|| Form::zero(&self.model)))
    }

    /// Split `d` by the tri-degree shift it produces on each homogeneous piece.
    ///
    /// Keys `(1,0,0)`, `(0,1,0)`, `(0,0,1)` are `d_F`, `∂`, `∂̄`; on bundle models with
    /// curvature other shifts appear (for instance `(-1,1,1)`).
    pub fn d_split(&self) -> Result<BTreeMap<(i32, i32, i32), Form>> {
        let mut out: BTreeMap<(i32, i32, i32), Form> = BTreeMap::new();
        for ((r, p, q), piece) in self.trigrade()? {
            for ((r2, p2, q2), dpiece) in piece.d().trigrade()? {
                let key = (r2 as i32 - r as i32, p2 as i32 - p as i32, q2 as i32 - q as i32);
                let entry = out.entry(key).or_insert_with(|| Form::zero(&self.model));
                *entry = &*entry + &dpiece;
            }
        }
        Ok(out)
    }

    pub fn d_fiber(&self) -> Result<Form> {
        Ok(self.d_split()?.remove(&(1, 0, 0)).unwrap_or_else(|| Form::zero(&self.model)))
    }

    pub fn del(&self) -> Result<Form> {
        Ok(self.d_split()?.remove(&(0, 1, 0)).unwrap_or_else(|| Form::zero(&self.model)))
    }

    pub fn delbar(&self) -> Result<Form> {
        Ok(self.d_split()?.remove(&(0, 0, 1)).unwrap_or_else(|| Form::zero(&self.model)))
    }

    /// Evaluate all coefficients at an exact point (constant-coefficient result).
    pub fn at_point(&self, point: &ExactPoint) -> Result<Form> {
        let mut t = Terms::new();
        for (b, c) in &self.terms {
            add_to(&mut t, *b, CoeffFn::constant(c.evaluate_exact(point)?));
        }
        Ok(Form { model: self.model.clone(), terms: t })
    }

    /// All coefficients constant.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(CoeffFn::is_constant)
    }

    /// Coordinates of a constant-coefficient form in the given list of blades.
    pub fn constant_vector(&self, blades: &[Blade]) -> Option<Vec<GaussRational>> {
        if self.terms.keys().any(|b| !blades.contains(b)) {
            return None;
        }
        blades.iter().map(|b| self.coefficient(*b).constant_value()).collect()
    }

    /// Coordinates over `(blade, monomial)` pairs.
    pub fn flat_terms(&self) -> BTreeMap<(Blade, Monomial), GaussRational> {
        let mut out = BTreeMap::new();
        for (b, c) in &self.terms {
            for (m, x) in c.terms() {
                out.insert((*b, m.clone()), x.clone());
            }
        }
        out
    }

    /// `(α(self) ∧ other)_top`.
    pub fn mukai(&self, other: &Form) -> Result<Form> {
        Ok(self.reversal().wedge(other)?.top_component())
    }
}

impl<'a> std::ops::Add<&'a Form> for &'a Form {
    type Output = Form;
    /// Panics on mismatched models; see [`Form::try_add`].
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("forms from different models")
    }
}

impl std::ops::Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl<'a> std::ops::Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_sub(rhs).expect("forms from different models")
    }
}

impl std::ops::Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl std::ops::Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coefficients(|c| -c)
    }
}

impl std::ops::Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl<'a> std::ops::BitXor<&'a Form> for &'a Form {
    type Output = Form;
    /// Wedge product; panics on mismatched models.
    fn bitxor(self, rhs: &Form) -> Form {
        self.wedge(rhs).expect("forms from different models")
    }
}

impl std::ops::BitXor for Form {
    type Output = Form;
    fn bitxor(self, rhs: Form) -> Form {
        &self ^ &rhs
    }
}

fn coefficient_summands(c: &GaussRational, mono: Option<String>) -> (bool, String) {
    let both = !c.re.is_zero() && !c.im.is_zero();
    if both {
        let s = format!("({c})");
        return (
            false,
            match mono {
                Some(m) => format!("{s}*{m}"),
                None => s,
            },
        );
    }
    let neg = if c.re.is_zero() {
        c.im < num_rational::BigRational::zero()
    } else {
        c.re < num_rational::BigRational::zero()
    };
    let a = if neg { -c } else { c.clone() };
    let body = match mono {
        Some(m) if a.is_one() => m,
        Some(m) => format!("{a}*{m}"),
        None => a.to_string(),
    };
    (neg, body)
}

impl fmt::Display for Form {
    /// Canonical expression syntax: one summand per (blade, monomial).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.model.vars();
        let mut first = true;
        for (b, coeff) in &self.terms {
            let blade: Vec<&str> = b.indices().iter().map(|&i| self.model.generator(i).name.as_str()).collect();
            let blade = blade.join("^");
            for (m, c) in coeff.terms() {
                let mono = if m.is_one() {
                    None
                } else {
                    Some(CoeffFn::term(m.clone(), GaussRational::one()).display(vars).to_string())
                };
                let factor = match (mono, blade.is_empty()) {
                    (None, true) => None,
                    (None, false) => Some(blade.clone()),
                    (Some(m), true) => Some(m),
                    (Some(m), false) => Some(format!("{m}*{blade}")),
                };
                let (neg, body) = coefficient_summands(c, factor);
                match (first, neg) {
                    (true, true) => write!(f, "-{body}")?,
                    (true, false) => write!(f, "{body}")?,
                    (false, true) => write!(f, " - {body}")?,
                    (false, false) => write!(f, " + {body}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self})")
    }
}
