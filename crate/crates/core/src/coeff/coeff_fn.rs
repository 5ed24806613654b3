use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactPoint, FloatPoint, GaussRational, Var, VariableTable};
use crate::error::{Error, Result};

/// `z^a z̄^b e^{i k·t}` with trailing zero exponents trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub k: Vec<i64>,
}

fn trim<T: Zero + PartialEq>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

fn padded_cmp<T: Ord + Zero + Copy>(x: &[T], y: &[T]) -> Ordering {
    let n = x.len().max(y.len());
    for i in 0..n {
        let xi = x.get(i).copied().unwrap_or_else(T::zero);
        let yi = y.get(i).copied().unwrap_or_else(T::zero);
        match xi.cmp(&yi) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        padded_cmp(&self.a, &other.a)
            .then_with(|| padded_cmp(&self.b, &other.b))
            .then_with(|| padded_cmp(&self.k, &other.k))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn new(a: Vec<u32>, b: Vec<u32>, k: Vec<i64>) -> Self {
        Monomial { a: trim(a), b: trim(b), k: trim(k) }
    }

    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_empty() && self.b.is_empty() && self.k.is_empty()
    }

    pub fn exp(&self, var: Var) -> i64 {
        match var {
            Var::Z(i) => self.a.get(i).copied().unwrap_or(0) as i64,
            Var::Zb(i) => self.b.get(i).copied().unwrap_or(0) as i64,
            Var::T(j) => self.k.get(j).copied().unwrap_or(0),
        }
    }

    /// Total polynomial degree in the chart variables.
    pub fn poly_degree(&self) -> u32 {
        self.a.iter().sum::<u32>() + self.b.iter().sum::<u32>()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        fn zip<T: Copy + Zero + std::ops::Add<Output = T>>(x: &[T], y: &[T]) -> Vec<T> {
            (0..x.len().max(y.len()))
                .map(|i| x.get(i).copied().unwrap_or_else(T::zero) + y.get(i).copied().unwrap_or_else(T::zero))
                .collect()
        }
        Monomial::new(zip(&self.a, &other.a), zip(&self.b, &other.b), zip(&self.k, &other.k))
    }

    /// `self / other` when `other` divides `self` polynomially (characters always divide).
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let sub = |x: &[u32], y: &[u32]| -> Option<Vec<u32>> {
            (0..x.len().max(y.len()))
                .map(|i| x.get(i).copied().unwrap_or(0).checked_sub(y.get(i).copied().unwrap_or(0)))
                .collect()
        };
        let k = (0..self.k.len().max(other.k.len()))
            .map(|i| self.k.get(i).copied().unwrap_or(0) - other.k.get(i).copied().unwrap_or(0))
            .collect();
        Some(Monomial::new(sub(&self.a, &other.a)?, sub(&self.b, &other.b)?, k))
    }

    pub fn conj(&self) -> Monomial {
        Monomial::new(self.b.clone(), self.a.clone(), self.k.iter().map(|x| -x).collect())
    }

    fn with_exp(&self, var: Var, e: i64) -> Monomial {
        let mut m = self.clone();
        match var {
            Var::Z(i) => {
                m.a.resize(m.a.len().max(i + 1), 0);
                m.a[i] = e as u32;
            }
            Var::Zb(i) => {
                m.b.resize(m.b.len().max(i + 1), 0);
                m.b[i] = e as u32;
            }
            Var::T(j) => {
                m.k.resize(m.k.len().max(j + 1), 0);
                m.k[j] = e;
            }
        }
        Monomial::new(m.a, m.b, m.k)
    }

    fn max_index(&self) -> (usize, usize) {
        (self.a.len().max(self.b.len()), self.k.len())
    }

    fn fmt_with(&self, vars: Option<&VariableTable>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let name = |v: Var| match vars {
            Some(t) if t.contains(v) => t.name(v),
            _ => match v {
                Var::Z(i) => format!("z{}", i + 1),
                Var::Zb(i) => format!("zb{}", i + 1),
                Var::T(j) => format!("t{}", j + 1),
            },
        };
        let chart = self.a.len().max(self.b.len());
        for i in 0..chart {
            for (v, e) in [(Var::Z(i), self.exp(Var::Z(i))), (Var::Zb(i), self.exp(Var::Zb(i)))] {
                match e {
                    0 => {}
                    1 => parts.push(name(v)),
                    e => parts.push(format!("{}^{}", name(v), e)),
                }
            }
        }
        if !self.k.is_empty() {
            let width = vars.map(|t| t.angle_len()).unwrap_or(0).max(self.k.len());
            let ks: Vec<String> = (0..width).map(|j| self.k.get(j).copied().unwrap_or(0).to_string()).collect();
            parts.push(format!("E({})", ks.join(",")));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Finite sum of Gaussian-rational multiples of monomials; zero terms never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CoeffFn {
    terms: BTreeMap<Monomial, GaussRational>,
}

impl CoeffFn {
    pub fn zero() -> Self {
        CoeffFn::default()
    }

    pub fn one() -> Self {
        CoeffFn::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        CoeffFn::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        CoeffFn::constant(GaussRational::from_int(n))
    }

    pub fn i() -> Self {
        CoeffFn::constant(GaussRational::i())
    }

    pub fn term(m: Monomial, c: GaussRational) -> Self {
        let mut f = CoeffFn::zero();
        f.add_term(m, c);
        f
    }

    /// The coordinate function of a chart variable. For an angle this is not in the
    /// ring; use [`CoeffFn::character`] instead.
    pub fn var(v: Var) -> Result<Self> {
        match v {
            Var::T(_) => Err(Error::Unsupported("angle variables enter the ring only through characters E(k)".into())),
            v => Ok(CoeffFn::term(Monomial::one().with_exp(v, 1), GaussRational::one())),
        }
    }

    pub fn character(k: Vec<i64>) -> Self {
        CoeffFn::term(Monomial::new(vec![], vec![], k), GaussRational::one())
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, GaussRational)>) -> Self {
        let mut f = CoeffFn::zero();
        for (m, c) in iter {
            f.add_term(m, c);
        }
        f
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// `Some(c)` when the function is the constant `c` (including 0).
    pub fn constant_value(&self) -> Option<GaussRational> {
        if self.is_zero() {
            return Some(GaussRational::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> GaussRational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn scale(&self, c: &GaussRational) -> CoeffFn {
        if c.is_zero() {
            return CoeffFn::zero();
        }
        CoeffFn { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn conj(&self) -> CoeffFn {
        CoeffFn { terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `(f + f̄)/2`.
    pub fn real_part(&self) -> CoeffFn {
        (self + &self.conj()).scale(&GaussRational::from_frac(1, 2))
    }

    /// Formal partial derivative; for an angle, `∂_t e^{ikt} = i k e^{ikt}`.
    pub fn partial(&self, v: Var) -> CoeffFn {
        let mut out = CoeffFn::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            match v {
                Var::T(_) => out.add_term(
                    m.clone(),
                    c * &GaussRational::new(BigRational::zero(), BigRational::from_integer(BigInt::from(e))),
                ),
                _ => out.add_term(m.with_exp(v, e - 1), c * &GaussRational::from_int(e)),
            }
        }
        out
    }

    /// Checked partial derivative against a variable table.
    pub fn partial_in(&self, vars: &VariableTable, v: Var) -> Result<CoeffFn> {
        vars.check(v)?;
        Ok(self.partial(v))
    }

    /// Term-wise antiderivative: `∫ z^a dz = z^{a+1}/(a+1)`, `∫ e^{ikt} dt = e^{ikt}/(ik)`.
    /// Fails for an angle when some term has `k_j = 0`.
    pub fn antiderivative(&self, v: Var) -> Result<CoeffFn> {
        let mut out = CoeffFn::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            match v {
                Var::T(_) => {
                    if e == 0 {
                        return Err(Error::Unsupported(
                            "term constant along the angle has no periodic antiderivative".into(),
                        ));
                    }
                    let ik = GaussRational::new(BigRational::zero(), BigRational::from_integer(BigInt::from(e)));
                    out.add_term(m.clone(), c * &ik.inv()?);
                }
                _ => out.add_term(m.with_exp(v, e + 1), c * &GaussRational::from_frac(1, e + 1)),
            }
        }
        Ok(out)
    }

    /// Keep only terms satisfying a predicate.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> CoeffFn {
        CoeffFn { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    /// Largest chart index and angle index used, as lengths.
    pub fn support(&self) -> (usize, usize) {
        self.terms.keys().fold((0, 0), |(c, t), m| {
            let (mc, mt) = m.max_index();
            (c.max(mc), t.max(mt))
        })
    }

    pub fn pow(&self, e: u32) -> CoeffFn {
        let mut acc = CoeffFn::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Floating evaluation; chart points in `point.z`, angles in radians.
    pub fn evaluate(&self, point: &FloatPoint) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            for (i, &e) in m.a.iter().enumerate() {
                let z = point.z.get(i).ok_or_else(|| Error::MissingAssignment(format!("z{}", i + 1)))?;
                v *= z.powu(e);
            }
            for (i, &e) in m.b.iter().enumerate() {
                let z = point.z.get(i).ok_or_else(|| Error::MissingAssignment(format!("zb{}", i + 1)))?;
                v *= z.conj().powu(e);
            }
            let mut phase = 0.0;
            for (j, &k) in m.k.iter().enumerate() {
                let t = point.t.get(j).ok_or_else(|| Error::MissingAssignment(format!("t{}", j + 1)))?;
                phase += k as f64 * t;
            }
            total += v * Complex64::from_polar(1.0, phase);
        }
        Ok(total)
    }

    /// Evaluation with named diagnostics for missing variables.
    pub fn evaluate_in(&self, vars: &VariableTable, point: &FloatPoint) -> Result<Complex64> {
        let (c, t) = self.support();
        if c > point.z.len() {
            return Err(Error::MissingAssignment(vars.name(Var::Z(point.z.len()))));
        }
        if t > point.t.len() {
            return Err(Error::MissingAssignment(vars.name(Var::T(point.t.len()))));
        }
        self.evaluate(point)
    }

    pub fn evaluate_exact(&self, point: &ExactPoint) -> Result<GaussRational> {
        let mut total = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.a.iter().enumerate() {
                let z = point.z.get(i).ok_or_else(|| Error::MissingAssignment(format!("z{}", i + 1)))?;
                v *= &z.pow(e);
            }
            for (i, &e) in m.b.iter().enumerate() {
                let z = point.z.get(i).ok_or_else(|| Error::MissingAssignment(format!("zb{}", i + 1)))?;
                v *= &z.conj().pow(e);
            }
            let mut quarter = 0i64;
            for (j, &k) in m.k.iter().enumerate() {
                let q = point.quarter_turns.get(j).ok_or_else(|| Error::MissingAssignment(format!("t{}", j + 1)))?;
                quarter += k * q;
            }
            v *= &GaussRational::i_pow(quarter);
            total += &v;
        }
        Ok(total)
    }

    /// Substitute `z_a ↦ 0`-free rename: shift chart indices by `dc` and angles by `dt`
    /// (used when embedding a factor into a product model).
    pub fn shifted(&self, dc: usize, dt: usize) -> CoeffFn {
        CoeffFn {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let pad = |v: &[u32]| {
                        if v.is_empty() {
                            vec![]
                        } else {
                            std::iter::repeat_n(0, dc).chain(v.iter().copied()).collect()
                        }
                    };
                    let k = if m.k.is_empty() {
                        vec![]
                    } else {
                        std::iter::repeat_n(0, dt).chain(m.k.iter().copied()).collect()
                    };
                    (Monomial::new(pad(&m.a), pad(&m.b), k), c.clone())
                })
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, vars: &'a VariableTable) -> CoeffDisplay<'a> {
        CoeffDisplay { f: self, vars: Some(vars) }
    }
}

/// Formatter binding a `CoeffFn` to variable names.
pub struct CoeffDisplay<'a> {
    f: &'a CoeffFn,
    vars: Option<&'a VariableTable>,
}

fn needs_parens(c: &GaussRational) -> bool {
    !c.re.is_zero() && !c.im.is_zero()
}

impl fmt::Display for CoeffDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.f.terms.iter().enumerate() {
            let mut c = c.clone();
            let negative = if needs_parens(&c) {
                false
            } else {
                let neg = if c.re.is_zero() { c.im < BigRational::zero() } else { c.re < BigRational::zero() };
                if neg {
                    c = -c;
                }
                neg
            };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                if needs_parens(&c) && idx > 0 {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "{c}")?;
                }
            } else {
                if !c.is_one() {
                    if needs_parens(&c) {
                        write!(f, "({c})*")?;
                    } else {
                        write!(f, "{c}*")?;
                    }
                }
                m.fmt_with(self.vars, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        CoeffDisplay { f: self, vars: None }.fmt(f)
    }
}

impl fmt::Debug for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffFn({self})")
    }
}

impl From<GaussRational> for CoeffFn {
    fn from(c: GaussRational) -> Self {
        CoeffFn::constant(c)
    }
}

impl<'a> std::ops::Add<&'a CoeffFn> for &'a CoeffFn {
    type Output = CoeffFn;
    fn add(self, rhs: &CoeffFn) -> CoeffFn {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a CoeffFn> for &'a CoeffFn {
    type Output = CoeffFn;
    fn sub(self, rhs: &CoeffFn) -> CoeffFn {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a CoeffFn> for &'a CoeffFn {
    type Output = CoeffFn;
    fn mul(self, rhs: &CoeffFn) -> CoeffFn {
        let mut out = CoeffFn::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &CoeffFn {
    type Output = CoeffFn;
    fn neg(self) -> CoeffFn {
        CoeffFn { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl std::ops::Neg for CoeffFn {
    type Output = CoeffFn;
    fn neg(self) -> CoeffFn {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for CoeffFn {
            type Output = CoeffFn;
            fn $m(self, rhs: CoeffFn) -> CoeffFn {
                (&self).$m(&rhs)
            }
        }
        impl<'a> std::ops::$tr<&'a CoeffFn> for CoeffFn {
            type Output = CoeffFn;
            fn $m(self, rhs: &CoeffFn) -> CoeffFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::AddAssign<&CoeffFn> for CoeffFn {
    fn add_assign(&mut self, rhs: &CoeffFn) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&CoeffFn> for CoeffFn {
    fn sub_assign(&mut self, rhs: &CoeffFn) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}
