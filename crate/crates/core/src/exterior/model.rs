use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::coeff::{Var, VariableTable};
use crate::error::{Error, Result};

use super::{Blade, Form, Terms};

/// Tri-grade tag of a degree-1 generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grade {
    /// Fiber direction.
    F,
    /// Holomorphic base direction.
    H,
    /// Antiholomorphic base direction.
    A,
    /// Real base direction without a complex type (e.g. the real frame of a nilmanifold).
    R,
}

impl Grade {
    pub fn parse(s: &str) -> Option<Grade> {
        match s {
            "F" => Some(Grade::F),
            "H" => Some(Grade::H),
            "A" => Some(Grade::A),
            "R" => Some(Grade::R),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grade::F => "F",
            Grade::H => "H",
            Grade::A => "A",
            Grade::R => "R",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// The generator is `dv`.
    Exact(Var),
    /// Abstract generator with a declared degree-2 differential.
    Structure(Terms),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub grade: Grade,
    pub kind: GeneratorKind,
    /// Index of the complex-conjugate generator (itself for real generators).
    pub conj: usize,
}

impl Generator {
    pub fn exact_var(&self) -> Option<Var> {
        match self.kind {
            GeneratorKind::Exact(v) => Some(v),
            GeneratorKind::Structure(_) => None,
        }
    }

    pub fn is_real(&self, index: usize) -> bool {
        self.conj == index
    }
}

/// Degree-1 generators with structure differentials over a coefficient ring.
#[derive(Clone, PartialEq, Eq)]
pub struct CoframeModel {
    vars: VariableTable,
    generators: Vec<Generator>,
    exact_of: HashMap<Var, usize>,
}

pub type ModelRef = Arc<CoframeModel>;

impl CoframeModel {
    pub fn vars(&self) -> &VariableTable {
        &self.vars
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Coefficients restricted to constants (compact invariant model).
    pub fn is_invariant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn exact_generator(&self, v: Var) -> Option<usize> {
        self.exact_of.get(&v).copied()
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn top_blade(&self) -> Blade {
        Blade::full(self.rank())
    }

    pub fn indices_with_grade(&self, grade: Grade) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.generators[i].grade == grade).collect()
    }

    /// Structure differential of generator `i` as raw terms (empty for exact generators).
    pub fn structure_terms(&self, i: usize) -> Option<&Terms> {
        match &self.generators[i].kind {
            GeneratorKind::Structure(t) => Some(t),
            GeneratorKind::Exact(_) => None,
        }
    }

    /// Does every structure constant vanish (flat torus-type model)?
    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|g| match &g.kind {
            GeneratorKind::Structure(t) => t.is_empty(),
            GeneratorKind::Exact(_) => true,
        })
    }

    /// Product model: generators of `self` followed by those of `other` (names must be disjoint).
    pub fn product(self: &ModelRef, other: &ModelRef) -> Result<ModelRef> {
        let vars = self.vars.extend(&other.vars)?;
        let shift = self.rank();
        let (dc, dt) = (self.vars.chart_len(), self.vars.angle_len());
        let shift_var = |v: Var| match v {
            Var::Z(a) => Var::Z(a + dc),
            Var::Zb(a) => Var::Zb(a + dc),
            Var::T(j) => Var::T(j + dt),
        };
        let mut generators = self.generators.clone();
        for g in &other.generators {
            let kind = match &g.kind {
                GeneratorKind::Exact(v) => GeneratorKind::Exact(shift_var(*v)),
                GeneratorKind::Structure(t) => {
                    GeneratorKind::Structure(t.iter().map(|(b, c)| (b.shifted(shift), c.shifted(dc, dt))).collect())
                }
            };
            generators.push(Generator { name: g.name.clone(), grade: g.grade, kind, conj: g.conj + shift });
        }
        CoframeModel::assemble(vars, generators)
    }

    fn assemble(vars: VariableTable, generators: Vec<Generator>) -> Result<ModelRef> {
        if generators.len() > 63 {
            return Err(Error::InvalidModel("at most 63 generators are supported".into()));
        }
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if seen.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate generator `{}`", g.name)));
            }
            if vars.lookup(&g.name).is_ok() {
                return Err(Error::InvalidModel(format!("generator `{}` clashes with a variable name", g.name)));
            }
        }
        let mut exact_of = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if let GeneratorKind::Exact(v) = g.kind {
                vars.check(v)?;
                let expected = match v {
                    Var::Z(_) => Grade::H,
                    Var::Zb(_) => Grade::A,
                    Var::T(_) => Grade::F,
                };
                if g.grade != expected {
                    return Err(Error::InvalidModel(format!(
                        "exact generator `{}` = d{} must have grade {}",
                        g.name,
                        vars.name(v),
                        expected.as_str()
                    )));
                }
                if exact_of.insert(v, i).is_some() {
                    return Err(Error::InvalidModel(format!("variable `{}` has two exact generators", vars.name(v))));
                }
            }
        }
        for v in vars.vars() {
            if !exact_of.contains_key(&v) {
                return Err(Error::InvalidModel(format!("variable `{}` has no exact generator", vars.name(v))));
            }
        }
        let model = Arc::new(CoframeModel { vars, generators, exact_of });
        model.validate()?;
        Ok(model)
    }

    fn validate(self: &ModelRef) -> Result<()> {
        let n = self.rank();
        for (i, g) in self.generators.iter().enumerate() {
            if g.conj >= n || self.generators[g.conj].conj != i {
                return Err(Error::InvalidModel(format!("conjugation of `{}` is not an involution", g.name)));
            }
            let partner = &self.generators[g.conj];
            let ok = match g.grade {
                Grade::F | Grade::R => g.conj == i,
                Grade::H => partner.grade == Grade::A,
                Grade::A => partner.grade == Grade::H,
            };
            if !ok {
                return Err(Error::InvalidModel(format!(
                    "generator `{}` of grade {} has an incompatible conjugate `{}`",
                    g.name,
                    g.grade.as_str(),
                    partner.name
                )));
            }
            if let GeneratorKind::Exact(v) = g.kind {
                let expected = match v {
                    Var::Z(a) => Var::Zb(a),
                    Var::Zb(a) => Var::Z(a),
                    t => t,
                };
                if partner.exact_var() != Some(expected) {
                    return Err(Error::InvalidModel(format!(
                        "exact generator `{}` must be conjugate to d{}",
                        g.name,
                        self.vars.name(expected)
                    )));
                }
            }
            if let GeneratorKind::Structure(t) = &g.kind {
                if t.keys().any(|b| b.degree() != 2 || b.max_index().is_some_and(|m| m >= n)) {
                    return Err(Error::Degree(format!("differential of `{}` must be a pure degree-2 form", g.name)));
                }
                for c in t.values() {
                    let (ch, an) = c.support();
                    if ch > self.vars.chart_len() || an > self.vars.angle_len() {
                        return Err(Error::UnknownVariable(format!(
                            "coefficient of d{} uses an undeclared variable",
                            g.name
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            let gi = Form::generator(self, i);
            let dgi = gi.d();
            let ddgi = dgi.d();
            if !ddgi.is_zero() {
                return Err(Error::InvalidModel(format!(
                    "d² ≠ 0 on generator `{}`: d(d{}) = {}",
                    self.generators[i].name, self.generators[i].name, ddgi
                )));
            }
            let lhs = dgi.conj();
            let rhs = Form::generator(self, self.generators[i].conj).d();
            if lhs != rhs {
                return Err(Error::InvalidModel(format!(
                    "conjugation does not commute with d on `{}`",
                    self.generators[i].name
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoframeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoframeModel[{}]", self.names().join(", "))
    }
}

/// Incremental construction of a [`CoframeModel`].
///
/// Differentials are given as forms on [`ModelBuilder::skeleton`], a copy of the model
/// with all structure differentials zero.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    vars: VariableTable,
    generators: Vec<(String, Grade, Option<Var>)>,
    diffs: BTreeMap<usize, Terms>,
    conj: BTreeMap<usize, usize>,
}

impl ModelBuilder {
    pub fn new(vars: VariableTable) -> Self {
        ModelBuilder { vars, generators: Vec::new(), diffs: BTreeMap::new(), conj: BTreeMap::new() }
    }

    pub fn vars(&self) -> &VariableTable {
        &self.vars
    }

    pub fn add_generator(&mut self, name: &str, grade: Grade) -> usize {
        self.generators.push((name.to_string(), grade, None));
        self.generators.len() - 1
    }

    pub fn add_exact(&mut self, name: &str, var: Var) -> usize {
        let grade = match var {
            Var::Z(_) => Grade::H,
            Var::Zb(_) => Grade::A,
            Var::T(_) => Grade::F,
        };
        self.generators.push((name.to_string(), grade, Some(var)));
        self.generators.len() - 1
    }

    /// Insert `d<name>` generators at the front for every variable that lacks one.
    pub fn add_missing_exact(&mut self) {
        let mut front = Vec::new();
        for v in self.vars.vars() {
            if !self.generators.iter().any(|g| g.2 == Some(v)) {
                let grade = match v {
                    Var::Z(_) => Grade::H,
                    Var::Zb(_) => Grade::A,
                    Var::T(_) => Grade::F,
                };
                front.push((format!("d{}", self.vars.name(v)), grade, Some(v)));
            }
        }
        let shift = front.len();
        if shift == 0 {
            return;
        }
        front.append(&mut self.generators);
        self.generators = front;
        self.diffs = std::mem::take(&mut self.diffs)
            .into_iter()
            .map(|(i, t)| (i + shift, t.into_iter().map(|(b, c)| (b.shifted(shift), c)).collect()))
            .collect();
        self.conj = std::mem::take(&mut self.conj).into_iter().map(|(a, b)| (a + shift, b + shift)).collect();
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.0 == name)
    }

    pub fn set_diff(&mut self, gen: usize, diff: &Form) -> Result<()> {
        if self.generators[gen].2.is_some() {
            return Err(Error::InvalidModel(format!(
                "exact generator `{}` cannot carry a differential",
                self.generators[gen].0
            )));
        }
        if !diff.is_homogeneous_of(2) && !diff.is_zero() {
            return Err(Error::Degree(format!(
                "differential of `{}` must be a pure degree-2 form, got {}",
                self.generators[gen].0, diff
            )));
        }
        self.diffs.insert(gen, diff.terms().clone());
        Ok(())
    }

    pub fn set_conj(&mut self, a: usize, b: usize) {
        self.conj.insert(a, b);
        self.conj.insert(b, a);
    }

    fn generators_with(&self, with_diffs: bool) -> Vec<Generator> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, (name, grade, exact))| {
                let kind = match exact {
                    Some(v) => GeneratorKind::Exact(*v),
                    None => GeneratorKind::Structure(if with_diffs {
                        self.diffs.get(&i).cloned().unwrap_or_default()
                    } else {
                        Terms::new()
                    }),
                };
                let conj = match (exact, self.conj.get(&i)) {
                    (_, Some(&j)) => j,
                    (Some(v), None) => {
                        let target = match *v {
                            Var::Z(a) => Var::Zb(a),
                            Var::Zb(a) => Var::Z(a),
                            t => t,
                        };
                        self.generators.iter().position(|g| g.2 == Some(target)).unwrap_or(i)
                    }
                    (None, None) => i,
                };
                Generator { name: name.clone(), grade: *grade, kind, conj }
            })
            .collect()
    }

    /// The model with every structure differential set to zero.
    pub fn skeleton(&self) -> Result<ModelRef> {
        CoframeModel::assemble(self.vars.clone(), self.generators_with(false))
    }

    pub fn build(&self) -> Result<ModelRef> {
        for (i, (name, grade, exact)) in self.generators.iter().enumerate() {
            if exact.is_none() && matches!(grade, Grade::H | Grade::A) && !self.conj.contains_key(&i) {
                return Err(Error::InvalidModel(format!(
                    "abstract generator `{name}` of grade {} needs a declared conjugate",
                    grade.as_str()
                )));
            }
        }
        CoframeModel::assemble(self.vars.clone(), self.generators_with(true))
    }
}
