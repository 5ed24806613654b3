use num_complex::Complex64;
use num_traits::{One, Zero};

use super::GaussRational;
use crate::error::{Error, Result};

/// A differentiation/substitution target in the coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Holomorphic chart variable `z_a`.
    Z(usize),
    /// Its conjugate `z̄_a`.
    Zb(usize),
    /// Torus angle `t_j`.
    T(usize),
}

/// Ordered chart and angle variable names; the order fixes canonical term ordering.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableTable {
    chart: Vec<String>,
    angles: Vec<String>,
}

/// `z1 -> zb1`, `w -> wb`: a `b` is inserted after the alphabetic prefix.
pub fn conjugate_name(name: &str) -> String {
    let split = name.char_indices().find(|(_, c)| !c.is_alphabetic()).map(|(i, _)| i).unwrap_or(name.len());
    format!("{}b{}", &name[..split], &name[split..])
}

impl VariableTable {
    pub fn new<S: Into<String>>(
        chart: impl IntoIterator<Item = S>,
        angles: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let table = VariableTable {
            chart: chart.into_iter().map(Into::into).collect(),
            angles: angles.into_iter().map(Into::into).collect(),
        };
        let mut seen = std::collections::HashSet::new();
        for name in table.all_names() {
            if name.is_empty() || name == "i" || name == "d" || name == "E" {
                return Err(Error::InvalidModel(format!("reserved variable name `{name}`")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidModel(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(table)
    }

    pub fn empty() -> Self {
        VariableTable::default()
    }

    pub fn chart_len(&self) -> usize {
        self.chart.len()
    }

    pub fn angle_len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chart.is_empty() && self.angles.is_empty()
    }

    pub fn chart_names(&self) -> &[String] {
        &self.chart
    }

    pub fn angle_names(&self) -> &[String] {
        &self.angles
    }

    pub fn name(&self, var: Var) -> String {
        match var {
            Var::Z(a) => self.chart[a].clone(),
            Var::Zb(a) => conjugate_name(&self.chart[a]),
            Var::T(j) => self.angles[j].clone(),
        }
    }

    fn all_names(&self) -> Vec<String> {
        self.vars().map(|v| self.name(v)).collect()
    }

    /// All variables in canonical order: `z_1, z̄_1, …, t_1, …`.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.chart.len()).flat_map(|a| [Var::Z(a), Var::Zb(a)]).chain((0..self.angles.len()).map(Var::T))
    }

    pub fn lookup(&self, name: &str) -> Result<Var> {
        self.vars().find(|&v| self.name(v) == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, var: Var) -> bool {
        match var {
            Var::Z(a) | Var::Zb(a) => a < self.chart.len(),
            Var::T(j) => j < self.angles.len(),
        }
    }

    pub fn check(&self, var: Var) -> Result<()> {
        if self.contains(var) {
            Ok(())
        } else {
            Err(Error::UnknownVariable(format!("{var:?}")))
        }
    }

    /// Concatenate two tables (chart vars of `self` first).
    pub fn extend(&self, other: &VariableTable) -> Result<VariableTable> {
        VariableTable::new(
            self.chart.iter().chain(&other.chart).cloned(),
            self.angles.iter().chain(&other.angles).cloned(),
        )
    }
}

/// A point with complex chart coordinates and real angles, for floating evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoint {
    pub z: Vec<Complex64>,
    pub t: Vec<f64>,
}

/// A point where every coefficient function evaluates exactly in ℚ(i).
///
/// Chart coordinates are Gaussian rationals; angles are integer multiples of π/2,
/// so each character `e^{i k·t}` evaluates to a power of `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoint {
    pub z: Vec<GaussRational>,
    pub quarter_turns: Vec<i64>,
}

impl ExactPoint {
    pub fn origin(vars: &VariableTable) -> Self {
        ExactPoint { z: vec![GaussRational::zero(); vars.chart_len()], quarter_turns: vec![0; vars.angle_len()] }
    }

    pub fn to_float(&self) -> FloatPoint {
        FloatPoint {
            z: self.z.iter().map(GaussRational::to_complex).collect(),
            t: self.quarter_turns.iter().map(|&q| q as f64 * std::f64::consts::FRAC_PI_2).collect(),
        }
    }

    /// The fixed 16-point rational sampling grid used for nonvanishing checks.
    pub fn sample_grid(vars: &VariableTable) -> Vec<ExactPoint> {
        let values = [
            GaussRational::from_frac(1, 2),
            GaussRational::from_parts((-1, 3), (1, 2)),
            GaussRational::from_int(2),
            GaussRational::i(),
            GaussRational::from_int(-1),
            GaussRational::from_parts((1, 1), (1, 1)),
            GaussRational::from_frac(1, 3),
            GaussRational::from_parts((0, 1), (-2, 1)),
            GaussRational::from_parts((3, 2), (-1, 4)),
            GaussRational::from_frac(-5, 7),
            GaussRational::from_parts((2, 5), (3, 5)),
            GaussRational::one(),
            GaussRational::from_parts((-1, 1), (-1, 1)),
            GaussRational::from_parts((1, 4), (0, 1)),
            GaussRational::from_parts((-3, 1), (1, 1)),
            GaussRational::from_parts((1, 5), (-1, 3)),
        ];
        (0..16)
            .map(|k| ExactPoint {
                z: (0..vars.chart_len()).map(|a| values[(k + 5 * a) % values.len()].clone()).collect(),
                quarter_turns: (0..vars.angle_len()).map(|j| ((k + j) % 4) as i64).collect(),
            })
            .collect()
    }
}

impl std::fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let z: Vec<String> = self.z.iter().map(ToString::to_string).collect();
        let t: Vec<String> = self.quarter_turns.iter().map(|q| format!("{q}·π/2")).collect();
        write!(f, "(z=[{}], t=[{}])", z.join(", "), t.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_names() {
        assert_eq!(conjugate_name("z1"), "zb1");
        assert_eq!(conjugate_name("z"), "zb");
        assert_eq!(conjugate_name("w2x"), "wb2x");
    }

    #[test]
    fn lookup_and_order() {
        let t = VariableTable::new(["z1", "z2"], ["t1"]).unwrap();
        assert_eq!(t.lookup("zb2").unwrap(), Var::Zb(1));
        assert_eq!(t.lookup("t1").unwrap(), Var::T(0));
        assert!(matches!(t.lookup("q"), Err(Error::UnknownVariable(n)) if n == "q"));
        let names: Vec<String> = t.vars().map(|v| t.name(v)).collect();
        assert_eq!(names, ["z1", "zb1", "z2", "zb2", "t1"]);
    }

    #[test]
    fn rejects_duplicates() {
        assert!(VariableTable::new(["z", "z"], Vec::<&str>::new()).is_err());
        assert!(VariableTable::new(["i"], Vec::<&str>::new()).is_err());
    }

    #[test]
    fn grid_has_sixteen_points() {
        let t = VariableTable::new(["z1", "z2"], ["t1", "t2"]).unwrap();
        let grid = ExactPoint::sample_grid(&t);
        assert_eq!(grid.len(), 16);
        assert!(grid.iter().all(|p| p.z.len() == 2 && p.quarter_turns.len() == 2));
    }
}
