//! Exact spectral sequences of finite filtered cochain complexes over ℚ(i).
//!
//! A filtration is given by a weight per basis vector; `F^p C^k` is spanned by the
//! basis vectors of weight `≥ p`. Pages are computed twice: from the `Z_r / B_r`
//! subquotients and as the cohomology of the previous page.

mod kunneth;
mod lie;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::coeff::GaussRational;
use crate::dolbeault::{CohomologyTable, GradedComplex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use kunneth::{e2_identification, kunneth_check, KunnethVerdict};
pub use lie::{build_filtration, fiber_null_space, LieFiltration};

type Vector = Vec<GaussRational>;

/// Cochain complex `d_k : C^k → C^{k+1}` with a weight on each basis vector.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub total: GradedComplex,
    pub weights: BTreeMap<i32, Vec<usize>>,
}

impl FilteredComplex {
    /// Validates `d² = 0` and `d F^p ⊆ F^p`.
    pub fn new(weights: BTreeMap<i32, Vec<usize>>, diffs: BTreeMap<i32, Matrix>) -> Result<Self> {
        let dims: BTreeMap<i32, usize> = weights.iter().map(|(k, w)| (*k, w.len())).collect();
        for (k, d) in &diffs {
            let (src, dst) = (dims.get(k).copied().unwrap_or(0), dims.get(&(k + 1)).copied().unwrap_or(0));
            if d.cols() != src || d.rows() != dst {
                return Err(Error::InvalidModel(format!(
                    "d_{k} has shape {}x{}, expected {dst}x{src}",
                    d.rows(),
                    d.cols()
                )));
            }
        }
        let total = GradedComplex { dims, diffs, step: 1 };
        if !total.is_complex() {
            return Err(Error::InvalidModel("d^2 != 0".into()));
        }
        let fc = FilteredComplex { total, weights };
        for (k, d) in &fc.total.diffs {
            let (ws, wt) = (fc.weight_list(*k), fc.weight_list(k + 1));
            for c in 0..d.cols() {
                for r in 0..d.rows() {
                    if !d[(r, c)].is_zero() && wt[r] < ws[c] {
                        return Err(Error::InvalidModel(format!(
                            "d_{k} lowers filtration: basis vector {c} of weight {} hits weight {}",
                            ws[c], wt[r]
                        )));
                    }
                }
            }
        }
        Ok(fc)
    }

    fn weight_list(&self, k: i32) -> &[usize] {
        self.weights.get(&k).map_or(&[], Vec::as_slice)
    }

    fn dim(&self, k: i32) -> usize {
        self.total.dim(k)
    }

    fn d(&self, k: i32) -> Matrix {
        self.total.diffs.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(k + 1), self.dim(k)))
    }

    pub fn max_weight(&self) -> usize {
        self.weights.values().flatten().copied().max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.weights.keys().copied().collect()
    }

    /// `Z_r^p = F^p C^k ∩ d^{-1}(F^{p+r} C^{k+1})`, as basis columns.
    fn z(&self, r: i64, p: i64, k: i32) -> Vec<Vector> {
        let ws = self.weight_list(k);
        let wt = self.weight_list(k + 1);
        let cols: Vec<usize> = (0..ws.len()).filter(|&i| ws[i] as i64 >= p).collect();
        if cols.is_empty() {
            return Vec::new();
        }
        let rows: Vec<usize> = (0..wt.len()).filter(|&j| (wt[j] as i64) < p + r).collect();
        let embed = |v: &[GaussRational]| {
            let mut full = vec![GaussRational::zero(); ws.len()];
            for (x, &i) in v.iter().zip(&cols) {
                full[i] = x.clone();
            }
            full
        };
        if rows.is_empty() {
            return cols
                .iter()
                .map(|&i| {
                    let mut e = vec![GaussRational::zero(); ws.len()];
                    e[i] = GaussRational::from_int(1);
                    e
                })
                .collect();
        }
        let a = self.d(k).select_rows(&rows).select_cols(&cols);
        a.nullspace().iter().map(|v| embed(v)).collect()
    }

    /// `Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1}` in degree `k`.
    fn b(&self, r: i64, p: i64, k: i32) -> Vec<Vector> {
        let mut gens = self.z(r - 1, p + 1, k);
        let d = self.d(k - 1);
        for v in self.z(r - 1, p - r + 1, k - 1) {
            gens.push(d.apply(&v));
        }
        independent(gens, self.dim(k))
    }
}

fn independent(vectors: Vec<Vector>, dim: usize) -> Vec<Vector> {
    if vectors.is_empty() || dim == 0 {
        return Vec::new();
    }
    let m = Matrix::from_cols(dim, &vectors);
    m.column_basis().into_iter().map(|i| vectors[i].clone()).collect()
}

/// Quotient `Z / B` with chosen representatives.
struct Quotient {
    reps: Vec<Vector>,
    sub: Vec<Vector>,
    dim: usize,
}

impl Quotient {
    fn new(z: Vec<Vector>, b: Vec<Vector>, dim: usize) -> Result<Self> {
        let mut all = b.clone();
        all.extend(z.iter().cloned());
        if dim == 0 || all.is_empty() {
            return Ok(Quotient { reps: Vec::new(), sub: b, dim });
        }
        let piv = Matrix::from_cols(dim, &all).column_basis();
        if piv.iter().filter(|&&i| i < b.len()).count() != b.len() || piv.len() != rank_cols(&z, dim) {
            return Err(Error::InvalidModel("B_r is not contained in Z_r".into()));
        }
        let reps = piv.into_iter().filter(|&i| i >= b.len()).map(|i| all[i].clone()).collect();
        Ok(Quotient { reps, sub: b, dim })
    }

    /// Coordinates of `v` (assumed in `Z`) in the representative basis.
    fn coords(&self, v: &[GaussRational]) -> Result<Vector> {
        if self.reps.is_empty() {
            return Ok(Vec::new());
        }
        let mut cols = self.reps.clone();
        cols.extend(self.sub.iter().cloned());
        let m = Matrix::from_cols(self.dim, &cols);
        let x = m.solve(v).ok_or_else(|| Error::InvalidModel("image of d_r leaves Z_r".into()))?;
        Ok(x[..self.reps.len()].to_vec())
    }
}

fn rank_cols(v: &[Vector], dim: usize) -> usize {
    if v.is_empty() || dim == 0 {
        0
    } else {
        Matrix::from_cols(dim, v).rank()
    }
}

/// `d_r : E_r^{p,q} → E_r^{p+r, q−r+1}`.
#[derive(Clone, Debug)]
pub struct PageMap {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct PageReport {
    /// `r → (p, q) → dim E_r^{p,q}` from the subquotient formula.
    pub pages: BTreeMap<usize, BTreeMap<(i64, i64), usize>>,
    /// Nonzero `d_r` only.
    pub differentials: BTreeMap<usize, Vec<PageMap>>,
    pub e_infinity: BTreeMap<(i64, i64), usize>,
    /// Smallest `r` with `d_s = 0` for all `s ≥ r`.
    pub stabilization_index: usize,
    /// `H(E_r, d_r)` agrees with the subquotient `E_{r+1}` on every cell.
    pub recurrence_agrees: bool,
    pub d_squared_zero: bool,
    pub weakly_decreasing: bool,
    pub total_cohomology: CohomologyTable,
    /// `Σ_{p+q=k} dim E_∞^{p,q} = dim H^k` for every `k`.
    pub converges: bool,
}

impl PageReport {
    pub fn page(&self, r: usize) -> Option<&BTreeMap<(i64, i64), usize>> {
        self.pages.get(&r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells = |m: &BTreeMap<(i64, i64), usize>| {
            m.iter()
                .map(|((p, q), d)| (format!("{p},{q}"), serde_json::Value::from(*d)))
                .collect::<serde_json::Map<_, _>>()
        };
        serde_json::json!({
            "pages": self.pages.iter().map(|(r, m)| (r.to_string(), serde_json::Value::Object(cells(m)))).collect::<serde_json::Map<_, _>>(),
            "differential_ranks": self.differentials.iter().map(|(r, ms)| {
                (r.to_string(), ms.iter().map(|m| serde_json::json!({
                    "from": format!("{},{}", m.from.0, m.from.1),
                    "to": format!("{},{}", m.to.0, m.to.1),
                    "rank": m.matrix.rank(),
                })).collect::<Vec<_>>().into())
            }).collect::<serde_json::Map<_, _>>(),
            "e_infinity": cells(&self.e_infinity),
            "stabilization_index": self.stabilization_index,
            "recurrence_agrees": self.recurrence_agrees,
            "d_squared_zero": self.d_squared_zero,
            "converges": self.converges,
            "total_cohomology": self.total_cohomology.to_json(),
        })
    }

    /// Text grid of one page, `q` decreasing downwards.
    pub fn grid(&self, r: usize) -> String {
        let Some(page) = self.pages.get(&r) else { return String::new() };
        let ps: Vec<i64> = page.keys().map(|c| c.0).collect();
        let qs: Vec<i64> = page.keys().map(|c| c.1).collect();
        let (p0, p1) = (ps.iter().min().copied().unwrap_or(0), ps.iter().max().copied().unwrap_or(0));
        let (q0, q1) = (qs.iter().min().copied().unwrap_or(0), qs.iter().max().copied().unwrap_or(0));
        let mut out = format!("E_{r}\n");
        for q in (q0..=q1).rev() {
            out.push_str(&format!("{q:>3} |"));
            for p in p0..=p1 {
                match page.get(&(p, q)) {
                    Some(d) => out.push_str(&format!(" {d:>3}")),
                    None => out.push_str("   ."),
                }
            }
            out.push('\n');
        }
        out.push_str("    +");
        out.push_str(&"----".repeat((p1 - p0 + 1) as usize));
        out.push_str("\n     ");
        for p in p0..=p1 {
            out.push_str(&format!(" {p:>3}"));
        }
        out.push('\n');
        out
    }
}

impl fmt::Display for PageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.pages.keys() {
            write!(f, "{}", self.grid(*r))?;
        }
        writeln!(f, "stabilizes at r = {}", self.stabilization_index)?;
        writeln!(f, "converges: {}", self.converges)
    }
}

/// Pages `E_0 … E_{r_max}` (and `E_∞`) of the spectral sequence of `fc`.
pub fn pages(fc: &FilteredComplex, r_max: usize) -> Result<PageReport> {
    let w = fc.max_weight() as i64;
    let last = (w + 1).max(r_max as i64) as usize;
    let degrees = fc.degrees();
    // cells with a nonzero E_0
    let mut cells = Vec::new();
    for &k in &degrees {
        for p in 0..=w {
            if fc.weight_list(k).iter().any(|&x| x as i64 == p) {
                cells.push((p, k));
            }
        }
    }
    let mut quotients: BTreeMap<usize, BTreeMap<(i64, i32), Quotient>> = BTreeMap::new();
    for r in 0..=last + 1 {
        let mut qs = BTreeMap::new();
        for &(p, k) in &cells {
            let ri = r as i64;
            qs.insert((p, k), Quotient::new(fc.z(ri, p, k), fc.b(ri, p, k), fc.dim(k))?);
        }
        quotients.insert(r, qs);
    }
    let mut page_dims = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    let mut recurrence_agrees = true;
    let mut d_squared_zero = true;
    let mut weakly_decreasing = true;
    let mut nonzero_at = Vec::new();
    for r in 0..=last {
        let qs = &quotients[&r];
        let dims: BTreeMap<(i64, i64), usize> =
            qs.iter().map(|(&(p, k), q)| ((p, k as i64 - p), q.reps.len())).collect();
        // d_r matrices
        let mut maps: BTreeMap<(i64, i32), Matrix> = BTreeMap::new();
        for (&(p, k), q) in qs {
            let target = (p + r as i64, k + 1);
            let Some(tq) = qs.get(&target) else { continue };
            if q.reps.is_empty() || tq.reps.is_empty() {
                continue;
            }
            let d = fc.d(k);
            let cols: Vec<Vector> = q.reps.iter().map(|x| tq.coords(&d.apply(x))).collect::<Result<_>>()?;
            let m = Matrix::from_cols(tq.reps.len(), &cols);
            if !m.is_zero() {
                maps.insert((p, k), m);
            }
        }
        for (&(p, k), m) in &maps {
            if let Some(m2) = maps.get(&(p + r as i64, k + 1)) {
                if !m2.mul(m).is_zero() {
                    d_squared_zero = false;
                }
            }
        }
        // E_{r+1} as cohomology of (E_r, d_r)
        let next = &quotients[&(r + 1)];
        for (&(p, k), q) in qs {
            let out = maps.get(&(p, k)).map_or(0, Matrix::rank);
            let inc = maps.get(&(p - r as i64, k - 1)).map_or(0, Matrix::rank);
            let h = q.reps.len() - out - inc;
            let direct = next.get(&(p, k)).map_or(0, |n| n.reps.len());
            if h != direct {
                recurrence_agrees = false;
            }
            if direct > q.reps.len() {
                weakly_decreasing = false;
            }
        }
        if !maps.is_empty() {
            nonzero_at.push(r);
        }
        let list: Vec<PageMap> = maps
            .into_iter()
            .map(|((p, k), matrix)| PageMap {
                from: (p, k as i64 - p),
                to: (p + r as i64, k as i64 + 1 - p - r as i64),
                matrix,
            })
            .collect();
        if !list.is_empty() {
            differentials.insert(r, list);
        }
        if r <= r_max {
            page_dims.insert(r, dims);
        }
    }
    let e_infinity: BTreeMap<(i64, i64), usize> =
        quotients[&(last + 1)].iter().map(|(&(p, k), q)| ((p, k as i64 - p), q.reps.len())).collect();
    let stabilization_index = nonzero_at.last().map_or(0, |r| r + 1);
    let total_cohomology = fc.total.cohomology();
    let converges = degrees.iter().all(|&k| {
        let s: usize = e_infinity.iter().filter(|((p, q), _)| p + q == k as i64).map(|(_, d)| d).sum();
        s == total_cohomology.get(k)
    });
    Ok(PageReport {
        pages: page_dims,
        differentials,
        e_infinity,
        stabilization_index,
        recurrence_agrees,
        d_squared_zero,
        weakly_decreasing,
        total_cohomology,
        converges,
    })
}

/// The hand-built six-dimensional example: `C^0 = ⟨a0, a1, a2⟩`, `C^1 = ⟨b0, b1, b2⟩`
/// with `d a0 = b1` (a `d_1`), `d a1 = b2` (a `d_2`) and weights
/// `a = (0, 0, 1)`, `b = (0, 1, 2)`.
pub fn six_dimensional_example() -> FilteredComplex {
    let one = GaussRational::from_int(1);
    let mut d = Matrix::zeros(3, 3);
    d[(1, 0)] = one.clone();
    d[(2, 1)] = one;
    let weights = BTreeMap::from([(0, vec![0, 0, 1]), (1, vec![0, 1, 2])]);
    FilteredComplex::new(weights, BTreeMap::from([(0, d)])).expect("valid filtered complex")
}
