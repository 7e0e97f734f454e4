//! Skew-symmetric lattices over arc labels, their vectors, and the exact
//! rational linear algebra behind the span conditions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::{Error, Result};

/// An element of the lattice `N`, stored sparsely by basis label.
/// Entries are never zero, so structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVec {
    coords: BTreeMap<String, i64>,
}

impl LatticeVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(label: impl Into<String>) -> Self {
        Self::from_coords([(label.into(), 1)])
    }

    pub fn from_coords<I, S>(coords: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut v = LatticeVec::zero();
        for (label, c) in coords {
            v.add_coord(&label.into(), c);
        }
        v
    }

    pub fn coord(&self, label: &str) -> i64 {
        self.coords.get(label).copied().unwrap_or(0)
    }

    pub fn coords(&self) -> impl Iterator<Item = (&str, i64)> {
        self.coords.iter().map(|(l, c)| (l.as_str(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_coord(&mut self, label: &str, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coords.entry(label.to_string()).or_insert(0);
        *entry = entry.checked_add(c).expect("lattice coordinate overflow");
        if *entry == 0 {
            self.coords.remove(label);
        }
    }

    pub fn scaled(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        let coords = self
            .coords
            .iter()
            .map(|(l, c)| {
                (
                    l.clone(),
                    c.checked_mul(k).expect("lattice coordinate overflow"),
                )
            })
            .collect();
        LatticeVec { coords }
    }

    /// Divide every coordinate by 2, if all are even.
    pub fn halved(&self) -> Option<Self> {
        if self.coords.values().any(|c| c % 2 != 0) {
            return None;
        }
        Some(LatticeVec {
            coords: self
                .coords
                .iter()
                .map(|(l, c)| (l.clone(), c / 2))
                .collect(),
        })
    }

    pub fn to_json(&self) -> BTreeMap<String, i64> {
        self.coords.clone()
    }

    pub fn from_json(m: &BTreeMap<String, i64>) -> Self {
        Self::from_coords(m.iter().map(|(l, c)| (l.clone(), *c)))
    }
}

impl Add for &LatticeVec {
    type Output = LatticeVec;
    fn add(self, rhs: &LatticeVec) -> LatticeVec {
        let mut out = self.clone();
        for (l, c) in &rhs.coords {
            out.add_coord(l, *c);
        }
        out
    }
}

impl Sub for &LatticeVec {
    type Output = LatticeVec;
    fn sub(self, rhs: &LatticeVec) -> LatticeVec {
        let mut out = self.clone();
        for (l, c) in &rhs.coords {
            out.add_coord(l, -*c);
        }
        out
    }
}

impl Neg for &LatticeVec {
    type Output = LatticeVec;
    fn neg(self) -> LatticeVec {
        self.scaled(-1)
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in &self.coords {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if mag == 1 {
                write!(f, "{}", l)?;
            } else {
                write!(f, "{}*{}", mag, l)?;
            }
        }
        Ok(())
    }
}

/// The ambient skew-symmetric lattice: an ordered basis of arc labels and
/// the antisymmetric pairing matrix. Carries enough triangulation metadata
/// (boundary arcs, self-folded arcs) to gate mutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewLattice {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    eps: Vec<Vec<i64>>,
    boundary: Vec<bool>,
    self_folded: Vec<bool>,
}

impl SkewLattice {
    pub fn new(labels: Vec<String>, eps: Vec<Vec<i64>>) -> Self {
        let n = labels.len();
        assert_eq!(eps.len(), n);
        for (i, row) in eps.iter().enumerate() {
            assert_eq!(row.len(), n);
            assert_eq!(eps[i][i], 0, "pairing must vanish on the diagonal");
            for j in 0..n {
                assert_eq!(eps[i][j], -eps[j][i], "pairing must be antisymmetric");
            }
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        SkewLattice {
            index,
            eps,
            boundary: vec![false; n],
            self_folded: vec![false; n],
            labels,
        }
    }

    pub(crate) fn with_flags(mut self, boundary: Vec<bool>, self_folded: Vec<bool>) -> Self {
        assert_eq!(boundary.len(), self.labels.len());
        assert_eq!(self_folded.len(), self.labels.len());
        self.boundary = boundary;
        self.self_folded = self_folded;
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn is_boundary(&self, label: &str) -> bool {
        self.index
            .get(label)
            .map(|&i| self.boundary[i])
            .unwrap_or(false)
    }

    pub fn is_self_folded(&self, label: &str) -> bool {
        self.index
            .get(label)
            .map(|&i| self.self_folded[i])
            .unwrap_or(false)
    }

    pub fn eps_entry(&self, i: &str, j: &str) -> Result<i64> {
        let a = *self
            .index
            .get(i)
            .ok_or_else(|| Error::UnknownArc(i.into()))?;
        let b = *self
            .index
            .get(j)
            .ok_or_else(|| Error::UnknownArc(j.into()))?;
        Ok(self.eps[a][b])
    }

    fn check_vec(&self, v: &LatticeVec) -> Result<()> {
        for (l, _) in v.coords() {
            if !self.contains(l) {
                return Err(Error::UnknownArc(l.into()));
            }
        }
        Ok(())
    }

    /// The skew pairing `<v, w> = sum v_i w_j eps_ij`.
    pub fn pair(&self, v: &LatticeVec, w: &LatticeVec) -> Result<i64> {
        self.check_vec(v)?;
        self.check_vec(w)?;
        let mut acc: i64 = 0;
        for (li, ci) in v.coords() {
            for (lj, cj) in w.coords() {
                let e = self.eps[self.index[li]][self.index[lj]];
                let term = ci
                    .checked_mul(cj)
                    .and_then(|x| x.checked_mul(e))
                    .expect("pairing overflow");
                acc = acc.checked_add(term).expect("pairing overflow");
            }
        }
        Ok(acc)
    }

    /// Mutation of the exchange data at arc `k`. Involutive; rejects
    /// boundary arcs and self-folded arcs.
    pub fn mutate(&self, k: &str) -> Result<SkewLattice> {
        let ki = *self
            .index
            .get(k)
            .ok_or_else(|| Error::UnknownArc(k.into()))?;
        if self.boundary[ki] {
            return Err(Error::UnsupportedFlip {
                arc: k.into(),
                reason: "boundary arc".into(),
            });
        }
        if self.self_folded[ki] {
            return Err(Error::UnsupportedFlip {
                arc: k.into(),
                reason: "self-folded arc".into(),
            });
        }
        let n = self.rank();
        let mut eps = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                eps[i][j] = if i == ki || j == ki {
                    -self.eps[i][j]
                } else {
                    let e_ik = self.eps[i][ki];
                    let e_kj = self.eps[ki][j];
                    self.eps[i][j] + (e_ik * e_kj.abs() + e_ik.abs() * e_kj) / 2
                };
            }
        }
        Ok(SkewLattice {
            labels: self.labels.clone(),
            index: self.index.clone(),
            eps,
            boundary: self.boundary.clone(),
            self_folded: self.self_folded.clone(),
        })
    }

    fn to_dense(&self, v: &LatticeVec) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.rank()];
        for (l, c) in v.coords() {
            out[self.index[l]] = BigRational::from(BigInt::from(c));
        }
        out
    }

    /// Rational basis of the intersection of the spans of `gens1` and
    /// `gens2`, expressed as lattice vectors cleared of denominators.
    pub fn span_intersection(
        &self,
        gens1: &[LatticeVec],
        gens2: &[LatticeVec],
    ) -> Result<Vec<Vec<BigRational>>> {
        for v in gens1.iter().chain(gens2) {
            self.check_vec(v)?;
        }
        let cols1: Vec<_> = gens1.iter().map(|v| self.to_dense(v)).collect();
        let cols2: Vec<_> = gens2.iter().map(|v| self.to_dense(v)).collect();
        if cols1.is_empty() || cols2.is_empty() {
            return Ok(vec![]);
        }
        // Solve [V | -W] x = 0; each null vector gives an intersection
        // element sum a_i v_i.
        let n = self.rank();
        let m1 = cols1.len();
        let m = m1 + cols2.len();
        let mut mat = vec![vec![BigRational::zero(); m]; n];
        for (j, col) in cols1.iter().enumerate() {
            for i in 0..n {
                mat[i][j] = col[i].clone();
            }
        }
        for (j, col) in cols2.iter().enumerate() {
            for i in 0..n {
                mat[i][m1 + j] = -col[i].clone();
            }
        }
        let null = nullspace(mat);
        let mut out = Vec::new();
        for x in null {
            let mut vec = vec![BigRational::zero(); n];
            for (j, col) in cols1.iter().enumerate() {
                for i in 0..n {
                    vec[i] += &x[j] * &col[i];
                }
            }
            if vec.iter().any(|c| !c.is_zero()) {
                out.push(vec);
            }
        }
        Ok(out)
    }

    /// SC2 of algebraic strong commutativity: every vector in the
    /// intersection of the rational spans pairs to zero with every basis
    /// vector. Computed by exact rational elimination.
    pub fn span_intersection_in_radical(
        &self,
        gens1: &[LatticeVec],
        gens2: &[LatticeVec],
    ) -> Result<bool> {
        let inter = self.span_intersection(gens1, gens2)?;
        for v in inter {
            for j in 0..self.rank() {
                let mut acc = BigRational::zero();
                for (i, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        acc += c * BigRational::from(BigInt::from(self.eps[i][j]));
                    }
                }
                if !acc.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `v` lies in the rational span of `gens`.
    pub fn in_span(&self, gens: &[LatticeVec], v: &LatticeVec) -> Result<bool> {
        self.check_vec(v)?;
        for g in gens {
            self.check_vec(g)?;
        }
        let mut cols: Vec<Vec<BigRational>> = gens.iter().map(|g| self.to_dense(g)).collect();
        let r0 = rank(cols.clone());
        cols.push(self.to_dense(v));
        Ok(rank(cols) == r0)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(mat: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return vec![];
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x /= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let t = &mat[r][j] * &f;
                    mat[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

fn rank(mut mat: Vec<Vec<BigRational>>) -> usize {
    // rank works on the transpose-free matrix directly
    rref(&mut mat).len()
}

/// Basis of the nullspace of `mat` (columns = unknowns).
fn nullspace(mut mat: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    if mat.is_empty() {
        return vec![];
    }
    let cols = mat[0].len();
    let pivots = rref(&mut mat);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::from(BigInt::from(1));
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = -mat[row][f].clone();
        }
        out.push(x);
    }
    out
}

/// Shared handle used by torus elements.
pub type LatticeRef = Arc<SkewLattice>;

pub(crate) fn same_lattice(a: &LatticeRef, b: &LatticeRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn oht() -> LatticeRef {
        catalog::get("one-holed-torus")
            .unwrap()
            .surface
            .exchange_matrix()
            .unwrap()
    }

    #[test]
    fn pairing_on_one_holed_torus() {
        let lat = oht();
        let va = LatticeVec::basis("a");
        let vb = LatticeVec::basis("b");
        assert_eq!(lat.pair(&va, &vb).unwrap(), -2);
        assert_eq!(lat.pair(&va, &va).unwrap(), 0);
        // v_1 = v_a + v_b + 2 v_d annihilates v_a and v_b
        let v1 = LatticeVec::from_coords([("a", 1), ("b", 1), ("d", 2)]);
        assert_eq!(lat.pair(&v1, &va).unwrap(), 0);
        assert_eq!(lat.pair(&v1, &vb).unwrap(), 0);
    }

    #[test]
    fn pairing_is_bilinear_and_antisymmetric() {
        let lat = oht();
        let v = LatticeVec::from_coords([("a", 2), ("c", -1)]);
        let w = LatticeVec::from_coords([("b", 1), ("d", 3)]);
        let u = LatticeVec::from_coords([("a", -1), ("b", 1)]);
        assert_eq!(lat.pair(&v, &w).unwrap(), -lat.pair(&w, &v).unwrap());
        assert_eq!(
            lat.pair(&(&v + &u), &w).unwrap(),
            lat.pair(&v, &w).unwrap() + lat.pair(&u, &w).unwrap()
        );
    }

    #[test]
    fn unknown_label_is_an_error() {
        let lat = oht();
        let v = LatticeVec::basis("zz");
        assert!(matches!(lat.pair(&v, &v), Err(Error::UnknownArc(_))));
    }

    #[test]
    fn span_intersection_in_radical_cases() {
        let lat = oht();
        // radical vector: v_gamma = 2a+2b+2c+2d is not radical here (the
        // boundary arc e pairs nontrivially), so use an actual radical test
        // via a vector paired against everything.
        let va = LatticeVec::basis("a");
        let vb = LatticeVec::basis("b");
        // independent 1-dim spans intersect trivially
        assert!(lat
            .span_intersection_in_radical(std::slice::from_ref(&va), std::slice::from_ref(&vb))
            .unwrap());
        // equal spans with nontrivial pairing fail
        assert!(!lat
            .span_intersection_in_radical(std::slice::from_ref(&va), std::slice::from_ref(&va))
            .unwrap());
    }

    #[test]
    fn radical_vector_passes_equal_span_check() {
        let lat = catalog::get("once-punctured-torus")
            .unwrap()
            .surface
            .exchange_matrix()
            .unwrap();
        let v = LatticeVec::from_coords([("1", 2), ("2", 2), ("3", 2)]);
        for l in lat.labels() {
            assert_eq!(lat.pair(&v, &LatticeVec::basis(l.clone())).unwrap(), 0);
        }
        assert!(lat
            .span_intersection_in_radical(std::slice::from_ref(&v), std::slice::from_ref(&v))
            .unwrap());
    }

    #[test]
    fn mutation_is_involutive_and_antisymmetric() {
        let lat = catalog::get("once-punctured-torus")
            .unwrap()
            .surface
            .exchange_matrix()
            .unwrap();
        let m = lat.mutate("1").unwrap();
        for i in m.labels() {
            for j in m.labels() {
                assert_eq!(m.eps_entry(i, j).unwrap(), -m.eps_entry(j, i).unwrap());
            }
        }
        // sign-flipped matrix of the same shape
        for i in lat.labels() {
            for j in lat.labels() {
                assert_eq!(m.eps_entry(i, j).unwrap(), -lat.eps_entry(i, j).unwrap());
            }
        }
        let back = m.mutate("1").unwrap();
        assert_eq!(back, *lat);
    }

    #[test]
    fn mutation_rejects_boundary() {
        let lat = oht();
        assert!(matches!(
            lat.mutate("e"),
            Err(Error::UnsupportedFlip { .. })
        ));
    }

    #[test]
    fn mutation_fixed_entries_when_decoupled() {
        let lat = oht();
        // eps_{b,e} with eps_{b,c}=-1..; pick i,j with eps_{ik}=0=eps_{kj}:
        // a and e are both decoupled from nothing in general; verify the
        // formula reduction on an explicit pair: eps_{c,e} after mutating at b
        // requires eps_{cb} and eps_{be}; eps_{be}=0, so entry is unchanged.
        let m = lat.mutate("a").unwrap();
        assert_eq!(
            m.eps_entry("c", "e").unwrap(),
            lat.eps_entry("c", "e").unwrap()
        );
    }
}
