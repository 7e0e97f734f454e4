//! Combinatorial ideal triangulations of marked surfaces: validation, the
//! exchange matrix with its self-folded resolution map, balancedness of
//! lattice vectors, and puncture valence vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lattice::{LatticeRef, LatticeVec, SkewLattice};
use crate::{Error, Result};

/// One triangle of an ideal triangulation. Sides of a plain triangle are
/// listed in clockwise order; a self-folded triangle is stored by its inner
/// (self-folded) arc and outer arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Triangle {
    Plain { sides: [String; 3] },
    SelfFolded { self_folded: SelfFolded },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfFolded {
    pub inner: String,
    pub outer: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub arcs: Vec<String>,
    #[serde(default)]
    pub boundary_arcs: Vec<String>,
    pub triangles: Vec<Triangle>,
    /// Per-puncture valence data: puncture -> (arc -> valence in {0,1,2}).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub punctures: BTreeMap<String, BTreeMap<String, u8>>,
}

/// A structured validation finding; `validate` reports all of them instead
/// of failing on the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub subject: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    UnknownArc,
    DuplicateArc,
    ArcOverIncident,
    ArcUnderIncident,
    BoundaryArcWrongIncidence,
    SelfFoldedInnerOnBoundary,
    DegenerateTriangle,
    BadValence,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.kind, self.subject)
    }
}

impl Triangulation {
    pub fn is_boundary(&self, arc: &str) -> bool {
        self.boundary_arcs.iter().any(|b| b == arc)
    }

    /// The self-folded resolution map: inner arcs map to their outer arc,
    /// every other arc to itself.
    pub fn pi(&self, arc: &str) -> String {
        for t in &self.triangles {
            if let Triangle::SelfFolded { self_folded } = t {
                if self_folded.inner == arc {
                    return self_folded.outer.clone();
                }
            }
        }
        arc.to_string()
    }

    pub fn is_self_folded_arc(&self, arc: &str) -> bool {
        self.pi(arc) != arc
    }

    /// `v~_i`: the state-sum weight vector of an arc, `v_i - v_{pi(i)}` for
    /// a self-folded arc and `v_i` otherwise.
    pub fn tilde_vec(&self, arc: &str) -> LatticeVec {
        let p = self.pi(arc);
        if p == arc {
            LatticeVec::basis(arc)
        } else {
            &LatticeVec::basis(arc) - &LatticeVec::basis(p)
        }
    }

    /// Number of triangle-slot incidences of each arc. A self-folded
    /// triangle contributes two incidences to its inner arc and one to its
    /// outer arc.
    fn incidences(&self) -> BTreeMap<&str, usize> {
        let mut inc: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &self.triangles {
            match t {
                Triangle::Plain { sides } => {
                    for s in sides {
                        *inc.entry(s.as_str()).or_insert(0) += 1;
                    }
                }
                Triangle::SelfFolded { self_folded } => {
                    *inc.entry(self_folded.inner.as_str()).or_insert(0) += 2;
                    *inc.entry(self_folded.outer.as_str()).or_insert(0) += 1;
                }
            }
        }
        inc
    }

    /// Check the incidence invariants, reporting every violation.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = BTreeMap::new();
        for a in &self.arcs {
            if seen.insert(a.clone(), ()).is_some() {
                out.push(Diagnostic {
                    kind: DiagnosticKind::DuplicateArc,
                    subject: a.clone(),
                });
            }
        }
        for b in &self.boundary_arcs {
            if !self.arcs.contains(b) {
                out.push(Diagnostic {
                    kind: DiagnosticKind::UnknownArc,
                    subject: b.clone(),
                });
            }
        }
        for t in &self.triangles {
            match t {
                Triangle::Plain { sides } => {
                    for s in sides {
                        if !self.arcs.contains(s) {
                            out.push(Diagnostic {
                                kind: DiagnosticKind::UnknownArc,
                                subject: s.clone(),
                            });
                        }
                    }
                    if sides[0] == sides[1] || sides[1] == sides[2] || sides[0] == sides[2] {
                        out.push(Diagnostic {
                            kind: DiagnosticKind::DegenerateTriangle,
                            subject: format!("{},{},{}", sides[0], sides[1], sides[2]),
                        });
                    }
                }
                Triangle::SelfFolded { self_folded } => {
                    for s in [&self_folded.inner, &self_folded.outer] {
                        if !self.arcs.contains(s) {
                            out.push(Diagnostic {
                                kind: DiagnosticKind::UnknownArc,
                                subject: s.clone(),
                            });
                        }
                    }
                    if self.is_boundary(&self_folded.inner) {
                        out.push(Diagnostic {
                            kind: DiagnosticKind::SelfFoldedInnerOnBoundary,
                            subject: self_folded.inner.clone(),
                        });
                    }
                }
            }
        }
        let inc = self.incidences();
        for a in &self.arcs {
            let n = inc.get(a.as_str()).copied().unwrap_or(0);
            let want = if self.is_boundary(a) { 1 } else { 2 };
            if n > want {
                out.push(Diagnostic {
                    kind: if self.is_boundary(a) {
                        DiagnosticKind::BoundaryArcWrongIncidence
                    } else {
                        DiagnosticKind::ArcOverIncident
                    },
                    subject: a.clone(),
                });
            } else if n < want {
                out.push(Diagnostic {
                    kind: if self.is_boundary(a) {
                        DiagnosticKind::BoundaryArcWrongIncidence
                    } else {
                        DiagnosticKind::ArcUnderIncident
                    },
                    subject: a.clone(),
                });
            }
        }
        for (p, vals) in &self.punctures {
            for (arc, v) in vals {
                if !self.arcs.contains(arc) || *v > 2 {
                    out.push(Diagnostic {
                        kind: DiagnosticKind::BadValence,
                        subject: format!("{}:{}", p, arc),
                    });
                }
            }
        }
        out
    }

    pub fn validated(&self) -> Result<()> {
        let ds = self.validate();
        if ds.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSurface(ds))
        }
    }

    /// The exchange matrix as a skew lattice over all arcs (boundary arcs
    /// included), with self-folded arcs resolved through the pi map.
    pub fn exchange_matrix(&self) -> Result<LatticeRef> {
        self.validated()?;
        let labels = self.arcs.clone();
        let n = labels.len();
        let idx: BTreeMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        // a_ij counts clockwise adjacencies in plain triangles
        let mut a = vec![vec![0i64; n]; n];
        for t in &self.triangles {
            if let Triangle::Plain { sides } = t {
                for r in 0..3 {
                    let i = idx[sides[r].as_str()];
                    let j = idx[sides[(r + 1) % 3].as_str()];
                    a[i][j] += 1;
                }
            }
        }
        let pi_idx: Vec<usize> = labels.iter().map(|l| idx[self.pi(l).as_str()]).collect();
        let mut eps = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                eps[i][j] = a[pi_idx[i]][pi_idx[j]] - a[pi_idx[j]][pi_idx[i]];
            }
        }
        let boundary = labels.iter().map(|l| self.is_boundary(l)).collect();
        let self_folded = labels.iter().map(|l| self.is_self_folded_arc(l)).collect();
        Ok(Arc::new(
            SkewLattice::new(labels, eps).with_flags(boundary, self_folded),
        ))
    }

    /// Balancedness of a lattice vector: for every triangle the coordinate
    /// sum over its sides is even, a self-folded side counting twice.
    pub fn is_balanced(&self, v: &LatticeVec) -> bool {
        for t in &self.triangles {
            let sum: i64 = match t {
                Triangle::Plain { sides } => sides.iter().map(|s| v.coord(s)).sum(),
                Triangle::SelfFolded { self_folded } => {
                    2 * v.coord(&self_folded.inner) + v.coord(&self_folded.outer)
                }
            };
            if sum % 2 != 0 {
                return false;
            }
        }
        true
    }

    /// The puncture valence vector `sum_i theta^i_p v~_i`.
    pub fn puncture_vector(&self, puncture: &str) -> Result<LatticeVec> {
        let vals = self.punctures.get(puncture).ok_or_else(|| {
            Error::InvalidLoop(format!("no valence data for puncture `{}`", puncture))
        })?;
        let mut out = LatticeVec::zero();
        for (arc, theta) in vals {
            out = &out + &self.tilde_vec(arc).scaled(*theta as i64);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_one_holed_torus_validates() {
        let t = catalog::get("one-holed-torus").unwrap().surface;
        assert!(t.validate().is_empty());
    }

    #[test]
    fn over_incident_arc_is_diagnosed() {
        let mut t = catalog::get("one-holed-torus").unwrap().surface;
        // duplicate a triangle: its sides now have too many incidences
        t.triangles.push(t.triangles[0].clone());
        let ds = t.validate();
        assert!(ds.iter().any(|d| d.kind == DiagnosticKind::ArcOverIncident));
    }

    #[test]
    fn boundary_arc_with_two_incidences_is_diagnosed() {
        let mut t = catalog::get("one-holed-torus").unwrap().surface;
        t.triangles.push(Triangle::Plain {
            sides: ["e".into(), "a".into(), "b".into()],
        });
        let ds = t.validate();
        assert!(ds
            .iter()
            .any(|d| d.kind == DiagnosticKind::BoundaryArcWrongIncidence && d.subject == "e"));
    }

    #[test]
    fn exchange_matrix_one_holed_torus() {
        let lat = catalog::get("one-holed-torus")
            .unwrap()
            .surface
            .exchange_matrix()
            .unwrap();
        let pairs = [
            ("a", "b", -2),
            ("a", "c", 1),
            ("a", "d", 1),
            ("b", "c", -1),
            ("b", "d", -1),
            ("c", "d", -1),
        ];
        for (i, j, e) in pairs {
            assert_eq!(lat.eps_entry(i, j).unwrap(), e, "eps[{},{}]", i, j);
            assert_eq!(lat.eps_entry(j, i).unwrap(), -e);
        }
    }

    #[test]
    fn exchange_matrix_genus_2_first_handle_row() {
        let lat = catalog::get("one-holed-genus-2")
            .unwrap()
            .surface
            .exchange_matrix()
            .unwrap();
        assert_eq!(lat.eps_entry("a1", "b1").unwrap(), -2);
        assert_eq!(lat.eps_entry("a1", "c1").unwrap(), 1);
        assert_eq!(lat.eps_entry("a1", "d1").unwrap(), 1);
        for l in lat.labels() {
            if l != "b1" && l != "c1" && l != "d1" && l != "a1" {
                assert_eq!(lat.eps_entry("a1", l).unwrap(), 0, "eps[a1,{}]", l);
            }
        }
    }

    /// The full exchange matrix of the genus-g surface, pinned row by row
    /// on g = 5 where every row shape occurs (middle hulls and middle fan
    /// arcs included). Entries not listed must vanish among internal arcs;
    /// the only boundary pairings sit on the hole triangle.
    #[test]
    fn exchange_matrix_genus_5_all_rows() {
        let g = 5usize;
        let t = catalog::get("one-holed-genus-5").unwrap().surface;
        let lat = t.exchange_matrix().unwrap();
        let mut expected: BTreeMap<(String, String), i64> = BTreeMap::new();
        let mut pin = |i: String, j: String, e: i64| {
            expected.insert((i.clone(), j.clone()), e);
            expected.insert((j, i), -e);
        };
        // the last fan position coincides with the last hull
        let fan = |j: usize| if j == g { format!("e{}", g) } else { format!("f{}", j) };
        for j in 1..=g {
            let (a, b, c, d) = (
                format!("a{}", j),
                format!("b{}", j),
                format!("c{}", j),
                format!("d{}", j),
            );
            pin(a.clone(), b.clone(), -2);
            pin(a.clone(), c.clone(), 1);
            pin(a.clone(), d.clone(), 1);
            pin(b.clone(), c.clone(), -1);
            pin(b.clone(), d.clone(), -1);
            if j == 1 {
                pin(c.clone(), "c1p".into(), -1);
                pin(c.clone(), "e".into(), 1);
                pin(d.clone(), "c1p".into(), 1);
                pin(d.clone(), fan(2), -1);
            } else {
                pin(c.clone(), d.clone(), -1);
                pin(c.clone(), format!("e{}", j), 1);
                pin(d.clone(), format!("e{}", j), -1);
            }
        }
        for j in 2..=g - 1 {
            pin(format!("e{}", j), fan(j), 1);
            pin(format!("e{}", j), fan(j + 1), -1);
        }
        pin("f2".into(), "c1p".into(), -1);
        pin("f2".into(), "f3".into(), 1);
        for j in 3..=g - 1 {
            pin(fan(j), fan(j + 1), 1);
        }
        pin("c1p".into(), "e".into(), -1);
        for i in lat.labels() {
            for j in lat.labels() {
                let want = expected.get(&(i.clone(), j.clone())).copied().unwrap_or(0);
                assert_eq!(lat.eps_entry(i, j).unwrap(), want, "eps[{},{}]", i, j);
            }
        }
    }

    #[test]
    fn exchange_matrix_entries_are_small() {
        for name in catalog::list() {
            let lat = catalog::get(&name)
                .unwrap()
                .surface
                .exchange_matrix()
                .unwrap();
            for i in lat.labels() {
                for j in lat.labels() {
                    let e = lat.eps_entry(i, j).unwrap();
                    assert!((-2..=2).contains(&e), "{}: eps[{},{}]={}", name, i, j, e);
                    assert_eq!(e, -lat.eps_entry(j, i).unwrap());
                }
            }
        }
    }

    /// One self-folded triangle glued to one ordinary triangle: entries go
    /// through the pi map, and eps_{i,pi(i)} = 0.
    #[test]
    fn exchange_matrix_self_folded_piece() {
        let t = Triangulation {
            arcs: vec!["i".into(), "j".into(), "k".into(), "l".into()],
            boundary_arcs: vec!["k".into(), "l".into()],
            triangles: vec![
                Triangle::SelfFolded {
                    self_folded: SelfFolded {
                        inner: "i".into(),
                        outer: "j".into(),
                    },
                },
                Triangle::Plain {
                    sides: ["j".into(), "k".into(), "l".into()],
                },
            ],
            punctures: BTreeMap::new(),
        };
        assert!(t.validate().is_empty());
        let lat = t.exchange_matrix().unwrap();
        assert_eq!(lat.eps_entry("i", "j").unwrap(), 0);
        // i inherits the pairings of pi(i) = j
        assert_eq!(lat.eps_entry("i", "k").unwrap(), 1);
        assert_eq!(lat.eps_entry("j", "k").unwrap(), 1);
        assert_eq!(lat.eps_entry("k", "l").unwrap(), 1);
        assert_eq!(lat.eps_entry("i", "l").unwrap(), -1);
        assert!(lat.is_self_folded("i"));
        assert!(matches!(
            lat.mutate("i"),
            Err(Error::UnsupportedFlip { .. })
        ));
    }

    #[test]
    fn balancedness() {
        let t = catalog::get("one-holed-torus").unwrap().surface;
        assert!(t.is_balanced(&LatticeVec::from_coords([("a", 2)])));
        assert!(!t.is_balanced(&LatticeVec::basis("a")));
        // balanced vectors form a subgroup
        let u = LatticeVec::from_coords([("a", 1), ("b", 1)]);
        let w = LatticeVec::from_coords([("c", 1), ("d", 1), ("a", 1), ("b", 1)]);
        if t.is_balanced(&u) && t.is_balanced(&w) {
            assert!(t.is_balanced(&(&u + &w)));
        }
    }

    #[test]
    fn puncture_vector_once_punctured_torus() {
        let t = catalog::get("once-punctured-torus").unwrap().surface;
        let v = t.puncture_vector("p").unwrap();
        assert_eq!(v, LatticeVec::from_coords([("1", 2), ("2", 2), ("3", 2)]));
        let lat = t.exchange_matrix().unwrap();
        for l in lat.labels() {
            assert_eq!(lat.pair(&v, &LatticeVec::basis(l.clone())).unwrap(), 0);
        }
    }

    #[test]
    fn puncture_vectors_lie_in_radical_across_catalog() {
        for name in catalog::list() {
            let t = catalog::get(&name).unwrap().surface;
            let lat = t.exchange_matrix().unwrap();
            for p in t.punctures.keys() {
                let v = t.puncture_vector(p).unwrap();
                for l in lat.labels() {
                    assert_eq!(
                        lat.pair(&v, &LatticeVec::basis(l.clone())).unwrap(),
                        0,
                        "{}: puncture {} not radical at {}",
                        name,
                        p,
                        l
                    );
                }
            }
        }
    }
}
