//! Simple loops in minimal and transversal position, encoded as cyclic
//! sequences of triangle crossings. Includes reconstruction of a loop from
//! its normal coordinates (crossing counts per arc).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::LatticeVec;
use crate::surface::{Triangle, Triangulation};
use crate::{Error, Result};

/// One crossing of a triangle: the loop enters through `in_arc` and leaves
/// through `out_arc`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub triangle: usize,
    #[serde(rename = "in")]
    pub in_arc: String,
    #[serde(rename = "out")]
    pub out_arc: String,
}

/// A loop as a cyclic segment list; orientation is the list order.
/// Juncture `j` is the crossing shared by segment `j` and segment `j+1`,
/// i.e., the point on `segments[j].out_arc`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopPosition {
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Turn {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Peripheral,
    /// The 1-based index of the unique minority-turn segment.
    AlmostPeripheral(usize),
    General,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Peripheral => write!(f, "peripheral"),
            Classification::AlmostPeripheral(k) => write!(f, "almost-peripheral({})", k),
            Classification::General => write!(f, "general"),
        }
    }
}

/// The turn of an oriented segment: left iff its out-arc is the clockwise
/// successor of its in-arc in the triangle's side triple.
pub fn turn_of(t: &Triangulation, seg: &Segment) -> Result<Turn> {
    let tri = t
        .triangles
        .get(seg.triangle)
        .ok_or_else(|| Error::InvalidLoop(format!("no triangle #{}", seg.triangle)))?;
    let sides = match tri {
        Triangle::Plain { sides } => sides,
        Triangle::SelfFolded { .. } => {
            return Err(Error::SelfFoldedSegment {
                segment: seg.triangle,
            })
        }
    };
    let pos = sides.iter().position(|s| s == &seg.in_arc).ok_or_else(|| {
        Error::InvalidLoop(format!(
            "arc {} not a side of #{}",
            seg.in_arc, seg.triangle
        ))
    })?;
    let successor = &sides[(pos + 1) % 3];
    if !sides.contains(&seg.out_arc) {
        return Err(Error::InvalidLoop(format!(
            "arc {} not a side of #{}",
            seg.out_arc, seg.triangle
        )));
    }
    Ok(if successor == &seg.out_arc {
        Turn::L
    } else {
        Turn::R
    })
}

impl LoopPosition {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Arc carrying juncture `j` (0-based): the out-arc of segment `j`.
    pub fn juncture_arc(&self, j: usize) -> &str {
        &self.segments[j].out_arc
    }

    /// Check the chaining invariants against a triangulation.
    pub fn validate(&self, t: &Triangulation) -> Result<()> {
        if self.segments.len() < 2 {
            return Err(Error::InvalidLoop(
                "a loop needs at least 2 segments".into(),
            ));
        }
        let n = self.segments.len();
        for (i, seg) in self.segments.iter().enumerate() {
            let tri = t
                .triangles
                .get(seg.triangle)
                .ok_or_else(|| Error::InvalidLoop(format!("no triangle #{}", seg.triangle)))?;
            let sides: Vec<&String> = match tri {
                Triangle::Plain { sides } => sides.iter().collect(),
                Triangle::SelfFolded { .. } => return Err(Error::SelfFoldedSegment { segment: i }),
            };
            if seg.in_arc == seg.out_arc {
                return Err(Error::InvalidLoop(format!("U-turn in segment {}", i)));
            }
            for arc in [&seg.in_arc, &seg.out_arc] {
                if !sides.contains(&arc) {
                    return Err(Error::InvalidLoop(format!(
                        "segment {}: arc {} not a side of triangle #{}",
                        i, arc, seg.triangle
                    )));
                }
                if t.is_boundary(arc) {
                    return Err(Error::InvalidLoop(format!(
                        "segment {} crosses boundary arc {}",
                        i, arc
                    )));
                }
            }
            // the next segment must sit in the other triangle incident to
            // the shared arc
            let next = &self.segments[(i + 1) % n];
            if next.in_arc != seg.out_arc {
                return Err(Error::InvalidLoop(format!(
                    "segments {} and {} do not chain on a common arc",
                    i,
                    (i + 1) % n
                )));
            }
            let incident = incident_triangles(t, &seg.out_arc);
            if !incident.contains(&next.triangle) || next.triangle == seg.triangle {
                return Err(Error::InvalidLoop(format!(
                    "segment {} does not cross arc {} into the opposite triangle",
                    (i + 1) % n,
                    seg.out_arc
                )));
            }
        }
        Ok(())
    }

    pub fn turns(&self, t: &Triangulation) -> Result<Vec<Turn>> {
        self.segments.iter().map(|s| turn_of(t, s)).collect()
    }

    pub fn classify(&self, t: &Triangulation) -> Result<Classification> {
        let turns = self.turns(t)?;
        let lefts = turns.iter().filter(|x| **x == Turn::L).count();
        let rights = turns.len() - lefts;
        Ok(if lefts == 0 || rights == 0 {
            Classification::Peripheral
        } else if lefts == 1 {
            let k = turns.iter().position(|x| *x == Turn::L).unwrap();
            Classification::AlmostPeripheral(k + 1)
        } else if rights == 1 {
            let k = turns.iter().position(|x| *x == Turn::R).unwrap();
            Classification::AlmostPeripheral(k + 1)
        } else {
            Classification::General
        })
    }

    /// Crossing counts per arc.
    pub fn crossing_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for seg in &self.segments {
            *counts.entry(seg.out_arc.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// The total intersection element `v_gamma = sum int(gamma, i) v~_i`.
    pub fn total_intersection(&self, t: &Triangulation) -> LatticeVec {
        let mut out = LatticeVec::zero();
        for (arc, n) in self.crossing_counts() {
            out = &out + &t.tilde_vec(&arc).scaled(n as i64);
        }
        out
    }

    /// Same loop with reversed orientation.
    pub fn reversed(&self) -> LoopPosition {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                triangle: s.triangle,
                in_arc: s.out_arc.clone(),
                out_arc: s.in_arc.clone(),
            })
            .collect();
        LoopPosition { segments }
    }

    /// Same loop with the segment list rotated by `k`.
    pub fn rotated(&self, k: usize) -> LoopPosition {
        let n = self.segments.len();
        let segments = (0..n).map(|i| self.segments[(i + k) % n].clone()).collect();
        LoopPosition { segments }
    }
}

fn incident_triangles(t: &Triangulation, arc: &str) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, tri) in t.triangles.iter().enumerate() {
        match tri {
            Triangle::Plain { sides } => {
                if sides.iter().any(|s| s == arc) {
                    out.push(i);
                }
            }
            Triangle::SelfFolded { self_folded } => {
                if self_folded.inner == arc {
                    out.push(i);
                    out.push(i);
                } else if self_folded.outer == arc {
                    out.push(i);
                }
            }
        }
    }
    out
}

/// Reconstruct the unique normal multicurve with the given crossing counts
/// and return it as a single loop. Fails if the counts are unrealizable,
/// touch a self-folded triangle, or produce more than one component.
///
/// Inside each plain triangle with side counts (m0, m1, m2) the curve is a
/// nested family of corner arcs, `(m_i + m_j - m_k)/2` of them at each
/// corner; endpoints on a shared arc are glued in mirrored order, which is
/// forced by the surface orientation.
pub fn from_normal_coords(
    t: &Triangulation,
    counts: &BTreeMap<String, usize>,
) -> Result<LoopPosition> {
    t.validated()?;
    for arc in counts.keys() {
        if !t.arcs.contains(arc) {
            return Err(Error::UnknownArc(arc.clone()));
        }
    }
    let m = |arc: &str| counts.get(arc).copied().unwrap_or(0);
    for (i, tri) in t.triangles.iter().enumerate() {
        if let Triangle::SelfFolded { self_folded } = tri {
            if m(&self_folded.inner) > 0 || m(&self_folded.outer) > 0 {
                return Err(Error::SelfFoldedSegment { segment: i });
            }
        }
    }
    for b in &t.boundary_arcs {
        if m(b) > 0 {
            return Err(Error::InvalidLoop(format!(
                "nonzero count on boundary arc {}",
                b
            )));
        }
    }

    // endpoint table: (triangle, slot, local point index 1..=m) -> node id
    // local indices run along the triangle's clockwise boundary traversal.
    let mut slot_of_arc: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for (ti, tri) in t.triangles.iter().enumerate() {
        if let Triangle::Plain { sides } = tri {
            for (si, s) in sides.iter().enumerate() {
                slot_of_arc.entry(s.as_str()).or_default().push((ti, si));
            }
        }
    }
    let mut node_ids: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut next_id = 0usize;
    let mut node_arc: Vec<String> = Vec::new();
    for arc in &t.arcs {
        let k = m(arc);
        if k == 0 {
            continue;
        }
        let slots = &slot_of_arc[arc.as_str()];
        if slots.len() != 2 {
            return Err(Error::InvalidLoop(format!(
                "arc {} crossed but not between two plain triangles",
                arc
            )));
        }
        let (t1, s1) = slots[0];
        let (t2, s2) = slots[1];
        for p in 1..=k {
            let id = next_id;
            next_id += 1;
            node_arc.push(arc.clone());
            node_ids.insert((t1, s1, p), id);
            // mirrored gluing across the arc
            node_ids.insert((t2, s2, k + 1 - p), id);
        }
    }

    // corner arcs, nested from each corner
    let mut edges: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new(); // node -> (other node, triangle)
    for (ti, tri) in t.triangles.iter().enumerate() {
        let Triangle::Plain { sides } = tri else {
            continue;
        };
        let ms = [m(&sides[0]), m(&sides[1]), m(&sides[2])];
        for c in 0..3 {
            let a = ms[c] as i64;
            let b = ms[(c + 1) % 3] as i64;
            let opp = ms[(c + 2) % 3] as i64;
            let n = a + b - opp;
            if n < 0 || n % 2 != 0 {
                return Err(Error::InvalidLoop(format!(
                    "unrealizable crossing counts in triangle #{}",
                    ti
                )));
            }
            let n = (n / 2) as usize;
            for r in 1..=n {
                // r-th arc out from the corner between slots c and c+1
                let p = ms[c] - r + 1;
                let q = r;
                let u = node_ids[&(ti, c, p)];
                let v = node_ids[&(ti, (c + 1) % 3, q)];
                edges.entry(u).or_default().push((v, ti));
                edges.entry(v).or_default().push((u, ti));
            }
        }
    }
    for (node, es) in &edges {
        if es.len() != 2 {
            return Err(Error::InvalidLoop(format!(
                "point on arc {} has {} corner arcs",
                node_arc[*node],
                es.len()
            )));
        }
    }
    if next_id == 0 {
        return Err(Error::InvalidLoop("empty normal coordinates".into()));
    }

    // trace the cycle starting from node 0; every node has degree 2, so
    // the walk closes up when it returns to the start
    let mut segments = Vec::new();
    let start = 0usize;
    let mut prev = start;
    let (mut cur, mut tri) = edges[&start][0];
    loop {
        segments.push(Segment {
            triangle: tri,
            in_arc: node_arc[prev].clone(),
            out_arc: node_arc[cur].clone(),
        });
        if cur == start {
            break;
        }
        let es = &edges[&cur];
        let (next, ntri) = if es[0] == (prev, tri) { es[1] } else { es[0] };
        prev = cur;
        cur = next;
        tri = ntri;
    }
    if segments.len() != next_id {
        return Err(Error::InvalidLoop(
            "normal coordinates describe a disconnected multicurve".into(),
        ));
    }
    let looppos = LoopPosition { segments };
    looppos.validate(t)?;
    Ok(looppos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn one_holed_torus_gamma_turns() {
        let e = catalog::get("one-holed-torus").unwrap();
        let gamma = &e.loops["gamma"];
        let turns = gamma.turns(&e.surface).unwrap();
        assert_eq!(turns.len(), 8);
        assert_eq!(turns[0], Turn::L);
        assert!(turns[1..].iter().all(|t| *t == Turn::R));
        // segment 1 runs d -> c, segment 3 runs a -> b
        assert_eq!(gamma.segments[0].in_arc, "d");
        assert_eq!(gamma.segments[0].out_arc, "c");
        assert_eq!(gamma.segments[2].in_arc, "a");
        assert_eq!(gamma.segments[2].out_arc, "b");
        assert_eq!(turn_of(&e.surface, &gamma.segments[2]).unwrap(), Turn::R);
    }

    #[test]
    fn classify_catalog_loops() {
        let e = catalog::get("one-holed-torus").unwrap();
        assert_eq!(
            e.loops["gamma"].classify(&e.surface).unwrap(),
            Classification::AlmostPeripheral(1)
        );
        let p = catalog::get("once-punctured-torus").unwrap();
        assert_eq!(
            p.loops["peripheral"].classify(&p.surface).unwrap(),
            Classification::Peripheral
        );
        let g2 = catalog::get("one-holed-genus-2").unwrap();
        assert_eq!(
            g2.loops["gamma"].classify(&g2.surface).unwrap(),
            Classification::AlmostPeripheral(2)
        );
        assert_eq!(g2.loops["gamma"].len(), 12 * 2 - 4);
    }

    #[test]
    fn total_intersection_elements() {
        let e = catalog::get("one-holed-torus").unwrap();
        assert_eq!(
            e.loops["gamma"].total_intersection(&e.surface),
            LatticeVec::from_coords([("a", 2), ("b", 2), ("c", 2), ("d", 2)])
        );
        assert_eq!(
            e.loops["eta"].total_intersection(&e.surface),
            LatticeVec::from_coords([("a", 1), ("b", 1)])
        );
        // genus-g hole surrounding loop crosses every internal arc twice
        for g in [2usize, 3] {
            let e = catalog::get(&format!("one-holed-genus-{}", g)).unwrap();
            let v = e.loops["gamma"].total_intersection(&e.surface);
            for arc in &e.surface.arcs {
                let want = if e.surface.is_boundary(arc) { 0 } else { 2 };
                assert_eq!(v.coord(arc), want, "g={} arc={}", g, arc);
            }
        }
    }

    #[test]
    fn validation_catches_broken_chains() {
        let e = catalog::get("one-holed-torus").unwrap();
        let mut bad = e.loops["gamma"].clone();
        bad.segments[3].in_arc = "d".into();
        assert!(bad.validate(&e.surface).is_err());
        let mut uturn = e.loops["eta"].clone();
        uturn.segments[0].out_arc = uturn.segments[0].in_arc.clone();
        assert!(uturn.validate(&e.surface).is_err());
    }

    #[test]
    fn reversal_and_rotation_keep_invariants() {
        let e = catalog::get("one-holed-torus").unwrap();
        let gamma = &e.loops["gamma"];
        let rev = gamma.reversed();
        rev.validate(&e.surface).unwrap();
        assert_eq!(
            rev.total_intersection(&e.surface),
            gamma.total_intersection(&e.surface)
        );
        let rot = gamma.rotated(3);
        rot.validate(&e.surface).unwrap();
        assert_eq!(
            rot.total_intersection(&e.surface),
            gamma.total_intersection(&e.surface)
        );
    }

    #[test]
    fn normal_coordinates_rebuild_gamma() {
        let e = catalog::get("one-holed-torus").unwrap();
        let counts: BTreeMap<String, usize> = [("a", 2), ("b", 2), ("c", 2), ("d", 2)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let rebuilt = from_normal_coords(&e.surface, &counts).unwrap();
        assert_eq!(rebuilt.len(), 8);
        assert_eq!(rebuilt.crossing_counts(), counts);
    }

    #[test]
    fn disconnected_normal_coordinates_are_rejected() {
        // two disjoint sigma-like curves in genus 2: a1,b1 and a2,b2
        let e = catalog::get("one-holed-genus-2").unwrap();
        let counts: BTreeMap<String, usize> = [("a1", 1), ("b1", 1), ("a2", 1), ("b2", 1)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        assert!(from_normal_coords(&e.surface, &counts).is_err());
    }
}
