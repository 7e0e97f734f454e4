//! Built-in surfaces, triangulations, and loops used by the verification
//! suite, encoded as data. The triangle lists and their clockwise side
//! orders are pinned by the exchange-matrix values the constructions must
//! reproduce; loops are rebuilt from their normal coordinates (crossing
//! counts per arc), which determine them uniquely.

use std::collections::BTreeMap;

use crate::lattice::LatticeVec;
use crate::loops::{self, LoopPosition, Turn};
use crate::surface::{Triangle, Triangulation};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub surface: Triangulation,
    pub loops: BTreeMap<String, LoopPosition>,
    pub expected: Option<Expected>,
    pub flip: Option<FlipPartner>,
}

/// A single flip relating this entry to another catalog entry carrying the
/// same loops in repositioned form.
#[derive(Debug, Clone)]
pub struct FlipPartner {
    pub arc: String,
    pub partner: String,
}

/// Expected results recorded with an entry: state-sum term counts and the
/// recorded Teschner witnesses.
#[derive(Debug, Clone, Default)]
pub struct Expected {
    pub term_counts: BTreeMap<String, usize>,
    pub triples: Vec<ExpectedTriple>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleKind {
    Strong,
    Weak,
}

#[derive(Debug, Clone)]
pub struct ExpectedTriple {
    pub kind: TripleKind,
    /// Loop names (gamma, gamma_1, gamma_2).
    pub loops: [String; 3],
    pub v1: LatticeVec,
    pub v2: LatticeVec,
    pub pairing: i64,
    /// For a weak triple: the strong triple certifying TR5.
    pub tr5: Option<Box<ExpectedTriple>>,
}

/// Deterministic list of the named entries.
pub fn list() -> Vec<String> {
    let mut names = vec![
        "one-holed-torus".to_string(),
        "once-punctured-torus".to_string(),
        "once-punctured-torus-flipped".to_string(),
    ];
    for g in 2..=6 {
        names.push(format!("one-holed-genus-{}", g));
    }
    for g in 2..=3 {
        names.push(format!("once-punctured-genus-{}", g));
    }
    for i in 2..=3 {
        names.push(format!("delta-prime-g3-i{}", i));
    }
    names.sort();
    names
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    if name == "one-holed-torus" {
        return one_holed_torus();
    }
    if name == "once-punctured-torus" {
        return once_punctured_torus(false);
    }
    if name == "once-punctured-torus-flipped" {
        return once_punctured_torus(true);
    }
    if let Some(g) = parse_suffix(name, "one-holed-genus-") {
        if (2..=6).contains(&g) {
            return one_holed_genus(g, false);
        }
    }
    if let Some(g) = parse_suffix(name, "once-punctured-genus-") {
        if (2..=6).contains(&g) {
            return one_holed_genus(g, true);
        }
    }
    if let Some((g, i)) = parse_delta_prime(name) {
        if (2..=6).contains(&g) && i >= 2 && i <= g {
            return delta_prime(g, i);
        }
    }
    Err(Error::UnknownCatalogEntry(name.to_string()))
}

fn parse_suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

fn parse_delta_prime(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix("delta-prime-g")?;
    let (g, i) = rest.split_once("-i")?;
    Some((g.parse().ok()?, i.parse().ok()?))
}

fn plain(a: &str, b: &str, c: &str) -> Triangle {
    Triangle::Plain {
        sides: [a.to_string(), b.to_string(), c.to_string()],
    }
}

fn counts(entries: &[(&str, usize)]) -> BTreeMap<String, usize> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Rebuild a loop from normal coordinates and rotate/orient it so that its
/// unique minority turn (when there is one) lands at `minority_at`
/// (0-based). Loops with constant turns are returned as reconstructed.
fn build_loop(
    t: &Triangulation,
    coords: &BTreeMap<String, usize>,
    minority_at: usize,
) -> Result<LoopPosition> {
    let mut lp = loops::from_normal_coords(t, coords)?;
    let turns = lp.turns(t)?;
    let lefts = turns.iter().filter(|x| **x == Turn::L).count();
    let rights = turns.len() - lefts;
    if lefts == 0 || rights == 0 {
        return Ok(lp);
    }
    if lefts > rights {
        lp = lp.reversed();
    }
    let turns = lp.turns(t)?;
    let lefts = turns.iter().filter(|x| **x == Turn::L).count();
    let minority = if lefts <= turns.len() - lefts {
        Turn::L
    } else {
        Turn::R
    };
    let pos = turns.iter().position(|x| *x == minority).unwrap();
    let n = turns.len();
    Ok(lp.rotated((pos + n - (minority_at % n)) % n))
}

fn one_holed_torus() -> Result<CatalogEntry> {
    let surface = Triangulation {
        arcs: ["a", "b", "c", "d", "e"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        boundary_arcs: vec!["e".to_string()],
        triangles: vec![
            plain("b", "a", "c"),
            plain("b", "a", "d"),
            plain("d", "c", "e"),
        ],
        punctures: BTreeMap::new(),
    };
    let mut loops_map = BTreeMap::new();
    loops_map.insert(
        "gamma".to_string(),
        build_loop(
            &surface,
            &counts(&[("a", 2), ("b", 2), ("c", 2), ("d", 2)]),
            0,
        )?,
    );
    loops_map.insert(
        "eta".to_string(),
        build_loop(&surface, &counts(&[("a", 1), ("b", 1)]), 0)?,
    );
    let expected = Expected {
        term_counts: [("gamma".to_string(), 9), ("eta".to_string(), 3)].into(),
        triples: vec![ExpectedTriple {
            kind: TripleKind::Strong,
            loops: ["gamma".into(), "eta".into(), "eta".into()],
            v1: LatticeVec::from_coords([("a", 1), ("b", 1), ("d", 2)]),
            v2: LatticeVec::from_coords([("a", -1), ("b", -1), ("c", -2)]),
            pairing: -4,
            tr5: None,
        }],
    };
    Ok(CatalogEntry {
        name: "one-holed-torus".into(),
        surface,
        loops: loops_map,
        expected: Some(expected),
        flip: None,
    })
}

fn once_punctured_torus(flipped: bool) -> Result<CatalogEntry> {
    let tri = if flipped {
        vec![plain("1", "3", "2"), plain("1", "3", "2")]
    } else {
        vec![plain("1", "2", "3"), plain("1", "2", "3")]
    };
    let surface = Triangulation {
        arcs: ["1", "2", "3"].iter().map(|s| s.to_string()).collect(),
        boundary_arcs: vec![],
        triangles: tri,
        punctures: [(
            "p".to_string(),
            [("1", 2u8), ("2", 2), ("3", 2)]
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        )]
        .into(),
    };
    let mut loops_map = BTreeMap::new();
    loops_map.insert(
        "peripheral".to_string(),
        loops::from_normal_coords(&surface, &counts(&[("1", 2), ("2", 2), ("3", 2)]))?,
    );
    loops_map.insert(
        "nonsep".to_string(),
        build_loop(&surface, &counts(&[("2", 1), ("3", 1)]), 0)?,
    );
    let (name, flip) = if flipped {
        ("once-punctured-torus-flipped", None)
    } else {
        (
            "once-punctured-torus",
            Some(FlipPartner {
                arc: "3".to_string(),
                partner: "once-punctured-torus-flipped".to_string(),
            }),
        )
    };
    let expected = Expected {
        term_counts: [("peripheral".to_string(), 2), ("nonsep".to_string(), 3)].into(),
        triples: vec![],
    };
    Ok(CatalogEntry {
        name: name.into(),
        surface,
        loops: loops_map,
        expected: Some(expected),
        flip,
    })
}

/// The genus-g one-holed surface (and its once-punctured variant obtained
/// by deleting the hole and the doubled arc `c1p`): one triangle pair per
/// handle, a hull triangle per handle beyond the first, and a central fan.
fn one_holed_genus(g: usize, punctured: bool) -> Result<CatalogEntry> {
    assert!(g >= 2);
    // position arc between hull j and hull j+1 in the central fan
    let fan = |j: usize| -> String {
        if j == g {
            format!("e{}", g)
        } else {
            format!("f{}", j)
        }
    };
    let mut arcs: Vec<String> = Vec::new();
    for j in 1..=g {
        for p in ["a", "b", "c", "d"] {
            arcs.push(format!("{}{}", p, j));
        }
    }
    if !punctured {
        arcs.push("c1p".to_string());
    }
    for j in 2..=g {
        arcs.push(format!("e{}", j));
    }
    for j in 2..=g.saturating_sub(1) {
        arcs.push(format!("f{}", j));
    }
    let mut boundary_arcs = Vec::new();
    if !punctured {
        arcs.push("e".to_string());
        boundary_arcs.push("e".to_string());
    }

    let mut triangles = Vec::new();
    for j in 1..=g {
        triangles.push(plain(
            &format!("c{}", j),
            &format!("b{}", j),
            &format!("a{}", j),
        ));
        triangles.push(plain(
            &format!("d{}", j),
            &format!("b{}", j),
            &format!("a{}", j),
        ));
    }
    for j in 2..=g {
        triangles.push(plain(
            &format!("e{}", j),
            &format!("d{}", j),
            &format!("c{}", j),
        ));
    }
    let c1_central = if punctured { "c1" } else { "c1p" };
    if !punctured {
        triangles.push(plain("c1p", "c1", "e"));
    }
    triangles.push(plain(&fan(2), "d1", c1_central));
    for j in 2..=g - 1 {
        triangles.push(plain(&fan(j + 1), &format!("e{}", j), &fan(j)));
    }

    let punctures = if punctured {
        [(
            "p".to_string(),
            arcs.iter()
                .map(|a| (a.clone(), 2u8))
                .collect::<BTreeMap<_, _>>(),
        )]
        .into()
    } else {
        BTreeMap::new()
    };
    let surface = Triangulation {
        arcs,
        boundary_arcs,
        triangles,
        punctures,
    };

    let mut loops_map = BTreeMap::new();
    if !punctured {
        let gamma_counts: BTreeMap<String, usize> = surface
            .arcs
            .iter()
            .filter(|a| !surface.is_boundary(a))
            .map(|a| (a.clone(), 2))
            .collect();
        // the catalog labelling puts the unique left turn second
        loops_map.insert("gamma".to_string(), build_loop(&surface, &gamma_counts, 1)?);
    } else {
        let peripheral_counts: BTreeMap<String, usize> =
            surface.arcs.iter().map(|a| (a.clone(), 2)).collect();
        loops_map.insert(
            "peripheral".to_string(),
            loops::from_normal_coords(&surface, &peripheral_counts)?,
        );
    }
    let mut eta_counts: BTreeMap<String, usize> = BTreeMap::new();
    eta_counts.insert("a1".into(), 1);
    eta_counts.insert("b1".into(), 1);
    eta_counts.insert("d1".into(), 2);
    for j in 2..=g {
        for p in ["a", "b", "c", "d"] {
            eta_counts.insert(format!("{}{}", p, j), 2);
        }
        eta_counts.insert(format!("e{}", j), 2);
    }
    for j in 2..=g.saturating_sub(1) {
        eta_counts.insert(format!("f{}", j), 2);
    }
    loops_map.insert("eta".to_string(), build_loop(&surface, &eta_counts, 0)?);
    loops_map.insert(
        "sigma".to_string(),
        build_loop(&surface, &counts(&[("a1", 1), ("b1", 1)]), 0)?,
    );
    let mut zeta_counts: BTreeMap<String, usize> = BTreeMap::new();
    for j in 2..=g {
        for p in ["a", "b", "c", "d"] {
            zeta_counts.insert(format!("{}{}", p, j), 2);
        }
        if g >= 3 {
            zeta_counts.insert(format!("e{}", j), 2);
        }
    }
    for j in 3..=g.saturating_sub(1) {
        zeta_counts.insert(format!("f{}", j), 2);
    }
    loops_map.insert("zeta".to_string(), build_loop(&surface, &zeta_counts, 0)?);

    let n = 12 * g - 4;
    let v1 = LatticeVec::from_coords([("a1", -1), ("b1", -1), ("c1", -2)]);
    let v1p = LatticeVec::from_coords([("a1", -1), ("b1", -1), ("d1", -2)]);
    let v_eta = loops_map["eta"].total_intersection(&surface);
    let inner = ExpectedTriple {
        kind: TripleKind::Strong,
        loops: ["eta".into(), "zeta".into(), "sigma".into()],
        v1: v1p.clone(),
        v2: &v1p + &v_eta,
        pairing: 4,
        tr5: None,
    };
    let mut term_counts: BTreeMap<String, usize> = [
        ("eta".to_string(), n - 6 + 1),
        ("sigma".to_string(), 3),
        ("zeta".to_string(), 12 * (g - 1) - 4 + 1),
    ]
    .into();
    let mut triples = vec![inner.clone()];
    if !punctured {
        term_counts.insert("gamma".to_string(), n + 1);
        let v_gamma = loops_map["gamma"].total_intersection(&surface);
        triples.insert(
            0,
            ExpectedTriple {
                kind: TripleKind::Weak,
                loops: ["gamma".into(), "eta".into(), "sigma".into()],
                v1: v1.clone(),
                v2: &v1 + &v_gamma,
                pairing: 4,
                tr5: Some(Box::new(inner)),
            },
        );
    } else {
        term_counts.insert("peripheral".to_string(), 2);
    }
    let name = if punctured {
        format!("once-punctured-genus-{}", g)
    } else {
        format!("one-holed-genus-{}", g)
    };
    Ok(CatalogEntry {
        name,
        surface,
        loops: loops_map,
        expected: Some(Expected {
            term_counts,
            triples,
        }),
        flip: None,
    })
}

/// The family of triangulations carrying the triple (gamma, zeta_i,
/// vartheta_i): hulls for every handle arranged in a central fan, with the
/// hole wedged in at fan position i-1 by doubling that position's arc into
/// `f{i-1}` (toward handles i..g) and `fp{i-1}` (toward handles 1..i-1).
/// At the ends of the fan the doubled arc absorbs the adjacent hull: for
/// i = 2 the arc `fp1` is also the hull of handle 1, for i = g the arc
/// `f{g-1}` is also the hull of handle g.
fn delta_prime(g: usize, i: usize) -> Result<CatalogEntry> {
    assert!(g >= 2 && (2..=g).contains(&i));
    let f_name = format!("f{}", i - 1);
    let fp_name = format!("fp{}", i - 1);
    let hull = |j: usize| -> String {
        if j == 1 && i == 2 {
            fp_name.clone()
        } else if j == g && i == g {
            f_name.clone()
        } else {
            format!("e{}", j)
        }
    };
    // single arc at a fan position that is not the hole
    let single = |p: usize| -> String {
        if p == 1 {
            hull(1)
        } else if p == g - 1 {
            hull(g)
        } else {
            format!("f{}", p)
        }
    };
    let low = |p: usize| -> String {
        if p == i - 1 {
            fp_name.clone()
        } else {
            single(p)
        }
    };
    let high = |p: usize| -> String {
        if p == i - 1 {
            f_name.clone()
        } else {
            single(p)
        }
    };

    let mut arcs: Vec<String> = Vec::new();
    for j in 1..=g {
        for p in ["a", "b", "c", "d"] {
            arcs.push(format!("{}{}", p, j));
        }
    }
    for j in 1..=g {
        let h = hull(j);
        if !arcs.contains(&h) {
            arcs.push(h);
        }
    }
    for p in 2..=g.saturating_sub(2) {
        if p != i - 1 {
            arcs.push(format!("f{}", p));
        }
    }
    if !arcs.contains(&f_name) {
        arcs.push(f_name.clone());
    }
    if !arcs.contains(&fp_name) {
        arcs.push(fp_name.clone());
    }
    arcs.push("e".to_string());

    let mut triangles = Vec::new();
    for j in 1..=g {
        triangles.push(plain(
            &format!("c{}", j),
            &format!("b{}", j),
            &format!("a{}", j),
        ));
        triangles.push(plain(
            &format!("d{}", j),
            &format!("b{}", j),
            &format!("a{}", j),
        ));
        triangles.push(plain(&hull(j), &format!("d{}", j), &format!("c{}", j)));
    }
    triangles.push(plain(&f_name, &fp_name, "e"));
    for j in 2..=g - 1 {
        triangles.push(plain(&low(j), &format!("e{}", j), &high(j - 1)));
    }
    let surface = Triangulation {
        arcs,
        boundary_arcs: vec!["e".to_string()],
        triangles,
        punctures: BTreeMap::new(),
    };

    let mut loops_map = BTreeMap::new();
    let gamma_counts: BTreeMap<String, usize> = surface
        .arcs
        .iter()
        .filter(|a| !surface.is_boundary(a))
        .map(|a| (a.clone(), 2))
        .collect();
    loops_map.insert("gamma".to_string(), build_loop(&surface, &gamma_counts, 0)?);

    // zeta_i surrounds handles i..g
    let mut zeta_counts: BTreeMap<String, usize> = BTreeMap::new();
    for j in i..=g {
        for p in ["a", "b", "c", "d"] {
            zeta_counts.insert(format!("{}{}", p, j), 2);
        }
    }
    if i < g {
        for j in i..=g {
            zeta_counts.insert(hull(j), 2);
        }
        for p in i..=g.saturating_sub(2) {
            zeta_counts.insert(format!("f{}", p), 2);
        }
    }
    loops_map.insert("zeta".to_string(), build_loop(&surface, &zeta_counts, 0)?);

    // vartheta_i surrounds handles 1..i-1
    let mut vt_counts: BTreeMap<String, usize> = BTreeMap::new();
    for j in 1..i {
        for p in ["a", "b", "c", "d"] {
            vt_counts.insert(format!("{}{}", p, j), 2);
        }
    }
    if i > 2 {
        for j in 1..i {
            vt_counts.insert(hull(j), 2);
        }
        for p in 2..=i.saturating_sub(2) {
            vt_counts.insert(format!("f{}", p), 2);
        }
    }
    loops_map.insert("vartheta".to_string(), build_loop(&surface, &vt_counts, 0)?);

    let v_gamma = loops_map["gamma"].total_intersection(&surface);
    let v_vartheta = loops_map["vartheta"].total_intersection(&surface);
    let v1 = &(-&v_vartheta) - &LatticeVec::basis(fp_name.clone()).scaled(2);
    let expected = Expected {
        term_counts: [
            ("gamma".to_string(), 12 * g - 4 + 1),
            ("zeta".to_string(), 12 * (g - i + 1) - 4 + 1),
            ("vartheta".to_string(), 12 * (i - 1) - 4 + 1),
        ]
        .into(),
        triples: vec![ExpectedTriple {
            kind: TripleKind::Strong,
            loops: ["gamma".into(), "zeta".into(), "vartheta".into()],
            v2: &v1 + &v_gamma,
            v1,
            pairing: 4,
            tr5: None,
        }],
    };
    Ok(CatalogEntry {
        name: format!("delta-prime-g{}-i{}", g, i),
        surface,
        loops: loops_map,
        expected: Some(expected),
        flip: None,
    })
}
