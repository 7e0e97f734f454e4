//! Admissible juncture-states and the state-sum quantized
//! trace-of-monodromy, together with the closed forms for peripheral and
//! almost-peripheral loops.

use std::collections::{HashMap, HashSet};

use crate::lattice::{LatticeRef, LatticeVec};
use crate::loops::{Classification, LoopPosition, Turn};
use crate::omega::OmegaPoly;
use crate::par;
use crate::surface::Triangulation;
use crate::torus::QTorusElement;
use crate::{Error, Result};

/// A sign assignment on the junctures of a loop, indexed like
/// `LoopPosition` junctures: entry `j` is the sign at the crossing on
/// `segments[j].out_arc`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JunctureState {
    pub signs: Vec<Sign>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Admissibility of one segment: a left turn forbids `(-,+)` endpoint
/// signs, a right turn forbids `(+,-)`. Signs are (initial, terminal).
fn segment_admits(turn: Turn, initial: Sign, terminal: Sign) -> bool {
    match turn {
        Turn::L => !(initial == Sign::Minus && terminal == Sign::Plus),
        Turn::R => !(initial == Sign::Plus && terminal == Sign::Minus),
    }
}

/// Enumerate admissible juncture-states by a depth-first walk over the
/// junctures in cyclic order, pruning each segment rule as soon as both of
/// its endpoints are assigned. The result is in lexicographic order with
/// `+` before `-`.
pub fn enumerate_admissible(t: &Triangulation, lp: &LoopPosition) -> Result<Vec<JunctureState>> {
    lp.validate(t)?;
    let turns = lp.turns(t)?;
    let n = lp.len();
    // segment s runs from juncture (s + n - 1) % n to juncture s
    let extend = |first: Sign| -> Vec<JunctureState> {
        let mut out = Vec::new();
        let mut stack = vec![vec![first]];
        while let Some(signs) = stack.pop() {
            let j = signs.len();
            if j == n {
                // close the cycle: segment 0 connects juncture n-1 to 0
                if segment_admits(turns[0], signs[n - 1], signs[0]) {
                    out.push(JunctureState { signs });
                }
                continue;
            }
            // push Minus first so Plus is popped first (lexicographic)
            for s in [Sign::Minus, Sign::Plus] {
                if segment_admits(turns[j], signs[j - 1], s) {
                    let mut next = signs.clone();
                    next.push(s);
                    stack.push(next);
                }
            }
        }
        out
    };
    let (mut plus, minus) = par::join(|| extend(Sign::Plus), || extend(Sign::Minus));
    plus.extend(minus);
    plus.sort();
    Ok(plus)
}

/// Exhaustive oracle for `enumerate_admissible`: filter all `2^N` sign
/// assignments by the segment rule. Capped at 24 junctures.
pub fn brute_force_states(t: &Triangulation, lp: &LoopPosition) -> Result<Vec<JunctureState>> {
    brute_force_impl(t, lp, false)
}

/// Sequential body of the oracle; the benches compare it against the
/// default entry point.
pub fn brute_force_states_seq(t: &Triangulation, lp: &LoopPosition) -> Result<Vec<JunctureState>> {
    brute_force_impl(t, lp, true)
}

fn brute_force_impl(
    t: &Triangulation,
    lp: &LoopPosition,
    force_seq: bool,
) -> Result<Vec<JunctureState>> {
    lp.validate(t)?;
    let n = lp.len();
    if n > 24 {
        return Err(Error::TooManyJunctures(n));
    }
    let turns = lp.turns(t)?;
    let sign_at = |mask: u64, j: usize| {
        if mask & (1 << j) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    };
    let admissible = |mask: u64| {
        (0..n).all(|s| {
            let from = sign_at(mask, (s + n - 1) % n);
            let to = sign_at(mask, s);
            segment_admits(turns[s], from, to)
        })
    };
    let masks = if force_seq {
        par::seq_filter_range(1u64 << n, admissible)
    } else {
        par::filter_range(1u64 << n, admissible)
    };
    let mut out: Vec<JunctureState> = masks
        .into_iter()
        .map(|mask| JunctureState {
            signs: (0..n).map(|j| sign_at(mask, j)).collect(),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `v_J = sum_i (sum_{x in gamma cap i} J(x)) v~_i`.
pub fn state_vector(t: &Triangulation, lp: &LoopPosition, state: &JunctureState) -> LatticeVec {
    let mut out = LatticeVec::zero();
    for (j, sign) in state.signs.iter().enumerate() {
        out = &out + &t.tilde_vec(lp.juncture_arc(j)).scaled(sign.value());
    }
    out
}

/// The state-sum quantized trace-of-monodromy: the sum of Weyl-ordered
/// monomials `Z_{v_J}` over admissible juncture-states. Refuses when two
/// states share an exponent vector, since the state-sum formula is only
/// proven under the non-redundancy condition.
pub fn trace(t: &Triangulation, lp: &LoopPosition) -> Result<QTorusElement> {
    let lattice = t.exchange_matrix()?;
    let states = enumerate_admissible(t, lp)?;
    trace_from_states(t, lp, &states, lattice)
}

fn trace_from_states(
    t: &Triangulation,
    lp: &LoopPosition,
    states: &[JunctureState],
    lattice: LatticeRef,
) -> Result<QTorusElement> {
    let vectors: Vec<LatticeVec> = states.iter().map(|s| state_vector(t, lp, s)).collect();
    let mut seen: HashMap<&LatticeVec, usize> = HashMap::new();
    let mut collisions = 0usize;
    let mut example = None;
    for v in &vectors {
        let c = seen.entry(v).or_insert(0);
        *c += 1;
        if *c > 1 {
            collisions += 1;
            example.get_or_insert_with(|| v.to_string());
        }
    }
    if collisions > 0 {
        return Err(Error::RedundantStates {
            pairs: collisions,
            example: example.unwrap_or_default(),
        });
    }
    let mut out = QTorusElement::zero(lattice.clone());
    for v in vectors {
        out = out.add(&QTorusElement::monomial(
            lattice.clone(),
            v,
            OmegaPoly::one(),
        ))?;
    }
    Ok(out)
}

/// Closed forms, built without enumerating states:
/// two mutually inverse terms for a peripheral loop, and the
/// `v_{J_r} = v_{J_{r-1}} - 2 v~_{i_r}` chain for an almost-peripheral
/// loop (which covers every 2-juncture loop).
pub fn trace_closed_form(t: &Triangulation, lp: &LoopPosition) -> Result<QTorusElement> {
    let lattice = t.exchange_matrix()?;
    lp.validate(t)?;
    let one = OmegaPoly::one();
    match lp.classify(t)? {
        Classification::Peripheral => {
            let v = lp.total_intersection(t);
            QTorusElement::monomial(lattice.clone(), v.clone(), one.clone())
                .add(&QTorusElement::monomial(lattice, -&v, one))
        }
        Classification::AlmostPeripheral(k1) => {
            let turns = lp.turns(t)?;
            if turns[k1 - 1] == Turn::R {
                // mirror case: reduce to the unique-left-turn chain on the
                // reversed loop; the trace is orientation independent
                return trace_closed_form_left(t, &lp.reversed(), lattice);
            }
            trace_closed_form_left(t, lp, lattice)
        }
        Classification::General => Err(Error::UnsupportedClosedForm),
    }
}

/// The almost-peripheral chain for a loop whose unique minority turn is a
/// left turn at segment `k` (1-based): starting from the all-plus state,
/// successive states flip the junctures `x_k, x_{k+1}, ...` one at a time.
fn trace_closed_form_left(
    t: &Triangulation,
    lp: &LoopPosition,
    lattice: LatticeRef,
) -> Result<QTorusElement> {
    let turns = lp.turns(t)?;
    let k1 = turns
        .iter()
        .position(|x| *x == Turn::L)
        .ok_or(Error::UnsupportedClosedForm)?
        + 1;
    let n = lp.len();
    let one = OmegaPoly::one();
    let mut v = lp.total_intersection(t);
    let mut out = QTorusElement::monomial(lattice.clone(), v.clone(), one.clone());
    for r in 1..=n {
        // juncture x_{k+r-1}, i.e. the terminal juncture of segment k+r-1
        let j = (k1 - 1 + r - 1) % n;
        let tv = t.tilde_vec(lp.juncture_arc(j));
        v = &v - &tv.scaled(2);
        out = out.add(&QTorusElement::monomial(
            lattice.clone(),
            v.clone(),
            one.clone(),
        ))?;
    }
    Ok(out)
}

/// Trace plus the metadata the CLI reports.
pub struct TraceReport {
    pub element: QTorusElement,
    pub state_count: usize,
    pub classification: Classification,
    pub v_gamma: LatticeVec,
}

pub fn trace_report(t: &Triangulation, lp: &LoopPosition) -> Result<TraceReport> {
    let states = enumerate_admissible(t, lp)?;
    let lattice = t.exchange_matrix()?;
    let element = trace_from_states(t, lp, &states, lattice)?;
    Ok(TraceReport {
        element,
        state_count: states.len(),
        classification: lp.classify(t)?,
        v_gamma: lp.total_intersection(t),
    })
}

/// Set view of a state list, for order-insensitive comparison.
pub fn states_as_set(states: &[JunctureState]) -> HashSet<JunctureState> {
    states.iter().cloned().collect()
}
