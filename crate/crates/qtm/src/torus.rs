//! The quantum torus algebra attached to a skew lattice: finite sums
//! `sum c_v(omega) Z_v` with the twisted product
//! `Z_v Z_w = omega^{<v,w>} Z_{v+w}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::lattice::{same_lattice, LatticeRef, LatticeVec};
use crate::omega::{self, OmegaPoly};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct QTorusElement {
    lattice: LatticeRef,
    terms: BTreeMap<LatticeVec, OmegaPoly>,
}

impl PartialEq for QTorusElement {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.lattice, &other.lattice) && self.terms == other.terms
    }
}
impl Eq for QTorusElement {}

impl QTorusElement {
    pub fn zero(lattice: LatticeRef) -> Self {
        QTorusElement {
            lattice,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(lattice: LatticeRef) -> Self {
        Self::monomial(lattice, LatticeVec::zero(), OmegaPoly::one())
    }

    /// `c * Z_v`; a zero coefficient yields the zero element.
    pub fn monomial(lattice: LatticeRef, v: LatticeVec, coeff: OmegaPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(v, coeff);
        }
        QTorusElement { lattice, terms }
    }

    pub fn lattice(&self) -> &LatticeRef {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVec, &OmegaPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: &LatticeVec) -> OmegaPoly {
        self.terms.get(v).cloned().unwrap_or_else(OmegaPoly::zero)
    }

    /// Exponent vectors with nonzero coefficient.
    pub fn support(&self) -> Vec<LatticeVec> {
        self.terms.keys().cloned().collect()
    }

    fn insert(&mut self, v: LatticeVec, c: OmegaPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(v) {
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

    pub fn add(&self, rhs: &QTorusElement) -> Result<QTorusElement> {
        if !same_lattice(&self.lattice, &rhs.lattice) {
            return Err(Error::LatticeMismatch);
        }
        let mut out = self.clone();
        for (v, c) in &rhs.terms {
            out.insert(v.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &QTorusElement) -> Result<QTorusElement> {
        if !same_lattice(&self.lattice, &rhs.lattice) {
            return Err(Error::LatticeMismatch);
        }
        let mut out = self.clone();
        for (v, c) in &rhs.terms {
            out.insert(v.clone(), -c);
        }
        Ok(out)
    }

    /// Twisted product: the bilinear extension of
    /// `Z_v Z_w = omega^{<v,w>} Z_{v+w}`.
    pub fn mul(&self, rhs: &QTorusElement) -> Result<QTorusElement> {
        if !same_lattice(&self.lattice, &rhs.lattice) {
            return Err(Error::LatticeMismatch);
        }
        let mut out = QTorusElement::zero(self.lattice.clone());
        for (v, c) in &self.terms {
            for (w, d) in &rhs.terms {
                let twist = self.lattice.pair(v, w)?;
                let coeff = (c * d).shift(twist);
                out.insert(v + w, coeff);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &OmegaPoly) -> QTorusElement {
        let mut out = QTorusElement::zero(self.lattice.clone());
        for (v, d) in &self.terms {
            out.insert(v.clone(), c * d);
        }
        out
    }

    /// Star: ring anti-automorphism fixing every `Z_v` and sending omega to
    /// its inverse.
    pub fn star(&self) -> QTorusElement {
        let terms = self
            .terms
            .iter()
            .map(|(v, c)| (v.clone(), c.star()))
            .collect();
        QTorusElement {
            lattice: self.lattice.clone(),
            terms,
        }
    }

    /// Classical specialization omega -> 1; vanishing coefficients are
    /// dropped.
    pub fn specialize_omega1(&self) -> BTreeMap<LatticeVec, BigInt> {
        use num_traits::Zero;
        self.terms
            .iter()
            .filter_map(|(v, c)| {
                let n = c.eval_at_one();
                if n.is_zero() {
                    None
                } else {
                    Some((v.clone(), n))
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(v, c)| TermJson {
                v: v.to_json(),
                c: omega::to_json_map(c),
            })
            .collect()
    }

    pub fn from_json(lattice: LatticeRef, terms: &[TermJson]) -> Result<QTorusElement> {
        let mut out = QTorusElement::zero(lattice.clone());
        for t in terms {
            let v = LatticeVec::from_json(&t.v);
            for (l, _) in v.coords() {
                if !lattice.contains(l) {
                    return Err(Error::UnknownArc(l.into()));
                }
            }
            let c = omega::from_json_map(&t.c)
                .ok_or_else(|| Error::InvalidLoop("malformed coefficient map".into()))?;
            out.insert(v, c);
        }
        Ok(out)
    }
}

/// Serialized term: exponent vector by arc, coefficient by omega exponent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub v: BTreeMap<String, i64>,
    pub c: BTreeMap<String, String>,
}

impl fmt::Display for QTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (v, c) in &self.terms {
            if !first {
                write!(f, "  +  ")?;
            }
            first = false;
            write!(f, "({}) Z[{}]", c, v)?;
        }
        Ok(())
    }
}

/// Weyl ordering of a word of (vector, exponent) letters: the result is
/// `Z_{sum a_j v_j}`, independent of the order of the word.
pub fn weyl_order(lattice: LatticeRef, word: &[(LatticeVec, i64)]) -> QTorusElement {
    let mut total = LatticeVec::zero();
    for (v, a) in word {
        total = &total + &v.scaled(*a);
    }
    QTorusElement::monomial(lattice, total, OmegaPoly::one())
}

/// Left-to-right twisted product of the same word, for cross-checking the
/// Weyl normalization factor.
pub fn word_product(lattice: LatticeRef, word: &[(LatticeVec, i64)]) -> Result<QTorusElement> {
    let mut acc = QTorusElement::one(lattice.clone());
    for (v, a) in word {
        let m = QTorusElement::monomial(lattice.clone(), v.scaled(*a), OmegaPoly::one());
        acc = acc.mul(&m)?;
    }
    Ok(acc)
}
