//! The coefficient ring `Z[omega^{+-1}]`: integer Laurent polynomials in
//! the quantum parameter omega. Exponents are machine integers with
//! overflow checks, coefficients are arbitrary-precision integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial in omega. The zero polynomial has an empty term map;
/// no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OmegaPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl OmegaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::omega_pow(0)
    }

    /// `omega^n`.
    pub fn omega_pow(n: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(n, BigInt::one());
        OmegaPoly { terms }
    }

    /// `q^n` with `q = omega^4`.
    pub fn q_pow(n: i64) -> Self {
        Self::omega_pow(n.checked_mul(4).expect("omega exponent overflow"))
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        OmegaPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    fn insert(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Star involution: omega -> omega^{-1}, i.e., exponents are negated.
    pub fn star(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.checked_neg().expect("omega exponent overflow"), c.clone()))
            .collect();
        OmegaPoly { terms }
    }

    /// Evaluation at omega = 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Multiply by `omega^n` in place.
    pub fn shift(&self, n: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.checked_add(n).expect("omega exponent overflow"),
                    c.clone(),
                )
            })
            .collect();
        OmegaPoly { terms }
    }
}

impl Add for &OmegaPoly {
    type Output = OmegaPoly;
    fn add(self, rhs: &OmegaPoly) -> OmegaPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(*e, c.clone());
        }
        out
    }
}

impl AddAssign<&OmegaPoly> for OmegaPoly {
    fn add_assign(&mut self, rhs: &OmegaPoly) {
        for (e, c) in &rhs.terms {
            self.insert(*e, c.clone());
        }
    }
}

impl Sub for &OmegaPoly {
    type Output = OmegaPoly;
    fn sub(self, rhs: &OmegaPoly) -> OmegaPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(*e, -c.clone());
        }
        out
    }
}

impl Neg for &OmegaPoly {
    type Output = OmegaPoly;
    fn neg(self) -> OmegaPoly {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect();
        OmegaPoly { terms }
    }
}

impl Mul for &OmegaPoly {
    type Output = OmegaPoly;
    fn mul(self, rhs: &OmegaPoly) -> OmegaPoly {
        let mut out = OmegaPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.checked_add(*e2).expect("omega exponent overflow");
                out.insert(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for OmegaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "w")?,
                (1, false) => write!(f, "{}*w", mag)?,
                (_, true) => write!(f, "w^{}", e)?,
                (_, false) => write!(f, "{}*w^{}", mag, e)?,
            }
        }
        Ok(())
    }
}

/// Serialized form: omega exponent (as a string key) -> coefficient digits.
pub(crate) fn to_json_map(p: &OmegaPoly) -> BTreeMap<String, String> {
    p.terms
        .iter()
        .map(|(e, c)| (e.to_string(), c.to_string()))
        .collect()
}

pub(crate) fn from_json_map(m: &BTreeMap<String, String>) -> Option<OmegaPoly> {
    let mut out = OmegaPoly::zero();
    for (e, c) in m {
        let exp: i64 = e.parse().ok()?;
        let coeff: BigInt = c.parse().ok()?;
        out.insert(exp, coeff);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_basics() {
        let a = OmegaPoly::omega_pow(3);
        let b = OmegaPoly::omega_pow(-3);
        let s = &a + &b;
        assert_eq!(s.eval_at_one(), BigInt::from(2));
        assert!((&s - &s).is_zero());
        assert_eq!(&a * &b, OmegaPoly::one());
    }

    #[test]
    fn star_is_involutive_ring_map() {
        let p = &(&OmegaPoly::omega_pow(2) + &OmegaPoly::from_int(3)) * &OmegaPoly::omega_pow(-5);
        let q = &OmegaPoly::omega_pow(1) + &OmegaPoly::from_int(-1);
        assert_eq!(p.star().star(), p);
        assert_eq!((&p * &q).star(), &p.star() * &q.star());
        assert_eq!((&p + &q).star(), &p.star() + &q.star());
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let p = OmegaPoly::from_int(0);
        assert!(p.is_zero());
        let q = &OmegaPoly::omega_pow(2) - &OmegaPoly::omega_pow(2);
        assert!(q.is_zero());
        for (_, c) in (&OmegaPoly::from_int(5) + &OmegaPoly::omega_pow(1)).terms() {
            assert!(!c.is_zero());
        }
    }

    #[test]
    fn json_round_trip() {
        let p = &OmegaPoly::omega_pow(-4) + &OmegaPoly::from_int(7);
        let m = to_json_map(&p);
        assert_eq!(from_json_map(&m).unwrap(), p);
    }
}
