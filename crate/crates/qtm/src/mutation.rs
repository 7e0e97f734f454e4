//! The balanced quantum coordinate change for a single flip, and flip
//! naturality checked by denominator clearing.
//!
//! The change of variables factors as a lattice isometry `C_k` followed by
//! the automorphism conjugating with the quantum dilogarithm of
//! `X_k = Z_{2 v_k}`: on a balanced monomial the latter contributes
//! `F^q(X_k; <v_k, w>/2)^{-1}`, a finite product of factors
//! `(1 + q^{odd} X_k)^{+-1}`. Clearing the common right denominator
//! `P = prod_{r=1..M} (1 + q^{2r-1} X_k)` keeps all arithmetic inside the
//! torus; right-multiplication by `P` is injective, so the cleared
//! equality is equivalent to the fraction-field one.

use crate::lattice::{LatticeRef, LatticeVec};
use crate::omega::OmegaPoly;
use crate::par;
use crate::torus::QTorusElement;
use crate::{Error, Result};

/// Image of the coordinate change before dividing by the denominator:
/// represents `numerator * P^{-1}` with `P` as above.
#[derive(Debug, Clone)]
pub struct LocalizedElement {
    pub numerator: QTorusElement,
    pub denom_degree: u32,
    pub denom_arc: String,
}

fn check_flippable(eps: &LatticeRef, k: &str) -> Result<()> {
    if !eps.contains(k) {
        return Err(Error::UnknownArc(k.into()));
    }
    if eps.is_boundary(k) {
        return Err(Error::UnsupportedFlip {
            arc: k.into(),
            reason: "boundary arc".into(),
        });
    }
    if eps.is_self_folded(k) {
        return Err(Error::UnsupportedFlip {
            arc: k.into(),
            reason: "self-folded arc".into(),
        });
    }
    Ok(())
}

/// The monomial transformation part: the lattice isometry determined by
/// `v'_k -> -v_k` and `v'_i -> v_i + [<v_k, v_i>]_+ v_k` for `i != k`,
/// with the pairing taken in the triangulation the image lives in.
pub fn ck_map(eps: &LatticeRef, k: &str, v: &LatticeVec) -> Result<LatticeVec> {
    check_flippable(eps, k)?;
    let mut out = LatticeVec::zero();
    for (label, c) in v.coords() {
        if label == k {
            out.add_coord(k, -c);
        } else {
            out.add_coord(label, c);
            let e = eps.eps_entry(k, label)?;
            if e > 0 {
                out.add_coord(k, c.checked_mul(e).expect("lattice coordinate overflow"));
            }
        }
    }
    Ok(out)
}

/// `F^q(X_k; alpha) * prod_{r=1..M} (1 + q^{-(2r-1)} X_k)` expanded in the
/// torus, with `F^q(x; a) = prod_{r=1..|a|} (1 + q^{(2r-1) sign a} x)^{sign a}`.
/// For `alpha < 0` the first `|alpha|` factors of the product cancel
/// against `F^q`, so `M >= -alpha` is required.
pub fn fq_times_p(eps: &LatticeRef, alpha: i64, m: u32, k: &str) -> Result<QTorusElement> {
    check_flippable(eps, k)?;
    if alpha < 0 && (m as i64) < -alpha {
        return Err(Error::DenominatorTooSmall {
            need: (-alpha) as u32,
            got: m,
        });
    }
    let mut out = QTorusElement::one(eps.clone());
    if alpha >= 0 {
        for r in 1..=alpha {
            out = out.mul(&x_factor(eps, k, 2 * r - 1))?;
        }
        for r in 1..=(m as i64) {
            out = out.mul(&x_factor(eps, k, -(2 * r - 1)))?;
        }
    } else {
        // the factors for r = 1..|alpha| cancel
        for r in (-alpha + 1)..=(m as i64) {
            out = out.mul(&x_factor(eps, k, -(2 * r - 1)))?;
        }
    }
    Ok(out)
}

/// `1 + q^e X_k`.
fn x_factor(eps: &LatticeRef, k: &str, e: i64) -> QTorusElement {
    QTorusElement::one(eps.clone())
        .add(&QTorusElement::monomial(
            eps.clone(),
            LatticeVec::basis(k).scaled(2),
            OmegaPoly::q_pow(e),
        ))
        .expect("same lattice")
}

/// Expanded common denominator `P = prod_{r=1..M} (1 + q^{2r-1} X_k)`.
pub fn denominator(eps: &LatticeRef, m: u32, k: &str) -> Result<QTorusElement> {
    check_flippable(eps, k)?;
    let mut out = QTorusElement::one(eps.clone());
    for r in 1..=(m as i64) {
        out = out.mul(&x_factor(eps, k, 2 * r - 1))?;
    }
    Ok(out)
}

/// `F^q(X_k; beta)^{-1} * P(M)` expanded in the torus: the per-term tail
/// after clearing the common denominator. Requires `M >= beta`.
fn cleared_tail(eps: &LatticeRef, k: &str, beta: i64, m: u32) -> Result<QTorusElement> {
    debug_assert!(m as i64 >= beta.max(0));
    let mut out = QTorusElement::one(eps.clone());
    if beta >= 0 {
        // the first beta factors of P are consumed by F^{-1}
        for r in (beta + 1)..=(m as i64) {
            out = out.mul(&x_factor(eps, k, 2 * r - 1))?;
        }
    } else {
        for r in 1..=(-beta) {
            out = out.mul(&x_factor(eps, k, -(2 * r - 1)))?;
        }
        for r in 1..=(m as i64) {
            out = out.mul(&x_factor(eps, k, 2 * r - 1))?;
        }
    }
    Ok(out)
}

/// Apply the coordinate change for the flip at `k` to a balanced element
/// written in the flipped triangulation, returning the image with
/// denominators cleared: per term, `Z_{v'} -> Z_w F^q(X_k; beta_w)^{-1}`
/// with `w = C_k(v')` and `beta_w = <v_k, w>/2`, and the common `P` of
/// degree `M = max(0, max_w beta_w)` multiplies every term on the right.
pub fn theta_apply(eps: &LatticeRef, k: &str, f_prime: &QTorusElement) -> Result<LocalizedElement> {
    check_flippable(eps, k)?;
    let v_k = LatticeVec::basis(k);
    let mut mapped: Vec<(LatticeVec, OmegaPoly, i64)> = Vec::new();
    let mut m: i64 = 0;
    for (v, c) in f_prime.terms() {
        let w = ck_map(eps, k, v)?;
        let a = eps.pair(&v_k, &w)?;
        if a % 2 != 0 {
            return Err(Error::InvalidLoop(format!(
                "element is not balanced for the flip at {}",
                k
            )));
        }
        let beta = a / 2;
        m = m.max(beta);
        mapped.push((w, c.clone(), beta));
    }
    let m = m.max(0) as u32;
    let eps_ref = eps.clone();
    let k_owned = k.to_string();
    let terms = par::map_collect(mapped, move |(w, c, beta)| {
        let tail = cleared_tail(&eps_ref, &k_owned, beta, m)?;
        QTorusElement::monomial(eps_ref.clone(), w, c).mul(&tail)
    });
    let mut numerator = QTorusElement::zero(eps.clone());
    for t in terms {
        numerator = numerator.add(&t?)?;
    }
    Ok(LocalizedElement {
        numerator,
        denom_degree: m,
        denom_arc: k.to_string(),
    })
}

/// Flip naturality: with `L = theta_apply(f_source) = A * P^{-1}`, check
/// `A = f_target * P` exactly in the torus of the target triangulation.
pub fn verify_flip_naturality(
    f_target: &QTorusElement,
    f_source: &QTorusElement,
    eps: &LatticeRef,
    k: &str,
) -> Result<bool> {
    if !crate::lattice::same_lattice(f_target.lattice(), eps) {
        return Err(Error::LatticeMismatch);
    }
    let image = theta_apply(eps, k, f_source)?;
    let p = denominator(eps, image.denom_degree, k)?;
    let rhs = f_target.mul(&p)?;
    Ok(image.numerator == rhs)
}
