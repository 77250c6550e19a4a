//! Normal-form ordinal arithmetic: CNF sums, ω-powers, ω·t, the binary Veblen
//! function, ω-towers and next-regular. All operations map normal inputs to
//! normal outputs, absorbing fixed points.

use crate::order::{cmp_raw, phi_fixed_by};
use crate::term::{self, OrdTerm, RegTerm};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("tower height {0} exceeds the configured cap {1}")]
    TowerCap(usize, usize),
    #[error("next_regular is undefined at or above I: {0}")]
    AboveI(String),
    #[error("term cannot be normalized: {0}")]
    NotNormalizable(String),
}

/// CNF sum with left absorption of small parts.
pub fn add(s: &OrdTerm, t: &OrdTerm) -> OrdTerm {
    let left = s.parts();
    let right = t.parts();
    if right.is_empty() {
        return from_parts(left);
    }
    let head = &right[0];
    let mut parts: Vec<OrdTerm> = left
        .into_iter()
        .filter(|p| cmp_raw(p, head) != Ordering::Less)
        .collect();
    parts.extend(right);
    from_parts(parts)
}

fn from_parts(parts: Vec<OrdTerm>) -> OrdTerm {
    match parts.len() {
        0 => OrdTerm::Zero,
        1 => parts.into_iter().next().unwrap(),
        _ => OrdTerm::Sum(parts),
    }
}

/// Normal notation for ω^t. ε-class arguments are their own ω-power.
pub fn omega_pow(t: &OrdTerm) -> OrdTerm {
    if t.is_eps_shape() {
        t.clone()
    } else {
        term::pow(t.clone())
    }
}

/// Normal notation for ω·t, by left distributivity over the CNF of t.
pub fn omega_times(t: &OrdTerm) -> OrdTerm {
    let parts = t
        .parts()
        .into_iter()
        .map(|p| match p {
            OrdTerm::Pow(e) => term::pow(add(&term::one(), &e)),
            // principal ε-class parts satisfy ω·p = p
            other => other,
        })
        .collect();
    from_parts(parts)
}

/// Normal Veblen value φ(a, b) with the standard fixed-point laws.
pub fn veblen(a: &OrdTerm, b: &OrdTerm) -> OrdTerm {
    if *a == OrdTerm::Zero {
        return omega_pow(b);
    }
    if phi_fixed_by(a, b) {
        return b.clone();
    }
    if a.is_strongly_critical_shape() && *b == OrdTerm::Zero {
        return a.clone();
    }
    term::phi(a.clone(), b.clone())
}

/// ω_0(t) = t, ω_{m+1}(t) = ω^{ω_m(t)}.
pub fn omega_tower(m: usize, t: &OrdTerm, cap: usize) -> Result<OrdTerm, ArithError> {
    if m > cap {
        return Err(ArithError::TowerCap(m, cap));
    }
    let mut acc = t.clone();
    for _ in 0..m {
        acc = omega_pow(&acc);
    }
    Ok(acc)
}

/// Cardinal-segment index: the largest a (as a term) with t ≥ ω_a, where
/// `None` means t < ω_1 and aleph-fixed values index themselves.
fn aleph_floor(t: &OrdTerm) -> Result<Option<OrdTerm>, ArithError> {
    match t {
        OrdTerm::BigI => Err(ArithError::AboveI(term::render_term(t))),
        OrdTerm::Zero => Ok(None),
        OrdTerm::Sum(ps) => aleph_floor(&ps[0]),
        OrdTerm::Pow(e) => aleph_floor(e),
        OrdTerm::Phi(a, b) => {
            let fa = aleph_floor(a)?;
            let fb = aleph_floor(b)?;
            Ok(max_opt(fa, fb))
        }
        OrdTerm::Aleph(i) => Ok(Some((**i).clone())),
        OrdTerm::Psi(RegTerm::AlephSucc(p), _) => Ok(Some((**p).clone())),
        OrdTerm::Fc1(_, RegTerm::AlephSucc(p)) => Ok(Some((**p).clone())),
        OrdTerm::Psi(RegTerm::TopI, _) | OrdTerm::FcN(_) => Ok(Some(t.clone())),
        OrdTerm::Fc1(_, RegTerm::TopI) => Err(ArithError::NotNormalizable(
            "fc1 with kappa = I".into(),
        )),
        OrdTerm::Mu(_) => Err(ArithError::NotNormalizable(
            "mu constants have no cardinal segment".into(),
        )),
    }
}

fn max_opt(a: Option<OrdTerm>, b: Option<OrdTerm>) -> Option<OrdTerm> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if cmp_raw(&a, &b) == Ordering::Less {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// The least AlephSucc term strictly above t (ω_{a+1} for the cardinal
/// segment [ω_a, ω_{a+1}) containing t).
pub fn next_regular(t: &OrdTerm) -> Result<RegTerm, ArithError> {
    if cmp_raw(t, &OrdTerm::BigI) != Ordering::Less {
        return Err(ArithError::AboveI(term::render_term(t)));
    }
    Ok(match aleph_floor(t)? {
        None => term::aleph_succ(OrdTerm::Zero),
        Some(idx) => term::aleph_succ(idx),
    })
}

/// Normal notation for ω_i, absorbing fixed points (ω_0 = ω, ω_{Ψ_I α} = Ψ_I α).
pub fn aleph_norm(i: &OrdTerm) -> Result<OrdTerm, ArithError> {
    if i.is_aleph_fixed_shape() && *i != OrdTerm::BigI {
        return Ok(i.clone());
    }
    if *i == OrdTerm::BigI {
        // ω_I = I for the inaccessible
        return Ok(OrdTerm::BigI);
    }
    if *i == OrdTerm::Zero {
        return Ok(term::pow(term::one()));
    }
    if i.is_mu() {
        return Err(ArithError::NotNormalizable("W of a mu constant".into()));
    }
    Ok(term::aleph(i.clone()))
}

/// Bottom-up renormalization through the arithmetic smart constructors.
/// Fails on inadmissible Ψ-terms and malformed collapse values, which have no
/// canonical form.
pub fn normalize(t: &OrdTerm) -> Result<OrdTerm, ArithError> {
    match t {
        OrdTerm::Zero | OrdTerm::BigI | OrdTerm::Mu(_) => Ok(t.clone()),
        OrdTerm::Sum(ps) => {
            let mut acc = OrdTerm::Zero;
            for p in ps {
                let np = normalize(p)?;
                acc = add(&acc, &np);
            }
            Ok(acc)
        }
        OrdTerm::Pow(e) => Ok(omega_pow(&normalize(e)?)),
        OrdTerm::Aleph(i) => aleph_norm(&normalize(i)?),
        OrdTerm::Phi(a, b) => Ok(veblen(&normalize(a)?, &normalize(b)?)),
        OrdTerm::Psi(k, a) => {
            let k = normalize_reg(k)?;
            let a = normalize(a)?;
            if !crate::order::psi_admissible(&k, &a) {
                return Err(ArithError::NotNormalizable(format!(
                    "inadmissible collapse {}",
                    term::render_term(t)
                )));
            }
            Ok(term::psi(k, a))
        }
        OrdTerm::Fc1(x, k) => {
            let k = normalize_reg(k)?;
            let x = normalize(x)?;
            if matches!(k, RegTerm::TopI) || !matches!(&x, OrdTerm::Psi(k2, _) if *k2 == k) {
                return Err(ArithError::NotNormalizable(format!(
                    "fc1 argument is not a collapse at the same regular: {}",
                    term::render_term(t)
                )));
            }
            Ok(term::fc1(x, k))
        }
        OrdTerm::FcN(x) => {
            let x = normalize(x)?;
            if !matches!(&x, OrdTerm::Psi(RegTerm::TopI, _)) {
                return Err(ArithError::NotNormalizable(format!(
                    "fcn argument is not an I-collapse: {}",
                    term::render_term(t)
                )));
            }
            Ok(term::fcn(x))
        }
    }
}

fn normalize_reg(k: &RegTerm) -> Result<RegTerm, ArithError> {
    match k {
        RegTerm::TopI => Ok(RegTerm::TopI),
        RegTerm::AlephSucc(p) => Ok(term::aleph_succ(normalize(p)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{aleph, fcn, finite, omega1, one, phi, pow, psi, succ, BigI, RegTerm, Zero};

    #[test]
    fn add_cnf() {
        // a+b = b when a < b additive principal; I is strongly critical so
        // ω^I collapses to I first.
        assert_eq!(add(&pow(Zero), &BigI), BigI);
        assert_eq!(add(&BigI, &pow(Zero)), OrdTerm::Sum(vec![BigI, pow(Zero)]));
        assert_eq!(
            add(&OrdTerm::Sum(vec![BigI, pow(Zero)]), &pow(Zero)),
            OrdTerm::Sum(vec![BigI, pow(Zero), pow(Zero)])
        );
        assert_eq!(add(&Zero, &finite(2)), finite(2));
        assert_eq!(add(&finite(2), &Zero), finite(2));
        // associativity up to normalization
        let a = finite(2);
        let b = pow(one());
        let c = BigI;
        assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
    }

    #[test]
    fn omega_pow_fixed_points() {
        assert_eq!(omega_pow(&Zero), one());
        assert_eq!(omega_pow(&BigI), BigI);
        assert_eq!(omega_pow(&phi(one(), Zero)), phi(one(), Zero));
        assert_eq!(omega_pow(&aleph(one())), aleph(one()));
        assert_eq!(omega_pow(&psi(omega1(), Zero)), psi(omega1(), Zero));
        assert_eq!(omega_pow(&one()), pow(one()));
    }

    #[test]
    fn omega_times_examples() {
        assert_eq!(omega_times(&Zero), Zero);
        assert_eq!(omega_times(&one()), pow(one()));
        assert_eq!(omega_times(&BigI), BigI);
        assert_eq!(omega_times(&aleph(one())), aleph(one()));
        // ω·(I+1) = I + ω
        assert_eq!(
            omega_times(&succ(BigI)),
            OrdTerm::Sum(vec![BigI, pow(one())])
        );
    }

    #[test]
    fn veblen_laws() {
        assert_eq!(veblen(&Zero, &one()), pow(one()));
        // a>0 ⇒ φ0(φab) = φab
        assert_eq!(
            veblen(&Zero, &veblen(&one(), &Zero)),
            veblen(&one(), &Zero)
        );
        assert_eq!(veblen(&one(), &Zero), phi(one(), Zero));
        // strongly critical b is a fixed point of every lower level
        let sc = psi(RegTerm::TopI, Zero);
        assert_eq!(veblen(&one(), &sc), sc);
        assert_eq!(veblen(&sc, &Zero), sc);
        // φ_a(b) for b below the level stays a Phi node
        assert_eq!(veblen(&sc, &one()), phi(sc.clone(), one()));
    }

    #[test]
    fn towers() {
        assert_eq!(omega_tower(0, &BigI, 8).unwrap(), BigI);
        let i_plus_1 = succ(BigI);
        assert_eq!(omega_tower(1, &i_plus_1, 8).unwrap(), pow(i_plus_1.clone()));
        assert_eq!(
            omega_tower(2, &i_plus_1, 8).unwrap(),
            pow(pow(i_plus_1.clone()))
        );
        assert_eq!(
            omega_tower(2, &i_plus_1, 8).unwrap(),
            omega_pow(&omega_tower(1, &i_plus_1, 8).unwrap())
        );
        assert!(omega_tower(9, &Zero, 8).is_err());
    }

    #[test]
    fn next_regular_examples() {
        assert_eq!(next_regular(&Zero).unwrap(), omega1());
        assert_eq!(
            next_regular(&aleph(one())).unwrap(),
            term::aleph_succ(one())
        );
        assert_eq!(next_regular(&psi(omega1(), Zero)).unwrap(), omega1());
        assert_eq!(
            next_regular(&psi(RegTerm::TopI, Zero)).unwrap(),
            term::aleph_succ(psi(RegTerm::TopI, Zero))
        );
        assert!(next_regular(&BigI).is_err());
    }

    #[test]
    fn normalize_aleph_fixed_point() {
        let v = psi(RegTerm::TopI, Zero);
        assert_eq!(normalize(&aleph(v.clone())).unwrap(), v.clone());
        assert_eq!(normalize(&aleph(fcn(v.clone()))).unwrap(), fcn(v));
        assert_eq!(normalize(&aleph(Zero)).unwrap(), pow(one()));
        assert_eq!(normalize(&pow(BigI)).unwrap(), BigI);
    }

    #[test]
    fn successor_strictly_increases() {
        use crate::order::cmp_raw;
        for t in [Zero, one(), BigI, psi(omega1(), Zero), aleph(one())] {
            assert_eq!(cmp_raw(&t, &add(&t, &one())), Ordering::Less);
        }
    }
}
