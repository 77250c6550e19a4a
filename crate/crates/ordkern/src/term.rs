//! The ordinal term grammar.
//!
//! Terms denote ordinals below ε_{I+1}, where `I` is the least weakly
//! inaccessible. Additive-principal terms are everything except `Zero` and
//! `Sum`; sums are Cantor normal forms with weakly decreasing parts.

use crate::formula::Formula;

/// A syntactic ordinal notation. Derived `Ord` is structural, for container
/// keys only; the ordinal order is `order::cmp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrdTerm {
    Zero,
    /// The constant I (least weakly inaccessible).
    BigI,
    /// Cantor normal form: weakly decreasing additive-principal parts, length ≥ 2.
    Sum(Vec<OrdTerm>),
    /// ω^exp.
    Pow(Box<OrdTerm>),
    /// ω_idx, the cardinal enumeration. Written `W(idx)`.
    Aleph(Box<OrdTerm>),
    /// Binary Veblen φ(a, b).
    Phi(Box<OrdTerm>, Box<OrdTerm>),
    /// The collapse Ψ_{κ,n} α at the configured level n.
    Psi(RegTerm, Box<OrdTerm>),
    /// The Mostowski-collapse value F^{Σ1}_{x∪{κ}}(I).
    Fc1(Box<OrdTerm>, RegTerm),
    /// The Mostowski-collapse value F^{Σn}_{x}(I).
    FcN(Box<OrdTerm>),
    /// Opaque μ-witness constant with structural identity only. These denote
    /// sets, not ordinals; order queries route through rank intervals.
    Mu(Box<MuWitness>),
}

/// An uncountable regular term: ω_{pred+1} ∈ R, or I itself (R⁺ = R ∪ {I}).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegTerm {
    AlephSucc(Box<OrdTerm>),
    TopI,
}

/// Payload of a symbolic μ-witness: the least z ∈ L_bound with body\[z\] true.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuWitness {
    pub bound: OrdTerm,
    pub var: String,
    pub body: Formula,
}

impl RegTerm {
    /// The regular as an ordinal term: ω_{pred+1}, or I.
    pub fn as_ord(&self) -> OrdTerm {
        match self {
            RegTerm::AlephSucc(p) => OrdTerm::Aleph(Box::new(succ((**p).clone()))),
            RegTerm::TopI => OrdTerm::BigI,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RegTerm::AlephSucc(p) => 1 + p.size(),
            RegTerm::TopI => 1,
        }
    }
}

pub use OrdTerm::{BigI, Zero};

pub fn pow(e: OrdTerm) -> OrdTerm {
    OrdTerm::Pow(Box::new(e))
}
pub fn aleph(i: OrdTerm) -> OrdTerm {
    OrdTerm::Aleph(Box::new(i))
}
pub fn phi(a: OrdTerm, b: OrdTerm) -> OrdTerm {
    OrdTerm::Phi(Box::new(a), Box::new(b))
}
pub fn psi(kappa: RegTerm, alpha: OrdTerm) -> OrdTerm {
    OrdTerm::Psi(kappa, Box::new(alpha))
}
pub fn fc1(x: OrdTerm, kappa: RegTerm) -> OrdTerm {
    OrdTerm::Fc1(Box::new(x), kappa)
}
pub fn fcn(x: OrdTerm) -> OrdTerm {
    OrdTerm::FcN(Box::new(x))
}
pub fn aleph_succ(p: OrdTerm) -> RegTerm {
    RegTerm::AlephSucc(Box::new(p))
}
/// ω_1 as a regular term.
pub fn omega1() -> RegTerm {
    aleph_succ(Zero)
}

/// The canonical notation for 1, namely ω^0.
pub fn one() -> OrdTerm {
    pow(Zero)
}

/// Structural successor: appends one copy of ω^0.
pub fn succ(t: OrdTerm) -> OrdTerm {
    match t {
        Zero => one(),
        OrdTerm::Sum(mut parts) => {
            parts.push(one());
            OrdTerm::Sum(parts)
        }
        other => OrdTerm::Sum(vec![other, one()]),
    }
}

/// The finite ordinal n as a term.
pub fn finite(n: usize) -> OrdTerm {
    match n {
        0 => Zero,
        1 => one(),
        _ => OrdTerm::Sum(vec![one(); n]),
    }
}

impl OrdTerm {
    pub fn size(&self) -> usize {
        match self {
            Zero | BigI => 1,
            OrdTerm::Sum(ps) => 1 + ps.iter().map(|p| p.size()).sum::<usize>(),
            OrdTerm::Pow(e) | OrdTerm::Aleph(e) | OrdTerm::FcN(e) => 1 + e.size(),
            OrdTerm::Phi(a, b) => 1 + a.size() + b.size(),
            OrdTerm::Psi(k, a) => 1 + k.size() + a.size(),
            OrdTerm::Fc1(x, k) => 1 + x.size() + k.size(),
            OrdTerm::Mu(m) => 1 + m.bound.size(),
        }
    }

    pub fn is_sum(&self) -> bool {
        matches!(self, OrdTerm::Sum(_))
    }

    pub fn is_mu(&self) -> bool {
        matches!(self, OrdTerm::Mu(_))
    }

    /// Additive-principal candidates: anything but Zero, Sum, and Mu.
    pub fn is_principal_shape(&self) -> bool {
        !matches!(self, Zero | OrdTerm::Sum(_) | OrdTerm::Mu(_))
    }

    /// Strongly critical shapes: closed under + , ω^ and the Veblen function.
    pub fn is_strongly_critical_shape(&self) -> bool {
        matches!(
            self,
            BigI | OrdTerm::Aleph(_)
                | OrdTerm::Psi(..)
                | OrdTerm::Fc1(..)
                | OrdTerm::FcN(_)
        )
    }

    /// ε-class shapes: fixed points of ω^· (strongly critical terms and φ-values).
    pub fn is_eps_shape(&self) -> bool {
        self.is_strongly_critical_shape() || matches!(self, OrdTerm::Phi(..))
    }

    /// Shapes v with ω_v = v: I itself, Ψ_{I,n}-values, and F^{Σn} collapse values.
    pub fn is_aleph_fixed_shape(&self) -> bool {
        matches!(
            self,
            BigI | OrdTerm::Psi(RegTerm::TopI, _) | OrdTerm::FcN(_)
        )
    }

    /// CNF parts view: Zero has none, a sum its parts, a principal itself.
    pub fn parts(&self) -> Vec<OrdTerm> {
        match self {
            Zero => vec![],
            OrdTerm::Sum(ps) => ps.clone(),
            other => vec![other.clone()],
        }
    }

    /// If the term is a structural successor p+1, returns p.
    pub fn pred_of_succ(&self) -> Option<OrdTerm> {
        match self {
            OrdTerm::Pow(e) if **e == Zero => Some(Zero),
            OrdTerm::Sum(ps) => {
                if *ps.last().unwrap() != one() {
                    return None;
                }
                match ps.len() {
                    0 | 1 => None,
                    2 => Some(ps[0].clone()),
                    _ => Some(OrdTerm::Sum(ps[..ps.len() - 1].to_vec())),
                }
            }
            _ => None,
        }
    }
}

/// Reflexive-transitive structural closure, including the κ of Psi/Fc1 nodes.
pub fn subterms(t: &OrdTerm) -> Vec<OrdTerm> {
    let mut acc = Vec::new();
    collect(t, &mut acc);
    acc
}

fn push_unique(acc: &mut Vec<OrdTerm>, t: &OrdTerm) -> bool {
    if acc.contains(t) {
        false
    } else {
        acc.push(t.clone());
        true
    }
}

fn collect(t: &OrdTerm, acc: &mut Vec<OrdTerm>) {
    if !push_unique(acc, t) {
        return;
    }
    match t {
        Zero | BigI => {}
        OrdTerm::Sum(ps) => ps.iter().for_each(|p| collect(p, acc)),
        OrdTerm::Pow(e) | OrdTerm::Aleph(e) | OrdTerm::FcN(e) => collect(e, acc),
        OrdTerm::Phi(a, b) => {
            collect(a, acc);
            collect(b, acc);
        }
        OrdTerm::Psi(k, a) => {
            collect_reg(k, acc);
            collect(a, acc);
        }
        OrdTerm::Fc1(x, k) => {
            collect(x, acc);
            collect_reg(k, acc);
        }
        OrdTerm::Mu(m) => collect(&m.bound, acc),
    }
}

fn collect_reg(k: &RegTerm, acc: &mut Vec<OrdTerm>) {
    if let RegTerm::AlephSucc(p) = k {
        collect(p, acc);
    }
}

/// Hereditary normal-form predicate. See the order engine for the admissibility
/// condition on Ψ-terms.
pub fn is_normal(t: &OrdTerm) -> bool {
    match t {
        Zero | BigI => true,
        OrdTerm::Sum(ps) => {
            ps.len() >= 2
                && ps.iter().all(|p| p.is_principal_shape() && is_normal(p))
                && ps.windows(2).all(|w| {
                    crate::order::cmp_raw(&w[0], &w[1]) != std::cmp::Ordering::Less
                })
        }
        OrdTerm::Pow(e) => is_normal(e) && !e.is_eps_shape(),
        OrdTerm::Aleph(i) => {
            is_normal(i)
                && **i != Zero
                && !i.is_aleph_fixed_shape()
                && !i.is_mu()
                && crate::order::cmp_raw(i, &BigI) == std::cmp::Ordering::Less
        }
        OrdTerm::Phi(a, b) => {
            **a != Zero
                && is_normal(a)
                && is_normal(b)
                && !a.is_mu()
                && !b.is_mu()
                // b must not be a fixed point of φ_a, and φ_a(0) = a for
                // strongly critical a.
                && !crate::order::phi_fixed_by(a, b)
                && !(a.is_strongly_critical_shape() && **b == Zero)
        }
        OrdTerm::Psi(k, a) => {
            reg_normal(k) && is_normal(a) && !a.is_mu() && crate::order::psi_admissible(k, a)
        }
        OrdTerm::Fc1(x, k) => {
            // the Σ1-collapse takes κ ∈ R only; the I-collapse is FcN
            matches!(k, RegTerm::AlephSucc(_))
                && reg_normal(k)
                && is_normal(x)
                && matches!(&**x, OrdTerm::Psi(k2, _) if k2 == k)
        }
        OrdTerm::FcN(x) => {
            is_normal(x) && matches!(&**x, OrdTerm::Psi(RegTerm::TopI, _))
        }
        OrdTerm::Mu(m) => is_normal(&m.bound),
    }
}

pub fn reg_normal(k: &RegTerm) -> bool {
    match k {
        RegTerm::TopI => true,
        RegTerm::AlephSucc(p) => {
            is_normal(p)
                && !p.is_mu()
                && crate::order::cmp_raw(p, &BigI) == std::cmp::Ordering::Less
        }
    }
}

pub fn render_term(t: &OrdTerm) -> String {
    match t {
        Zero => "0".into(),
        BigI => "I".into(),
        OrdTerm::Sum(ps) => ps
            .iter()
            .map(render_term)
            .collect::<Vec<_>>()
            .join("+"),
        OrdTerm::Pow(e) => format!("w^({})", render_term(e)),
        OrdTerm::Aleph(i) => format!("W({})", render_term(i)),
        OrdTerm::Phi(a, b) => format!("phi({},{})", render_term(a), render_term(b)),
        OrdTerm::Psi(k, a) => format!("psi({}; {})", render_reg(k), render_term(a)),
        OrdTerm::Fc1(x, k) => format!("fc1({}; {})", render_term(x), render_reg(k)),
        OrdTerm::FcN(x) => format!("fcn({})", render_term(x)),
        OrdTerm::Mu(m) => format!(
            "mu({} in L({}) . {})",
            m.var,
            render_term(&m.bound),
            crate::formula::render_formula(&m.body)
        ),
    }
}

pub fn render_reg(k: &RegTerm) -> String {
    match k {
        RegTerm::AlephSucc(p) => format!("W({}+1)", render_term(p)),
        RegTerm::TopI => "I".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::cmp_raw;
    use std::cmp::Ordering;

    #[test]
    fn sizes() {
        assert_eq!(Zero.size(), 1);
        assert_eq!(one().size(), 2);
        assert_eq!(psi(omega1(), Zero).size(), 4);
        assert_eq!(psi(RegTerm::TopI, Zero).size(), 3);
    }

    #[test]
    fn subterm_closure() {
        assert_eq!(subterms(&Zero), vec![Zero]);
        let t = pow(BigI);
        assert_eq!(subterms(&t), vec![t.clone(), BigI]);
        let t = psi(RegTerm::TopI, pow(Zero));
        assert_eq!(subterms(&t), vec![t.clone(), pow(Zero), Zero]);
    }

    #[test]
    fn normality_cases() {
        // parts not weakly decreasing
        assert!(!is_normal(&OrdTerm::Sum(vec![pow(Zero), pow(BigI)])));
        // φ0b is notated Pow(b)
        assert!(!is_normal(&phi(Zero, Zero)));
        assert!(is_normal(&psi(omega1(), Zero)));
        // ω^I = I: Pow of a strongly critical term is not normal
        assert!(!is_normal(&pow(BigI)));
        assert!(is_normal(&pow(Zero)));
        assert!(is_normal(&OrdTerm::Sum(vec![pow(BigI), pow(Zero)])) == false);
        assert!(is_normal(&OrdTerm::Sum(vec![BigI, pow(Zero)])));
        // ω_0 = ω is notated w^(w^(0))
        assert!(!is_normal(&aleph(Zero)));
        assert!(is_normal(&aleph(one())));
        // ω_{Ψ_I α} = Ψ_I α
        assert!(!is_normal(&aleph(psi(RegTerm::TopI, Zero))));
        // φ_a(0) = a for strongly critical a
        assert!(!is_normal(&phi(psi(RegTerm::TopI, Zero), Zero)));
        assert!(is_normal(&phi(one(), Zero)));
    }

    #[test]
    fn hereditary_normality() {
        let ts = [
            psi(omega1(), Zero),
            phi(one(), pow(one())),
            OrdTerm::Sum(vec![BigI, pow(Zero)]),
        ];
        for t in ts {
            if is_normal(&t) {
                for s in subterms(&t) {
                    assert!(is_normal(&s), "subterm {s:?} of normal {t:?}");
                }
            }
        }
    }

    #[test]
    fn successor_shapes() {
        assert_eq!(succ(Zero), one());
        assert_eq!(succ(one()), OrdTerm::Sum(vec![one(), one()]));
        assert_eq!(finite(3), OrdTerm::Sum(vec![one(), one(), one()]));
        assert_eq!(finite(3).pred_of_succ(), Some(finite(2)));
        assert_eq!(one().pred_of_succ(), Some(Zero));
        assert_eq!(pow(one()).pred_of_succ(), None);
    }

    #[test]
    fn reg_as_ord() {
        assert_eq!(omega1().as_ord(), aleph(one()));
        assert_eq!(RegTerm::TopI.as_ord(), BigI);
        assert_eq!(
            aleph_succ(one()).as_ord(),
            aleph(OrdTerm::Sum(vec![one(), one()]))
        );
    }

    #[test]
    fn cmp_smoke() {
        assert_eq!(cmp_raw(&Zero, &BigI), Ordering::Less);
    }
}
