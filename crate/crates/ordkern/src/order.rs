//! Decidable comparison of ordinal terms and the syntactic hull-membership
//! decision t ∈ H_{γ,n}(β), cross-validated by a brute-force stage enumerator.
//!
//! The comparison is structural. Principal terms are located by cardinal
//! segment: ω_a < Ψ_{ω_{a+1},n}α < F^{Σ1}-values over ω_{a+1} < ω_{a+1},
//! while Ψ_{I,n}-values and F^{Σn}-values are fixed points of a ↦ ω_a.
//! Same-κ Ψ comparison uses the hull-coefficient criterion; it is validated
//! wholesale against `hull_stages`.

use crate::arith;
use crate::term::{
    self, aleph_succ, fcn, is_normal, psi, succ, OrdTerm, OrdTerm::BigI, OrdTerm::Zero, RegTerm,
};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("non-normal term rejected: {0}")]
    NotNormal(String),
    #[error("mu constants are not linearly ordered; use rank intervals: {0}")]
    MuNotOrdered(String),
}

/// Interval [lo, hi) containing the L-rank of a constant. Degenerate
/// [t, t+1) for ordinary terms; [0, bound) for μ-witness constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankInterval {
    pub lo: OrdTerm,
    pub hi: OrdTerm,
}

pub fn contains_mu(t: &OrdTerm) -> bool {
    term::subterms(t).iter().any(|s| s.is_mu())
}

/// Validated total comparison on normal, μ-free terms.
pub fn cmp(s: &OrdTerm, t: &OrdTerm) -> Result<Ordering, OrderError> {
    for u in [s, t] {
        if contains_mu(u) {
            return Err(OrderError::MuNotOrdered(term::render_term(u)));
        }
        if !is_normal(u) {
            return Err(OrderError::NotNormal(term::render_term(u)));
        }
    }
    Ok(cmp_raw(s, t))
}

thread_local! {
    static CMP_CACHE: RefCell<HashMap<(OrdTerm, OrdTerm), Ordering>> =
        RefCell::new(HashMap::new());
    static HULL_CACHE: RefCell<HashMap<(OrdTerm, OrdTerm, OrdTerm), bool>> =
        RefCell::new(HashMap::new());
}

/// Total structural comparison. Unvalidated: callers guarantee normality where
/// it matters; on μ-constants it falls back to a fixed arbitrary order.
pub fn cmp_raw(s: &OrdTerm, t: &OrdTerm) -> Ordering {
    if s == t {
        return Ordering::Equal;
    }
    let key = (s.clone(), t.clone());
    if let Some(c) = CMP_CACHE.with(|c| c.borrow().get(&key).copied()) {
        return c;
    }
    let r = cmp_uncached(s, t);
    CMP_CACHE.with(|c| c.borrow_mut().insert(key, r));
    r
}

fn cmp_uncached(s: &OrdTerm, t: &OrdTerm) -> Ordering {
    match (s, t) {
        (Zero, Zero) => Ordering::Equal,
        (Zero, _) => Ordering::Less,
        (_, Zero) => Ordering::Greater,
        (OrdTerm::Mu(a), OrdTerm::Mu(b)) => {
            // arbitrary fixed tiebreak, not part of the validated order
            cmp_raw(&a.bound, &b.bound)
                .then_with(|| term::render_term(s).cmp(&term::render_term(t)))
        }
        (OrdTerm::Mu(m), _) => {
            if cmp_raw(&m.bound, t) != Ordering::Greater {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (_, OrdTerm::Mu(m)) => {
            if cmp_raw(&m.bound, s) != Ordering::Greater {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        (OrdTerm::Sum(ps), OrdTerm::Sum(qs)) => {
            for (p, q) in ps.iter().zip(qs.iter()) {
                match cmp_raw(p, q) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            ps.len().cmp(&qs.len())
        }
        (OrdTerm::Sum(ps), _) => match cmp_raw(&ps[0], t) {
            Ordering::Less => Ordering::Less,
            _ => Ordering::Greater,
        },
        (_, OrdTerm::Sum(qs)) => match cmp_raw(s, &qs[0]) {
            Ordering::Greater => Ordering::Greater,
            _ => Ordering::Less,
        },
        _ => cmp_principal(s, t),
    }
}

fn kind(t: &OrdTerm) -> u8 {
    match t {
        OrdTerm::Pow(_) => 0,
        OrdTerm::Phi(..) => 1,
        OrdTerm::Aleph(_) => 2,
        OrdTerm::Psi(RegTerm::AlephSucc(_), _) => 3,
        OrdTerm::Psi(RegTerm::TopI, _) => 4,
        OrdTerm::Fc1(..) => 5,
        OrdTerm::FcN(_) => 6,
        BigI => 7,
        _ => unreachable!("principal terms only"),
    }
}

fn cmp_principal(s: &OrdTerm, t: &OrdTerm) -> Ordering {
    // stray Fc1 over I behaves like FcN
    if let OrdTerm::Fc1(x, RegTerm::TopI) = s {
        return cmp_raw(&fcn((**x).clone()), t);
    }
    if let OrdTerm::Fc1(x, RegTerm::TopI) = t {
        return cmp_raw(s, &fcn((**x).clone()));
    }
    if kind(s) > kind(t) {
        return cmp_principal_ordered(t, s).reverse();
    }
    cmp_principal_ordered(s, t)
}

/// Comparison with kind(s) ≤ kind(t), both principal, no Mu, no TopI-Fc1.
fn cmp_principal_ordered(s: &OrdTerm, t: &OrdTerm) -> Ordering {
    use OrdTerm::*;
    match (s, t) {
        (Pow(a), Pow(b)) => cmp_raw(a, b),
        // ω^a against a fixed point of ω^·
        (Pow(a), q) => cmp_raw(a, q),

        (Phi(a, b), Phi(c, d)) => match cmp_raw(a, c) {
            Ordering::Equal => cmp_raw(b, d),
            Ordering::Less => cmp_raw(b, t),
            Ordering::Greater => cmp_raw(d, s).reverse(),
        },
        // φ(a,b) against a strongly critical q
        (Phi(a, b), q) => {
            let ca = cmp_raw(a, q);
            let cb = cmp_raw(b, q);
            match (ca, cb) {
                (Ordering::Less, Ordering::Less) => Ordering::Less,
                (Ordering::Less, Ordering::Equal) => Ordering::Equal,
                (Ordering::Equal, Ordering::Less) => {
                    if **b == Zero {
                        Ordering::Equal
                    } else {
                        Ordering::Greater
                    }
                }
                _ => Ordering::Greater,
            }
        }

        (Aleph(i), Aleph(j)) => cmp_raw(i, j),
        // ω_i against the segment (ω_p, ω_{p+1})
        (Aleph(i), Psi(RegTerm::AlephSucc(p), _)) | (Aleph(i), Fc1(_, RegTerm::AlephSucc(p))) => {
            if cmp_raw(i, p) != Ordering::Greater {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        // ω_i against an aleph fixed point v = ω_v
        (Aleph(i), v) => cmp_raw(i, v),

        (Psi(RegTerm::AlephSucc(p), a), Psi(RegTerm::AlephSucc(q), b)) => match cmp_raw(p, q) {
            Ordering::Less => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
            Ordering::Equal => same_psi_cmp(&RegTerm::AlephSucc(p.clone()), a, b),
        },
        // Ψ below ω_{p+1} against the F^{Σ1}-value over the same segment
        (Psi(RegTerm::AlephSucc(p), _), Fc1(x, RegTerm::AlephSucc(q))) => match cmp_raw(p, q) {
            Ordering::Less => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
            Ordering::Equal => {
                if cmp_raw(x, s) == Ordering::Less {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        },
        (Fc1(x, RegTerm::AlephSucc(p)), Fc1(y, RegTerm::AlephSucc(q))) => {
            match cmp_raw(p, q) {
                Ordering::Less => Ordering::Less,
                Ordering::Greater => Ordering::Greater,
                // same hull: F monotone in the collapse point
                Ordering::Equal => cmp_raw(x, y),
            }
        }
        // segment value against an aleph fixed point
        (Psi(RegTerm::AlephSucc(p), _), v) | (Fc1(_, RegTerm::AlephSucc(p)), v) => {
            if cmp_raw(v, p) != Ordering::Greater {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }

        (Psi(RegTerm::TopI, a), Psi(RegTerm::TopI, b)) => same_psi_cmp(&RegTerm::TopI, a, b),
        // aleph fixed point against a value inside the segment (ω_p, ω_{p+1})
        (Psi(RegTerm::TopI, _), Fc1(_, RegTerm::AlephSucc(p))) => {
            if cmp_raw(s, p) != Ordering::Greater {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        // F_{x}(I) < Ψ_I α iff x < Ψ_I α
        (Psi(RegTerm::TopI, _), FcN(x)) => {
            if cmp_raw(x, s) == Ordering::Less {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        (Psi(RegTerm::TopI, _), BigI) => Ordering::Less,

        (FcN(x), FcN(y)) => cmp_raw(x, y),
        (FcN(_), BigI) => Ordering::Less,

        (BigI, BigI) => Ordering::Equal,
        _ => unreachable!("kind ordering covers all pairs"),
    }
}

/// Same-κ collapse comparison: Ψκα < Ψκβ iff α < β and α ∈ H_{β,n}(Ψκβ),
/// with the dual clause for α > β.
fn same_psi_cmp(kappa: &RegTerm, a: &OrdTerm, b: &OrdTerm) -> Ordering {
    match cmp_raw(a, b) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less => {
            if in_hull_raw(a, b, &psi(kappa.clone(), b.clone())) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        Ordering::Greater => {
            if in_hull_raw(b, a, &psi(kappa.clone(), a.clone())) {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
    }
}

/// Is b a fixed point of φ_a? (For the Veblen normal form and `veblen`.)
pub fn phi_fixed_by(a: &OrdTerm, b: &OrdTerm) -> bool {
    match b {
        OrdTerm::Phi(a2, _) => cmp_raw(a2, a) == Ordering::Greater,
        _ => b.is_strongly_critical_shape() && cmp_raw(a, b) == Ordering::Less,
    }
}

/// Validated hull membership t ∈ H_{γ,n}(β) with no extra seeds.
pub fn in_hull(t: &OrdTerm, gamma: &OrdTerm, beta: &OrdTerm) -> Result<bool, OrderError> {
    for u in [t, gamma, beta] {
        if !is_normal(u) {
            return Err(OrderError::NotNormal(term::render_term(u)));
        }
    }
    Ok(in_hull_raw(t, gamma, beta))
}

pub fn in_hull_raw(t: &OrdTerm, gamma: &OrdTerm, beta: &OrdTerm) -> bool {
    let key = (t.clone(), gamma.clone(), beta.clone());
    if let Some(v) = HULL_CACHE.with(|c| c.borrow().get(&key).copied()) {
        return v;
    }
    let v = in_hull_seeded(t, gamma, beta, &[]);
    HULL_CACHE.with(|c| c.borrow_mut().insert(key, v));
    v
}

/// Hull membership with Θ-seeds: members of Θ count as generators of the hull.
pub fn in_hull_seeded(t: &OrdTerm, gamma: &OrdTerm, beta: &OrdTerm, seeds: &[OrdTerm]) -> bool {
    if seeds.contains(t) {
        return true;
    }
    match t {
        Zero | BigI => true,
        // conservative: a μ-constant is known to lie in L_bound only
        OrdTerm::Mu(m) => cmp_raw(&m.bound, beta) != Ordering::Greater,
        _ if cmp_raw(t, beta) == Ordering::Less => true,
        OrdTerm::Sum(ps) => ps.iter().all(|p| in_hull_seeded(p, gamma, beta, seeds)),
        OrdTerm::Pow(e) | OrdTerm::Aleph(e) | OrdTerm::FcN(e) => {
            in_hull_seeded(e, gamma, beta, seeds)
        }
        OrdTerm::Phi(a, b) => {
            in_hull_seeded(a, gamma, beta, seeds) && in_hull_seeded(b, gamma, beta, seeds)
        }
        OrdTerm::Psi(k, a) => {
            cmp_raw(a, gamma) == Ordering::Less
                && in_hull_seeded(a, gamma, beta, seeds)
                && reg_in_hull(k, gamma, beta, seeds)
        }
        OrdTerm::Fc1(x, k) => {
            in_hull_seeded(x, gamma, beta, seeds) && reg_in_hull(k, gamma, beta, seeds)
        }
    }
}

fn reg_in_hull(k: &RegTerm, gamma: &OrdTerm, beta: &OrdTerm, seeds: &[OrdTerm]) -> bool {
    match k {
        RegTerm::TopI => true,
        RegTerm::AlephSucc(p) => in_hull_seeded(p, gamma, beta, seeds),
    }
}

/// The normality condition admitting Ψκα as a term: α ∈ H_{α,n}(Ψκα).
pub fn psi_admissible(kappa: &RegTerm, alpha: &OrdTerm) -> bool {
    in_hull_raw(alpha, alpha, &psi(kappa.clone(), alpha.clone()))
}

/// Exact degenerate interval for ordinary terms, [0, bound) for μ-constants.
pub fn rank_interval(t: &OrdTerm) -> RankInterval {
    match t {
        OrdTerm::Mu(m) => RankInterval {
            lo: Zero,
            hi: m.bound.clone(),
        },
        _ => RankInterval {
            lo: t.clone(),
            hi: succ(t.clone()),
        },
    }
}

/// All normal μ-free terms of size ≤ size_cap, deterministically ordered.
pub fn enumerate_normal_terms(size_cap: usize) -> Vec<OrdTerm> {
    thread_local! {
        static ENUM_CACHE: RefCell<HashMap<usize, Vec<OrdTerm>>> = RefCell::new(HashMap::new());
    }
    if let Some(v) = ENUM_CACHE.with(|c| c.borrow().get(&size_cap).cloned()) {
        return v;
    }
    let v = enumerate_uncached(size_cap);
    ENUM_CACHE.with(|c| c.borrow_mut().insert(size_cap, v.clone()));
    v
}

fn enumerate_uncached(size_cap: usize) -> Vec<OrdTerm> {
    let mut by_size: Vec<Vec<OrdTerm>> = vec![Vec::new(); size_cap + 1];
    if size_cap >= 1 {
        by_size[1] = vec![Zero, BigI];
    }
    for n in 2..=size_cap {
        let mut out: Vec<OrdTerm> = Vec::new();
        let mut seen: HashSet<OrdTerm> = HashSet::new();
        let push = |t: OrdTerm, out: &mut Vec<OrdTerm>, seen: &mut HashSet<OrdTerm>| {
            if is_normal(&t) && seen.insert(t.clone()) {
                out.push(t);
            }
        };
        for e in &by_size[n - 1] {
            push(term::pow(e.clone()), &mut out, &mut seen);
            push(term::aleph(e.clone()), &mut out, &mut seen);
            push(fcn(e.clone()), &mut out, &mut seen);
        }
        // Phi(a,b): 1 + |a| + |b|
        for i in 1..n - 1 {
            let j = n - 1 - i;
            for a in &by_size[i] {
                for b in &by_size[j] {
                    push(term::phi(a.clone(), b.clone()), &mut out, &mut seen);
                }
            }
        }
        // Psi(AlephSucc(p), α) and Fc1(x, AlephSucc(p)): 2 + |p| + |arg|
        if n >= 4 {
            for i in 1..n - 2 {
                let j = n - 2 - i;
                for a in &by_size[i] {
                    for b in &by_size[j] {
                        push(
                            psi(aleph_succ(a.clone()), b.clone()),
                            &mut out,
                            &mut seen,
                        );
                        push(
                            term::fc1(b.clone(), aleph_succ(a.clone())),
                            &mut out,
                            &mut seen,
                        );
                    }
                }
            }
        }
        // Psi(TopI, α): 2 + |arg|
        if n >= 3 {
            for a in &by_size[n - 2] {
                push(psi(RegTerm::TopI, a.clone()), &mut out, &mut seen);
            }
        }
        // sums: weakly decreasing principal parts, total part size n-1, ≥ 2 parts
        let principals: Vec<Vec<&OrdTerm>> = by_size
            .iter()
            .map(|v| v.iter().filter(|t| t.is_principal_shape()).collect())
            .collect();
        let mut stack: Vec<OrdTerm> = Vec::new();
        gen_sums(n - 1, None, &principals, &mut stack, &mut |parts| {
            if parts.len() >= 2 {
                push(OrdTerm::Sum(parts.to_vec()), &mut out, &mut seen);
            }
        });
        by_size[n] = out;
    }
    let mut all: Vec<OrdTerm> = by_size.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        a.size()
            .cmp(&b.size())
            .then_with(|| term::render_term(a).cmp(&term::render_term(b)))
    });
    all
}

fn gen_sums(
    remaining: usize,
    max_part: Option<OrdTerm>,
    principals: &[Vec<&OrdTerm>],
    stack: &mut Vec<OrdTerm>,
    emit: &mut dyn FnMut(&[OrdTerm]),
) {
    if remaining == 0 {
        emit(stack);
        return;
    }
    for sz in 1..=remaining {
        if sz >= principals.len() {
            break;
        }
        for p in &principals[sz] {
            if let Some(mx) = &max_part {
                if cmp_raw(p, mx) == Ordering::Greater {
                    continue;
                }
            }
            stack.push((*p).clone());
            gen_sums(remaining - sz, Some((*p).clone()), principals, stack, emit);
            stack.pop();
        }
    }
}

/// Result of iterating the hull stage clauses.
#[derive(Debug, Clone)]
pub struct HullStages {
    pub terms: Vec<OrdTerm>,
    pub saturated: bool,
    pub depth_used: usize,
}

impl HullStages {
    pub fn contains(&self, t: &OrdTerm) -> bool {
        self.terms.contains(t)
    }
}

/// Literal iteration of the stage clauses: seed {0, I} ∪ {normal terms < β of
/// size ≤ size_cap}, close under +, ω^·, φ, ℵ, Ψ_{I,n}↾γ, Ψ_{κ,n}↾γ and the
/// collapse values F(I), keeping terms of size ≤ size_cap, for `depth` rounds
/// or until two consecutive stages agree.
pub fn hull_stages(
    gamma: &OrdTerm,
    beta: &OrdTerm,
    size_cap: usize,
    depth: usize,
) -> HullStages {
    let universe = enumerate_normal_terms(size_cap);
    let mut set: HashSet<OrdTerm> = HashSet::new();
    let mut order: Vec<OrdTerm> = Vec::new();
    let insert = |t: OrdTerm, set: &mut HashSet<OrdTerm>, order: &mut Vec<OrdTerm>| {
        if t.size() <= size_cap && set.insert(t.clone()) {
            order.push(t);
        }
    };
    insert(Zero, &mut set, &mut order);
    insert(BigI, &mut set, &mut order);
    for t in &universe {
        if cmp_raw(t, beta) == Ordering::Less {
            insert(t.clone(), &mut set, &mut order);
        }
    }
    let mut saturated = false;
    let mut depth_used = 0;
    let mut frontier: Vec<OrdTerm> = order.clone();
    for d in 0..depth {
        depth_used = d;
        let members: Vec<OrdTerm> = order.clone();
        let mut fresh: Vec<OrdTerm> = Vec::new();
        let emit = |t: OrdTerm, set: &mut HashSet<OrdTerm>, order: &mut Vec<OrdTerm>, fresh: &mut Vec<OrdTerm>| {
            if t.size() <= size_cap && is_normal(&t) && set.insert(t.clone()) {
                order.push(t.clone());
                fresh.push(t);
            }
        };
        // binary clauses: new × all, both sides
        for x in &frontier {
            for y in &members {
                for (l, r) in [(x, y), (y, x)] {
                    emit(arith::add(l, r), &mut set, &mut order, &mut fresh);
                    emit(arith::veblen(l, r), &mut set, &mut order, &mut fresh);
                }
            }
        }
        for x in &frontier {
            emit(arith::omega_pow(x), &mut set, &mut order, &mut fresh);
            if let Ok(a) = arith::aleph_norm(x) {
                emit(a, &mut set, &mut order, &mut fresh);
            }
            if cmp_raw(x, &BigI) == Ordering::Less {
                if let Ok(nr) = arith::next_regular(x) {
                    emit(nr.as_ord(), &mut set, &mut order, &mut fresh);
                }
            }
        }
        // collapses: Ψ_{I,n}(g) and Ψ_{κ,n}(g) for g ∈ H ∩ γ, κ = ω_{p+1} with p ∈ H
        let gs: Vec<OrdTerm> = members
            .iter()
            .filter(|g| cmp_raw(g, gamma) == Ordering::Less)
            .cloned()
            .collect();
        for g in &gs {
            emit(
                psi(RegTerm::TopI, g.clone()),
                &mut set,
                &mut order,
                &mut fresh,
            );
            for p in &members {
                emit(
                    psi(aleph_succ(p.clone()), g.clone()),
                    &mut set,
                    &mut order,
                    &mut fresh,
                );
            }
        }
        // Mostowski-collapse values at d = I
        for x in &members {
            match x {
                OrdTerm::Psi(RegTerm::TopI, _) => {
                    emit(fcn(x.clone()), &mut set, &mut order, &mut fresh)
                }
                OrdTerm::Psi(RegTerm::AlephSucc(p), _) => {
                    if set.contains(&**p) {
                        emit(
                            term::fc1(x.clone(), aleph_succ((**p).clone())),
                            &mut set,
                            &mut order,
                            &mut fresh,
                        );
                    }
                }
                _ => {}
            }
        }
        if fresh.is_empty() {
            saturated = true;
            depth_used = d;
            break;
        }
        // the collapse clauses consume the whole member set, so rerun them
        // against everything next round: frontier = fresh plus re-examined
        frontier = fresh;
    }
    order.sort_by(|a, b| {
        a.size()
            .cmp(&b.size())
            .then_with(|| term::render_term(a).cmp(&term::render_term(b)))
    });
    HullStages {
        terms: order,
        saturated,
        depth_used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{aleph, omega1, one, pow};

    fn om1() -> RegTerm {
        omega1()
    }

    #[test]
    fn cmp_basics() {
        assert_eq!(cmp(&Zero, &BigI).unwrap(), Ordering::Less);
        assert_eq!(cmp(&one(), &pow(one())).unwrap(), Ordering::Less);
        assert_eq!(
            cmp(&OrdTerm::Sum(vec![BigI, one()]), &BigI).unwrap(),
            Ordering::Greater
        );
        assert!(cmp(&pow(BigI), &BigI).is_err());
    }

    #[test]
    fn aleph_below_psi_interval() {
        // ω_a < Ψ_{ω_{a+1},n}α < ω_{a+1}
        let p = psi(om1(), BigI);
        assert_eq!(cmp(&aleph(one()), &p).unwrap(), Ordering::Greater);
        assert_eq!(cmp_raw(&aleph(one()), &p), Ordering::Greater);
        assert_eq!(cmp_raw(&pow(one()), &p), Ordering::Less); // ω = ω_0 < Ψ
        let w2 = aleph(term::finite(2));
        assert_eq!(cmp_raw(&p, &w2), Ordering::Less);
    }

    #[test]
    fn psi_monotone_same_kappa() {
        let a = psi(om1(), Zero);
        let b = psi(om1(), one());
        assert_eq!(cmp(&a, &b).unwrap(), Ordering::Less);
    }

    #[test]
    fn psi_below_kappa() {
        let k = om1();
        for al in [Zero, one(), BigI] {
            let t = psi(k.clone(), al);
            assert_eq!(cmp_raw(&t, &k.as_ord()), Ordering::Less);
        }
        assert_eq!(cmp_raw(&psi(RegTerm::TopI, Zero), &BigI), Ordering::Less);
    }

    #[test]
    fn fc1_between_x_and_kappa() {
        let x = psi(om1(), Zero);
        let f = term::fc1(x.clone(), om1());
        assert_eq!(cmp_raw(&x, &f), Ordering::Less);
        assert_eq!(cmp_raw(&f, &om1().as_ord()), Ordering::Less);
        // F_{x,κ}(I) < Ψ_{λ,n}b whenever x < Ψ_{λ,n}b
        let big = psi(om1(), one());
        assert_eq!(cmp_raw(&x, &big), Ordering::Less);
        assert_eq!(cmp_raw(&f, &big), Ordering::Less);
    }

    #[test]
    fn psi_topi_is_aleph_fixed() {
        let v = psi(RegTerm::TopI, Zero);
        // ω_a < Ψ_I α for every a below it
        assert_eq!(cmp_raw(&aleph(one()), &v), Ordering::Less);
        // and Ψ_I α < ω_{a} once a exceeds it
        let above = aleph(term::OrdTerm::Sum(vec![v.clone(), one()]));
        assert_eq!(cmp_raw(&v, &above), Ordering::Less);
    }

    #[test]
    fn in_hull_spec_examples() {
        // clause 1: H^0 ⊇ {0, I}
        assert!(in_hull(&Zero, &BigI, &Zero).unwrap());
        // Ψ_{I,n}γ ∈ H^{m+1} for γ = 0 < 1
        assert!(in_hull(&psi(RegTerm::TopI, Zero), &one(), &Zero).unwrap());
        // α = 1 ≮ γ = 1 blocks clause 3
        assert!(!in_hull(&psi(RegTerm::TopI, one()), &one(), &Zero).unwrap());
    }

    #[test]
    fn psi_admissible_cases() {
        assert!(psi_admissible(&om1(), &Zero));
        assert!(psi_admissible(&RegTerm::TopI, &BigI));
    }

    #[test]
    fn rank_intervals() {
        let ri = rank_interval(&Zero);
        assert_eq!(ri.lo, Zero);
        assert_eq!(ri.hi, one());
        let ri = rank_interval(&BigI);
        assert_eq!(ri.lo, BigI);
        assert_eq!(ri.hi, succ(BigI));
    }

    #[test]
    fn stages_base() {
        // H^0 with X = ∅ is {0, I}
        let st = hull_stages(&BigI, &Zero, 1, 0);
        assert_eq!(st.terms, vec![Zero, BigI]);
    }

    #[test]
    fn stages_monotone_in_depth() {
        let g = pow(one());
        let st1 = hull_stages(&g, &Zero, 4, 1);
        let st2 = hull_stages(&g, &Zero, 4, 2);
        for t in &st1.terms {
            assert!(st2.contains(t));
        }
    }

    #[test]
    fn oracle_agrees_with_in_hull_smoke() {
        let cap = 4;
        let terms = enumerate_normal_terms(cap);
        let gammas = [Zero, one(), BigI];
        let betas = [Zero, one()];
        for g in &gammas {
            for b in &betas {
                let st = hull_stages(g, b, cap, 16);
                assert!(st.saturated);
                for t in &terms {
                    assert_eq!(
                        in_hull_raw(t, g, b),
                        st.contains(t),
                        "t={} gamma={} beta={}",
                        term::render_term(t),
                        term::render_term(g),
                        term::render_term(b)
                    );
                }
            }
        }
    }
}
