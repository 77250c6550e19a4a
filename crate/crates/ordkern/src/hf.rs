//! Hereditarily finite sets: the evaluable fragment of L. Canonical <_L
//! well-order (rank first, then lexicographic on sorted element lists),
//! von Neumann rank as rk_L, truth evaluation of sentences, and μ-witnesses.

use crate::formula::{Bound, Const, Formula, Quant};
use crate::order::cmp_raw;
use crate::term::{self, OrdTerm, RegTerm};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("sentence is not evaluable: {0}")]
    NotEvaluable(String),
    #[error("free variable in sentence position: {0}")]
    FreeVariable(String),
}

/// A hereditarily finite set in canonical form: elements sorted by <_L,
/// duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HFSet {
    elems: Vec<HFSet>,
}

impl HFSet {
    pub fn empty() -> Self {
        HFSet { elems: Vec::new() }
    }

    /// Canonicalizes: sorts by <_L and removes duplicates.
    pub fn new(mut elems: Vec<HFSet>) -> Self {
        elems.sort_by(lorder);
        elems.dedup();
        HFSet { elems }
    }

    pub fn elems(&self) -> &[HFSet] {
        &self.elems
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.elems.binary_search_by(|e| lorder(e, x)).is_ok()
    }

    /// The von Neumann natural n.
    pub fn nat(n: usize) -> Self {
        let mut cur = HFSet::empty();
        for _ in 0..n {
            let mut elems = cur.elems.clone();
            elems.push(cur.clone());
            cur = HFSet::new(elems);
        }
        cur
    }

    /// Some(n) iff the set is the von Neumann natural n.
    pub fn as_nat(&self) -> Option<usize> {
        for (i, e) in self.elems.iter().enumerate() {
            if e.as_nat() != Some(i) {
                return None;
            }
        }
        Some(self.elems.len())
    }
}

/// Set-theoretic rank: 0 for ∅, 1 + max over elements otherwise.
pub fn vn_rank(a: &HFSet) -> usize {
    a.elems.iter().map(|e| vn_rank(e) + 1).max().unwrap_or(0)
}

/// The canonical well-order on HF constants: by rank, then lexicographically
/// on the (sorted) element lists.
pub fn lorder(a: &HFSet, b: &HFSet) -> Ordering {
    vn_rank(a).cmp(&vn_rank(b)).then_with(|| {
        for (x, y) in a.elems.iter().zip(b.elems.iter()) {
            match lorder(x, y) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        a.elems.len().cmp(&b.elems.len())
    })
}

pub fn render_hf(a: &HFSet) -> String {
    let inner: Vec<String> = a.elems.iter().map(render_hf).collect();
    format!("{{{}}}", inner.join(","))
}

/// All HF sets of rank ≤ cap, ascending in <_L. Rank caps above 3 are
/// rejected: the level V_5 already has 2^16 elements.
pub fn enumerate_hf(rank_cap: usize) -> Vec<HFSet> {
    let cap = rank_cap.min(3);
    let mut level: Vec<HFSet> = vec![HFSet::empty()];
    for _ in 0..cap {
        // powerset of the previous level
        let n = level.len();
        let mut next: Vec<HFSet> = Vec::with_capacity(1 << n);
        for mask in 0usize..(1 << n) {
            let elems: Vec<HFSet> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| level[i].clone())
                .collect();
            next.push(HFSet::new(elems));
        }
        next.sort_by(lorder);
        next.dedup();
        level = next;
    }
    level.sort_by(lorder);
    level
}

/// Semantic view of a constant for membership evaluation.
enum Sem {
    Fin(HFSet),
    Ord(OrdTerm),
    Lvl(OrdTerm),
    Mu(OrdTerm), // the bound; the witness itself is opaque
}

fn to_sem(c: &Const) -> Result<Sem, EvalError> {
    match c {
        Const::Hf(h) => Ok(Sem::Fin(h.clone())),
        Const::Var(v) => Err(EvalError::FreeVariable(v.clone())),
        Const::Ord(t) => match t {
            OrdTerm::Mu(m) => Ok(Sem::Mu(m.bound.clone())),
            _ => {
                if let Some(n) = finite_value(t) {
                    Ok(Sem::Fin(HFSet::nat(n)))
                } else {
                    Ok(Sem::Ord(t.clone()))
                }
            }
        },
        Const::Lvl(t) => {
            if let Some(n) = finite_value(t) {
                if n <= 4 {
                    // L_n = V_n for finite levels
                    let mut level: Vec<HFSet> = vec![];
                    for _ in 0..n {
                        level = powerset_of(&level);
                    }
                    Ok(Sem::Fin(HFSet::new(level)))
                } else {
                    Err(EvalError::NotEvaluable(format!(
                        "finite level L_{n} too large to enumerate"
                    )))
                }
            } else {
                Ok(Sem::Lvl(t.clone()))
            }
        }
    }
}

fn powerset_of(level: &[HFSet]) -> Vec<HFSet> {
    let n = level.len().max(0);
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0usize..(1 << n) {
        let elems: Vec<HFSet> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| level[i].clone())
            .collect();
        out.push(HFSet::new(elems));
    }
    out.sort_by(lorder);
    out.dedup();
    out
}

/// Some(n) iff the term is the finite ordinal n in normal form.
pub fn finite_value(t: &OrdTerm) -> Option<usize> {
    match t {
        OrdTerm::Zero => Some(0),
        _ if *t == term::one() => Some(1),
        OrdTerm::Sum(ps) => {
            if ps.iter().all(|p| *p == term::one()) {
                Some(ps.len())
            } else {
                None
            }
        }
        _ => None,
    }
}

fn sem_mem(a: &Const, b: &Const, whole: &Formula) -> Result<bool, EvalError> {
    // foundation: x ∈ x is false for every constant, evaluable or not
    if a == b {
        return Ok(false);
    }
    let sa = to_sem(a)?;
    let sb = to_sem(b)?;
    let nope = || EvalError::NotEvaluable(crate::formula::render_formula(whole));
    match (sa, sb) {
        (Sem::Fin(x), Sem::Fin(y)) => Ok(y.contains(&x)),
        (Sem::Fin(x), Sem::Ord(_)) => {
            // infinite ordinal: contains exactly the naturals among HF sets
            Ok(x.as_nat().is_some())
        }
        (Sem::Fin(_), Sem::Lvl(_)) => Ok(true), // rank < ω ≤ any symbolic level
        (Sem::Ord(s), Sem::Ord(t)) => Ok(cmp_raw(&s, &t) == Ordering::Less),
        (Sem::Ord(s), Sem::Lvl(t)) => Ok(cmp_raw(&s, &t) == Ordering::Less),
        (Sem::Ord(_), Sem::Fin(_)) => Ok(false),
        (Sem::Lvl(_), Sem::Fin(_)) => Ok(false),
        (Sem::Lvl(s), Sem::Ord(t)) | (Sem::Lvl(s), Sem::Lvl(t)) => {
            Ok(cmp_raw(&s, &t) == Ordering::Less)
        }
        (Sem::Mu(bound), Sem::Lvl(t)) => {
            if cmp_raw(&bound, &t) != Ordering::Greater {
                Ok(true)
            } else {
                Err(nope())
            }
        }
        // a μ-witness is known only up to its rank interval
        (Sem::Mu(_), _) | (_, Sem::Mu(_)) => Err(nope()),
    }
}

/// Is the term an uncountable regular < I (an ω_{p+1})?
pub fn is_regular_shape(t: &OrdTerm) -> bool {
    matches!(t, OrdTerm::Aleph(i) if i.pred_of_succ().is_some())
}

pub fn regular_of(t: &OrdTerm) -> Option<RegTerm> {
    match t {
        OrdTerm::Aleph(i) => i.pred_of_succ().map(term::aleph_succ),
        _ => None,
    }
}

/// Truth of P(a,b,c): a ∈ R, b = Ψ_{a,n}α admissible, c = F^{Σ1}_{b∪{a}}(I).
pub fn p3_true(a: &Const, b: &Const, c: &Const) -> bool {
    let (Const::Ord(a), Const::Ord(b), Const::Ord(c)) = (a, b, c) else {
        return false;
    };
    let Some(kappa) = regular_of(a) else {
        return false;
    };
    let OrdTerm::Psi(k2, alpha) = b else {
        return false;
    };
    if *k2 != kappa || !crate::order::psi_admissible(k2, alpha) {
        return false;
    }
    *c == term::fc1(b.clone(), kappa)
}

/// Truth of P_{I,n}(a): a = Ψ_{I,n}α admissible.
pub fn pi_true(a: &Const) -> bool {
    let Const::Ord(a) = a else { return false };
    matches!(a, OrdTerm::Psi(RegTerm::TopI, alpha)
        if crate::order::psi_admissible(&RegTerm::TopI, alpha))
}

const WITNESS_RANK_CAP: usize = 3;

/// Classical truth by finite enumeration. Symbolic level bounds are decided
/// only when an HF witness (∃) or counterexample (∀) settles them; otherwise
/// the sentence is reported non-evaluable, never guessed.
pub fn eval_sentence(f: &Formula) -> Result<bool, EvalError> {
    match f {
        Formula::Mem(a, b) => sem_mem(a, b, f),
        Formula::NotMem(a, b) => sem_mem(a, b, f).map(|v| !v),
        Formula::RegL(c) => Ok(matches!(c, Const::Ord(t) if is_regular_shape(t))),
        Formula::NotReg(c) => Ok(!matches!(c, Const::Ord(t) if is_regular_shape(t))),
        Formula::Pred3(a, b, c) => Ok(p3_true(a, b, c)),
        Formula::NotPred3(a, b, c) => Ok(!p3_true(a, b, c)),
        Formula::PredI(a) => Ok(pi_true(a)),
        Formula::NotPredI(a) => Ok(!pi_true(a)),
        Formula::And(a, b) => Ok(eval_sentence(a)? && eval_sentence(b)?),
        Formula::Or(a, b) => {
            // tolerate one non-evaluable side when the other settles it
            match (eval_sentence(a), eval_sentence(b)) {
                (Ok(x), Ok(y)) => Ok(x || y),
                (Ok(true), _) | (_, Ok(true)) => Ok(true),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        }
        Formula::Q(q, v, bound, body) => match bound {
            Bound::BVar(w) => Err(EvalError::FreeVariable(w.clone())),
            Bound::HfConst(h) => {
                for e in h.elems() {
                    let inst = crate::formula::subst_hf(body, v, e);
                    let val = eval_sentence(&inst)?;
                    match q {
                        Quant::Ex if val => return Ok(true),
                        Quant::All if !val => return Ok(false),
                        _ => {}
                    }
                }
                Ok(matches!(q, Quant::All))
            }
            Bound::Level(t) => {
                // search HF witnesses of rank below the level
                for e in enumerate_hf(WITNESS_RANK_CAP) {
                    if let Some(n) = finite_value(t) {
                        if vn_rank(&e) >= n {
                            continue;
                        }
                    }
                    let inst = crate::formula::subst_hf(body, v, &e);
                    if let Ok(val) = eval_sentence(&inst) {
                        match q {
                            Quant::Ex if val => return Ok(true),
                            Quant::All if !val => return Ok(false),
                            _ => {}
                        }
                    }
                }
                Err(EvalError::NotEvaluable(crate::formula::render_formula(f)))
            }
        },
    }
}

/// The <_L-least d ∈ b with θ[d] true, else ∅.
pub fn mu_witness(b: &HFSet, var: &str, theta: &Formula) -> Result<HFSet, EvalError> {
    for e in b.elems() {
        let inst = crate::formula::subst_hf(theta, var, e);
        if eval_sentence(&inst)? {
            return Ok(e.clone());
        }
    }
    Ok(HFSet::empty())
}

/// The <_L-least HF witness of rank < bound for an existential over a symbolic
/// level, when one is decidably present. `None` means "no HF witness found";
/// a symbolic witness may still exist.
pub fn find_hf_witness(
    level: &OrdTerm,
    var: &str,
    theta: &Formula,
) -> Option<HFSet> {
    for e in enumerate_hf(WITNESS_RANK_CAP) {
        if let Some(n) = finite_value(level) {
            if vn_rank(&e) >= n {
                continue;
            }
        }
        let inst = crate::formula::subst_hf(theta, var, &e);
        match eval_sentence(&inst) {
            Ok(true) => return Some(e),
            Ok(false) => continue,
            // an undecided smaller candidate blocks least-ness
            Err(_) => return None,
        }
    }
    None
}

pub fn parse_hf(src: &str) -> Result<HFSet, String> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let (set, used) = parse_hf_at(&chars, 0)?;
    if used != chars.len() {
        return Err(format!("trailing input at {used}"));
    }
    Ok(set)
}

fn parse_hf_at(chars: &[char], mut i: usize) -> Result<(HFSet, usize), String> {
    if chars.get(i) != Some(&'{') {
        return Err(format!("expected '{{' at {i}"));
    }
    i += 1;
    let mut elems = Vec::new();
    loop {
        match chars.get(i) {
            Some('}') => return Ok((HFSet::new(elems), i + 1)),
            Some('{') => {
                let (e, j) = parse_hf_at(chars, i)?;
                elems.push(e);
                i = j;
                if chars.get(i) == Some(&',') {
                    i += 1;
                }
            }
            other => return Err(format!("unexpected {other:?} at {i}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> HFSet {
        HFSet::empty()
    }
    fn s(v: Vec<HFSet>) -> HFSet {
        HFSet::new(v)
    }

    #[test]
    fn ranks() {
        assert_eq!(vn_rank(&e()), 0);
        assert_eq!(vn_rank(&s(vec![e()])), 1);
        assert_eq!(vn_rank(&s(vec![e(), s(vec![e()])])), 2);
    }

    #[test]
    fn lorder_examples() {
        assert_eq!(lorder(&e(), &s(vec![e()])), Ordering::Less);
        assert_eq!(lorder(&s(vec![e()]), &s(vec![e()])), Ordering::Equal);
        // {{∅}} vs {∅,{∅}}: both rank 2; first elements {∅} vs ∅
        let a = s(vec![s(vec![e()])]);
        let b = s(vec![e(), s(vec![e()])]);
        assert_eq!(lorder(&a, &b), Ordering::Greater);
    }

    #[test]
    fn element_rank_strictly_below() {
        for x in enumerate_hf(3).into_iter().take(40) {
            for el in x.elems() {
                assert!(vn_rank(el) < vn_rank(&x));
            }
        }
    }

    #[test]
    fn naturals() {
        assert_eq!(HFSet::nat(0), e());
        assert_eq!(HFSet::nat(2), s(vec![e(), s(vec![e()])]));
        assert_eq!(HFSet::nat(3).as_nat(), Some(3));
        assert_eq!(s(vec![s(vec![e()])]).as_nat(), None);
    }

    #[test]
    fn parse_and_render() {
        let t = parse_hf("{{},{{}}}").unwrap();
        assert_eq!(render_hf(&t), "{{},{{}}}");
        // canonicalization sorts by lorder
        let u = parse_hf("{{{}},{}}").unwrap();
        assert_eq!(render_hf(&u), "{{},{{}}}");
        assert_eq!(t, u);
    }

    #[test]
    fn enumeration_is_lorder_sorted() {
        let all = enumerate_hf(2);
        assert_eq!(all.len(), 4); // V_2 closed downward: ∅,{∅},{{∅}},{∅,{∅}}
        for w in all.windows(2) {
            assert_eq!(lorder(&w[0], &w[1]), Ordering::Less);
        }
    }
}
