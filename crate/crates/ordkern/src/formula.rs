//! The sentence language in negation normal form, its measures (k, qk, rk,
//! Σ/Π classes, Σ^{Σ_{n+1}}(λ)), the ⋁/⋀ decomposition assigned to sentences,
//! and the Mostowski collapse applied to formulas.
//!
//! Derived `Ord` on these types is structural and used only for container
//! keys; the ordinal order lives in the order engine.

use crate::arith;
use crate::hf::{self, HFSet};
use crate::order::{cmp_raw, rank_interval};
use crate::term::{self, MuWitness, OrdTerm, RegTerm};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("not a sentence: free variable {0}")]
    FreeVariable(String),
    #[error("variable bound cannot be instantiated with a symbolic constant: {0}")]
    SymbolicBound(String),
    #[error("sentence is not evaluable: {0}")]
    NotEvaluable(String),
    #[error("constant outside the collapse domain: {0}")]
    OutsideDomain(String),
    #[error("formula outside the collapse class: {0}")]
    OutsideClass(String),
    #[error("witness not in the decomposition index set: {0}")]
    BadWitness(String),
    #[error("decomposition undefined: {0}")]
    NoDecomposition(String),
}

/// A constant of the object language: a hereditarily finite set, an ordinal
/// term, a constructible level L_t, or a variable occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Hf(HFSet),
    Ord(OrdTerm),
    Lvl(OrdTerm),
    Var(String),
}

/// A quantifier bound: an HF constant, the symbolic level L_t (with
/// Level(BigI) for L_I = unbounded), or a bound variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    HfConst(HFSet),
    Level(OrdTerm),
    BVar(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    Ex,
    All,
}

/// Sentences in negation normal form; negation occurs only on literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Mem(Const, Const),
    NotMem(Const, Const),
    RegL(Const),
    NotReg(Const),
    Pred3(Const, Const, Const),
    NotPred3(Const, Const, Const),
    PredI(Const),
    NotPredI(Const),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Q(Quant, String, Bound, Box<Formula>),
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}
pub fn q(quant: Quant, var: &str, bound: Bound, body: Formula) -> Formula {
    Formula::Q(quant, var.to_string(), bound, Box::new(body))
}
pub fn ord_c(t: OrdTerm) -> Const {
    Const::Ord(t)
}
pub fn hf_c(h: HFSet) -> Const {
    Const::Hf(h)
}
pub fn var_c(v: &str) -> Const {
    Const::Var(v.to_string())
}

/// Involutive NNF negation.
pub fn neg(f: &Formula) -> Formula {
    match f {
        Formula::Mem(a, b) => Formula::NotMem(a.clone(), b.clone()),
        Formula::NotMem(a, b) => Formula::Mem(a.clone(), b.clone()),
        Formula::RegL(a) => Formula::NotReg(a.clone()),
        Formula::NotReg(a) => Formula::RegL(a.clone()),
        Formula::Pred3(a, b, c) => Formula::NotPred3(a.clone(), b.clone(), c.clone()),
        Formula::NotPred3(a, b, c) => Formula::Pred3(a.clone(), b.clone(), c.clone()),
        Formula::PredI(a) => Formula::NotPredI(a.clone()),
        Formula::NotPredI(a) => Formula::PredI(a.clone()),
        Formula::And(a, b) => Formula::Or(Box::new(neg(a)), Box::new(neg(b))),
        Formula::Or(a, b) => Formula::And(Box::new(neg(a)), Box::new(neg(b))),
        Formula::Q(Quant::Ex, v, bd, body) => {
            Formula::Q(Quant::All, v.clone(), bd.clone(), Box::new(neg(body)))
        }
        Formula::Q(Quant::All, v, bd, body) => {
            Formula::Q(Quant::Ex, v.clone(), bd.clone(), Box::new(neg(body)))
        }
    }
}

/// Substitution of a constant for the designated variable.
pub fn subst(f: &Formula, var: &str, c: &Const) -> Result<Formula, FormulaError> {
    let sc = |x: &Const| -> Const {
        match x {
            Const::Var(v) if v == var => c.clone(),
            other => other.clone(),
        }
    };
    Ok(match f {
        Formula::Mem(a, b) => Formula::Mem(sc(a), sc(b)),
        Formula::NotMem(a, b) => Formula::NotMem(sc(a), sc(b)),
        Formula::RegL(a) => Formula::RegL(sc(a)),
        Formula::NotReg(a) => Formula::NotReg(sc(a)),
        Formula::Pred3(a, b, cc) => Formula::Pred3(sc(a), sc(b), sc(cc)),
        Formula::NotPred3(a, b, cc) => Formula::NotPred3(sc(a), sc(b), sc(cc)),
        Formula::PredI(a) => Formula::PredI(sc(a)),
        Formula::NotPredI(a) => Formula::NotPredI(sc(a)),
        Formula::And(a, b) => and(subst(a, var, c)?, subst(b, var, c)?),
        Formula::Or(a, b) => or(subst(a, var, c)?, subst(b, var, c)?),
        Formula::Q(quant, v, bd, body) => {
            let bd = match bd {
                Bound::BVar(w) if w == var => match c {
                    Const::Hf(h) => Bound::HfConst(h.clone()),
                    other => {
                        return Err(FormulaError::SymbolicBound(render_const(other)))
                    }
                },
                other => other.clone(),
            };
            let body = if v == var {
                // shadowing: inner binder wins
                (**body).clone()
            } else {
                subst(body, var, c)?
            };
            Formula::Q(*quant, v.clone(), bd, Box::new(body))
        }
    })
}

/// Substitution with an HF constant; never fails.
pub fn subst_hf(f: &Formula, var: &str, h: &HFSet) -> Formula {
    subst(f, var, &Const::Hf(h.clone())).expect("HF substitution is total")
}

pub fn free_vars(f: &Formula) -> Vec<String> {
    fn go(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let cc = |x: &Const, bound: &Vec<String>, out: &mut Vec<String>| {
            if let Const::Var(v) = x {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match f {
            Formula::Mem(a, b) | Formula::NotMem(a, b) => {
                cc(a, bound, out);
                cc(b, bound, out);
            }
            Formula::RegL(a) | Formula::NotReg(a) | Formula::PredI(a) | Formula::NotPredI(a) => {
                cc(a, bound, out)
            }
            Formula::Pred3(a, b, c) | Formula::NotPred3(a, b, c) => {
                cc(a, bound, out);
                cc(b, bound, out);
                cc(c, bound, out);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Formula::Q(_, v, bd, body) => {
                if let Bound::BVar(w) = bd {
                    if !bound.contains(w) && !out.contains(w) {
                        out.push(w.clone());
                    }
                }
                bound.push(v.clone());
                go(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

pub fn is_sentence(f: &Formula) -> bool {
    free_vars(f).is_empty()
}

/// All constants occurring in the formula, bounds included, plus the zero
/// constant.
pub fn k_set(f: &Formula) -> Vec<Const> {
    let mut out = vec![Const::Ord(OrdTerm::Zero)];
    fn push(out: &mut Vec<Const>, c: Const) {
        if !matches!(c, Const::Var(_)) && !out.contains(&c) {
            out.push(c);
        }
    }
    fn go(f: &Formula, out: &mut Vec<Const>) {
        match f {
            Formula::Mem(a, b) | Formula::NotMem(a, b) => {
                push(out, a.clone());
                push(out, b.clone());
            }
            Formula::RegL(a) | Formula::NotReg(a) | Formula::PredI(a) | Formula::NotPredI(a) => {
                push(out, a.clone())
            }
            Formula::Pred3(a, b, c) | Formula::NotPred3(a, b, c) => {
                push(out, a.clone());
                push(out, b.clone());
                push(out, c.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::Q(_, _, bd, body) => {
                match bd {
                    Bound::HfConst(h) => push(out, Const::Hf(h.clone())),
                    Bound::Level(t) => push(out, Const::Lvl(t.clone())),
                    Bound::BVar(_) => {}
                }
                go(body, out);
            }
        }
    }
    fn push_var_filtered(out: &mut Vec<Const>) {
        out.retain(|c| !matches!(c, Const::Var(_)));
    }
    go(f, &mut out);
    push_var_filtered(&mut out);
    out
}

/// Quantifier bounds only, plus the zero constant.
pub fn qk_set(f: &Formula) -> Vec<Bound> {
    let mut out = vec![Bound::HfConst(HFSet::empty())];
    fn go(f: &Formula, out: &mut Vec<Bound>) {
        match f {
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::Q(_, _, bd, body) => {
                if !matches!(bd, Bound::BVar(_)) && !out.contains(bd) {
                    out.push(bd.clone());
                }
                go(body, out);
            }
            _ => {}
        }
    }
    go(f, &mut out);
    out
}

/// rk_L of a quantifier bound, as a term.
pub fn bound_rank(b: &Bound) -> Result<OrdTerm, FormulaError> {
    match b {
        Bound::HfConst(h) => Ok(term::finite(hf::vn_rank(h))),
        Bound::Level(t) => Ok(t.clone()),
        Bound::BVar(v) => Err(FormulaError::FreeVariable(v.clone())),
    }
}

/// The rank of a sentence: rk(a∈b)=0, rk(Reg)=rk(P)=rk(P_I)=1,
/// rk(A∧B)=max+1, rk(Qx∈a A) = max{ω·rk_L(a), rk(A(∅))+2}.
pub fn rk(f: &Formula) -> Result<OrdTerm, FormulaError> {
    Ok(match f {
        Formula::Mem(..) | Formula::NotMem(..) => OrdTerm::Zero,
        Formula::RegL(_)
        | Formula::NotReg(_)
        | Formula::Pred3(..)
        | Formula::NotPred3(..)
        | Formula::PredI(_)
        | Formula::NotPredI(_) => term::one(),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let ra = rk(a)?;
            let rb = rk(b)?;
            let m = if cmp_raw(&ra, &rb) == Ordering::Less { rb } else { ra };
            arith::add(&m, &term::one())
        }
        Formula::Q(_, v, bd, body) => {
            let alpha = bound_rank(bd)?;
            let wa = arith::omega_times(&alpha);
            let inst = subst_hf(body, v, &HFSet::empty());
            let rb = arith::add(&rk(&inst)?, &term::finite(2));
            if cmp_raw(&wa, &rb) == Ordering::Less {
                rb
            } else {
                wa
            }
        }
    })
}

/// Prenex classification over the unbounded (L_I) quantifier prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Delta0,
    Sigma(u32),
    Pi(u32),
    NotPrenex,
}

fn is_unbounded(bd: &Bound) -> bool {
    matches!(bd, Bound::Level(t) if *t == OrdTerm::BigI)
}

/// Bounded and P/Reg/P_I-free.
pub fn is_delta0(f: &Formula) -> bool {
    match f {
        Formula::Mem(..) | Formula::NotMem(..) => true,
        Formula::RegL(_)
        | Formula::NotReg(_)
        | Formula::Pred3(..)
        | Formula::NotPred3(..)
        | Formula::PredI(_)
        | Formula::NotPredI(_) => false,
        Formula::And(a, b) | Formula::Or(a, b) => is_delta0(a) && is_delta0(b),
        Formula::Q(_, _, bd, body) => !is_unbounded(bd) && is_delta0(body),
    }
}

/// Minimal prenex class: alternating blocks of unbounded quantifiers over a
/// Δ0 matrix, or NotPrenex.
pub fn sigma_pi_class(f: &Formula) -> Class {
    if is_delta0(f) {
        return Class::Delta0;
    }
    let mut cur = f;
    let mut blocks: Vec<Quant> = Vec::new();
    loop {
        match cur {
            Formula::Q(qq, _, bd, body) if is_unbounded(bd) => {
                if blocks.last() != Some(qq) {
                    blocks.push(*qq);
                }
                cur = body;
            }
            _ => break,
        }
    }
    if blocks.is_empty() || !is_delta0(cur) {
        return Class::NotPrenex;
    }
    let m = blocks.len() as u32;
    match blocks[0] {
        Quant::Ex => Class::Sigma(m),
        Quant::All => Class::Pi(m),
    }
}

/// A ∈ Σ_m, with Σ_k ∪ Π_k ⊆ Σ_{k+1} ∩ Π_{k+1} and Δ0 = Σ_0 = Π_0.
pub fn in_sigma(f: &Formula, m: u32) -> bool {
    match sigma_pi_class(f) {
        Class::Delta0 => true,
        Class::Sigma(k) => k <= m,
        Class::Pi(k) => k < m,
        Class::NotPrenex => false,
    }
}

pub fn in_pi(f: &Formula, m: u32) -> bool {
    match sigma_pi_class(f) {
        Class::Delta0 => true,
        Class::Pi(k) => k <= m,
        Class::Sigma(k) => k < m,
        Class::NotPrenex => false,
    }
}

pub fn in_sigma_or_pi(f: &Formula, m: u32) -> bool {
    in_sigma(f, m) || in_pi(f, m)
}

/// Membership in Σ^{Σ_{n+1}}(λ): Σ_{n+1}-sentences and literals are in; ∧,∨
/// propagate; a non-Δ0 bounded ∀ needs rk_L(d) < λ, a non-Δ0 bounded ∃ needs
/// rk_L(d) ≤ λ.
pub fn in_sigma_hat(f: &Formula, lambda: &OrdTerm, n: u32) -> Result<bool, FormulaError> {
    if in_sigma(f, n + 1) {
        return Ok(true);
    }
    Ok(match f {
        Formula::Mem(..)
        | Formula::NotMem(..)
        | Formula::RegL(_)
        | Formula::NotReg(_)
        | Formula::Pred3(..)
        | Formula::NotPred3(..)
        | Formula::PredI(_)
        | Formula::NotPredI(_) => true,
        Formula::And(a, b) | Formula::Or(a, b) => {
            in_sigma_hat(a, lambda, n)? && in_sigma_hat(b, lambda, n)?
        }
        Formula::Q(qq, v, bd, body) => {
            let inst = subst_hf(body, v, &HFSet::empty());
            if !in_sigma_hat(&inst, lambda, n)? {
                return Ok(false);
            }
            let rkd = bound_rank(bd)?;
            match qq {
                Quant::All => cmp_raw(&rkd, lambda) == Ordering::Less,
                Quant::Ex => cmp_raw(&rkd, lambda) != Ordering::Greater,
            }
        }
    })
}

/// A branch index ι of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    /// Branch of a binary connective or of the single-branch predicate clauses.
    Idx(usize),
    /// A set witness.
    Set(Const),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSpace {
    Finite(Vec<Witness>),
    Singleton(Witness),
    /// All elements of L_t: infinite, not enumerable.
    SymbolicLevel(OrdTerm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomp {
    Disj(WitnessSpace),
    Conj(WitnessSpace),
}

impl Decomp {
    pub fn space(&self) -> &WitnessSpace {
        match self {
            Decomp::Disj(s) | Decomp::Conj(s) => s,
        }
    }
    pub fn is_disj(&self) -> bool {
        matches!(self, Decomp::Disj(_))
    }
}

fn literal_decomp(f: &Formula) -> Result<Decomp, FormulaError> {
    let truth = hf::eval_sentence(f).map_err(|_| {
        FormulaError::NotEvaluable(render_formula(f))
    })?;
    Ok(if truth {
        Decomp::Conj(WitnessSpace::Finite(vec![]))
    } else {
        Decomp::Disj(WitnessSpace::Finite(vec![]))
    })
}

/// The membership literal "d ∈ b" of the μ-clause: a true literal d∉d when
/// b = L_I, the honest membership otherwise.
fn mu_mem_literal(d: &Const, bd: &Bound) -> Formula {
    match bd {
        Bound::HfConst(h) => Formula::Mem(d.clone(), Const::Hf(h.clone())),
        Bound::Level(t) if *t == OrdTerm::BigI => Formula::NotMem(d.clone(), d.clone()),
        Bound::Level(t) => Formula::Mem(d.clone(), Const::Lvl(t.clone())),
        Bound::BVar(_) => unreachable!("sentences only"),
    }
}

/// The μ-witness constant of a Σ_n-existential ∃z∈b θ: concrete for HF
/// bounds, concrete when an HF witness decidably settles a level bound,
/// symbolic otherwise.
fn mu_const(bd: &Bound, var: &str, theta: &Formula) -> Result<Const, FormulaError> {
    match bd {
        Bound::HfConst(h) => {
            let d = hf::mu_witness(h, var, theta)
                .map_err(|e| FormulaError::NotEvaluable(e.to_string()))?;
            Ok(Const::Hf(d))
        }
        Bound::Level(t) => {
            if let Some(h) = hf::find_hf_witness(t, var, theta) {
                return Ok(Const::Hf(h));
            }
            Ok(Const::Ord(OrdTerm::Mu(Box::new(MuWitness {
                bound: t.clone(),
                var: var.to_string(),
                body: theta.clone(),
            }))))
        }
        Bound::BVar(v) => Err(FormulaError::FreeVariable(v.clone())),
    }
}

/// The ⋁/⋀ assignment. Literals decompose by truth over the empty index set;
/// binary connectives over J = 2; Reg/P/P_I literals over a single true
/// branch when the predicate holds; Σ_n-existentials over the singleton
/// μ-witness; everything else over the elements of the bound.
pub fn decompose(f: &Formula, n: u32) -> Result<Decomp, FormulaError> {
    Ok(match f {
        Formula::Mem(..) | Formula::NotMem(..) => literal_decomp(f)?,
        Formula::RegL(c) => {
            if matches!(c, Const::Ord(t) if hf::is_regular_shape(t)) {
                Decomp::Disj(WitnessSpace::Finite(vec![Witness::Idx(0)]))
            } else {
                Decomp::Disj(WitnessSpace::Finite(vec![]))
            }
        }
        Formula::NotReg(c) => {
            if matches!(c, Const::Ord(t) if hf::is_regular_shape(t)) {
                Decomp::Conj(WitnessSpace::Finite(vec![Witness::Idx(0)]))
            } else {
                Decomp::Conj(WitnessSpace::Finite(vec![]))
            }
        }
        Formula::Pred3(a, b, c) => {
            if hf::p3_true(a, b, c) {
                Decomp::Disj(WitnessSpace::Finite(vec![Witness::Idx(0)]))
            } else {
                Decomp::Disj(WitnessSpace::Finite(vec![]))
            }
        }
        Formula::NotPred3(a, b, c) => {
            if hf::p3_true(a, b, c) {
                Decomp::Conj(WitnessSpace::Finite(vec![Witness::Idx(0)]))
            } else {
                Decomp::Conj(WitnessSpace::Finite(vec![]))
            }
        }
        Formula::PredI(a) => {
            if hf::pi_true(a) {
                Decomp::Disj(WitnessSpace::Finite(vec![Witness::Idx(0)]))
            } else {
                Decomp::Disj(WitnessSpace::Finite(vec![]))
            }
        }
        Formula::NotPredI(a) => {
            if hf::pi_true(a) {
                Decomp::Conj(WitnessSpace::Finite(vec![Witness::Idx(0)]))
            } else {
                Decomp::Conj(WitnessSpace::Finite(vec![]))
            }
        }
        Formula::Or(..) => {
            Decomp::Disj(WitnessSpace::Finite(vec![Witness::Idx(0), Witness::Idx(1)]))
        }
        Formula::And(..) => {
            Decomp::Conj(WitnessSpace::Finite(vec![Witness::Idx(0), Witness::Idx(1)]))
        }
        Formula::Q(Quant::Ex, v, bd, body) => {
            if in_sigma(f, n) {
                let d = mu_const(bd, v, body)?;
                Decomp::Disj(WitnessSpace::Singleton(Witness::Set(d)))
            } else {
                match bd {
                    Bound::HfConst(h) => Decomp::Disj(WitnessSpace::Finite(
                        h.elems()
                            .iter()
                            .map(|e| Witness::Set(Const::Hf(e.clone())))
                            .collect(),
                    )),
                    Bound::Level(t) => Decomp::Disj(WitnessSpace::SymbolicLevel(t.clone())),
                    Bound::BVar(w) => return Err(FormulaError::FreeVariable(w.clone())),
                }
            }
        }
        Formula::Q(Quant::All, v, bd, body) => {
            let dual = Formula::Q(Quant::Ex, v.clone(), bd.clone(), Box::new(neg(body)));
            if in_sigma(&dual, n) {
                let d = mu_const(bd, v, &neg(body))?;
                Decomp::Conj(WitnessSpace::Singleton(Witness::Set(d)))
            } else {
                match bd {
                    Bound::HfConst(h) => Decomp::Conj(WitnessSpace::Finite(
                        h.elems()
                            .iter()
                            .map(|e| Witness::Set(Const::Hf(e.clone())))
                            .collect(),
                    )),
                    Bound::Level(t) => Decomp::Conj(WitnessSpace::SymbolicLevel(t.clone())),
                    Bound::BVar(w) => return Err(FormulaError::FreeVariable(w.clone())),
                }
            }
        }
    })
}

/// The branch A_ι for a witness ι, validating ι ∈ J.
pub fn decomp_branch(f: &Formula, w: &Witness, n: u32) -> Result<Formula, FormulaError> {
    let d = decompose(f, n)?;
    let check_member = |space: &WitnessSpace| -> Result<(), FormulaError> {
        match space {
            WitnessSpace::Finite(ws) => {
                if ws.contains(w) {
                    Ok(())
                } else {
                    Err(FormulaError::BadWitness(format!("{w:?}")))
                }
            }
            WitnessSpace::Singleton(d) => {
                if d == w {
                    Ok(())
                } else {
                    Err(FormulaError::BadWitness(format!("{w:?}")))
                }
            }
            WitnessSpace::SymbolicLevel(t) => {
                let Witness::Set(c) = w else {
                    return Err(FormulaError::BadWitness(format!("{w:?}")));
                };
                let hi = match c {
                    Const::Hf(h) => term::finite(hf::vn_rank(h) + 1),
                    Const::Ord(u) => rank_interval(u).hi,
                    Const::Lvl(u) => arith::add(u, &term::one()),
                    Const::Var(v) => return Err(FormulaError::FreeVariable(v.clone())),
                };
                if cmp_raw(&hi, t) != Ordering::Greater {
                    Ok(())
                } else {
                    Err(FormulaError::BadWitness(format!(
                        "witness rank not below L_{}",
                        term::render_term(t)
                    )))
                }
            }
        }
    };
    check_member(d.space())?;
    match f {
        Formula::RegL(c) | Formula::PredI(c) => Ok(Formula::NotMem(c.clone(), c.clone())),
        Formula::NotReg(c) | Formula::NotPredI(c) => Ok(Formula::Mem(c.clone(), c.clone())),
        Formula::Pred3(a, ..) => Ok(Formula::NotMem(a.clone(), a.clone())),
        Formula::NotPred3(a, ..) => Ok(Formula::Mem(a.clone(), a.clone())),
        Formula::Or(a, b) | Formula::And(a, b) => match w {
            Witness::Idx(0) => Ok((**a).clone()),
            Witness::Idx(1) => Ok((**b).clone()),
            _ => Err(FormulaError::BadWitness(format!("{w:?}"))),
        },
        Formula::Q(Quant::Ex, v, bd, body) => {
            let Witness::Set(c) = w else {
                return Err(FormulaError::BadWitness(format!("{w:?}")));
            };
            if matches!(d.space(), WitnessSpace::Singleton(_)) {
                // μ-branch: d ∈ b ∧ θ[d]
                Ok(and(mu_mem_literal(c, bd), subst(body, v, c)?))
            } else {
                subst(body, v, c)
            }
        }
        Formula::Q(Quant::All, v, bd, body) => {
            let Witness::Set(c) = w else {
                return Err(FormulaError::BadWitness(format!("{w:?}")));
            };
            if matches!(d.space(), WitnessSpace::Singleton(_)) {
                // μ-branch: d ∈ b → ¬θ[d]
                Ok(or(neg(&mu_mem_literal(c, bd)), subst(body, v, c)?))
            } else {
                subst(body, v, c)
            }
        }
        _ => Err(FormulaError::NoDecomposition(render_formula(f))),
    }
}

/// All branches of an enumerable decomposition, for tests and the checker.
pub fn decomp_branches(f: &Formula, n: u32) -> Result<Vec<(Witness, Formula)>, FormulaError> {
    let d = decompose(f, n)?;
    let ws: Vec<Witness> = match d.space() {
        WitnessSpace::Finite(ws) => ws.clone(),
        WitnessSpace::Singleton(w) => vec![w.clone()],
        WitnessSpace::SymbolicLevel(t) => {
            return Err(FormulaError::NoDecomposition(format!(
                "index set L_{} is not enumerable",
                term::render_term(t)
            )))
        }
    };
    ws.into_iter()
        .map(|w| decomp_branch(f, &w, n).map(|b| (w, b)))
        .collect()
}

/// Which Mostowski collapse is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Collapse {
    /// F^{Σ1}_{x∪{κ}} with x = Ψ_{κ,n}β.
    Sigma1 { x: OrdTerm, kappa: RegTerm },
    /// F^{Σn}_{x} with x = Ψ_{I,n}β.
    SigmaN { x: OrdTerm },
}

impl Collapse {
    pub fn x(&self) -> &OrdTerm {
        match self {
            Collapse::Sigma1 { x, .. } | Collapse::SigmaN { x } => x,
        }
    }
    /// The image of I: the collapse value term.
    pub fn value(&self) -> OrdTerm {
        match self {
            Collapse::Sigma1 { x, kappa } => term::fc1(x.clone(), kappa.clone()),
            Collapse::SigmaN { x } => term::fcn(x.clone()),
        }
    }
    fn kappa_ord(&self) -> OrdTerm {
        match self {
            Collapse::Sigma1 { kappa, .. } => kappa.as_ord(),
            Collapse::SigmaN { .. } => OrdTerm::BigI,
        }
    }
    /// Class bound for dom(F): Σ1∪Π1 for the regular collapse, Σn∪Πn at I.
    pub fn class_level(&self, n: u32) -> u32 {
        match self {
            Collapse::Sigma1 { .. } => 1,
            Collapse::SigmaN { .. } => n,
        }
    }
}

/// Syntactic domain check for a single ordinal term: below x, equal to κ,
/// equal to I, or built by +/ω^/φ from such.
pub fn term_in_dom(t: &OrdTerm, fc: &Collapse) -> bool {
    if cmp_raw(t, fc.x()) == Ordering::Less {
        return true;
    }
    if *t == fc.kappa_ord() || *t == OrdTerm::BigI {
        return true;
    }
    match t {
        OrdTerm::Sum(ps) => ps.iter().all(|p| term_in_dom(p, fc)),
        OrdTerm::Pow(e) => term_in_dom(e, fc),
        OrdTerm::Phi(a, b) => term_in_dom(a, fc) && term_in_dom(b, fc),
        OrdTerm::Mu(m) => term_in_dom(&m.bound, fc) && formula_in_dom_consts(&m.body, fc),
        _ => false,
    }
}

fn const_in_dom(c: &Const, fc: &Collapse) -> bool {
    match c {
        Const::Hf(_) => true,
        Const::Var(_) => true,
        Const::Ord(t) => term_in_dom(t, fc),
        Const::Lvl(t) => term_in_dom(t, fc),
    }
}

fn formula_in_dom_consts(f: &Formula, fc: &Collapse) -> bool {
    k_set(f).iter().all(|c| const_in_dom(c, fc))
}

/// A ∈ dom(F): the right Σ/Π class and every constant in the hull fragment.
pub fn in_dom(f: &Formula, fc: &Collapse, n: u32) -> bool {
    in_sigma_or_pi(f, fc.class_level(n)) && formula_in_dom_consts(f, fc)
}

fn map_term(t: &OrdTerm, fc: &Collapse) -> Result<OrdTerm, FormulaError> {
    if cmp_raw(t, fc.x()) == Ordering::Less {
        return Ok(t.clone());
    }
    if *t == fc.kappa_ord() {
        return Ok(fc.x().clone());
    }
    if *t == OrdTerm::BigI {
        return Ok(fc.value());
    }
    match t {
        OrdTerm::Sum(ps) => {
            let mut acc = OrdTerm::Zero;
            for p in ps {
                let mp = map_term(p, fc)?;
                acc = arith::add(&acc, &mp);
            }
            Ok(acc)
        }
        OrdTerm::Pow(e) => Ok(arith::omega_pow(&map_term(e, fc)?)),
        OrdTerm::Phi(a, b) => Ok(arith::veblen(&map_term(a, fc)?, &map_term(b, fc)?)),
        OrdTerm::Mu(m) => Ok(OrdTerm::Mu(Box::new(MuWitness {
            bound: map_term(&m.bound, fc)?,
            var: m.var.clone(),
            body: map_formula(&m.body, fc)?,
        }))),
        _ => Err(FormulaError::OutsideDomain(term::render_term(t))),
    }
}

fn map_const(c: &Const, fc: &Collapse) -> Result<Const, FormulaError> {
    Ok(match c {
        Const::Hf(_) | Const::Var(_) => c.clone(),
        Const::Ord(t) => Const::Ord(map_term(t, fc)?),
        Const::Lvl(t) => Const::Lvl(map_term(t, fc)?),
    })
}

fn map_formula(f: &Formula, fc: &Collapse) -> Result<Formula, FormulaError> {
    Ok(match f {
        Formula::Mem(a, b) => Formula::Mem(map_const(a, fc)?, map_const(b, fc)?),
        Formula::NotMem(a, b) => Formula::NotMem(map_const(a, fc)?, map_const(b, fc)?),
        Formula::RegL(a) => Formula::RegL(map_const(a, fc)?),
        Formula::NotReg(a) => Formula::NotReg(map_const(a, fc)?),
        Formula::Pred3(a, b, c) => {
            Formula::Pred3(map_const(a, fc)?, map_const(b, fc)?, map_const(c, fc)?)
        }
        Formula::NotPred3(a, b, c) => {
            Formula::NotPred3(map_const(a, fc)?, map_const(b, fc)?, map_const(c, fc)?)
        }
        Formula::PredI(a) => Formula::PredI(map_const(a, fc)?),
        Formula::NotPredI(a) => Formula::NotPredI(map_const(a, fc)?),
        Formula::And(a, b) => and(map_formula(a, fc)?, map_formula(b, fc)?),
        Formula::Or(a, b) => or(map_formula(a, fc)?, map_formula(b, fc)?),
        Formula::Q(qq, v, bd, body) => {
            let bd = match bd {
                Bound::HfConst(_) | Bound::BVar(_) => bd.clone(),
                Bound::Level(t) => Bound::Level(map_term(t, fc)?),
            };
            Formula::Q(*qq, v.clone(), bd, Box::new(map_formula(body, fc)?))
        }
    })
}

/// F"A: replaces every ordinal constant by its collapse image; unbounded
/// quantifiers become bounded by the collapse value level.
pub fn mostowski_apply(f: &Formula, fc: &Collapse, n: u32) -> Result<Formula, FormulaError> {
    if !in_sigma_or_pi(f, fc.class_level(n)) {
        return Err(FormulaError::OutsideClass(render_formula(f)));
    }
    if !formula_in_dom_consts(f, fc) {
        return Err(FormulaError::OutsideDomain(render_formula(f)));
    }
    map_formula(f, fc)
}

/// A finite set of sentences with structural set semantics.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sequent(pub BTreeSet<Formula>);

impl Sequent {
    pub fn new() -> Self {
        Sequent(BTreeSet::new())
    }
    pub fn from_vec(v: Vec<Formula>) -> Self {
        Sequent(v.into_iter().collect())
    }
    pub fn singleton(f: Formula) -> Self {
        Sequent::from_vec(vec![f])
    }
    pub fn insert(&mut self, f: Formula) {
        self.0.insert(f);
    }
    pub fn with(&self, f: Formula) -> Self {
        let mut s = self.clone();
        s.insert(f);
        s
    }
    pub fn union(&self, other: &Sequent) -> Self {
        Sequent(self.0.union(&other.0).cloned().collect())
    }
    pub fn without(&self, f: &Formula) -> Self {
        let mut s = self.clone();
        s.0.remove(f);
        s
    }
    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }
    pub fn is_subset(&self, other: &Sequent) -> bool {
        self.0.is_subset(&other.0)
    }
    pub fn k_set(&self) -> Vec<Const> {
        let mut out = Vec::new();
        for f in self.iter() {
            for c in k_set(f) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
}

pub fn render_const(c: &Const) -> String {
    match c {
        Const::Hf(h) => hf::render_hf(h),
        Const::Ord(t) => term::render_term(t),
        Const::Lvl(t) => format!("L({})", term::render_term(t)),
        Const::Var(v) => v.clone(),
    }
}

pub fn render_bound(b: &Bound) -> String {
    match b {
        Bound::HfConst(h) => hf::render_hf(h),
        Bound::Level(t) => format!("L({})", term::render_term(t)),
        Bound::BVar(v) => v.clone(),
    }
}

pub fn render_formula(f: &Formula) -> String {
    match f {
        Formula::Mem(a, b) => format!("mem({},{})", render_const(a), render_const(b)),
        Formula::NotMem(a, b) => format!("not(mem({},{}))", render_const(a), render_const(b)),
        Formula::RegL(a) => format!("reg({})", render_const(a)),
        Formula::NotReg(a) => format!("not(reg({}))", render_const(a)),
        Formula::Pred3(a, b, c) => format!(
            "P({},{},{})",
            render_const(a),
            render_const(b),
            render_const(c)
        ),
        Formula::NotPred3(a, b, c) => format!(
            "not(P({},{},{}))",
            render_const(a),
            render_const(b),
            render_const(c)
        ),
        Formula::PredI(a) => format!("PI({})", render_const(a)),
        Formula::NotPredI(a) => format!("not(PI({}))", render_const(a)),
        Formula::And(a, b) => format!("and({},{})", render_formula(a), render_formula(b)),
        Formula::Or(a, b) => format!("or({},{})", render_formula(a), render_formula(b)),
        Formula::Q(Quant::Ex, v, bd, body) => {
            format!("ex {} in {} . {}", v, render_bound(bd), render_formula(body))
        }
        Formula::Q(Quant::All, v, bd, body) => {
            format!("all {} in {} . {}", v, render_bound(bd), render_formula(body))
        }
    }
}

/// The (P_λ) axiom formula ∃x∈L_λ ∃y∈L_λ (α < x ∧ P(λ,x,y)).
pub fn p_axiom(lambda: &RegTerm, alpha: &OrdTerm) -> Formula {
    let lam = lambda.as_ord();
    q(
        Quant::Ex,
        "x",
        Bound::Level(lam.clone()),
        q(
            Quant::Ex,
            "y",
            Bound::Level(lam.clone()),
            and(
                Formula::Mem(ord_c(alpha.clone()), var_c("x")),
                Formula::Pred3(ord_c(lam), var_c("x"), var_c("y")),
            ),
        ),
    )
}

/// The (P_{I,n}) axiom formula ∃x∈L_I (α < x ∧ P_{I,n}(x)).
pub fn pi_axiom(alpha: &OrdTerm) -> Formula {
    q(
        Quant::Ex,
        "x",
        Bound::Level(OrdTerm::BigI),
        and(
            Formula::Mem(ord_c(alpha.clone()), var_c("x")),
            Formula::PredI(var_c("x")),
        ),
    )
}

/// Is the sentence one of the excluded P-axiom existential shapes?
pub fn is_p_axiom_shape(f: &Formula) -> bool {
    p_axiom_parts(f).is_some() || pi_axiom_parts(f).is_some()
}

/// If f = ∃x∈L_λ ∃y∈L_λ (α<x ∧ P(λ,x,y)), returns (λ-term, α).
pub fn p_axiom_parts(f: &Formula) -> Option<(OrdTerm, OrdTerm)> {
    let Formula::Q(Quant::Ex, x, Bound::Level(l1), body) = f else {
        return None;
    };
    let Formula::Q(Quant::Ex, y, Bound::Level(l2), body2) = &**body else {
        return None;
    };
    if l1 != l2 || *l1 == OrdTerm::BigI {
        return None;
    }
    let Formula::And(m, p) = &**body2 else {
        return None;
    };
    let Formula::Mem(Const::Ord(alpha), Const::Var(vx)) = &**m else {
        return None;
    };
    let Formula::Pred3(Const::Ord(l3), Const::Var(px), Const::Var(py)) = &**p else {
        return None;
    };
    if vx == x && px == x && py == y && l3 == l1 {
        Some((l1.clone(), alpha.clone()))
    } else {
        None
    }
}

/// If f = ∃x∈L_I (α<x ∧ P_{I,n}(x)), returns α.
pub fn pi_axiom_parts(f: &Formula) -> Option<OrdTerm> {
    let Formula::Q(Quant::Ex, x, Bound::Level(l), body) = f else {
        return None;
    };
    if *l != OrdTerm::BigI {
        return None;
    }
    let Formula::And(m, p) = &**body else {
        return None;
    };
    let Formula::Mem(Const::Ord(alpha), Const::Var(vx)) = &**m else {
        return None;
    };
    let Formula::PredI(Const::Var(px)) = &**p else {
        return None;
    };
    if vx == x && px == x {
        Some(alpha.clone())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{aleph, omega1, one, psi, BigI, Zero};

    fn empty() -> HFSet {
        HFSet::empty()
    }
    fn sing() -> HFSet {
        HFSet::new(vec![empty()])
    }

    #[test]
    fn neg_involutive() {
        let f = q(
            Quant::All,
            "x",
            Bound::HfConst(sing()),
            or(
                Formula::Mem(var_c("x"), hf_c(sing())),
                Formula::NotReg(ord_c(BigI)),
            ),
        );
        assert_eq!(neg(&neg(&f)), f);
        assert_eq!(
            neg(&Formula::Mem(hf_c(empty()), hf_c(sing()))),
            Formula::NotMem(hf_c(empty()), hf_c(sing()))
        );
    }

    #[test]
    fn k_and_qk() {
        let f = Formula::Mem(hf_c(empty()), hf_c(sing()));
        let k = k_set(&f);
        assert!(k.contains(&Const::Ord(Zero)));
        assert!(k.contains(&Const::Hf(empty())));
        assert!(k.contains(&Const::Hf(sing())));
        assert_eq!(k.len(), 3);
        assert_eq!(qk_set(&f), vec![Bound::HfConst(empty())]);

        let g = q(
            Quant::Ex,
            "x",
            Bound::Level(BigI),
            Formula::Mem(var_c("x"), hf_c(sing())),
        );
        let k = k_set(&g);
        assert!(k.contains(&Const::Lvl(BigI)));
        assert!(k.contains(&Const::Hf(sing())));
        assert!(qk_set(&g).contains(&Bound::Level(BigI)));

        let r = Formula::RegL(ord_c(omega1().as_ord()));
        let k = k_set(&r);
        assert!(k.contains(&Const::Ord(Zero)));
        assert!(k.contains(&Const::Ord(omega1().as_ord())));
    }

    #[test]
    fn rk_clauses() {
        assert_eq!(
            rk(&Formula::Mem(hf_c(empty()), hf_c(sing()))).unwrap(),
            Zero
        );
        assert_eq!(rk(&Formula::RegL(ord_c(aleph(one())))).unwrap(), one());
        // rk(∃x∈L_I (x∈∅)) = max{ω·I, 0+2} = I
        let f = q(
            Quant::Ex,
            "x",
            Bound::Level(BigI),
            Formula::Mem(var_c("x"), hf_c(empty())),
        );
        assert_eq!(rk(&f).unwrap(), BigI);
    }

    #[test]
    fn classes() {
        assert_eq!(
            sigma_pi_class(&Formula::Mem(hf_c(empty()), hf_c(sing()))),
            Class::Delta0
        );
        let f = q(
            Quant::Ex,
            "x",
            Bound::Level(BigI),
            Formula::Mem(var_c("x"), hf_c(empty())),
        );
        assert_eq!(sigma_pi_class(&f), Class::Sigma(1));
        assert_eq!(
            sigma_pi_class(&Formula::RegL(ord_c(aleph(one())))),
            Class::NotPrenex
        );
        assert!(in_sigma(&f, 2));
        assert!(!in_pi(&f, 1));
        assert!(in_pi(&f, 2));
    }

    #[test]
    fn sigma_hat_clauses() {
        let lam = aleph(one());
        // Σ_{n+1}-sentence is in
        let f = q(
            Quant::Ex,
            "x",
            Bound::Level(BigI),
            Formula::Mem(var_c("x"), hf_c(empty())),
        );
        assert!(in_sigma_hat(&f, &lam, 2).unwrap());
        // ∀ with bound exactly λ fails the strict clause
        let g = q(
            Quant::All,
            "x",
            Bound::Level(lam.clone()),
            q(
                Quant::Ex,
                "y",
                Bound::Level(BigI),
                Formula::Mem(var_c("y"), var_c("x")),
            ),
        );
        assert!(!in_sigma_hat(&g, &lam, 2).unwrap());
        // ∃ with bound exactly λ passes the lax clause
        let h = q(
            Quant::Ex,
            "x",
            Bound::Level(lam.clone()),
            q(
                Quant::Ex,
                "y",
                Bound::Level(BigI),
                Formula::Mem(var_c("y"), var_c("x")),
            ),
        );
        assert!(in_sigma_hat(&h, &lam, 2).unwrap());
    }

    #[test]
    fn decompose_connectives() {
        let lit = Formula::Mem(hf_c(empty()), hf_c(sing()));
        let f = or(lit.clone(), lit.clone());
        let d = decompose(&f, 2).unwrap();
        assert!(d.is_disj());
        assert_eq!(
            d.space(),
            &WitnessSpace::Finite(vec![Witness::Idx(0), Witness::Idx(1)])
        );
        assert_eq!(decomp_branch(&f, &Witness::Idx(0), 2).unwrap(), lit);
    }

    #[test]
    fn decompose_reg() {
        let f = Formula::RegL(ord_c(aleph(one())));
        let d = decompose(&f, 2).unwrap();
        assert_eq!(
            d.space(),
            &WitnessSpace::Finite(vec![Witness::Idx(0)])
        );
        let b = decomp_branch(&f, &Witness::Idx(0), 2).unwrap();
        assert!(crate::hf::eval_sentence(&b).unwrap());
        // Ψ-values are not regular
        let g = Formula::RegL(ord_c(psi(omega1(), Zero)));
        assert_eq!(decompose(&g, 2).unwrap().space(), &WitnessSpace::Finite(vec![]));
    }

    #[test]
    fn decompose_mu_over_hf() {
        let b = HFSet::new(vec![empty(), sing()]);
        // ∃z∈b (z = {∅}) rendered as z ∈ {{∅}} … use mem(z, {{{}}}) shape:
        // the matrix z ∈ {{∅}} holds exactly for z = {∅}
        let outer = HFSet::new(vec![sing()]);
        let f = q(
            Quant::Ex,
            "z",
            Bound::HfConst(b),
            Formula::Mem(var_c("z"), hf_c(outer)),
        );
        let d = decompose(&f, 2).unwrap();
        let WitnessSpace::Singleton(Witness::Set(Const::Hf(w))) = d.space() else {
            panic!("expected singleton μ-witness, got {d:?}");
        };
        assert_eq!(*w, sing());
        // branch is d∈b ∧ θ[d], and it is true
        let br = decomp_branch(&f, &Witness::Set(Const::Hf(w.clone())), 2).unwrap();
        assert!(crate::hf::eval_sentence(&br).unwrap());
    }

    #[test]
    fn mu_default_is_empty_set() {
        // b = {∅}, θ(z) := z ∈ z has no witness: default 0
        let b = sing();
        let f = q(
            Quant::Ex,
            "z",
            Bound::HfConst(b),
            Formula::Mem(var_c("z"), var_c("z")),
        );
        let d = decompose(&f, 2).unwrap();
        let WitnessSpace::Singleton(Witness::Set(Const::Hf(w))) = d.space() else {
            panic!("expected singleton");
        };
        assert_eq!(*w, empty());
    }

    #[test]
    fn rank_drops_on_branches() {
        let b = HFSet::new(vec![empty(), sing()]);
        let f = q(
            Quant::All,
            "z",
            Bound::HfConst(b),
            Formula::Mem(var_c("z"), hf_c(HFSet::new(vec![empty(), sing()]))),
        );
        let rf = rk(&f).unwrap();
        for (_, br) in decomp_branches(&f, 2).unwrap() {
            let rb = rk(&br).unwrap();
            assert_eq!(cmp_raw(&rb, &rf), Ordering::Less, "{br:?}");
        }
    }

    #[test]
    fn mostowski_roundtrip_identity_below_x() {
        let x = psi(omega1(), Zero);
        let fc = Collapse::Sigma1 {
            x: x.clone(),
            kappa: omega1(),
        };
        // constant below x fixed
        assert_eq!(map_term(&Zero, &fc).unwrap(), Zero);
        // κ ↦ x
        assert_eq!(map_term(&omega1().as_ord(), &fc).unwrap(), x);
        // I ↦ F(I)
        assert_eq!(map_term(&BigI, &fc).unwrap(), term::fc1(x.clone(), omega1()));
        // L_I bound becomes the collapse-value level
        let f = q(
            Quant::Ex,
            "z",
            Bound::Level(BigI),
            Formula::Mem(var_c("z"), hf_c(empty())),
        );
        let g = mostowski_apply(&f, &fc, 2).unwrap();
        let Formula::Q(Quant::Ex, _, Bound::Level(l), _) = &g else {
            panic!()
        };
        assert_eq!(*l, term::fc1(x, omega1()));
    }

    #[test]
    fn p_axiom_shape_roundtrip() {
        let f = p_axiom(&omega1(), &Zero);
        assert!(is_p_axiom_shape(&f));
        let (l, a) = p_axiom_parts(&f).unwrap();
        assert_eq!(l, omega1().as_ord());
        assert_eq!(a, Zero);
        let g = pi_axiom(&one());
        assert_eq!(pi_axiom_parts(&g).unwrap(), one());
    }
}
