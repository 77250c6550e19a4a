//! Finite operator-controlled derivation trees and the checker for the
//! relation (H_{γ,n}[Θ], κ, n) ⊢^a_b Γ with all side conditions.
//!
//! Operators are represented by their index (γ, Θ), never by extension; hull
//! questions route through the order engine with Θ as extra seeds. The cut
//! rank and κ are constant through every rule, the bound strictly decreases
//! from conclusion to premises.

use crate::formula::{
    self, decomp_branch, decompose, Collapse, Const, Decomp, Formula, Sequent, Witness,
    WitnessSpace,
};
use crate::hf::{self, HFSet};
use crate::order::{cmp_raw, contains_mu, in_hull_seeded, rank_interval};
use crate::parse;
use crate::term::{self, OrdTerm, RegTerm};
use std::cmp::Ordering;
use thiserror::Error;

/// An element of the control Θ: an ordinal term (possibly a μ-constant) or an
/// HF set. HF members are inert for ordinal hull queries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ThetaElem {
    Ord(OrdTerm),
    Hf(HFSet),
}

/// The control H_{γ,n}[Θ].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    pub gamma: OrdTerm,
    pub theta: Vec<ThetaElem>,
}

impl Operator {
    pub fn new(gamma: OrdTerm) -> Self {
        Operator {
            gamma,
            theta: Vec::new(),
        }
    }
    pub fn with_theta(gamma: OrdTerm, mut theta: Vec<ThetaElem>) -> Self {
        theta.sort();
        theta.dedup();
        Operator { gamma, theta }
    }
    /// H[Θ ∪ {elem}].
    pub fn extended(&self, elem: Option<ThetaElem>) -> Operator {
        let mut theta = self.theta.clone();
        if let Some(e) = elem {
            theta.push(e);
        }
        Operator::with_theta(self.gamma.clone(), theta)
    }
    /// The ordinal-term seeds for hull queries.
    pub fn ord_seeds(&self) -> Vec<OrdTerm> {
        self.theta
            .iter()
            .filter_map(|e| match e {
                ThetaElem::Ord(t) => Some(t.clone()),
                ThetaElem::Hf(_) => None,
            })
            .collect()
    }
}

/// The Θ-extension a witness contributes to (⋀)-premises.
pub fn witness_theta(w: &Witness) -> Option<ThetaElem> {
    match w {
        Witness::Idx(_) => None,
        Witness::Set(Const::Hf(h)) => Some(ThetaElem::Hf(h.clone())),
        Witness::Set(Const::Ord(t)) => Some(ThetaElem::Ord(t.clone())),
        Witness::Set(Const::Lvl(t)) => Some(ThetaElem::Ord(t.clone())),
        Witness::Set(Const::Var(_)) => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// (⋁) with main formula and chosen branch.
    Or { main: Formula, witness: Witness },
    /// (⋀) with main formula; one premise per branch.
    And { main: Formula },
    /// (cut) on a formula of rank below the cut rank.
    Cut { formula: Formula },
    /// (P_λ) axiom.
    AxP { lambda: RegTerm, alpha: OrdTerm },
    /// (P_{I,n}) axiom.
    AxPI { alpha: OrdTerm },
    /// (F^{Σ1}_{x∪{λ}}): Γ = Λ ∪ F"Γ0, premise Λ ∪ Γ0.
    F1 {
        x: OrdTerm,
        lambda: RegTerm,
        passive: Sequent,
        gamma0: Sequent,
    },
    /// (F^{Σn}_{x}): Γ = Λ ∪ F"Γ0, premise Λ ∪ Γ0.
    FN {
        x: OrdTerm,
        passive: Sequent,
        gamma0: Sequent,
    },
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Or { .. } => "or",
            Rule::And { .. } => "and",
            Rule::Cut { .. } => "cut",
            Rule::AxP { .. } => "axP",
            Rule::AxPI { .. } => "axPI",
            Rule::F1 { .. } => "f1",
            Rule::FN { .. } => "fn",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub op: Operator,
    pub kappa: RegTerm,
    pub bound: OrdTerm,
    pub cutrank: OrdTerm,
    pub sequent: Sequent,
    pub rule: Rule,
    pub children: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Fail { path: Vec<usize>, condition: String },
    CannotVerify { path: Vec<usize>, reason: String },
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub bound: OrdTerm,
    pub cutrank: OrdTerm,
    pub sequent: Sequent,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        matches!(self.verdict, Verdict::Ok)
    }
}

enum Claim {
    Holds,
    Fails(String),
    Unknown(String),
}

/// Three-valued comparison of a constant's rank against a strict bound.
fn rank_below(c: &Const, bound: &OrdTerm) -> Result<Option<bool>, String> {
    let (lo, hi) = match c {
        Const::Hf(h) => {
            let r = term::finite(hf::vn_rank(h));
            (r.clone(), term::succ(r))
        }
        Const::Ord(t) => {
            let ri = rank_interval(t);
            (ri.lo, ri.hi)
        }
        Const::Lvl(t) => (t.clone(), term::succ(t.clone())),
        Const::Var(v) => return Err(format!("free variable {v}")),
    };
    // rank ∈ [lo, hi): certainly below iff hi ≤ bound, certainly not iff lo ≥ bound
    if cmp_raw(&hi, bound) != Ordering::Greater {
        Ok(Some(true))
    } else if cmp_raw(&lo, bound) != Ordering::Less {
        Ok(Some(false))
    } else {
        Ok(None)
    }
}

/// The (⋁) bound condition rk_L(ι) < κ ⇒ rk_L(ι) < a, on set witnesses.
fn or_bound_condition(w: &Witness, kappa: &OrdTerm, bound: &OrdTerm) -> Claim {
    let Witness::Set(c) = w else {
        return Claim::Holds;
    };
    let below_kappa = match rank_below(c, kappa) {
        Ok(v) => v,
        Err(e) => return Claim::Fails(e),
    };
    let below_bound = match rank_below(c, bound) {
        Ok(v) => v,
        Err(e) => return Claim::Fails(e),
    };
    match (below_kappa, below_bound) {
        (Some(false), _) => Claim::Holds,
        (_, Some(true)) => Claim::Holds,
        (Some(true), Some(false)) => Claim::Fails(format!(
            "witness rank below kappa but not below the bound {}",
            term::render_term(bound)
        )),
        _ => Claim::Unknown("witness rank interval straddles the bound".into()),
    }
}

struct Checker {
    n: u32,
}

impl Checker {
    fn check(&self, d: &Derivation, path: &mut Vec<usize>) -> Verdict {
        if let Some(v) = self.node_conditions(d, path) {
            return v;
        }
        for (i, c) in d.children.iter().enumerate() {
            path.push(i);
            let v = self.check(c, path);
            if !matches!(v, Verdict::Ok) {
                return v;
            }
            path.pop();
        }
        Verdict::Ok
    }

    fn fail(&self, path: &[usize], condition: impl Into<String>) -> Option<Verdict> {
        Some(Verdict::Fail {
            path: path.to_vec(),
            condition: condition.into(),
        })
    }

    fn unknown(&self, path: &[usize], reason: impl Into<String>) -> Option<Verdict> {
        Some(Verdict::CannotVerify {
            path: path.to_vec(),
            reason: reason.into(),
        })
    }

    /// Checks this node's own conditions; None means all hold.
    fn node_conditions(&self, d: &Derivation, path: &[usize]) -> Option<Verdict> {
        for f in d.sequent.iter() {
            if !formula::is_sentence(f) {
                return self.fail(
                    path,
                    format!("open formula in sequent: {}", formula::render_formula(f)),
                );
            }
        }
        // control condition {a} ∪ k(Γ) ⊂ H(∅)
        let seeds = d.op.ord_seeds();
        if contains_mu(&d.bound) || contains_mu(&d.cutrank) {
            return self.unknown(path, "bound or cut rank contains a mu constant");
        }
        if !in_hull_seeded(&d.bound, &d.op.gamma, &OrdTerm::Zero, &seeds) {
            return self.fail(
                path,
                format!(
                    "control: bound {} not in H_{{{}}}(0)",
                    term::render_term(&d.bound),
                    term::render_term(&d.op.gamma)
                ),
            );
        }
        for c in d.sequent.k_set() {
            let t = match &c {
                Const::Hf(_) => continue,
                Const::Ord(t) | Const::Lvl(t) => t.clone(),
                Const::Var(_) => continue,
            };
            if !in_hull_seeded(&t, &d.op.gamma, &OrdTerm::Zero, &seeds) {
                let msg = format!(
                    "control: constant {} not in H_{{{}}}(0)",
                    term::render_term(&t),
                    term::render_term(&d.op.gamma)
                );
                return if contains_mu(&t) {
                    self.unknown(path, msg)
                } else {
                    self.fail(path, msg)
                };
            }
        }
        // premises share κ, cut rank and the operator index; bounds decrease
        for c in &d.children {
            if c.kappa != d.kappa {
                return self.fail(path, "premise kappa differs");
            }
            if c.cutrank != d.cutrank {
                return self.fail(path, "premise cut rank differs");
            }
            if c.op.gamma != d.op.gamma {
                return self.fail(path, "premise operator index differs");
            }
            if cmp_raw(&c.bound, &d.bound) != Ordering::Less {
                return self.fail(
                    path,
                    format!(
                        "premise bound {} not below {}",
                        term::render_term(&c.bound),
                        term::render_term(&d.bound)
                    ),
                );
            }
        }
        self.rule_conditions(d, path)
    }

    fn expect_arity(&self, d: &Derivation, k: usize, path: &[usize]) -> Option<Verdict> {
        if d.children.len() != k {
            self.fail(
                path,
                format!(
                    "arity: rule {} expects {} premises, found {}",
                    d.rule.tag(),
                    k,
                    d.children.len()
                ),
            )
        } else {
            None
        }
    }

    fn theta_matches(&self, parent: &Operator, child: &Operator, w: &Witness) -> bool {
        let expected = parent.extended(witness_theta(w));
        child.theta == expected.theta || child.theta == parent.theta
    }

    fn rule_conditions(&self, d: &Derivation, path: &[usize]) -> Option<Verdict> {
        match &d.rule {
            Rule::Or { main, witness } => {
                if let Some(v) = self.expect_arity(d, 1, path) {
                    return Some(v);
                }
                if !d.sequent.contains(main) {
                    return self.fail(path, "main formula not in the sequent");
                }
                let dec = match decompose(main, self.n) {
                    Ok(dec) => dec,
                    Err(e) => return self.unknown(path, format!("cannot decompose: {e}")),
                };
                if !dec.is_disj() {
                    return self.fail(path, "main formula is not disjunctive");
                }
                let branch = match decomp_branch(main, witness, self.n) {
                    Ok(b) => b,
                    Err(e) => return self.fail(path, format!("witness rejected: {e}")),
                };
                match or_bound_condition(witness, &d.kappa.as_ord(), &d.bound) {
                    Claim::Holds => {}
                    Claim::Fails(m) => return self.fail(path, m),
                    Claim::Unknown(m) => return self.unknown(path, m),
                }
                let expected = d.sequent.with(branch);
                if d.children[0].sequent != expected {
                    return self.fail(path, "premise sequent mismatch for (or)");
                }
                if d.children[0].op.theta != d.op.theta {
                    return self.fail(path, "premise theta differs for (or)");
                }
                None
            }
            Rule::And { main } => {
                if !d.sequent.contains(main) {
                    return self.fail(path, "main formula not in the sequent");
                }
                let dec = match decompose(main, self.n) {
                    Ok(dec) => dec,
                    Err(e) => return self.unknown(path, format!("cannot decompose: {e}")),
                };
                let ws: Vec<Witness> = match &dec {
                    Decomp::Conj(WitnessSpace::Finite(ws)) => ws.clone(),
                    Decomp::Conj(WitnessSpace::Singleton(w)) => vec![w.clone()],
                    Decomp::Conj(WitnessSpace::SymbolicLevel(t)) => {
                        return self.fail(
                            path,
                            format!(
                                "infinitary conjunction over L_{} is not checkable",
                                term::render_term(t)
                            ),
                        )
                    }
                    Decomp::Disj(_) => return self.fail(path, "main formula is not conjunctive"),
                };
                if let Some(v) = self.expect_arity(d, ws.len(), path) {
                    return Some(v);
                }
                for (i, w) in ws.iter().enumerate() {
                    let branch = match decomp_branch(main, w, self.n) {
                        Ok(b) => b,
                        Err(e) => return self.fail(path, format!("branch {i}: {e}")),
                    };
                    let expected = d.sequent.with(branch);
                    if d.children[i].sequent != expected {
                        return self.fail(path, format!("premise {i} sequent mismatch for (and)"));
                    }
                    if !self.theta_matches(&d.op, &d.children[i].op, w) {
                        return self.fail(path, format!("premise {i} theta mismatch for (and)"));
                    }
                }
                None
            }
            Rule::Cut { formula } => {
                if let Some(v) = self.expect_arity(d, 2, path) {
                    return Some(v);
                }
                let rc = match formula::rk(formula) {
                    Ok(r) => r,
                    Err(e) => return self.fail(path, format!("cut formula rank: {e}")),
                };
                if contains_mu(&rc) {
                    return self.unknown(path, "cut formula rank contains a mu constant");
                }
                if cmp_raw(&rc, &d.cutrank) != Ordering::Less {
                    return self.fail(
                        path,
                        format!(
                            "cut rank: rk(C) = {} not below {}",
                            term::render_term(&rc),
                            term::render_term(&d.cutrank)
                        ),
                    );
                }
                let left = d.sequent.with(formula::neg(formula));
                let right = d.sequent.with(formula.clone());
                if d.children[0].sequent != left {
                    return self.fail(path, "left cut premise must add the negated formula");
                }
                if d.children[1].sequent != right {
                    return self.fail(path, "right cut premise must add the cut formula");
                }
                for c in &d.children {
                    if c.op.theta != d.op.theta {
                        return self.fail(path, "cut premise theta differs");
                    }
                }
                None
            }
            Rule::AxP { lambda, alpha } => {
                if let Some(v) = self.expect_arity(d, 0, path) {
                    return Some(v);
                }
                if matches!(lambda, RegTerm::TopI) {
                    return self.fail(path, "(P_lambda) needs lambda in R");
                }
                if cmp_raw(alpha, &lambda.as_ord()) != Ordering::Less {
                    return self.fail(path, "(P_lambda) needs alpha < lambda");
                }
                let ax = formula::p_axiom(lambda, alpha);
                if !d.sequent.contains(&ax) {
                    return self.fail(path, "(P_lambda) axiom formula not in the sequent");
                }
                None
            }
            Rule::AxPI { alpha } => {
                if let Some(v) = self.expect_arity(d, 0, path) {
                    return Some(v);
                }
                if cmp_raw(alpha, &OrdTerm::BigI) != Ordering::Less {
                    return self.fail(path, "(P_I) needs alpha < I");
                }
                let ax = formula::pi_axiom(alpha);
                if !d.sequent.contains(&ax) {
                    return self.fail(path, "(P_I) axiom formula not in the sequent");
                }
                None
            }
            Rule::F1 {
                x,
                lambda,
                passive,
                gamma0,
            } => self.f_rule(d, path, x, Some(lambda), passive, gamma0),
            Rule::FN { x, passive, gamma0 } => self.f_rule(d, path, x, None, passive, gamma0),
        }
    }

    fn f_rule(
        &self,
        d: &Derivation,
        path: &[usize],
        x: &OrdTerm,
        lambda: Option<&RegTerm>,
        passive: &Sequent,
        gamma0: &Sequent,
    ) -> Option<Verdict> {
        if let Some(v) = self.expect_arity(d, 1, path) {
            return Some(v);
        }
        let seeds = d.op.ord_seeds();
        let (fc, class_level, rule_name) = match lambda {
            Some(l) => {
                if matches!(l, RegTerm::TopI) {
                    return self.fail(path, "(F_Sigma1) needs lambda in R");
                }
                if !matches!(x, OrdTerm::Psi(k2, _) if k2 == l) {
                    return self.fail(path, "(F_Sigma1) needs x = Psi(lambda; beta)");
                }
                if !in_hull_seeded(&l.as_ord(), &d.op.gamma, &OrdTerm::Zero, &seeds) {
                    return self.fail(path, "(F_Sigma1): lambda not in H");
                }
                (
                    Collapse::Sigma1 {
                        x: x.clone(),
                        kappa: l.clone(),
                    },
                    1,
                    "F_Sigma1",
                )
            }
            None => {
                if !matches!(x, OrdTerm::Psi(RegTerm::TopI, _)) {
                    return self.fail(path, "(F_Sigman) needs x = Psi(I; beta)");
                }
                (Collapse::SigmaN { x: x.clone() }, self.n, "F_Sigman")
            }
        };
        if !in_hull_seeded(x, &d.op.gamma, &OrdTerm::Zero, &seeds) {
            return self.fail(path, format!("({rule_name}): x not in H"));
        }
        let mut image = passive.clone();
        for f in gamma0.iter() {
            if !formula::in_sigma(f, class_level) {
                return self.fail(
                    path,
                    format!(
                        "({rule_name}): premise formula outside Sigma_{class_level}: {}",
                        formula::render_formula(f)
                    ),
                );
            }
            // hull side condition, approximated: k(Γ0) inside the collapse
            // domain, ordinal constants also controlled by the operator
            for c in formula::k_set(f) {
                let t = match &c {
                    Const::Ord(t) | Const::Lvl(t) => t.clone(),
                    _ => continue,
                };
                if !in_hull_seeded(&t, &d.op.gamma, &OrdTerm::Zero, &seeds) {
                    return self.unknown(
                        path,
                        format!(
                            "({rule_name}): cannot verify constant {} in H ∩ hull",
                            term::render_term(&t)
                        ),
                    );
                }
            }
            match formula::mostowski_apply(f, &fc, self.n) {
                Ok(g) => image.insert(g),
                Err(e) => {
                    return self.unknown(
                        path,
                        format!("({rule_name}): cannot verify hull domain: {e}"),
                    )
                }
            }
        }
        if d.sequent != image {
            return self.fail(
                path,
                format!("({rule_name}): sequent is not Lambda ∪ F\"Gamma0"),
            );
        }
        let premise = passive.union(gamma0);
        if d.children[0].sequent != premise {
            return self.fail(
                path,
                format!("({rule_name}): premise is not Lambda ∪ Gamma0"),
            );
        }
        if d.children[0].op.theta != d.op.theta {
            return self.fail(path, format!("({rule_name}): premise theta differs"));
        }
        None
    }
}

/// Deterministic total check of a finite derivation at level n.
pub fn check(d: &Derivation, n: u32) -> CheckReport {
    let checker = Checker { n };
    let verdict = checker.check(d, &mut Vec::new());
    CheckReport {
        verdict,
        bound: d.bound.clone(),
        cutrank: d.cutrank.clone(),
        sequent: d.sequent.clone(),
    }
}

#[derive(Debug, Error)]
pub enum DerivError {
    #[error("kappa weakening needs lambda ≤ kappa, got {0} > {1}")]
    KappaOrder(String, String),
    #[error("bound weakening must not decrease the bound")]
    BoundOrder,
    #[error("operator reindex must not decrease the index")]
    GammaOrder,
    #[error("derivation does not check after transformation: {0:?}")]
    Recheck(Verdict),
}

/// λ ≤ κ allows replacing the controlling regular throughout.
pub fn weaken_kappa(d: &Derivation, lambda: &RegTerm, n: u32) -> Result<Derivation, DerivError> {
    if cmp_raw(&lambda.as_ord(), &d.kappa.as_ord()) == Ordering::Greater {
        return Err(DerivError::KappaOrder(
            term::render_term(&lambda.as_ord()),
            term::render_term(&d.kappa.as_ord()),
        ));
    }
    fn replace(d: &Derivation, lambda: &RegTerm) -> Derivation {
        Derivation {
            kappa: lambda.clone(),
            children: d.children.iter().map(|c| replace(c, lambda)).collect(),
            ..d.clone()
        }
    }
    let out = replace(d, lambda);
    let rep = check(&out, n);
    if !rep.is_ok() {
        return Err(DerivError::Recheck(rep.verdict));
    }
    Ok(out)
}

/// Height weakening at the root: the relation reads "height at most a".
pub fn weaken_bound(d: &Derivation, new_bound: &OrdTerm) -> Result<Derivation, DerivError> {
    if cmp_raw(new_bound, &d.bound) == Ordering::Less {
        return Err(DerivError::BoundOrder);
    }
    Ok(Derivation {
        bound: new_bound.clone(),
        ..d.clone()
    })
}

/// Uniform cut-rank weakening: every rule keeps the cut rank, so it is a
/// single tree-wide value.
pub fn weaken_cutrank(d: &Derivation, new_rank: &OrdTerm) -> Result<Derivation, DerivError> {
    if cmp_raw(new_rank, &d.cutrank) == Ordering::Less {
        return Err(DerivError::BoundOrder);
    }
    fn replace(d: &Derivation, r: &OrdTerm) -> Derivation {
        Derivation {
            cutrank: r.clone(),
            children: d.children.iter().map(|c| replace(c, r)).collect(),
            ..d.clone()
        }
    }
    Ok(replace(d, new_rank))
}

/// Monotone operator reindexing H_γ → H_{γ'} for γ ≤ γ', preserving Θ.
pub fn with_gamma(d: &Derivation, new_gamma: &OrdTerm) -> Result<Derivation, DerivError> {
    if cmp_raw(new_gamma, &d.op.gamma) == Ordering::Less {
        return Err(DerivError::GammaOrder);
    }
    fn replace(d: &Derivation, g: &OrdTerm) -> Derivation {
        Derivation {
            op: Operator {
                gamma: g.clone(),
                theta: d.op.theta.clone(),
            },
            children: d.children.iter().map(|c| replace(c, g)).collect(),
            ..d.clone()
        }
    }
    Ok(replace(d, new_gamma))
}

/// Monotone Θ-extension through the whole tree.
pub fn with_theta_seeded(d: &Derivation, extra: &[ThetaElem]) -> Derivation {
    let mut theta = d.op.theta.clone();
    theta.extend(extra.iter().cloned());
    Derivation {
        op: Operator::with_theta(d.op.gamma.clone(), theta),
        children: d
            .children
            .iter()
            .map(|c| with_theta_seeded(c, extra))
            .collect(),
        ..d.clone()
    }
}

// ---------------------------------------------------------------------------
// serialization

#[derive(Debug, Error)]
#[error("derivation schema error at {path}: {msg}")]
pub struct SchemaError {
    pub path: String,
    pub msg: String,
}

use serde_json::{json, Map, Value};

fn theta_to_json(e: &ThetaElem) -> Value {
    match e {
        ThetaElem::Ord(t) => Value::String(term::render_term(t)),
        ThetaElem::Hf(h) => Value::String(hf::render_hf(h)),
    }
}

fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::Idx(i) => json!({ "idx": i }),
        Witness::Set(c) => json!({ "set": formula::render_const(c) }),
    }
}

fn sequent_to_json(s: &Sequent) -> Value {
    Value::Array(
        s.iter()
            .map(|f| Value::String(formula::render_formula(f)))
            .collect(),
    )
}

pub fn to_json(d: &Derivation) -> Value {
    let rule = match &d.rule {
        Rule::Or { main, witness } => json!({
            "tag": "or",
            "main": formula::render_formula(main),
            "witness": witness_to_json(witness),
        }),
        Rule::And { main } => json!({
            "tag": "and",
            "main": formula::render_formula(main),
        }),
        Rule::Cut { formula: f } => json!({
            "tag": "cut",
            "formula": formula::render_formula(f),
        }),
        Rule::AxP { lambda, alpha } => json!({
            "tag": "axP",
            "lambda": term::render_reg(lambda),
            "alpha": term::render_term(alpha),
        }),
        Rule::AxPI { alpha } => json!({
            "tag": "axPI",
            "alpha": term::render_term(alpha),
        }),
        Rule::F1 {
            x,
            lambda,
            passive,
            gamma0,
        } => json!({
            "tag": "f1",
            "x": term::render_term(x),
            "lambda": term::render_reg(lambda),
            "passive": sequent_to_json(passive),
            "gamma0": sequent_to_json(gamma0),
        }),
        Rule::FN { x, passive, gamma0 } => json!({
            "tag": "fn",
            "x": term::render_term(x),
            "passive": sequent_to_json(passive),
            "gamma0": sequent_to_json(gamma0),
        }),
    };
    json!({
        "op": {
            "gamma": term::render_term(&d.op.gamma),
            "theta": d.op.theta.iter().map(theta_to_json).collect::<Vec<_>>(),
        },
        "kappa": term::render_reg(&d.kappa),
        "bound": term::render_term(&d.bound),
        "cutrank": term::render_term(&d.cutrank),
        "sequent": sequent_to_json(&d.sequent),
        "rule": rule,
        "children": d.children.iter().map(to_json).collect::<Vec<_>>(),
    })
}

pub fn serialize(d: &Derivation) -> String {
    serde_json::to_string_pretty(&to_json(d)).expect("json")
}

fn err(path: &str, msg: impl Into<String>) -> SchemaError {
    SchemaError {
        path: path.to_string(),
        msg: msg.into(),
    }
}

fn get<'v>(m: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value, SchemaError> {
    m.get(key)
        .ok_or_else(|| err(path, format!("missing field {key}")))
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str, SchemaError> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn parse_term_at(s: &str, path: &str) -> Result<OrdTerm, SchemaError> {
    parse::parse_term(s).map_err(|e| err(path, e.to_string()))
}

fn parse_reg_at(s: &str, path: &str) -> Result<RegTerm, SchemaError> {
    parse::parse_reg(s).map_err(|e| err(path, e.to_string()))
}

fn parse_formula_at(s: &str, path: &str) -> Result<Formula, SchemaError> {
    parse::parse_formula(s).map_err(|e| err(path, e.to_string()))
}

fn parse_const_at(s: &str, path: &str) -> Result<Const, SchemaError> {
    parse::parse_const(s).map_err(|e| err(path, e.to_string()))
}

fn sequent_from(v: &Value, path: &str) -> Result<Sequent, SchemaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| err(path, "expected an array of formulas"))?;
    let mut s = Sequent::new();
    for (i, f) in arr.iter().enumerate() {
        let fp = format!("{path}[{i}]");
        s.insert(parse_formula_at(as_str(f, &fp)?, &fp)?);
    }
    Ok(s)
}

pub fn from_json(v: &Value) -> Result<Derivation, SchemaError> {
    from_json_at(v, "$")
}

fn from_json_at(v: &Value, path: &str) -> Result<Derivation, SchemaError> {
    let m = v
        .as_object()
        .ok_or_else(|| err(path, "expected an object"))?;
    let opv = get(m, "op", path)?
        .as_object()
        .ok_or_else(|| err(path, "op must be an object"))?;
    let gamma = parse_term_at(as_str(get(opv, "gamma", path)?, path)?, path)?;
    let mut theta = Vec::new();
    if let Some(tv) = opv.get("theta") {
        let arr = tv
            .as_array()
            .ok_or_else(|| err(path, "theta must be an array"))?;
        for (i, e) in arr.iter().enumerate() {
            let ep = format!("{path}.op.theta[{i}]");
            let s = as_str(e, &ep)?;
            if s.trim_start().starts_with('{') {
                let h = hf::parse_hf(s).map_err(|e| err(&ep, e))?;
                theta.push(ThetaElem::Hf(h));
            } else {
                theta.push(ThetaElem::Ord(parse_term_at(s, &ep)?));
            }
        }
    }
    let kappa = parse_reg_at(as_str(get(m, "kappa", path)?, path)?, path)?;
    let bound = parse_term_at(as_str(get(m, "bound", path)?, path)?, path)?;
    let cutrank = parse_term_at(as_str(get(m, "cutrank", path)?, path)?, path)?;
    let sequent = sequent_from(get(m, "sequent", path)?, &format!("{path}.sequent"))?;
    let rv = get(m, "rule", path)?
        .as_object()
        .ok_or_else(|| err(path, "rule must be an object"))?;
    let rp = format!("{path}.rule");
    let tag = as_str(get(rv, "tag", &rp)?, &rp)?;
    let rule = match tag {
        "or" => {
            let main = parse_formula_at(as_str(get(rv, "main", &rp)?, &rp)?, &rp)?;
            let wv = get(rv, "witness", &rp)?
                .as_object()
                .ok_or_else(|| err(&rp, "witness must be an object"))?;
            let witness = if let Some(i) = wv.get("idx") {
                Witness::Idx(
                    i.as_u64()
                        .ok_or_else(|| err(&rp, "idx must be a number"))? as usize,
                )
            } else if let Some(s) = wv.get("set") {
                Witness::Set(parse_const_at(as_str(s, &rp)?, &rp)?)
            } else {
                return Err(err(&rp, "witness needs idx or set"));
            };
            Rule::Or { main, witness }
        }
        "and" => Rule::And {
            main: parse_formula_at(as_str(get(rv, "main", &rp)?, &rp)?, &rp)?,
        },
        "cut" => Rule::Cut {
            formula: parse_formula_at(as_str(get(rv, "formula", &rp)?, &rp)?, &rp)?,
        },
        "axP" => Rule::AxP {
            lambda: parse_reg_at(as_str(get(rv, "lambda", &rp)?, &rp)?, &rp)?,
            alpha: parse_term_at(as_str(get(rv, "alpha", &rp)?, &rp)?, &rp)?,
        },
        "axPI" => Rule::AxPI {
            alpha: parse_term_at(as_str(get(rv, "alpha", &rp)?, &rp)?, &rp)?,
        },
        "f1" => Rule::F1 {
            x: parse_term_at(as_str(get(rv, "x", &rp)?, &rp)?, &rp)?,
            lambda: parse_reg_at(as_str(get(rv, "lambda", &rp)?, &rp)?, &rp)?,
            passive: sequent_from(get(rv, "passive", &rp)?, &format!("{rp}.passive"))?,
            gamma0: sequent_from(get(rv, "gamma0", &rp)?, &format!("{rp}.gamma0"))?,
        },
        "fn" => Rule::FN {
            x: parse_term_at(as_str(get(rv, "x", &rp)?, &rp)?, &rp)?,
            passive: sequent_from(get(rv, "passive", &rp)?, &format!("{rp}.passive"))?,
            gamma0: sequent_from(get(rv, "gamma0", &rp)?, &format!("{rp}.gamma0"))?,
        },
        other => return Err(err(&rp, format!("unknown rule tag {other:?}"))),
    };
    let mut children = Vec::new();
    if let Some(cv) = m.get("children") {
        let arr = cv
            .as_array()
            .ok_or_else(|| err(path, "children must be an array"))?;
        for (i, c) in arr.iter().enumerate() {
            children.push(from_json_at(c, &format!("{path}.children[{i}]"))?);
        }
    }
    Ok(Derivation {
        op: Operator::with_theta(gamma, theta),
        kappa,
        bound,
        cutrank,
        sequent,
        rule,
        children,
    })
}

pub fn deserialize(text: &str) -> Result<Derivation, SchemaError> {
    let v: Value = serde_json::from_str(text).map_err(|e| err("$", e.to_string()))?;
    from_json(&v)
}

/// Truth of the disjunction of a sequent over the evaluable fragment.
pub fn eval_sequent(s: &Sequent) -> Result<bool, hf::EvalError> {
    let mut saw_err = None;
    for f in s.iter() {
        match hf::eval_sentence(f) {
            Ok(true) => return Ok(true),
            Ok(false) => {}
            Err(e) => saw_err = Some(e),
        }
    }
    match saw_err {
        None => Ok(false),
        Some(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{hf_c, ord_c};
    use crate::term::{omega1, one, Zero};

    fn taut_leaf() -> Derivation {
        // ⊢ {∅∈{∅}, ∅∉{∅}} by (⋀) on the true literal, bound 0
        let t = Formula::Mem(hf_c(HFSet::empty()), hf_c(HFSet::new(vec![HFSet::empty()])));
        let seq = Sequent::from_vec(vec![t.clone(), formula::neg(&t)]);
        Derivation {
            op: Operator::new(Zero),
            kappa: RegTerm::TopI,
            bound: Zero,
            cutrank: Zero,
            sequent: seq,
            rule: Rule::And { main: t },
            children: vec![],
        }
    }

    #[test]
    fn axiom_leaf_checks() {
        let d = taut_leaf();
        assert!(check(&d, 2).is_ok());
    }

    #[test]
    fn axp_node() {
        let ax = formula::p_axiom(&omega1(), &Zero);
        let d = Derivation {
            op: Operator::new(Zero),
            kappa: RegTerm::TopI,
            bound: Zero,
            cutrank: Zero,
            sequent: Sequent::singleton(ax),
            rule: Rule::AxP {
                lambda: omega1(),
                alpha: Zero,
            },
            children: vec![],
        };
        assert!(check(&d, 2).is_ok());
    }

    #[test]
    fn cut_rank_strict() {
        // a (cut) node whose formula rank equals the cut rank must fail
        let t = Formula::Mem(hf_c(HFSet::empty()), hf_c(HFSet::new(vec![HFSet::empty()])));
        let base = taut_leaf();
        let seq = base.sequent.clone();
        let d = Derivation {
            op: Operator::new(Zero),
            kappa: RegTerm::TopI,
            bound: one(),
            cutrank: Zero,
            sequent: seq.clone(),
            rule: Rule::Cut { formula: t.clone() },
            children: vec![
                Derivation {
                    sequent: seq.with(formula::neg(&t)),
                    ..base.clone()
                },
                Derivation {
                    sequent: seq.with(t.clone()),
                    ..base
                },
            ],
        };
        let rep = check(&d, 2);
        match rep.verdict {
            Verdict::Fail { condition, .. } => assert!(condition.contains("cut rank")),
            v => panic!("expected rank failure, got {v:?}"),
        }
    }

    #[test]
    fn or_requires_witness_in_space() {
        // (⋁) on a regular literal with the wrong witness index
        let f = Formula::RegL(ord_c(omega1().as_ord()));
        let branch = Formula::NotMem(ord_c(omega1().as_ord()), ord_c(omega1().as_ord()));
        let leaf = Derivation {
            op: Operator::new(Zero),
            kappa: RegTerm::TopI,
            bound: Zero,
            cutrank: Zero,
            sequent: Sequent::from_vec(vec![f.clone(), branch.clone()]),
            rule: Rule::And {
                main: branch.clone(),
            },
            children: vec![],
        };
        let good = Derivation {
            op: Operator::new(Zero),
            kappa: RegTerm::TopI,
            bound: one(),
            cutrank: Zero,
            sequent: Sequent::singleton(f.clone()),
            rule: Rule::Or {
                main: f.clone(),
                witness: Witness::Idx(0),
            },
            children: vec![leaf.clone()],
        };
        assert!(check(&good, 2).is_ok());
        let bad = Derivation {
            rule: Rule::Or {
                main: f,
                witness: Witness::Idx(7),
            },
            ..good
        };
        assert!(!check(&bad, 2).is_ok());
    }

    #[test]
    fn serialize_roundtrip() {
        let d = taut_leaf();
        let s = serialize(&d);
        let d2 = deserialize(&s).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn schema_errors() {
        assert!(deserialize("{}").is_err());
        assert!(deserialize(
            r#"{"op":{"gamma":"0"},"kappa":"I","bound":"0","cutrank":"0","sequent":[],"rule":{"tag":"nope"}}"#
        )
        .is_err());
    }
}
