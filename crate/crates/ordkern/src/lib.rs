//! Ordinal notations below ε_{I+1} built from sums, ω-powers, alephs, the
//! binary Veblen function, collapsing values Ψ_{κ,n}α and Mostowski-collapse
//! constants, together with:
//!
//! * a decidable term order and a syntactic Skolem-hull membership test,
//!   cross-validated against a brute-force hull-stage enumerator,
//! * a hereditarily-finite toy universe with truth evaluation and μ-witnesses,
//! * a negation-normal-form sentence language with ranks, Σ/Π classes and
//!   ⋁/⋀ decompositions,
//! * finite operator-controlled derivations with a side-condition checker,
//! * executable derivation transformers (tautology, completeness, reduction,
//!   predicative cut elimination, boundedness, collapsing) whose bound
//!   arithmetic reproduces the lemma formulas exactly.

pub mod arith;
pub mod config;
pub mod corpus;
pub mod derivation;
pub mod formula;
pub mod hf;
pub mod order;
pub mod parse;
pub mod term;
pub mod transform;

pub use config::Config;
pub use derivation::{CheckReport, Derivation, Operator, Rule, Verdict};
pub use formula::{Bound, Const, Formula, Sequent};
pub use hf::HFSet;
pub use term::{OrdTerm, RegTerm};
