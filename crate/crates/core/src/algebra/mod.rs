//! The branchwidth algebra, finite monoids with factorization trees, and the
//! recognizability probe.

mod monoid;
mod probe;
mod term;

pub use monoid::{
    factorization_tree, factorize, idempotents, random_monoid, FactorizationTree, FiniteMonoid, Homomorphism, MAX_WORD,
};
pub use probe::{recognizability_probe, Language, ProbeReport, ProbeRow};
pub use term::{
    eval_term, origin_set, realises, realises_restriction, term_from_branch_decomposition, BranchTerm, PortedMatroid,
};
