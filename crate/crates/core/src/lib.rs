//! Executable model theory at desk scale.
//!
//! Finite relational structures with element- and set-typed relation slots,
//! a brute-force counting-MSO evaluator, MSO transductions with origins,
//! represented and general matroids, hyper-rankwidth and branchwidth, a
//! catalog of encoding/decoding pairs, and the branchwidth algebra together
//! with factorization forests over finite monoids.

mod error;
pub mod algebra;
pub mod encodings;
pub mod gf;
pub mod logic;
pub mod matroid;
pub mod structures;
pub mod subsets;
pub mod transduction;
pub mod width;

pub use error::{Error, Result};
