//! Universal functions on the natural numbers.
//!
//! A binary `F: ω×ω → ω` is universal when every binary `G` can be written as
//! `G(x,y) = F(g(x), h(y))` for suitable unary witnesses. This crate builds one
//! concrete such `F` ([`universal::f_univ`]) from a bit-interleaving pairing
//! function and a self-delimiting sequence code, synthesizes witnesses for any
//! finite table, and composes the binary core into higher-arity, Σ-patterned,
//! order-preserving (additive) and product forms. Everything is exact: witnesses
//! are materialized tables of unbounded naturals, and [`verifier::check`]
//! replays a construction over its whole grid cell by cell.

pub mod combinators;
pub mod descriptor;
pub mod error;
pub mod pairing;
pub mod seqcodec;
pub mod sigma;
pub mod table;
pub mod universal;
pub mod verifier;

/// Unbounded natural number. Witness integers routinely exceed machine width.
pub type Nat = num_bigint::BigUint;

pub use descriptor::{EvaluatorDescriptor, Expr, Synthesis, WitnessBundle};
pub use error::{Error, Result};
pub use sigma::{Classification, SigmaSpec};
pub use table::{FinTable, WitnessMap};
pub use verifier::VerifyReport;
