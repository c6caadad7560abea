//! Exact arithmetic for continuant Diophantine equations
//!
//! ```text
//! P(K_{n-1}(x_1..x_{n-1})) = K_n(x_0..x_{n-1}) * K_n(x_1..x_n)
//! ```
//!
//! where `K_n` is the generalized continuant with parameter `t`:
//! `K_0 = 1`, `K_1(x_1) = x_1`, `K_{k+1} = x_{k+1} K_k + t K_{k-1}`.
//!
//! Modules, bottom up:
//!
//! - [`continuants`]: evaluation of `K_n^(t)` and its 2x2 matrix form.
//! - [`polynomial`]: integer polynomials and the admissibility condition
//!   tying `P`, `t` and `n` together.
//! - [`equation`]: verification, lifting of prefixes and one-step
//!   extension of solutions.
//! - [`chain`]: memoized two-sided sequences whose every window is a
//!   solution, with branch-point bookkeeping and JSON serialization.
//! - [`seeds`]: unit-continuant tuples (brute force and parametric
//!   families), padding, seeding and the `n = 2`, `P = x^4 + 1`
//!   classification.
//! - [`maps`]: the solution-generating maps `f_a`, `f*_{a,b}`, `g`, `h`
//!   and their inverses, acting on divisor prefixes.
//! - [`bridge`]: factorizations `P(m) = d1 * d2` <-> solutions, via
//!   continued fractions of `d1 / m`.
//!
//! All integers are unbounded ([`num_bigint::BigInt`]); chain elements
//! outgrow 64 bits after a couple of steps.

pub mod bridge;
pub mod chain;
pub mod continuants;
pub mod equation;
mod error;
pub mod maps;
pub mod polynomial;
pub mod seeds;
mod tuple;

pub use bridge::{
    cf_expand, enumerate_factorizations, factorization_table, factorization_to_solution,
    provenance, solution_to_factorization, CfExpansion, FactorizationTriple, Parity,
    ProvenanceSearch, TableRow,
};
pub use chain::{chains_equivalent, is_nonstandard_window, Chain, EndState, Side};
pub use continuants::{continuant, continuant_matrix, Matrix2, Sign};
pub use equation::{
    extend_left, extend_right, lift, verify_solution, EquationInstance, ExtendResult, LiftResult,
    Solution,
};
pub use error::{Error, Result};
pub use maps::{DivisorPrefix, MapExpr, MapOp, MapOutcome};
pub use polynomial::{check_condition, ConditionReport, IntPolynomial};
pub use seeds::{classify_n2_solution, N2Category};
pub use tuple::IntTuple;
