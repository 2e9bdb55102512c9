//! Exact computation and empirical verification for approximate
//! homomorphisms between finite Abelian groups.
//!
//! A map `f: G -> H` is an approximate homomorphism to the extent that
//! `f(x+y) = f(x) + f(y)` holds for many pairs; this crate counts that
//! agreement exactly, builds the classical high-agreement injections,
//! evaluates the known upper-bound expressions with exact arithmetic, and
//! stress-tests the sumset inequalities those bounds rest on.
//!
//! The pieces:
//!
//! - [`group`]: finitely generated Abelian groups as lists of cyclic
//!   factors, canonical element arithmetic, mixed-radix ranking.
//! - [`sets`]: finite subsets with dense/sparse storage, sumsets,
//!   dilations, triple correlation, additive energy.
//! - [`maps`]: table-backed maps, exact agreement probability, the binary
//!   embedding and centered unwrapping constructions.
//! - [`bounds`]: the bound base/exponent expressions and the per-prime
//!   constant `c(r)`, compared exactly by integer cross-powering.
//! - [`lemmas`]: constructive checkers for the sumset lemmas (graph
//!   growth, Petridis minimizers, Ruzsa triangle, a symmetric
//!   Balog-Szemeredi-Gowers extraction) and the torsion counterexample
//!   family.
//! - [`search`]: exhaustive and local search for maximum-agreement
//!   injections between small groups.
//! - [`fuzz`]: seeded randomized property suites over the checkers.
//! - [`cli`]: the `apxhom` command-line front end.
//!
//! Runnable examples live in `examples/`; see the README.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fuzz;
pub mod group;
pub mod lemmas;
pub mod maps;
pub mod primes;
pub mod search;
pub mod sets;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec};
pub use maps::{AgreementReport, PointMap};
pub use sets::ElementSet;
