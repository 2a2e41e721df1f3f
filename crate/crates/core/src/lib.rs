//! End-to-end reduction chain from structured 3SAT to constant-gap
//! parameterized CSPs, together with the measurement harness needed to
//! validate it at desk scale.
//!
//! The chain has four stages:
//!
//! 1. [`sat2vec`] turns a 3CNF formula (every clause on three distinct
//!    variables) into a vector-valued CSP over `GF(8)^d` whose constraints
//!    are either linear (`u = M v`) or parallel (one sub-constraint applied
//!    coordinate-wise on a subset of coordinates).
//! 2. [`csp`] holds the CSP data model: evaluation, validation, splitting
//!    into linear/parallel sub-instances, and brute-force solving of micro
//!    instances.
//! 3. [`pcpp`] implements the two probabilistically checkable proof-of-
//!    proximity verifiers — one for the linear sub-instance, one for the
//!    parallel sub-instance — over lazily evaluable parallel Walsh-Hadamard
//!    words ([`hadamard`]), with the circuit-to-quadratic-equation
//!    arithmetization in [`quadeq`].
//! 4. [`pipeline`] converts a verifier into a gap CSP (explicitly for micro
//!    fixtures, virtually via a constraint sampler otherwise), chains the
//!    stages, and generates adversarial proofs for soundness probes.
//!
//! All acceptance measurements are either exact rationals from exhaustive
//! enumeration or seeded Monte-Carlo estimates with Wilson intervals; no
//! probability is ever reported as a bare float without its trial count and
//! seed. The check suite behind `gapcsp selftest` lives in [`selftest`].

pub mod bits;
pub mod csp;
pub mod gf;
pub mod hadamard;
pub mod pcpp;
pub mod pipeline;
pub mod quadeq;
pub mod rng;
pub mod sat2vec;
pub mod selftest;
pub mod stats;

pub use csp::{Assignment, Constraint, ConstraintKind, VecCspInstance};
pub use gf::{FieldElement, FieldMatrix, FieldSpec, FieldVector};
