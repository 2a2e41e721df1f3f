//! Parallel PCPP verifiers.
//!
//! Two verifiers check the two halves of a split vector-valued CSP:
//!
//! * [`linear::LinearVerifier`] (tests L1-L4) checks that a parallel
//!   Walsh-Hadamard word encodes an assignment satisfying every linear
//!   constraint, via an auxiliary encoding of all `M_e sigma(p)` products.
//! * [`parallel::ParallelVerifier`] (tests P1-P8) checks the parallel
//!   constraints through the conjunction-circuit arithmetization, with
//!   auxiliary proofs laid out per coordinate and per constraint subset.
//!
//! [`combined::CombinedVerifier`] runs one of the two with equal
//! probability over a shared first proof block. Randomness is canonical:
//! test id major, then the test's random elements decoded little-endian in
//! the order the test introduces them. Tests are weighted equally within a
//! verifier, which realizes the same per-test acceptance probabilities as
//! padding every family to a common size. [`measure`] turns verifiers into
//! exact (exhaustive) or seeded sampled acceptance probabilities.

pub mod combined;
pub mod linear;
pub mod measure;
pub mod parallel;

use crate::csp::CspError;
use crate::gf::GfError;
use crate::hadamard::OracleError;
use crate::quadeq::QuadeqError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PcppError {
    #[error("constraint {0} is not linear; the linear verifier needs an all-linear instance")]
    NotAllLinear(usize),
    #[error("assignment is not a solution, honest proof undefined")]
    NotASolution,
    #[error("test {test} has 2^{log2} random choices, exhaustive cap is 2^{cap}")]
    CapExceeded { test: TestId, log2: u128, cap: u32 },
    #[error("oracle resolution needs {0} parts materialized, cap is {1}")]
    IndexResolutionCap(u128, u64),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Csp(#[from] CspError),
    #[error(transparent)]
    Quadeq(#[from] QuadeqError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Identifier of one test family of one verifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TestId {
    L1,
    L2,
    L3,
    L4,
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
}

impl TestId {
    pub const LINEAR: [TestId; 4] = [TestId::L1, TestId::L2, TestId::L3, TestId::L4];
    pub const PARALLEL: [TestId; 8] = [
        TestId::P1,
        TestId::P2,
        TestId::P3,
        TestId::P4,
        TestId::P5,
        TestId::P6,
        TestId::P7,
        TestId::P8,
    ];

    pub fn is_linear(&self) -> bool {
        matches!(self, TestId::L1 | TestId::L2 | TestId::L3 | TestId::L4)
    }
}

impl std::fmt::Display for TestId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Number of random choices of one test family, as a base-2 logarithm.
/// Every family's count is a power of two, and at realistic sizes the
/// count itself is far too large to materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCount {
    pub test: TestId,
    pub log2: u128,
}

impl TestCount {
    /// The literal count, when it fits in a u128.
    pub fn exact(&self) -> Option<u128> {
        if self.log2 < 128 {
            Some(1u128 << self.log2)
        } else {
            None
        }
    }
}

/// Default cap on per-family exhaustive enumeration.
pub const EXHAUSTIVE_CAP_LOG2: u32 = 20;
