//! PPCPP verifier for all-parallel instances (tests P1-P8).
//!
//! The instance's variables are arranged so that constraint `l` connects
//! slots `2l` and `2l+1`; each coordinate `j` is then governed by the
//! conjunction circuit of its constraint set `kappa(j)` and its quadratic
//! equation system. The auxiliary proof blocks are binary words indexed by
//! one length-`c` (respectively `c^2`) segment per constraint subset:
//!
//! * `tau1` is supposed to encode `u-bar`, which on coordinate `j` holds
//!   the gate values of circuit `kappa(j)` in the `kappa(j)`-th part and
//!   zero elsewhere;
//! * `tau2` likewise encodes `w-bar` with the flattened outer products
//!   `u u^T`.
//!
//! Index spaces like `GF(2)^{2^m * c^2}` are astronomically large, so
//! query indices are [`TauIndex`] values: XOR-combinations of explicit,
//! seeded, uniform, sparse, outer-product, and equation-combination terms,
//! resolved lazily one part at a time. Honest oracles evaluate a query by
//! touching only the `kappa(j)` parts, in time polynomial in `c`.

use super::{PcppError, TestCount, TestId};
use crate::bits::Bits;
use crate::csp::{Assignment, ConstraintKind, Rational, VecCspInstance};
use crate::gf::{chi_flatten, FieldMatrix, FieldSpec, FieldVector};
use crate::hadamard::{random_index, OracleSpec, WordOracle};
use crate::quadeq::{circuit_to_quadeq, coordinate_inputs, kappa_map, ConjunctionFamily, QuadeqInstance};
use crate::rng::Prf;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// Cap on materializing a full tau index (all parts), in total bits.
const RESOLVE_FULL_CAP_BITS: u128 = 1 << 22;

/// A subset of the `2^m` parts, either explicit or keyed by a seed so that
/// membership queries stay O(1) at any scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PartSet {
    Explicit(Bits),
    Seeded { seed: u64 },
}

impl PartSet {
    pub fn contains(&self, part: u64) -> bool {
        match self {
            PartSet::Explicit(bits) => bits.get(part as usize),
            PartSet::Seeded { seed } => Prf::new(*seed).word(0, part) & 1 == 1,
        }
    }
}

/// One XOR term of a tau index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TauTerm {
    /// One segment per part (micro index spaces only).
    Explicit(Vec<Bits>),
    /// Pseudo-random segments keyed by `(seed, part)`.
    Seeded { seed: u64 },
    /// Pseudo-random on the parts of `set`, zero elsewhere.
    SeededMasked { seed: u64, set: PartSet },
    /// The same segment at every part.
    Uniform(Bits),
    /// Nonzero only at the listed parts.
    SparseParts(BTreeMap<u64, Bits>),
    /// Per-part flattened outer product of two narrower indices.
    Outer { r: Box<TauIndex>, rp: Box<TauIndex> },
    /// Per-part sum of the quadratic-equation matrices selected by `h`
    /// (resolved against the verifier's instance for that part).
    ConstraintCombo { h: Bits },
}

/// A vector in `(GF(2)^{seg_bits})^{2^m}`, stored as an XOR of structured
/// terms and resolved lazily per part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauIndex {
    pub seg_bits: usize,
    pub terms: Vec<TauTerm>,
}

impl TauIndex {
    pub fn new(seg_bits: usize, terms: Vec<TauTerm>) -> Self {
        TauIndex { seg_bits, terms }
    }

    pub fn zero(seg_bits: usize) -> Self {
        TauIndex { seg_bits, terms: vec![] }
    }

    /// Pointwise XOR of two indices.
    pub fn xor(&self, other: &TauIndex) -> TauIndex {
        assert_eq!(self.seg_bits, other.seg_bits, "segment width mismatch");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TauIndex { seg_bits: self.seg_bits, terms }
    }
}

/// Which auxiliary block an index addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TauBlock {
    Tau1,
    Tau2,
}

/// Message delta on one coordinate and one part: the oracle's value gains
/// `<bits, segment(part)>` on that coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordDelta {
    pub coord: usize,
    pub part: u64,
    pub bits: Bits,
}

/// A deterministic word over a tau index space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TauOracle {
    /// The honest word: coordinate `j` carries the message `u[j]` (for
    /// tau2, implicitly `u[j] u[j]^T`) in part `kappa(j)` and zero
    /// elsewhere.
    Honest { u: Vec<Bits> },
    /// `base` plus sparse message-level corruptions (still a codeword).
    MessageDelta { base: Box<TauOracle>, deltas: Vec<CoordDelta> },
    /// The all-zero word.
    Zero,
    /// `base` with finitely many entries replaced (micro index spaces
    /// only: patch matching must materialize the index).
    Overlay { base: Box<TauOracle>, patches: Vec<(TauIndex, Bits)> },
}

/// Proof blocks for the parallel verifier.
#[derive(Clone, Debug)]
pub struct ParallelProof {
    pub pi1: WordOracle,
    pub tau1: TauOracle,
    pub tau2: TauOracle,
}

/// Decoded random elements of one test.
#[derive(Clone, Debug, PartialEq)]
pub enum ParallelTest {
    P1 { alpha: FieldVector, beta: FieldVector },
    P2 { alpha: TauIndex, beta: TauIndex },
    P3 { alpha: TauIndex, beta: TauIndex },
    P4 { t_set: PartSet, alpha: TauIndex, beta: TauIndex },
    P5 { t_set: PartSet, alpha: TauIndex, beta: TauIndex },
    P6 { r: TauIndex, rp: TauIndex, y: TauIndex },
    P7 { h: Bits, beta: TauIndex },
    P8 { d_set: Bits, beta: FieldVector, psi: Bits, xi: TauIndex },
}

impl ParallelTest {
    pub fn id(&self) -> TestId {
        match self {
            ParallelTest::P1 { .. } => TestId::P1,
            ParallelTest::P2 { .. } => TestId::P2,
            ParallelTest::P3 { .. } => TestId::P3,
            ParallelTest::P4 { .. } => TestId::P4,
            ParallelTest::P5 { .. } => TestId::P5,
            ParallelTest::P6 { .. } => TestId::P6,
            ParallelTest::P7 { .. } => TestId::P7,
            ParallelTest::P8 { .. } => TestId::P8,
        }
    }
}

/// One query of a parallel-test descriptor.
#[derive(Clone, Debug, PartialEq)]
pub enum ParQuery {
    Pi1(FieldVector),
    Tau(TauBlock, TauIndex),
}

/// One query answer.
#[derive(Clone, Debug, PartialEq)]
pub enum ParAnswer {
    Field(FieldVector),
    Bits(Bits),
}

pub struct ParallelVerifier {
    g: VecCspInstance,
    /// slot -> original variable index; constraint `l` connects slots
    /// `2l` and `2l+1`
    arrangement: Vec<usize>,
    kappa: Vec<u64>,
    family: ConjunctionFamily,
    c: usize,
    q: usize,
    gammas: Mutex<BTreeMap<u64, Arc<QuadeqInstance>>>,
}

impl std::fmt::Debug for ParallelVerifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParallelVerifier")
            .field("k", &self.k())
            .field("m", &self.m())
            .field("d", &self.d())
            .field("c", &self.c)
            .field("q", &self.q)
            .finish()
    }
}

impl ParallelVerifier {
    pub fn new(g: VecCspInstance) -> Result<Self, PcppError> {
        if g.k == 0 {
            return Err(PcppError::Invariant("instance has no variables".into()));
        }
        let violations = g.validate();
        if !violations.is_empty() {
            return Err(PcppError::Invariant(format!(
                "instance invalid: {}",
                violations[0]
            )));
        }
        let kappa = kappa_map(&g)?;
        let mut arrangement = Vec::with_capacity(g.k);
        let mut placed = vec![false; g.k];
        for c in &g.constraints {
            arrangement.push(c.u);
            arrangement.push(c.v);
            placed[c.u] = true;
            placed[c.v] = true;
        }
        for (v, seen) in placed.iter().enumerate() {
            if !seen {
                arrangement.push(v);
            }
        }
        if arrangement.len() != g.k {
            return Err(PcppError::Invariant(
                "variables cannot be arranged; some variable repeats across parallel constraints"
                    .into(),
            ));
        }
        let subs = g
            .constraints
            .iter()
            .map(|c| match &c.kind {
                ConstraintKind::Parallel { sub, .. } => sub.clone(),
                _ => unreachable!("kappa_map verified all-parallel"),
            })
            .collect();
        let family = ConjunctionFamily::new(subs, g.k, g.field)?;
        let c = family.c;
        let q = c - g.k * family.t + 1;
        Ok(ParallelVerifier {
            g,
            arrangement,
            kappa,
            family,
            c,
            q,
            gammas: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn instance(&self) -> &VecCspInstance {
        &self.g
    }

    pub fn k(&self) -> usize {
        self.g.k
    }

    pub fn m(&self) -> usize {
        self.family.m()
    }

    pub fn d(&self) -> usize {
        self.g.d
    }

    pub fn t(&self) -> usize {
        self.family.t
    }

    /// Recorded shared circuit size.
    pub fn c(&self) -> usize {
        self.c
    }

    /// Recorded shared equation count.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n_parts(&self) -> u64 {
        1u64 << self.m()
    }

    pub fn kappa(&self) -> &[u64] {
        &self.kappa
    }

    pub fn arrangement(&self) -> &[usize] {
        &self.arrangement
    }

    pub fn pi1_spec(&self) -> OracleSpec {
        OracleSpec { field: self.g.field, arity: self.k(), dim: self.d() }
    }

    pub fn tau_seg_bits(&self, block: TauBlock) -> usize {
        match block {
            TauBlock::Tau1 => self.c,
            TauBlock::Tau2 => self.c * self.c,
        }
    }

    /// The quadratic equation system of one constraint subset, memoized.
    pub fn gamma(&self, s: u64) -> Arc<QuadeqInstance> {
        let mut cache = self.gammas.lock().expect("gamma cache poisoned");
        cache
            .entry(s)
            .or_insert_with(|| {
                let gamma = circuit_to_quadeq(&self.family.circuit(s));
                debug_assert_eq!(gamma.q(), self.q, "equation count must be uniform");
                Arc::new(gamma)
            })
            .clone()
    }

    // -- index resolution ---------------------------------------------------

    /// Segment of one part of a tau index.
    pub fn resolve_segment(&self, index: &TauIndex, part: u64) -> Bits {
        let mut seg = Bits::zeros(index.seg_bits);
        for term in &index.terms {
            match term {
                TauTerm::Explicit(parts) => seg.xor_assign(&parts[part as usize]),
                TauTerm::Seeded { seed } => {
                    seg.xor_assign(&Bits::from_prf(&Prf::new(*seed), part, index.seg_bits))
                }
                TauTerm::SeededMasked { seed, set } => {
                    if set.contains(part) {
                        seg.xor_assign(&Bits::from_prf(&Prf::new(*seed), part, index.seg_bits))
                    }
                }
                TauTerm::Uniform(bits) => seg.xor_assign(bits),
                TauTerm::SparseParts(map) => {
                    if let Some(bits) = map.get(&part) {
                        seg.xor_assign(bits);
                    }
                }
                TauTerm::Outer { r, rp } => {
                    let rseg = self.resolve_segment(r, part);
                    let rpseg = self.resolve_segment(rp, part);
                    seg.xor_outer(&rseg, &rpseg);
                }
                TauTerm::ConstraintCombo { h } => {
                    let gamma = self.gamma(part);
                    let n = self.c;
                    for (row, col) in gamma.combo_entries(h) {
                        seg.flip(row as usize * n + col as usize);
                    }
                }
            }
        }
        seg
    }

    /// Materialize every part of an index (micro index spaces only).
    pub fn resolve_full(&self, index: &TauIndex) -> Result<Vec<Bits>, PcppError> {
        let total = self.n_parts() as u128 * index.seg_bits as u128;
        if total > RESOLVE_FULL_CAP_BITS {
            return Err(PcppError::IndexResolutionCap(total, self.n_parts()));
        }
        Ok((0..self.n_parts()).map(|p| self.resolve_segment(index, p)).collect())
    }

    // -- oracle evaluation --------------------------------------------------

    /// Evaluate a tau oracle at an index: one bit per coordinate.
    pub fn eval_tau(
        &self,
        block: TauBlock,
        oracle: &TauOracle,
        index: &TauIndex,
    ) -> Result<Bits, PcppError> {
        debug_assert_eq!(index.seg_bits, self.tau_seg_bits(block));
        Ok(match oracle {
            TauOracle::Zero => Bits::zeros(self.d()),
            TauOracle::Honest { u } => {
                let mut out = Bits::zeros(self.d());
                for (j, message) in u.iter().enumerate() {
                    let seg = self.resolve_segment(index, self.kappa[j]);
                    let v = match block {
                        TauBlock::Tau1 => seg.dot(message),
                        TauBlock::Tau2 => seg.quad_form(message),
                    };
                    out.set(j, v);
                }
                out
            }
            TauOracle::MessageDelta { base, deltas } => {
                let mut out = self.eval_tau(block, base, index)?;
                for delta in deltas {
                    debug_assert_eq!(delta.bits.len(), self.tau_seg_bits(block));
                    let seg = self.resolve_segment(index, delta.part);
                    if seg.dot(&delta.bits) {
                        out.flip(delta.coord);
                    }
                }
                out
            }
            TauOracle::Overlay { base, patches } => {
                let here = self.resolve_full(index)?;
                for (patch_index, value) in patches {
                    if self.resolve_full(patch_index)? == here {
                        return Ok(value.clone());
                    }
                }
                self.eval_tau(block, base, index)?
            }
        })
    }

    // -- honest proofs ------------------------------------------------------

    pub fn honest_proof(&self, sigma: &Assignment) -> Result<ParallelProof, PcppError> {
        if self.g.evaluate(sigma)? != Rational::from_integer(1) {
            return Err(PcppError::NotASolution);
        }
        Ok(self.honest_proof_unchecked(sigma))
    }

    /// Honest-structured proof for an arbitrary assignment: per coordinate,
    /// the gate values of that coordinate's conjunction circuit.
    pub fn honest_proof_unchecked(&self, sigma: &Assignment) -> ParallelProof {
        let t = self.t();
        let u: Vec<Bits> = (0..self.d())
            .map(|j| {
                let inputs = coordinate_inputs(sigma, &self.arrangement, j, t);
                self.family.circuit(self.kappa[j]).eval_gates(&inputs)
            })
            .collect();
        let spec = self.g.field;
        let mut pi1 = FieldMatrix::zero(spec, self.d(), self.k());
        for (i, value) in sigma.values.iter().enumerate() {
            for r in 0..self.d() {
                pi1.set(r, i, value.get(r));
            }
        }
        ParallelProof {
            pi1: WordOracle::honest(pi1),
            tau1: TauOracle::Honest { u: u.clone() },
            tau2: TauOracle::Honest { u },
        }
    }

    // -- randomness accounting ---------------------------------------------

    pub fn test_counts(&self) -> Vec<TestCount> {
        TestId::PARALLEL
            .iter()
            .map(|&test| TestCount { test, log2: self.count_log2(test) })
            .collect()
    }

    pub fn count_log2(&self, test: TestId) -> u128 {
        let t = self.g.field.t() as u128;
        let k = self.k() as u128;
        let parts = self.n_parts() as u128;
        let c1 = self.c as u128 * parts;
        let c2 = (self.c as u128) * (self.c as u128) * parts;
        match test {
            TestId::P1 => t * 2 * k,
            TestId::P2 => 2 * c1,
            TestId::P3 => 2 * c2,
            TestId::P4 => parts + 2 * c1,
            TestId::P5 => parts + 2 * c2,
            TestId::P6 => 2 * c1 + c2,
            TestId::P7 => self.q as u128 + c2,
            TestId::P8 => k + t * k + t + c1,
            _ => panic!("not a parallel test: {test}"),
        }
    }

    // -- decode / sample ----------------------------------------------------

    /// Decode one canonical randomness index (explicit segments; only
    /// usable when the family's count fits the exhaustive cap).
    pub fn decode(&self, test: TestId, idx: u128) -> ParallelTest {
        let mut r = BitReader { idx };
        let spec = self.g.field;
        let parts = self.n_parts() as usize;
        let (c1, c2) = (self.c, self.c * self.c);
        match test {
            TestId::P1 => ParallelTest::P1 {
                alpha: r.field_vector(spec, self.k()),
                beta: r.field_vector(spec, self.k()),
            },
            TestId::P2 => ParallelTest::P2 {
                alpha: r.tau_index(parts, c1),
                beta: r.tau_index(parts, c1),
            },
            TestId::P3 => ParallelTest::P3 {
                alpha: r.tau_index(parts, c2),
                beta: r.tau_index(parts, c2),
            },
            TestId::P4 => {
                let t_set = PartSet::Explicit(r.bits(parts));
                let alpha = r.tau_index_masked(parts, c1, &t_set);
                let beta = r.tau_index(parts, c1);
                ParallelTest::P4 { t_set, alpha, beta }
            }
            TestId::P5 => {
                let t_set = PartSet::Explicit(r.bits(parts));
                let alpha = r.tau_index_masked(parts, c2, &t_set);
                let beta = r.tau_index(parts, c2);
                ParallelTest::P5 { t_set, alpha, beta }
            }
            TestId::P6 => ParallelTest::P6 {
                r: r.tau_index(parts, c1),
                rp: r.tau_index(parts, c1),
                y: r.tau_index(parts, c2),
            },
            TestId::P7 => ParallelTest::P7 {
                h: r.bits(self.q),
                beta: r.tau_index(parts, c2),
            },
            TestId::P8 => ParallelTest::P8 {
                d_set: r.bits(self.k()),
                beta: r.field_vector(spec, self.k()),
                psi: r.bits(self.t()),
                xi: r.tau_index(parts, c1),
            },
            _ => panic!("not a parallel test: {test}"),
        }
    }

    pub fn sample(&self, test: TestId, rng: &mut impl Rng) -> ParallelTest {
        let (c1, c2) = (self.c, self.c * self.c);
        let seeded = |rng: &mut dyn rand::RngCore, bits: usize| TauIndex {
            seg_bits: bits,
            terms: vec![TauTerm::Seeded { seed: rng.next_u64() }],
        };
        match test {
            TestId::P1 => ParallelTest::P1 {
                alpha: random_index(rng, self.pi1_spec()),
                beta: random_index(rng, self.pi1_spec()),
            },
            TestId::P2 => ParallelTest::P2 { alpha: seeded(rng, c1), beta: seeded(rng, c1) },
            TestId::P3 => ParallelTest::P3 { alpha: seeded(rng, c2), beta: seeded(rng, c2) },
            TestId::P4 => {
                let t_set = PartSet::Seeded { seed: rng.next_u64() };
                self.sample_zero_test(TauBlock::Tau1, t_set, rng)
            }
            TestId::P5 => {
                let t_set = PartSet::Seeded { seed: rng.next_u64() };
                self.sample_zero_test(TauBlock::Tau2, t_set, rng)
            }
            TestId::P6 => ParallelTest::P6 {
                r: seeded(rng, c1),
                rp: seeded(rng, c1),
                y: seeded(rng, c2),
            },
            TestId::P7 => ParallelTest::P7 {
                h: Bits::from_fn(self.q, |_| rng.gen_bool(0.5)),
                beta: seeded(rng, c2),
            },
            TestId::P8 => ParallelTest::P8 {
                d_set: Bits::from_fn(self.k(), |_| rng.gen_bool(0.5)),
                beta: random_index(rng, self.pi1_spec()),
                psi: Bits::from_fn(self.t(), |_| rng.gen_bool(0.5)),
                xi: seeded(rng, c1),
            },
            _ => panic!("not a parallel test: {test}"),
        }
    }

    /// A P4/P5 descriptor with a caller-chosen part subset and fresh
    /// sampled index seeds (used to enumerate subsets in soundness probes).
    pub fn sample_zero_test(
        &self,
        block: TauBlock,
        t_set: PartSet,
        rng: &mut impl Rng,
    ) -> ParallelTest {
        let bits = self.tau_seg_bits(block);
        let alpha = TauIndex {
            seg_bits: bits,
            terms: vec![TauTerm::SeededMasked { seed: rng.next_u64(), set: t_set.clone() }],
        };
        let beta = TauIndex {
            seg_bits: bits,
            terms: vec![TauTerm::Seeded { seed: rng.next_u64() }],
        };
        match block {
            TauBlock::Tau1 => ParallelTest::P4 { t_set, alpha, beta },
            TauBlock::Tau2 => ParallelTest::P5 { t_set, alpha, beta },
        }
    }

    // -- queries and acceptance ----------------------------------------------

    pub fn queries(&self, test: &ParallelTest) -> Vec<ParQuery> {
        use ParQuery::*;
        use TauBlock::*;
        match test {
            ParallelTest::P1 { alpha, beta } => vec![
                Pi1(alpha.clone()),
                Pi1(beta.clone()),
                Pi1(alpha.add(beta)),
            ],
            ParallelTest::P2 { alpha, beta } => vec![
                Tau(Tau1, alpha.clone()),
                Tau(Tau1, beta.clone()),
                Tau(Tau1, alpha.xor(beta)),
            ],
            ParallelTest::P3 { alpha, beta } => vec![
                Tau(Tau2, alpha.clone()),
                Tau(Tau2, beta.clone()),
                Tau(Tau2, alpha.xor(beta)),
            ],
            ParallelTest::P4 { alpha, beta, .. } => {
                vec![Tau(Tau1, beta.clone()), Tau(Tau1, alpha.xor(beta))]
            }
            ParallelTest::P5 { alpha, beta, .. } => {
                vec![Tau(Tau2, beta.clone()), Tau(Tau2, alpha.xor(beta))]
            }
            ParallelTest::P6 { r, rp, y } => {
                let shift = TauIndex {
                    seg_bits: y.seg_bits,
                    terms: vec![TauTerm::Outer { r: Box::new(r.clone()), rp: Box::new(rp.clone()) }],
                };
                vec![
                    Tau(Tau1, r.clone()),
                    Tau(Tau1, rp.clone()),
                    Tau(Tau2, y.clone()),
                    Tau(Tau2, y.xor(&shift)),
                ]
            }
            ParallelTest::P7 { h, beta } => {
                let combo = TauIndex {
                    seg_bits: beta.seg_bits,
                    terms: vec![TauTerm::ConstraintCombo { h: h.clone() }],
                };
                vec![Tau(Tau2, beta.clone()), Tau(Tau2, beta.xor(&combo))]
            }
            ParallelTest::P8 { d_set, beta, psi, xi } => {
                // alpha is the indicator of the arranged slots in D, mapped
                // back to original variable positions
                let spec = self.g.field;
                let mut alpha = FieldVector::zero(spec, self.k());
                for (_, slot) in d_set.iter_ones() {
                    alpha.set(self.arrangement[slot], spec.one());
                }
                // eta places psi's coefficients on the input bit group of
                // every slot in D, extended by zeros to length c
                let t = self.t();
                let mut eta = Bits::zeros(self.c);
                for (_, slot) in d_set.iter_ones() {
                    for bit in 0..t {
                        if psi.get(bit) {
                            eta.set(slot * t + bit, true);
                        }
                    }
                }
                let eta_term = TauIndex {
                    seg_bits: self.c,
                    terms: vec![TauTerm::Uniform(eta)],
                };
                vec![
                    Pi1(beta.clone()),
                    Pi1(alpha.add(beta)),
                    Tau(Tau1, xi.clone()),
                    Tau(Tau1, xi.xor(&eta_term)),
                ]
            }
        }
    }

    pub fn accept(&self, test: &ParallelTest, answers: &[ParAnswer]) -> bool {
        let field = |a: &ParAnswer| match a {
            ParAnswer::Field(v) => v.clone(),
            ParAnswer::Bits(_) => panic!("expected field answer"),
        };
        let bits = |a: &ParAnswer| match a {
            ParAnswer::Bits(b) => b.clone(),
            ParAnswer::Field(_) => panic!("expected bit answer"),
        };
        match test {
            ParallelTest::P1 { .. } => field(&answers[0]).add(&field(&answers[1])) == field(&answers[2]),
            ParallelTest::P2 { .. } | ParallelTest::P3 { .. } => {
                bits(&answers[0]).xor(&bits(&answers[1])) == bits(&answers[2])
            }
            ParallelTest::P4 { t_set, .. } | ParallelTest::P5 { t_set, .. } => {
                let v = bits(&answers[0]).xor(&bits(&answers[1]));
                (0..self.d()).all(|j| t_set.contains(self.kappa[j]) || !v.get(j))
            }
            ParallelTest::P6 { .. } => {
                let left1 = bits(&answers[0]);
                let left2 = bits(&answers[1]);
                let right = bits(&answers[2]).xor(&bits(&answers[3]));
                (0..self.d()).all(|j| (left1.get(j) && left2.get(j)) == right.get(j))
            }
            ParallelTest::P7 { h, .. } => {
                let y = bits(&answers[0]).xor(&bits(&answers[1]));
                (0..self.d()).all(|j| y.get(j) == self.gamma(self.kappa[j]).combo_rhs(h))
            }
            ParallelTest::P8 { psi, .. } => {
                let sum = field(&answers[0]).add(&field(&answers[1]));
                let rhs = bits(&answers[2]).xor(&bits(&answers[3]));
                (0..self.d()).all(|j| chi_flatten(sum.get(j)).dot(psi) == rhs.get(j))
            }
        }
    }

    pub fn run(
        &self,
        pi1: &WordOracle,
        tau1: &TauOracle,
        tau2: &TauOracle,
        test: &ParallelTest,
    ) -> Result<bool, PcppError> {
        let queries = self.queries(test);
        let mut answers = Vec::with_capacity(queries.len());
        for q in &queries {
            answers.push(match q {
                ParQuery::Pi1(index) => ParAnswer::Field(pi1.eval(index)?),
                ParQuery::Tau(TauBlock::Tau1, index) => {
                    ParAnswer::Bits(self.eval_tau(TauBlock::Tau1, tau1, index)?)
                }
                ParQuery::Tau(TauBlock::Tau2, index) => {
                    ParAnswer::Bits(self.eval_tau(TauBlock::Tau2, tau2, index)?)
                }
            });
        }
        Ok(self.accept(test, &answers))
    }
}

/// Little-endian bit reader over a randomness index; base-`|F|` digits are
/// groups of `t` bits.
struct BitReader {
    idx: u128,
}

impl BitReader {
    fn bit(&mut self) -> bool {
        let b = self.idx & 1 == 1;
        self.idx >>= 1;
        b
    }

    fn bits(&mut self, len: usize) -> Bits {
        Bits::from_fn(len, |_| self.bit())
    }

    fn field_vector(&mut self, spec: FieldSpec, len: usize) -> FieldVector {
        let t = spec.t() as usize;
        let mut v = FieldVector::zero(spec, len);
        for i in 0..len {
            let mut e = 0u8;
            for bit in 0..t {
                if self.bit() {
                    e |= 1 << bit;
                }
            }
            v.set(i, spec.el(e));
        }
        v
    }

    fn tau_index(&mut self, parts: usize, seg_bits: usize) -> TauIndex {
        let segs: Vec<Bits> = (0..parts).map(|_| self.bits(seg_bits)).collect();
        TauIndex { seg_bits, terms: vec![TauTerm::Explicit(segs)] }
    }

    /// Read segments for every part, zeroing the ones outside `set` (the
    /// discarded digits keep the index space a uniform product).
    fn tau_index_masked(&mut self, parts: usize, seg_bits: usize, set: &PartSet) -> TauIndex {
        let segs: Vec<Bits> = (0..parts)
            .map(|p| {
                let raw = self.bits(seg_bits);
                if set.contains(p as u64) {
                    raw
                } else {
                    Bits::zeros(seg_bits)
                }
            })
            .collect();
        TauIndex { seg_bits, terms: vec![TauTerm::Explicit(segs)] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::fixtures::{assignment, par1};
    use crate::gf::GF2;
    use rand::RngCore;

    fn par1_verifier() -> ParallelVerifier {
        ParallelVerifier::new(par1()).unwrap()
    }

    fn par1_solution() -> Assignment {
        assignment(GF2, &[&[0, 1], &[1, 0]])
    }

    #[test]
    fn shape_of_par1() {
        let v = par1_verifier();
        assert_eq!(v.m(), 1);
        assert_eq!(v.n_parts(), 2);
        assert_eq!(v.kappa(), &[1, 1]);
        assert_eq!(v.c(), 9);
        assert_eq!(v.q(), 8);
        assert_eq!(v.count_log2(TestId::P1), 4);
        assert_eq!(v.count_log2(TestId::P2), 36);
        assert_eq!(v.count_log2(TestId::P4), 2 + 36);
        assert_eq!(v.count_log2(TestId::P7), 8 + 162);
        assert_eq!(v.count_log2(TestId::P8), 2 + 2 + 1 + 18);
    }

    #[test]
    fn honest_tau1_evaluates_sparse_inner_products() {
        let v = par1_verifier();
        let sigma = par1_solution();
        let proof = v.honest_proof(&sigma).unwrap();
        // index zero everywhere evaluates to zero
        let zero = TauIndex::zero(v.c());
        assert!(v.eval_tau(TauBlock::Tau1, &proof.tau1, &zero).unwrap().is_zero());
        // indicator of input bit y_1 in the kappa(1) part: coordinate j
        // reads the chi bit of sigma^j at arranged slot 1
        let mut seg = Bits::zeros(v.c());
        seg.set(0, true); // slot 0, bit 0
        let mut parts = vec![Bits::zeros(v.c()); v.n_parts() as usize];
        parts[v.kappa()[0] as usize] = seg;
        let index = TauIndex { seg_bits: v.c(), terms: vec![TauTerm::Explicit(parts)] };
        let got = v.eval_tau(TauBlock::Tau1, &proof.tau1, &index).unwrap();
        for j in 0..v.d() {
            let expect = sigma.values[v.arrangement()[0]].get(j).bits() & 1 == 1;
            assert_eq!(got.get(j), expect);
        }
        // support only in the empty-set part evaluates to zero
        let mut other = vec![Bits::zeros(v.c()); 2];
        other[0] = Bits::from_fn(v.c(), |i| i % 2 == 0);
        let wrong_part = TauIndex { seg_bits: v.c(), terms: vec![TauTerm::Explicit(other)] };
        assert!(v.eval_tau(TauBlock::Tau1, &proof.tau1, &wrong_part).unwrap().is_zero());
    }

    #[test]
    fn p1_exhaustive_honest_accepts() {
        let v = par1_verifier();
        let proof = v.honest_proof(&par1_solution()).unwrap();
        for idx in 0..(1u128 << v.count_log2(TestId::P1)) {
            let t = v.decode(TestId::P1, idx);
            assert!(v.run(&proof.pi1, &proof.tau1, &proof.tau2, &t).unwrap());
        }
    }

    #[test]
    fn sampled_honest_accepts_all_tests() {
        let v = par1_verifier();
        let proof = v.honest_proof(&par1_solution()).unwrap();
        let mut rng = crate::rng::sampling_rng(40, 0);
        for test in TestId::PARALLEL {
            for _ in 0..300 {
                let t = v.sample(test, &mut rng);
                assert!(
                    v.run(&proof.pi1, &proof.tau1, &proof.tau2, &t).unwrap(),
                    "honest proof rejected by {test}"
                );
            }
        }
    }

    #[test]
    fn decoded_honest_accepts_p2_p8_spot() {
        // decode explicit indices (tiny subset) to exercise the canonical
        // bit layout, not just the seeded sampler
        let v = par1_verifier();
        let proof = v.honest_proof(&par1_solution()).unwrap();
        for test in [TestId::P2, TestId::P4, TestId::P6, TestId::P7, TestId::P8] {
            for idx in [0u128, 1, 5, 1 << 20, (1 << 45) | 3] {
                let t = v.decode(test, idx);
                assert!(
                    v.run(&proof.pi1, &proof.tau1, &proof.tau2, &t).unwrap(),
                    "honest proof rejected by {test} at {idx}"
                );
            }
        }
    }

    #[test]
    fn planted_bit_in_wrong_part_trips_p4() {
        let v = par1_verifier();
        let proof = v.honest_proof(&par1_solution()).unwrap();
        // plant one bit in the empty-set part on coordinate 0
        let mut delta = Bits::zeros(v.c());
        delta.set(3, true);
        let tau1 = TauOracle::MessageDelta {
            base: Box::new(proof.tau1.clone()),
            deltas: vec![CoordDelta { coord: 0, part: 0, bits: delta }],
        };
        // T = {part 0}: kappa(j) = 1 is outside T, correction exact, so
        // rejection happens exactly when <alpha_0, delta> = 1
        let mut rng = crate::rng::sampling_rng(41, 0);
        let t_mask = Bits::from_bools(&[true, false]);
        let mut rejected = 0;
        let trials = 4000;
        for _ in 0..trials {
            let t = v.sample_zero_test(TauBlock::Tau1, PartSet::Explicit(t_mask.clone()), &mut rng);
            if !v.run(&proof.pi1, &tau1, &proof.tau2, &t).unwrap() {
                rejected += 1;
            }
        }
        let rate = rejected as f64 / trials as f64;
        assert!((rate - 0.5).abs() < 0.05, "rejection rate {rate} far from 1/2");
    }

    #[test]
    fn violated_equation_trips_p7_for_half_of_subsets() {
        let v = par1_verifier();
        // (1,1) on both coordinates violates NAND; the unchecked honest
        // proof then has a consistent w = u u^T but violated equations
        let bad = assignment(GF2, &[&[1, 1], &[1, 1]]);
        let proof = v.honest_proof_unchecked(&bad);
        let mut rng = crate::rng::sampling_rng(42, 0);
        let mut rejected = 0u32;
        let total = 1u32 << v.q();
        for h_mask in 0..total {
            let h = Bits::from_fn(v.q(), |i| (h_mask >> i) & 1 == 1);
            let t = ParallelTest::P7 {
                h,
                beta: TauIndex {
                    seg_bits: v.c() * v.c(),
                    terms: vec![TauTerm::Seeded { seed: rng.next_u64() }],
                },
            };
            if !v.run(&proof.pi1, &proof.tau1, &proof.tau2, &t).unwrap() {
                rejected += 1;
            }
        }
        assert!(rejected * 2 >= total, "rejected {rejected} of {total}");
    }

    #[test]
    fn overlay_patches_apply_on_micro_indices() {
        let v = par1_verifier();
        let proof = v.honest_proof(&par1_solution()).unwrap();
        let index = TauIndex {
            seg_bits: v.c(),
            terms: vec![TauTerm::Uniform(Bits::from_fn(v.c(), |i| i == 2))],
        };
        let patched = TauOracle::Overlay {
            base: Box::new(proof.tau1.clone()),
            patches: vec![(index.clone(), Bits::from_bools(&[true, true]))],
        };
        assert_eq!(
            v.eval_tau(TauBlock::Tau1, &patched, &index).unwrap(),
            Bits::from_bools(&[true, true])
        );
        // a different index falls through to the base
        let other = TauIndex::zero(v.c());
        assert_eq!(
            v.eval_tau(TauBlock::Tau1, &patched, &other).unwrap(),
            v.eval_tau(TauBlock::Tau1, &proof.tau1, &other).unwrap()
        );
    }

    #[test]
    fn gf4_two_constraint_instance_honest_accepts() {
        // k=4, d=3 over GF(4), two parallel constraints on different
        // coordinate sets: kappa varies per coordinate and tau blocks
        // have four parts
        use crate::csp::{Constraint, SubTable, VecCspInstance};
        use crate::gf::GF4;
        let le = SubTable::from_fn(GF4, |a, b| a.bits() <= b.bits());
        let neq = SubTable::from_fn(GF4, |a, b| a != b);
        let g = VecCspInstance::new(
            GF4,
            3,
            4,
            vec![
                Constraint {
                    u: 0,
                    v: 1,
                    kind: ConstraintKind::Parallel { sub: le, q: vec![0, 2] },
                },
                Constraint {
                    u: 2,
                    v: 3,
                    kind: ConstraintKind::Parallel { sub: neq, q: vec![1] },
                },
            ],
        );
        let sigma = g.brute_force_solve(24).unwrap().expect("satisfiable");
        let v = ParallelVerifier::new(g).unwrap();
        assert_eq!(v.n_parts(), 4);
        assert_eq!(v.kappa(), &[0b01, 0b10, 0b01]);
        let proof = v.honest_proof(&sigma).unwrap();
        let mut rng = crate::rng::sampling_rng(44, 0);
        for test in TestId::PARALLEL {
            for _ in 0..150 {
                let t = v.sample(test, &mut rng);
                assert!(
                    v.run(&proof.pi1, &proof.tau1, &proof.tau2, &t).unwrap(),
                    "honest proof rejected by {test}"
                );
            }
        }
        // honest structure over a non-solution is rejected somewhere
        let bad = crate::csp::Assignment {
            values: vec![
                crate::gf::FieldVector::from_bits(GF4, vec![3, 0, 0]).unwrap(),
                crate::gf::FieldVector::from_bits(GF4, vec![0, 0, 0]).unwrap(),
                crate::gf::FieldVector::from_bits(GF4, vec![0, 1, 0]).unwrap(),
                crate::gf::FieldVector::from_bits(GF4, vec![0, 1, 0]).unwrap(),
            ],
        };
        let cheat = v.honest_proof_unchecked(&bad);
        let mut rejections = 0u32;
        for _ in 0..600 {
            let t = v.sample(TestId::P7, &mut rng);
            if !v.run(&cheat.pi1, &cheat.tau1, &cheat.tau2, &t).unwrap() {
                rejections += 1;
            }
        }
        assert!(rejections > 200, "only {rejections} rejections of a non-solution");
    }

    #[test]
    fn query_budget() {
        let v = par1_verifier();
        let mut rng = crate::rng::sampling_rng(43, 0);
        for test in TestId::PARALLEL {
            let t = v.sample(test, &mut rng);
            let n = v.queries(&t).len();
            let expected = match test {
                TestId::P1 | TestId::P2 | TestId::P3 => 3,
                TestId::P4 | TestId::P5 | TestId::P7 => 2,
                _ => 4,
            };
            assert_eq!(n, expected, "{test}");
        }
    }
}
