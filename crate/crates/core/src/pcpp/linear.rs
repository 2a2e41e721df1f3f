//! PPCPP verifier for all-linear instances (tests L1-L4).
//!
//! The proof is two parallel Walsh-Hadamard words: `pi1` over `F^k`
//! (supposed encoding of an assignment) and `pi2` over `F^{km}` (supposed
//! encoding of the auxiliary collection `z_{p,e} = M_e sigma(p)` for every
//! variable/constraint pair, even non-adjacent ones). Pair indices are laid
//! out variable-major: slot `p*m + e`.
//!
//! * L1/L2 are BLR linearity tests on `pi1`/`pi2`.
//! * L3 checks the auxiliary products: with random `lambda`, `mu` and
//!   `gamma_{p,e} = lambda_p mu_e`, locally corrected decodings satisfy
//!   `pi2[gamma] = M_0 pi1[lambda]` where `M_0 = sum_e mu_e M_e`.
//! * L4 checks the constraints: with `lambda_p` the sum of `mu_e` over
//!   constraints headed at `p`, and `gamma` holding `mu_e` at the tail
//!   slot `(v_e, e)`, corrected decodings satisfy `pi2[gamma] = pi1[lambda]`.

use super::{PcppError, TestCount, TestId};
use crate::csp::{Assignment, ConstraintKind, Rational, VecCspInstance};
use crate::gf::{FieldMatrix, FieldSpec, FieldVector};
use crate::hadamard::{random_index, OracleSpec, WordOracle};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct LinearVerifier {
    g: VecCspInstance,
    matrices: Vec<FieldMatrix>,
    heads: Vec<usize>,
    tails: Vec<usize>,
}

/// Proof blocks for the linear verifier.
#[derive(Clone, Debug)]
pub struct LinearProof {
    pub pi1: WordOracle,
    pub pi2: WordOracle,
}

/// Decoded random elements of one test, in the order the test introduces
/// them.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearTest {
    L1 { a1: FieldVector, a2: FieldVector },
    L2 { b1: FieldVector, b2: FieldVector },
    L3 { lambda: FieldVector, mu: FieldVector, a: FieldVector, b: FieldVector },
    L4 { mu: FieldVector, a: FieldVector, b: FieldVector },
}

impl LinearTest {
    pub fn id(&self) -> TestId {
        match self {
            LinearTest::L1 { .. } => TestId::L1,
            LinearTest::L2 { .. } => TestId::L2,
            LinearTest::L3 { .. } => TestId::L3,
            LinearTest::L4 { .. } => TestId::L4,
        }
    }
}

/// Which proof block a query touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinBlock {
    Pi1,
    Pi2,
}

fn spec_of(g: &VecCspInstance) -> FieldSpec {
    g.field
}

fn rand_vec(rng: &mut impl Rng, spec: FieldSpec, len: usize) -> FieldVector {
    random_index(rng, OracleSpec { field: spec, arity: len, dim: 1 })
}

/// Little-endian base-`|F|` digit reader over a randomness index.
struct DigitReader {
    idx: u128,
    base: u128,
}

impl DigitReader {
    fn new(idx: u128, spec: FieldSpec) -> Self {
        DigitReader { idx, base: spec.order() as u128 }
    }

    fn vector(&mut self, spec: FieldSpec, len: usize) -> FieldVector {
        let mut v = FieldVector::zero(spec, len);
        for i in 0..len {
            v.set(i, spec.el((self.idx % self.base) as u8));
            self.idx /= self.base;
        }
        v
    }
}

impl LinearVerifier {
    /// Build the verifier for an all-linear instance.
    pub fn new(g: VecCspInstance) -> Result<Self, PcppError> {
        let mut matrices = Vec::with_capacity(g.constraints.len());
        let mut heads = Vec::with_capacity(g.constraints.len());
        let mut tails = Vec::with_capacity(g.constraints.len());
        for (i, c) in g.constraints.iter().enumerate() {
            match &c.kind {
                ConstraintKind::Linear { m } => {
                    matrices.push(m.clone());
                    heads.push(c.u);
                    tails.push(c.v);
                }
                _ => return Err(PcppError::NotAllLinear(i)),
            }
        }
        Ok(LinearVerifier { g, matrices, heads, tails })
    }

    pub fn instance(&self) -> &VecCspInstance {
        &self.g
    }

    pub fn k(&self) -> usize {
        self.g.k
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn d(&self) -> usize {
        self.g.d
    }

    pub fn pi1_spec(&self) -> OracleSpec {
        OracleSpec { field: spec_of(&self.g), arity: self.k(), dim: self.d() }
    }

    pub fn pi2_spec(&self) -> OracleSpec {
        OracleSpec {
            field: spec_of(&self.g),
            arity: self.k() * self.m(),
            dim: self.d(),
        }
    }

    /// The honest proof for a solution: `pi1 = PWH(sigma)` and `pi2` the
    /// encoding of all auxiliary products.
    pub fn honest_proof(&self, sigma: &Assignment) -> Result<LinearProof, PcppError> {
        if self.g.evaluate(sigma)? != Rational::from_integer(1) {
            return Err(PcppError::NotASolution);
        }
        Ok(self.honest_proof_unchecked(sigma))
    }

    /// Honest-structured proof for an arbitrary assignment; only a solution
    /// yields acceptance 1.
    pub fn honest_proof_unchecked(&self, sigma: &Assignment) -> LinearProof {
        let spec = spec_of(&self.g);
        let (k, m, d) = (self.k(), self.m(), self.d());
        let mut pi1 = FieldMatrix::zero(spec, d, k);
        for (i, value) in sigma.values.iter().enumerate() {
            for r in 0..d {
                pi1.set(r, i, value.get(r));
            }
        }
        let mut pi2 = FieldMatrix::zero(spec, d, k * m);
        for p in 0..k {
            for (e, m_e) in self.matrices.iter().enumerate() {
                let z = m_e.mul_vector(&sigma.values[p]).expect("square matrix");
                for r in 0..d {
                    pi2.set(r, p * m + e, z.get(r));
                }
            }
        }
        LinearProof {
            pi1: WordOracle::honest(pi1),
            pi2: WordOracle::honest(pi2),
        }
    }

    pub fn test_counts(&self) -> Vec<TestCount> {
        TestId::LINEAR
            .iter()
            .map(|&test| TestCount { test, log2: self.count_log2(test) })
            .collect()
    }

    pub fn count_log2(&self, test: TestId) -> u128 {
        let t = spec_of(&self.g).t() as u128;
        let k = self.k() as u128;
        let m = self.m() as u128;
        match test {
            TestId::L1 => t * 2 * k,
            TestId::L2 => t * 2 * k * m,
            TestId::L3 => t * (2 * k + m + k * m),
            TestId::L4 => t * (k + m + k * m),
            _ => panic!("not a linear test: {test}"),
        }
    }

    /// Decode one canonical randomness index into a test descriptor.
    pub fn decode(&self, test: TestId, idx: u128) -> LinearTest {
        let spec = spec_of(&self.g);
        let (k, m) = (self.k(), self.m());
        let mut r = DigitReader::new(idx, spec);
        match test {
            TestId::L1 => LinearTest::L1 {
                a1: r.vector(spec, k),
                a2: r.vector(spec, k),
            },
            TestId::L2 => LinearTest::L2 {
                b1: r.vector(spec, k * m),
                b2: r.vector(spec, k * m),
            },
            TestId::L3 => LinearTest::L3 {
                lambda: r.vector(spec, k),
                mu: r.vector(spec, m),
                a: r.vector(spec, k),
                b: r.vector(spec, k * m),
            },
            TestId::L4 => LinearTest::L4 {
                mu: r.vector(spec, m),
                a: r.vector(spec, k),
                b: r.vector(spec, k * m),
            },
            _ => panic!("not a linear test: {test}"),
        }
    }

    pub fn sample(&self, test: TestId, rng: &mut impl Rng) -> LinearTest {
        let spec = spec_of(&self.g);
        let (k, m) = (self.k(), self.m());
        match test {
            TestId::L1 => LinearTest::L1 {
                a1: rand_vec(rng, spec, k),
                a2: rand_vec(rng, spec, k),
            },
            TestId::L2 => LinearTest::L2 {
                b1: rand_vec(rng, spec, k * m),
                b2: rand_vec(rng, spec, k * m),
            },
            TestId::L3 => LinearTest::L3 {
                lambda: rand_vec(rng, spec, k),
                mu: rand_vec(rng, spec, m),
                a: rand_vec(rng, spec, k),
                b: rand_vec(rng, spec, k * m),
            },
            TestId::L4 => LinearTest::L4 {
                mu: rand_vec(rng, spec, m),
                a: rand_vec(rng, spec, k),
                b: rand_vec(rng, spec, k * m),
            },
            _ => panic!("not a linear test: {test}"),
        }
    }

    /// `M_0 = sum_e mu_e M_e`.
    pub fn combined_matrix(&self, mu: &FieldVector) -> FieldMatrix {
        let spec = spec_of(&self.g);
        let mut m0 = FieldMatrix::zero(spec, self.d(), self.d());
        for (e, m_e) in self.matrices.iter().enumerate() {
            m0.add_assign(&m_e.scale(mu.get(e)));
        }
        m0
    }

    /// `gamma_{p,e} = lambda_p mu_e`, variable-major.
    fn rank_one_gamma(&self, lambda: &FieldVector, mu: &FieldVector) -> FieldVector {
        let spec = spec_of(&self.g);
        let (k, m) = (self.k(), self.m());
        let mut gamma = FieldVector::zero(spec, k * m);
        for p in 0..k {
            for e in 0..m {
                gamma.set(p * m + e, lambda.get(p) * mu.get(e));
            }
        }
        gamma
    }

    /// `lambda_p = sum of mu_e over constraints with head p`.
    fn head_lambda(&self, mu: &FieldVector) -> FieldVector {
        let spec = spec_of(&self.g);
        let mut lambda = FieldVector::zero(spec, self.k());
        for (e, &p) in self.heads.iter().enumerate() {
            lambda.set(p, lambda.get(p) + mu.get(e));
        }
        lambda
    }

    /// `gamma_{p,e} = mu_e` when the tail of `e` is `p`, else 0.
    fn tail_gamma(&self, mu: &FieldVector) -> FieldVector {
        let spec = spec_of(&self.g);
        let m = self.m();
        let mut gamma = FieldVector::zero(spec, self.k() * m);
        for (e, &p) in self.tails.iter().enumerate() {
            gamma.set(p * m + e, mu.get(e));
        }
        gamma
    }

    /// The (at most four) query indices of a descriptor.
    pub fn queries(&self, test: &LinearTest) -> Vec<(LinBlock, FieldVector)> {
        match test {
            LinearTest::L1 { a1, a2 } => vec![
                (LinBlock::Pi1, a1.clone()),
                (LinBlock::Pi1, a2.clone()),
                (LinBlock::Pi1, a1.add(a2)),
            ],
            LinearTest::L2 { b1, b2 } => vec![
                (LinBlock::Pi2, b1.clone()),
                (LinBlock::Pi2, b2.clone()),
                (LinBlock::Pi2, b1.add(b2)),
            ],
            LinearTest::L3 { lambda, mu, a, b } => {
                let gamma = self.rank_one_gamma(lambda, mu);
                vec![
                    (LinBlock::Pi1, a.clone()),
                    (LinBlock::Pi1, a.add(lambda)),
                    (LinBlock::Pi2, b.clone()),
                    (LinBlock::Pi2, b.add(&gamma)),
                ]
            }
            LinearTest::L4 { mu, a, b } => {
                let lambda = self.head_lambda(mu);
                let gamma = self.tail_gamma(mu);
                vec![
                    (LinBlock::Pi1, a.clone()),
                    (LinBlock::Pi1, a.add(&lambda)),
                    (LinBlock::Pi2, b.clone()),
                    (LinBlock::Pi2, b.add(&gamma)),
                ]
            }
        }
    }

    /// Accept predicate over the answers, aligned with [`Self::queries`].
    pub fn accept(&self, test: &LinearTest, answers: &[FieldVector]) -> bool {
        match test {
            LinearTest::L1 { .. } | LinearTest::L2 { .. } => {
                answers[0].add(&answers[1]) == answers[2]
            }
            LinearTest::L3 { mu, .. } => {
                // pi2[b+gamma] - pi2[b] = M0 (pi1[a+lambda] - pi1[a])
                let m0 = self.combined_matrix(mu);
                let lhs = answers[3].add(&answers[2]);
                let rhs = m0
                    .mul_vector(&answers[1].add(&answers[0]))
                    .expect("square matrix");
                lhs == rhs
            }
            LinearTest::L4 { .. } => answers[3].add(&answers[2]) == answers[1].add(&answers[0]),
        }
    }

    /// Execute one descriptor against proof oracles.
    pub fn run(
        &self,
        pi1: &WordOracle,
        pi2: &WordOracle,
        test: &LinearTest,
    ) -> Result<bool, PcppError> {
        let queries = self.queries(test);
        let mut answers = Vec::with_capacity(queries.len());
        for (block, index) in &queries {
            let oracle = match block {
                LinBlock::Pi1 => pi1,
                LinBlock::Pi2 => pi2,
            };
            answers.push(oracle.eval(index)?);
        }
        Ok(self.accept(test, &answers))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::fixtures::{assignment, lin1};
    use crate::gf::GF2;

    fn lin1_verifier() -> LinearVerifier {
        LinearVerifier::new(lin1()).unwrap()
    }

    #[test]
    fn rejects_parallel_constraints() {
        assert!(matches!(
            LinearVerifier::new(crate::csp::fixtures::par1()),
            Err(PcppError::NotAllLinear(0))
        ));
    }

    #[test]
    fn per_test_counts_for_lin1() {
        let v = lin1_verifier();
        let counts: Vec<u128> = v.test_counts().iter().map(|c| c.exact().unwrap()).collect();
        assert_eq!(counts, vec![16, 16, 128, 32]);
    }

    #[test]
    fn honest_proof_z_layout() {
        let v = lin1_verifier();
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let proof = v.honest_proof(&sigma).unwrap();
        // z = (M sigma(x1), M sigma(x2)) = (1, 1); pi2[(1,0)] decodes z_1
        let idx = FieldVector::from_bits(GF2, vec![1, 0]).unwrap();
        assert_eq!(proof.pi2.eval(&idx).unwrap().get(0).bits(), 1);
        // codeword at the origin is zero
        assert!(proof.pi1.eval(&FieldVector::zero(GF2, 2)).unwrap().is_zero());
    }

    #[test]
    fn honest_proof_requires_solution() {
        let v = lin1_verifier();
        let bad = assignment(GF2, &[&[1], &[0]]);
        assert!(matches!(v.honest_proof(&bad), Err(PcppError::NotASolution)));
    }

    #[test]
    fn honest_accepts_every_descriptor() {
        let v = lin1_verifier();
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let proof = v.honest_proof(&sigma).unwrap();
        for test in TestId::LINEAR {
            let total = v.count_log2(test);
            for idx in 0..(1u128 << total) {
                let t = v.decode(test, idx);
                assert!(v.run(&proof.pi1, &proof.pi2, &t).unwrap(), "{test} idx {idx}");
            }
        }
    }

    #[test]
    fn l4_example_zero_pi2_rejects() {
        let v = lin1_verifier();
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let honest = v.honest_proof(&sigma).unwrap();
        let zero_pi2 = WordOracle::honest(FieldMatrix::zero(GF2, 1, 2));
        // mu = (1), a = b = 0: rhs = pi1[lambda] = sigma(x1) = 1, lhs = 0
        let t = LinearTest::L4 {
            mu: FieldVector::from_bits(GF2, vec![1]).unwrap(),
            a: FieldVector::zero(GF2, 2),
            b: FieldVector::zero(GF2, 2),
        };
        assert!(!v.run(&honest.pi1, &zero_pi2, &t).unwrap());
        assert!(v.run(&honest.pi1, &honest.pi2, &t).unwrap());
    }

    #[test]
    fn l3_example_direct_evaluation() {
        let v = lin1_verifier();
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let proof = v.honest_proof(&sigma).unwrap();
        let t = LinearTest::L3 {
            lambda: FieldVector::from_bits(GF2, vec![1, 0]).unwrap(),
            mu: FieldVector::from_bits(GF2, vec![1]).unwrap(),
            a: FieldVector::zero(GF2, 2),
            b: FieldVector::zero(GF2, 2),
        };
        assert!(v.run(&proof.pi1, &proof.pi2, &t).unwrap());
    }

    #[test]
    fn query_budget_at_most_four() {
        let v = lin1_verifier();
        for test in TestId::LINEAR {
            for idx in 0..(1u128 << v.count_log2(test)) {
                let t = v.decode(test, idx);
                assert!(v.queries(&t).len() <= 4);
            }
        }
    }

    #[test]
    fn gf4_micro_instance_exhaustive_completeness() {
        // k=2, d=2 over GF(4), one non-identity linear constraint; all
        // four families stay enumerable (4^7 = 16384 for L3)
        use crate::csp::{Constraint, ConstraintKind, VecCspInstance};
        use crate::gf::{FieldMatrix, GF4};
        let m = FieldMatrix::from_rows(GF4, &[vec![2, 1], vec![0, 3]]).unwrap();
        let g = VecCspInstance::new(
            GF4,
            2,
            2,
            vec![Constraint { u: 0, v: 1, kind: ConstraintKind::Linear { m: m.clone() } }],
        );
        let v = LinearVerifier::new(g.clone()).unwrap();
        let tail = FieldVector::from_bits(GF4, vec![3, 1]).unwrap();
        let sigma = crate::csp::Assignment {
            values: vec![m.mul_vector(&tail).unwrap(), tail],
        };
        assert!(g.is_solution(&sigma).unwrap());
        let proof = v.honest_proof(&sigma).unwrap();
        for test in TestId::LINEAR {
            for idx in 0..(1u128 << v.count_log2(test)) {
                let t = v.decode(test, idx);
                assert!(v.run(&proof.pi1, &proof.pi2, &t).unwrap(), "{test} idx {idx}");
            }
        }
        // perturbing the tail breaks the constraint and some test notices
        let bad = crate::csp::Assignment {
            values: vec![
                sigma.values[0].clone(),
                FieldVector::from_bits(GF4, vec![3, 2]).unwrap(),
            ],
        };
        let cheat = v.honest_proof_unchecked(&bad);
        let rejected = TestId::LINEAR.iter().any(|&test| {
            (0..(1u128 << v.count_log2(test)))
                .any(|idx| !v.run(&cheat.pi1, &cheat.pi2, &v.decode(test, idx)).unwrap())
        });
        assert!(rejected);
    }

    #[test]
    fn decode_is_little_endian_in_introduction_order() {
        let v = lin1_verifier();
        // L3 digits: lambda (2), mu (1), a (2), b (2); index 1 sets lambda_1
        if let LinearTest::L3 { lambda, mu, a, b } = v.decode(TestId::L3, 1) {
            assert_eq!(lambda.raw(), &[1, 0]);
            assert!(mu.is_zero() && a.is_zero() && b.is_zero());
        } else {
            panic!("wrong variant");
        }
        // index 4 sets mu_1 (after two lambda digits)
        if let LinearTest::L3 { lambda, mu, .. } = v.decode(TestId::L3, 4) {
            assert!(lambda.is_zero());
            assert_eq!(mu.raw(), &[1]);
        } else {
            panic!("wrong variant");
        }
    }
}
