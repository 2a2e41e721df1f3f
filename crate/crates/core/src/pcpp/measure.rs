//! Acceptance measurement: exhaustive exact probabilities over the
//! canonical randomness enumeration, or seeded Monte-Carlo estimates.
//!
//! Tests within one verifier are weighted equally; the combined verifier
//! weights its two branches 1/2 each. All exact arithmetic is rational and
//! merge order never affects results, so randomness ranges can be sharded.

use super::combined::{CombinedProof, CombinedVerifier};
use super::linear::{LinearProof, LinearTest, LinearVerifier};
use super::parallel::{ParallelProof, ParallelTest, ParallelVerifier};
use super::{PcppError, TestCount, TestId, EXHAUSTIVE_CAP_LOG2};
use crate::stats::Estimate;
use num::BigRational;
use num::{BigInt, One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A verifier of any of the three kinds. Built once per instance and
/// passed by reference, so the variant size imbalance is harmless.
#[allow(clippy::large_enum_variant)]
pub enum Verifier {
    Linear(LinearVerifier),
    Parallel(ParallelVerifier),
    Combined(CombinedVerifier),
}

/// Matching proof bundle.
#[derive(Clone, Debug)]
pub enum ProofBundle {
    Linear(LinearProof),
    Parallel(ParallelProof),
    Combined(CombinedProof),
}

/// A decoded descriptor of either family.
#[derive(Clone, Debug)]
pub enum AnyTest {
    Linear(LinearTest),
    Parallel(ParallelTest),
}

impl AnyTest {
    pub fn id(&self) -> TestId {
        match self {
            AnyTest::Linear(t) => t.id(),
            AnyTest::Parallel(t) => t.id(),
        }
    }
}

impl Verifier {
    pub fn test_ids(&self) -> Vec<TestId> {
        match self {
            Verifier::Linear(_) => TestId::LINEAR.to_vec(),
            Verifier::Parallel(_) => TestId::PARALLEL.to_vec(),
            Verifier::Combined(_) => {
                let mut v = TestId::LINEAR.to_vec();
                v.extend(TestId::PARALLEL);
                v
            }
        }
    }

    pub fn test_counts(&self) -> Vec<TestCount> {
        self.test_ids()
            .into_iter()
            .map(|test| TestCount { test, log2: self.count_log2(test) })
            .collect()
    }

    pub fn count_log2(&self, test: TestId) -> u128 {
        match (self, test.is_linear()) {
            (Verifier::Linear(v), true) => v.count_log2(test),
            (Verifier::Parallel(v), false) => v.count_log2(test),
            (Verifier::Combined(v), true) => v.linear.count_log2(test),
            (Verifier::Combined(v), false) => v.parallel.count_log2(test),
            _ => panic!("test {test} does not belong to this verifier"),
        }
    }

    /// Probability weight of one test family in the verifier's output
    /// distribution.
    pub fn weight(&self, test: TestId) -> BigRational {
        let frac = |n: u64| BigRational::new(BigInt::one(), BigInt::from(n));
        match self {
            Verifier::Linear(_) => frac(4),
            Verifier::Parallel(_) => frac(8),
            Verifier::Combined(_) => {
                if test.is_linear() {
                    frac(8)
                } else {
                    frac(16)
                }
            }
        }
    }

    pub fn decode(&self, test: TestId, idx: u128) -> AnyTest {
        match (self, test.is_linear()) {
            (Verifier::Linear(v), true) => AnyTest::Linear(v.decode(test, idx)),
            (Verifier::Parallel(v), false) => AnyTest::Parallel(v.decode(test, idx)),
            (Verifier::Combined(v), true) => AnyTest::Linear(v.linear.decode(test, idx)),
            (Verifier::Combined(v), false) => AnyTest::Parallel(v.parallel.decode(test, idx)),
            _ => panic!("test {test} does not belong to this verifier"),
        }
    }

    pub fn sample(&self, test: TestId, rng: &mut impl Rng) -> AnyTest {
        match (self, test.is_linear()) {
            (Verifier::Linear(v), true) => AnyTest::Linear(v.sample(test, rng)),
            (Verifier::Parallel(v), false) => AnyTest::Parallel(v.sample(test, rng)),
            (Verifier::Combined(v), true) => AnyTest::Linear(v.linear.sample(test, rng)),
            (Verifier::Combined(v), false) => AnyTest::Parallel(v.parallel.sample(test, rng)),
            _ => panic!("test {test} does not belong to this verifier"),
        }
    }

    pub fn run(&self, proofs: &ProofBundle, test: &AnyTest) -> Result<bool, PcppError> {
        match (self, proofs, test) {
            (Verifier::Linear(v), ProofBundle::Linear(p), AnyTest::Linear(t)) => {
                v.run(&p.pi1, &p.pi2, t)
            }
            (Verifier::Parallel(v), ProofBundle::Parallel(p), AnyTest::Parallel(t)) => {
                v.run(&p.pi1, &p.tau1, &p.tau2, t)
            }
            (Verifier::Combined(v), ProofBundle::Combined(p), AnyTest::Linear(t)) => {
                v.linear.run(&p.pi1, &p.pi2_linear, t)
            }
            (Verifier::Combined(v), ProofBundle::Combined(p), AnyTest::Parallel(t)) => {
                v.parallel.run(&p.pi1, &p.tau1, &p.tau2, t)
            }
            _ => Err(PcppError::Invariant(
                "verifier, proof bundle, and test kinds do not match".into(),
            )),
        }
    }
}

/// How to measure acceptance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exhaustive { cap_log2: u32 },
    Sampled { trials: u64, seed: u64 },
}

impl Mode {
    pub fn exhaustive() -> Self {
        Mode::Exhaustive { cap_log2: EXHAUSTIVE_CAP_LOG2 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerTestTally {
    pub test: TestId,
    pub accepted: u64,
    pub total: u64,
    /// log2 of the family's full randomness count.
    pub count_log2: u128,
}

/// Result of one acceptance measurement.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub mode: Mode,
    /// Exact probability (exhaustive mode), as a reduced fraction string.
    pub exact: Option<String>,
    /// Seeded estimate (sampled mode).
    pub estimate: Option<Estimate>,
    pub per_test: Vec<PerTestTally>,
}

impl AcceptanceReport {
    pub fn exact_value(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|s| {
            let (n, d) = s.split_once('/').expect("exact is num/den");
            BigRational::new(n.parse().expect("numerator"), d.parse().expect("denominator"))
        })
    }

    pub fn is_perfect(&self) -> bool {
        match (&self.exact_value(), &self.estimate) {
            (Some(v), _) => v.is_one(),
            (None, Some(e)) => e.successes == e.trials,
            _ => false,
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Measure acceptance of `proofs` under `verifier`.
///
/// `tests`: `None` uses the verifier's own distribution (all families,
/// verifier weights); `Some` restricts to the listed families with equal
/// weights, which is how single-family probes are run.
pub fn estimate_acceptance(
    verifier: &Verifier,
    proofs: &ProofBundle,
    mode: Mode,
    tests: Option<&[TestId]>,
) -> Result<AcceptanceReport, PcppError> {
    let ids: Vec<TestId> = match tests {
        Some(sel) => sel.to_vec(),
        None => verifier.test_ids(),
    };
    match mode {
        Mode::Exhaustive { cap_log2 } => {
            let mut per_test = Vec::with_capacity(ids.len());
            for &test in &ids {
                let log2 = verifier.count_log2(test);
                if log2 > cap_log2 as u128 {
                    return Err(PcppError::CapExceeded { test, log2, cap: cap_log2 });
                }
                let total = 1u64 << log2;
                let mut accepted = 0u64;
                for idx in 0..total {
                    let t = verifier.decode(test, idx as u128);
                    if verifier.run(proofs, &t)? {
                        accepted += 1;
                    }
                }
                per_test.push(PerTestTally { test, accepted, total, count_log2: log2 });
            }
            // equal weights when restricted; verifier weights otherwise
            let mut acc = BigRational::zero();
            for tally in &per_test {
                let weight = match tests {
                    Some(sel) => BigRational::new(BigInt::one(), BigInt::from(sel.len() as u64)),
                    None => verifier.weight(tally.test),
                };
                acc += weight
                    * BigRational::new(BigInt::from(tally.accepted), BigInt::from(tally.total));
            }
            Ok(AcceptanceReport {
                mode,
                exact: Some(format_rational(&acc)),
                estimate: None,
                per_test,
            })
        }
        Mode::Sampled { trials, seed } => {
            let mut rng = crate::rng::sampling_rng(seed, 0);
            let mut tallies: Vec<PerTestTally> = ids
                .iter()
                .map(|&test| PerTestTally {
                    test,
                    accepted: 0,
                    total: 0,
                    count_log2: verifier.count_log2(test),
                })
                .collect();
            let mut accepted_total = 0u64;
            for _ in 0..trials {
                let slot = pick_test(verifier, &ids, tests.is_some(), &mut rng);
                let t = verifier.sample(ids[slot], &mut rng);
                let ok = verifier.run(proofs, &t)?;
                tallies[slot].total += 1;
                if ok {
                    tallies[slot].accepted += 1;
                    accepted_total += 1;
                }
            }
            Ok(AcceptanceReport {
                mode,
                exact: None,
                estimate: Some(Estimate::new(accepted_total, trials, seed)),
                per_test: tallies,
            })
        }
    }
}

/// Execute one descriptor and produce its JSON log line:
/// `{test, randomness_index, queries, answers, verdict}`. Field-block
/// indices serialize as digit vectors; tau indices serialize structurally.
pub fn run_logged(
    verifier: &Verifier,
    proofs: &ProofBundle,
    test: &AnyTest,
    randomness_index: Option<u128>,
) -> Result<(bool, serde_json::Value), PcppError> {
    use crate::pcpp::linear::LinBlock;
    use crate::pcpp::parallel::{ParAnswer, ParQuery, TauBlock};
    let mut queries_json = Vec::new();
    let mut answers_json = Vec::new();
    let verdict = match (verifier, test) {
        (Verifier::Linear(v), AnyTest::Linear(t))
        | (Verifier::Combined(CombinedVerifier { linear: v, .. }), AnyTest::Linear(t)) => {
            let (pi1, pi2) = match proofs {
                ProofBundle::Linear(p) => (&p.pi1, &p.pi2),
                ProofBundle::Combined(p) => (&p.pi1, &p.pi2_linear),
                _ => return Err(PcppError::Invariant("proof bundle kind mismatch".into())),
            };
            let queries = v.queries(t);
            let mut answers = Vec::with_capacity(queries.len());
            for (block, index) in &queries {
                let oracle = match block {
                    LinBlock::Pi1 => pi1,
                    LinBlock::Pi2 => pi2,
                };
                let answer = oracle.eval(index)?;
                queries_json.push(serde_json::json!({
                    "block": match block { LinBlock::Pi1 => "pi1", LinBlock::Pi2 => "pi2" },
                    "index": index,
                }));
                answers_json.push(serde_json::to_value(&answer).expect("serializable"));
                answers.push(answer);
            }
            v.accept(t, &answers)
        }
        (Verifier::Parallel(v), AnyTest::Parallel(t))
        | (Verifier::Combined(CombinedVerifier { parallel: v, .. }), AnyTest::Parallel(t)) => {
            let (pi1, tau1, tau2) = match proofs {
                ProofBundle::Parallel(p) => (&p.pi1, &p.tau1, &p.tau2),
                ProofBundle::Combined(p) => (&p.pi1, &p.tau1, &p.tau2),
                _ => return Err(PcppError::Invariant("proof bundle kind mismatch".into())),
            };
            let queries = v.queries(t);
            let mut answers = Vec::with_capacity(queries.len());
            for q in &queries {
                let (block_name, index_json, answer) = match q {
                    ParQuery::Pi1(index) => (
                        "pi1",
                        serde_json::to_value(index).expect("serializable"),
                        ParAnswer::Field(pi1.eval(index)?),
                    ),
                    ParQuery::Tau(TauBlock::Tau1, index) => (
                        "tau1",
                        serde_json::to_value(index).expect("serializable"),
                        ParAnswer::Bits(v.eval_tau(TauBlock::Tau1, tau1, index)?),
                    ),
                    ParQuery::Tau(TauBlock::Tau2, index) => (
                        "tau2",
                        serde_json::to_value(index).expect("serializable"),
                        ParAnswer::Bits(v.eval_tau(TauBlock::Tau2, tau2, index)?),
                    ),
                };
                queries_json.push(serde_json::json!({"block": block_name, "index": index_json}));
                answers_json.push(match &answer {
                    ParAnswer::Field(f) => serde_json::to_value(f).expect("serializable"),
                    ParAnswer::Bits(b) => serde_json::to_value(b).expect("serializable"),
                });
                answers.push(answer);
            }
            v.accept(t, &answers)
        }
        _ => return Err(PcppError::Invariant("verifier and test kinds do not match".into())),
    };
    let line = serde_json::json!({
        "test": test.id(),
        "randomness_index": randomness_index.map(|i| i.to_string()),
        "queries": queries_json,
        "answers": answers_json,
        "verdict": if verdict { "accept" } else { "reject" },
    });
    Ok((verdict, line))
}

/// Draw one test slot according to the measurement distribution.
pub(crate) fn pick_test(
    verifier: &Verifier,
    ids: &[TestId],
    restricted: bool,
    rng: &mut ChaCha8Rng,
) -> usize {
    if restricted {
        return rng.gen_range(0..ids.len());
    }
    match verifier {
        Verifier::Linear(_) | Verifier::Parallel(_) => rng.gen_range(0..ids.len()),
        Verifier::Combined(_) => {
            // equal-probability branch, then uniform within the branch
            if rng.gen_bool(0.5) {
                rng.gen_range(0..4)
            } else {
                4 + rng.gen_range(0..8)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::fixtures::{assignment, lin1, par1};
    use crate::gf::GF2;

    fn lin1_setup() -> (Verifier, ProofBundle) {
        let v = LinearVerifier::new(lin1()).unwrap();
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let proof = v.honest_proof(&sigma).unwrap();
        (Verifier::Linear(v), ProofBundle::Linear(proof))
    }

    #[test]
    fn lin1_honest_exhaustive_is_one() {
        let (v, p) = lin1_setup();
        let report = estimate_acceptance(&v, &p, Mode::exhaustive(), None).unwrap();
        assert_eq!(report.exact.as_deref(), Some("1/1"));
        assert!(report.is_perfect());
        let totals: Vec<u64> = report.per_test.iter().map(|t| t.total).collect();
        assert_eq!(totals, vec![16, 16, 128, 32]);
        assert_eq!(report.per_test.iter().map(|t| t.total).sum::<u64>(), 192);
    }

    #[test]
    fn lin1_wrong_assignment_caught_exhaustively() {
        let v = LinearVerifier::new(lin1()).unwrap();
        // (1,0) violates the equality constraint; build honest-structured
        // proofs for it anyway
        let sigma = assignment(GF2, &[&[1], &[0]]);
        let proof = v.honest_proof_unchecked(&sigma);
        let verifier = Verifier::Linear(v);
        let report = estimate_acceptance(
            &verifier,
            &ProofBundle::Linear(proof),
            Mode::exhaustive(),
            None,
        )
        .unwrap();
        let exact = report.exact_value().unwrap();
        // soundness: acceptance must fall below 1 - 1/600
        let threshold = BigRational::new(BigInt::from(599), BigInt::from(600));
        assert!(exact < threshold, "acceptance {exact} too high");
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let (v, p) = lin1_setup();
        let mode = Mode::Sampled { trials: 500, seed: 7 };
        let a = estimate_acceptance(&v, &p, mode, None).unwrap();
        let b = estimate_acceptance(&v, &p, mode, None).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.estimate.as_ref().unwrap().successes, 500);
    }

    #[test]
    fn cap_violation_is_an_error() {
        let v = ParallelVerifier::new(par1()).unwrap();
        let sigma = assignment(GF2, &[&[0, 0], &[0, 0]]);
        let proof = v.honest_proof(&sigma).unwrap();
        let err = estimate_acceptance(
            &Verifier::Parallel(v),
            &ProofBundle::Parallel(proof),
            Mode::exhaustive(),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, PcppError::CapExceeded { test: TestId::P2, .. }));
    }

    #[test]
    fn restricted_test_selection() {
        let v = ParallelVerifier::new(par1()).unwrap();
        let sigma = assignment(GF2, &[&[0, 1], &[1, 0]]);
        let proof = v.honest_proof(&sigma).unwrap();
        let report = estimate_acceptance(
            &Verifier::Parallel(v),
            &ProofBundle::Parallel(proof),
            Mode::Sampled { trials: 800, seed: 3 },
            Some(&TestId::PARALLEL[1..]),
        )
        .unwrap();
        assert!(report.is_perfect());
        assert!(report.per_test.iter().all(|t| t.test != TestId::P1));
    }

    #[test]
    fn logged_run_matches_plain_run() {
        let (v, p) = lin1_setup();
        for test in crate::pcpp::TestId::LINEAR {
            for idx in 0..(1u128 << v.count_log2(test)) {
                let t = v.decode(test, idx);
                let plain = v.run(&p, &t).unwrap();
                let (logged, line) = run_logged(&v, &p, &t, Some(idx)).unwrap();
                assert_eq!(plain, logged);
                assert_eq!(line["verdict"], if plain { "accept" } else { "reject" });
                assert!(line["queries"].as_array().unwrap().len() <= 4);
                assert_eq!(
                    line["queries"].as_array().unwrap().len(),
                    line["answers"].as_array().unwrap().len()
                );
            }
        }
    }

    #[test]
    fn logged_run_serializes_tau_queries() {
        let v = ParallelVerifier::new(par1()).unwrap();
        let sigma = assignment(GF2, &[&[0, 1], &[1, 0]]);
        let proof = ProofBundle::Parallel(v.honest_proof(&sigma).unwrap());
        let verifier = Verifier::Parallel(v);
        let mut rng = crate::rng::sampling_rng(12, 0);
        let t = verifier.sample(TestId::P6, &mut rng);
        let (ok, line) = run_logged(&verifier, &proof, &t, None).unwrap();
        assert!(ok);
        assert_eq!(line["test"], "P6");
        assert_eq!(line["queries"][2]["block"], "tau2");
    }

    #[test]
    fn combined_on_all_parallel_instance() {
        // the linear branch has no constraints and accepts vacuously
        let v = CombinedVerifier::for_instance(par1()).unwrap();
        let sigma = assignment(GF2, &[&[0, 1], &[1, 0]]);
        let proof = v.honest_proof(&sigma).unwrap();
        let verifier = Verifier::Combined(v);
        let report = estimate_acceptance(
            &verifier,
            &ProofBundle::Combined(proof),
            Mode::Sampled { trials: 800, seed: 21 },
            None,
        )
        .unwrap();
        assert!(report.is_perfect());
    }

    #[test]
    fn combined_verifier_runs_both_branches() {
        let v = CombinedVerifier::for_instance(lin1()).unwrap();
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let proof = v.honest_proof(&sigma).unwrap();
        let verifier = Verifier::Combined(v);
        let report = estimate_acceptance(
            &verifier,
            &ProofBundle::Combined(proof),
            Mode::Sampled { trials: 600, seed: 5 },
            None,
        )
        .unwrap();
        assert!(report.is_perfect());
        let linear_trials: u64 = report
            .per_test
            .iter()
            .filter(|t| t.test.is_linear())
            .map(|t| t.total)
            .sum();
        // branch probability 1/2 with 600 trials
        assert!(linear_trials > 200 && linear_trials < 400);
    }
}
