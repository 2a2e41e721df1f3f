//! The acceptance check suite behind `gapcsp selftest`.
//!
//! Ten deterministic checks validate the pipeline's headline properties at
//! desk scale: exact counting identities, exhaustive micro-instance
//! equivalences, the coding-theory bounds, verifier completeness, the
//! soundness probe constants, and the end-to-end chain. Thresholds are
//! pinned here; sampled checks use fixed seeds and report their trial
//! counts.

use crate::bits::Bits;
use crate::csp::Rational;
use crate::gf::{FieldMatrix, FieldSpec, FieldVector, GF2, GF4, GF8};
use crate::hadamard::{blr_pass_rate, distance_to_code, OracleSpec, WordOracle};
use crate::pcpp::linear::LinearVerifier;
use crate::pcpp::measure::{estimate_acceptance, Mode, ProofBundle, Verifier};
use crate::pcpp::parallel::{
    CoordDelta, ParallelTest, ParallelVerifier, PartSet, TauBlock, TauIndex, TauOracle, TauTerm,
};
use crate::pcpp::TestId;
use crate::pipeline::gap::{build_explicit, explicit_matches_fresh_decode, honest_assignment, GapCaps};
use crate::pipeline::end_to_end;
use crate::sat2vec::reduce::reduce_sat_to_veccsp;
use crate::sat2vec::{check_structure, random_cnf3, random_structured_cnf3, sat1};
use crate::stats::wilson_99;
use rand::{Rng, RngCore};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:2} {:<28} {} — {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

fn result(id: usize, name: &'static str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id, name, passed, detail }
}

/// Criterion 1: counting identities of the reduction for ell in {1,2,3}
/// on structured formulas: |V| = 48 ell^2, |E| = 72 ell^2, split sizes
/// 48 ell^2 / 24 ell^2.
pub fn criterion_counting() -> CriterionResult {
    let mut rng = crate::rng::sampling_rng(0xC0, 0);
    let mut formulas = vec![sat1()];
    formulas.push(random_structured_cnf3(&mut rng, 12, 14));
    formulas.push(random_structured_cnf3(&mut rng, 9, 12));
    let mut ok = true;
    let mut detail = String::new();
    for cnf in &formulas {
        if !check_structure(cnf).within_four {
            ok = false;
            detail = "corpus formula not structured".into();
            break;
        }
        for ell in 1..=3usize {
            let r = match reduce_sat_to_veccsp(cnf, ell) {
                Ok(r) => r,
                Err(e) => {
                    return result(1, "counting identities", false, e.to_string());
                }
            };
            let (gl, gp) = r.instance.split();
            let want = (48 * ell * ell, 72 * ell * ell, 48 * ell * ell, 24 * ell * ell);
            let got = (
                r.instance.k,
                r.instance.constraints.len(),
                gl.constraints.len(),
                gp.constraints.len(),
            );
            if r.plan.s_max != 4 || got != want {
                ok = false;
                detail = format!("ell={ell}: got {got:?}, want {want:?}");
            }
        }
    }
    if ok {
        detail = "|V|,|E|,|E_L|,|E_P| exact for ell=1..3 on 3 structured formulas".into();
    }
    result(1, "counting identities", ok, detail)
}

/// Criterion 2: On a 50-formula corpus with n <= 10, exhaustively over all 2^n
/// assignments: sigma satisfies phi iff the lift is a solution, and
/// project(lift(sigma)) = sigma for satisfying sigma.
pub fn criterion_sat_lift_equivalence() -> CriterionResult {
    let mut rng = crate::rng::sampling_rng(0xC1, 0);
    let ns = [3usize, 4, 4, 5, 5, 5, 6, 6, 6, 7, 7, 7, 7, 8, 8, 8, 9, 9, 10, 10];
    let mut formulas = Vec::with_capacity(50);
    for i in 0..50usize {
        let n = ns[i % ns.len()];
        let m = rng.gen_range(2..=(4 * n / 3).min(13)).max(2);
        let cnf = if i % 5 == 0 {
            random_structured_cnf3(&mut rng, n, m.min(4 * n / 3))
        } else {
            random_cnf3(&mut rng, n, m)
        };
        formulas.push(cnf);
    }
    let mut assignments_checked = 0u64;
    for (i, cnf) in formulas.iter().enumerate() {
        let ell = 1 + i % 2;
        let r = match reduce_sat_to_veccsp(cnf, ell) {
            Ok(r) => r,
            Err(e) => return result(2, "sat <-> lift equivalence", false, e.to_string()),
        };
        for counter in 0u64..(1 << cnf.n) {
            let sigma: Vec<bool> = (0..cnf.n).map(|j| (counter >> j) & 1 == 1).collect();
            let lifted = r.lift_assignment(&sigma);
            let sat = cnf.satisfied(&sigma);
            let lifted_solves = match r.instance.is_solution(&lifted) {
                Ok(b) => b,
                Err(e) => return result(2, "sat <-> lift equivalence", false, e.to_string()),
            };
            if sat != lifted_solves {
                return result(
                    2,
                    "sat <-> lift equivalence",
                    false,
                    format!("formula {i}: equivalence fails at assignment {counter:b}"),
                );
            }
            if sat {
                match r.project_solution(&lifted) {
                    Ok(back) if back == sigma => {}
                    _ => {
                        return result(
                            2,
                            "sat <-> lift equivalence",
                            false,
                            format!("formula {i}: projection roundtrip fails"),
                        )
                    }
                }
            }
            assignments_checked += 1;
        }
    }
    result(
        2,
        "sat <-> lift equivalence",
        true,
        format!("50 formulas, {assignments_checked} assignments exhausted"),
    )
}

/// Criterion 3: BLR soundness bound, exhaustively over all 16 words for GF(2),
/// k = 2, d = 1: pass rate >= 1 - eps implies distance <= 6 eps.
pub fn criterion_blr_bound() -> CriterionResult {
    let spec = OracleSpec { field: GF2, arity: 2, dim: 1 };
    for word_bits in 0u8..16 {
        let values: Vec<FieldVector> = (0..4)
            .map(|i| FieldVector::from_bits(GF2, vec![(word_bits >> i) & 1]).unwrap())
            .collect();
        let w = WordOracle::explicit(spec, values).unwrap();
        let rho = blr_pass_rate(&w, 24).unwrap();
        let (delta, _) = distance_to_code(&w, 24).unwrap();
        let eps = Rational::from_integer(1) - rho;
        if delta > eps * Rational::from_integer(6) {
            return result(
                3,
                "blr distance bound",
                false,
                format!("word {word_bits:04b}: delta {delta} > 6({eps})"),
            );
        }
    }
    result(3, "blr distance bound", true, "all 16 words satisfy delta <= 6 eps".into())
}

fn image_table(spec: FieldSpec, m: &FieldMatrix) -> Vec<u64> {
    // one byte per x: the row image packed t bits per entry (at most
    // 3 entries of GF(2) or 2 of GF(8), so at most 6 bits), padded into
    // u64 words with a tag bit that keeps padding bytes distinguishable
    let rows = m.rows();
    let t = spec.t() as u32;
    let n_x = (spec.order() as usize).pow(rows as u32);
    let mut bytes = vec![0u8; n_x.div_ceil(8) * 8];
    for (xi, byte) in bytes.iter_mut().enumerate().take(n_x) {
        let x = FieldVector::from_index(spec, rows, xi as u128);
        let mut packed = 0u8;
        for c in 0..m.cols() {
            packed = (packed << t) | x.dot(&m.column(c)).bits();
        }
        *byte = packed | 0x80;
    }
    bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect()
}

fn count_differing_bytes(a: &[u64], b: &[u64]) -> u32 {
    let mut count = 0u32;
    for (&x, &y) in a.iter().zip(b) {
        let mut diff = x ^ y;
        // collapse each nonzero byte to its low bit, then popcount
        diff |= diff >> 4;
        diff |= diff >> 2;
        diff |= diff >> 1;
        count += (diff & 0x0101_0101_0101_0101).count_ones();
    }
    count
}

/// Criterion 4: Random subsum principle, exhaustively over all distinct matrix
/// pairs: dims <= 3 over GF(2) and <= 2 over GF(4)/GF(8); disagreement
/// probability >= 1 - 1/|F|.
pub fn criterion_random_subsum() -> CriterionResult {
    let mut pairs_checked = 0u64;
    let cases: Vec<(FieldSpec, usize)> = vec![(GF2, 3), (GF4, 2), (GF8, 2)];
    for (spec, max_dim) in cases {
        for rows in 1..=max_dim {
            for cols in 1..=max_dim {
                let mats: Vec<FieldMatrix> = FieldMatrix::iter_all(spec, rows, cols).collect();
                let tables: Vec<Vec<u64>> = mats.iter().map(|m| image_table(spec, m)).collect();
                let n_x = (spec.order() as u32).pow(rows as u32);
                // required: differing x count >= (1 - 1/|F|) * |F|^rows
                let required = n_x - n_x / spec.order() as u32;
                for i in 0..mats.len() {
                    for j in (i + 1)..mats.len() {
                        let differ = count_differing_bytes(&tables[i], &tables[j]);
                        pairs_checked += 1;
                        if differ < required {
                            return result(
                                4,
                                "random subsum principle",
                                false,
                                format!(
                                    "{spec} {rows}x{cols}: pair ({i},{j}) differs on {differ} < {required} of {n_x}"
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    result(
        4,
        "random subsum principle",
        true,
        format!("{pairs_checked} distinct matrix pairs exhausted"),
    )
}

/// Criterion 5: Circuit satisfiability equals quadratic-system satisfiability with
/// witness correspondence, on 30 random circuits with <= 10 gates, by
/// dual brute force.
pub fn criterion_quadeq_equivalence() -> CriterionResult {
    use crate::quadeq::{circuit_to_quadeq, BoolCircuit, Gate};
    let mut rng = crate::rng::sampling_rng(0xC5, 0);
    for trial in 0..30 {
        let n_inputs = rng.gen_range(2..=4usize);
        let extra = rng.gen_range(1..=(10 - n_inputs).min(6));
        let mut gates: Vec<Gate> = vec![Gate::Input; n_inputs];
        for _ in 0..extra {
            let i = gates.len();
            let a = rng.gen_range(0..i);
            let b = rng.gen_range(0..i);
            gates.push(match rng.gen_range(0..3) {
                0 => Gate::Not(a),
                1 => Gate::And(a, b),
                _ => Gate::Or(a, b),
            });
        }
        let output = gates.len() - 1;
        let circuit = BoolCircuit { gates, n_inputs, output };
        let gamma = circuit_to_quadeq(&circuit);

        let mut circuit_sat = false;
        for x in 0u64..(1 << circuit.n_inputs) {
            let inputs = Bits::from_fn(circuit.n_inputs, |i| (x >> i) & 1 == 1);
            if circuit.eval(&inputs) {
                circuit_sat = true;
                if !gamma.check(&circuit.eval_gates(&inputs)) {
                    return result(
                        5,
                        "quadeq equivalence",
                        false,
                        format!("trial {trial}: satisfying gate values rejected"),
                    );
                }
            }
        }
        match gamma.brute_force() {
            Ok(witness) => {
                if circuit_sat != witness.is_some() {
                    return result(
                        5,
                        "quadeq equivalence",
                        false,
                        format!("trial {trial}: satisfiability mismatch"),
                    );
                }
                if let Some(u) = witness {
                    let inputs = Bits::from_fn(circuit.n_inputs, |i| u.get(i));
                    if circuit.eval_gates(&inputs) != u || !circuit.eval(&inputs) {
                        return result(
                            5,
                            "quadeq equivalence",
                            false,
                            format!("trial {trial}: witness correspondence fails"),
                        );
                    }
                }
            }
            Err(e) => return result(5, "quadeq equivalence", false, e.to_string()),
        }
    }
    result(5, "quadeq equivalence", true, "30 circuits, dual brute force with witnesses".into())
}

fn lin1_fixture() -> crate::csp::VecCspInstance {
    use crate::csp::{Constraint, ConstraintKind, VecCspInstance};
    VecCspInstance::new(
        GF2,
        1,
        2,
        vec![Constraint {
            u: 0,
            v: 1,
            kind: ConstraintKind::Linear { m: FieldMatrix::identity(GF2, 1) },
        }],
    )
}

fn par1_fixture() -> crate::csp::VecCspInstance {
    use crate::csp::{Constraint, ConstraintKind, SubTable, VecCspInstance};
    VecCspInstance::new(
        GF2,
        2,
        2,
        vec![Constraint {
            u: 0,
            v: 1,
            kind: ConstraintKind::Parallel {
                sub: SubTable::from_fn(GF2, |a, b| !(a.bits() == 1 && b.bits() == 1)),
                q: vec![0, 1],
            },
        }],
    )
}

/// Criterion 6: Linear verifier on the micro fixture: (a) exhaustive honest
/// acceptance exactly 1 over all 192 descriptors; (b) over all 256
/// explicit proof pairs, acceptance >= 1 - 1/600 forces pi1 to equal the
/// encoding of a solution exactly.
pub fn criterion_linear_micro_exhaustive() -> CriterionResult {
    let verifier = LinearVerifier::new(lin1_fixture()).unwrap();
    let sigma = crate::csp::Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
        ],
    };
    let honest = verifier.honest_proof(&sigma).unwrap();
    let v = Verifier::Linear(verifier);
    let report = match estimate_acceptance(
        &v,
        &ProofBundle::Linear(honest),
        Mode::exhaustive(),
        None,
    ) {
        Ok(r) => r,
        Err(e) => return result(6, "linear micro exhaustive", false, e.to_string()),
    };
    let raw_descriptors: u64 = report.per_test.iter().map(|t| t.total).sum();
    if report.exact.as_deref() != Some("1/1") || raw_descriptors != 192 {
        return result(
            6,
            "linear micro exhaustive",
            false,
            format!("honest acceptance {:?} over {raw_descriptors}", report.exact),
        );
    }

    // (b) all 256 explicit proof pairs
    let spec = OracleSpec { field: GF2, arity: 2, dim: 1 };
    let solutions: Vec<Vec<FieldVector>> = [[0u8, 0], [1, 1]]
        .iter()
        .map(|s| {
            let msg = FieldMatrix::from_rows(GF2, &[s.to_vec()]).unwrap();
            FieldVector::iter_all(GF2, 2)
                .map(|b| msg.mul_vector(&b).unwrap())
                .collect()
        })
        .collect();
    let threshold = Rational::from_integer(1) - Rational::new(1, 600);
    let mut accepted_pairs = 0u32;
    for w1 in 0u8..16 {
        let pi1_values: Vec<FieldVector> = (0..4)
            .map(|i| FieldVector::from_bits(GF2, vec![(w1 >> i) & 1]).unwrap())
            .collect();
        for w2 in 0u8..16 {
            let pi2_values: Vec<FieldVector> = (0..4)
                .map(|i| FieldVector::from_bits(GF2, vec![(w2 >> i) & 1]).unwrap())
                .collect();
            let proof = ProofBundle::Linear(crate::pcpp::linear::LinearProof {
                pi1: WordOracle::explicit(spec, pi1_values.clone()).unwrap(),
                pi2: WordOracle::explicit(spec, pi2_values).unwrap(),
            });
            let report = match estimate_acceptance(&v, &proof, Mode::exhaustive(), None) {
                Ok(r) => r,
                Err(e) => return result(6, "linear micro exhaustive", false, e.to_string()),
            };
            let exact = report.exact_value().unwrap();
            let high = exact
                >= num::BigRational::new(
                    (*threshold.numer()).into(),
                    (*threshold.denom()).into(),
                );
            if high {
                accepted_pairs += 1;
                let is_solution_codeword = solutions.contains(&pi1_values);
                if !is_solution_codeword {
                    return result(
                        6,
                        "linear micro exhaustive",
                        false,
                        format!("pair ({w1:04b},{w2:04b}) accepted at {exact} but pi1 is no solution codeword"),
                    );
                }
            }
        }
    }
    result(
        6,
        "linear micro exhaustive",
        true,
        format!("192 descriptors honest; 256 proof pairs checked, {accepted_pairs} above 1-1/600, all solution codewords"),
    )
}

fn par1_verifier_and_honest() -> (ParallelVerifier, ProofBundle) {
    let v = ParallelVerifier::new(par1_fixture()).unwrap();
    let sigma = crate::csp::Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![0, 1]).unwrap(),
            FieldVector::from_bits(GF2, vec![1, 0]).unwrap(),
        ],
    };
    let proof = v.honest_proof(&sigma).unwrap();
    (v, ProofBundle::Parallel(proof))
}

/// Criterion 7: Parallel verifier completeness on the micro fixture: exhaustive over
/// the enumerable family (P1, 16 descriptors) and >= 10^5 seeded samples
/// over P2-P8 with zero rejections.
pub fn criterion_parallel_completeness() -> CriterionResult {
    let (v, proof) = par1_verifier_and_honest();
    let verifier = Verifier::Parallel(v);
    let p1 = match estimate_acceptance(&verifier, &proof, Mode::exhaustive(), Some(&[TestId::P1])) {
        Ok(r) => r,
        Err(e) => return result(7, "parallel completeness", false, e.to_string()),
    };
    if p1.exact.as_deref() != Some("1/1") || p1.per_test[0].total != 16 {
        return result(7, "parallel completeness", false, "P1 exhaustive not perfect".into());
    }
    let trials = 105_000u64;
    let sampled = match estimate_acceptance(
        &verifier,
        &proof,
        Mode::Sampled { trials, seed: 0xC7 },
        Some(&TestId::PARALLEL[1..]),
    ) {
        Ok(r) => r,
        Err(e) => return result(7, "parallel completeness", false, e.to_string()),
    };
    let est = sampled.estimate.as_ref().unwrap();
    let passed = est.successes == est.trials;
    result(
        7,
        "parallel completeness",
        passed,
        format!(
            "P1: 16/16 exhaustive; P2-P8: {}/{} sampled accepts (seed {:#x})",
            est.successes, est.trials, est.seed
        ),
    )
}

/// Criterion 8: Soundness probe constants on the micro fixture:
/// (a) a bit planted in a wrong u-bar block is caught by the zero test at
/// rate >= 1/8 - 3 Wilson radii over enumerated subsets and 10^4 sampled
/// indices each; (b) w-bar deviating from the tensor square on one
/// coordinate trips the tensor test at rate >= 1/4; (c) a violated
/// equation trips the constraint test for >= 1/2 of all enumerated
/// equation subsets.
pub fn criterion_parallel_soundness_probes() -> CriterionResult {
    let (v, honest) = par1_verifier_and_honest();
    let honest_parallel = match &honest {
        ProofBundle::Parallel(p) => p.clone(),
        _ => unreachable!(),
    };

    // (a) plant a bit in the empty-subset part on coordinate 0
    let mut delta = Bits::zeros(v.c());
    delta.set(4, true);
    let tau1 = TauOracle::MessageDelta {
        base: Box::new(honest_parallel.tau1.clone()),
        deltas: vec![CoordDelta { coord: 0, part: 0, bits: delta }],
    };
    let mut rng = crate::rng::sampling_rng(0xC8, 0);
    let per_subset = 10_000u64;
    let n_parts = v.n_parts() as usize;
    let mut rejected = 0u64;
    let mut total = 0u64;
    for mask in 0u64..(1 << n_parts) {
        let t_set = PartSet::Explicit(Bits::from_fn(n_parts, |i| (mask >> i) & 1 == 1));
        for _ in 0..per_subset {
            let t = v.sample_zero_test(TauBlock::Tau1, t_set.clone(), &mut rng);
            total += 1;
            if !v
                .run(&honest_parallel.pi1, &tau1, &honest_parallel.tau2, &t)
                .unwrap_or(false)
            {
                rejected += 1;
            }
        }
    }
    let (_, radius) = wilson_99(rejected, total);
    let rate_a = rejected as f64 / total as f64;
    if rate_a < 0.125 - 3.0 * radius {
        return result(
            8,
            "parallel soundness probes",
            false,
            format!("zero-test rejection {rate_a:.4} below 1/8 - 3r with r={radius:.4}"),
        );
    }

    // (b) rank-2 deviation of w-bar from u (x) u on coordinate 0
    let c = v.c();
    let mut wdelta = Bits::zeros(c * c);
    wdelta.set(0, true); // entry (0,0)
    wdelta.set(c + 1, true); // entry (1,1)
    let tau2 = TauOracle::MessageDelta {
        base: Box::new(honest_parallel.tau2.clone()),
        deltas: vec![CoordDelta { coord: 0, part: v.kappa()[0], bits: wdelta }],
    };
    let trials_b = 10_000u64;
    let mut rejected_b = 0u64;
    for _ in 0..trials_b {
        let t = v.sample(TestId::P6, &mut rng);
        if !v
            .run(&honest_parallel.pi1, &honest_parallel.tau1, &tau2, &t)
            .unwrap_or(false)
        {
            rejected_b += 1;
        }
    }
    let rate_b = rejected_b as f64 / trials_b as f64;
    if rate_b < 0.25 {
        return result(
            8,
            "parallel soundness probes",
            false,
            format!("tensor-test rejection {rate_b:.4} below 1/4 over {trials_b} samples"),
        );
    }

    // (c) violated equations: honest structure over a non-solution
    let bad = crate::csp::Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![1, 1]).unwrap(),
            FieldVector::from_bits(GF2, vec![1, 1]).unwrap(),
        ],
    };
    let bad_proof = v.honest_proof_unchecked(&bad);
    let mut rejected_c = 0u64;
    let total_c = 1u64 << v.q();
    for mask in 0..total_c {
        let h = Bits::from_fn(v.q(), |i| (mask >> i) & 1 == 1);
        let t = ParallelTest::P7 {
            h,
            beta: TauIndex::new(c * c, vec![TauTerm::Seeded { seed: rng.next_u64() }]),
        };
        if !v.run(&bad_proof.pi1, &bad_proof.tau1, &bad_proof.tau2, &t).unwrap_or(false) {
            rejected_c += 1;
        }
    }
    if 2 * rejected_c < total_c {
        return result(
            8,
            "parallel soundness probes",
            false,
            format!("constraint-test rejection {rejected_c}/{total_c} below 1/2"),
        );
    }
    result(
        8,
        "parallel soundness probes",
        true,
        format!(
            "zero test {rate_a:.4} >= 1/8-3r; tensor test {rate_b:.4} >= 1/4; constraint test {rejected_c}/{total_c} >= 1/2"
        ),
    )
}

/// Criterion 9: Gap conversion on the micro fixture: the honest assignment satisfies
/// the explicit instance exactly; |V*| splits as |V1|+|V2|+|V3| with the
/// recorded f and g; the virtual sampler agrees with the explicit tables
/// exhaustively.
pub fn criterion_gap_conversion() -> CriterionResult {
    let verifier = LinearVerifier::new(lin1_fixture()).unwrap();
    let gap = match build_explicit(&verifier, GapCaps::default()) {
        Ok(g) => g,
        Err(e) => return result(9, "gap conversion", false, e.to_string()),
    };
    let sigma = crate::csp::Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
        ],
    };
    let proof = verifier.honest_proof(&sigma).unwrap();
    let assignment = match honest_assignment(&gap, &verifier, &proof) {
        Ok(a) => a,
        Err(e) => return result(9, "gap conversion", false, e.to_string()),
    };
    let val = gap.csp.evaluate(&assignment).unwrap();
    if val != Rational::from_integer(1) {
        return result(9, "gap conversion", false, format!("honest value {val} != 1"));
    }
    let v_total = gap.n_variables();
    let split_ok = v_total == gap.n_pi1 + gap.n_pi2 + gap.supernodes.len()
        && gap.f_recorded == gap.n_pi2 as u64
        && gap.g_recorded == gap.supernodes.len() as u64;
    if !split_ok {
        return result(9, "gap conversion", false, "variable split does not match recorded f,g".into());
    }
    let checks = match explicit_matches_fresh_decode(&gap, &verifier) {
        Ok(c) => c,
        Err(e) => return result(9, "gap conversion", false, e.to_string()),
    };
    result(
        9,
        "gap conversion",
        true,
        format!(
            "val=1; |V*|={v_total}=({}+{}+{}); virtual/explicit agree over {checks} checks",
            gap.n_pi1,
            gap.n_pi2,
            gap.supernodes.len()
        ),
    )
}

/// Criterion 10: End-to-end smoke: the single-clause fixture through the full chain
/// reports k=48, d=3, eps* = 1/9600, and >= 10^4 sampled gap constraints
/// are all satisfied by the honest chain certificate.
pub fn criterion_end_to_end() -> CriterionResult {
    let out = match end_to_end(&sat1(), 1, 0xCA, 10_000) {
        Ok(o) => o,
        Err(e) => return result(10, "end-to-end smoke", false, e.to_string()),
    };
    let r = &out.report;
    if r.veccsp.k != 48 || r.veccsp.d != 3 || r.eps_star != "1/9600" {
        return result(
            10,
            "end-to-end smoke",
            false,
            format!("constants: k={} d={} eps*={}", r.veccsp.k, r.veccsp.d, r.eps_star),
        );
    }
    match &r.certificate {
        Some(c) if c.constraints_checked >= 10_000 && c.satisfied == c.constraints_checked => {
            result(
                10,
                "end-to-end smoke",
                true,
                format!(
                    "k=48 d=3 eps*=1/9600; {}/{} sampled gap constraints satisfied (seed {:#x})",
                    c.satisfied, c.constraints_checked, c.seed
                ),
            )
        }
        Some(c) => result(
            10,
            "end-to-end smoke",
            false,
            format!("certificate violated: {}/{}", c.satisfied, c.constraints_checked),
        ),
        None => result(10, "end-to-end smoke", false, "no certificate produced".into()),
    }
}

/// Run the whole suite in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_counting(),
        criterion_sat_lift_equivalence(),
        criterion_blr_bound(),
        criterion_random_subsum(),
        criterion_quadeq_equivalence(),
        criterion_linear_micro_exhaustive(),
        criterion_parallel_completeness(),
        criterion_parallel_soundness_probes(),
        criterion_gap_conversion(),
        criterion_end_to_end(),
    ]
}
