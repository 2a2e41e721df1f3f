//! PPCPP-to-CSP conversion.
//!
//! Positions of each proof block become variables (`V1` for the shared
//! first block, `V2` for auxiliary blocks); each randomness choice `r`
//! becomes a supernode whose alphabet is the set of full query-result
//! configurations over its distinct query positions `S_r`; and each
//! randomness choice contributes `|S_r| <= 4` constraints, each checking
//! that the supernode holds an accepting configuration consistent with the
//! queried position.
//!
//! Explicit materialization is limited to verifiers whose proof blocks are
//! field-indexed and micro (in practice: the linear verifier on micro
//! fixtures). Larger instances are served by the virtual constraint
//! sampler, which is faithful because the conversion is positional.

use crate::csp::{GapAlphabet, GapConstraint, GapCspInstance, GapValue};
use crate::gf::FieldVector;
use crate::pcpp::linear::{LinBlock, LinearProof, LinearVerifier};
use crate::pcpp::measure::{pick_test, ProofBundle, Verifier};
use crate::pcpp::parallel::ParQuery;
use crate::pcpp::{PcppError, TestId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Caps for explicit materialization.
#[derive(Clone, Copy, Debug)]
pub struct GapCaps {
    /// Max log2 of any single proof block's length.
    pub position_log2: u32,
    /// Max log2 of any test family's randomness count.
    pub randomness_log2: u32,
}

impl Default for GapCaps {
    fn default() -> Self {
        GapCaps { position_log2: 12, randomness_log2: 12 }
    }
}

/// One materialized supernode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupernodeInfo {
    pub test: TestId,
    pub index: u64,
    /// Variable id of the supernode in the gap instance.
    pub var: usize,
    /// Variable ids of its distinct query positions, in canonical order.
    pub positions: Vec<usize>,
}

/// A materialized gap CSP together with its layout bookkeeping.
#[derive(Clone, Debug)]
pub struct ExplicitGapCsp {
    pub csp: GapCspInstance,
    pub n_pi1: usize,
    pub n_pi2: usize,
    pub supernodes: Vec<SupernodeInfo>,
    /// Recorded auxiliary proof length (the `f` of the verifier).
    pub f_recorded: u64,
    /// Recorded randomness count (the `g` of the verifier).
    pub g_recorded: u64,
}

impl ExplicitGapCsp {
    pub fn n_variables(&self) -> usize {
        self.csp.alphabets.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.csp.constraints.len()
    }
}

fn position_var(n_pi1: usize, block: LinBlock, index: &FieldVector) -> usize {
    match block {
        LinBlock::Pi1 => index.to_index() as usize,
        LinBlock::Pi2 => n_pi1 + index.to_index() as usize,
    }
}

/// Materialize the gap CSP of a linear verifier.
pub fn build_explicit(verifier: &LinearVerifier, caps: GapCaps) -> Result<ExplicitGapCsp, PcppError> {
    let spec1 = verifier.pi1_spec();
    let spec2 = verifier.pi2_spec();
    for s in [spec1, spec2] {
        if s.domain_log2() > caps.position_log2 {
            return Err(PcppError::Invariant(format!(
                "proof block of 2^{} positions exceeds explicit cap 2^{}",
                s.domain_log2(),
                caps.position_log2
            )));
        }
    }
    for test in TestId::LINEAR {
        let log2 = verifier.count_log2(test);
        if log2 > caps.randomness_log2 as u128 {
            return Err(PcppError::CapExceeded { test, log2, cap: caps.randomness_log2 });
        }
    }

    let field = spec1.field;
    let d = spec1.dim;
    let value_count = (field.order() as u64).pow(d as u32) as usize;
    let n_pi1 = 1usize << spec1.domain_log2();
    let n_pi2 = 1usize << spec2.domain_log2();

    // position variables: every F^d value, canonical order
    let position_alphabet = GapAlphabet {
        values: (0..value_count)
            .map(|i| vec![FieldVector::from_index(field, d, i as u128)])
            .collect(),
    };
    let mut alphabets = vec![position_alphabet; n_pi1 + n_pi2];
    let mut constraints: Vec<GapConstraint> = Vec::new();
    let mut supernodes = Vec::new();
    let mut g_recorded = 0u64;

    for test in TestId::LINEAR {
        let total = 1u64 << verifier.count_log2(test);
        g_recorded += total;
        for index in 0..total {
            let descriptor = verifier.decode(test, index as u128);
            let queries = verifier.queries(&descriptor);
            // distinct positions, canonical order
            let mut seen = BTreeSet::new();
            let mut positions = Vec::new();
            for (block, qidx) in &queries {
                let var = position_var(n_pi1, *block, qidx);
                if seen.insert(var) {
                    positions.push(var);
                }
            }
            positions.sort_unstable();
            let arity = positions.len();

            // supernode alphabet: all configurations over S_r
            let config_count = value_count.pow(arity as u32);
            let config_value = |cfg: usize, slot: usize| -> FieldVector {
                let vi = (cfg / value_count.pow(slot as u32)) % value_count;
                FieldVector::from_index(field, d, vi as u128)
            };
            let values: Vec<GapValue> = (0..config_count)
                .map(|cfg| (0..arity).map(|slot| config_value(cfg, slot)).collect())
                .collect();
            let znode = alphabets.len();
            alphabets.push(GapAlphabet { values });
            supernodes.push(SupernodeInfo { test, index, var: znode, positions: positions.clone() });

            // per-config acceptance, then one constraint per position
            let accepts: Vec<bool> = (0..config_count)
                .map(|cfg| {
                    let answers: Vec<FieldVector> = queries
                        .iter()
                        .map(|(block, qidx)| {
                            let var = position_var(n_pi1, *block, qidx);
                            let slot = positions.binary_search(&var).expect("position present");
                            config_value(cfg, slot)
                        })
                        .collect();
                    verifier.accept(&descriptor, &answers)
                })
                .collect();
            for (slot, &pos_var) in positions.iter().enumerate() {
                let mut accepting = BTreeSet::new();
                for (cfg, &ok) in accepts.iter().enumerate() {
                    if !ok {
                        continue;
                    }
                    let val_idx = config_value(cfg, slot).to_index() as u32;
                    accepting.insert((cfg as u32, val_idx));
                }
                constraints.push(GapConstraint { u: znode, v: pos_var, accepting });
            }
        }
    }

    Ok(ExplicitGapCsp {
        csp: GapCspInstance { alphabets, constraints },
        n_pi1,
        n_pi2,
        supernodes,
        f_recorded: n_pi2 as u64,
        g_recorded,
    })
}

/// The assignment induced by a proof pair: positions take their proof
/// values, supernodes take the actual query configurations.
pub fn honest_assignment(
    gap: &ExplicitGapCsp,
    verifier: &LinearVerifier,
    proof: &LinearProof,
) -> Result<Vec<u32>, PcppError> {
    let spec1 = verifier.pi1_spec();
    let spec2 = verifier.pi2_spec();
    let field = spec1.field;
    let value_count = (field.order() as u64).pow(spec1.dim as u32) as usize;
    let mut sigma = vec![0u32; gap.csp.alphabets.len()];
    for (i, slot) in sigma.iter_mut().take(gap.n_pi1).enumerate() {
        let idx = FieldVector::from_index(field, spec1.arity, i as u128);
        *slot = proof.pi1.eval(&idx)?.to_index() as u32;
    }
    for (i, slot) in sigma.iter_mut().skip(gap.n_pi1).take(gap.n_pi2).enumerate() {
        let idx = FieldVector::from_index(field, spec2.arity, i as u128);
        *slot = proof.pi2.eval(&idx)?.to_index() as u32;
    }
    for node in &gap.supernodes {
        let mut cfg = 0usize;
        for (slot, &pos) in node.positions.iter().enumerate() {
            cfg += sigma[pos] as usize * value_count.pow(slot as u32);
        }
        sigma[node.var] = cfg as u32;
    }
    Ok(sigma)
}

/// Compare every stored accepting pair of the explicit instance against a
/// fresh decode of the same randomness, i.e. against the virtual sampler's
/// view. Returns the number of (supernode, position, config, value)
/// checks performed.
pub fn explicit_matches_fresh_decode(
    gap: &ExplicitGapCsp,
    verifier: &LinearVerifier,
) -> Result<u64, PcppError> {
    let spec1 = verifier.pi1_spec();
    let field = spec1.field;
    let d = spec1.dim;
    let value_count = (field.order() as u64).pow(d as u32) as usize;
    let mut checks = 0u64;
    let mut constraint_cursor = 0usize;
    for node in &gap.supernodes {
        let descriptor = verifier.decode(node.test, node.index as u128);
        let queries = verifier.queries(&descriptor);
        let arity = node.positions.len();
        let config_count = value_count.pow(arity as u32);
        for (slot, &pos_var) in node.positions.iter().enumerate() {
            let stored = &gap.csp.constraints[constraint_cursor + slot];
            if stored.u != node.var || stored.v != pos_var {
                return Err(PcppError::Invariant("constraint layout mismatch".into()));
            }
            for cfg in 0..config_count {
                let tuple: Vec<FieldVector> = (0..arity)
                    .map(|s| {
                        let vi = (cfg / value_count.pow(s as u32)) % value_count;
                        FieldVector::from_index(field, d, vi as u128)
                    })
                    .collect();
                let answers: Vec<FieldVector> = queries
                    .iter()
                    .map(|(block, qidx)| {
                        let var = position_var(gap.n_pi1, *block, qidx);
                        let s = node.positions.binary_search(&var).expect("position present");
                        tuple[s].clone()
                    })
                    .collect();
                let fresh_accept = verifier.accept(&descriptor, &answers);
                for val in 0..value_count {
                    let expected = fresh_accept && tuple[slot].to_index() as usize == val;
                    let stored_has = stored.accepting.contains(&(cfg as u32, val as u32));
                    if expected != stored_has {
                        return Err(PcppError::Invariant(format!(
                            "virtual/explicit disagreement at test {} index {} cfg {cfg} val {val}",
                            node.test, node.index
                        )));
                    }
                    checks += 1;
                }
            }
        }
        constraint_cursor += arity;
    }
    Ok(checks)
}

/// Result of sampling gap constraints against a certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub supernodes_sampled: u64,
    pub constraints_checked: u64,
    pub satisfied: u64,
    pub seed: u64,
}

/// Sample randomness choices of `verifier` (its own distribution), build
/// each supernode's configuration from the proofs, and check all of its
/// consistency constraints. Stops once at least `min_constraints` have
/// been checked.
pub fn sample_certificate_constraints(
    verifier: &Verifier,
    proofs: &ProofBundle,
    seed: u64,
    min_constraints: u64,
) -> Result<CertificateCheck, PcppError> {
    let ids = verifier.test_ids();
    let mut rng = crate::rng::sampling_rng(seed, 1);
    let mut checked = 0u64;
    let mut satisfied = 0u64;
    let mut supernodes = 0u64;
    while checked < min_constraints {
        let slot = pick_test(verifier, &ids, false, &mut rng);
        let test = verifier.sample(ids[slot], &mut rng);
        let arity = distinct_positions(verifier, &test)? as u64;
        // the certificate assigns the supernode its true query results, so
        // each of the arity constraints is satisfied iff the test accepts
        let ok = verifier.run(proofs, &test)?;
        supernodes += 1;
        checked += arity;
        if ok {
            satisfied += arity;
        }
    }
    Ok(CertificateCheck {
        supernodes_sampled: supernodes,
        constraints_checked: checked,
        satisfied,
        seed,
    })
}

/// Number of distinct query positions of a descriptor.
fn distinct_positions(verifier: &Verifier, test: &crate::pcpp::measure::AnyTest) -> Result<usize, PcppError> {
    use crate::pcpp::measure::AnyTest;
    Ok(match (verifier, test) {
        (Verifier::Linear(v), AnyTest::Linear(t)) => distinct_lin_queries(&v.queries(t)),
        (Verifier::Combined(v), AnyTest::Linear(t)) => distinct_lin_queries(&v.linear.queries(t)),
        (Verifier::Parallel(v), AnyTest::Parallel(t)) => distinct_par_queries(&v.queries(t)),
        (Verifier::Combined(v), AnyTest::Parallel(t)) => distinct_par_queries(&v.parallel.queries(t)),
        _ => {
            return Err(PcppError::Invariant(
                "verifier and test kinds do not match".into(),
            ))
        }
    })
}

fn distinct_lin_queries(queries: &[(LinBlock, FieldVector)]) -> usize {
    let set: BTreeSet<(u8, &FieldVector)> = queries
        .iter()
        .map(|(b, i)| (matches!(b, LinBlock::Pi2) as u8, i))
        .collect();
    set.len()
}

/// Structural deduplication; sampled indices are fresh seeded terms, so
/// structural equality matches semantic equality with overwhelming
/// probability.
fn distinct_par_queries(queries: &[ParQuery]) -> usize {
    let mut distinct: Vec<&ParQuery> = Vec::new();
    for q in queries {
        if !distinct.contains(&q) {
            distinct.push(q);
        }
    }
    distinct.len()
}
