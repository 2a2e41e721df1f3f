//! Adversarial proof generation for soundness probes.
//!
//! Every attack starts from the honest-structured proof bundle of a given
//! assignment (which need not be a solution) and then perturbs one block.
//! All families are deterministic functions of `(spec, seed)`.

use super::{PipelineError, ProofBundle, Verifier};
use crate::csp::Assignment;
use crate::gf::{FieldMatrix, FieldVector};
use crate::hadamard::WordOracle;
use crate::pcpp::parallel::{TauIndex, TauOracle, TauTerm};
use crate::bits::Bits;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifierKind {
    Linear,
    Parallel,
    Combined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockId {
    Pi1,
    Pi2,
    Tau1,
    Tau2,
}

/// Patch for a field-indexed block: index digits and replacement value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatchJson {
    pub index: Vec<u8>,
    pub value: Vec<u8>,
}

/// Patch for a tau block: one explicit segment per part, and the
/// replacement coordinate bits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TauPatchJson {
    pub parts: Vec<Vec<u8>>,
    pub value: Vec<u8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum AttackFamily {
    /// The fully honest proof structure for the given assignment; with a
    /// non-solution this is the canonical wrong-assignment probe.
    WrongAssignmentHonest,
    /// Replace finitely many entries (or corrupt at a seeded rate, for
    /// field-indexed blocks).
    OverlayCorruption {
        block: BlockId,
        #[serde(default)]
        patches: Vec<PatchJson>,
        #[serde(default)]
        tau_patches: Vec<TauPatchJson>,
        #[serde(default)]
        rate: Option<f64>,
    },
    /// Replace the whole block by a seeded random word.
    RandomWord { block: BlockId },
    /// Replace the whole block by the all-zero word.
    ZeroedBlock { block: BlockId },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttackSpec {
    pub verifier: VerifierKind,
    /// Assignment the honest layers are built from (entry bitmasks).
    pub assignment: Vec<Vec<u8>>,
    #[serde(flatten)]
    pub family: AttackFamily,
    #[serde(default)]
    pub seed: u64,
}

fn parse_assignment(verifier: &Verifier, raw: &[Vec<u8>]) -> Result<Assignment, PipelineError> {
    let g = match verifier {
        Verifier::Linear(v) => v.instance(),
        Verifier::Parallel(v) => v.instance(),
        Verifier::Combined(v) => v.instance(),
    };
    if raw.len() != g.k {
        return Err(PipelineError::BadAttack(format!(
            "assignment has {} values, instance has {} variables",
            raw.len(),
            g.k
        )));
    }
    let values = raw
        .iter()
        .map(|v| FieldVector::from_bits(g.field, v.clone()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| PipelineError::BadAttack(e.to_string()))?;
    if values.iter().any(|v| v.len() != g.d) {
        return Err(PipelineError::BadAttack("value dimension mismatch".into()));
    }
    Ok(Assignment { values })
}

fn zero_like(w: &WordOracle) -> WordOracle {
    let spec = w.spec();
    WordOracle::honest(FieldMatrix::zero(spec.field, spec.dim, spec.arity))
}

fn overlay_word(
    base: &WordOracle,
    patches: &[PatchJson],
    rate: Option<f64>,
    seed: u64,
) -> Result<WordOracle, PipelineError> {
    let spec = base.spec();
    let mut map = BTreeMap::new();
    for p in patches {
        let index = FieldVector::from_bits(spec.field, p.index.clone())
            .map_err(|e| PipelineError::BadAttack(e.to_string()))?;
        let value = FieldVector::from_bits(spec.field, p.value.clone())
            .map_err(|e| PipelineError::BadAttack(e.to_string()))?;
        if index.len() != spec.arity || value.len() != spec.dim {
            return Err(PipelineError::BadAttack("patch shape mismatch".into()));
        }
        map.insert(index, value);
    }
    let mut out = if map.is_empty() {
        base.clone()
    } else {
        WordOracle::overlay(base.clone(), map)
    };
    if let Some(rate) = rate {
        if !(0.0..=1.0).contains(&rate) {
            return Err(PipelineError::BadAttack(format!("rate {rate} outside [0,1]")));
        }
        out = WordOracle::seeded(out, rate, seed);
    }
    Ok(out)
}

fn overlay_tau(
    base: &TauOracle,
    seg_bits: usize,
    n_parts: u64,
    patches: &[TauPatchJson],
    d: usize,
) -> Result<TauOracle, PipelineError> {
    let mut list = Vec::new();
    for p in patches {
        if p.parts.len() != n_parts as usize {
            return Err(PipelineError::BadAttack(format!(
                "tau patch has {} parts, index space has {n_parts}",
                p.parts.len()
            )));
        }
        let segs = p
            .parts
            .iter()
            .map(|bits| {
                if bits.len() != seg_bits || bits.iter().any(|&b| b > 1) {
                    Err(PipelineError::BadAttack("tau patch segment malformed".into()))
                } else {
                    Ok(Bits::from_fn(seg_bits, |i| bits[i] == 1))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if p.value.len() != d || p.value.iter().any(|&b| b > 1) {
            return Err(PipelineError::BadAttack("tau patch value malformed".into()));
        }
        let index = TauIndex::new(seg_bits, vec![TauTerm::Explicit(segs)]);
        list.push((index, Bits::from_fn(d, |i| p.value[i] == 1)));
    }
    Ok(TauOracle::Overlay { base: Box::new(base.clone()), patches: list })
}

/// Build the proof bundle an attack specifies.
pub fn generate_attack(verifier: &Verifier, spec: &AttackSpec) -> Result<ProofBundle, PipelineError> {
    let sigma = parse_assignment(verifier, &spec.assignment)?;
    let mut bundle = match verifier {
        Verifier::Linear(v) => ProofBundle::Linear(v.honest_proof_unchecked(&sigma)),
        Verifier::Parallel(v) => ProofBundle::Parallel(v.honest_proof_unchecked(&sigma)),
        Verifier::Combined(v) => ProofBundle::Combined(v.honest_proof_unchecked(&sigma)),
    };
    let (tau1_bits, tau2_bits, n_parts, d) = match verifier {
        Verifier::Parallel(v) => (v.c(), v.c() * v.c(), v.n_parts(), v.d()),
        Verifier::Combined(v) => (
            v.parallel.c(),
            v.parallel.c() * v.parallel.c(),
            v.parallel.n_parts(),
            v.parallel.d(),
        ),
        Verifier::Linear(_) => (0, 0, 0, 0),
    };

    let family = &spec.family;
    match family {
        AttackFamily::WrongAssignmentHonest => Ok(bundle),
        AttackFamily::ZeroedBlock { block } => {
            with_block(&mut bundle, *block, |slot| match slot {
                BlockSlot::Word(w) => {
                    *w = zero_like(w);
                    Ok(())
                }
                BlockSlot::Tau(t) => {
                    *t = TauOracle::Zero;
                    Ok(())
                }
            })?;
            Ok(bundle)
        }
        AttackFamily::RandomWord { block } => {
            with_block(&mut bundle, *block, |slot| match slot {
                BlockSlot::Word(w) => {
                    *w = WordOracle::seeded(zero_like(w), 1.0, spec.seed);
                    Ok(())
                }
                BlockSlot::Tau(_) => Err(PipelineError::BadAttack(
                    "random-word attacks on tau blocks are not supported; use overlay patches"
                        .into(),
                )),
            })?;
            Ok(bundle)
        }
        AttackFamily::OverlayCorruption { block, patches, tau_patches, rate } => {
            with_block(&mut bundle, *block, |slot| match slot {
                BlockSlot::Word(w) => {
                    *w = overlay_word(w, patches, *rate, spec.seed)?;
                    Ok(())
                }
                BlockSlot::Tau(t) => {
                    if rate.is_some() {
                        return Err(PipelineError::BadAttack(
                            "rate corruption is only supported on field-indexed blocks".into(),
                        ));
                    }
                    let bits = if *block == BlockId::Tau1 { tau1_bits } else { tau2_bits };
                    *t = overlay_tau(t, bits, n_parts, tau_patches, d)?;
                    Ok(())
                }
            })?;
            Ok(bundle)
        }
    }
}

enum BlockSlot<'a> {
    Word(&'a mut WordOracle),
    Tau(&'a mut TauOracle),
}

fn with_block(
    bundle: &mut ProofBundle,
    block: BlockId,
    f: impl FnOnce(BlockSlot<'_>) -> Result<(), PipelineError>,
) -> Result<(), PipelineError> {
    let slot = match (bundle, block) {
        (ProofBundle::Linear(p), BlockId::Pi1) => BlockSlot::Word(&mut p.pi1),
        (ProofBundle::Linear(p), BlockId::Pi2) => BlockSlot::Word(&mut p.pi2),
        (ProofBundle::Parallel(p), BlockId::Pi1) => BlockSlot::Word(&mut p.pi1),
        (ProofBundle::Parallel(p), BlockId::Tau1) => BlockSlot::Tau(&mut p.tau1),
        (ProofBundle::Parallel(p), BlockId::Tau2) => BlockSlot::Tau(&mut p.tau2),
        (ProofBundle::Combined(p), BlockId::Pi1) => BlockSlot::Word(&mut p.pi1),
        (ProofBundle::Combined(p), BlockId::Pi2) => BlockSlot::Word(&mut p.pi2_linear),
        (ProofBundle::Combined(p), BlockId::Tau1) => BlockSlot::Tau(&mut p.tau1),
        (ProofBundle::Combined(p), BlockId::Tau2) => BlockSlot::Tau(&mut p.tau2),
        _ => {
            return Err(PipelineError::BadAttack(format!(
                "block {block:?} does not exist in this proof layout"
            )))
        }
    };
    f(slot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::fixtures::lin1;
    use crate::pcpp::linear::LinearVerifier;
    use crate::pcpp::measure::{estimate_acceptance, Mode};

    fn spec_json(family: serde_json::Value) -> AttackSpec {
        let mut base = serde_json::json!({
            "verifier": "linear",
            "assignment": [[1], [0]],
            "seed": 5,
        });
        base.as_object_mut()
            .unwrap()
            .extend(family.as_object().unwrap().clone());
        serde_json::from_value(base).unwrap()
    }

    #[test]
    fn wrong_assignment_attack_is_the_soundness_pair() {
        let v = Verifier::Linear(LinearVerifier::new(lin1()).unwrap());
        let spec = spec_json(serde_json::json!({"family": "wrong-assignment-honest"}));
        let proof = generate_attack(&v, &spec).unwrap();
        let report = estimate_acceptance(&v, &proof, Mode::exhaustive(), None).unwrap();
        assert!(!report.is_perfect());
    }

    #[test]
    fn overlay_rate_zero_is_identity() {
        let v = Verifier::Linear(LinearVerifier::new(lin1()).unwrap());
        let honest = serde_json::json!({
            "verifier": "linear",
            "assignment": [[1], [1]],
            "family": "overlay-corruption",
            "block": "pi1",
            "rate": 0.0,
        });
        let spec: AttackSpec = serde_json::from_value(honest).unwrap();
        let proof = generate_attack(&v, &spec).unwrap();
        let report = estimate_acceptance(&v, &proof, Mode::exhaustive(), None).unwrap();
        assert!(report.is_perfect());
    }

    #[test]
    fn zeroed_pi2_rejects_somewhere() {
        let v = Verifier::Linear(LinearVerifier::new(lin1()).unwrap());
        let spec = serde_json::from_value(serde_json::json!({
            "verifier": "linear",
            "assignment": [[1], [1]],
            "family": "zeroed-block",
            "block": "pi2",
        }))
        .unwrap();
        let proof = generate_attack(&v, &spec).unwrap();
        let report = estimate_acceptance(&v, &proof, Mode::exhaustive(), None).unwrap();
        assert!(!report.is_perfect());
    }

    #[test]
    fn zeroed_tau2_trips_constraint_test() {
        use crate::bits::Bits;
        use crate::pcpp::parallel::{ParallelTest, ParallelVerifier, TauIndex, TauTerm};
        let v = ParallelVerifier::new(crate::csp::fixtures::par1()).unwrap();
        let spec: AttackSpec = serde_json::from_value(serde_json::json!({
            "verifier": "parallel",
            "assignment": [[0, 1], [1, 0]],
            "family": "zeroed-block",
            "block": "tau2",
        }))
        .unwrap();
        let proof = match generate_attack(&Verifier::Parallel(
            ParallelVerifier::new(crate::csp::fixtures::par1()).unwrap(),
        ), &spec)
        .unwrap()
        {
            ProofBundle::Parallel(p) => p,
            _ => unreachable!(),
        };
        // with tau2 identically zero, the constraint test sees y = 0 and
        // rejects exactly when the selected right-hand sides sum to 1
        let mut rng = crate::rng::sampling_rng(19, 0);
        use rand::RngCore;
        let mut rejected = 0u32;
        let total = 1u32 << v.q();
        for mask in 0..total {
            let h = Bits::from_fn(v.q(), |i| (mask >> i) & 1 == 1);
            let expected_reject = (0..v.d()).any(|j| v.gamma(v.kappa()[j]).combo_rhs(&h));
            let t = ParallelTest::P7 {
                h,
                beta: TauIndex::new(v.c() * v.c(), vec![TauTerm::Seeded { seed: rng.next_u64() }]),
            };
            let accepted = v.run(&proof.pi1, &proof.tau1, &proof.tau2, &t).unwrap();
            assert_eq!(accepted, !expected_reject);
            if !accepted {
                rejected += 1;
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn unknown_block_is_an_error() {
        let v = Verifier::Linear(LinearVerifier::new(lin1()).unwrap());
        let spec = serde_json::from_value::<AttackSpec>(serde_json::json!({
            "verifier": "linear",
            "assignment": [[1], [1]],
            "family": "zeroed-block",
            "block": "tau1",
        }))
        .unwrap();
        assert!(matches!(
            generate_attack(&v, &spec),
            Err(PipelineError::BadAttack(_))
        ));
    }
}
