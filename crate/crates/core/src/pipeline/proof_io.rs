//! JSON wire format for proof bundles and word oracles.
//!
//! Word oracles:
//! `{"kind":"honest","field":{"t":..},"message":[[..]]}` |
//! `{"kind":"explicit","field":..,"arity":..,"dim":..,"values":[[..]]}` |
//! `{"kind":"overlay","base":..,"patches":[{"index":[..],"value":[..]}]}` |
//! `{"kind":"seeded","base":..,"rate":..,"seed":..}`.
//!
//! Indices serialize as digit vectors over the field. Tau oracles use
//! their structural encoding directly.

use super::{PipelineError, ProofBundle};
use crate::gf::{FieldMatrix, FieldSpec, FieldVector};
use crate::hadamard::{OracleSpec, WordOracle};
use crate::pcpp::combined::CombinedProof;
use crate::pcpp::linear::LinearProof;
use crate::pcpp::parallel::{ParallelProof, TauOracle};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WordJson {
    Honest {
        field: FieldSpec,
        message: Vec<Vec<u8>>,
    },
    Explicit {
        field: FieldSpec,
        arity: usize,
        dim: usize,
        values: Vec<Vec<u8>>,
    },
    Overlay {
        base: Box<WordJson>,
        patches: Vec<PatchPair>,
    },
    Seeded {
        base: Box<WordJson>,
        rate: f64,
        seed: u64,
    },
}

#[derive(Serialize, Deserialize)]
struct PatchPair {
    index: Vec<u8>,
    value: Vec<u8>,
}

fn word_to_json(w: &WordOracle) -> WordJson {
    match w {
        WordOracle::Honest { message } => WordJson::Honest {
            field: message.spec(),
            message: message.to_rows(),
        },
        WordOracle::Explicit { spec, values } => WordJson::Explicit {
            field: spec.field,
            arity: spec.arity,
            dim: spec.dim,
            values: values.iter().map(|v| v.raw().to_vec()).collect(),
        },
        WordOracle::Overlay { base, patches } => WordJson::Overlay {
            base: Box::new(word_to_json(base)),
            patches: patches
                .iter()
                .map(|(i, v)| PatchPair { index: i.raw().to_vec(), value: v.raw().to_vec() })
                .collect(),
        },
        WordOracle::Seeded { base, rate, seed } => WordJson::Seeded {
            base: Box::new(word_to_json(base)),
            rate: *rate,
            seed: *seed,
        },
    }
}

fn word_from_json(j: &WordJson) -> Result<WordOracle, PipelineError> {
    let bad = |e: &dyn std::fmt::Display| PipelineError::BadProof(e.to_string());
    Ok(match j {
        WordJson::Honest { field, message } => {
            WordOracle::honest(FieldMatrix::from_rows(*field, message).map_err(|e| bad(&e))?)
        }
        WordJson::Explicit { field, arity, dim, values } => {
            let spec = OracleSpec { field: *field, arity: *arity, dim: *dim };
            let parsed = values
                .iter()
                .map(|v| FieldVector::from_bits(*field, v.clone()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(&e))?;
            if parsed.iter().any(|v| v.len() != *dim) {
                return Err(PipelineError::BadProof("explicit value dimension mismatch".into()));
            }
            WordOracle::explicit(spec, parsed).map_err(|e| bad(&e))?
        }
        WordJson::Overlay { base, patches } => {
            let base = word_from_json(base)?;
            let spec = base.spec();
            let mut map = BTreeMap::new();
            for p in patches {
                let index =
                    FieldVector::from_bits(spec.field, p.index.clone()).map_err(|e| bad(&e))?;
                let value =
                    FieldVector::from_bits(spec.field, p.value.clone()).map_err(|e| bad(&e))?;
                if index.len() != spec.arity || value.len() != spec.dim {
                    return Err(PipelineError::BadProof("patch shape mismatch".into()));
                }
                map.insert(index, value);
            }
            WordOracle::overlay(base, map)
        }
        WordJson::Seeded { base, rate, seed } => {
            WordOracle::seeded(word_from_json(base)?, *rate, *seed)
        }
    })
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ProofJson {
    Linear {
        pi1: WordJson,
        pi2: WordJson,
    },
    Parallel {
        pi1: WordJson,
        tau1: TauOracle,
        tau2: TauOracle,
    },
    Combined {
        pi1: WordJson,
        pi2_linear: WordJson,
        tau1: TauOracle,
        tau2: TauOracle,
    },
}

pub fn proof_to_json(bundle: &ProofBundle) -> serde_json::Value {
    let j = match bundle {
        ProofBundle::Linear(p) => ProofJson::Linear {
            pi1: word_to_json(&p.pi1),
            pi2: word_to_json(&p.pi2),
        },
        ProofBundle::Parallel(p) => ProofJson::Parallel {
            pi1: word_to_json(&p.pi1),
            tau1: p.tau1.clone(),
            tau2: p.tau2.clone(),
        },
        ProofBundle::Combined(p) => ProofJson::Combined {
            pi1: word_to_json(&p.pi1),
            pi2_linear: word_to_json(&p.pi2_linear),
            tau1: p.tau1.clone(),
            tau2: p.tau2.clone(),
        },
    };
    serde_json::to_value(j).expect("proof serialization cannot fail")
}

pub fn proof_from_json(value: &serde_json::Value) -> Result<ProofBundle, PipelineError> {
    let j: ProofJson = serde_json::from_value(value.clone())
        .map_err(|e| PipelineError::BadProof(e.to_string()))?;
    Ok(match j {
        ProofJson::Linear { pi1, pi2 } => ProofBundle::Linear(LinearProof {
            pi1: word_from_json(&pi1)?,
            pi2: word_from_json(&pi2)?,
        }),
        ProofJson::Parallel { pi1, tau1, tau2 } => ProofBundle::Parallel(ParallelProof {
            pi1: word_from_json(&pi1)?,
            tau1,
            tau2,
        }),
        ProofJson::Combined { pi1, pi2_linear, tau1, tau2 } => {
            ProofBundle::Combined(CombinedProof {
                pi1: word_from_json(&pi1)?,
                pi2_linear: word_from_json(&pi2_linear)?,
                tau1,
                tau2,
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::fixtures::{assignment, lin1, par1};
    use crate::gf::GF2;
    use crate::pcpp::linear::LinearVerifier;
    use crate::pcpp::measure::{estimate_acceptance, Mode, Verifier};
    use crate::pcpp::parallel::ParallelVerifier;
    use crate::pcpp::TestId;

    #[test]
    fn linear_proof_roundtrip_behaves_identically() {
        let v = LinearVerifier::new(lin1()).unwrap();
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let proof = ProofBundle::Linear(v.honest_proof(&sigma).unwrap());
        let json = proof_to_json(&proof);
        let back = proof_from_json(&json).unwrap();
        let verifier = Verifier::Linear(v);
        let a = estimate_acceptance(&verifier, &proof, Mode::exhaustive(), None).unwrap();
        let b = estimate_acceptance(&verifier, &back, Mode::exhaustive(), None).unwrap();
        assert_eq!(a.exact, b.exact);
        assert_eq!(a.exact.as_deref(), Some("1/1"));
    }

    #[test]
    fn parallel_proof_roundtrip_behaves_identically() {
        let v = ParallelVerifier::new(par1()).unwrap();
        let sigma = assignment(GF2, &[&[0, 1], &[1, 0]]);
        let proof = ProofBundle::Parallel(v.honest_proof(&sigma).unwrap());
        let json = proof_to_json(&proof);
        let back = proof_from_json(&json).unwrap();
        let verifier = Verifier::Parallel(v);
        let mode = Mode::Sampled { trials: 400, seed: 77 };
        let a = estimate_acceptance(&verifier, &proof, mode, Some(&[TestId::P2, TestId::P6])).unwrap();
        let b = estimate_acceptance(&verifier, &back, mode, Some(&[TestId::P2, TestId::P6])).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert!(a.is_perfect());
    }

    #[test]
    fn malformed_proof_is_an_error() {
        let j = serde_json::json!({"kind": "linear", "pi1": {"kind": "honest", "field": {"t": 1}, "message": [[7]]}});
        assert!(proof_from_json(&j).is_err());
    }
}
