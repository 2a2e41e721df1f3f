//! End-to-end chain and the PPCPP-to-CSP conversion.
//!
//! [`gap`] turns a verifier into a gap CSP: positions of the proof blocks
//! become variables, every randomness choice becomes a supernode holding a
//! full query configuration, and each supernode is tied to its queried
//! positions by consistency constraints. Micro verifiers can be
//! materialized ([`gap::build_explicit`]); everything else is exposed as a
//! virtual constraint sampler, which is faithful because the conversion is
//! positional.
//!
//! [`end_to_end`] chains formula -> vector-valued CSP -> split -> combined
//! verifier -> gap CSP and reports sizes, constants, and a sampled check of
//! the honest chain certificate. [`attack`] builds adversarial proof
//! bundles for soundness probes.

pub mod attack;
pub mod gap;
pub mod proof_io;

use crate::csp::CspError;
use crate::pcpp::combined::CombinedVerifier;
use crate::pcpp::measure::{ProofBundle, Verifier};
use crate::pcpp::{PcppError, TestCount};
use crate::sat2vec::reduce::{reduce_sat_to_veccsp, Reduction};
use crate::sat2vec::{brute_force_sat, Cnf3, SatError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Pcpp(#[from] PcppError),
    #[error(transparent)]
    Csp(#[from] CspError),
    #[error("attack spec invalid: {0}")]
    BadAttack(String),
    #[error("proof json invalid: {0}")]
    BadProof(String),
}

/// Sizes of the vector-valued stage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VecCspSizes {
    pub k: usize,
    pub d: usize,
    pub alphabet: String,
    pub constraints: usize,
    pub linear: usize,
    pub parallel: usize,
}

/// Base-2 logarithms of the four proof block lengths.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofLengthsLog2 {
    pub pi1: u128,
    pub pi2_linear: u128,
    pub tau1: u128,
    pub tau2: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndToEndReport {
    pub formula_n: usize,
    pub formula_m: usize,
    pub ell: usize,
    pub s_max: usize,
    pub veccsp: VecCspSizes,
    /// Recorded shared circuit size and equation count of the parallel arm.
    pub recorded_c: usize,
    pub recorded_q: usize,
    pub params: crate::pcpp::combined::PcppParams,
    /// Soundness threshold of the produced gap CSP, `1 - eps_star`.
    pub eps_star: String,
    pub randomness: Vec<TestCount>,
    pub proof_lengths_log2: ProofLengthsLog2,
    /// Sampled validation of the honest chain certificate, when the input
    /// formula is satisfiable and small enough to solve exhaustively.
    pub certificate: Option<gap::CertificateCheck>,
}

impl EndToEndReport {
    /// The report as a list of per-stage records:
    /// `{stage, sizes, constants, acceptance}`.
    pub fn to_stage_json(&self) -> serde_json::Value {
        serde_json::json!([
            {
                "stage": "sat2vec",
                "sizes": {
                    "n": self.formula_n,
                    "m": self.formula_m,
                    "ell": self.ell,
                    "s_max": self.s_max,
                    "k": self.veccsp.k,
                    "d": self.veccsp.d,
                    "constraints": self.veccsp.constraints,
                },
                "constants": { "alphabet": self.veccsp.alphabet },
            },
            {
                "stage": "split",
                "sizes": { "linear": self.veccsp.linear, "parallel": self.veccsp.parallel },
            },
            {
                "stage": "pcpp",
                "sizes": {
                    "recorded_c": self.recorded_c,
                    "recorded_q": self.recorded_q,
                    "proof_lengths_log2": self.proof_lengths_log2,
                    "randomness_log2": self.randomness,
                },
                "constants": self.params,
            },
            {
                "stage": "gapcsp",
                "constants": { "eps_star": self.eps_star },
                "acceptance": self.certificate,
            },
        ])
    }
}

/// Everything the full chain produced.
pub struct EndToEnd {
    pub reduction: Reduction,
    pub verifier: Verifier,
    pub honest: Option<ProofBundle>,
    pub report: EndToEndReport,
}

/// Run the whole chain on a formula. When the formula is satisfiable (and
/// within the brute-force cap) the honest certificate is built and
/// `min_constraints` sampled gap constraints are checked against it.
pub fn end_to_end(
    cnf: &Cnf3,
    ell: usize,
    seed: u64,
    min_constraints: u64,
) -> Result<EndToEnd, PipelineError> {
    let reduction = reduce_sat_to_veccsp(cnf, ell)?;
    let g = reduction.instance.clone();
    let (gl, gp) = g.split();
    let sizes = VecCspSizes {
        k: g.k,
        d: g.d,
        alphabet: format!("GF({})^{}", g.field.order(), g.d),
        constraints: g.constraints.len(),
        linear: gl.constraints.len(),
        parallel: gp.constraints.len(),
    };
    let combined = CombinedVerifier::for_instance(g)?;
    let params = combined.params.clone();
    let eps_star = params.eps / crate::csp::Rational::from_integer(params.queries as u64);
    let recorded_c = combined.parallel.c();
    let recorded_q = combined.parallel.q();
    let t = cnf_field_log2(&combined);
    let proof_lengths = ProofLengthsLog2 {
        pi1: t * combined.linear.k() as u128,
        pi2_linear: t * (combined.linear.k() * combined.linear.m()) as u128,
        tau1: recorded_c as u128 * combined.parallel.n_parts() as u128,
        tau2: (recorded_c as u128).pow(2) * combined.parallel.n_parts() as u128,
    };
    let verifier = Verifier::Combined(combined);
    let randomness = verifier.test_counts();

    let witness = if cnf.n <= crate::sat2vec::SAT_BRUTE_FORCE_CAP {
        brute_force_sat(cnf)?
    } else {
        None
    };
    let (honest, certificate) = match witness {
        Some(w) => {
            let sigma = reduction.lift_assignment(&w);
            let proof = match &verifier {
                Verifier::Combined(v) => ProofBundle::Combined(v.honest_proof(&sigma)?),
                _ => unreachable!(),
            };
            let check = gap::sample_certificate_constraints(&verifier, &proof, seed, min_constraints)?;
            (Some(proof), Some(check))
        }
        None => (None, None),
    };

    let report = EndToEndReport {
        formula_n: cnf.n,
        formula_m: cnf.m(),
        ell,
        s_max: reduction.plan.s_max,
        veccsp: sizes,
        recorded_c,
        recorded_q,
        params,
        eps_star: format!("{}/{}", eps_star.numer(), eps_star.denom()),
        randomness,
        proof_lengths_log2: proof_lengths,
        certificate,
    };
    Ok(EndToEnd { reduction, verifier, honest, report })
}

fn cnf_field_log2(v: &CombinedVerifier) -> u128 {
    v.instance().field.t() as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat2vec::sat1;

    #[test]
    fn sat1_chain_constants() {
        let out = end_to_end(&sat1(), 1, 11, 200).unwrap();
        let r = &out.report;
        assert_eq!(r.veccsp.k, 48);
        assert_eq!(r.veccsp.d, 3);
        assert_eq!(r.veccsp.linear, 48);
        assert_eq!(r.veccsp.parallel, 24);
        assert_eq!(r.eps_star, "1/9600");
        let cert = r.certificate.as_ref().expect("sat1 is satisfiable");
        assert!(cert.constraints_checked >= 200);
        assert_eq!(cert.satisfied, cert.constraints_checked);
        // pi1 has length 8^48 = 2^144
        assert_eq!(r.proof_lengths_log2.pi1, 144);
    }

    #[test]
    fn unsat_formula_reports_without_certificate() {
        let cnf = crate::sat2vec::complete_formula_3vars();
        let out = end_to_end(&cnf, 1, 1, 10).unwrap();
        assert!(out.report.certificate.is_none());
        assert_eq!(out.report.s_max, 8);
    }

    #[test]
    fn stage_json_shape() {
        let out = end_to_end(&sat1(), 1, 3, 50).unwrap();
        let stages = out.report.to_stage_json();
        let names: Vec<&str> = stages
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["stage"].as_str().unwrap())
            .collect();
        assert_eq!(names, vec!["sat2vec", "split", "pcpp", "gapcsp"]);
        assert_eq!(stages[0]["constants"]["alphabet"], "GF(8)^3");
        assert_eq!(stages[3]["constants"]["eps_star"], "1/9600");
        assert!(stages[3]["acceptance"]["satisfied"].as_u64().unwrap() >= 50);
    }
}
