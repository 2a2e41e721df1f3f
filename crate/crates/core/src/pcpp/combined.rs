//! The combined verifier: with equal probability run the linear verifier
//! on `pi1 . pi_L` or the parallel verifier on `pi1 . pi_P`, over one
//! shared first block. The exact 1/2-1/2 branch realizes the same
//! distribution as padding both verifiers to a common randomness size.

use super::linear::{LinearProof, LinearVerifier};
use super::parallel::{ParallelProof, ParallelVerifier, TauOracle};
use super::PcppError;
use crate::csp::{Assignment, Rational, VecCspInstance};
use crate::hadamard::WordOracle;
use serde::{Deserialize, Serialize};

/// Proximity parameters of a combined verifier instantiation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcppParams {
    pub queries: u32,
    pub delta: Rational,
    pub eps: Rational,
    pub eps_linear: Rational,
    pub eps_parallel: Rational,
}

impl Default for PcppParams {
    fn default() -> Self {
        PcppParams::custom(Rational::new(1, 600), Rational::new(1, 1200))
            .expect("default parameters are in range")
    }
}

impl PcppParams {
    /// Instantiate with custom per-verifier soundness parameters;
    /// `eps_linear` must lie in (0, 1/400) and `eps_parallel` in
    /// (0, 1/800). The combined verifier then has proximity
    /// `delta = max(24 eps_L, 48 eps_P)` and soundness
    /// `eps = min(eps_L, eps_P) / 2`.
    pub fn custom(eps_linear: Rational, eps_parallel: Rational) -> Result<Self, PcppError> {
        let zero = Rational::from_integer(0);
        if eps_linear <= zero || eps_linear >= Rational::new(1, 400) {
            return Err(PcppError::Invariant(format!(
                "eps_linear {eps_linear} outside (0, 1/400)"
            )));
        }
        if eps_parallel <= zero || eps_parallel >= Rational::new(1, 800) {
            return Err(PcppError::Invariant(format!(
                "eps_parallel {eps_parallel} outside (0, 1/800)"
            )));
        }
        let delta = (eps_linear * Rational::from_integer(24))
            .max(eps_parallel * Rational::from_integer(48));
        let eps = eps_linear.min(eps_parallel) / Rational::from_integer(2);
        Ok(PcppParams {
            queries: 4,
            delta,
            eps,
            eps_linear,
            eps_parallel,
        })
    }
}

/// Proof layout `pi1 . pi_L . pi_P` for the combined verifier.
#[derive(Clone, Debug)]
pub struct CombinedProof {
    pub pi1: WordOracle,
    pub pi2_linear: WordOracle,
    pub tau1: TauOracle,
    pub tau2: TauOracle,
}

impl CombinedProof {
    pub fn linear_view(&self) -> (&WordOracle, &WordOracle) {
        (&self.pi1, &self.pi2_linear)
    }

    pub fn parallel_view(&self) -> (&WordOracle, &TauOracle, &TauOracle) {
        (&self.pi1, &self.tau1, &self.tau2)
    }
}

pub struct CombinedVerifier {
    pub linear: LinearVerifier,
    pub parallel: ParallelVerifier,
    pub params: PcppParams,
    g: VecCspInstance,
}

impl CombinedVerifier {
    /// Split a general vector-valued CSP and build both sub-verifiers.
    pub fn for_instance(g: VecCspInstance) -> Result<Self, PcppError> {
        Self::with_params(g, PcppParams::default())
    }

    pub fn with_params(g: VecCspInstance, params: PcppParams) -> Result<Self, PcppError> {
        let violations = g.validate();
        if !violations.is_empty() {
            return Err(PcppError::Invariant(format!("instance invalid: {}", violations[0])));
        }
        let (gl, gp) = g.split();
        Ok(CombinedVerifier {
            linear: LinearVerifier::new(gl)?,
            parallel: ParallelVerifier::new(gp)?,
            params,
            g,
        })
    }

    pub fn instance(&self) -> &VecCspInstance {
        &self.g
    }

    pub fn honest_proof(&self, sigma: &Assignment) -> Result<CombinedProof, PcppError> {
        if self.g.evaluate(sigma)? != Rational::from_integer(1) {
            return Err(PcppError::NotASolution);
        }
        Ok(self.honest_proof_unchecked(sigma))
    }

    pub fn honest_proof_unchecked(&self, sigma: &Assignment) -> CombinedProof {
        let LinearProof { pi1, pi2 } = self.linear.honest_proof_unchecked(sigma);
        let ParallelProof { tau1, tau2, .. } = self.parallel.honest_proof_unchecked(sigma);
        CombinedProof { pi1, pi2_linear: pi2, tau1, tau2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::fixtures::{assignment, lin1, par1};
    use crate::gf::GF2;

    #[test]
    fn default_parameters() {
        let p = PcppParams::default();
        assert_eq!(p.queries, 4);
        assert_eq!(p.delta, Rational::new(1, 25));
        assert_eq!(p.eps, Rational::new(1, 2400));
        assert_eq!(p.eps_linear, Rational::new(1, 600));
        assert_eq!(p.eps_parallel, Rational::new(1, 1200));
    }

    #[test]
    fn custom_parameters_validate_ranges() {
        assert!(PcppParams::custom(Rational::new(1, 400), Rational::new(1, 1200)).is_err());
        assert!(PcppParams::custom(Rational::new(1, 600), Rational::new(1, 800)).is_err());
        let p = PcppParams::custom(Rational::new(1, 500), Rational::new(1, 1000)).unwrap();
        assert_eq!(p.delta, Rational::new(48, 1000));
        assert_eq!(p.eps, Rational::new(1, 2000));
    }

    #[test]
    fn verifiers_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<CombinedVerifier>();
        assert_send_sync::<crate::pcpp::linear::LinearVerifier>();
        assert_send_sync::<crate::pcpp::parallel::ParallelVerifier>();
        assert_send_sync::<crate::csp::VecCspInstance>();
        assert_send_sync::<CombinedProof>();
    }

    #[test]
    fn splits_and_builds_proofs() {
        let v = CombinedVerifier::for_instance(lin1()).unwrap();
        assert_eq!(v.linear.m(), 1);
        assert_eq!(v.parallel.m(), 0);
        let sigma = assignment(GF2, &[&[1], &[1]]);
        let proof = v.honest_proof(&sigma).unwrap();
        let (pi1, pi2) = proof.linear_view();
        assert_eq!(pi1.spec().arity, 2);
        assert_eq!(pi2.spec().arity, 2);

        let vp = CombinedVerifier::for_instance(par1()).unwrap();
        assert_eq!(vp.linear.m(), 0);
        assert_eq!(vp.parallel.m(), 1);
        let sigma = assignment(GF2, &[&[0, 0], &[0, 0]]);
        assert!(vp.honest_proof(&sigma).is_ok());
    }
}
