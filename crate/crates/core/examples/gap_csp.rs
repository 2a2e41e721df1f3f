//! Converting a verifier into a gap CSP: explicit materialization on a
//! micro fixture, plus the virtual constraint sampler.
//!
//! ```sh
//! cargo run --example gap_csp
//! ```

use gapcsp::csp::{Assignment, Constraint, ConstraintKind, VecCspInstance};
use gapcsp::gf::{FieldMatrix, FieldVector, GF2};
use gapcsp::pcpp::linear::LinearVerifier;
use gapcsp::pcpp::measure::{ProofBundle, Verifier};
use gapcsp::pipeline::gap::{
    build_explicit, explicit_matches_fresh_decode, honest_assignment,
    sample_certificate_constraints, GapCaps,
};

fn main() {
    let g = VecCspInstance::new(
        GF2,
        1,
        2,
        vec![Constraint {
            u: 0,
            v: 1,
            kind: ConstraintKind::Linear { m: FieldMatrix::identity(GF2, 1) },
        }],
    );
    let verifier = LinearVerifier::new(g).unwrap();

    // every proof position becomes a variable, every randomness choice a
    // supernode with one consistency constraint per queried position
    let gap = build_explicit(&verifier, GapCaps::default()).unwrap();
    println!(
        "|V*| = {} = pi1 {} + aux {} + supernodes {};  |E*| = {}",
        gap.n_variables(),
        gap.n_pi1,
        gap.n_pi2,
        gap.supernodes.len(),
        gap.n_constraints()
    );
    println!("recorded f = {}, g = {}", gap.f_recorded, gap.g_recorded);

    // the honest proof extends to a satisfying assignment of the gap CSP
    let sigma = Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
        ],
    };
    let proof = verifier.honest_proof(&sigma).unwrap();
    let assignment = honest_assignment(&gap, &verifier, &proof).unwrap();
    println!("val(G*, honest) = {}", gap.csp.evaluate(&assignment).unwrap());

    // a wrong-assignment proof violates a visible fraction
    let cheat = verifier.honest_proof_unchecked(&Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
            FieldVector::from_bits(GF2, vec![0]).unwrap(),
        ],
    });
    let bad = honest_assignment(&gap, &verifier, &cheat).unwrap();
    println!("val(G*, cheat)  = {}", gap.csp.evaluate(&bad).unwrap());

    // the stored tables agree with a fresh decode of every randomness
    // choice, i.e. with the virtual sampler
    let checks = explicit_matches_fresh_decode(&gap, &verifier).unwrap();
    println!("virtual/explicit agreement over {checks} table entries");

    // the virtual sampler also serves instances too large to materialize
    let check = sample_certificate_constraints(
        &Verifier::Linear(verifier),
        &ProofBundle::Linear(proof),
        3,
        500,
    )
    .unwrap();
    println!(
        "sampled {} constraints over {} supernodes: {} satisfied",
        check.constraints_checked, check.supernodes_sampled, check.satisfied
    );
}
