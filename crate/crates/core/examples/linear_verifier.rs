//! The linear-constraint verifier on a micro fixture: exhaustive honest
//! acceptance and the soundness of the matrix/constraint tests.
//!
//! ```sh
//! cargo run --example linear_verifier
//! ```

use gapcsp::csp::{Assignment, Constraint, ConstraintKind, VecCspInstance};
use gapcsp::gf::{FieldMatrix, FieldVector, GF2};
use gapcsp::pcpp::linear::LinearVerifier;
use gapcsp::pcpp::measure::{estimate_acceptance, Mode, ProofBundle, Verifier};

fn lin1() -> VecCspInstance {
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

fn assignment(values: &[&[u8]]) -> Assignment {
    Assignment {
        values: values
            .iter()
            .map(|v| FieldVector::from_bits(GF2, v.to_vec()).unwrap())
            .collect(),
    }
}

fn main() {
    let verifier = LinearVerifier::new(lin1()).unwrap();
    for c in verifier.test_counts() {
        println!("{} has {} random choices", c.test, c.exact().unwrap());
    }

    // honest proofs are accepted by every one of the 192 descriptors
    let sigma = assignment(&[&[1], &[1]]);
    let honest = verifier.honest_proof(&sigma).unwrap();
    let v = Verifier::Linear(verifier);
    let report = estimate_acceptance(
        &v,
        &ProofBundle::Linear(honest.clone()),
        Mode::exhaustive(),
        None,
    )
    .unwrap();
    println!("honest acceptance: {}", report.exact.as_deref().unwrap());

    // an honest-looking proof for a non-solution is caught well below the
    // soundness threshold 1 - 1/600
    let cheat = match &v {
        Verifier::Linear(lv) => lv.honest_proof_unchecked(&assignment(&[&[1], &[0]])),
        _ => unreachable!(),
    };
    let report = estimate_acceptance(&v, &ProofBundle::Linear(cheat), Mode::exhaustive(), None).unwrap();
    println!("wrong-assignment acceptance: {}", report.exact.as_deref().unwrap());
    for tally in &report.per_test {
        println!("  {}: {}/{}", tally.test, tally.accepted, tally.total);
    }
}
