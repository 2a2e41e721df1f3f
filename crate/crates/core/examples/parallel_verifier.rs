//! The parallel-constraint verifier on a micro fixture: completeness by
//! sampling, plus the three soundness probes (zero test, tensor test,
//! constraint test) with their expected rejection constants.
//!
//! ```sh
//! cargo run --example parallel_verifier
//! ```

use gapcsp::bits::Bits;
use gapcsp::csp::{Assignment, Constraint, ConstraintKind, SubTable, VecCspInstance};
use gapcsp::gf::{FieldVector, GF2};
use gapcsp::pcpp::measure::{estimate_acceptance, Mode, ProofBundle, Verifier};
use gapcsp::pcpp::parallel::{CoordDelta, ParallelVerifier, PartSet, TauBlock, TauOracle};
use gapcsp::pcpp::TestId;

fn par1() -> VecCspInstance {
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

fn main() {
    let verifier = ParallelVerifier::new(par1()).unwrap();
    println!(
        "m={} parts={} c={} q={} kappa={:?}",
        verifier.m(),
        verifier.n_parts(),
        verifier.c(),
        verifier.q(),
        verifier.kappa()
    );
    for c in verifier.test_counts() {
        println!("{} has 2^{} random choices", c.test, c.log2);
    }

    let sigma = Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![0, 1]).unwrap(),
            FieldVector::from_bits(GF2, vec![1, 0]).unwrap(),
        ],
    };
    let honest = verifier.honest_proof(&sigma).unwrap();

    // completeness: sampled descriptors over every family, zero rejections
    let v = Verifier::Parallel(verifier);
    let report = estimate_acceptance(
        &v,
        &ProofBundle::Parallel(honest.clone()),
        Mode::Sampled { trials: 20_000, seed: 7 },
        None,
    )
    .unwrap();
    let est = report.estimate.unwrap();
    println!("honest: {}/{} sampled accepts", est.successes, est.trials);

    let pv = match &v {
        Verifier::Parallel(pv) => pv,
        _ => unreachable!(),
    };

    // zero-test probe: a bit planted in a wrong block of u-bar is caught
    // at rate about 1/8 (T must isolate the planted part: 1/4, then the
    // random subsum hits it half the time)
    let mut delta = Bits::zeros(pv.c());
    delta.set(4, true);
    let planted = TauOracle::MessageDelta {
        base: Box::new(honest.tau1.clone()),
        deltas: vec![CoordDelta { coord: 0, part: 0, bits: delta }],
    };
    let mut rng = gapcsp::rng::sampling_rng(8, 0);
    let mut rejected = 0u32;
    let trials = 40_000;
    for i in 0..trials {
        let mask = Bits::from_fn(2, |b| (i >> b) & 1 == 1);
        let t = pv.sample_zero_test(TauBlock::Tau1, PartSet::Explicit(mask), &mut rng);
        if !pv.run(&honest.pi1, &planted, &honest.tau2, &t).unwrap() {
            rejected += 1;
        }
    }
    println!("zero-test rejection with planted bit: {:.4} (expect ~1/8)", rejected as f64 / trials as f64);

    // tensor-test probe: w-bar deviating from u (x) u on one coordinate
    let c = pv.c();
    let mut wdelta = Bits::zeros(c * c);
    wdelta.set(0, true);
    wdelta.set(c + 1, true);
    let skewed = TauOracle::MessageDelta {
        base: Box::new(honest.tau2.clone()),
        deltas: vec![CoordDelta { coord: 0, part: pv.kappa()[0], bits: wdelta }],
    };
    let mut rejected = 0u32;
    for _ in 0..trials {
        let t = pv.sample(TestId::P6, &mut rng);
        if !pv.run(&honest.pi1, &honest.tau1, &skewed, &t).unwrap() {
            rejected += 1;
        }
    }
    println!("tensor-test rejection with rank-2 skew: {:.4} (expect 3/8)", rejected as f64 / trials as f64);
}
