//! The parallel Walsh-Hadamard code: lazily evaluated words, the BLR
//! linearity test, local correction, and exact distance on micro words.
//!
//! ```sh
//! cargo run --example hadamard_code
//! ```

use gapcsp::gf::{FieldMatrix, FieldVector, GF2, GF8};
use gapcsp::hadamard::{
    blr_pass_rate, blr_test, distance_to_code, local_correct, pwh_encode_point, WordOracle,
};
use std::collections::BTreeMap;

fn main() {
    // the codeword of a message matrix is the map b -> A b; it is never
    // materialized, only evaluated per point
    let message = FieldMatrix::from_rows(GF8, &[vec![2, 3], vec![1, 0]]).unwrap();
    let w = WordOracle::honest(message.clone());
    let b = FieldVector::from_bits(GF8, vec![4, 1]).unwrap();
    println!("PWH(A)[(4,1)] = {:?}", w.eval(&b).unwrap().raw());
    assert_eq!(w.eval(&b).unwrap(), pwh_encode_point(&message, &b).unwrap());

    // honest codewords pass every BLR check
    let honest = WordOracle::honest(FieldMatrix::from_rows(GF2, &[vec![1, 0]]).unwrap());
    println!("honest BLR pass rate: {}", blr_pass_rate(&honest, 24).unwrap());

    // one flipped entry drops the pass rate to 10/16
    let mut patches = BTreeMap::new();
    patches.insert(
        FieldVector::from_bits(GF2, vec![1, 1]).unwrap(),
        FieldVector::from_bits(GF2, vec![0]).unwrap(),
    );
    let flipped = WordOracle::overlay(honest.clone(), patches);
    println!("single flip pass rate: {}", blr_pass_rate(&flipped, 24).unwrap());
    let a = FieldVector::from_bits(GF2, vec![1, 0]).unwrap();
    let c = FieldVector::from_bits(GF2, vec![0, 1]).unwrap();
    println!("blr_test at ((1,0),(0,1)) on the flipped word: {}", blr_test(&flipped, &a, &c).unwrap());

    // local correction recovers the codeword value through the corruption
    // for every shift that misses the corrupted entries
    let x = FieldVector::from_bits(GF2, vec![1, 0]).unwrap();
    let good_shifts = FieldVector::iter_all(GF2, 2)
        .filter(|s| {
            local_correct(&flipped, &x, s).unwrap()
                == honest.eval(&x).unwrap()
        })
        .count();
    println!("local correction succeeds for {good_shifts}/4 shifts");

    // exact distance over all messages (micro words only)
    let (delta, nearest) = distance_to_code(&flipped, 24).unwrap();
    println!("distance to code: {delta}, nearest message {:?}", nearest.to_rows());
}
