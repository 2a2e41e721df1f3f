//! From parallel sub-constraints to boolean circuits to quadratic
//! equations over GF(2).
//!
//! ```sh
//! cargo run --example arithmetize
//! ```

use gapcsp::bits::Bits;
use gapcsp::csp::SubTable;
use gapcsp::gf::GF2;
use gapcsp::quadeq::{circuit_to_quadeq, kappa_map, subconstraint_to_circuit, ConjunctionFamily};

fn main() {
    // a sub-constraint table becomes a circuit on the flattened bits
    let nand = SubTable::from_fn(GF2, |a, b| !(a.bits() == 1 && b.bits() == 1));
    let circuit = subconstraint_to_circuit(&nand);
    println!("NAND circuit: {} gates on {} inputs", circuit.size(), circuit.n_inputs);
    for x in 0..4u8 {
        let inputs = Bits::from_fn(2, |i| (x >> i) & 1 == 1);
        println!("  NAND({},{}) = {}", x & 1, x >> 1, circuit.eval(&inputs) as u8);
    }

    // one conjunction circuit per constraint subset, all padded to a
    // shared size c so downstream proof layouts have one shape
    let family = ConjunctionFamily::new(vec![nand], 2, GF2).unwrap();
    println!("family: m={} c={} (shared)", family.m(), family.c);
    let empty = family.circuit(0);
    let full = family.circuit(1);
    assert_eq!(empty.size(), full.size());
    println!("empty-conjunction circuit is constant 1: {}", empty.eval(&Bits::zeros(2)));

    // arithmetization: one variable per gate, one quadratic equation per
    // non-input gate, output forced to 1
    let gamma = circuit_to_quadeq(&full);
    println!("quadeq: c={} variables, q={} equations", gamma.c, gamma.q());
    let witness = gamma.brute_force().unwrap().expect("NAND is satisfiable");
    println!("first solution (gate values): {:?}", witness.to_bools().iter().map(|&b| b as u8).collect::<Vec<_>>());
    // the witness is exactly the gate-value vector of its own inputs
    let inputs = Bits::from_fn(full.n_inputs, |i| witness.get(i));
    assert_eq!(full.eval_gates(&inputs), witness);

    // kappa maps each coordinate to the set of constraints applied on it
    let par1 = {
        use gapcsp::csp::{Constraint, ConstraintKind, VecCspInstance};
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
    };
    println!("kappa(PAR-1) = {:?}", kappa_map(&par1).unwrap());
}
