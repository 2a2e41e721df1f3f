//! Building, evaluating, validating, splitting, and brute-force solving
//! vector-valued CSP instances.
//!
//! ```sh
//! cargo run --example csp_basics
//! ```

use gapcsp::csp::{Assignment, Constraint, ConstraintKind, SubTable, VecCspInstance};
use gapcsp::gf::{FieldMatrix, FieldVector, GF2};

fn main() {
    // two variables over GF(2)^2: one NAND applied on both coordinates,
    // plus one equality constraint
    let nand = SubTable::from_fn(GF2, |a, b| !(a.bits() == 1 && b.bits() == 1));
    let g = VecCspInstance::new(
        GF2,
        2,
        2,
        vec![
            Constraint {
                u: 0,
                v: 1,
                kind: ConstraintKind::Parallel { sub: nand, q: vec![0, 1] },
            },
            Constraint {
                u: 0,
                v: 1,
                kind: ConstraintKind::Linear { m: FieldMatrix::identity(GF2, 2) },
            },
        ],
    );
    assert!(g.validate().is_empty());

    // equal values with no 1-coordinate satisfy both constraints
    let sigma = Assignment {
        values: vec![FieldVector::zero(GF2, 2), FieldVector::zero(GF2, 2)],
    };
    println!("val(G, sigma) = {}", g.evaluate(&sigma).unwrap());

    // the satisfied fraction is exact rational arithmetic: (1,0) twice
    // passes the equality but fails NAND on the first coordinate
    let bad = Assignment {
        values: vec![
            FieldVector::from_bits(GF2, vec![1, 0]).unwrap(),
            FieldVector::from_bits(GF2, vec![1, 0]).unwrap(),
        ],
    };
    println!("val(G, bad)   = {}", g.evaluate(&bad).unwrap());

    // split into the all-linear and all-parallel sub-instances: an
    // assignment solves G iff it solves both
    let (gl, gp) = g.split();
    println!("split: |E_L| = {}, |E_P| = {}", gl.constraints.len(), gp.constraints.len());

    // exhaustive solving of micro instances returns the lexicographically
    // first solution
    let solution = g.brute_force_solve(24).unwrap().unwrap();
    println!(
        "lexicographically first solution: {:?}",
        solution.values.iter().map(|v| v.raw().to_vec()).collect::<Vec<_>>()
    );

    // the instance JSON round-trips bit-exactly
    let json = g.to_json();
    let back = VecCspInstance::from_json(&json).unwrap();
    assert_eq!(g, back);
    println!("wire format: {}", serde_json::to_string(&json["constraints"][0]).unwrap());
}
