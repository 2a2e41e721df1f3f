//! The structured-3SAT to vector-valued CSP reduction, with witness
//! lifting and projection.
//!
//! ```sh
//! cargo run --example reduce_3sat
//! ```

use gapcsp::sat2vec::reduce::reduce_sat_to_veccsp;
use gapcsp::sat2vec::{brute_force_sat, check_structure, parse_dimacs};

fn main() {
    let cnf = parse_dimacs(
        "c two clauses over four variables\n\
         p cnf 4 2\n\
         1 2 3 0\n\
         -1 2 4 0\n",
    )
    .unwrap();
    let report = check_structure(&cnf);
    println!(
        "n={} m={} max_occurrences={} within_four={}",
        cnf.n,
        cnf.m(),
        report.max_occurrences,
        report.within_four
    );

    for ell in 1..=3 {
        let r = reduce_sat_to_veccsp(&cnf, ell).unwrap();
        let (gl, gp) = r.instance.split();
        println!(
            "ell={ell}: |V|={:>4} |E|={:>4} (linear {:>4}, parallel {:>3})  d={}",
            r.instance.k,
            r.instance.constraints.len(),
            gl.constraints.len(),
            gp.constraints.len(),
            r.plan.d,
        );
        assert!(r.instance.validate().is_empty());
    }

    // lift a satisfying assignment and read it back out of the instance
    let r = reduce_sat_to_veccsp(&cnf, 2).unwrap();
    let witness = brute_force_sat(&cnf).unwrap().expect("satisfiable");
    println!("witness: {witness:?}");
    let lifted = r.lift_assignment(&witness);
    assert!(r.instance.is_solution(&lifted).unwrap());
    let projected = r.project_solution(&lifted).unwrap();
    assert_eq!(projected, witness);
    println!("lift is a solution; projection returns the witness");

    // an unsatisfying assignment leaves some clause entry at (0,0,0)
    let all_false = vec![false; cnf.n];
    let bad = r.lift_assignment(&all_false);
    println!("val(G, lift(all-false)) = {}", r.instance.evaluate(&bad).unwrap());
}
