//! Adversarial proof families and what each verifier test catches.
//!
//! ```sh
//! cargo run --example attacks
//! ```

use gapcsp::csp::{Constraint, ConstraintKind, VecCspInstance};
use gapcsp::gf::{FieldMatrix, GF2};
use gapcsp::pcpp::linear::LinearVerifier;
use gapcsp::pcpp::measure::{estimate_acceptance, Mode, Verifier};
use gapcsp::pipeline::attack::{generate_attack, AttackSpec};

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

fn main() {
    let verifier = Verifier::Linear(LinearVerifier::new(lin1()).unwrap());
    let specs = [
        ("honest (solution)", serde_json::json!({
            "verifier": "linear", "assignment": [[1], [1]],
            "family": "wrong-assignment-honest",
        })),
        ("wrong assignment", serde_json::json!({
            "verifier": "linear", "assignment": [[1], [0]],
            "family": "wrong-assignment-honest",
        })),
        ("zeroed aux block", serde_json::json!({
            "verifier": "linear", "assignment": [[1], [1]],
            "family": "zeroed-block", "block": "pi2",
        })),
        ("random pi1", serde_json::json!({
            "verifier": "linear", "assignment": [[1], [1]],
            "family": "random-word", "block": "pi1", "seed": 13,
        })),
        ("one patched entry", serde_json::json!({
            "verifier": "linear", "assignment": [[1], [1]],
            "family": "overlay-corruption", "block": "pi1",
            "patches": [{"index": [1, 0], "value": [0]}],
        })),
    ];
    println!("{:<22} exhaustive acceptance", "attack family");
    for (name, json) in specs {
        let spec: AttackSpec = serde_json::from_value(json).unwrap();
        let proof = generate_attack(&verifier, &spec).unwrap();
        let report = estimate_acceptance(&verifier, &proof, Mode::exhaustive(), None).unwrap();
        println!("{:<22} {}", name, report.exact.as_deref().unwrap());
    }
}
