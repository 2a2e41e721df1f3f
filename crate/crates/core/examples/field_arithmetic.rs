//! Arithmetic over the characteristic-two fields and the chi flattening.
//!
//! ```sh
//! cargo run --example field_arithmetic
//! ```

use gapcsp::gf::{chi_flatten, chi_unflatten, FieldMatrix, FieldVector, GF8};

fn main() {
    // x * x^2 = x^3 = x + 1 mod (x^3 + x + 1)
    let a = GF8.el(2);
    let b = GF8.el(4);
    println!("GF(8): {} * {} = {}", a.bits(), b.bits(), (a * b).bits());
    println!("GF(8): 3 * 3 = {}", (GF8.el(3) * GF8.el(3)).bits());
    println!("GF(8): 5 + 3 = {}", (GF8.el(5) + GF8.el(3)).bits());

    // chi flattens an element into its coefficient bits, little-endian,
    // and is an additive isomorphism onto GF(2)^3
    let five = GF8.el(5);
    let bits = chi_flatten(five);
    println!("chi(5) = {:?}", bits.to_bools());
    assert_eq!(chi_unflatten(GF8, &bits).unwrap(), five);
    let mut sum = chi_flatten(GF8.el(3));
    sum.xor_assign(&chi_flatten(GF8.el(5)));
    assert_eq!(chi_unflatten(GF8, &sum).unwrap(), GF8.el(6));
    println!("chi(3) + chi(5) = chi(6)  (additivity)");

    // matrix-vector products drive every linear constraint
    let m = FieldMatrix::from_rows(GF8, &[vec![2, 3]]).unwrap();
    let v = FieldVector::from_bits(GF8, vec![4, 1]).unwrap();
    println!("[[2,3]] * (4,1) = {:?}  (2*4 + 3*1 = 3 + 3)", m.mul_vector(&v).unwrap().raw());

    // every nonzero element has an inverse
    for e in GF8.elements().skip(1) {
        let inv = e.inverse().unwrap();
        assert_eq!((e * inv).bits(), 1);
        println!("{}^-1 = {}", e.bits(), inv.bits());
    }
}
