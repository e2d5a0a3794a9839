//! Arithmetic in GF(9): canonical modulus, primitive element, Frobenius.

use lepkit::field::make_field;
use lepkit::Fq;

fn main() {
    let f = make_field(3, 2).expect("9 is a prime power");
    println!("GF({}) modulus (low degree first): {:?}, alpha = {}", f.q(), f.modulus(), f.alpha().0);

    let a = Fq(4);
    let b = Fq(7);
    println!("a + b = {}, a * b = {}, a / b = {}", f.add(a, b).0, f.mul(a, b).0, f.div(a, b).unwrap().0);
    println!("log_alpha(a) = {}, a^8 = {}", f.dlog(a).unwrap(), f.pow(a, 8).0);

    // x -> x^3 fixes exactly the prime field
    let fixed: Vec<u16> = f.elements().filter(|&x| f.frobenius(x, 1) == x).map(|x| x.0).collect();
    println!("fixed by Frobenius: {fixed:?}");

    for x in f.elements() {
        assert_eq!(f.in_subfield(x, 1), fixed.contains(&x.0));
    }
}
