//! Write an instance to JSON, read it back, and check its witness.

use lepkit::field::field_for_q;
use lepkit::instances::{equivalent_pair, verify_witness, LepInstance};

fn main() {
    let f = field_for_q(8).unwrap();
    let inst = equivalent_pair(&f, 10, 3, None, 3).unwrap();
    let json = inst.to_json();
    println!("{json}");

    let back = LepInstance::from_json(&json).unwrap();
    assert_eq!(back, inst);
    println!("round trip ok, witness verifies: {}", verify_witness(&back).unwrap());
}
