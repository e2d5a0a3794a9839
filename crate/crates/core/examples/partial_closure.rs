//! Reduce an LEP(U) instance to a permutation equivalence instance and check
//! that the lifted witness carries one closure onto the other.

use lepkit::field::field_for_q;
use lepkit::instances::{equivalent_pair, verify_witness};
use lepkit::reduction::{lift_witness, make_subgroup, reduce_instance};
use lepkit::LinearCode;

fn main() {
    let f = field_for_q(13).unwrap();
    let r = 4;
    let u = make_subgroup(&f, r).unwrap();
    println!("U = {:?}, coset representatives {:?}", u.members(), u.coset_reps());

    let inst = equivalent_pair(&f, 15, 4, Some(r), 7).unwrap();
    let w = inst.witness.as_ref().unwrap();
    let lifted = lift_witness(w, &u).unwrap();
    println!(
        "scalars {:?} lift to a permutation: {}",
        w.d.iter().map(|d| d.0).collect::<Vec<_>>(),
        lifted.is_permutation
    );

    let ca = inst.code_a.closure(r).unwrap();
    let cb = inst.code_b.closure(r).unwrap();
    let image = LinearCode::from_generator(&lifted.apply(ca.gen()).unwrap());
    println!("closures are [{}, {}]; lifted image matches: {}", ca.n(), ca.k(), image == cb);
    println!("closure hull dimension {} (r > 2 makes it self-orthogonal)", ca.hull().k());

    let reduced = reduce_instance(&inst, r).unwrap();
    println!("reduced instance witness verifies: {}", verify_witness(&reduced).unwrap());

    // a scalar outside U leaves a non-trivial multiplier on its block
    let general = equivalent_pair(&f, 15, 4, None, 7).unwrap();
    let lifted = lift_witness(general.witness.as_ref().unwrap(), &u).unwrap();
    println!("unrestricted scalars lift to a permutation: {}", lifted.is_permutation);
}
