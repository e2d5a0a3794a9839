//! Duals, hulls, Schur powers and Frobenius images of random codes.

use lepkit::codes::expected_power_dim;
use lepkit::field::field_for_q;
use lepkit::instances::random_code;

fn main() {
    let f = field_for_q(7).unwrap();
    let c = random_code(&f, 30, 4, 1).unwrap();
    println!("C: [{}, {}]_{}", c.n(), c.k(), f.q());
    println!("dual: [{}, {}], hull dimension {}", c.n(), c.dual().k(), c.hull().k());
    for l in 1..=4 {
        let p = c.power(l).unwrap();
        println!("C^({l}): dimension {} (generic {})", p.k(), expected_power_dim(c.k(), l, c.n()));
    }

    let g = field_for_q(16).unwrap();
    let d = random_code(&g, 12, 3, 2).unwrap();
    let conj = d.frobenius_code(2);
    println!(
        "over GF(16): C^[4] has dimension {}, Hermitian hull dimension {}, C^[16] == C: {}",
        conj.k(),
        d.hermitian_hull().unwrap().k(),
        d.frobenius_code(4) == d
    );
    println!("first rows of the canonical generator of C^[4]: {:?}", &conj.gen().to_rows()[..2]);
}
