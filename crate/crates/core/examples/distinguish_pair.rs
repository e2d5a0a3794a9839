//! Run the distinguisher on an equivalent pair and on an unrelated pair.

use lepkit::field::field_for_q;
use lepkit::instances::{equivalent_pair, random_pair};
use lepkit::solver::{diag_subfield, distinguish, select_construction};

fn main() {
    let f = field_for_q(9).unwrap();
    let (n, k) = (100, 12);
    let plan = select_construction(&f, k, n).unwrap();
    let rec = plan.record();
    println!(
        "plan {} for [{n},{k}]_9: factors {:?} / {:?}, i = {}, j = {}, dimension bound {}",
        rec.form, rec.factors1, rec.factors2, rec.i, rec.j, rec.dim_bound
    );
    println!("diagonals live in GF({})", diag_subfield(&plan, &f));

    for seed in 0..4 {
        let eq = equivalent_pair(&f, n, k, None, seed).unwrap();
        let rnd = random_pair(&f, n, k, seed).unwrap();
        let a = distinguish(&eq.code_a, &eq.code_b, &plan);
        let b = distinguish(&rnd.code_a, &rnd.code_b, &plan);
        println!("seed {seed}: equivalent -> {:?}, random -> {:?}", a.verdict, b.verdict);
        if let Some(reason) = b.detail.reason {
            println!("    ({reason})");
        }
    }
}
