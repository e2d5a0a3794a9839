//! Every construction the registry knows for a few field sizes.

use lepkit::field::field_for_q;
use lepkit::solver::{diag_subfield, enumerate_plans, fp_estimate};

fn main() {
    let k = 6;
    let n = 300;
    for q in [5u64, 8, 9, 16, 25, 27, 49, 125] {
        let f = field_for_q(q).unwrap();
        for plan in enumerate_plans(&f, k) {
            let qd = diag_subfield(&plan, &f);
            println!(
                "q = {q:>3}  {:<17} bound {:>8}  i + j = {:>4}  diagonal field GF({qd:>3})  estimate at n = {n}: {:.2e}",
                plan.form.name(),
                plan.dim_bound,
                plan.i_exp() + plan.j_exp(),
                fp_estimate(qd, n)
            );
        }
    }
}
