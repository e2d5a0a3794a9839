//! A small seeded experiment, split into two halves to show that trial
//! ranges add up to the whole run.

use lepkit::harness::{format_table2, run_experiment, run_trials, ExperimentParams, ExperimentReport};

fn main() {
    let params = ExperimentParams::new(16, 100, 8);
    let whole = run_experiment(&params, 200, 7).unwrap();
    let left = run_trials(&params, 0..120, 7).unwrap();
    let right = run_trials(&params, 120..200, 7).unwrap();
    assert_eq!(left.tally + right.tally, whole.tally);

    print!("{}", format_table2(std::slice::from_ref(&whole)));
    println!("tally: {:?}", whole.tally);
    ExperimentReport::write_csv(&[whole], std::io::stdout()).unwrap();
}
