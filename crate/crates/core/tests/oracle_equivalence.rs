mod common;

use common::oracle::{oracle_case, run_oracle_suite, ODD_GENERATORS};

#[test]
fn two_hundred_identities_agree_with_exterior_algebra() {
    const { assert!(ODD_GENERATORS >= 8) };
    let counts = run_oracle_suite(200).unwrap();
    assert_eq!(counts.iter().sum::<usize>(), 200);
    assert!(counts.iter().all(|&c| c == 50));
}

#[test]
fn cases_are_reproducible() {
    for case in [0, 17, 199] {
        assert_eq!(oracle_case(case), oracle_case(case));
    }
}
