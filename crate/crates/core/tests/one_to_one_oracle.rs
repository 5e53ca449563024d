mod common;

use common::suites;

#[test]
fn commutative_matches_equal_brute_force() {
    let cov = suites::commutative_one_to_one(0..600, 4);
    eprintln!("{cov}");
    assert!(cov.matched >= 100, "{cov}");
}

#[test]
fn nested_patterns_equal_brute_force() {
    let cov = suites::nested_one_to_one(0..600);
    eprintln!("{cov}");
    assert!(cov.matched >= 100, "{cov}");
}

#[test]
fn duplicated_arguments_give_unique_matches() {
    let cov = suites::duplicated_arguments(0..300);
    eprintln!("{cov}");
    assert!(cov.matched >= 50, "{cov}");
}
