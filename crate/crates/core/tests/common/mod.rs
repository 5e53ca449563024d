#![allow(dead_code)]

pub mod oracle;
pub mod random;
pub mod suites;

use std::collections::BTreeSet;

use termmatch::{Pattern, Substitution, Term};

/// Sorted text forms of a substitution list.
pub fn rendered(subs: &[Substitution]) -> Vec<String> {
    let mut v: Vec<String> = subs.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

pub fn set(subs: &[Substitution]) -> BTreeSet<Substitution> {
    subs.iter().cloned().collect()
}

pub fn has_anonymous(p: &Pattern) -> bool {
    p.expression()
        .preorder()
        .any(|t| t.as_wildcard().is_some_and(|w| w.name().is_none()))
}

/// Asserts that applying `sigma` to the pattern gives back the subject.
pub fn assert_reproduces(subject: &Term, pattern: &Pattern, sigma: &Substitution) {
    if has_anonymous(pattern) {
        return;
    }
    let back = termmatch::substitute(pattern.expression(), sigma).unwrap();
    assert_eq!(&back, subject, "σ = {sigma} applied to {}", pattern.expression());
}
