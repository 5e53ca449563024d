//! Term rewriting with template rules and with closures.

use termmatch::rewriting::{normalize, parse_rules, replace_once, Replacement, ReplacementRule, RewriteConfig};
use termmatch::{parse_term, Binding, Error, Pattern, Registry, Term};

fn main() {
    let reg = Registry::new();
    let bubble = parse_rules("list(h___, b_, a_, t___) | a < b => list(h___, a_, b_, t___)", &reg).unwrap();
    let mut t = parse_term("list(1, 4, 3, 2)", &reg).unwrap();
    println!("{t}");
    while let Some(next) = replace_once(&t, &bubble).unwrap() {
        println!("  -> {next}");
        t = next;
    }

    // a closure rule that sums integer arguments
    let p = Pattern::new(parse_term("add(x___)", &reg).unwrap()).unwrap();
    let add = ReplacementRule::new(p, |s| {
        let total: i64 = match s.get("x") {
            Some(Binding::Sequence(ts)) => ts.iter().filter_map(|t| t.as_symbol()?.as_integer()).sum(),
            _ => 0,
        };
        Ok(Replacement::Term(Term::sym(&total.to_string())))
    });
    let nested = parse_term("list(add(1, add(2, 3)), add())", &reg).unwrap();
    let (done, steps) = normalize(&nested, &[add], &RewriteConfig::default()).unwrap();
    println!("{nested} -> {done} in {steps} steps");

    let looping = parse_rules("f(x_) => f(f(x_))", &reg).unwrap();
    let cfg = RewriteConfig { max_iterations: 5 };
    if let Err(Error::IterationLimit { iterations, term }) = normalize(&parse_term("f(a)", &reg).unwrap(), &looping, &cfg) {
        println!("gave up after {iterations} steps at {term}");
    }
}
