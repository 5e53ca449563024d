//! A deterministic net for syntactic patterns: no sequence variables and
//! no associative or commutative operations.

use termmatch::many_to_one::DEFAULT_STATE_BUDGET;
use termmatch::{parse_term, DeterministicNet, Error, Operation, Pattern, Registry};

fn main() {
    let mut reg = Registry::new();
    reg.add_operation(Operation::fixed("g", 2)).unwrap();
    reg.add_operation(Operation::fixed("h", 1)).unwrap();
    reg.add_class("Const", None).unwrap();
    reg.add_symbol("a", Some("Const"), [""; 0]).unwrap();

    let sources = ["g(a, x_)", "g(x_, x_)", "g(h(y_), _)", "g(c_:Const, b)"];
    let patterns: Vec<Pattern> = sources.iter().map(|p| Pattern::new(parse_term(p, &reg).unwrap()).unwrap()).collect();
    let net = DeterministicNet::build(patterns, &reg).unwrap();
    println!("{} patterns, {} states (budget {DEFAULT_STATE_BUDGET})", sources.len(), net.state_count());

    for subject in ["g(a, a)", "g(a, b)", "g(h(b), h(b))", "g(b, a)"] {
        let t = parse_term(subject, &reg).unwrap();
        let found: Vec<String> = net.matches(&t).unwrap().into_iter().map(|(i, s)| format!("{} {s}", sources[i])).collect();
        println!("{subject}: {found:?}");
    }

    let seq = Pattern::new(parse_term("list(x___)", &reg).unwrap()).unwrap();
    match DeterministicNet::build(vec![seq], &reg) {
        Err(e @ Error::UnsupportedPattern(_)) => println!("rejected: {e}"),
        other => println!("unexpected: {other:?}"),
    }
}
