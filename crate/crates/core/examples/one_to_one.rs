//! Matching a single pattern against a single subject.

use termmatch::constraint_expr::parse_constraint;
use termmatch::{one_to_one, parse_term, Operation, Pattern, Registry};

fn show(subject: &str, pattern: &str, constraint: Option<&str>, reg: &Registry) {
    let s = parse_term(subject, reg).unwrap();
    let mut p = Pattern::new(parse_term(pattern, reg).unwrap()).unwrap();
    if let Some(c) = constraint {
        p = p.with_constraint(parse_constraint(c).unwrap()).unwrap();
    }
    let found = one_to_one::matches(&s, &p).unwrap();
    let suffix = constraint.map(|c| format!(" | {c}")).unwrap_or_default();
    println!("{subject}  vs  {pattern}{suffix}");
    for sigma in found {
        println!("    {sigma}");
    }
}

fn main() {
    let mut reg = Registry::new();
    reg.add_operation(Operation::variadic("MyOp", true, true)).unwrap();

    show("list(0, 1)", "list(x_, 1)", None, &reg);
    show("list(1, 2, 3)", "list(x_, y___)", None, &reg);
    // x_ absorbs several arguments of an associative operation
    show("MyOp(0, 1, 2)", "MyOp(x_, 2)", None, &reg);
    show("MyOp(1, 2)", "MyOp(x_, z_)", None, &reg);
    show("list(1, 2, 3, 1, 1, 2)", "list(___, x__, ___)", Some("sum(x) == 5"), &reg);

    // stop after the first match
    let s = parse_term("list(1, 2, 3)", &reg).unwrap();
    let p = Pattern::new(parse_term("list(x___, y___)", &reg).unwrap()).unwrap();
    println!("first of list(x___, y___): {}", one_to_one::first_match(&s, &p).unwrap().unwrap());
}
