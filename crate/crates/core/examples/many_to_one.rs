//! Compiling a pattern set into one matcher and matching it against
//! several subjects at once.

use termmatch::{parse_term, ManyToOneMatcher, Pattern, Registry};

fn main() {
    let reg = Registry::new();
    let sources = ["list(1)", "list(y_, 0)", "list(1, x___)", "f(x_, g(y__), x_)"];
    let mut matcher = ManyToOneMatcher::new();
    for src in sources {
        matcher.add(Pattern::new(parse_term(src, &reg).unwrap()).unwrap());
    }
    println!("{} patterns, {} states", matcher.len(), matcher.state_count());

    for subject in ["list(1, 0)", "list(1)", "list(2, 0)", "f(a, g(b, c), a)", "f(a, g(b), c)"] {
        let t = parse_term(subject, &reg).unwrap();
        println!("{subject}:");
        for (id, sigma) in matcher.matches(&t).unwrap() {
            println!("    {} with {sigma}", sources[id]);
        }
    }
}
