//! The two combinatorial building blocks of commutative matching:
//! maximum bipartite matchings and non-negative linear Diophantine
//! solutions.

use std::ops::ControlFlow;

use termmatch::bipartite::{enumerate_maximum_matchings, hopcroft_karp, MatchGraph};
use termmatch::diophantine::{distribute, solve_nonneg, LinearEquation, SequenceVariable};
use termmatch::{Substitution, Term, WildcardKind};

fn main() {
    // pattern arguments on the left, subject arguments on the right
    let mut g: MatchGraph<&str> = MatchGraph::with_sizes(3, 3);
    for (l, r) in [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1)] {
        g.add_edge(l, r, "");
    }
    println!("one maximum matching: {:?}", hopcroft_karp(&g));
    let _ = enumerate_maximum_matchings(&g, &mut |m| {
        println!("    {m:?}");
        ControlFlow::Continue(())
    });

    // x + 2y = 3
    let eq = LinearEquation::new(vec![1, 2], 3).unwrap();
    println!("x + 2y = 3: {:?}", solve_nonneg(&eq));

    // spread f(a, b, b, b) over x___ and two occurrences of y__
    let pool = [(Term::sym("a"), 1), (Term::sym("b"), 3)];
    let vars = [
        SequenceVariable::new(Some("x"), WildcardKind::Star, 1),
        SequenceVariable::new(Some("y"), WildcardKind::Plus, 2),
    ];
    for sigma in distribute(&pool, &vars, &Substitution::new()) {
        println!("distribution: {sigma}");
    }
}
