//! Oracle suites shared by the per-module tests and the acceptance runner.
//! Each panics on the first discrepancy and reports what it covered.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use termmatch::bipartite::{enumerate_maximum_matchings, hopcroft_karp, MatchGraph, Matching};
use termmatch::diophantine::{distribute, solve_nonneg, LinearEquation, SequenceVariable};
use termmatch::{
    one_to_one, Binding, DeterministicNet, ManyToOneMatcher, Operation, Pattern, Registry, Substitution, Term, Wildcard,
    WildcardKind,
};

use super::oracle::{brute_force, grid_solutions};
use super::{assert_reproduces, random, rendered};

#[derive(Debug, Default, Clone, Copy)]
pub struct Coverage {
    pub cases: usize,
    pub matched: usize,
}

impl std::fmt::Display for Coverage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} cases, {} with matches", self.cases, self.matched)
    }
}

fn no_duplicates(subs: &[Substitution], context: &dyn std::fmt::Display) {
    let set: BTreeSet<&Substitution> = subs.iter().collect();
    assert_eq!(set.len(), subs.len(), "duplicate matches: {context}");
}

/// One-to-one matching of commutative patterns against commutative
/// subjects with at most `max_args` arguments, versus permutation brute force.
pub fn commutative_one_to_one(seeds: std::ops::Range<u64>, max_args: usize) -> Coverage {
    let reg = random::registry();
    let mut cov = Coverage::default();
    for seed in seeds {
        let mut rng = random::rng(seed);
        let (subject, pattern) = random::commutative_case(&mut rng, &reg, max_args);
        let got = one_to_one::matches(&subject, &pattern).unwrap();
        let want = brute_force(&subject, &pattern);
        let ctx = format!("seed {seed}: {subject} vs {}", pattern.expression());
        assert_eq!(rendered(&got), rendered(&want), "{ctx}");
        no_duplicates(&got, &ctx);
        for s in &got {
            assert_reproduces(&subject, &pattern, s);
        }
        cov.cases += 1;
        cov.matched += usize::from(!got.is_empty());
    }
    cov
}

/// One-to-one matching of nested random patterns versus brute force.
pub fn nested_one_to_one(seeds: std::ops::Range<u64>) -> Coverage {
    let reg = random::registry();
    let mut cov = Coverage::default();
    for seed in seeds {
        let mut rng = random::rng(10_000 + seed);
        let subject = random::subject(&mut rng, &reg, 3, 3);
        let pattern = random::pattern(&mut rng, &reg, &subject, 3, 3);
        let got = one_to_one::matches(&subject, &pattern).unwrap();
        let want = brute_force(&subject, &pattern);
        assert_eq!(rendered(&got), rendered(&want), "seed {seed}: {subject} vs {}", pattern.expression());
        for s in &got {
            assert_reproduces(&subject, &pattern, s);
        }
        cov.cases += 1;
        cov.matched += usize::from(!got.is_empty());
    }
    cov
}

pub fn union_of_one_to_one(subject: &Term, patterns: &[Pattern]) -> Vec<(usize, Substitution)> {
    let mut want = Vec::new();
    for (i, p) in patterns.iter().enumerate() {
        for s in one_to_one::matches(subject, p).unwrap() {
            want.push((i, s));
        }
    }
    want.sort();
    want
}

/// Many-to-one matching of up to 30 random patterns versus the union of
/// one-to-one matches, three subjects per seed.
pub fn many_to_one_union(seeds: std::ops::Range<u64>) -> Coverage {
    let reg = random::registry();
    let mut cov = Coverage::default();
    for seed in seeds {
        let mut rng = random::rng(50_000 + seed);
        let subjects: Vec<Term> = (0..3).map(|_| random::subject(&mut rng, &reg, 3, 3)).collect();
        let n = rng.random_range(1..=30);
        let patterns: Vec<Pattern> = (0..n)
            .map(|_| {
                let base = subjects.choose(&mut rng).unwrap().clone();
                random::pattern(&mut rng, &reg, &base, 4, 3)
            })
            .collect();
        let m = ManyToOneMatcher::from_patterns(patterns.iter().cloned());
        for subject in &subjects {
            let got = m.matches(subject).unwrap();
            let want = union_of_one_to_one(subject, &patterns);
            if got != want {
                let show = |v: &[(usize, Substitution)]| v.iter().map(|(i, s)| format!("{i}: {s}")).collect::<Vec<_>>().join("\n");
                let listing: Vec<String> = patterns.iter().enumerate().map(|(i, p)| format!("{i}: {}", p.expression())).collect();
                panic!(
                    "seed {seed}, subject {subject}\npatterns:\n{}\nmany-to-one:\n{}\none-to-one:\n{}",
                    listing.join("\n"),
                    show(&got),
                    show(&want)
                );
            }
            for (i, s) in &got {
                assert_reproduces(subject, &patterns[*i], s);
            }
            cov.cases += 1;
            cov.matched += usize::from(!got.is_empty());
        }
    }
    cov
}

/// Many-to-one matching of competing commutative patterns.
pub fn commutative_many_to_one(seeds: std::ops::Range<u64>) -> Coverage {
    let reg = random::registry();
    let mut cov = Coverage::default();
    for seed in seeds {
        let mut rng = random::rng(70_000 + seed);
        let mut cases: Vec<(Term, Pattern)> = (0..8).map(|_| random::commutative_case(&mut rng, &reg, 4)).collect();
        let subject = cases[0].0.clone();
        // patterns for other subjects over the same operation still compete
        cases.retain(|(s, _)| s.as_application().unwrap().op().name() == subject.as_application().unwrap().op().name());
        let patterns: Vec<Pattern> = cases.into_iter().map(|(_, p)| p).collect();
        let m = ManyToOneMatcher::from_patterns(patterns.iter().cloned());
        let got = m.matches(&subject).unwrap();
        assert_eq!(got, union_of_one_to_one(&subject, &patterns), "seed {seed}: {subject}");
        cov.cases += 1;
        cov.matched += usize::from(!got.is_empty());
    }
    cov
}

/// `f` variadic, `g` binary and `h` unary, none associative or
/// commutative; classes `K` and its subclass `L`.
pub fn syntactic_registry() -> Registry {
    let mut r = Registry::new();
    r.add_operation(Operation::plain("f")).unwrap();
    r.add_operation(Operation::fixed("g", 2)).unwrap();
    r.add_operation(Operation::fixed("h", 1)).unwrap();
    r.add_class("K", None).unwrap();
    r.add_class("L", Some("K")).unwrap();
    r.add_symbol("a", Some("K"), [""; 0]).unwrap();
    r.add_symbol("b", Some("L"), [""; 0]).unwrap();
    r.add_symbol("c", None, [""; 0]).unwrap();
    r
}

fn syntactic_subject(rng: &mut impl Rng, reg: &Registry, depth: usize) -> Term {
    if depth == 0 || rng.random_bool(0.35) {
        return reg.symbol(["a", "b", "c"].choose(rng).unwrap());
    }
    let (name, n) = match rng.random_range(0..3) {
        0 => ("h", 1),
        1 => ("g", 2),
        _ => ("f", rng.random_range(0..=3)),
    };
    let args = (0..n).map(|_| syntactic_subject(rng, reg, depth - 1)).collect();
    Term::app(reg.operation(name).unwrap(), args).unwrap()
}

fn abstract_syntactic(rng: &mut impl Rng, t: &Term) -> Term {
    if rng.random_bool(0.3) {
        return match rng.random_range(0..8) {
            0 => Term::anonymous(WildcardKind::Dot),
            1 => Term::wildcard(Wildcard::symbol(Some(["x", "y"].choose(rng).unwrap()), "K")),
            2 => Term::wildcard(Wildcard::symbol(None, ["K", "L"].choose(rng).unwrap())),
            3 => Term::wildcard(Wildcard::symbol(Some("w"), "L")),
            _ => Term::dot(["x", "y", "z"].choose(rng).unwrap()),
        };
    }
    match t {
        Term::Application(a) => {
            let args = a.args().iter().map(|x| abstract_syntactic(rng, x)).collect();
            Term::raw_app(a.op(), args)
        }
        other => other.clone(),
    }
}

/// Deterministic net (and many-to-one) versus one-to-one on syntactic
/// pattern sets, five subjects per seed.
pub fn deterministic_net(seeds: std::ops::Range<u64>) -> Coverage {
    let reg = syntactic_registry();
    let mut cov = Coverage::default();
    for seed in seeds {
        let mut rng = random::rng(90_000 + seed);
        let subjects: Vec<Term> = (0..5).map(|_| syntactic_subject(&mut rng, &reg, 3)).collect();
        let n = rng.random_range(1..=30);
        let patterns: Vec<Pattern> = (0..n)
            .map(|_| {
                let base = subjects.choose(&mut rng).unwrap();
                Pattern::new(abstract_syntactic(&mut rng, base)).unwrap()
            })
            .collect();
        assert!(patterns.iter().all(Pattern::is_syntactic));
        let dn = DeterministicNet::build(patterns.clone(), &reg).unwrap();
        let m = ManyToOneMatcher::from_patterns(patterns.iter().cloned());
        for subject in &subjects {
            let mut got = dn.matches(subject).unwrap();
            got.sort();
            let want = union_of_one_to_one(subject, &patterns);
            assert_eq!(got, want, "seed {seed}: {subject}");
            assert_eq!(m.matches(subject).unwrap(), want, "seed {seed}: {subject}");
            for (i, s) in &got {
                assert_reproduces(subject, &patterns[*i], s);
            }
            cov.cases += 1;
            cov.matched += usize::from(!got.is_empty());
        }
    }
    cov
}

/// `solve_nonneg` versus grid search for coefficients 1..=3, one to four
/// variables and constants 0..=8.
pub fn diophantine_grid() -> Coverage {
    let mut cov = Coverage::default();
    for vars in 1..=4u32 {
        for code in 0..3usize.pow(vars) {
            let coeffs: Vec<usize> = (0..vars).map(|i| code / 3usize.pow(i) % 3 + 1).collect();
            for constant in 0..=8 {
                let eq = LinearEquation::new(coeffs.clone(), constant).unwrap();
                let got = solve_nonneg(&eq);
                let set: BTreeSet<Vec<usize>> = got.iter().cloned().collect();
                assert_eq!(set.len(), got.len(), "duplicates for {coeffs:?} = {constant}");
                assert_eq!(set, grid_solutions(&coeffs, constant), "{coeffs:?} = {constant}");
                cov.cases += 1;
                cov.matched += usize::from(!got.is_empty());
            }
        }
    }
    cov
}

/// Every way of splitting each term count over the variables, by grid search.
fn brute_distribute(pool: &[(Term, usize)], vars: &[(String, WildcardKind, usize)]) -> BTreeSet<Substitution> {
    let mults: Vec<usize> = vars.iter().map(|v| v.2).collect();
    let per_term: Vec<Vec<Vec<usize>>> = pool.iter().map(|(_, c)| grid_solutions(&mults, *c).into_iter().collect()).collect();
    let mut out = BTreeSet::new();
    if per_term.iter().any(Vec::is_empty) {
        return out;
    }
    let mut idx = vec![0usize; pool.len()];
    loop {
        let mut seqs: Vec<Vec<Term>> = vec![Vec::new(); vars.len()];
        for (k, (t, _)) in pool.iter().enumerate() {
            for (v, &n) in per_term[k][idx[k]].iter().enumerate() {
                seqs[v].extend(std::iter::repeat_n(t.clone(), n));
            }
        }
        if vars.iter().zip(&seqs).all(|(v, s)| s.len() >= v.1.min_count()) {
            let s = vars.iter().zip(seqs).fold(Substitution::new(), |acc, (v, mut seq)| {
                seq.sort();
                acc.with(&v.0, Binding::Sequence(seq))
            });
            out.insert(s);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per_term[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Distribution of a term multiset over sequence variables versus brute force.
pub fn distribution(cases: usize) -> Coverage {
    let mut rng = random::rng(11);
    let names = ["a", "b", "c", "d"];
    let mut cov = Coverage::default();
    for _ in 0..cases {
        let pool: Vec<(Term, usize)> = names[..rng.random_range(0..=3)]
            .iter()
            .map(|n| (Term::sym(n), rng.random_range(1..=4)))
            .collect();
        let vars: Vec<(String, WildcardKind, usize)> = (0..rng.random_range(1..=3))
            .map(|i| {
                let kind = if rng.random_bool(0.5) { WildcardKind::Star } else { WildcardKind::Plus };
                (format!("x{i}"), kind, rng.random_range(1..=3))
            })
            .collect();
        let seq_vars: Vec<SequenceVariable> = vars.iter().map(|(n, k, m)| SequenceVariable::new(Some(n), *k, *m)).collect();
        let got: Vec<Substitution> = distribute(&pool, &seq_vars, &Substitution::new()).collect();
        let set: BTreeSet<Substitution> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "duplicates for {pool:?} {vars:?}");
        assert_eq!(set, brute_distribute(&pool, &vars), "{pool:?} {vars:?}");
        cov.cases += 1;
        cov.matched += usize::from(!got.is_empty());
    }
    cov
}

/// All maximum matchings by trying every partial assignment of left nodes.
pub fn brute_maximum(l: usize, r: usize, edges: &BTreeSet<(usize, usize)>) -> BTreeSet<Matching> {
    fn rec(
        i: usize,
        l: usize,
        r: usize,
        edges: &BTreeSet<(usize, usize)>,
        used: &mut Vec<bool>,
        cur: &mut Matching,
        out: &mut Vec<Matching>,
    ) {
        if i == l {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, l, r, edges, used, cur, out);
        for j in 0..r {
            if !used[j] && edges.contains(&(i, j)) {
                used[j] = true;
                cur.push((i, j));
                rec(i + 1, l, r, edges, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut all = Vec::new();
    rec(0, l, r, edges, &mut vec![false; r], &mut Vec::new(), &mut all);
    let best = all.iter().map(Vec::len).max().unwrap_or(0);
    all.into_iter().filter(|m| m.len() == best).collect()
}

pub fn graph(l: usize, r: usize, edges: &BTreeSet<(usize, usize)>) -> MatchGraph<()> {
    let mut g = MatchGraph::with_sizes(l, r);
    for &(a, b) in edges {
        g.add_edge(a, b, ());
    }
    g
}

/// Enumeration and Hopcroft-Karp on one graph versus brute force.
pub fn check_graph(l: usize, r: usize, edges: &BTreeSet<(usize, usize)>) -> usize {
    let g = graph(l, r, edges);
    let want = brute_maximum(l, r, edges);
    let mut got = Vec::new();
    let _ = enumerate_maximum_matchings(&g, &mut |m| {
        got.push(m.clone());
        ControlFlow::Continue(())
    });
    let set: BTreeSet<Matching> = got.iter().cloned().collect();
    assert_eq!(set.len(), got.len(), "duplicate matchings for {l}+{r} graph {edges:?}");
    assert_eq!(set, want, "{l}+{r} graph {edges:?}");
    let hk = hopcroft_karp(&g);
    assert_eq!(hk.len(), want.iter().next().map_or(0, Vec::len));
    assert!(want.contains(&hk));
    got.len()
}

/// Every bipartite graph with `l * r <= max_cells`, `l, r <= 5`.
pub fn bipartite_exhaustive(max_cells: usize) -> Coverage {
    let mut cov = Coverage::default();
    for l in 0..=5 {
        for r in 0..=5 {
            if l * r > max_cells {
                continue;
            }
            for mask in 0..(1u64 << (l * r)) {
                let edges = (0..l * r).filter(|k| mask >> k & 1 == 1).map(|k| (k / r, k % r)).collect();
                cov.cases += 1;
                cov.matched += usize::from(check_graph(l, r, &edges) > 0);
            }
        }
    }
    cov
}

/// Every bipartite graph with up to five nodes per side whose left
/// adjacency rows are in non-decreasing order, which covers all graphs up
/// to renumbering the left nodes. Each is also checked once with its rows
/// shuffled.
pub fn bipartite_up_to_left_order() -> Coverage {
    fn rows(l: usize, r: usize, start: u32, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if cur.len() == l {
            f(cur);
            return;
        }
        for m in start..(1u32 << r) {
            cur.push(m);
            rows(l, r, m, cur, f);
            cur.pop();
        }
    }
    let mut rng = random::rng(55);
    let mut cov = Coverage::default();
    for l in 0..=5 {
        for r in 0..=5 {
            rows(l, r, 0, &mut Vec::new(), &mut |masks| {
                let mut order: Vec<usize> = (0..l).collect();
                for pass in 0..2 {
                    if pass == 1 {
                        order.shuffle(&mut rng);
                    }
                    let edges = order
                        .iter()
                        .enumerate()
                        .flat_map(|(a, &src)| (0..r).filter(move |b| masks[src] >> b & 1 == 1).map(move |b| (a, b)))
                        .collect();
                    cov.cases += 1;
                    cov.matched += usize::from(check_graph(l, r, &edges) > 0);
                }
            });
        }
    }
    cov
}

/// A commutative subject with at least one repeated argument.
fn duplicated_case(rng: &mut impl Rng, reg: &Registry) -> (Term, Pattern) {
    loop {
        let (subject, pattern) = random::commutative_case(rng, reg, 5);
        let args = subject.as_application().unwrap().args();
        if args.windows(2).any(|w| w[0] == w[1]) {
            return (subject, pattern);
        }
    }
}

/// Commutative subjects with duplicated arguments: no match is reported
/// twice by either matcher and the sets equal the deduplicated brute force.
pub fn duplicated_arguments(seeds: std::ops::Range<u64>) -> Coverage {
    let reg = random::registry();
    let mut cov = Coverage::default();
    for seed in seeds {
        let mut rng = random::rng(120_000 + seed);
        let (subject, pattern) = duplicated_case(&mut rng, &reg);
        let ctx = format!("seed {seed}: {subject} vs {}", pattern.expression());
        let want = brute_force(&subject, &pattern);
        let got = one_to_one::matches(&subject, &pattern).unwrap();
        no_duplicates(&got, &ctx);
        assert_eq!(rendered(&got), rendered(&want), "{ctx}");
        let m = ManyToOneMatcher::from_patterns([pattern.clone()]);
        let many: Vec<Substitution> = m.matches(&subject).unwrap().into_iter().map(|(_, s)| s).collect();
        no_duplicates(&many, &ctx);
        assert_eq!(rendered(&many), rendered(&want), "{ctx}");
        cov.cases += 1;
        cov.matched += usize::from(!got.is_empty());
    }
    cov
}
