//! Brute-force reference matcher.
//!
//! Commutative argument lists are handled by trying every distinct
//! permutation of the subject arguments and matching syntactically, then
//! deduplicating. Sequence bindings of variables that only ever occur
//! directly inside commutative applications are sorted, since their order
//! carries no information.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use termmatch::{Binding, Name, Operation, Pattern, Substitution, Term, WildcardKind};

pub fn brute_force(subject: &Term, pattern: &Pattern) -> Vec<Substitution> {
    let unordered = commutative_only_variables(pattern.expression());
    let raw = term(subject, pattern.expression(), &Substitution::new());
    let mut out = BTreeSet::new();
    for s in raw {
        if !pattern.constraints().iter().all(|c| c.check(&s)) {
            continue;
        }
        let normalized: Substitution = s
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    Binding::Sequence(ts) if unordered.contains(k) => {
                        let mut ts = ts.clone();
                        ts.sort();
                        Binding::Sequence(ts)
                    }
                    other => other.clone(),
                };
                (k.clone(), v)
            })
            .collect();
        out.insert(normalized);
    }
    out.into_iter().collect()
}

/// Sequence variables whose every occurrence is an argument of a
/// commutative application.
fn commutative_only_variables(p: &Term) -> BTreeSet<Name> {
    let mut verdict: BTreeMap<Name, bool> = BTreeMap::new();
    fn walk(t: &Term, under_commutative: bool, verdict: &mut BTreeMap<Name, bool>) {
        match t {
            Term::Wildcard(w) if w.kind().is_sequence() => {
                if let Some(n) = w.name() {
                    *verdict.entry(n.clone()).or_insert(true) &= under_commutative;
                }
            }
            Term::Application(a) => {
                for arg in a.args() {
                    walk(arg, a.op().is_commutative(), verdict);
                }
            }
            _ => {}
        }
    }
    walk(p, false, &mut verdict);
    verdict.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect()
}

fn bind(sigma: &Substitution, name: Option<&Name>, value: Binding) -> Option<Substitution> {
    let Some(name) = name else {
        return Some(sigma.clone());
    };
    match sigma.get(name) {
        Some(existing) if *existing == value => Some(sigma.clone()),
        Some(_) => None,
        None => Some(sigma.clone().with(name, value)),
    }
}

fn term(s: &Term, p: &Term, sigma: &Substitution) -> Vec<Substitution> {
    match p {
        Term::Symbol(_) => {
            if s == p {
                vec![sigma.clone()]
            } else {
                vec![]
            }
        }
        Term::Wildcard(w) => {
            assert_eq!(w.kind(), WildcardKind::Dot);
            if !w.admits(s) {
                return vec![];
            }
            bind(sigma, w.name(), Binding::Single(s.clone())).into_iter().collect()
        }
        Term::Application(pa) => {
            let Term::Application(sa) = s else { return vec![] };
            if sa.op().name() != pa.op().name() {
                return vec![];
            }
            let op = pa.op();
            let assoc = op.is_associative().then_some(op);
            if op.is_commutative() {
                permutations(sa.args())
                    .into_iter()
                    .flat_map(|perm| sequence(&perm, pa.args(), assoc, sigma))
                    .collect()
            } else {
                sequence(sa.args(), pa.args(), assoc, sigma)
            }
        }
    }
}

fn sequence(
    subjects: &[Term],
    patterns: &[Term],
    assoc: Option<&Arc<Operation>>,
    sigma: &Substitution,
) -> Vec<Substitution> {
    let Some((p, rest)) = patterns.split_first() else {
        return if subjects.is_empty() { vec![sigma.clone()] } else { vec![] };
    };
    let mut out = Vec::new();
    match p {
        Term::Wildcard(w) if w.kind().is_sequence() => {
            for k in w.kind().min_count()..=subjects.len() {
                let value = Binding::Sequence(subjects[..k].to_vec());
                if let Some(s) = bind(sigma, w.name(), value) {
                    out.extend(sequence(&subjects[k..], rest, assoc, &s));
                }
            }
        }
        Term::Wildcard(w) if assoc.is_some() && w.class().is_none() => {
            let op = assoc.unwrap();
            for k in 1..=subjects.len() {
                let value = if k == 1 {
                    subjects[0].clone()
                } else {
                    Term::app(op, subjects[..k].to_vec()).unwrap()
                };
                if let Some(s) = bind(sigma, w.name(), Binding::Single(value)) {
                    out.extend(sequence(&subjects[k..], rest, assoc, &s));
                }
            }
        }
        _ => {
            if let Some(first) = subjects.first() {
                for s in term(first, p, sigma) {
                    out.extend(sequence(&subjects[1..], rest, assoc, &s));
                }
            }
        }
    }
    out
}

fn permutations(items: &[Term]) -> BTreeSet<Vec<Term>> {
    if items.is_empty() {
        return BTreeSet::from([Vec::new()]);
    }
    let mut out = BTreeSet::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.insert(tail);
        }
    }
    out
}

/// All matchings of a bipartite graph given as an edge list, by brute force.
pub fn all_matchings(edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << edges.len()) {
        let chosen: Vec<(usize, usize)> = (0..edges.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| edges[i])
            .collect();
        let lefts: BTreeSet<usize> = chosen.iter().map(|e| e.0).collect();
        let rights: BTreeSet<usize> = chosen.iter().map(|e| e.1).collect();
        if lefts.len() == chosen.len() && rights.len() == chosen.len() {
            let mut m = chosen;
            m.sort();
            out.push(m);
        }
    }
    out
}

/// Maximum-cardinality matchings by brute force.
pub fn maximum_matchings(edges: &[(usize, usize)]) -> BTreeSet<Vec<(usize, usize)>> {
    let all = all_matchings(edges);
    let best = all.iter().map(Vec::len).max().unwrap_or(0);
    all.into_iter().filter(|m| m.len() == best).collect()
}

/// Non-negative solutions of `Σ c_i x_i = d` by grid search.
pub fn grid_solutions(coefficients: &[usize], constant: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut x = vec![0usize; coefficients.len()];
    loop {
        let total: usize = x.iter().zip(coefficients).map(|(a, b)| a * b).sum();
        if total == constant {
            out.insert(x.clone());
        }
        let mut i = 0;
        loop {
            if i == x.len() {
                return out;
            }
            x[i] += 1;
            if x[i] <= constant {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}
