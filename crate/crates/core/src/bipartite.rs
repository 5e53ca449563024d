//! Maximum bipartite matchings.
//!
//! Left nodes are subject arguments, right nodes are pattern arguments.
//! [`hopcroft_karp`] finds one maximum matching; [`enumerate_maximum_matchings`]
//! then visits every maximum matching using the binary partition scheme of
//! Uno (alternating cycles or length-2 alternating paths from a free vertex
//! split the solution space on a matched edge).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::ControlFlow;

use crate::substitution::Substitution;

/// Pairs `(left, right)` sorted by left index.
pub type Matching = Vec<(usize, usize)>;

/// Bipartite graph with labelled edges.
///
/// Node indices double as the order on each side. `left_class` assigns an
/// equivalence id to every left node; equal subjects share an id.
#[derive(Debug, Clone)]
pub struct MatchGraph<E> {
    left_class: Vec<usize>,
    right: usize,
    edges: BTreeMap<(usize, usize), E>,
}

impl<E> MatchGraph<E> {
    pub fn new(left_class: Vec<usize>, right: usize) -> Self {
        MatchGraph {
            left_class,
            right,
            edges: BTreeMap::new(),
        }
    }

    /// Graph whose left nodes are pairwise distinct.
    pub fn with_sizes(left: usize, right: usize) -> Self {
        Self::new((0..left).collect(), right)
    }

    pub fn add_edge(&mut self, left: usize, right: usize, label: E) {
        assert!(left < self.left_class.len() && right < self.right);
        self.edges.insert((left, right), label);
    }

    pub fn left_len(&self) -> usize {
        self.left_class.len()
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn left_class(&self, left: usize) -> usize {
        self.left_class[left]
    }

    pub fn edge(&self, left: usize, right: usize) -> Option<&E> {
        self.edges.get(&(left, right))
    }

    pub fn edge_keys(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.keys().copied()
    }
}

/// A maximum-cardinality matching in `O(E √V)`.
pub fn hopcroft_karp<E>(g: &MatchGraph<E>) -> Matching {
    const FREE: usize = usize::MAX;
    let nl = g.left_len();
    let mut adj = vec![Vec::new(); nl];
    for (l, r) in g.edge_keys() {
        adj[l].push(r);
    }
    let mut match_l = vec![FREE; nl];
    let mut match_r = vec![FREE; g.right];
    let mut dist = vec![0usize; nl];

    loop {
        // layer the graph from the free left nodes
        let mut queue = VecDeque::new();
        for l in 0..nl {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let m = match_r[r];
                if m == FREE {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..nl {
            if match_l[l] == FREE {
                augment(l, &adj, &mut match_l, &mut match_r, &mut dist);
            }
        }
    }

    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        match_l: &mut [usize],
        match_r: &mut [usize],
        dist: &mut [usize],
    ) -> bool {
        for &r in &adj[l] {
            let m = match_r[r];
            if m == FREE || (dist[m] == dist[l] + 1 && augment(m, adj, match_l, match_r, dist)) {
                match_l[l] = r;
                match_r[r] = l;
                return true;
            }
        }
        dist[l] = usize::MAX;
        false
    }

    match_l
        .iter()
        .enumerate()
        .filter(|&(_, &r)| r != FREE)
        .map(|(l, &r)| (l, r))
        .collect()
}

/// Visits every maximum matching of `g` exactly once, starting with the
/// Hopcroft-Karp seed.
pub fn enumerate_maximum_matchings<E>(
    g: &MatchGraph<E>,
    visit: &mut dyn FnMut(&Matching) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let seed = hopcroft_karp(g);
    visit(&seed)?;
    let edges: BTreeSet<(usize, usize)> = g.edge_keys().collect();
    let matching: BTreeMap<usize, usize> = seed.into_iter().collect();
    enumerate_rest(&edges, &matching, visit)
}

/// Collects [`enumerate_maximum_matchings`].
pub fn all_maximum_matchings<E>(g: &MatchGraph<E>) -> Vec<Matching> {
    let mut out = Vec::new();
    let _ = enumerate_maximum_matchings(g, &mut |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Visits the maximum matchings of `edges` other than `matching`.
fn enumerate_rest(
    edges: &BTreeSet<(usize, usize)>,
    matching: &BTreeMap<usize, usize>,
    visit: &mut dyn FnMut(&Matching) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let Some((other, e)) = alternative(edges, matching) else {
        return ControlFlow::Continue(());
    };
    visit(&other.iter().map(|(&l, &r)| (l, r)).collect())?;

    // matchings containing e
    let plus: BTreeSet<_> = edges
        .iter()
        .copied()
        .filter(|&(l, r)| l != e.0 && r != e.1)
        .collect();
    let mut without_e = matching.clone();
    without_e.remove(&e.0);
    enumerate_rest(&plus, &without_e, &mut |m| {
        let mut with_e = m.clone();
        let at = with_e.partition_point(|&(l, _)| l < e.0);
        with_e.insert(at, e);
        visit(&with_e)
    })?;

    // matchings avoiding e
    let mut minus = edges.clone();
    minus.remove(&e);
    enumerate_rest(&minus, &other, visit)
}

/// Another maximum matching of the same size together with an edge of
/// `matching` that it does not contain.
fn alternative(
    edges: &BTreeSet<(usize, usize)>,
    matching: &BTreeMap<usize, usize>,
) -> Option<(BTreeMap<usize, usize>, (usize, usize))> {
    if let Some(cycle) = alternating_cycle(edges, matching) {
        let mut other = matching.clone();
        let mut chosen = None;
        for &(l, r, in_matching) in &cycle {
            if in_matching {
                chosen.get_or_insert((l, r));
            } else {
                other.insert(l, r);
            }
        }
        return Some((other, chosen.expect("cycle alternates")));
    }
    let matched_right: BTreeMap<usize, usize> = matching.iter().map(|(&l, &r)| (r, l)).collect();
    for &(l, r) in edges {
        if matching.get(&l) == Some(&r) {
            continue;
        }
        // free left vertex l, r matched elsewhere
        if !matching.contains_key(&l) {
            if let Some(&l2) = matched_right.get(&r) {
                let mut other = matching.clone();
                other.remove(&l2);
                other.insert(l, r);
                return Some((other, (l2, r)));
            }
        }
        // free right vertex r, l matched elsewhere
        if !matched_right.contains_key(&r) {
            if let Some(&r2) = matching.get(&l) {
                let mut other = matching.clone();
                other.insert(l, r);
                return Some((other, (l, r2)));
            }
        }
    }
    None
}

/// A directed cycle in the graph that orients matched edges left→right and
/// the others right→left, as `(left, right, is_matched)` edges.
fn alternating_cycle(
    edges: &BTreeSet<(usize, usize)>,
    matching: &BTreeMap<usize, usize>,
) -> Option<Vec<(usize, usize, bool)>> {
    let mut right_out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(l, r) in edges {
        if matching.get(&l) != Some(&r) {
            right_out.entry(r).or_default().push(l);
        }
    }
    // walk left -> (matched) right -> (unmatched) left ...
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Grey,
        Black,
    }
    let mut color: BTreeMap<usize, Color> = matching.keys().map(|&l| (l, Color::White)).collect();
    for &start in matching.keys() {
        if color[&start] != Color::White {
            continue;
        }
        // iterative DFS over left nodes; path holds (left, next child index)
        let mut path: Vec<(usize, usize)> = vec![(start, 0)];
        color.insert(start, Color::Grey);
        while let Some(&mut (l, ref mut idx)) = path.last_mut() {
            let r = matching[&l];
            let succ = right_out.get(&r).map_or(&[][..], |v| &v[..]);
            if *idx < succ.len() {
                let next = succ[*idx];
                *idx += 1;
                match color.get(&next).copied() {
                    Some(Color::White) => {
                        color.insert(next, Color::Grey);
                        path.push((next, 0));
                    }
                    Some(Color::Grey) => {
                        let from = path.iter().position(|&(x, _)| x == next).unwrap();
                        let lefts: Vec<usize> = path[from..].iter().map(|&(x, _)| x).collect();
                        let mut cycle = Vec::with_capacity(lefts.len() * 2);
                        for (i, &x) in lefts.iter().enumerate() {
                            let rx = matching[&x];
                            cycle.push((x, rx, true));
                            let y = lefts[(i + 1) % lefts.len()];
                            cycle.push((y, rx, false));
                        }
                        return Some(cycle);
                    }
                    // unmatched left nodes have no outgoing edge
                    _ => {}
                }
            } else {
                color.insert(l, Color::Black);
                path.pop();
            }
        }
    }
    None
}

/// True unless two edges with equal subjects cross: for pairs `(s, p)`,
/// `(s', p')` with `s ≡ s'`, `p > p'` must imply `s > s'`.
pub fn is_order_preserving<E>(m: &Matching, g: &MatchGraph<E>) -> bool {
    for (i, &(s, p)) in m.iter().enumerate() {
        for &(s2, p2) in &m[i + 1..] {
            if g.left_class(s) == g.left_class(s2) && (p > p2) != (s > s2) {
                return false;
            }
        }
    }
    true
}

/// [`is_order_preserving`], and within each class of equal subjects the
/// matched ones come first. Left nodes of a class must be contiguous. Keeps exactly one matching per orbit under
/// swapping equal subjects.
pub fn is_canonical<E>(m: &Matching, g: &MatchGraph<E>) -> bool {
    if !is_order_preserving(m, g) {
        return false;
    }
    let mut used = vec![false; g.left_len()];
    for &(l, _) in m {
        used[l] = true;
    }
    (1..g.left_len()).all(|l| !(used[l] && !used[l - 1] && g.left_class(l) == g.left_class(l - 1)))
}

/// Visits every substitution obtained by picking one candidate per matched
/// edge and merging them with `prior`.
pub fn combine_edge_substitutions<E: AsRef<[Substitution]>>(
    m: &Matching,
    g: &MatchGraph<E>,
    prior: &Substitution,
    visit: &mut dyn FnMut(&Substitution) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn rec<E: AsRef<[Substitution]>>(
        rest: &[(usize, usize)],
        g: &MatchGraph<E>,
        acc: &Substitution,
        visit: &mut dyn FnMut(&Substitution) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some((&(l, r), tail)) = rest.split_first() else {
            return visit(acc);
        };
        for candidate in g.edge(l, r).map_or(&[][..], |v| v.as_ref()) {
            if let Some(next) = acc.merge(candidate) {
                rec(tail, g, &next, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
    rec(m, g, prior, visit)
}
