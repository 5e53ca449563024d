use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::net::Net;
use crate::bipartite::{
    combine_edge_substitutions, enumerate_maximum_matchings, hopcroft_karp, is_canonical, MatchGraph,
};
use crate::diophantine::{distribute, SequenceVariable};
use crate::substitution::Substitution;
use crate::term::{Name, Operation, Term, WildcardKind};

/// The argument pattern of one commutative application.
#[derive(Debug, Clone)]
struct Part {
    /// Subpattern ids that each need their own subject argument.
    fixed: Vec<usize>,
    /// Variables sharing the arguments left over by `fixed`.
    sequences: Vec<SequenceVariable>,
    min_len: usize,
}

/// Matcher for the argument multisets of one commutative operation.
///
/// All non-sequence subpatterns of all parts go into one inner net, so each
/// subject argument is matched once against all of them. The results label
/// a bipartite graph between subject arguments and the subpatterns of a
/// part, whose maximum matchings give the candidate assignments.
#[derive(Debug, Clone)]
pub(crate) struct CommutativeMatcher {
    op: Arc<Operation>,
    inner: Net,
    subpatterns: BTreeMap<Term, usize>,
    parts: Vec<Part>,
    part_ids: BTreeMap<Vec<Term>, usize>,
}

/// Inner-net results for the distinct arguments of one subject.
pub(crate) struct EdgeLabels {
    classes: Vec<usize>,
    distinct: Vec<Term>,
    labels: Vec<BTreeMap<usize, Vec<Substitution>>>,
}

impl CommutativeMatcher {
    pub(crate) fn new(op: Arc<Operation>) -> Self {
        CommutativeMatcher {
            op,
            inner: Net::default(),
            subpatterns: BTreeMap::new(),
            parts: Vec::new(),
            part_ids: BTreeMap::new(),
        }
    }

    pub(crate) fn hook_count(&self) -> usize {
        self.parts.len() + self.inner.hook_count()
    }

    fn subpattern(&mut self, t: &Term) -> usize {
        if let Some(&id) = self.subpatterns.get(t) {
            return id;
        }
        let id = self.subpatterns.len();
        self.inner.add(t, id);
        self.subpatterns.insert(t.clone(), id);
        id
    }

    /// Registers the argument list of a commutative pattern application and
    /// returns its part id. Equal argument lists share a part.
    pub(crate) fn add_part(&mut self, args: &[Term]) -> usize {
        if let Some(&id) = self.part_ids.get(args) {
            return id;
        }
        let ac = self.op.is_associative();
        let mut fixed_terms: Vec<&Term> = Vec::new();
        let mut named_dots: BTreeMap<Name, Vec<&Term>> = BTreeMap::new();
        let mut sequences: BTreeMap<Name, (WildcardKind, usize)> = BTreeMap::new();
        let (mut anon_min, mut anon_unbounded) = (0usize, false);
        for arg in args {
            let Term::Wildcard(w) = arg else {
                fixed_terms.push(arg);
                continue;
            };
            match (w.kind(), w.name()) {
                (WildcardKind::Dot, Some(n)) => named_dots.entry(n.clone()).or_default().push(arg),
                (WildcardKind::Dot, None) if w.class().is_some() => fixed_terms.push(arg),
                (WildcardKind::Dot, None) => {
                    anon_min += 1;
                    anon_unbounded |= ac;
                }
                (kind, Some(n)) => sequences.entry(n.clone()).or_insert((kind, 0)).1 += 1,
                (kind, None) => {
                    anon_min += kind.min_count();
                    anon_unbounded = true;
                }
            }
        }
        let mut vars: Vec<SequenceVariable> = sequences
            .into_iter()
            .map(|(n, (kind, m))| SequenceVariable::new(Some(&n), kind, m))
            .collect();
        for (n, occurrences) in named_dots {
            let unrestricted = occurrences
                .iter()
                .all(|t| t.as_wildcard().is_some_and(|w| w.class().is_none()));
            if ac && unrestricted {
                vars.push(SequenceVariable::wrapping(Some(&n), &self.op, occurrences.len()));
            } else {
                fixed_terms.extend(occurrences);
            }
        }
        if anon_min > 0 || anon_unbounded {
            vars.push(SequenceVariable::anonymous(anon_min, (!anon_unbounded).then_some(anon_min)));
        }
        fixed_terms.sort();
        let fixed: Vec<usize> = fixed_terms.into_iter().map(|t| self.subpattern(t)).collect();
        let min_len = fixed.len() + vars.iter().map(|v| v.min_count * v.multiplicity).sum::<usize>();
        let id = self.parts.len();
        self.parts.push(Part {
            fixed,
            sequences: vars,
            min_len,
        });
        self.part_ids.insert(args.to_vec(), id);
        id
    }

    /// Runs the inner net once per distinct argument of a subject.
    pub(crate) fn edge_labels(&self, subjects: &[Term]) -> EdgeLabels {
        let mut classes = Vec::with_capacity(subjects.len());
        let mut distinct: Vec<Term> = Vec::new();
        for t in subjects {
            if distinct.last() != Some(t) {
                distinct.push(t.clone());
            }
            classes.push(distinct.len() - 1);
        }
        let labels = distinct.iter().map(|t| self.inner.collect(t)).collect();
        EdgeLabels {
            classes,
            distinct,
            labels,
        }
    }

    /// Feeds every match of part `part_id` against the sorted argument list
    /// `subjects` that extends `prior` to `visit`.
    pub(crate) fn match_part(
        &self,
        part_id: usize,
        subjects: &[Term],
        edges: &EdgeLabels,
        prior: &Substitution,
        visit: &mut dyn FnMut(&Substitution) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let part = &self.parts[part_id];
        if subjects.len() < part.min_len {
            return ControlFlow::Continue(());
        }
        let leftovers = |used: &[bool]| -> Vec<(Term, usize)> {
            let mut pool = vec![0usize; edges.distinct.len()];
            for (l, &c) in edges.classes.iter().enumerate() {
                if !used[l] {
                    pool[c] += 1;
                }
            }
            edges
                .distinct
                .iter()
                .zip(pool)
                .filter(|(_, n)| *n > 0)
                .map(|(t, n)| (t.clone(), n))
                .collect()
        };
        let mut finish = |used: &[bool], s: &Substitution| -> ControlFlow<()> {
            for d in distribute(&leftovers(used), &part.sequences, s) {
                visit(&d)?;
            }
            ControlFlow::Continue(())
        };
        if part.fixed.is_empty() {
            return finish(&vec![false; subjects.len()], prior);
        }

        let mut g: MatchGraph<&Vec<Substitution>> = MatchGraph::new(edges.classes.clone(), part.fixed.len());
        for (r, id) in part.fixed.iter().enumerate() {
            let mut any = false;
            for (l, &c) in edges.classes.iter().enumerate() {
                if let Some(subs) = edges.labels[c].get(id) {
                    g.add_edge(l, r, subs);
                    any = true;
                }
            }
            if !any {
                return ControlFlow::Continue(());
            }
        }
        if hopcroft_karp(&g).len() < part.fixed.len() {
            return ControlFlow::Continue(());
        }
        let mut used = vec![false; subjects.len()];
        enumerate_maximum_matchings(&g, &mut |m| {
            if !is_canonical(m, &g) {
                return ControlFlow::Continue(());
            }
            used.iter_mut().for_each(|u| *u = false);
            for &(l, _) in m {
                used[l] = true;
            }
            combine_edge_substitutions(m, &g, prior, &mut |s| finish(&used, s))
        })
    }

    pub(crate) fn dump(&self, out: &mut String) {
        for (i, p) in self.parts.iter().enumerate() {
            let vars: Vec<String> = p
                .sequences
                .iter()
                .map(|v| {
                    format!(
                        "{}:{}..{:?}x{}{}",
                        v.name.as_deref().unwrap_or("_"),
                        v.min_count,
                        v.max_count,
                        v.multiplicity,
                        if v.wrap.is_some() { " wrap" } else { "" }
                    )
                })
                .collect();
            let _ = writeln!(out, "part {i} fixed{:?} vars{vars:?}", p.fixed);
        }
        self.inner.dump(out);
    }
}
