//! Matching one pattern against one subject.
//!
//! Matches are produced through a visitor returning [`ControlFlow`], so
//! enumeration is lazy and stops as soon as the visitor breaks.
//!
//! Commutative argument lists are matched in a fixed order: constant
//! arguments, arguments bound to already known variables, compound
//! subpatterns (with backtracking), the bound-variable step again, dot
//! variables, and finally sequence variables, which share the leftover
//! arguments through [`diophantine::distribute`].

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::diophantine::{self, SequenceVariable};
use crate::error::{Error, Result};
use crate::pattern::{admits, satisfies_all, Constraint, Pattern};
use crate::substitution::{Binding, Substitution};
use crate::term::{Name, Operation, Term, Wildcard, WildcardKind};

/// Callback receiving each match; return `ControlFlow::Break(())` to stop.
pub type Visitor<'a> = dyn FnMut(&Substitution) -> ControlFlow<()> + 'a;

/// All matches of `pattern` against `subject`, without duplicates.
pub fn matches(subject: &Term, pattern: &Pattern) -> Result<Vec<Substitution>> {
    let mut out = Vec::new();
    for_each_match(subject, pattern, &mut |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// The first match in enumeration order.
pub fn first_match(subject: &Term, pattern: &Pattern) -> Result<Option<Substitution>> {
    let mut first = None;
    for_each_match(subject, pattern, &mut |s| {
        first = Some(s.clone());
        ControlFlow::Break(())
    })?;
    Ok(first)
}

/// Feeds every distinct match to `visit` until it breaks.
pub fn for_each_match(subject: &Term, pattern: &Pattern, visit: &mut Visitor<'_>) -> Result<()> {
    if !subject.is_ground() {
        return Err(Error::InvalidSubject(format!(
            "subject `{subject}` contains wildcards"
        )));
    }
    let cs = pattern.constraints();
    let init = Substitution::new();
    if !admits(cs, &Substitution::new(), &init) {
        return Ok(());
    }
    let mut seen = HashSet::new();
    let _ = match_term(subject, pattern.expression(), &init, cs, &mut |s| {
        if satisfies_all(cs, s) && seen.insert(s.clone()) {
            visit(s)
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(())
}

/// Matches a single subject against a single (non-sequence) pattern term,
/// extending `sigma`.
pub fn match_term(
    subject: &Term,
    pattern: &Term,
    sigma: &Substitution,
    cs: &[Constraint],
    visit: &mut Visitor<'_>,
) -> ControlFlow<()> {
    match pattern {
        Term::Symbol(_) => {
            if subject == pattern {
                visit(sigma)?;
            }
            ControlFlow::Continue(())
        }
        Term::Wildcard(w) => {
            if w.kind() != WildcardKind::Dot || !w.admits(subject) {
                return ControlFlow::Continue(());
            }
            bind(sigma, w.name(), Binding::Single(subject.clone()), cs, visit)
        }
        Term::Application(pa) => {
            let Term::Application(sa) = subject else {
                return ControlFlow::Continue(());
            };
            if sa.op().name() != pa.op().name() {
                return ControlFlow::Continue(());
            }
            if pattern.is_ground() {
                if subject == pattern {
                    visit(sigma)?;
                }
                return ControlFlow::Continue(());
            }
            let op = pa.op();
            if op.is_commutative() {
                match_commutative(sa.args(), pa.args(), op, sigma, cs, visit)
            } else {
                let assoc = op.is_associative().then_some(op);
                match_sequence(sa.args(), pa.args(), assoc, sigma, cs, visit)
            }
        }
    }
}

fn bind(
    sigma: &Substitution,
    name: Option<&Name>,
    value: Binding,
    cs: &[Constraint],
    visit: &mut Visitor<'_>,
) -> ControlFlow<()> {
    let Some(name) = name else {
        return visit(sigma);
    };
    match sigma.try_bind(name, value) {
        None => ControlFlow::Continue(()),
        Some(std::borrow::Cow::Borrowed(s)) => visit(s),
        Some(std::borrow::Cow::Owned(s)) => {
            if admits(cs, sigma, &s) {
                visit(&s)
            } else {
                ControlFlow::Continue(())
            }
        }
    }
}

/// Minimum number of arguments a pattern argument consumes.
fn min_len(p: &Term) -> usize {
    match p {
        Term::Wildcard(w) => w.kind().min_count(),
        _ => 1,
    }
}

/// Matches an ordered argument list. Patterns are assigned consecutive
/// blocks of `subjects` from left to right; with `assoc` set, an
/// unrestricted dot variable may absorb several arguments, which are then
/// wrapped in `assoc`.
pub fn match_sequence(
    subjects: &[Term],
    patterns: &[Term],
    assoc: Option<&Arc<Operation>>,
    sigma: &Substitution,
    cs: &[Constraint],
    visit: &mut Visitor<'_>,
) -> ControlFlow<()> {
    let Some((p, rest)) = patterns.split_first() else {
        if subjects.is_empty() {
            visit(sigma)?;
        }
        return ControlFlow::Continue(());
    };
    let min_rest: usize = rest.iter().map(min_len).sum();
    if subjects.len() < min_len(p) + min_rest {
        return ControlFlow::Continue(());
    }
    let max_take = subjects.len() - min_rest;
    let mut tail = |k: usize, s: &Substitution| match_sequence(&subjects[k..], rest, assoc, s, cs, visit);

    let Term::Wildcard(w) = p else {
        return match_term(&subjects[0], p, sigma, cs, &mut |s| tail(1, s));
    };
    let bound = w.name().and_then(|n| sigma.get(n));
    if w.kind().is_sequence() {
        if let Some(b) = bound {
            let ts = b.terms();
            if ts.len() <= max_take && subjects.starts_with(ts) {
                return tail(ts.len(), sigma);
            }
            return ControlFlow::Continue(());
        }
        for k in w.kind().min_count()..=max_take {
            let value = Binding::Sequence(subjects[..k].to_vec());
            bind(sigma, w.name(), value, cs, &mut |s| tail(k, s))?;
        }
        return ControlFlow::Continue(());
    }
    match assoc {
        Some(op) if w.class().is_none() => {
            if let Some(Binding::Single(t)) = bound {
                let k = match t {
                    Term::Application(a) if a.op().name() == op.name() => {
                        if !subjects.starts_with(a.args()) {
                            return ControlFlow::Continue(());
                        }
                        a.args().len()
                    }
                    _ if subjects[0] == *t => 1,
                    _ => return ControlFlow::Continue(()),
                };
                return if k <= max_take { tail(k, sigma) } else { ControlFlow::Continue(()) };
            }
            for k in 1..=max_take {
                let value = if k == 1 {
                    subjects[0].clone()
                } else {
                    Term::raw_app(op, subjects[..k].to_vec())
                };
                bind(sigma, w.name(), Binding::Single(value), cs, &mut |s| tail(k, s))?;
            }
            ControlFlow::Continue(())
        }
        _ => {
            if !w.admits(&subjects[0]) {
                return ControlFlow::Continue(());
            }
            bind(sigma, w.name(), Binding::Single(subjects[0].clone()), cs, &mut |s| tail(1, s))
        }
    }
}

/// Distinct terms with their multiplicities, in term order.
type Pool = Vec<(Term, usize)>;

fn pool_of(subjects: &[Term]) -> Pool {
    let mut sorted: Vec<&Term> = subjects.iter().collect();
    sorted.sort();
    let mut pool: Pool = Vec::new();
    for t in sorted {
        match pool.last_mut() {
            Some((last, c)) if last == t => *c += 1,
            _ => pool.push((t.clone(), 1)),
        }
    }
    pool
}

fn take(pool: &mut Pool, t: &Term, n: usize) -> bool {
    match pool.iter_mut().find(|(p, _)| p == t) {
        Some((_, c)) if *c >= n => {
            *c -= n;
            true
        }
        _ => false,
    }
}

/// Removes the arguments covered by wildcards already bound in `sigma` and
/// returns the unbound ones; `None` if a bound value is not available.
fn subtract_bound<'p>(
    pool: &mut Pool,
    wildcards: &[&'p Wildcard],
    op: &Operation,
    sigma: &Substitution,
) -> Option<Vec<&'p Wildcard>> {
    let mut unbound = Vec::with_capacity(wildcards.len());
    for &w in wildcards {
        let Some(b) = w.name().and_then(|n| sigma.get(n)) else {
            unbound.push(w);
            continue;
        };
        let terms = match b {
            Binding::Single(Term::Application(a))
                if op.is_associative() && w.class().is_none() && a.op().name() == op.name() =>
            {
                a.args()
            }
            Binding::Single(t) if !w.admits(t) => return None,
            other => other.terms(),
        };
        for t in terms {
            if !take(pool, t, 1) {
                return None;
            }
        }
    }
    Some(unbound)
}

/// Matches the argument multiset of a commutative application.
pub fn match_commutative(
    subjects: &[Term],
    patterns: &[Term],
    op: &Arc<Operation>,
    sigma: &Substitution,
    cs: &[Constraint],
    visit: &mut Visitor<'_>,
) -> ControlFlow<()> {
    let mut pool = pool_of(subjects);
    let mut compound = Vec::new();
    let mut wildcards = Vec::new();
    for p in patterns {
        match p {
            Term::Wildcard(w) => wildcards.push(&**w),
            _ if p.is_ground() => {
                if !take(&mut pool, p, 1) {
                    return ControlFlow::Continue(());
                }
            }
            _ => compound.push(p),
        }
    }
    if patterns.iter().map(min_len).sum::<usize>() > subjects.len() {
        return ControlFlow::Continue(());
    }
    let Some(wildcards) = subtract_bound(&mut pool, &wildcards, op, sigma) else {
        return ControlFlow::Continue(());
    };
    compound.sort();
    let ctx = Commutative { op, cs };
    ctx.compound(&mut pool, &compound, 0, sigma, &mut |pool, s| {
        ctx.variables(pool, &wildcards, s, visit)
    })
}

struct Commutative<'a> {
    op: &'a Arc<Operation>,
    cs: &'a [Constraint],
}

type PoolVisitor<'a> = dyn FnMut(&mut Pool, &Substitution) -> ControlFlow<()> + 'a;

impl Commutative<'_> {
    /// Assigns each compound subpattern to a distinct remaining subject.
    /// Equal subpatterns take subjects in non-decreasing order.
    fn compound(
        &self,
        pool: &mut Pool,
        patterns: &[&Term],
        start: usize,
        sigma: &Substitution,
        cont: &mut PoolVisitor<'_>,
    ) -> ControlFlow<()> {
        let Some((&p, rest)) = patterns.split_first() else {
            return cont(pool, sigma);
        };
        for idx in start..pool.len() {
            if pool[idx].1 == 0 {
                continue;
            }
            let subject = pool[idx].0.clone();
            let next_start = if rest.first() == Some(&p) { idx } else { 0 };
            match_term(&subject, p, sigma, self.cs, &mut |s| {
                pool[idx].1 -= 1;
                let r = self.compound(pool, rest, next_start, s, cont);
                pool[idx].1 += 1;
                r
            })?;
        }
        ControlFlow::Continue(())
    }

    fn variables(
        &self,
        pool: &mut Pool,
        wildcards: &[&Wildcard],
        sigma: &Substitution,
        visit: &mut Visitor<'_>,
    ) -> ControlFlow<()> {
        let mut pool = pool.clone();
        let Some(unbound) = subtract_bound(&mut pool, wildcards, self.op, sigma) else {
            return ControlFlow::Continue(());
        };
        let ac = self.op.is_associative();

        let mut named_dots: BTreeMap<Name, Vec<&Wildcard>> = BTreeMap::new();
        let mut anonymous_dots: Vec<&Wildcard> = Vec::new();
        let mut sequences: BTreeMap<Name, (WildcardKind, usize)> = BTreeMap::new();
        let mut wrapped: BTreeMap<Name, usize> = BTreeMap::new();
        let (mut anon_min, mut anon_unbounded) = (0usize, false);
        for w in unbound {
            match (w.kind(), w.name()) {
                (WildcardKind::Dot, Some(n)) => named_dots.entry(n.clone()).or_default().push(w),
                (WildcardKind::Dot, None) if w.class().is_some() => anonymous_dots.push(w),
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
        let mut singles: Vec<(Option<Name>, Vec<&Wildcard>)> = Vec::new();
        for (n, ws) in named_dots {
            if ac && ws.iter().all(|w| w.class().is_none()) {
                wrapped.insert(n, ws.len());
            } else {
                singles.push((Some(n), ws));
            }
        }
        singles.extend(anonymous_dots.into_iter().map(|w| (None, vec![w])));

        let mut vars: Vec<SequenceVariable> = sequences
            .into_iter()
            .map(|(n, (kind, m))| SequenceVariable::new(Some(&n), kind, m))
            .chain(
                wrapped
                    .into_iter()
                    .map(|(n, m)| SequenceVariable::wrapping(Some(&n), self.op, m)),
            )
            .collect();
        if anon_min > 0 || anon_unbounded {
            vars.push(SequenceVariable::anonymous(
                anon_min,
                (!anon_unbounded).then_some(anon_min),
            ));
        }

        self.dots(&mut pool, &singles, 0, sigma, &mut |pool, s| {
            if vars.is_empty() {
                if pool.iter().all(|(_, c)| *c == 0) {
                    visit(s)?;
                }
                return ControlFlow::Continue(());
            }
            for d in diophantine::distribute(pool, &vars, s) {
                if admits(self.cs, s, &d) {
                    visit(&d)?;
                }
            }
            ControlFlow::Continue(())
        })
    }

    /// Assigns single-term dot variables; `m` copies of the term are
    /// consumed for a variable occurring `m` times.
    fn dots(
        &self,
        pool: &mut Pool,
        vars: &[(Option<Name>, Vec<&Wildcard>)],
        start: usize,
        sigma: &Substitution,
        cont: &mut PoolVisitor<'_>,
    ) -> ControlFlow<()> {
        let Some(((name, ws), rest)) = vars.split_first() else {
            return cont(pool, sigma);
        };
        let m = ws.len();
        let same_next = name.is_none() && rest.first().is_some_and(|(n, w2)| n.is_none() && *w2 == *ws);
        for idx in start..pool.len() {
            if pool[idx].1 < m || !ws.iter().all(|w| w.admits(&pool[idx].0)) {
                continue;
            }
            let value = Binding::Single(pool[idx].0.clone());
            let next_start = if same_next { idx } else { 0 };
            bind(sigma, name.as_ref(), value, self.cs, &mut |s| {
                pool[idx].1 -= m;
                let r = self.dots(pool, rest, next_start, s, cont);
                pool[idx].1 += m;
                r
            })?;
        }
        ControlFlow::Continue(())
    }
}
