use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::commutative::CommutativeMatcher;
use crate::substitution::{Binding, Substitution};
use crate::term::{Name, Operation, Term, WildcardKind};

/// Transition label of the non-deterministic net.
///
/// The derived order puts the labels that are looked up by the current
/// subject term first and the variable labels, which are scanned, last.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Symbol(Name),
    /// Anonymous dot wildcard restricted to a class.
    SymbolClass(Name),
    OperationStart(Name),
    OperationEnd,
    /// Hook into the commutative matcher of an operation.
    Commutative { op: Name, part: usize },
    Dot { name: Option<Name>, class: Option<Name> },
    Sequence { name: Option<Name>, kind: WildcardKind },
    /// Dot variable directly inside an associative operation.
    AssociativeDot { name: Option<Name> },
}

impl Label {
    fn first_variable() -> Label {
        Label::Dot {
            name: None,
            class: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct State {
    pub(crate) transitions: BTreeMap<Label, usize>,
    pub(crate) finals: Vec<usize>,
}

/// Position inside the argument list of one subject application.
#[derive(Clone, Copy)]
struct Frame<'s> {
    args: &'s [Term],
    pos: usize,
    op: Option<&'s Arc<Operation>>,
}

type FinalVisitor<'a> = dyn FnMut(&[usize], &Substitution) -> ControlFlow<()> + 'a;

/// A non-deterministic discrimination net over the preorder skeletons of
/// a set of terms. Commutative applications are opaque hooks delegating to
/// one [`CommutativeMatcher`] per operation.
#[derive(Debug, Clone)]
pub(crate) struct Net {
    pub(crate) states: Vec<State>,
    pub(crate) commutative: BTreeMap<Name, CommutativeMatcher>,
}

impl Default for Net {
    fn default() -> Self {
        Net {
            states: vec![State::default()],
            commutative: BTreeMap::new(),
        }
    }
}

impl Net {
    /// Adds `term` with final label `id`.
    pub(crate) fn add(&mut self, term: &Term, id: usize) {
        let end = self.insert(0, term, None);
        self.states[end].finals.push(id);
    }

    fn follow(&mut self, state: usize, label: Label) -> usize {
        if let Some(&t) = self.states[state].transitions.get(&label) {
            return t;
        }
        let t = self.states.len();
        self.states.push(State::default());
        self.states[state].transitions.insert(label, t);
        t
    }

    fn insert(&mut self, state: usize, t: &Term, assoc: Option<&Arc<Operation>>) -> usize {
        match t {
            Term::Symbol(s) => self.follow(state, Label::Symbol(s.name_arc().clone())),
            Term::Wildcard(w) => {
                let name = w.name().cloned();
                let label = match (w.kind(), w.class()) {
                    (WildcardKind::Dot, None) if assoc.is_some() => Label::AssociativeDot { name },
                    (WildcardKind::Dot, Some(c)) if name.is_none() => Label::SymbolClass(c.clone()),
                    (WildcardKind::Dot, class) => Label::Dot {
                        name,
                        class: class.cloned(),
                    },
                    (kind, _) => Label::Sequence { name, kind },
                };
                self.follow(state, label)
            }
            Term::Application(a) if a.op().is_commutative() => {
                let op = a.op();
                let part = self
                    .commutative
                    .entry(op.name_arc().clone())
                    .or_insert_with(|| CommutativeMatcher::new(op.clone()))
                    .add_part(a.args());
                self.follow(
                    state,
                    Label::Commutative {
                        op: op.name_arc().clone(),
                        part,
                    },
                )
            }
            Term::Application(a) => {
                let op = a.op();
                let mut cur = self.follow(state, Label::OperationStart(op.name_arc().clone()));
                let inner = op.is_associative().then_some(op);
                for arg in a.args() {
                    cur = self.insert(cur, arg, inner);
                }
                self.follow(cur, Label::OperationEnd)
            }
        }
    }

    /// Number of commutative hooks, counting nested nets.
    pub(crate) fn hook_count(&self) -> usize {
        self.commutative.values().map(CommutativeMatcher::hook_count).sum()
    }

    /// All `(final label, substitution)` pairs for `subject`, grouped by
    /// label and without duplicates.
    pub(crate) fn collect(&self, subject: &Term) -> BTreeMap<usize, Vec<Substitution>> {
        let mut out: BTreeMap<usize, Vec<Substitution>> = BTreeMap::new();
        let mut seen = HashSet::new();
        let _ = self.run_root(subject, &Substitution::new(), &mut |ids, s| {
            for &id in ids {
                if seen.insert((id, s.clone())) {
                    out.entry(id).or_default().push(s.clone());
                }
            }
            ControlFlow::Continue(())
        });
        out
    }

    pub(crate) fn run_root(
        &self,
        subject: &Term,
        sigma: &Substitution,
        visit: &mut FinalVisitor<'_>,
    ) -> ControlFlow<()> {
        let root = std::slice::from_ref(subject);
        let mut stack = vec![Frame {
            args: root,
            pos: 0,
            op: None,
        }];
        self.run(0, &mut stack, sigma, visit)
    }

    fn advance<'s>(
        &self,
        target: usize,
        k: usize,
        stack: &mut Vec<Frame<'s>>,
        sigma: &Substitution,
        visit: &mut FinalVisitor<'_>,
    ) -> ControlFlow<()> {
        stack.last_mut().unwrap().pos += k;
        let r = self.run(target, stack, sigma, visit);
        stack.last_mut().unwrap().pos -= k;
        r
    }

    fn bind_advance<'s>(
        &self,
        target: usize,
        k: usize,
        name: Option<&Name>,
        value: Binding,
        stack: &mut Vec<Frame<'s>>,
        sigma: &Substitution,
        visit: &mut FinalVisitor<'_>,
    ) -> ControlFlow<()> {
        let Some(name) = name else {
            return self.advance(target, k, stack, sigma, visit);
        };
        match sigma.try_bind(name, value) {
            Some(next) => self.advance(target, k, stack, &next, visit),
            None => ControlFlow::Continue(()),
        }
    }

    fn run<'s>(
        &self,
        s: usize,
        stack: &mut Vec<Frame<'s>>,
        sigma: &Substitution,
        visit: &mut FinalVisitor<'_>,
    ) -> ControlFlow<()> {
        let state = &self.states[s];
        let depth = stack.len();
        let top = stack[depth - 1];
        let rest = &top.args[top.pos..];

        let Some(subject) = rest.first() else {
            if depth == 1 {
                if !state.finals.is_empty() {
                    visit(&state.finals, sigma)?;
                }
            } else if let Some(&t) = state.transitions.get(&Label::OperationEnd) {
                let frame = stack.pop().unwrap();
                let r = self.advance(t, 1, stack, sigma, visit);
                stack.push(frame);
                r?;
            }
            // only sequence variables can still take an empty block
            for (label, &t) in state.transitions.range(Label::first_variable()..) {
                if let Label::Sequence { name, kind } = label {
                    self.sequence(t, name.as_ref(), *kind, rest, stack, sigma, visit)?;
                }
            }
            return ControlFlow::Continue(());
        };

        match subject {
            Term::Symbol(sym) => {
                if let Some(&t) = state.transitions.get(&Label::Symbol(sym.name_arc().clone())) {
                    self.advance(t, 1, stack, sigma, visit)?;
                }
                for class in sym.class_chain() {
                    if let Some(&t) = state.transitions.get(&Label::SymbolClass(class.clone())) {
                        self.advance(t, 1, stack, sigma, visit)?;
                    }
                }
            }
            Term::Application(a) => {
                let op = a.op();
                if let Some(&t) = state.transitions.get(&Label::OperationStart(op.name_arc().clone())) {
                    stack.push(Frame {
                        args: a.args(),
                        pos: 0,
                        op: Some(op),
                    });
                    let r = self.run(t, stack, sigma, visit);
                    stack.pop();
                    r?;
                }
                if op.is_commutative() {
                    let lo = Label::Commutative {
                        op: op.name_arc().clone(),
                        part: 0,
                    };
                    let hi = Label::Commutative {
                        op: op.name_arc().clone(),
                        part: usize::MAX,
                    };
                    let hooks: Vec<(usize, usize)> = state
                        .transitions
                        .range(lo..=hi)
                        .map(|(l, &t)| match l {
                            Label::Commutative { part, .. } => (*part, t),
                            _ => unreachable!(),
                        })
                        .collect();
                    if !hooks.is_empty() {
                        let cm = &self.commutative[op.name_arc()];
                        let edges = cm.edge_labels(a.args());
                        for (part, t) in hooks {
                            cm.match_part(part, a.args(), &edges, sigma, &mut |s2| {
                                self.advance(t, 1, stack, s2, visit)
                            })?;
                        }
                    }
                }
            }
            Term::Wildcard(_) => unreachable!("subjects are ground"),
        }

        for (label, &t) in state.transitions.range(Label::first_variable()..) {
            match label {
                Label::Dot { name, class } => {
                    if class.as_ref().is_none_or(|c| matches!(subject, Term::Symbol(s) if s.is_instance_of(c))) {
                        let value = Binding::Single(subject.clone());
                        self.bind_advance(t, 1, name.as_ref(), value, stack, sigma, visit)?;
                    }
                }
                Label::Sequence { name, kind } => {
                    self.sequence(t, name.as_ref(), *kind, rest, stack, sigma, visit)?;
                }
                Label::AssociativeDot { name } => {
                    let Some(op) = top.op.filter(|op| op.is_associative()) else {
                        continue;
                    };
                    if let Some(Binding::Single(bound)) = name.as_ref().and_then(|n| sigma.get(n)) {
                        let k = match bound {
                            Term::Application(b) if b.op().name() == op.name() => {
                                if !rest.starts_with(b.args()) {
                                    continue;
                                }
                                b.args().len()
                            }
                            _ if rest[0] == *bound => 1,
                            _ => continue,
                        };
                        self.advance(t, k, stack, sigma, visit)?;
                        continue;
                    }
                    for k in 1..=rest.len() {
                        let value = if k == 1 {
                            rest[0].clone()
                        } else {
                            Term::raw_app(op, rest[..k].to_vec())
                        };
                        self.bind_advance(t, k, name.as_ref(), Binding::Single(value), stack, sigma, visit)?;
                    }
                }
                _ => {}
            }
        }
        ControlFlow::Continue(())
    }

    #[allow(clippy::too_many_arguments)]
    fn sequence<'s>(
        &self,
        t: usize,
        name: Option<&Name>,
        kind: WildcardKind,
        rest: &[Term],
        stack: &mut Vec<Frame<'s>>,
        sigma: &Substitution,
        visit: &mut FinalVisitor<'_>,
    ) -> ControlFlow<()> {
        if let Some(bound) = name.and_then(|n| sigma.get(n)) {
            let ts = bound.terms();
            if rest.starts_with(ts) {
                self.advance(t, ts.len(), stack, sigma, visit)?;
            }
            return ControlFlow::Continue(());
        }
        for k in kind.min_count()..=rest.len() {
            let value = Binding::Sequence(rest[..k].to_vec());
            self.bind_advance(t, k, name, value, stack, sigma, visit)?;
        }
        ControlFlow::Continue(())
    }

    /// Canonical text dump of the state table, nested nets included.
    pub(crate) fn dump(&self, out: &mut String) {
        for (i, s) in self.states.iter().enumerate() {
            let _ = write!(out, "{i}");
            if !s.finals.is_empty() {
                let _ = write!(out, " final{:?}", s.finals);
            }
            out.push('\n');
            for (label, t) in &s.transitions {
                let _ = writeln!(out, "  {label:?} -> {t}");
            }
        }
        for (op, cm) in &self.commutative {
            let _ = writeln!(out, "commutative {op} {{");
            cm.dump(out);
            out.push_str("}\n");
        }
    }
}
