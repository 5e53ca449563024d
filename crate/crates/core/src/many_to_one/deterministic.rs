use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::registry::Registry;
use crate::substitution::{Binding, Substitution};
use crate::term::{Name, Term};

/// Default limit on the number of states of a [`DeterministicNet`].
pub const DEFAULT_STATE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Symbol(Name),
    Op(Name, usize),
    Var { slot: usize, class: Option<Name> },
}

/// Input event as seen by a state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Key {
    Symbol(Name),
    /// A symbol whose name has no transition, keyed by the first class of
    /// its class chain that has one.
    Class(Name),
    /// Descend into an application.
    Op(Name, usize),
    /// Consume a whole subterm.
    Default,
}

/// Pattern `pattern` has matched up to token `pos`, after first skipping
/// `skip` whole subterms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Item {
    pattern: usize,
    pos: usize,
    skip: usize,
}

#[derive(Debug, Clone)]
struct Transition {
    target: usize,
    /// `(pattern, slot)` pairs bound to the subterm consumed here.
    binds: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Default)]
struct DState {
    transitions: BTreeMap<Key, Transition>,
    accepting: Vec<usize>,
}

/// Deterministic discrimination net for syntactic patterns.
///
/// States are sets of pattern positions; every subject node triggers at
/// most one transition, so matching is a single pass without
/// backtracking. Variables bound to compound terms skip the whole subterm
/// unless another pattern in the same state needs to look inside it. The
/// net can grow exponentially with the pattern count; construction stops
/// with [`Error::NetTooLarge`] past the state budget.
#[derive(Debug, Clone)]
pub struct DeterministicNet {
    states: Vec<DState>,
    patterns: Vec<Pattern>,
    slots: Vec<Vec<Option<Name>>>,
}

struct Builder<'a> {
    tokens: Vec<Vec<Token>>,
    registry: &'a Registry,
}

impl Builder<'_> {
    fn tokens_of(t: &Term, out: &mut Vec<Token>, slots: &mut Vec<Option<Name>>) {
        match t {
            Term::Symbol(s) => out.push(Token::Symbol(s.name_arc().clone())),
            Term::Wildcard(w) => {
                out.push(Token::Var {
                    slot: slots.len(),
                    class: w.class().cloned(),
                });
                slots.push(w.name().cloned());
            }
            Term::Application(a) => {
                out.push(Token::Op(a.op().name_arc().clone(), a.args().len()));
                for arg in a.args() {
                    Self::tokens_of(arg, out, slots);
                }
            }
        }
    }

    fn current(&self, item: &Item) -> Option<&Token> {
        if item.skip > 0 {
            None
        } else {
            self.tokens[item.pattern].get(item.pos)
        }
    }

    fn keys(&self, items: &[Item]) -> BTreeSet<Key> {
        let mut keys = BTreeSet::from([Key::Default]);
        for it in items {
            match self.current(it) {
                Some(Token::Symbol(n)) => {
                    keys.insert(Key::Symbol(n.clone()));
                }
                Some(Token::Op(n, k)) => {
                    keys.insert(Key::Op(n.clone(), *k));
                }
                Some(Token::Var { class: Some(c), .. }) => {
                    keys.insert(Key::Class(c.clone()));
                }
                _ => {}
            }
        }
        keys
    }

    /// Classes a symbol consumed under `key` is known to belong to.
    fn classes(&self, key: &Key) -> Vec<Name> {
        match key {
            Key::Symbol(n) => match self.registry.symbol(n) {
                Term::Symbol(s) => s.class_chain().to_vec(),
                _ => Vec::new(),
            },
            Key::Class(c) => self.registry.class_chain(c),
            _ => Vec::new(),
        }
    }

    fn step(&self, items: &[Item], key: &Key) -> (Vec<Item>, Vec<(usize, usize)>) {
        let classes = self.classes(key);
        let mut next = Vec::new();
        let mut binds = Vec::new();
        for it in items {
            if it.skip > 0 {
                let skip = match key {
                    Key::Op(_, k) => it.skip - 1 + k,
                    _ => it.skip - 1,
                };
                next.push(Item { skip, ..*it });
                continue;
            }
            let advanced = Item {
                pos: it.pos + 1,
                ..*it
            };
            match (self.tokens[it.pattern].get(it.pos), key) {
                (Some(Token::Symbol(n)), Key::Symbol(m)) if n == m => next.push(advanced),
                (Some(Token::Op(n, k)), Key::Op(m, j)) if n == m && k == j => next.push(advanced),
                (Some(Token::Var { slot, class }), _) => {
                    let admitted = match class {
                        None => true,
                        Some(c) => matches!(key, Key::Symbol(_) | Key::Class(_)) && classes.contains(c),
                    };
                    if admitted {
                        binds.push((it.pattern, *slot));
                        let skip = match key {
                            Key::Op(_, k) => *k,
                            _ => 0,
                        };
                        next.push(Item { skip, ..advanced });
                    }
                }
                _ => {}
            }
        }
        next.sort();
        next.dedup();
        (next, binds)
    }
}

impl DeterministicNet {
    /// Builds the net with [`DEFAULT_STATE_BUDGET`]. `registry` supplies the
    /// class hierarchy and the classes of symbols named in patterns.
    pub fn build(patterns: Vec<Pattern>, registry: &Registry) -> Result<Self> {
        Self::build_with_budget(patterns, registry, DEFAULT_STATE_BUDGET)
    }

    pub fn build_with_budget(patterns: Vec<Pattern>, registry: &Registry, budget: usize) -> Result<Self> {
        let mut tokens = Vec::with_capacity(patterns.len());
        let mut slots = Vec::with_capacity(patterns.len());
        for p in &patterns {
            if !p.is_syntactic() {
                return Err(Error::UnsupportedPattern(format!(
                    "`{}` is not syntactic; the deterministic net only supports patterns without \
                     sequence wildcards, associative or commutative operations and constraints",
                    p.expression()
                )));
            }
            let (mut t, mut s) = (Vec::new(), Vec::new());
            Builder::tokens_of(p.expression(), &mut t, &mut s);
            tokens.push(t);
            slots.push(s);
        }
        let b = Builder { tokens, registry };

        let root: Vec<Item> = (0..patterns.len())
            .map(|pattern| Item {
                pattern,
                pos: 0,
                skip: 0,
            })
            .collect();
        let mut ids: HashMap<Vec<Item>, usize> = HashMap::new();
        let mut sets: Vec<Vec<Item>> = Vec::new();
        let mut states: Vec<DState> = Vec::new();
        let mut queue = VecDeque::new();
        ids.insert(root.clone(), 0);
        sets.push(root);
        states.push(DState::default());
        queue.push_back(0);

        while let Some(s) = queue.pop_front() {
            let items = sets[s].clone();
            states[s].accepting = items
                .iter()
                .filter(|it| it.skip == 0 && it.pos == b.tokens[it.pattern].len())
                .map(|it| it.pattern)
                .collect();
            for key in b.keys(&items) {
                let (next, binds) = b.step(&items, &key);
                if next.is_empty() {
                    continue;
                }
                let target = match ids.get(&next) {
                    Some(&t) => t,
                    None => {
                        if states.len() >= budget {
                            return Err(Error::NetTooLarge { limit: budget });
                        }
                        let t = states.len();
                        ids.insert(next.clone(), t);
                        sets.push(next);
                        states.push(DState::default());
                        queue.push_back(t);
                        t
                    }
                };
                states[s].transitions.insert(key, Transition { target, binds });
            }
        }
        Ok(DeterministicNet {
            states,
            patterns,
            slots,
        })
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Feeds each `(pattern id, substitution)` to `visit`, in pattern order.
    pub fn for_each_match(
        &self,
        subject: &Term,
        visit: &mut dyn FnMut(usize, &Substitution) -> ControlFlow<()>,
    ) -> Result<()> {
        if !subject.is_ground() {
            return Err(Error::InvalidSubject(format!(
                "subject `{subject}` contains wildcards"
            )));
        }
        let nodes: Vec<&Term> = subject.preorder().collect();
        let mut ends = vec![0usize; nodes.len()];
        for i in (0..nodes.len()).rev() {
            ends[i] = match nodes[i] {
                Term::Application(a) => {
                    let mut j = i + 1;
                    for _ in a.args() {
                        j = ends[j];
                    }
                    j
                }
                _ => i + 1,
            };
        }

        let mut state = 0;
        let mut log: Vec<(usize, usize, usize)> = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let transitions = &self.states[state].transitions;
            let (tr, next) = match nodes[i] {
                Term::Application(a) => {
                    match transitions.get(&Key::Op(a.op().name_arc().clone(), a.args().len())) {
                        Some(tr) => (Some(tr), i + 1),
                        None => (transitions.get(&Key::Default), ends[i]),
                    }
                }
                Term::Symbol(s) => {
                    let tr = transitions
                        .get(&Key::Symbol(s.name_arc().clone()))
                        .or_else(|| {
                            s.class_chain()
                                .iter()
                                .find_map(|c| transitions.get(&Key::Class(c.clone())))
                        })
                        .or_else(|| transitions.get(&Key::Default));
                    (tr, i + 1)
                }
                Term::Wildcard(_) => unreachable!("subjects are ground"),
            };
            let Some(tr) = tr else {
                return Ok(());
            };
            log.extend(tr.binds.iter().map(|&(p, slot)| (p, slot, i)));
            state = tr.target;
            i = next;
        }

        for &pid in &self.states[state].accepting {
            let names = &self.slots[pid];
            let mut sigma = Substitution::new();
            let mut ok = true;
            for &(p, slot, node) in &log {
                if p != pid {
                    continue;
                }
                let Some(name) = &names[slot] else { continue };
                match sigma.try_bind(name, Binding::Single(nodes[node].clone())) {
                    Some(next) => sigma = next.into_owned(),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if let ControlFlow::Break(()) = visit(pid, &sigma) {
                    break;
                }
            }
        }
        Ok(())
    }

    pub fn matches(&self, subject: &Term) -> Result<Vec<(usize, Substitution)>> {
        let mut out = Vec::new();
        self.for_each_match(subject, &mut |id, s| {
            out.push((id, s.clone()));
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}
