//! Many-to-one matching.
//!
//! [`ManyToOneMatcher`] compiles a pattern set into a non-deterministic
//! discrimination net that shares common preorder prefixes between
//! patterns; [`DeterministicNet`] is the deterministic variant for
//! syntactic pattern sets.

mod commutative;
mod deterministic;
mod net;
pub mod persist;

use std::collections::HashSet;
use std::ops::ControlFlow;

pub use deterministic::{DeterministicNet, DEFAULT_STATE_BUDGET};
pub use net::Label;

use crate::error::{Error, Result};
use crate::pattern::{satisfies_all, Pattern};
use crate::substitution::Substitution;
use crate::term::Term;
use net::Net;

/// A set of patterns matched simultaneously against one subject at a time.
///
/// ```
/// use termmatch::{parse_term, ManyToOneMatcher, Pattern, Registry};
///
/// let reg = Registry::new();
/// let mut matcher = ManyToOneMatcher::new();
/// for p in ["list(1)", "list(y_, 0)", "list(1, x___)"] {
///     matcher.add(Pattern::new(parse_term(p, &reg).unwrap()).unwrap());
/// }
/// let subject = parse_term("list(1, 0)", &reg).unwrap();
/// let found: Vec<String> = matcher
///     .matches(&subject)
///     .unwrap()
///     .into_iter()
///     .map(|(id, s)| format!("{id} {s}"))
///     .collect();
/// assert_eq!(found, ["1 {y -> 1}", "2 {x -> (0)}"]);
/// ```
#[derive(Debug, Clone, Default)]
pub struct ManyToOneMatcher {
    net: Net,
    patterns: Vec<Pattern>,
}

impl ManyToOneMatcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_patterns(patterns: impl IntoIterator<Item = Pattern>) -> Self {
        let mut m = Self::new();
        for p in patterns {
            m.add(p);
        }
        m
    }

    /// Adds a pattern and returns its id. Ids are dense, starting at 0.
    pub fn add(&mut self, pattern: Pattern) -> usize {
        let id = self.patterns.len();
        self.net.add(pattern.expression(), id);
        self.patterns.push(pattern);
        id
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Number of states in the outer net.
    pub fn state_count(&self) -> usize {
        self.net.states.len()
    }

    /// Number of commutative sub-matcher hooks, nested ones included.
    pub fn hook_count(&self) -> usize {
        self.net.hook_count()
    }

    /// Final-state labels reached by the preorder skeleton of pattern `id`.
    pub fn final_labels(&self) -> Vec<Vec<usize>> {
        self.net
            .states
            .iter()
            .filter(|s| !s.finals.is_empty())
            .map(|s| s.finals.clone())
            .collect()
    }

    /// Feeds every distinct `(pattern id, substitution)` pair to `visit`.
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
        let mut seen = HashSet::new();
        let _ = self.net.run_root(subject, &Substitution::new(), &mut |ids, s| {
            for &id in ids {
                if satisfies_all(self.patterns[id].constraints(), s) && seen.insert((id, s.clone())) {
                    visit(id, s)?;
                }
            }
            ControlFlow::Continue(())
        });
        Ok(())
    }

    /// All matches, sorted by pattern id and then substitution.
    pub fn matches(&self, subject: &Term) -> Result<Vec<(usize, Substitution)>> {
        let mut out = Vec::new();
        self.for_each_match(subject, &mut |id, s| {
            out.push((id, s.clone()));
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    /// Canonical text dump of the net, used to validate loaded files.
    pub(crate) fn dump(&self) -> String {
        let mut out = String::new();
        self.net.dump(&mut out);
        out
    }
}
