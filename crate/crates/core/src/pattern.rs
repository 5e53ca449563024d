use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::term::{canonicalize, variables_of, Name, Term, WildcardKind};

type Predicate = dyn Fn(&Substitution) -> bool + Send + Sync;

/// A pure predicate over the bindings of `variables`.
///
/// Matchers evaluate a constraint once all of its variables are bound.
#[derive(Clone)]
pub struct Constraint {
    variables: BTreeSet<Name>,
    predicate: Arc<Predicate>,
    source: Option<String>,
}

impl Constraint {
    pub fn new<I, S, F>(variables: I, predicate: F) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
        F: Fn(&Substitution) -> bool + Send + Sync + 'static,
    {
        Constraint {
            variables: variables.into_iter().map(|v| Name::from(v.as_ref())).collect(),
            predicate: Arc::new(predicate),
            source: None,
        }
    }

    /// Attaches the textual form the constraint was parsed from, which makes
    /// it serializable.
    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn variables(&self) -> &BTreeSet<Name> {
        &self.variables
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn check(&self, subst: &Substitution) -> bool {
        (self.predicate)(subst)
    }

    fn is_ready(&self, subst: &Substitution) -> bool {
        self.variables.iter().all(|v| subst.contains(v))
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Constraint")
            .field("variables", &self.variables)
            .field("source", &self.source)
            .finish()
    }
}

/// Evaluates the constraints that become fully bound when going from
/// `before` to `after`.
pub(crate) fn admits(constraints: &[Constraint], before: &Substitution, after: &Substitution) -> bool {
    constraints
        .iter()
        .all(|c| !c.is_ready(after) || c.is_ready(before) || c.check(after))
}

/// Evaluates every constraint against a complete substitution.
pub(crate) fn satisfies_all(constraints: &[Constraint], subst: &Substitution) -> bool {
    constraints.iter().all(|c| c.check(subst))
}

/// A term with wildcards plus constraints on its variables.
#[derive(Clone, Debug)]
pub struct Pattern {
    expression: Term,
    constraints: Vec<Constraint>,
    kinds: BTreeMap<Name, WildcardKind>,
}

impl Pattern {
    pub fn new(expression: Term) -> Result<Self> {
        let expression = canonicalize(&expression)?;
        if expression.is_sequence_wildcard() {
            return Err(Error::InvalidPattern(format!(
                "sequence wildcard `{expression}` cannot be the whole pattern"
            )));
        }
        let mut kinds = BTreeMap::new();
        for (name, kind) in variables_of(&expression).into_keys() {
            if let Some(prev) = kinds.insert(name.clone(), kind) {
                return Err(Error::InvalidPattern(format!(
                    "variable `{name}` is used as both {prev:?} and {kind:?} wildcard"
                )));
            }
        }
        Ok(Pattern {
            expression,
            constraints: Vec::new(),
            kinds,
        })
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Result<Self> {
        if let Some(v) = constraint
            .variables
            .iter()
            .find(|v| !self.kinds.contains_key(*v))
        {
            return Err(Error::InvalidPattern(format!(
                "constraint refers to `{v}`, which does not occur in `{}`",
                self.expression
            )));
        }
        self.constraints.push(constraint);
        Ok(self)
    }

    pub fn with_constraints(self, constraints: impl IntoIterator<Item = Constraint>) -> Result<Self> {
        constraints
            .into_iter()
            .try_fold(self, |p, c| p.with_constraint(c))
    }

    pub fn expression(&self) -> &Term {
        &self.expression
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Named variables and their wildcard kinds.
    pub fn variables(&self) -> &BTreeMap<Name, WildcardKind> {
        &self.kinds
    }

    /// True if the pattern uses no sequence wildcards, no associative or
    /// commutative operations and no constraints. Such patterns have at
    /// most one match.
    pub fn is_syntactic(&self) -> bool {
        self.constraints.is_empty()
            && self.expression.preorder().all(|t| match t {
                Term::Wildcard(w) => w.kind() == WildcardKind::Dot,
                Term::Application(a) => !a.op().is_associative() && !a.op().is_commutative(),
                Term::Symbol(_) => true,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Operation;

    #[test]
    fn syntactic_classification() {
        let f = Operation::plain("f");
        let p = Pattern::new(Term::app(&f, vec![Term::dot("x"), Term::sym("a")]).unwrap()).unwrap();
        assert!(p.is_syntactic());
        let p = Pattern::new(Term::app(&f, vec![Term::star("x")]).unwrap()).unwrap();
        assert!(!p.is_syntactic());
        let c = Operation::variadic("MyOp", false, true);
        let p = Pattern::new(Term::app(&c, vec![Term::dot("x")]).unwrap()).unwrap();
        assert!(!p.is_syntactic());
        let p = Pattern::new(Term::app(&f, vec![Term::dot("x")]).unwrap())
            .unwrap()
            .with_constraint(Constraint::new(["x"], |_| true))
            .unwrap();
        assert!(!p.is_syntactic());
    }

    #[test]
    fn invalid_patterns() {
        assert!(Pattern::new(Term::star("x")).is_err());
        let f = Operation::plain("f");
        let mixed = Term::app(&f, vec![Term::dot("x"), Term::star("x")]).unwrap();
        assert!(Pattern::new(mixed).is_err());
        let p = Pattern::new(Term::app(&f, vec![Term::dot("x")]).unwrap()).unwrap();
        assert!(p.with_constraint(Constraint::new(["y"], |_| true)).is_err());
    }
}
