use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{Name, Term, WildcardKind};

/// Value of a variable: dot variables bind a single term, sequence
/// variables an ordered list of terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Binding {
    Single(Term),
    Sequence(Vec<Term>),
}

impl Binding {
    pub fn as_single(&self) -> Option<&Term> {
        match self {
            Binding::Single(t) => Some(t),
            Binding::Sequence(_) => None,
        }
    }

    pub fn terms(&self) -> &[Term] {
        match self {
            Binding::Single(t) => std::slice::from_ref(t),
            Binding::Sequence(ts) => ts,
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Single(t) => t.fmt(f),
            Binding::Sequence(ts) => {
                f.write_str("(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    t.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Finite map from variable names to bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    bindings: BTreeMap<Name, Binding>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Binding)> {
        self.bindings.iter()
    }

    /// Inserts or overwrites a binding.
    pub fn insert(&mut self, name: impl Into<Name>, binding: Binding) {
        self.bindings.insert(name.into(), binding);
    }

    pub fn with(mut self, name: &str, binding: Binding) -> Self {
        self.insert(name, binding);
        self
    }

    /// Adds `name ↦ value` unless `name` is bound to something else.
    /// Borrows `self` when the binding is already present.
    pub fn try_bind(&self, name: &Name, value: Binding) -> Option<Cow<'_, Substitution>> {
        match self.bindings.get(name) {
            Some(existing) if *existing == value => Some(Cow::Borrowed(self)),
            Some(_) => None,
            None => {
                let mut next = self.clone();
                next.bindings.insert(name.clone(), value);
                Some(Cow::Owned(next))
            }
        }
    }

    /// Union of two substitutions, `None` if some variable is bound to
    /// different values.
    pub fn merge(&self, other: &Substitution) -> Option<Substitution> {
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (k, v) in &small.bindings {
            match out.bindings.get(k) {
                Some(existing) if existing != v => return None,
                Some(_) => {}
                None => {
                    out.bindings.insert(k.clone(), v.clone());
                }
            }
        }
        Some(out)
    }

    /// True if `merge` would succeed.
    pub fn is_compatible(&self, other: &Substitution) -> bool {
        other
            .bindings
            .iter()
            .all(|(k, v)| self.bindings.get(k).is_none_or(|e| e == v))
    }
}

impl FromIterator<(Name, Binding)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Name, Binding)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Canonical text form `{x -> a, y -> (b, c)}`, sorted by variable name.
impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} -> {v}")?;
        }
        f.write_str("}")
    }
}

/// Replaces the wildcards of `pattern` by their bindings, splicing sequence
/// bindings into the surrounding argument list, and canonicalizes.
pub fn substitute(pattern: &Term, subst: &Substitution) -> Result<Term> {
    match substitute_items(pattern, subst)? {
        Items::One(t) => Ok(t),
        Items::Many(ts) => Err(Error::Shape(format!(
            "sequence of {} terms where a single term is required",
            ts.len()
        ))),
    }
}

enum Items {
    One(Term),
    Many(Vec<Term>),
}

fn substitute_items(t: &Term, subst: &Substitution) -> Result<Items> {
    match t {
        Term::Symbol(_) => Ok(Items::One(t.clone())),
        Term::Wildcard(w) => {
            let name = w
                .name()
                .ok_or_else(|| Error::IncompleteSubstitution(w.to_string()))?;
            let binding = subst
                .get(name)
                .ok_or_else(|| Error::IncompleteSubstitution(name.to_string()))?;
            match (w.kind(), binding) {
                (WildcardKind::Dot, Binding::Single(v)) => Ok(Items::One(v.clone())),
                (WildcardKind::Dot, Binding::Sequence(_)) => Err(Error::Shape(format!(
                    "dot variable `{name}` is bound to a sequence"
                ))),
                (_, Binding::Sequence(vs)) => Ok(Items::Many(vs.clone())),
                (_, Binding::Single(v)) => Ok(Items::Many(vec![v.clone()])),
            }
        }
        Term::Application(a) => {
            if a.args().iter().all(Term::is_ground) {
                return Ok(Items::One(t.clone()));
            }
            let mut args = Vec::with_capacity(a.args().len());
            for arg in a.args() {
                match substitute_items(arg, subst)? {
                    Items::One(x) => args.push(x),
                    Items::Many(xs) => args.extend(xs),
                }
            }
            Ok(Items::One(Term::app(a.op(), args)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Operation;

    fn s(n: &str) -> Term {
        Term::sym(n)
    }

    #[test]
    fn substitute_examples() {
        let f = Operation::plain("f");
        let p = Term::app(&f, vec![Term::dot("x")]).unwrap();
        let sub = Substitution::new().with("x", Binding::Single(s("a")));
        assert_eq!(substitute(&p, &sub).unwrap(), Term::app(&f, vec![s("a")]).unwrap());

        let list = Operation::plain("list");
        let p = Term::app(&list, vec![Term::dot("x"), Term::star("y")]).unwrap();
        let sub = Substitution::new()
            .with("x", Binding::Single(s("1")))
            .with("y", Binding::Sequence(vec![s("2"), s("3")]));
        assert_eq!(
            substitute(&p, &sub).unwrap().to_string(),
            "list(1, 2, 3)"
        );

        let sub = Substitution::new().with("x", Binding::Single(s("a")));
        assert_eq!(substitute(&Term::dot("x"), &sub).unwrap(), s("a"));
    }

    #[test]
    fn substitute_errors() {
        let f = Operation::plain("f");
        let p = Term::app(&f, vec![Term::dot("x")]).unwrap();
        assert!(matches!(
            substitute(&p, &Substitution::new()),
            Err(Error::IncompleteSubstitution(_))
        ));
        let sub = Substitution::new().with("y", Binding::Sequence(vec![s("a"), s("b")]));
        assert!(matches!(substitute(&Term::star("y"), &sub), Err(Error::Shape(_))));
    }

    #[test]
    fn substitute_flattens_associative() {
        let op = Operation::variadic("MyOp", true, true);
        let p = Term::app(&op, vec![Term::dot("x"), s("2")]).unwrap();
        let inner = Term::app(&op, vec![s("0"), s("1")]).unwrap();
        let sub = Substitution::new().with("x", Binding::Single(inner));
        assert_eq!(substitute(&p, &sub).unwrap().to_string(), "MyOp(0, 1, 2)");
    }

    #[test]
    fn merge_examples() {
        let xa = Substitution::new().with("x", Binding::Single(s("a")));
        let yb = Substitution::new().with("y", Binding::Single(s("b")));
        let xb = Substitution::new().with("x", Binding::Single(s("b")));
        let m = xa.merge(&yb).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(xa.merge(&xa).unwrap(), xa);
        assert!(xa.merge(&xb).is_none());
        assert!(!xa.is_compatible(&xb));
    }

    #[test]
    fn display_sorted() {
        let sub = Substitution::new()
            .with("y", Binding::Sequence(vec![s("b"), s("c")]))
            .with("x", Binding::Single(s("a")))
            .with("z", Binding::Sequence(vec![]));
        assert_eq!(sub.to_string(), "{x -> a, y -> (b, c), z -> ()}");
    }
}
