use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::term::{Name, Operation, Symbol, Term};

/// Operation signatures, symbol classes and symbol declarations.
///
/// Built once, then shared read-only. Operations that are not registered
/// default to variadic, non-associative, non-commutative.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    operations: BTreeMap<Name, Arc<Operation>>,
    classes: BTreeMap<Name, Option<Name>>,
    symbols: BTreeMap<Name, Symbol>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_operation(&mut self, op: Arc<Operation>) -> Result<Arc<Operation>> {
        if self.operations.contains_key(op.name()) {
            return Err(Error::Signature(format!(
                "operation `{}` declared twice",
                op.name()
            )));
        }
        self.operations.insert(op.name_arc().clone(), op.clone());
        Ok(op)
    }

    pub fn add_class(&mut self, name: &str, parent: Option<&str>) -> Result<()> {
        if self.classes.contains_key(name) {
            return Err(Error::Signature(format!("class `{name}` declared twice")));
        }
        if let Some(p) = parent {
            if !self.classes.contains_key(p) {
                return Err(Error::Signature(format!(
                    "class `{name}` extends undeclared class `{p}`"
                )));
            }
        }
        self.classes.insert(name.into(), parent.map(Name::from));
        Ok(())
    }

    pub fn add_symbol(
        &mut self,
        name: &str,
        class: Option<&str>,
        properties: impl IntoIterator<Item = impl AsRef<str>>,
    ) -> Result<Term> {
        if self.symbols.contains_key(name) {
            return Err(Error::Signature(format!("symbol `{name}` declared twice")));
        }
        let chain = match class {
            Some(c) => {
                if !self.classes.contains_key(c) {
                    return Err(Error::Signature(format!(
                        "symbol `{name}` has undeclared class `{c}`"
                    )));
                }
                self.class_chain(c)
            }
            None => Vec::new(),
        };
        let props: BTreeSet<Name> = properties.into_iter().map(|p| Name::from(p.as_ref())).collect();
        let sym = Symbol::with_classes(name, chain, props);
        self.symbols.insert(name.into(), sym.clone());
        Ok(Term::symbol(sym))
    }

    pub fn operation(&self, name: &str) -> Option<&Arc<Operation>> {
        self.operations.get(name)
    }

    /// The registered operation, or the default signature for `name`.
    pub fn operation_or_default(&self, name: &str) -> Arc<Operation> {
        self.operations
            .get(name)
            .cloned()
            .unwrap_or_else(|| Operation::plain(name))
    }

    pub fn operations(&self) -> impl Iterator<Item = &Arc<Operation>> {
        self.operations.values()
    }

    /// The declared symbol, or a plain symbol for `name`.
    pub fn symbol(&self, name: &str) -> Term {
        match self.symbols.get(name) {
            Some(s) => Term::symbol(s.clone()),
            None => Term::sym(name),
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.classes.contains_key(name)
    }

    /// Declared classes with their parents, in name order.
    pub fn classes(&self) -> impl Iterator<Item = (&Name, Option<&Name>)> {
        self.classes.iter().map(|(k, v)| (k, v.as_ref()))
    }

    /// Declared classes ordered so that parents precede their children.
    pub fn classes_topological(&self) -> Vec<(Name, Option<Name>)> {
        let mut out: Vec<(Name, Option<Name>)> = Vec::new();
        let mut placed: BTreeSet<Name> = BTreeSet::new();
        while out.len() < self.classes.len() {
            for (name, parent) in &self.classes {
                if placed.contains(name) {
                    continue;
                }
                if parent.as_ref().is_none_or(|p| placed.contains(p)) {
                    placed.insert(name.clone());
                    out.push((name.clone(), parent.clone()));
                }
            }
        }
        out
    }

    /// `class` followed by its ancestors.
    pub fn class_chain(&self, class: &str) -> Vec<Name> {
        let mut chain: Vec<Name> = vec![class.into()];
        let mut cur = self.classes.get(class).cloned().flatten();
        while let Some(c) = cur {
            if chain.contains(&c) {
                break;
            }
            cur = self.classes.get(&c).cloned().flatten();
            chain.push(c);
        }
        chain
    }

    /// True if `class` equals `ancestor` or transitively extends it.
    pub fn is_subclass(&self, class: &str, ancestor: &str) -> bool {
        self.class_chain(class).iter().any(|c| &**c == ancestor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subclass_chain() {
        let mut r = Registry::new();
        r.add_class("Matrix", None).unwrap();
        r.add_class("Square", Some("Matrix")).unwrap();
        r.add_class("Triangular", Some("Square")).unwrap();
        assert_eq!(r.class_chain("Triangular").len(), 3);
        assert!(r.is_subclass("Triangular", "Matrix"));
        assert!(!r.is_subclass("Matrix", "Square"));
        let m = r.add_symbol("M3", Some("Triangular"), ["triangular"]).unwrap();
        let sym = m.as_symbol().unwrap();
        assert!(sym.is_instance_of("Matrix"));
        assert!(sym.has_property("triangular"));
        assert_eq!(r.classes_topological()[0].0.as_ref(), "Matrix");
    }

    #[test]
    fn duplicate_and_undeclared() {
        let mut r = Registry::new();
        r.add_operation(Operation::plain("f")).unwrap();
        assert!(r.add_operation(Operation::plain("f")).is_err());
        assert!(r.add_class("A", Some("B")).is_err());
        assert!(r.add_symbol("x", Some("Nope"), [""; 0]).is_err());
    }

    #[test]
    fn default_operation() {
        let r = Registry::new();
        let f = r.operation_or_default("f");
        assert!(f.is_variadic() && !f.is_associative() && !f.is_commutative());
    }
}
