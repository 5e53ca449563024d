//! Expression data model.
//!
//! A [`Term`] is a symbol, a wildcard, or an operation applied to an ordered
//! argument list. Applications built through [`Term::app`] or
//! [`canonicalize`] are kept in canonical form: nested applications of an
//! associative operation are flattened into their parent and the arguments
//! of commutative operations are sorted by the total term order
//! implemented by `Ord for Term`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared identifier.
pub type Name = Arc<str>;

/// An operation symbol together with its arity and attributes.
///
/// Two operations are the same operation iff their names are equal; a
/// [`Registry`](crate::Registry) guarantees names are unique.
#[derive(Debug, Clone)]
pub struct Operation {
    name: Name,
    arity: usize,
    variadic: bool,
    associative: bool,
    commutative: bool,
}

impl Operation {
    pub fn new(
        name: &str,
        arity: usize,
        variadic: bool,
        associative: bool,
        commutative: bool,
    ) -> Result<Arc<Self>> {
        if associative && !variadic {
            return Err(Error::Signature(format!(
                "associative operation `{name}` must be variadic"
            )));
        }
        Ok(Arc::new(Operation {
            name: name.into(),
            arity,
            variadic,
            associative,
            commutative,
        }))
    }

    /// Variadic, neither associative nor commutative.
    pub fn plain(name: &str) -> Arc<Self> {
        Arc::new(Operation {
            name: name.into(),
            arity: 0,
            variadic: true,
            associative: false,
            commutative: false,
        })
    }

    /// Non-variadic operation taking exactly `arity` arguments.
    pub fn fixed(name: &str, arity: usize) -> Arc<Self> {
        Arc::new(Operation {
            name: name.into(),
            arity,
            variadic: false,
            associative: false,
            commutative: false,
        })
    }

    /// Variadic operation with the given attributes.
    pub fn variadic(name: &str, associative: bool, commutative: bool) -> Arc<Self> {
        Arc::new(Operation {
            name: name.into(),
            arity: 0,
            variadic: true,
            associative,
            commutative,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn name_arc(&self) -> &Name {
        &self.name
    }

    /// Minimum argument count (exact count when not variadic).
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_variadic(&self) -> bool {
        self.variadic
    }

    pub fn is_associative(&self) -> bool {
        self.associative
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    fn check_arity(&self, count: usize) -> Result<()> {
        let ok = if self.variadic {
            count >= self.arity
        } else {
            count == self.arity
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Malformed {
                op: self.name.to_string(),
                expected: if self.variadic {
                    format!("at least {}", self.arity)
                } else {
                    format!("exactly {}", self.arity)
                },
                found: count,
            })
        }
    }
}

impl PartialEq for Operation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Operation {}

/// A constant symbol.
///
/// `classes` holds the symbol's class followed by its ancestors, so class
/// restrictions can be checked without consulting the registry. Equality,
/// ordering and hashing only look at the name.
#[derive(Debug, Clone)]
pub struct Symbol {
    name: Name,
    classes: Arc<[Name]>,
    properties: Arc<BTreeSet<Name>>,
}

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol {
            name: name.into(),
            classes: Arc::from(Vec::new()),
            properties: Arc::default(),
        }
    }

    pub fn with_classes(name: &str, classes: Vec<Name>, properties: BTreeSet<Name>) -> Self {
        Symbol {
            name: name.into(),
            classes: classes.into(),
            properties: Arc::new(properties),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn name_arc(&self) -> &Name {
        &self.name
    }

    /// Most specific class of the symbol.
    pub fn class_tag(&self) -> Option<&str> {
        self.classes.first().map(|c| &**c)
    }

    /// Class followed by its ancestors.
    pub fn class_chain(&self) -> &[Name] {
        &self.classes
    }

    /// True if the symbol's class is `class` or one of its subclasses.
    pub fn is_instance_of(&self, class: &str) -> bool {
        self.classes.iter().any(|c| &**c == class)
    }

    pub fn properties(&self) -> &BTreeSet<Name> {
        &self.properties
    }

    pub fn has_property(&self, property: &str) -> bool {
        self.properties.contains(property)
    }

    /// Integer value of numeric symbols such as `42` or `-3`.
    pub fn as_integer(&self) -> Option<i64> {
        self.name.parse().ok()
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Symbol {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WildcardKind {
    /// Exactly one term.
    Dot,
    /// One or more terms.
    Plus,
    /// Zero or more terms.
    Star,
}

impl WildcardKind {
    pub fn min_count(self) -> usize {
        match self {
            WildcardKind::Star => 0,
            _ => 1,
        }
    }

    pub fn is_sequence(self) -> bool {
        self != WildcardKind::Dot
    }

    pub fn underscores(self) -> &'static str {
        match self {
            WildcardKind::Dot => "_",
            WildcardKind::Plus => "__",
            WildcardKind::Star => "___",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wildcard {
    kind: WildcardKind,
    name: Option<Name>,
    class: Option<Name>,
}

impl Wildcard {
    pub fn new(kind: WildcardKind, name: Option<&str>) -> Self {
        Wildcard {
            kind,
            name: name.map(Name::from),
            class: None,
        }
    }

    /// A dot wildcard restricted to symbols of `class` (or a subclass).
    pub fn symbol(name: Option<&str>, class: &str) -> Self {
        Wildcard {
            kind: WildcardKind::Dot,
            name: name.map(Name::from),
            class: Some(class.into()),
        }
    }

    pub fn kind(&self) -> WildcardKind {
        self.kind
    }

    pub fn name(&self) -> Option<&Name> {
        self.name.as_ref()
    }

    pub fn class(&self) -> Option<&Name> {
        self.class.as_ref()
    }

    /// Whether `term` satisfies the class restriction (always true if none).
    pub fn admits(&self, term: &Term) -> bool {
        match &self.class {
            None => true,
            Some(class) => matches!(term, Term::Symbol(s) if s.is_instance_of(class)),
        }
    }
}

#[derive(Debug)]
pub struct Application {
    op: Arc<Operation>,
    args: Vec<Term>,
    ground: bool,
}

impl Application {
    pub fn op(&self) -> &Arc<Operation> {
        &self.op
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }
}

#[derive(Debug, Clone)]
pub enum Term {
    Symbol(Arc<Symbol>),
    Wildcard(Arc<Wildcard>),
    Application(Arc<Application>),
}

impl Term {
    /// Plain symbol without class or properties.
    pub fn sym(name: &str) -> Term {
        Term::Symbol(Arc::new(Symbol::new(name)))
    }

    pub fn symbol(symbol: Symbol) -> Term {
        Term::Symbol(Arc::new(symbol))
    }

    pub fn wildcard(w: Wildcard) -> Term {
        Term::Wildcard(Arc::new(w))
    }

    pub fn dot(name: &str) -> Term {
        Term::wildcard(Wildcard::new(WildcardKind::Dot, Some(name)))
    }

    pub fn plus(name: &str) -> Term {
        Term::wildcard(Wildcard::new(WildcardKind::Plus, Some(name)))
    }

    pub fn star(name: &str) -> Term {
        Term::wildcard(Wildcard::new(WildcardKind::Star, Some(name)))
    }

    pub fn anonymous(kind: WildcardKind) -> Term {
        Term::wildcard(Wildcard::new(kind, None))
    }

    /// Builds an application from already canonical arguments and
    /// canonicalizes the top level (flatten, sort, arity check).
    pub fn app(op: &Arc<Operation>, args: Vec<Term>) -> Result<Term> {
        let args = normalize_args(op, args);
        if !args.iter().any(Term::is_sequence_wildcard) {
            op.check_arity(args.len())?;
        }
        Ok(Term::raw_app(op, args))
    }

    /// Builds an application verbatim, without canonicalization or arity
    /// checks. Use [`canonicalize`] to bring the result into canonical form.
    pub fn raw_app(op: &Arc<Operation>, args: Vec<Term>) -> Term {
        let ground = args.iter().all(Term::is_ground);
        Term::Application(Arc::new(Application {
            op: op.clone(),
            args,
            ground,
        }))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Symbol(_) => true,
            Term::Wildcard(_) => false,
            Term::Application(a) => a.ground,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            Term::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_wildcard(&self) -> Option<&Wildcard> {
        match self {
            Term::Wildcard(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_application(&self) -> Option<&Application> {
        match self {
            Term::Application(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_sequence_wildcard(&self) -> bool {
        matches!(self, Term::Wildcard(w) if w.kind.is_sequence())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Application(a) => 1 + a.args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// Preorder iterator over all subterms, including `self`.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a Term>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a Term;

    fn next(&mut self) -> Option<&'a Term> {
        let t = self.stack.pop()?;
        if let Term::Application(a) = t {
            self.stack.extend(a.args.iter().rev());
        }
        Some(t)
    }
}

fn normalize_args(op: &Operation, args: Vec<Term>) -> Vec<Term> {
    let mut args = if op.associative
        && args
            .iter()
            .any(|a| matches!(a, Term::Application(c) if c.op.name == op.name))
    {
        let mut flat = Vec::with_capacity(args.len() + 2);
        for a in args {
            match a {
                Term::Application(c) if c.op.name == op.name => flat.extend(c.args.iter().cloned()),
                other => flat.push(other),
            }
        }
        flat
    } else {
        args
    };
    if op.commutative {
        args.sort();
    }
    args
}

/// Returns the canonical form of `t`: associative applications are
/// flattened bottom-up and commutative argument lists sorted.
pub fn canonicalize(t: &Term) -> Result<Term> {
    match t {
        Term::Application(a) => {
            let args = a
                .args
                .iter()
                .map(canonicalize)
                .collect::<Result<Vec<_>>>()?;
            Term::app(&a.op, args)
        }
        _ => Ok(t.clone()),
    }
}

/// Named wildcards of `t` with their multiplicity.
pub fn variables_of(t: &Term) -> BTreeMap<(Name, WildcardKind), usize> {
    let mut vars = BTreeMap::new();
    for sub in t.preorder() {
        if let Term::Wildcard(w) = sub {
            if let Some(name) = &w.name {
                *vars.entry((name.clone(), w.kind)).or_insert(0) += 1;
            }
        }
    }
    vars
}

impl Term {
    fn rank(&self) -> u8 {
        match self {
            Term::Symbol(_) => 0,
            Term::Application(_) => 1,
            Term::Wildcard(_) => 2,
        }
    }
}

/// The total term order: symbols before applications before wildcards;
/// symbols by name; applications by operation name, then argument count,
/// then arguments lexicographically; wildcards by kind, name, class.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Symbol(a), Term::Symbol(b)) => a.name.cmp(&b.name),
            (Term::Application(a), Term::Application(b)) => {
                if Arc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                a.op.name
                    .cmp(&b.op.name)
                    .then(a.args.len().cmp(&b.args.len()))
                    .then_with(|| a.args.cmp(&b.args))
            }
            (Term::Wildcard(a), Term::Wildcard(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Symbol(a), Term::Symbol(b)) => a.name == b.name,
            (Term::Application(a), Term::Application(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.op.name == b.op.name && a.ground == b.ground && a.args == b.args)
            }
            (Term::Wildcard(a), Term::Wildcard(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Term::Symbol(s) => {
                0u8.hash(state);
                s.name.hash(state);
            }
            Term::Application(a) => {
                1u8.hash(state);
                a.op.name.hash(state);
                a.args.hash(state);
            }
            Term::Wildcard(w) => {
                2u8.hash(state);
                w.hash(state);
            }
        }
    }
}

impl fmt::Display for Wildcard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            f.write_str(name)?;
        }
        f.write_str(self.kind.underscores())?;
        if let Some(class) = &self.class {
            write!(f, ":{class}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Symbol(s) => f.write_str(&s.name),
            Term::Wildcard(w) => w.fmt(f),
            Term::Application(a) => {
                write!(f, "{}(", a.op.name)?;
                for (i, arg) in a.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    arg.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}
