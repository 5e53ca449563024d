//! Pattern matching and term rewriting for symbolic expressions.
//!
//! Supports associative and/or commutative operations, sequence wildcards
//! (`x__` one-or-more, `x___` zero-or-more), symbol-class restricted
//! wildcards and constraints. Three matchers are provided:
//!
//! * [`one_to_one`]: a single pattern against a single subject;
//! * [`ManyToOneMatcher`]: a pattern set compiled into a non-deterministic
//!   discrimination net, with nested bipartite matching for commutative
//!   operations;
//! * [`DeterministicNet`]: a deterministic discrimination net for
//!   syntactic pattern sets.
//!
//! ```
//! use termmatch::{parse_term, one_to_one, Pattern, Registry};
//!
//! let reg = Registry::new();
//! let subject = parse_term("list(1, 2, 3)", &reg).unwrap();
//! let pattern = Pattern::new(parse_term("list(x_, y___)", &reg).unwrap()).unwrap();
//! let matches = one_to_one::matches(&subject, &pattern).unwrap();
//! assert_eq!(matches[0].to_string(), "{x -> 1, y -> (2, 3)}");
//! ```

pub mod bench;
pub mod bipartite;
pub mod cli;
pub mod constraint_expr;
pub mod diophantine;
mod error;
pub mod many_to_one;
pub mod one_to_one;
mod pattern;
mod registry;
pub mod rewriting;
pub mod signature_file;
mod substitution;
pub mod syntax;
mod term;

pub use error::{Error, Result};
pub use many_to_one::{DeterministicNet, ManyToOneMatcher};
pub use pattern::{Constraint, Pattern};
pub use registry::Registry;
pub use substitution::{substitute, Binding, Substitution};
pub use syntax::{format_term, parse_term};
pub use term::{
    canonicalize, variables_of, Application, Name, Operation, Symbol, Term, Wildcard, WildcardKind,
};
