//! Textual constraints.
//!
//! ```text
//! expr    := atom (('&&' | 'and') atom)*
//! atom    := 'has_property' '(' ident ',' string ')'
//!          | value cmp value
//! value   := integer | ident | 'sum' '(' ident ')' | 'len' '(' ident ')'
//! cmp     := '<' | '<=' | '>' | '>=' | '==' | '!='
//! ```
//!
//! A variable used as a value must be bound to an integer symbol, except
//! on both sides of `==` and `!=`, which compare terms structurally.
//! `sum(x)` adds the integer symbols bound to `x`; `len(x)` is the number
//! of terms bound to `x`. A comparison whose operands are not integers is
//! false.
//!
//! ```
//! use termmatch::constraint_expr::ConstraintExpr;
//! use termmatch::{Binding, Substitution, Term};
//!
//! let c = ConstraintExpr::parse("sum(x) == 5 and len(x) > 1").unwrap().to_constraint();
//! let s = Substitution::new().with("x", Binding::Sequence(vec![Term::sym("2"), Term::sym("3")]));
//! assert!(c.check(&s));
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::pattern::Constraint;
use crate::substitution::{Binding, Substitution};
use crate::term::{Name, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Comparison {
    fn symbol(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
            Comparison::Eq => "==",
            Comparison::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Var(Name),
    Sum(Name),
    Len(Name),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Compare(Value, Comparison, Value),
    HasProperty(Name, String),
}

/// A parsed conjunction of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintExpr {
    atoms: Vec<Atom>,
}

enum Evaluated<'a> {
    Int(i64),
    Term(&'a Term),
    Terms(&'a [Term]),
}

fn integer(t: &Term) -> Option<i64> {
    t.as_symbol().and_then(|s| s.as_integer())
}

impl Value {
    fn variable(&self) -> Option<&Name> {
        match self {
            Value::Int(_) => None,
            Value::Var(n) | Value::Sum(n) | Value::Len(n) => Some(n),
        }
    }

    fn eval<'a>(&self, s: &'a Substitution) -> Option<Evaluated<'a>> {
        Some(match self {
            Value::Int(i) => Evaluated::Int(*i),
            Value::Var(n) => match s.get(n)? {
                Binding::Single(t) => integer(t).map_or(Evaluated::Term(t), Evaluated::Int),
                Binding::Sequence(ts) => Evaluated::Terms(ts),
            },
            Value::Sum(n) => Evaluated::Int(
                s.get(n)?
                    .terms()
                    .iter()
                    .map(integer)
                    .try_fold(0i64, |acc, v| acc.checked_add(v?))?,
            ),
            Value::Len(n) => Evaluated::Int(s.get(n)?.terms().len() as i64),
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Var(n) => write!(f, "{n}"),
            Value::Sum(n) => write!(f, "sum({n})"),
            Value::Len(n) => write!(f, "len({n})"),
        }
    }
}

impl Atom {
    fn holds(&self, s: &Substitution) -> bool {
        match self {
            Atom::HasProperty(v, p) => matches!(
                s.get(v),
                Some(Binding::Single(Term::Symbol(sym))) if sym.has_property(p)
            ),
            Atom::Compare(l, op, r) => {
                let (Some(a), Some(b)) = (l.eval(s), r.eval(s)) else {
                    return false;
                };
                match (a, b, op) {
                    (Evaluated::Int(a), Evaluated::Int(b), _) => match op {
                        Comparison::Lt => a < b,
                        Comparison::Le => a <= b,
                        Comparison::Gt => a > b,
                        Comparison::Ge => a >= b,
                        Comparison::Eq => a == b,
                        Comparison::Ne => a != b,
                    },
                    (Evaluated::Term(a), Evaluated::Term(b), Comparison::Eq) => a == b,
                    (Evaluated::Term(a), Evaluated::Term(b), Comparison::Ne) => a != b,
                    (Evaluated::Terms(a), Evaluated::Terms(b), Comparison::Eq) => a == b,
                    (Evaluated::Terms(a), Evaluated::Terms(b), Comparison::Ne) => a != b,
                    _ => false,
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::HasProperty(v, p) => write!(f, "has_property({v}, {p:?})"),
            Atom::Compare(l, op, r) => write!(f, "{l} {} {r}", op.symbol()),
        }
    }
}

impl fmt::Display for ConstraintExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" && ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl ConstraintExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Lexer { src, pos: 0 };
        let mut atoms = vec![p.atom()?];
        loop {
            p.skip_ws();
            if p.at_end() {
                break;
            }
            if !(p.eat("&&") || p.eat_word("and")) {
                return Err(p.error("expected `&&`, `and` or end of constraint"));
            }
            atoms.push(p.atom()?);
        }
        Ok(ConstraintExpr { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn variables(&self) -> BTreeSet<Name> {
        self.atoms
            .iter()
            .flat_map(|a| match a {
                Atom::HasProperty(v, _) => vec![v.clone()],
                Atom::Compare(l, _, r) => [l, r].into_iter().filter_map(Value::variable).cloned().collect(),
            })
            .collect()
    }

    pub fn holds(&self, s: &Substitution) -> bool {
        self.atoms.iter().all(|a| a.holds(s))
    }

    /// Converts to a [`Constraint`] whose source is the normalized text.
    pub fn to_constraint(&self) -> Constraint {
        let e = self.clone();
        let source = self.to_string();
        Constraint::new(self.variables(), move |s: &Substitution| e.holds(s)).with_source(source)
    }
}

/// Parses `src` straight into a [`Constraint`].
pub fn parse_constraint(src: &str) -> Result<Constraint> {
    ConstraintExpr::parse(src).map(|e| e.to_constraint())
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.src[..self.pos].chars().count() + 1,
            message: message.to_string(),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let save = self.pos;
        match self.ident() {
            Some(w) if w == word => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = self.rest();
        if !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        Some(rest[..len].to_string())
    }

    fn variable(&mut self) -> Result<Name> {
        self.ident()
            .map(|s| Name::from(s.as_str()))
            .ok_or_else(|| self.error("expected a variable name"))
    }

    fn string(&mut self) -> Result<String> {
        self.skip_ws();
        let quote = match self.rest().chars().next() {
            Some(q @ ('"' | '\'')) => q,
            _ => return Err(self.error("expected a quoted string")),
        };
        let body = &self.rest()[1..];
        let end = body
            .find(quote)
            .ok_or_else(|| self.error("unterminated string"))?;
        let s = body[..end].to_string();
        self.pos += end + 2;
        Ok(s)
    }

    fn value(&mut self) -> Result<Value> {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(|c: char| c == '-' || c.is_ascii_digit()) {
            let len = 1 + rest[1..]
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(rest.len() - 1);
            let n = rest[..len].parse().ok();
            let n = n.ok_or_else(|| self.error("invalid integer"))?;
            self.pos += len;
            return Ok(Value::Int(n));
        }
        let save = self.pos;
        let word = self.ident().ok_or_else(|| self.error("expected a value"))?;
        if matches!(word.as_str(), "sum" | "len") && self.eat("(") {
            let v = self.variable()?;
            self.expect(")")?;
            return Ok(if word == "sum" { Value::Sum(v) } else { Value::Len(v) });
        }
        if word == "has_property" || word == "and" {
            self.pos = save;
            return Err(self.error("expected a value"));
        }
        Ok(Value::Var(word.as_str().into()))
    }

    fn comparison(&mut self) -> Result<Comparison> {
        for (token, op) in [
            ("<=", Comparison::Le),
            (">=", Comparison::Ge),
            ("==", Comparison::Eq),
            ("!=", Comparison::Ne),
            ("<", Comparison::Lt),
            (">", Comparison::Gt),
        ] {
            if self.eat(token) {
                return Ok(op);
            }
        }
        Err(self.error("expected a comparison operator"))
    }

    fn atom(&mut self) -> Result<Atom> {
        if self.eat_word("has_property") {
            self.expect("(")?;
            let v = self.variable()?;
            self.expect(",")?;
            let p = self.string()?;
            self.expect(")")?;
            return Ok(Atom::HasProperty(v, p));
        }
        let l = self.value()?;
        let op = self.comparison()?;
        let r = self.value()?;
        Ok(Atom::Compare(l, op, r))
    }
}
