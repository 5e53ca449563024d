//! Replacement rules and rewriting to a normal form.
//!
//! Rewriting is leftmost-innermost: arguments are rewritten before their
//! parent, left to right, and at each position the first rule (in list
//! order) with a match wins, using that rule's first match.
//!
//! ```
//! use termmatch::rewriting::{parse_rules, replace_all, RewriteConfig};
//! use termmatch::{parse_term, Registry};
//!
//! let reg = Registry::new();
//! let rules = parse_rules("list(h___, b_, a_, t___) | a < b => list(h___, a_, b_, t___)", &reg).unwrap();
//! let sorted = replace_all(&parse_term("list(1, 4, 3, 2)", &reg).unwrap(), &rules, &RewriteConfig::default());
//! assert_eq!(sorted.unwrap().to_string(), "list(1, 2, 3, 4)");
//! ```

use std::fmt;
use std::sync::Arc;

use crate::constraint_expr::parse_constraint;
use crate::error::{Error, Result};
use crate::one_to_one;
use crate::pattern::Pattern;
use crate::registry::Registry;
use crate::substitution::{substitute, Substitution};
use crate::syntax::parse_term;
use crate::term::{canonicalize, variables_of, Term};

/// Output of a replacement function. A sequence is spliced into the
/// argument list of the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replacement {
    Term(Term),
    Sequence(Vec<Term>),
}

type ReplaceFn = dyn Fn(&Substitution) -> Result<Replacement> + Send + Sync;

#[derive(Clone)]
pub struct ReplacementRule {
    pattern: Pattern,
    replacement: Arc<ReplaceFn>,
    template: Option<Term>,
}

impl fmt::Debug for ReplacementRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReplacementRule")
            .field("pattern", &self.pattern.expression().to_string())
            .field("template", &self.template.as_ref().map(Term::to_string))
            .finish()
    }
}

impl ReplacementRule {
    /// A rule with an arbitrary replacement function. The function must be
    /// pure.
    pub fn new<F>(pattern: Pattern, replacement: F) -> Self
    where
        F: Fn(&Substitution) -> Result<Replacement> + Send + Sync + 'static,
    {
        ReplacementRule {
            pattern,
            replacement: Arc::new(replacement),
            template: None,
        }
    }

    /// A rule whose replacement is `template` with the match substituted
    /// in. Every variable of `template` must occur in the pattern.
    pub fn template(pattern: Pattern, template: Term) -> Result<Self> {
        for ((name, _), _) in variables_of(&template) {
            if !pattern.variables().contains_key(&name) {
                return Err(Error::InvalidPattern(format!(
                    "template variable `{name}` does not occur in `{}`",
                    pattern.expression()
                )));
            }
        }
        if template.preorder().any(|t| t.as_wildcard().is_some_and(|w| w.name().is_none())) {
            return Err(Error::InvalidPattern(format!(
                "template `{template}` contains an anonymous wildcard"
            )));
        }
        let t = template.clone();
        let mut rule = Self::new(pattern, move |s| substitute(&t, s).map(Replacement::Term));
        rule.template = Some(template);
        Ok(rule)
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn template_term(&self) -> Option<&Term> {
        self.template.as_ref()
    }

    fn apply(&self, s: &Substitution) -> Result<Replacement> {
        Ok(match (self.replacement)(s)? {
            Replacement::Term(t) => Replacement::Term(canonicalize(&t)?),
            Replacement::Sequence(ts) => {
                Replacement::Sequence(ts.iter().map(canonicalize).collect::<Result<_>>()?)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteConfig {
    pub max_iterations: usize,
}

impl Default for RewriteConfig {
    fn default() -> Self {
        RewriteConfig {
            max_iterations: 10_000,
        }
    }
}

fn rewrite(t: &Term, rules: &[ReplacementRule]) -> Result<Option<Replacement>> {
    if let Term::Application(a) = t {
        for (i, arg) in a.args().iter().enumerate() {
            let Some(r) = rewrite(arg, rules)? else {
                continue;
            };
            let mut args = a.args()[..i].to_vec();
            match r {
                Replacement::Term(x) => args.push(x),
                Replacement::Sequence(xs) => args.extend(xs),
            }
            args.extend_from_slice(&a.args()[i + 1..]);
            let rebuilt = Term::app(a.op(), args).map_err(|e| match e {
                Error::Malformed { .. } => Error::Shape(format!("replacement inside `{t}`: {e}")),
                other => other,
            })?;
            return Ok(Some(Replacement::Term(rebuilt)));
        }
    }
    for rule in rules {
        if let Some(s) = one_to_one::first_match(t, &rule.pattern)? {
            return rule.apply(&s).map(Some);
        }
    }
    Ok(None)
}

/// Applies one rewrite step, or returns `None` if no rule matches any
/// subterm of `t`.
pub fn replace_once(t: &Term, rules: &[ReplacementRule]) -> Result<Option<Term>> {
    match rewrite(t, rules)? {
        None => Ok(None),
        Some(Replacement::Term(x)) => Ok(Some(x)),
        Some(Replacement::Sequence(mut xs)) if xs.len() == 1 => Ok(xs.pop()),
        Some(Replacement::Sequence(xs)) => Err(Error::Shape(format!(
            "rewriting the whole term produced a sequence of {} terms",
            xs.len()
        ))),
    }
}

/// Rewrites `t` until no rule applies. Returns the normal form and the
/// number of steps taken.
pub fn normalize(t: &Term, rules: &[ReplacementRule], cfg: &RewriteConfig) -> Result<(Term, usize)> {
    if !t.is_ground() {
        return Err(Error::InvalidSubject(format!("subject `{t}` contains wildcards")));
    }
    let mut cur = t.clone();
    for steps in 0..=cfg.max_iterations {
        match replace_once(&cur, rules)? {
            None => return Ok((cur, steps)),
            Some(_) if steps == cfg.max_iterations => break,
            Some(next) => cur = next,
        }
    }
    Err(Error::IterationLimit {
        iterations: cfg.max_iterations,
        term: cur,
    })
}

pub fn replace_all(t: &Term, rules: &[ReplacementRule], cfg: &RewriteConfig) -> Result<Term> {
    normalize(t, rules, cfg).map(|(t, _)| t)
}

/// Parses one rule per line in the form `pattern [| constraint]* => template`.
/// Blank lines and `#` comments are skipped.
pub fn parse_rules(src: &str, registry: &Registry) -> Result<Vec<ReplacementRule>> {
    let mut rules = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let located = |e: Error| match e {
            Error::Parse { column, message, .. } => Error::Parse {
                line: i + 1,
                column,
                message,
            },
            other => Error::Parse {
                line: i + 1,
                column: 1,
                message: other.to_string(),
            },
        };
        let (lhs, rhs) = text.rsplit_once("=>").ok_or_else(|| {
            located(Error::Parse {
                line: 1,
                column: 1,
                message: "expected `pattern => template`".into(),
            })
        })?;
        let mut pieces = lhs.split('|');
        let expr = parse_term(pieces.next().unwrap_or(""), registry).map_err(located)?;
        let mut pattern = Pattern::new(expr).map_err(located)?;
        for c in pieces {
            pattern = pattern
                .with_constraint(parse_constraint(c).map_err(located)?)
                .map_err(located)?;
        }
        let template = parse_term(rhs, registry).map_err(located)?;
        rules.push(ReplacementRule::template(pattern, template).map_err(located)?);
    }
    Ok(rules)
}
