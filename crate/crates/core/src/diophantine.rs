//! Non-negative solutions of linear Diophantine equations, and their use
//! for distributing the leftover arguments of a commutative application
//! onto sequence variables.
//!
//! For every distinct leftover term `t` occurring `c` times, the equation
//! `m_1 x_1 + ... + m_k x_k = c` (with `m_i` the multiplicity of sequence
//! variable `i` in the pattern) describes how many copies of `t` each
//! variable receives. The equations are independent apart from the
//! requirement that plus variables receive at least one term overall.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::substitution::{Binding, Substitution};
use crate::term::{Name, Operation, Term, WildcardKind};

/// `(g, u, v)` with `g = gcd(a, b)` and `a*u + b*v = g`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All non-negative `(x, y)` with `a*x + b*y = d`, in increasing `x`.
pub fn solve_two_var(a: usize, b: usize, d: usize) -> impl Iterator<Item = (usize, usize)> {
    assert!(a >= 1 && b >= 1, "coefficients must be positive");
    let (g, u, v) = extended_gcd(a as i64, b as i64);
    let (a, b, d) = (a as i64, b as i64, d as i64);
    let (step_x, step_y, x0, y0, range) = if d % g != 0 {
        (0, 0, 0, 0, 1..=0)
    } else {
        let (a1, b1, d1) = (a / g, b / g, d / g);
        let (x0, y0) = (u * d1, v * d1);
        // x = x0 + b1 t >= 0  and  y = y0 - a1 t >= 0
        let t_min = (-x0).div_euclid(b1) + i64::from((-x0).rem_euclid(b1) != 0);
        let t_max = y0.div_euclid(a1);
        (b1, a1, x0, y0, t_min..=t_max)
    };
    range.map(move |t| ((x0 + step_x * t) as usize, (y0 - step_y * t) as usize))
}

/// `coefficients · x = constant` over non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearEquation {
    coefficients: Vec<usize>,
    constant: usize,
}

impl LinearEquation {
    pub fn new(coefficients: Vec<usize>, constant: usize) -> Result<Self> {
        if coefficients.is_empty() || coefficients.contains(&0) {
            return Err(Error::InvalidPattern(
                "equation coefficients must be non-empty and positive".into(),
            ));
        }
        Ok(LinearEquation {
            coefficients,
            constant,
        })
    }

    pub fn coefficients(&self) -> &[usize] {
        &self.coefficients
    }

    pub fn constant(&self) -> usize {
        self.constant
    }
}

pub type SolutionVector = Vec<usize>;

type SolutionCache = RwLock<HashMap<LinearEquation, Arc<Vec<SolutionVector>>>>;

fn cache() -> &'static SolutionCache {
    static CACHE: OnceLock<SolutionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn clear_cache() {
    cache().write().unwrap().clear();
}

/// Every non-negative solution, lexicographically increasing in the first
/// variable. Results are cached per equation.
pub fn solve_nonneg(eq: &LinearEquation) -> Arc<Vec<SolutionVector>> {
    if let Some(hit) = cache().read().unwrap().get(eq) {
        return hit.clone();
    }
    let solutions = Arc::new(solve_uncached(&eq.coefficients, eq.constant));
    cache()
        .write()
        .unwrap()
        .insert(eq.clone(), solutions.clone());
    solutions
}

fn solve_uncached(coeffs: &[usize], d: usize) -> Vec<SolutionVector> {
    match coeffs {
        [] => Vec::new(),
        [a] => {
            if d % a == 0 {
                vec![vec![d / a]]
            } else {
                Vec::new()
            }
        }
        [a, b] => solve_two_var(*a, *b, d).map(|(x, y)| vec![x, y]).collect(),
        [a, rest @ ..] => {
            // a x + g w = d, then rest · y = g w
            let g = rest.iter().copied().fold(0, gcd);
            let mut out = Vec::new();
            for (x, w) in solve_two_var(*a, g, d) {
                let tail = LinearEquation {
                    coefficients: rest.to_vec(),
                    constant: g * w,
                };
                for sol in solve_nonneg(&tail).iter() {
                    let mut v = Vec::with_capacity(coeffs.len());
                    v.push(x);
                    v.extend_from_slice(sol);
                    out.push(v);
                }
            }
            out
        }
    }
}

/// A sequence variable awaiting leftover arguments of a commutative
/// application.
#[derive(Debug, Clone)]
pub struct SequenceVariable {
    pub name: Option<Name>,
    /// Minimum total number of terms.
    pub min_count: usize,
    /// Maximum total number of terms, unbounded if `None`.
    pub max_count: Option<usize>,
    /// Number of occurrences in the pattern; all receive the same terms.
    pub multiplicity: usize,
    /// A dot variable inside an associative-commutative operation absorbs
    /// one or more arguments; more than one is wrapped in this operation.
    pub wrap: Option<Arc<Operation>>,
}

impl SequenceVariable {
    pub fn new(name: Option<&str>, kind: WildcardKind, multiplicity: usize) -> Self {
        SequenceVariable {
            name: name.map(Name::from),
            min_count: kind.min_count(),
            max_count: None,
            multiplicity,
            wrap: None,
        }
    }

    /// Dot variable under an associative-commutative operation.
    pub fn wrapping(name: Option<&str>, op: &Arc<Operation>, multiplicity: usize) -> Self {
        SequenceVariable {
            name: name.map(Name::from),
            min_count: 1,
            max_count: None,
            multiplicity,
            wrap: Some(op.clone()),
        }
    }

    /// Anonymous variable absorbing between `min` and `max` terms.
    pub fn anonymous(min: usize, max: Option<usize>) -> Self {
        SequenceVariable {
            name: None,
            min_count: min,
            max_count: max,
            multiplicity: 1,
            wrap: None,
        }
    }

    fn bound_terms<'a>(&self, b: &'a Binding) -> &'a [Term] {
        match (b, &self.wrap) {
            (Binding::Single(Term::Application(a)), Some(op)) if a.op().name() == op.name() => {
                a.args()
            }
            _ => b.terms(),
        }
    }

    fn binding(&self, terms: Vec<Term>) -> Binding {
        match &self.wrap {
            None => Binding::Sequence(terms),
            Some(_) if terms.len() == 1 => Binding::Single(terms.into_iter().next().unwrap()),
            Some(op) => Binding::Single(
                Term::app(op, terms).expect("wrapped arguments satisfy variadic arity"),
            ),
        }
    }
}

/// Lazily enumerates every distribution of `subjects` (a multiset given as
/// `(term, count)` pairs) over `vars` that is consistent with `prior`.
///
/// Variables already bound in `prior` have their terms removed from the
/// multiset first. Sequence bindings are sorted by the term order.
pub fn distribute(
    subjects: &[(Term, usize)],
    vars: &[SequenceVariable],
    prior: &Substitution,
) -> Distributions {
    let mut pool: Vec<(Term, usize)> = subjects.iter().filter(|(_, c)| *c > 0).cloned().collect();
    pool.sort_by(|a, b| a.0.cmp(&b.0));
    let mut free = Vec::new();
    for var in vars {
        let bound = var.name.as_ref().and_then(|n| prior.get(n));
        match bound {
            None => free.push(var.clone()),
            Some(b) => {
                for t in var.bound_terms(b) {
                    match pool.iter_mut().find(|(p, c)| p == t && *c >= var.multiplicity) {
                        Some(slot) => slot.1 -= var.multiplicity,
                        None => return Distributions::empty(),
                    }
                }
            }
        }
    }
    pool.retain(|(_, c)| *c > 0);

    if free.is_empty() {
        return if pool.is_empty() {
            Distributions::single(prior.clone())
        } else {
            Distributions::empty()
        };
    }
    let coefficients: Vec<usize> = free.iter().map(|v| v.multiplicity).collect();
    let mut solutions = Vec::with_capacity(pool.len());
    for (_, count) in &pool {
        let eq = LinearEquation {
            coefficients: coefficients.clone(),
            constant: *count,
        };
        let sols = solve_nonneg(&eq);
        if sols.is_empty() {
            return Distributions::empty();
        }
        solutions.push(sols);
    }
    Distributions {
        odometer: vec![0; pool.len()],
        terms: pool.into_iter().map(|(t, _)| t).collect(),
        solutions,
        vars: free,
        prior: prior.clone(),
        done: false,
    }
}

/// Iterator returned by [`distribute`].
pub struct Distributions {
    terms: Vec<Term>,
    solutions: Vec<Arc<Vec<SolutionVector>>>,
    odometer: Vec<usize>,
    vars: Vec<SequenceVariable>,
    prior: Substitution,
    done: bool,
}

impl Distributions {
    fn empty() -> Self {
        Distributions {
            terms: Vec::new(),
            solutions: Vec::new(),
            odometer: Vec::new(),
            vars: Vec::new(),
            prior: Substitution::new(),
            done: true,
        }
    }

    fn single(prior: Substitution) -> Self {
        Distributions {
            prior,
            done: false,
            ..Distributions::empty()
        }
    }

    fn advance(&mut self) {
        for i in (0..self.odometer.len()).rev() {
            self.odometer[i] += 1;
            if self.odometer[i] < self.solutions[i].len() {
                return;
            }
            self.odometer[i] = 0;
        }
        self.done = true;
    }

    fn current(&self) -> Option<Substitution> {
        let mut out = self.prior.clone();
        for (vi, var) in self.vars.iter().enumerate() {
            let total: usize = self
                .odometer
                .iter()
                .enumerate()
                .map(|(ti, &si)| self.solutions[ti][si][vi])
                .sum();
            if total < var.min_count || var.max_count.is_some_and(|m| total > m) {
                return None;
            }
            let Some(name) = &var.name else { continue };
            let mut items = Vec::with_capacity(total);
            for (ti, &si) in self.odometer.iter().enumerate() {
                let n = self.solutions[ti][si][vi];
                items.extend(std::iter::repeat_n(self.terms[ti].clone(), n));
            }
            out.insert(name.clone(), var.binding(items));
        }
        Some(out)
    }
}

impl Iterator for Distributions {
    type Item = Substitution;

    fn next(&mut self) -> Option<Substitution> {
        while !self.done {
            let cur = self.current();
            self.advance();
            if self.vars.is_empty() {
                self.done = true;
            }
            if cur.is_some() {
                return cur;
            }
        }
        None
    }
}
