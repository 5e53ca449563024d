//! Seeded random subjects and patterns over a small signature.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use termmatch::{Binding, Constraint, Operation, Pattern, Registry, Substitution, Term, Wildcard, WildcardKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `f` plain, `g` binary, `h` unary, `C` commutative, `A` associative,
/// `AC` associative-commutative; `a`, `b` are of class `K`.
pub fn registry() -> Registry {
    let mut r = Registry::new();
    r.add_operation(Operation::plain("f")).unwrap();
    r.add_operation(Operation::fixed("g", 2)).unwrap();
    r.add_operation(Operation::fixed("h", 1)).unwrap();
    r.add_operation(Operation::variadic("C", false, true)).unwrap();
    r.add_operation(Operation::variadic("A", true, false)).unwrap();
    r.add_operation(Operation::variadic("AC", true, true)).unwrap();
    r.add_class("K", None).unwrap();
    r.add_symbol("a", Some("K"), [""; 0]).unwrap();
    r.add_symbol("b", Some("K"), [""; 0]).unwrap();
    r.add_symbol("c", None, [""; 0]).unwrap();
    r
}

const VARIADIC: [&str; 4] = ["f", "C", "A", "AC"];

pub fn symbol(rng: &mut impl Rng, reg: &Registry) -> Term {
    reg.symbol(["a", "b", "c"].choose(rng).unwrap())
}

/// A ground term of depth at most `depth` with at most `max_args`
/// arguments per variadic application.
pub fn subject(rng: &mut impl Rng, reg: &Registry, depth: usize, max_args: usize) -> Term {
    if depth == 0 || rng.random_bool(0.4) {
        return symbol(rng, reg);
    }
    let choice = rng.random_range(0..6);
    let (name, n) = match choice {
        0 => ("h", 1),
        1 => ("g", 2),
        _ => (VARIADIC[choice - 2], rng.random_range(0..=max_args)),
    };
    let op = reg.operation(name).unwrap().clone();
    let args = (0..n).map(|_| subject(rng, reg, depth - 1, max_args)).collect();
    Term::app(&op, args).unwrap()
}

/// A variadic application with the given operation at the root.
pub fn subject_with_root(rng: &mut impl Rng, reg: &Registry, op: &str, depth: usize, max_args: usize) -> Term {
    let op = reg.operation(op).unwrap().clone();
    let n = rng.random_range(0..=max_args);
    let args = (0..n).map(|_| subject(rng, reg, depth.saturating_sub(1), max_args)).collect();
    Term::app(&op, args).unwrap()
}

struct Abstractor<'r, R> {
    rng: &'r mut R,
    fresh: usize,
}

impl<R: Rng> Abstractor<'_, R> {
    fn dot(&mut self) -> Term {
        match self.rng.random_range(0..10) {
            0 => Term::anonymous(WildcardKind::Dot),
            1 => Term::wildcard(Wildcard::symbol(Some(["x", "y"].choose(self.rng).unwrap()), "K")),
            _ => Term::dot(["x", "y", "z"].choose(self.rng).unwrap()),
        }
    }

    fn sequence(&mut self) -> Term {
        let kind = if self.rng.random_bool(0.5) {
            WildcardKind::Star
        } else {
            WildcardKind::Plus
        };
        if self.rng.random_bool(0.15) {
            return Term::anonymous(kind);
        }
        self.fresh += 1;
        let name = format!("s{}", self.fresh);
        Term::wildcard(Wildcard::new(kind, Some(&name)))
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Application(a) if !self.rng.random_bool(0.25) => {
                let op = a.op().clone();
                let mut args = Vec::new();
                let mut i = 0;
                let items = a.args();
                while i < items.len() {
                    if op.is_variadic() && self.rng.random_bool(0.25) {
                        let len = self.rng.random_range(0..=(items.len() - i).min(2));
                        let w = self.sequence();
                        if len == 0 && w.as_wildcard().unwrap().kind() == WildcardKind::Plus {
                            args.push(self.term(&items[i]));
                            i += 1;
                            continue;
                        }
                        args.push(w);
                        i += len;
                    } else {
                        args.push(self.term(&items[i]));
                        i += 1;
                    }
                }
                if op.is_commutative() && self.rng.random_bool(0.2) {
                    // repeat a sequence variable of this argument list
                    if let Some(seq) = args.iter().find(|x| x.is_sequence_wildcard()).cloned() {
                        args.push(seq);
                    }
                }
                Term::raw_app(&op, args)
            }
            _ if self.rng.random_bool(0.5) => self.dot(),
            other => other.clone(),
        }
    }
}

/// A pattern obtained by abstracting parts of `t` into wildcards, so it
/// often (but not always) matches `t`.
pub fn pattern_from(rng: &mut impl Rng, t: &Term) -> Option<Pattern> {
    let mut a = Abstractor { rng, fresh: 0 };
    let expr = a.term(t);
    let pattern = Pattern::new(termmatch::canonicalize(&expr).ok()?).ok()?;
    if !pattern.variables().contains_key("x") || !a.rng.random_bool(0.2) {
        return Some(pattern);
    }
    let c = Term::sym("c");
    pattern
        .with_constraint(Constraint::new(["x"], move |s: &Substitution| {
            s.get("x") != Some(&Binding::Single(c.clone()))
        }))
        .ok()
}

/// A random pattern, either abstracted from a random subject or from `t`.
pub fn pattern(rng: &mut impl Rng, reg: &Registry, t: &Term, depth: usize, max_args: usize) -> Pattern {
    loop {
        let base = if rng.random_bool(0.6) {
            t.clone()
        } else {
            subject(rng, reg, depth, max_args)
        };
        if let Some(p) = pattern_from(rng, &base) {
            return p;
        }
    }
}

/// A commutative (or associative-commutative) subject with at most
/// `max_args` arguments and a pattern over the same operation.
pub fn commutative_case(rng: &mut impl Rng, reg: &Registry, max_args: usize) -> (Term, Pattern) {
    let op_name = if rng.random_bool(0.5) { "C" } else { "AC" };
    let op = reg.operation(op_name).unwrap().clone();
    let pick_arg = |rng: &mut ChaCha8Rng| -> Term {
        match rng.random_range(0..8) {
            0 => Term::app(reg.operation("h").unwrap(), vec![symbol(rng, reg)]).unwrap(),
            1 => Term::app(reg.operation("g").unwrap(), vec![symbol(rng, reg), symbol(rng, reg)]).unwrap(),
            _ => symbol(rng, reg),
        }
    };
    let mut inner = ChaCha8Rng::seed_from_u64(rng.random());
    let n = inner.random_range(0..=max_args);
    let subject_args: Vec<Term> = (0..n).map(|_| pick_arg(&mut inner)).collect();
    let subject = Term::app(&op, subject_args).unwrap();
    loop {
        let m = inner.random_range(1..=max_args);
        let mut fresh = 0;
        let mut args = Vec::new();
        for _ in 0..m {
            let t = match inner.random_range(0..12) {
                0 | 1 => symbol(&mut inner, reg),
                2 => Term::app(reg.operation("h").unwrap(), vec![Term::dot(["x", "y"].choose(&mut inner).unwrap())]).unwrap(),
                3 => Term::app(
                    reg.operation("g").unwrap(),
                    vec![Term::dot(["x", "y"].choose(&mut inner).unwrap()), Term::dot("z")],
                )
                .unwrap(),
                4 => Term::anonymous(WildcardKind::Dot),
                5 => Term::wildcard(Wildcard::symbol(Some(["x", "y"].choose(&mut inner).unwrap()), "K")),
                6 | 7 => {
                    fresh += 1;
                    let kind = if inner.random_bool(0.5) { WildcardKind::Star } else { WildcardKind::Plus };
                    Term::wildcard(Wildcard::new(kind, Some(&format!("s{fresh}"))))
                }
                8 => match args.iter().find(|x: &&Term| x.is_sequence_wildcard()) {
                    Some(s) => s.clone(),
                    None => Term::anonymous(WildcardKind::Star),
                },
                _ => Term::dot(["x", "y", "z"].choose(&mut inner).unwrap()),
            };
            args.push(t);
        }
        if let Ok(p) = Term::app(&op, args).and_then(Pattern::new) {
            return (subject, p);
        }
    }
}
