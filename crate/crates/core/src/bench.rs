//! Seeded benchmark corpora and a timing harness.
//!
//! The `linalg` suite is a pattern set of BLAS-like kernels over matrix
//! products and sums: products `Times(h___, op(A_:Matrix), op(B_:Matrix), t___)`,
//! sums `Plus(..., r___)` and a few single-matrix patterns, with property
//! constraints such as `has_property(A, "triangular")`. Roughly 68% of the
//! patterns are products, 31% sums and 1.5% single matrices. Subjects are
//! 70% products and 30% sums whose factor counts follow a normal
//! distribution with mean 5 and standard deviation 1, clamped to at least 2;
//! factors are randomly transposed or inverted.
//!
//! The `syntactic` suite drops the sequence variables and the associativity
//! of `Times` and replaces constraints by class restrictions over a class
//! hierarchy, so that all three matchers apply. Its subjects are products of
//! 2 or 3 factors.
//!
//! Variables are named by position (`A`, `B`, ...) in every pattern so that
//! patterns of the same shape share net prefixes.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::constraint_expr::parse_constraint;
use crate::error::{Error, Result};
use crate::many_to_one::{DeterministicNet, ManyToOneMatcher};
use crate::one_to_one;
use crate::pattern::Pattern;
use crate::registry::Registry;
use crate::substitution::Substitution;
use crate::term::{Operation, Term, Wildcard};

pub const CSV_HEADER: &str = "matcher,patterns,subjects,setup_s,match_s,matches";

const PROPERTIES: [&str; 5] = ["square", "symmetric", "triangular", "diagonal", "invertible"];
const MATRICES: usize = 10;
const VARIABLES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
const UNARY: [&str; 3] = ["Transpose", "Inverse", "InverseTranspose"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Linalg,
    Syntactic,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linalg" => Ok(Suite::Linalg),
            "syntactic" => Ok(Suite::Syntactic),
            other => Err(Error::InvalidPattern(format!("unknown suite `{other}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Linalg => "linalg",
            Suite::Syntactic => "syntactic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MatcherKind {
    OneToOne,
    ManyToOne,
    Deterministic,
}

impl MatcherKind {
    pub fn name(self) -> &'static str {
        match self {
            MatcherKind::OneToOne => "one-to-one",
            MatcherKind::ManyToOne => "many-to-one",
            MatcherKind::Deterministic => "dn",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub suite: Suite,
    pub patterns: usize,
    pub subjects: usize,
    pub seed: u64,
    pub repetitions: usize,
}

/// A generated signature, pattern set and subject list.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub registry: Registry,
    pub patterns: Vec<Pattern>,
    pub subjects: Vec<Term>,
}

struct Generator<'r> {
    rng: ChaCha8Rng,
    reg: &'r Registry,
    suite: Suite,
}

impl Generator<'_> {
    fn op(&self, name: &str) -> std::sync::Arc<Operation> {
        self.reg.operation(name).expect("suite operation").clone()
    }

    fn factor_count(&mut self) -> usize {
        let normal = Normal::new(5.0, 1.0).expect("valid normal distribution");
        let x: f64 = normal.sample(&mut self.rng);
        (x.round().max(2.0)) as usize
    }

    fn decorate(&mut self, t: Term) -> Term {
        let p: f64 = self.rng.random();
        let op = match p {
            p if p < 0.6 => return t,
            p if p < 0.8 => UNARY[0],
            p if p < 0.9 => UNARY[1],
            _ => UNARY[2],
        };
        Term::app(&self.op(op), vec![t]).expect("unary operation")
    }

    fn matrix(&mut self) -> Term {
        let i = self.rng.random_range(0..MATRICES);
        self.reg.symbol(&format!("M{i}"))
    }

    fn factor(&mut self) -> Term {
        let m = self.matrix();
        self.decorate(m)
    }

    fn product(&mut self, n: usize) -> Term {
        let args = (0..n).map(|_| self.factor()).collect();
        Term::app(&self.op("Times"), args).expect("variadic product")
    }

    fn linalg_subject(&mut self, product: bool) -> Term {
        let n = self.factor_count();
        if product {
            return self.product(n);
        }
        let args = (0..n)
            .map(|_| {
                if self.rng.random_bool(0.5) {
                    self.factor()
                } else {
                    let k = self.rng.random_range(2..=3);
                    self.product(k)
                }
            })
            .collect();
        Term::app(&self.op("Plus"), args).expect("variadic sum")
    }

    fn class(&mut self) -> &'static str {
        ["Matrix", "Square", "Symmetric", "Triangular", "Diagonal"]
            .choose(&mut self.rng)
            .copied()
            .expect("non-empty")
    }

    fn variable(&mut self, i: usize) -> Term {
        let class = match self.suite {
            Suite::Linalg => "Matrix",
            Suite::Syntactic => self.class(),
        };
        Term::wildcard(Wildcard::symbol(Some(VARIABLES[i]), class))
    }

    fn constraints(&mut self, vars: usize) -> Vec<String> {
        let mut out = Vec::new();
        for var in &VARIABLES[..vars] {
            if self.rng.random_bool(0.5) {
                let prop = PROPERTIES.choose(&mut self.rng).expect("non-empty");
                out.push(format!("has_property({var}, \"{prop}\")"));
            }
        }
        out
    }

    /// `Times(h___, f1, f2, [f3,] t___)` for linalg, `Times(f1, f2, [f3])`
    /// for the syntactic suite.
    fn product_pattern(&mut self) -> (Term, usize) {
        let n = if self.rng.random_bool(0.7) { 2 } else { 3 };
        let mut args: Vec<Term> = (0..n)
            .map(|i| {
                let v = self.variable(i);
                self.decorate(v)
            })
            .collect();
        if self.suite == Suite::Syntactic && self.rng.random_bool(0.1) {
            // a repeated variable, as in A * A^T
            args[1] = match &args[0] {
                Term::Application(a) => a.args()[0].clone(),
                other => Term::app(&self.op("Transpose"), vec![other.clone()]).expect("unary"),
            };
        }
        if self.suite == Suite::Linalg && self.rng.random_bool(0.8) {
            args.insert(0, Term::star("h"));
            args.push(Term::star("t"));
        }
        (Term::app(&self.op("Times"), args).expect("variadic product"), n)
    }

    fn sum_pattern(&mut self) -> (Term, usize) {
        let mut vars = 0;
        let mut args = Vec::new();
        for _ in 0..2 {
            if self.rng.random_bool(0.5) {
                let v = self.variable(vars);
                args.push(self.decorate(v));
                vars += 1;
            } else {
                let a = self.variable(vars);
                let b = self.variable(vars + 1);
                let (a, b) = (self.decorate(a), self.decorate(b));
                args.push(Term::app(&self.op("Times"), vec![a, b]).expect("product"));
                vars += 2;
            }
        }
        if self.rng.random_bool(0.7) {
            args.push(Term::star("r"));
        }
        (Term::app(&self.op("Plus"), args).expect("variadic sum"), vars)
    }

    fn single_pattern(&mut self) -> (Term, usize) {
        let v = self.variable(0);
        (self.decorate(v), 1)
    }

    fn pattern(&mut self, kind: u8) -> Pattern {
        let (expr, vars) = match kind {
            0 => self.product_pattern(),
            1 => self.sum_pattern(),
            _ => self.single_pattern(),
        };
        let mut p = Pattern::new(expr).expect("generated pattern is valid");
        if self.suite == Suite::Linalg {
            for c in self.constraints(vars) {
                p = p
                    .with_constraint(parse_constraint(&c).expect("generated constraint parses"))
                    .expect("constraint variables occur in the pattern");
            }
        }
        p
    }
}

fn registry(suite: Suite, rng: &mut ChaCha8Rng) -> Registry {
    let mut r = Registry::new();
    let assoc = suite == Suite::Linalg;
    r.add_operation(Operation::variadic("Times", assoc, false)).expect("fresh registry");
    if assoc {
        r.add_operation(Operation::variadic("Plus", true, true)).expect("fresh registry");
    }
    for op in UNARY {
        r.add_operation(Operation::fixed(op, 1)).expect("fresh registry");
    }
    r.add_class("Matrix", None).expect("fresh registry");
    r.add_class("Square", Some("Matrix")).expect("fresh registry");
    r.add_class("Symmetric", Some("Square")).expect("fresh registry");
    r.add_class("Triangular", Some("Square")).expect("fresh registry");
    r.add_class("Diagonal", Some("Triangular")).expect("fresh registry");
    for i in 0..MATRICES {
        let props: Vec<&str> = PROPERTIES.iter().copied().filter(|_| rng.random_bool(0.35)).collect();
        let class = match suite {
            Suite::Linalg => "Matrix",
            Suite::Syntactic => *["Matrix", "Square", "Symmetric", "Triangular", "Diagonal"]
                .choose(rng)
                .expect("non-empty"),
        };
        r.add_symbol(&format!("M{i}"), Some(class), props).expect("fresh registry");
    }
    r
}

/// Generates the corpus for `cfg`. The same configuration always yields
/// the same corpus.
pub fn corpus(cfg: &BenchConfig) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let reg = registry(cfg.suite, &mut rng);
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(rng.random()),
        reg: &reg,
        suite: cfg.suite,
    };

    let mut kinds: Vec<u8> = match cfg.suite {
        Suite::Linalg => {
            let sums = (cfg.patterns * 61 + 99) / 199;
            let singles = (cfg.patterns * 3 + 99) / 199;
            let sums = sums.min(cfg.patterns);
            let singles = singles.min(cfg.patterns - sums);
            let mut k = vec![1u8; sums];
            k.extend(vec![2u8; singles]);
            k.extend(vec![0u8; cfg.patterns - sums - singles]);
            k
        }
        Suite::Syntactic => vec![0u8; cfg.patterns],
    };
    kinds.shuffle(&mut g.rng);
    let patterns = kinds.iter().map(|&k| g.pattern(k)).collect();

    let products = (cfg.subjects * 7 + 5) / 10;
    let subjects = (0..cfg.subjects)
        .map(|i| match cfg.suite {
            Suite::Linalg => g.linalg_subject(i < products),
            Suite::Syntactic => {
                let n = g.rng.random_range(2..=3);
                g.product(n)
            }
        })
        .collect();
    drop(g);
    Corpus {
        registry: reg,
        patterns,
        subjects,
    }
}

/// One CSV row: mean setup and total match time over the repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub matcher: MatcherKind,
    pub patterns: usize,
    pub subjects: usize,
    pub setup_s: f64,
    pub match_s: f64,
    pub matches: usize,
}

impl BenchRow {
    pub fn total_s(&self) -> f64 {
        self.setup_s + self.match_s
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{:.9},{:.9},{}",
            self.matcher.name(),
            self.patterns,
            self.subjects,
            self.setup_s,
            self.match_s,
            self.matches
        )
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

type Found = Vec<Vec<(usize, Substitution)>>;

enum Built {
    OneToOne(Vec<Pattern>),
    ManyToOne(ManyToOneMatcher),
    Deterministic(DeterministicNet),
}

fn build(kind: MatcherKind, c: &Corpus) -> Result<Built> {
    Ok(match kind {
        MatcherKind::OneToOne => Built::OneToOne(c.patterns.clone()),
        MatcherKind::ManyToOne => Built::ManyToOne(ManyToOneMatcher::from_patterns(c.patterns.iter().cloned())),
        MatcherKind::Deterministic => Built::Deterministic(DeterministicNet::build(c.patterns.clone(), &c.registry)?),
    })
}

fn match_one(b: &Built, subject: &Term) -> Result<Vec<(usize, Substitution)>> {
    let mut out = Vec::new();
    match b {
        Built::OneToOne(ps) => {
            for (i, p) in ps.iter().enumerate() {
                one_to_one::for_each_match(subject, p, &mut |s| {
                    out.push((i, s.clone()));
                    ControlFlow::Continue(())
                })?;
            }
        }
        Built::ManyToOne(m) => m.for_each_match(subject, &mut |i, s| {
            out.push((i, s.clone()));
            ControlFlow::Continue(())
        })?,
        Built::Deterministic(d) => d.for_each_match(subject, &mut |i, s| {
            out.push((i, s.clone()));
            ControlFlow::Continue(())
        })?,
    }
    Ok(out)
}

/// Times one matcher kind. Returns the row and the matches of the first
/// repetition, sorted per subject.
pub fn measure(kind: MatcherKind, c: &Corpus, repetitions: usize) -> Result<(BenchRow, Found)> {
    let reps = repetitions.max(1);
    let (mut setup, mut matching) = (0.0, 0.0);
    let mut found: Found = Vec::new();
    for rep in 0..reps {
        let t0 = Instant::now();
        let built = build(kind, c)?;
        setup += t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let mut all = Vec::with_capacity(c.subjects.len());
        for s in &c.subjects {
            all.push(match_one(&built, s)?);
        }
        matching += t1.elapsed().as_secs_f64();
        if rep == 0 {
            found = all;
        }
    }
    for f in &mut found {
        f.sort();
    }
    let row = BenchRow {
        matcher: kind,
        patterns: c.patterns.len(),
        subjects: c.subjects.len(),
        setup_s: setup / reps as f64,
        match_s: matching / reps as f64,
        matches: found.iter().map(Vec::len).sum(),
    };
    Ok((row, found))
}

pub fn matcher_kinds(suite: Suite) -> &'static [MatcherKind] {
    match suite {
        Suite::Linalg => &[MatcherKind::OneToOne, MatcherKind::ManyToOne],
        Suite::Syntactic => &[MatcherKind::OneToOne, MatcherKind::ManyToOne, MatcherKind::Deterministic],
    }
}

/// Runs every matcher of the suite on the corpus for `cfg`. Fails with
/// [`Error::Mismatch`] if two matchers report different matches for any
/// subject.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let c = corpus(cfg);
    let mut rows = Vec::new();
    let mut reference: Option<(MatcherKind, Found)> = None;
    for &kind in matcher_kinds(cfg.suite) {
        let (row, found) = measure(kind, &c, cfg.repetitions)?;
        if let Some((ref_kind, ref_found)) = &reference {
            if let Some(i) = (0..c.subjects.len()).find(|&i| ref_found[i] != found[i]) {
                return Err(Error::Mismatch(format!(
                    "{} found {} matches and {} found {} on subject {}",
                    ref_kind.name(),
                    ref_found[i].len(),
                    kind.name(),
                    found[i].len(),
                    c.subjects[i]
                )));
            }
        } else {
            reference = Some((kind, found));
        }
        rows.push(row);
    }
    Ok(rows)
}
