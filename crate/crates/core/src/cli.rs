//! The `termmatch` command line.
//!
//! ```text
//! termmatch match   [-s SIG] -p PATTERN... [--first] [--matcher KIND] SUBJECT
//! termmatch rewrite [-s SIG] -r RULES [--max-iter N] SUBJECT
//! termmatch bench   [--suite linalg|syntactic] [--patterns N] [--subjects M]
//!                   [--seed S] [--repetitions R] [--out FILE]
//! termmatch net save [-s SIG] -p PATTERN... -o FILE
//! termmatch net load FILE [SUBJECT]
//! ```
//!
//! A pattern argument may carry constraints after `|`, as in
//! `list(h___, b_, a_, t___) | a < b`. With a single pattern each match is
//! printed as a substitution; with several, each line is prefixed by the
//! pattern index and `with`.
//!
//! Exit codes: 0 on success or at least one match, 1 when nothing matched,
//! 2 on usage, parse or input errors, 3 when rewriting hits the iteration
//! limit, 4 when benchmark matchers disagree.

use std::ffi::OsString;
use std::io::Write;
use std::ops::ControlFlow;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, Suite};
use crate::constraint_expr::parse_constraint;
use crate::error::{Error, Result};
use crate::many_to_one::{persist, DeterministicNet, ManyToOneMatcher};
use crate::one_to_one;
use crate::pattern::Pattern;
use crate::registry::Registry;
use crate::rewriting::{normalize, parse_rules, RewriteConfig};
use crate::signature_file::load_signature;
use crate::substitution::Substitution;
use crate::syntax::parse_term;
use crate::term::Term;

#[derive(Debug, Parser)]
#[command(name = "termmatch", version, about = "Pattern matching and term rewriting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Match patterns against a subject and print the substitutions.
    Match(MatchArgs),
    /// Rewrite a subject to normal form with a rules file.
    Rewrite(RewriteArgs),
    /// Time the matchers on a generated corpus and print CSV.
    Bench(BenchArgs),
    /// Save or load a compiled many-to-one net.
    #[command(subcommand)]
    Net(NetCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatcherArg {
    OneToOne,
    ManyToOne,
    Dn,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Linalg,
    Syntactic,
}

#[derive(Debug, Args)]
struct Signature {
    /// Signature file declaring operations, classes and symbols.
    #[arg(short, long)]
    signature: Option<PathBuf>,
}

impl Signature {
    fn registry(&self) -> Result<Registry> {
        match &self.signature {
            Some(p) => load_signature(p),
            None => Ok(Registry::new()),
        }
    }
}

#[derive(Debug, Args)]
struct MatchArgs {
    #[command(flatten)]
    signature: Signature,
    /// Pattern, optionally followed by `| constraint` clauses. Repeatable.
    #[arg(short, long = "pattern", required = true)]
    patterns: Vec<String>,
    /// Print only the first match.
    #[arg(long, conflicts_with = "all")]
    first: bool,
    /// Print all matches (the default).
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "one-to-one")]
    matcher: MatcherArg,
    subject: String,
}

#[derive(Debug, Args)]
struct RewriteArgs {
    #[command(flatten)]
    signature: Signature,
    /// Rules file with lines `pattern [| constraint] => template`.
    #[arg(short, long)]
    rules: PathBuf,
    #[arg(long, default_value_t = RewriteConfig::default().max_iterations as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_iter: u64,
    subject: String,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "linalg")]
    suite: SuiteArg,
    #[arg(long, default_value_t = 100)]
    patterns: usize,
    #[arg(long, default_value_t = 200)]
    subjects: usize,
    #[arg(long, env = "TERMMATCH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum NetCommand {
    /// Compile patterns into a many-to-one net and write it to a file.
    Save {
        #[command(flatten)]
        signature: Signature,
        #[arg(short, long = "pattern", required = true)]
        patterns: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Load a net; match SUBJECT against it, or describe it.
    Load { file: PathBuf, subject: Option<String> },
}

/// Parses `expression | constraint | ...`.
pub fn parse_pattern(src: &str, registry: &Registry) -> Result<Pattern> {
    let mut pieces = src.split('|');
    let expr = parse_term(pieces.next().unwrap_or(""), registry)?;
    let mut p = Pattern::new(expr)?;
    for c in pieces {
        p = p.with_constraint(parse_constraint(c)?)?;
    }
    Ok(p)
}

struct Failure {
    code: i32,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match error {
            Error::IterationLimit { .. } => 3,
            Error::Mismatch(_) => 4,
            _ => 2,
        };
        Failure { code, error }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn subject(src: &str, registry: &Registry) -> Result<Term> {
    let t = parse_term(src, registry)?;
    if !t.is_ground() {
        return Err(Error::InvalidSubject(format!("subject `{t}` contains wildcards")));
    }
    Ok(t)
}

fn print_matches(out: &mut dyn Write, found: &[(usize, Substitution)], multi: bool) -> Result<i32> {
    for (i, s) in found {
        if multi {
            writeln!(out, "{i} with {s}")?;
        } else {
            writeln!(out, "{s}")?;
        }
    }
    Ok(if found.is_empty() { 1 } else { 0 })
}

fn collect(
    first: bool,
    run: impl FnOnce(&mut dyn FnMut(usize, &Substitution) -> ControlFlow<()>) -> Result<()>,
) -> Result<Vec<(usize, Substitution)>> {
    let mut found = Vec::new();
    run(&mut |i, s| {
        found.push((i, s.clone()));
        if first {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if !first {
        found.sort();
    }
    Ok(found)
}

fn cmd_match(a: &MatchArgs, out: &mut dyn Write) -> Outcome {
    let reg = a.signature.registry()?;
    let patterns = a
        .patterns
        .iter()
        .map(|p| parse_pattern(p, &reg))
        .collect::<Result<Vec<_>>>()?;
    let t = subject(&a.subject, &reg)?;
    let found = match a.matcher {
        MatcherArg::OneToOne => collect(a.first, |visit| {
            for (i, p) in patterns.iter().enumerate() {
                let mut stop = false;
                one_to_one::for_each_match(&t, p, &mut |s| {
                    let r = visit(i, s);
                    stop = r.is_break();
                    r
                })?;
                if stop {
                    break;
                }
            }
            Ok(())
        })?,
        MatcherArg::ManyToOne => {
            let m = ManyToOneMatcher::from_patterns(patterns.iter().cloned());
            collect(a.first, |visit| m.for_each_match(&t, visit))?
        }
        MatcherArg::Dn => {
            let d = DeterministicNet::build(patterns.clone(), &reg)?;
            collect(a.first, |visit| d.for_each_match(&t, visit))?
        }
    };
    Ok(print_matches(out, &found, patterns.len() > 1)?)
}

fn cmd_rewrite(a: &RewriteArgs, out: &mut dyn Write) -> Outcome {
    let reg = a.signature.registry()?;
    let rules = parse_rules(&std::fs::read_to_string(&a.rules)?, &reg)?;
    let t = subject(&a.subject, &reg)?;
    let cfg = RewriteConfig {
        max_iterations: usize::try_from(a.max_iter).unwrap_or(usize::MAX),
    };
    match normalize(&t, &rules, &cfg) {
        Ok((normal, _)) => {
            writeln!(out, "{normal}").map_err(Error::from)?;
            Ok(0)
        }
        Err(e @ Error::IterationLimit { .. }) => {
            if let Error::IterationLimit { term, .. } = &e {
                writeln!(out, "{term}").map_err(Error::from)?;
            }
            Err(e.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Outcome {
    let cfg = BenchConfig {
        suite: match a.suite {
            SuiteArg::Linalg => Suite::Linalg,
            SuiteArg::Syntactic => Suite::Syntactic,
        },
        patterns: a.patterns,
        subjects: a.subjects,
        seed: a.seed,
        repetitions: a.repetitions,
    };
    let csv = bench::to_csv(&bench::run(&cfg)?);
    match &a.out {
        Some(path) => std::fs::write(path, csv).map_err(Error::from)?,
        None => out.write_all(csv.as_bytes()).map_err(Error::from)?,
    }
    Ok(0)
}

fn cmd_net(c: &NetCommand, out: &mut dyn Write) -> Outcome {
    match c {
        NetCommand::Save {
            signature,
            patterns,
            out: path,
        } => {
            let reg = signature.registry()?;
            let ps = patterns
                .iter()
                .map(|p| parse_pattern(p, &reg))
                .collect::<Result<Vec<_>>>()?;
            let m = ManyToOneMatcher::from_patterns(ps);
            persist::save_file(&m, &reg, path)?;
            writeln!(out, "saved {} patterns, {} states", m.len(), m.state_count()).map_err(Error::from)?;
            Ok(0)
        }
        NetCommand::Load { file, subject: s } => {
            let (reg, m) = persist::load_file(file)?;
            let Some(s) = s else {
                for (i, p) in m.patterns().iter().enumerate() {
                    writeln!(out, "{i}: {}", p.expression()).map_err(Error::from)?;
                }
                writeln!(out, "{} patterns, {} states", m.len(), m.state_count()).map_err(Error::from)?;
                return Ok(0);
            };
            let t = subject(s, &reg)?;
            let found = m.matches(&t)?;
            Ok(print_matches(out, &found, m.len() > 1)?)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Match(a) => cmd_match(a, out),
        Command::Rewrite(a) => cmd_rewrite(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Net(c) => cmd_net(c, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            let _ = writeln!(err, "error: {error}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["termmatch"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn match_exit_codes() {
        assert_eq!(run_cli(&["match", "-p", "list(x_, 1)", "list(0, 1)"]), (0, "{x -> 0}\n".into(), String::new()));
        let (code, out, _) = run_cli(&["match", "-p", "list(x_, 1)", "list(0, 2)"]);
        assert_eq!((code, out.as_str()), (1, ""));
        let (code, _, err) = run_cli(&["match", "-p", "list(x_, ", "list(0, 2)"]);
        assert_eq!(code, 2);
        assert!(err.contains("1:10"), "{err}");
        let (code, _, err) = run_cli(&["match", "--matcher", "dn", "-p", "list(x___)", "list(0)"]);
        assert_eq!(code, 2);
        assert!(err.contains("not syntactic"), "{err}");
        assert_eq!(run_cli(&["match", "list(0)"]).0, 2);
    }

    #[test]
    fn matchers_and_first() {
        for m in ["one-to-one", "many-to-one", "dn"] {
            let (code, out, _) = run_cli(&["match", "--matcher", m, "-p", "f(x_, y_)", "-p", "f(a, z_)", "f(a, b)"]);
            assert_eq!(code, 0);
            assert_eq!(out, "0 with {x -> a, y -> b}\n1 with {z -> b}\n", "{m}");
        }
        let (code, out, _) = run_cli(&["match", "--first", "-p", "list(x___, y___)", "list(1, 2)"]);
        assert_eq!((code, out.lines().count()), (0, 1));
        let (_, out, _) = run_cli(&["match", "-p", "list(x___, y___) | len(x) == 1", "list(1, 2)"]);
        assert_eq!(out, "{x -> (1), y -> (2)}\n");
    }

    #[test]
    fn rewrite_and_net() {
        let dir = tempfile::tempdir().unwrap();
        let rules = dir.path().join("rules.txt");
        std::fs::write(&rules, "list(h___, b_, a_, t___) | a < b => list(h___, a_, b_, t___)\n").unwrap();
        let r = rules.to_str().unwrap();
        assert_eq!(run_cli(&["rewrite", "-r", r, "list(1, 4, 3, 2)"]).1, "list(1, 2, 3, 4)\n");
        assert_eq!(run_cli(&["rewrite", "-r", r, "list(1, 2)"]).1, "list(1, 2)\n");
        std::fs::write(&rules, "f(x_) => f(x_)\n").unwrap();
        let (code, out, _) = run_cli(&["rewrite", "-r", r, "--max-iter", "3", "f(a)"]);
        assert_eq!((code, out.as_str()), (3, "f(a)\n"));

        let net = dir.path().join("net.tm");
        let n = net.to_str().unwrap();
        assert_eq!(run_cli(&["net", "save", "-p", "list(1)", "-p", "list(y_, 0)", "-p", "list(1, x___)", "-o", n]).0, 0);
        let (code, out, _) = run_cli(&["net", "load", n, "list(1, 0)"]);
        assert_eq!((code, out.as_str()), (0, "1 with {y -> 1}\n2 with {x -> (0)}\n"));
        assert_eq!(run_cli(&["net", "load", n]).0, 0);
        std::fs::write(&net, "garbage").unwrap();
        assert_eq!(run_cli(&["net", "load", n, "list(1)"]).0, 2);
    }

    #[test]
    fn bench_csv() {
        let (code, out, _) = run_cli(&["bench", "--suite", "syntactic", "--patterns", "10", "--subjects", "10", "--seed", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some(bench::CSV_HEADER));
        assert_eq!(out.lines().count(), 4);
    }
}
