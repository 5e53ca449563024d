//! Line-oriented signature files.
//!
//! ```text
//! # linear algebra
//! op Times variadic associative
//! op Plus 1+ associative commutative
//! op Transpose 1
//! class Matrix
//! class Square : Matrix
//! symbol M1 M2 : Matrix
//! symbol M3 : Square triangular, invertible
//! ```
//!
//! `op` takes a name, an arity (`n` exactly, `n+` at least n, `variadic`
//! for `0+`) and the optional flags `associative` and `commutative`.
//! `class` declares a symbol class with an optional parent. `symbol`
//! declares one or more symbols with an optional class and a comma-separated
//! property list. Everything after `#` is ignored. Classes must be declared
//! before they are used.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::term::Operation;

fn is_ident(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_alphabetic())
        && s.chars().all(|c| c.is_ascii_alphanumeric())
}

fn ident(word: Option<&str>, what: &str, line: usize) -> Result<String> {
    match word {
        Some(w) if is_ident(w) => Ok(w.to_string()),
        Some(w) => Err(at(line, format!("invalid {what} `{w}`"))),
        None => Err(at(line, format!("missing {what}"))),
    }
}

fn at(line: usize, message: String) -> Error {
    Error::Parse {
        line,
        column: 1,
        message,
    }
}

fn in_line(line: usize, e: Error) -> Error {
    match e {
        Error::Signature(m) => at(line, m),
        other => other,
    }
}

fn op_line(words: &[&str], line: usize) -> Result<std::sync::Arc<Operation>> {
    let name = ident(words.first().copied(), "operation name", line)?;
    let (arity, variadic) = match words.get(1).copied() {
        Some("variadic") => (0, true),
        Some(a) => match a.strip_suffix('+') {
            Some(n) => (n.parse().map_err(|_| at(line, format!("invalid arity `{a}`")))?, true),
            None => (a.parse().map_err(|_| at(line, format!("invalid arity `{a}`")))?, false),
        },
        None => return Err(at(line, "missing arity".into())),
    };
    let (mut assoc, mut comm) = (false, false);
    for flag in &words[2..] {
        match *flag {
            "associative" => assoc = true,
            "commutative" => comm = true,
            other => return Err(at(line, format!("unknown operation flag `{other}`"))),
        }
    }
    Operation::new(&name, arity, variadic, assoc, comm).map_err(|e| in_line(line, e))
}

/// Builds a registry from signature-file text.
pub fn parse_signature(src: &str) -> Result<Registry> {
    let mut reg = Registry::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        let Some((keyword, rest)) = text.split_once(char::is_whitespace).or((!text.is_empty()).then_some((text, ""))) else {
            continue;
        };
        match keyword {
            "op" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let op = op_line(&words, line)?;
                reg.add_operation(op).map_err(|e| in_line(line, e))?;
            }
            "class" => {
                let (name, parent) = match rest.split_once(':') {
                    Some((n, p)) => (n.trim(), Some(p.trim())),
                    None => (rest.trim(), None),
                };
                let name = ident(Some(name).filter(|n| !n.is_empty()), "class name", line)?;
                let parent = parent.map(|p| ident(Some(p), "parent class", line)).transpose()?;
                reg.add_class(&name, parent.as_deref()).map_err(|e| in_line(line, e))?;
            }
            "symbol" => {
                let (names, tail) = match rest.split_once(':') {
                    Some((n, t)) => (n, Some(t.trim())),
                    None => (rest, None),
                };
                let names: Vec<&str> = names.split_whitespace().collect();
                if names.is_empty() {
                    return Err(at(line, "missing symbol name".into()));
                }
                for n in &names {
                    if !(is_ident(n) || n.parse::<i64>().is_ok()) {
                        return Err(at(line, format!("invalid symbol name `{n}`")));
                    }
                }
                let (class, props) = match tail {
                    Some(t) => {
                        let (c, p) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
                        let props: Vec<String> = p
                            .split(',')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .map(String::from)
                            .collect();
                        (Some(ident(Some(c).filter(|c| !c.is_empty()), "class name", line)?), props)
                    }
                    None => (None, Vec::new()),
                };
                for n in names {
                    reg.add_symbol(n, class.as_deref(), &props)
                        .map_err(|e| in_line(line, e))?;
                }
            }
            other => return Err(at(line, format!("unknown declaration `{other}`"))),
        }
    }
    Ok(reg)
}

/// Renders a registry in the format read by [`parse_signature`]. Symbols
/// whose class is not declared in the registry lose their class.
pub fn render_signature(reg: &Registry) -> String {
    let mut out = String::new();
    for op in reg.operations() {
        let arity = match (op.is_variadic(), op.arity()) {
            (true, 0) => "variadic".to_string(),
            (true, n) => format!("{n}+"),
            (false, n) => n.to_string(),
        };
        let _ = write!(out, "op {} {arity}", op.name());
        if op.is_associative() {
            out.push_str(" associative");
        }
        if op.is_commutative() {
            out.push_str(" commutative");
        }
        out.push('\n');
    }
    for (name, parent) in reg.classes_topological() {
        match parent {
            Some(p) => {
                let _ = writeln!(out, "class {name} : {p}");
            }
            None => {
                let _ = writeln!(out, "class {name}");
            }
        }
    }
    for sym in reg.symbols() {
        let _ = write!(out, "symbol {}", sym.name());
        if let Some(c) = sym.class_tag().filter(|c| reg.has_class(c)) {
            let _ = write!(out, " : {c}");
            let props: Vec<&str> = sym.properties().iter().map(|p| &**p).collect();
            if !props.is_empty() {
                let _ = write!(out, " {}", props.join(", "));
            }
        }
        out.push('\n');
    }
    out
}

/// Reads and parses a signature file.
pub fn load_signature(path: &std::path::Path) -> Result<Registry> {
    parse_signature(&std::fs::read_to_string(path)?)
}
