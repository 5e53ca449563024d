//! Saving and loading compiled many-to-one nets.
//!
//! A net file holds the magic line `TMNET1` followed by three sections,
//! each introduced by `<name> <byte length>` on its own line:
//!
//! * `signature`: the registry in signature-file syntax;
//! * `patterns`: one pattern per line, `expression | constraint | ...`;
//! * `states`: the state table of the compiled net.
//!
//! Loading rebuilds the net from the signature and patterns and rejects the
//! file unless the rebuilt state table is identical to the stored one, so a
//! loaded net never disagrees with its patterns.

use std::io::{Read, Write};
use std::path::Path;

use super::ManyToOneMatcher;
use crate::constraint_expr::parse_constraint;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::registry::Registry;
use crate::signature_file::{parse_signature, render_signature};
use crate::syntax::parse_term;

const MAGIC: &str = "TMNET1";

fn pattern_line(p: &Pattern) -> Result<String> {
    let mut line = p.expression().to_string();
    for c in p.constraints() {
        let src = c.source().ok_or_else(|| {
            Error::UnsupportedPattern(format!(
                "a constraint of `{}` was given as a closure and cannot be saved",
                p.expression()
            ))
        })?;
        line.push_str(" | ");
        line.push_str(src);
    }
    Ok(line)
}

/// Serializes `matcher` together with the signature it was built against.
pub fn to_bytes(matcher: &ManyToOneMatcher, registry: &Registry) -> Result<Vec<u8>> {
    let signature = render_signature(registry);
    let patterns = matcher
        .patterns()
        .iter()
        .map(|p| pattern_line(p).map(|l| l + "\n"))
        .collect::<Result<String>>()?;
    let states = matcher.dump();
    let mut out = format!("{MAGIC}\n");
    for (name, body) in [("signature", &signature), ("patterns", &patterns), ("states", &states)] {
        out.push_str(&format!("{name} {}\n", body.len()));
        out.push_str(body);
    }
    let bytes = out.into_bytes();
    // refuse to write what could not be read back
    from_bytes(&bytes).map_err(|e| {
        Error::UnsupportedPattern(format!(
            "the net does not survive a save/load round trip ({e}); operations and symbol \
             classes used by the patterns must be declared in the registry"
        ))
    })?;
    Ok(bytes)
}

struct Reader<'a> {
    text: &'a str,
}

impl<'a> Reader<'a> {
    fn line(&mut self) -> Result<&'a str> {
        let (line, rest) = self
            .text
            .split_once('\n')
            .ok_or_else(|| Error::NetFormat("unexpected end of file".into()))?;
        self.text = rest;
        Ok(line)
    }

    fn section(&mut self, name: &str) -> Result<&'a str> {
        let header = self.line()?;
        let len: usize = header
            .strip_prefix(name)
            .and_then(|r| r.strip_prefix(' '))
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::NetFormat(format!("expected `{name} <length>`, found `{header}`")))?;
        if len > self.text.len() || !self.text.is_char_boundary(len) {
            return Err(Error::NetFormat(format!("section `{name}` is truncated")));
        }
        let (body, rest) = self.text.split_at(len);
        self.text = rest;
        Ok(body)
    }
}

/// Reads a net written by [`to_bytes`], returning its registry and matcher.
pub fn from_bytes(bytes: &[u8]) -> Result<(Registry, ManyToOneMatcher)> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::NetFormat("file is not UTF-8".into()))?;
    let mut r = Reader { text };
    if r.line()? != MAGIC {
        return Err(Error::NetFormat(format!("missing `{MAGIC}` header")));
    }
    let signature = r.section("signature")?;
    let patterns = r.section("patterns")?;
    let states = r.section("states")?;
    if !r.text.is_empty() {
        return Err(Error::NetFormat("trailing data after the state table".into()));
    }
    let invalid = |what: &str, e: Error| Error::NetFormat(format!("{what}: {e}"));
    let registry = parse_signature(signature).map_err(|e| invalid("signature", e))?;
    let mut matcher = ManyToOneMatcher::new();
    for line in patterns.lines() {
        let mut pieces = line.split(" | ");
        let expr = parse_term(pieces.next().unwrap_or(""), &registry).map_err(|e| invalid("pattern", e))?;
        let mut p = Pattern::new(expr).map_err(|e| invalid("pattern", e))?;
        for c in pieces {
            let c = parse_constraint(c).map_err(|e| invalid("constraint", e))?;
            p = p.with_constraint(c).map_err(|e| invalid("constraint", e))?;
        }
        matcher.add(p);
    }
    if matcher.dump() != states {
        return Err(Error::NetFormat(
            "stored state table does not match the net rebuilt from its patterns".into(),
        ));
    }
    Ok((registry, matcher))
}

pub fn save(matcher: &ManyToOneMatcher, registry: &Registry, w: &mut impl Write) -> Result<()> {
    w.write_all(&to_bytes(matcher, registry)?)?;
    Ok(())
}

pub fn load(r: &mut impl Read) -> Result<(Registry, ManyToOneMatcher)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

pub fn save_file(matcher: &ManyToOneMatcher, registry: &Registry, path: &Path) -> Result<()> {
    std::fs::write(path, to_bytes(matcher, registry)?)?;
    Ok(())
}

pub fn load_file(path: &Path) -> Result<(Registry, ManyToOneMatcher)> {
    from_bytes(&std::fs::read(path)?)
}
