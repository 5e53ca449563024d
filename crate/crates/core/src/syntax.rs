//! Textual term syntax.
//!
//! ```text
//! term     := ident '(' [term (',' term)*] ')'     application
//!           | ident | integer                      symbol
//!           | [ident] '_' ['_' ['_']] [':' ident]  dot / plus / star wildcard
//! ident    := [A-Za-z][A-Za-z0-9]*
//! integer  := '-'? [0-9]+
//! ```
//!
//! Whitespace is insignificant. A class restriction (`A_:Matrix`) is only
//! allowed on dot wildcards.

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::term::{Term, Wildcard, WildcardKind};

/// Parses and canonicalizes a term, resolving operations and symbols
/// through `registry`.
pub fn parse_term(src: &str, registry: &Registry) -> Result<Term> {
    let mut p = Parser::new(src, registry);
    p.skip_ws();
    let t = p.term()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

/// Formats a term in the syntax accepted by [`parse_term`].
pub fn format_term(t: &Term) -> String {
    t.to_string()
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    registry: &'a Registry,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, registry: &'a Registry) -> Self {
        Parser { src, pos: 0, registry }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !c.is_ascii_alphanumeric())
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(&rest[..end])
    }

    fn integer(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - sign);
        if digits == 0 {
            return None;
        }
        self.pos += sign + digits;
        Some(&rest[..sign + digits])
    }

    pub(crate) fn term(&mut self) -> Result<Term> {
        let start = self.pos;
        if let Some(num) = self.integer() {
            return Ok(self.registry.symbol(num));
        }
        let name = self.ident();
        if self.peek() == Some('_') {
            return self.wildcard(name);
        }
        let Some(name) = name else {
            return Err(self.error("expected a term"));
        };
        self.skip_ws();
        if !self.eat('(') {
            return Ok(self.registry.symbol(name));
        }
        let op = self.registry.operation_or_default(name);
        let mut args = Vec::new();
        self.skip_ws();
        if !self.eat(')') {
            loop {
                self.skip_ws();
                args.push(self.term()?);
                self.skip_ws();
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Term::app(&op, args).map_err(|e| {
            self.pos = start;
            self.error(e.to_string())
        })
    }

    fn wildcard(&mut self, name: Option<&str>) -> Result<Term> {
        let count = self.rest().chars().take_while(|&c| c == '_').count();
        let kind = match count {
            1 => WildcardKind::Dot,
            2 => WildcardKind::Plus,
            3 => WildcardKind::Star,
            _ => return Err(self.error("a wildcard has one to three underscores")),
        };
        self.pos += count;
        if self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            return Err(self.error("unexpected character after wildcard"));
        }
        let save = self.pos;
        self.skip_ws();
        if self.eat(':') {
            if kind != WildcardKind::Dot {
                return Err(self.error("only dot wildcards can be class restricted"));
            }
            self.skip_ws();
            let class = self
                .ident()
                .ok_or_else(|| self.error("expected a class name"))?;
            return Ok(Term::wildcard(Wildcard::symbol(name, class)));
        }
        self.pos = save;
        Ok(Term::wildcard(Wildcard::new(kind, name)))
    }
}
