//! Line-oriented net files.
//!
//! ```text
//! # comments run to the end of the line
//! net ping-pong
//! place p1 init 1
//! place p2
//! trans a in p1 out p2
//! trans b in p2 out p1
//! ```
//!
//! `trans` lines may also carry `inhibit <place> ...`. Places and transitions
//! share one namespace and keep their declaration order.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::net::{Net, NetBuilder};

const KEYWORDS: [&str; 7] = ["net", "place", "trans", "init", "in", "out", "inhibit"];

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Parser {
    builder: NetBuilder,
    name: Option<String>,
    declared: HashMap<String, (usize, usize)>,
    places: HashSet<String>,
    uses: Vec<(String, usize, usize)>,
}

impl Parser {
    fn identifier(&mut self, tok: &Token<'_>, line: usize) -> Result<String> {
        if KEYWORDS.contains(&tok.text) {
            return Err(error(
                line,
                tok.column,
                format!("keyword `{}` used as identifier", tok.text),
            ));
        }
        if let Some((l, c)) = self.declared.get(tok.text) {
            return Err(error(
                line,
                tok.column,
                format!("duplicate identifier `{}` (first declared at {l}:{c})", tok.text),
            ));
        }
        self.declared.insert(tok.text.to_string(), (line, tok.column));
        Ok(tok.text.to_string())
    }

    fn net_line(&mut self, toks: &[Token<'_>], line: usize) -> Result<()> {
        if self.name.is_some() {
            return Err(error(line, toks[0].column, "second `net` line"));
        }
        match toks {
            [_, name] => {
                self.name = Some(name.text.to_string());
                Ok(())
            }
            [kw] => Err(error(line, kw.column + kw.text.len(), "expected a net name")),
            [_, _, extra, ..] => Err(error(line, extra.column, format!("unexpected `{}`", extra.text))),
            [] => unreachable!(),
        }
    }

    fn place_line(&mut self, toks: &[Token<'_>], line: usize) -> Result<()> {
        let Some(id) = toks.get(1) else {
            return Err(error(line, toks[0].column + 5, "expected a place identifier"));
        };
        let name = self.identifier(id, line)?;
        let tokens = match &toks[2..] {
            [] => 0,
            [kw, n] if kw.text == "init" => {
                if n.text.starts_with('-') {
                    return Err(error(line, n.column, "negative initial tokens"));
                }
                n.text
                    .parse::<u32>()
                    .map_err(|_| error(line, n.column, format!("invalid token count `{}`", n.text)))?
            }
            [kw] if kw.text == "init" => return Err(error(line, kw.column + 4, "expected a token count after `init`")),
            [other, ..] => return Err(error(line, other.column, format!("unexpected `{}`", other.text))),
        };
        self.places.insert(name.clone());
        self.builder.add_place(name, tokens);
        Ok(())
    }

    fn trans_line(&mut self, toks: &[Token<'_>], line: usize) -> Result<()> {
        let Some(id) = toks.get(1) else {
            return Err(error(line, toks[0].column + 5, "expected a transition identifier"));
        };
        let name = self.identifier(id, line)?;
        let mut lists: [Vec<String>; 3] = Default::default();
        let mut current: Option<usize> = None;
        for tok in &toks[2..] {
            match tok.text {
                "in" => current = Some(0),
                "out" => current = Some(1),
                "inhibit" => current = Some(2),
                text => {
                    let Some(slot) = current else {
                        return Err(error(
                            line,
                            tok.column,
                            format!("expected `in`, `out` or `inhibit`, found `{text}`"),
                        ));
                    };
                    self.uses.push((text.to_string(), line, tok.column));
                    lists[slot].push(text.to_string());
                }
            }
        }
        let [inputs, outputs, inhibitors] = lists;
        self.builder.add_transition(name, &inputs, &outputs, &inhibitors);
        Ok(())
    }
}

/// Parses a net file.
pub fn parse_net(text: &str) -> Result<Net> {
    let mut p = Parser {
        builder: NetBuilder::new(""),
        name: None,
        declared: HashMap::new(),
        places: HashSet::new(),
        uses: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(head) = toks.first() else { continue };
        match head.text {
            "net" => p.net_line(&toks, line)?,
            "place" => p.place_line(&toks, line)?,
            "trans" => p.trans_line(&toks, line)?,
            other => {
                return Err(error(
                    line,
                    head.column,
                    format!("expected `net`, `place` or `trans`, found `{other}`"),
                ))
            }
        }
    }
    // arcs may name places declared further down; check once everything is known
    for (name, line, column) in &p.uses {
        if !p.places.contains(name) {
            return Err(error(*line, *column, format!("unknown place `{name}`")));
        }
    }
    let mut builder = p.builder;
    builder.set_name(p.name.unwrap_or_else(|| "net".to_string()));
    builder.build()
}

/// Renders a net in the file format; [`parse_net`] reads it back unchanged.
pub fn print_net(net: &Net) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "net {}", net.name());
    for (i, p) in net.places().iter().enumerate() {
        match net.initial()[i] {
            0 => {
                let _ = writeln!(s, "place {p}");
            }
            n => {
                let _ = writeln!(s, "place {p} init {n}");
            }
        }
    }
    for t in net.transition_ids() {
        s.push_str("trans ");
        s.push_str(net.transition_name(t));
        let places = |v: &[u32]| -> Vec<&str> {
            v.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, _)| net.places()[i].as_str())
                .collect()
        };
        let inhibitors: Vec<&str> = net.inhibitors(t).iter().map(|&i| net.places()[i].as_str()).collect();
        for (kw, list) in [
            ("in", places(net.pre(t))),
            ("out", places(net.post(t))),
            ("inhibit", inhibitors),
        ] {
            if !list.is_empty() {
                let _ = write!(s, " {kw} {}", list.join(" "));
            }
        }
        s.push('\n');
    }
    s
}
