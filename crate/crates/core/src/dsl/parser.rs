use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{tokenize, Tok, Token};
use super::{Declaration, Diagnostic, DiagnosticKind, Location, ParseErrors, UniverseDocument};
use crate::model::{Universe, UniverseBuilder};

struct Line<'a> {
    no: usize,
    toks: &'a [Token],
    pos: usize,
    /// Column just past the last character, for end-of-line diagnostics.
    end: usize,
}

impl<'a> Line<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn syntax(&self, at: Option<&Token>, message: impl Into<String>) -> Diagnostic {
        let (column, token) = match at {
            Some(t) => (t.column, t.tok.text()),
            None => (self.end, String::new()),
        };
        Diagnostic {
            kind: DiagnosticKind::Syntax,
            line: self.no,
            column,
            token,
            message: message.into(),
        }
    }

    fn semantic(&self, at: &Token, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            kind: DiagnosticKind::Semantic,
            line: self.no,
            column: at.column,
            token: at.tok.text(),
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<&'a Token, Diagnostic> {
        match self.bump() {
            Some(t) if t.tok == want => Ok(t),
            other => Err(self.syntax(other, format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(&'a Token, &'a str), Diagnostic> {
        match self.bump() {
            Some(
                t @ Token {
                    tok: Tok::Ident(s), ..
                },
            ) => Ok((t, s.as_str())),
            other => Err(self.syntax(other, format!("expected {what}"))),
        }
    }

    fn finish(&mut self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.syntax(Some(t), "unexpected token after declaration")),
        }
    }

    fn loc(&self, t: &Token) -> Location {
        Location {
            line: self.no,
            column: t.column,
        }
    }
}

struct State {
    builder: UniverseBuilder,
    universe_name: Option<String>,
    locations: BTreeMap<Declaration, Location>,
    diagnostics: Vec<Diagnostic>,
}

/// Parses and validates a universe description.
///
/// Each line is checked independently, so one call reports every bad line.
pub fn parse_universe(text: &str) -> Result<UniverseDocument, ParseErrors> {
    let mut st = State {
        builder: Universe::builder(None),
        universe_name: None,
        locations: BTreeMap::new(),
        diagnostics: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        let mut line = Line {
            no: i + 1,
            toks: &toks,
            pos: 0,
            end: raw.chars().count() + 1,
        };
        if let Err(d) = declaration(&mut line, &mut st) {
            st.diagnostics.push(d);
        }
    }
    if !st.diagnostics.is_empty() {
        return Err(ParseErrors(st.diagnostics));
    }
    // The name is only known once every line has been read.
    let mut named = Universe::builder(st.universe_name.as_deref());
    let built = st.builder.build();
    for o in built.objects() {
        named.declare_object(o.symbol()).expect("already unique");
    }
    for c in built.concepts() {
        named
            .concept(c.name(), c.members().map(|o| o.symbol()))
            .expect("already validated");
    }
    for (name, r) in built.relations() {
        named
            .relation(name, r.pairs().map(|(s, t)| (s.symbol(), t.symbol())))
            .expect("already validated");
    }
    Ok(UniverseDocument {
        source: text.to_owned(),
        universe: named.build(),
        locations: st.locations,
    })
}

fn declaration(line: &mut Line<'_>, st: &mut State) -> Result<(), Diagnostic> {
    let (kw, word) = line.ident("a declaration keyword")?;
    match word {
        "universe" => {
            let (t, name) = line.ident("a universe name")?;
            line.finish()?;
            if st.universe_name.is_some() {
                return Err(line.semantic(t, "universe is already named"));
            }
            st.universe_name = Some(name.to_owned());
            st.locations.insert(Declaration::Universe, line.loc(kw));
            Ok(())
        }
        "object" => {
            let mut names = Vec::new();
            while line.peek().is_some() {
                names.push(line.ident("an object name")?);
            }
            if names.is_empty() {
                return Err(line.syntax(None, "expected at least one object name"));
            }
            // declare what we can and report the first duplicate
            let mut first_err = None;
            for (t, name) in names {
                if st.builder.declare_object(name).is_err() {
                    first_err.get_or_insert_with(|| {
                        line.semantic(t, format!("object `{name}` is already declared"))
                    });
                } else {
                    st.locations
                        .insert(Declaration::Object(name.to_owned()), line.loc(t));
                }
            }
            first_err.map_or(Ok(()), Err)
        }
        "concept" => {
            let (t, name) = line.ident("a concept name")?;
            line.expect(Tok::Equals, "`=`")?;
            line.expect(Tok::LBrace, "`{`")?;
            let mut members = Vec::new();
            loop {
                match line.peek() {
                    Some(Token {
                        tok: Tok::RBrace, ..
                    }) => {
                        line.bump();
                        break;
                    }
                    _ => members.push(line.ident("an object name or `}`")?),
                }
            }
            line.finish()?;
            if st.builder.has_concept(name) {
                return Err(line.semantic(t, format!("concept `{name}` is already declared")));
            }
            let mut seen = BTreeSet::new();
            for &(mt, m) in &members {
                check_object(line, st, mt, m)?;
                if !seen.insert(m) {
                    return Err(line.semantic(mt, format!("`{m}` is listed twice")));
                }
            }
            st.builder
                .concept(name, members.iter().map(|&(_, m)| m))
                .expect("checked above");
            st.locations
                .insert(Declaration::Concept(name.to_owned()), line.loc(t));
            Ok(())
        }
        "relation" => {
            let (t, name) = line.ident("a relation name")?;
            line.expect(Tok::Equals, "`=`")?;
            line.expect(Tok::LBrace, "`{`")?;
            let mut pairs = Vec::new();
            loop {
                match line.bump() {
                    Some(Token {
                        tok: Tok::RBrace, ..
                    }) => break,
                    Some(
                        open @ Token {
                            tok: Tok::LParen, ..
                        },
                    ) => {
                        let s = line.ident("a source object")?;
                        line.expect(Tok::Comma, "`,`")?;
                        let d = line.ident("a target object")?;
                        line.expect(Tok::RParen, "`)`")?;
                        pairs.push((open, s, d));
                    }
                    other => return Err(line.syntax(other, "expected `(` or `}`")),
                }
            }
            line.finish()?;
            if st.builder.has_relation(name) {
                return Err(line.semantic(t, format!("relation `{name}` is already declared")));
            }
            let mut seen = BTreeSet::new();
            for &(open, (st_tok, s), (dt_tok, d)) in &pairs {
                check_object(line, st, st_tok, s)?;
                check_object(line, st, dt_tok, d)?;
                if !seen.insert((s, d)) {
                    return Err(line.semantic(open, format!("pair ({s},{d}) is listed twice")));
                }
            }
            st.builder
                .relation(name, pairs.iter().map(|&(_, (_, s), (_, d))| (s, d)))
                .expect("checked above");
            st.locations
                .insert(Declaration::Relation(name.to_owned()), line.loc(t));
            Ok(())
        }
        _ => Err(line.syntax(
            Some(kw),
            "expected `universe`, `object`, `concept` or `relation`",
        )),
    }
}

fn check_object(line: &Line<'_>, st: &State, t: &Token, name: &str) -> Result<(), Diagnostic> {
    if st.builder.lookup(name).is_some() {
        Ok(())
    } else {
        Err(line.semantic(t, format!("object `{name}` is not declared")))
    }
}
