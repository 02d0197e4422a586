use thiserror::Error;

use super::{Formula, Schema, Signature, FALSUM_TOKEN};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
    Arity { symbol: String, expected: usize },
    /// An unparenthesized chain such as `p | q | r`.
    Ambiguous,
    UnexpectedMeta(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {}", describe(.kind))]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(m) => m.clone(),
        ParseErrorKind::UnknownSymbol(s) => format!("unknown symbol `{s}`"),
        ParseErrorKind::Arity { symbol, expected } => {
            format!("connective `{symbol}` expects {expected} argument(s)")
        }
        ParseErrorKind::Ambiguous => {
            "ambiguous chain of binary connectives, parentheses required".to_string()
        }
        ParseErrorKind::UnexpectedMeta(m) => format!("metavariable ?{m} not allowed here"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Falsum,
    Ident(String),
    Meta(String),
    Sym(String),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut out = Vec::new();
        while let Some((pos, tok)) = self.next_token()? {
            out.push((pos, tok));
        }
        Ok(out)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn word(&mut self) -> String {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += len;
        rest[..len].to_string()
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
        let start = self.pos;
        let Some(c) = trimmed.chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '(' => {
                self.pos += 1;
                Tok::LParen
            }
            ')' => {
                self.pos += 1;
                Tok::RParen
            }
            ',' => {
                self.pos += 1;
                Tok::Comma
            }
            '?' => {
                self.pos += 1;
                let w = self.word();
                if !w.starts_with(|ch: char| ch.is_ascii_alphabetic()) {
                    return Err(ParseError {
                        pos: start,
                        kind: ParseErrorKind::Syntax("expected metavariable name after `?`".into()),
                    });
                }
                Tok::Meta(w)
            }
            _ if trimmed.starts_with(FALSUM_TOKEN) => {
                self.pos += FALSUM_TOKEN.len();
                Tok::Falsum
            }
            _ if c.is_ascii_alphabetic() => {
                let w = self.word();
                if self.sig.by_symbol(&w).is_some() {
                    Tok::Sym(w)
                } else {
                    Tok::Ident(w)
                }
            }
            _ => {
                let best = self
                    .sig
                    .connectives()
                    .iter()
                    .map(|k| k.symbol.as_str())
                    .filter(|s| !s.starts_with(|ch: char| ch.is_ascii_alphanumeric()))
                    .filter(|s| trimmed.starts_with(s))
                    .max_by_key(|s| s.len());
                match best {
                    Some(s) => {
                        self.pos += s.len();
                        Tok::Sym(s.to_string())
                    }
                    None => {
                        let bad: String = trimmed
                            .chars()
                            .take_while(|ch| !ch.is_whitespace() && !"(),".contains(*ch))
                            .collect();
                        let bad = if bad.is_empty() { c.to_string() } else { bad };
                        return Err(ParseError {
                            pos: start,
                            kind: ParseErrorKind::UnknownSymbol(bad),
                        });
                    }
                }
            }
        };
        Ok(Some((start, tok)))
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    sig: &'a Signature,
    allow_meta: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos(), kind }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Syntax(format!("expected {what}"))))
        }
    }

    /// primary [BINSYM primary]
    fn top(&mut self) -> Result<Schema, ParseError> {
        let lhs = self.primary()?;
        let Some(Tok::Sym(s)) = self.peek().cloned() else {
            return Ok(lhs);
        };
        let conn = self.sig.by_symbol(&s).expect("lexer only emits known symbols");
        if conn.arity != 2 {
            return Err(self.err(ParseErrorKind::Syntax(format!(
                "connective `{s}` cannot be used infix"
            ))));
        }
        let name = conn.name.clone();
        self.idx += 1;
        let rhs = self.primary()?;
        if let Some(Tok::Sym(s2)) = self.peek() {
            if self.sig.by_symbol(s2).is_some_and(|k| k.arity == 2) {
                return Err(self.err(ParseErrorKind::Ambiguous));
            }
        }
        Ok(Schema::Compound(name, vec![lhs, rhs]))
    }

    fn primary(&mut self) -> Result<Schema, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err(ParseErrorKind::Syntax("unexpected end of input".into())));
        };
        self.idx += 1;
        match tok {
            Tok::Ident(v) => Ok(Schema::Var(v)),
            Tok::Falsum => Ok(Schema::Falsum),
            Tok::Meta(m) => {
                if self.allow_meta {
                    Ok(Schema::Meta(m))
                } else {
                    Err(ParseError {
                        pos,
                        kind: ParseErrorKind::UnexpectedMeta(m),
                    })
                }
            }
            Tok::LParen => {
                let inner = self.top()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Sym(s) => {
                let conn = self.sig.by_symbol(&s).expect("known symbol");
                let name = conn.name.clone();
                match conn.arity {
                    1 => Ok(Schema::Compound(name, vec![self.primary()?])),
                    2 => Err(ParseError {
                        pos,
                        kind: ParseErrorKind::Arity {
                            symbol: s,
                            expected: 2,
                        },
                    }),
                    n => {
                        self.expect(Tok::LParen, "`(` after n-ary connective")?;
                        let mut args = vec![self.top()?];
                        while self.peek() == Some(&Tok::Comma) {
                            self.idx += 1;
                            args.push(self.top()?);
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        if args.len() != n {
                            return Err(ParseError {
                                pos,
                                kind: ParseErrorKind::Arity {
                                    symbol: s,
                                    expected: n,
                                },
                            });
                        }
                        Ok(Schema::Compound(name, args))
                    }
                }
            }
            Tok::RParen | Tok::Comma => Err(ParseError {
                pos,
                kind: ParseErrorKind::Syntax("expected a formula".into()),
            }),
        }
    }
}

fn parse_with(text: &str, sig: &Signature, allow_meta: bool) -> Result<Schema, ParseError> {
    let toks = Lexer { src: text, pos: 0, sig }.tokens()?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: text.len(),
        sig,
        allow_meta,
    };
    let f = p.top()?;
    if p.idx < p.toks.len() {
        return Err(p.err(ParseErrorKind::Syntax("trailing input".into())));
    }
    Ok(f)
}

/// Parses a formula. Binary compounds need parentheses except at top level.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let s = parse_with(text, sig, false)?;
    Ok(s.to_formula().expect("no metavariables"))
}

/// Parses a schema formula; metavariables are written `?A`.
pub fn parse_schema(text: &str, sig: &Signature) -> Result<Schema, ParseError> {
    parse_with(text, sig, true)
}

/// Splits `text` at commas outside parentheses, returning each piece with its
/// byte offset.
pub fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}
